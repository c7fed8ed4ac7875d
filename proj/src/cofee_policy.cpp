// Copyright 2026 The CoFEE Simulator Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cofee/cofee_policy.hpp"

#include <algorithm>
#include <stdexcept>

namespace cofee {

namespace {

constexpr Seconds kBoundarySlack = 1e-6;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

CofeePolicy::CofeePolicy(const Scenario& scenario) {
  const Topology& topo = scenario.topology;
  for (ResourceId f : topo.fogs()) {
    fogs_.emplace(f, FogScheduler(f, topo.children(f),
                                  scenario.oversubscription_of(f)));
  }
  clouds_ = topo.clouds();
}

FogContext CofeePolicy::context(const Simulation& sim) const {
  return FogContext{sim.topology(), sim.network(), sim.billing(),
                    sim.master().bid_timeout};
}

void CofeePolicy::on_start(Simulation& sim) {
  const MasterConfig& m = sim.master();
  for (auto& [id, fog] : fogs_) {
    reports_[id] = FogReport{
        id, sim.now(), fog.calendar().top_free_slots(m.report_slots,
                                                     m.report_horizon)};
    sim.schedule(sim.now() + m.report_period,
                 ev::FreeSlotReport{FogReport{id, sim.now(), {}}, false});
  }
}

void CofeePolicy::on_task_ready(Simulation& sim, TaskRef task,
                                const MicroBatchMeta& input) {
  if (!sim.alive(input.location)) {
    sim.fail_pipeline(task.pipeline, "input-lost");
    return;
  }
  Inquiry inq;
  inq.id = InquiryId{next_inquiry_++};
  inq.task = task.key();
  inq.theta = sim.task(task).theta;
  inq.sub_deadline = sim.sub_deadline(task);
  inq.input = input;
  inq.issued_at = sim.now();

  std::vector<FogReport> reports;
  reports.reserve(reports_.size());
  for (const auto& [id, r] : reports_) reports.push_back(r);
  const auto candidates = select_candidate_fogs(inq, reports, sim.topology(),
                                                sim.master().fanout);

  OpenInquiry& open = inquiries_[inq.id];
  open.inquiry = inq;
  open.task = task;
  open.asked = candidates.size();
  if (candidates.empty()) {
    select(sim, open);
    return;
  }
  // The bid window leaves room for the accept message, so an accepted worker
  // holds its input no later than issue + t_inq.
  Seconds accept_latency = 0.0;
  for (ResourceId f : candidates) {
    const Seconds lat = sim.control_latency(sim.master_host(), f);
    accept_latency = std::max(accept_latency, lat);
    sim.schedule(sim.now() + lat, ev::InquiryDelivered{f, inq.id});
  }
  const Seconds timeout =
      sim.now() + std::max(0.0, sim.master().bid_timeout - accept_latency);
  sim.schedule(timeout, ev::SelectionTimeout{inq.id});
}

void CofeePolicy::on_event(Simulation& sim, const EventPayload& payload) {
  std::visit(
      Overloaded{
          [&](const ev::InquiryDelivered& e) { on_inquiry(sim, e); },
          [&](const ev::BidDelivered& e) { on_bid(sim, e); },
          [&](const ev::SelectionTimeout& e) {
            OpenInquiry& open = inquiries_.at(e.inquiry);
            if (!open.closed) select(sim, open);
          },
          [&](const ev::AcceptDelivered& e) { on_accept(sim, e); },
          [&](const ev::RejectDelivered& e) { on_reject(sim, e); },
          [&](const ev::SlotTimerFired& e) { on_slot_timer(sim, e); },
          [&](const ev::FreeSlotReport& e) { on_report(sim, e); },
          [&](const auto&) {},
      },
      payload);
}

void CofeePolicy::on_inquiry(Simulation& sim, const ev::InquiryDelivered& e) {
  const Inquiry& inq = inquiries_.at(e.inquiry).inquiry;
  FogScheduler& fog = fogs_.at(e.fog);
  fog.calendar().advance(sim.now());
  std::vector<ReservationId> moved;
  Bid bid = fog.compute_bid(inq, context(sim), &moved);
  reschedule_moved(sim, e.fog, moved);
  sim.schedule(sim.now() + sim.control_latency(e.fog, sim.master_host()),
               ev::BidDelivered{std::move(bid)});
}

void CofeePolicy::on_bid(Simulation& sim, const ev::BidDelivered& e) {
  OpenInquiry& open = inquiries_.at(e.bid.inquiry);
  if (open.closed) {
    if (e.bid.reservation) send_reject(sim, e.bid);
    return;
  }
  open.bids.push_back(e.bid);
  if (open.bids.size() == open.asked) select(sim, open);
}

void CofeePolicy::send_reject(Simulation& sim, const Bid& bid) {
  sim.schedule(sim.now() + sim.control_latency(sim.master_host(), bid.bidder),
               ev::RejectDelivered{bid.bidder, *bid.reservation});
}

ResourceId CofeePolicy::pick_cloud(const MicroBatchMeta& input) {
  if (std::find(clouds_.begin(), clouds_.end(), input.location) !=
      clouds_.end()) {
    return input.location;
  }
  return clouds_[next_cloud_ % clouds_.size()];
}

void CofeePolicy::select(Simulation& sim, OpenInquiry& open) {
  open.closed = true;
  std::vector<Bid> bids = std::move(open.bids);
  open.bids.clear();
  const TaskRef task = open.task;
  const Inquiry& inq = open.inquiry;

  const bool live = sim.task_open(task) && sim.alive(inq.input.location);
  const ResourceId cloud = pick_cloud(inq.input);
  bids.push_back(cloud_bid(inq, sim.topology().at(cloud), sim.now(),
                           sim.topology(), sim.network(), sim.billing()));
  const SelectionOutcome out = run_selection(bids);
  for (std::size_t i : out.rejected) send_reject(sim, bids[i]);

  if (!live || !out.winner) {
    if (out.winner && bids[*out.winner].reservation) {
      send_reject(sim, bids[*out.winner]);
    }
    sim.fail_pipeline(task.pipeline, live ? "no-viable-bid" : "input-lost");
    return;
  }
  const Bid& win = bids[*out.winner];
  sim.task_scheduled(task);
  if (win.kind == BidKind::Cloud) {
    if (cloud != inq.input.location) ++next_cloud_;
    const Seconds arrival = sim.transfer(task, inq.input, cloud);
    sim.execute(task, cloud, arrival);
    return;
  }
  sim.schedule(sim.now() + sim.control_latency(sim.master_host(), win.bidder),
               ev::AcceptDelivered{win.bidder, inq.id, *win.reservation});
}

void CofeePolicy::on_accept(Simulation& sim, const ev::AcceptDelivered& e) {
  FogScheduler& fog = fogs_.at(e.fog);
  fog.calendar().advance(sim.now());
  const Assignment a = fog.on_accept(e.handle);
  const TaskRef task = TaskRef::from_key(a.inquiry.task);
  const MicroBatchMeta& input = a.inquiry.input;

  if (!sim.task_open(task) || !sim.alive(input.location)) {
    fog.calendar().release(e.handle);
    if (a.kind == AssignmentKind::EdgeWithBackup) fog.on_edge_released(a.worker);
    sim.fail_pipeline(task.pipeline, "input-lost");
    return;
  }

  // The input always passes through the fog, which keeps a copy for a
  // possible re-execution.
  if (a.kind == AssignmentKind::EdgeWithBackup && sim.alive(a.worker)) {
    const Seconds arrival = sim.transfer(task, input, a.worker);
    sim.execute(task, a.worker, arrival);
  } else {
    sim.transfer(task, input, e.fog);
  }
  placements_[task.key()] = Placement{e.fog, a.kind, a.worker, e.handle};
  slot_tasks_[{e.fog, e.handle}] = task.key();
  const Seconds start = fog.calendar().get(e.handle).start;
  sim.schedule(std::max(start, sim.now()),
               ev::SlotTimerFired{e.fog, e.handle, start});
}

void CofeePolicy::on_reject(Simulation& sim, const ev::RejectDelivered& e) {
  FogScheduler& fog = fogs_.at(e.fog);
  fog.calendar().advance(sim.now());
  fog.on_reject(e.handle);
}

void CofeePolicy::reschedule_moved(Simulation& sim, ResourceId fog,
                                   const std::vector<ReservationId>& moved) {
  const SlotCalendar& cal = fogs_.at(fog).calendar();
  for (ReservationId id : moved) {
    if (!slot_tasks_.contains({fog, id})) continue;  // no timer yet
    const Seconds start = cal.get(id).start;
    sim.schedule(std::max(start, sim.now()), ev::SlotTimerFired{fog, id, start});
  }
}

void CofeePolicy::on_slot_timer(Simulation& sim, const ev::SlotTimerFired& e) {
  auto it = slot_tasks_.find({e.fog, e.reservation});
  if (it == slot_tasks_.end()) return;
  FogScheduler& fog = fogs_.at(e.fog);
  fog.calendar().advance(sim.now());
  const Reservation& r = fog.calendar().get(e.reservation);
  if (r.start != e.start) return;  // superseded by a slide
  const TaskRef task = TaskRef::from_key(it->second);
  slot_tasks_.erase(it);
  Placement& pl = placements_.at(task.key());
  pl.slot_started = true;

  if (!sim.task_open(task)) {
    fog.calendar().release(e.reservation);
    placements_.erase(task.key());
    return;
  }
  if (auto until = sim.busy_until(e.fog)) {
    // Slot boundaries and execution ends are summed in different orders, so
    // a predecessor may finish an ulp after this slot opens.
    if (*until - sim.now() <= kBoundarySlack) {
      slot_tasks_.emplace(std::pair{e.fog, e.reservation}, task.key());
      pl.slot_started = false;
      sim.schedule(*until, e);
      return;
    }
    // Over-booked: another task holds the fog during this slot.
    fog.calendar().release(e.reservation);
    sim.fail_pipeline(task.pipeline, "fog-overbooked");
    if (pl.kind == AssignmentKind::FogDirect || !sim.alive(pl.worker)) {
      placements_.erase(task.key());
    }
    return;
  }
  if (pl.kind == AssignmentKind::EdgeWithBackup) sim.count_backup_execution();
  sim.execute(task, e.fog, sim.now());
}

void CofeePolicy::on_task_complete(Simulation& sim, const Execution& exec) {
  auto it = placements_.find(exec.task.key());
  if (it == placements_.end()) return;  // cloud placement
  Placement& pl = it->second;
  FogScheduler& fog = fogs_.at(pl.fog);
  fog.calendar().advance(sim.now());
  if (exec.tier == Tier::Edge) {
    if (!pl.slot_started) {
      fog.on_task_complete(exec.worker, pl.reservation);
      slot_tasks_.erase({pl.fog, pl.reservation});
      placements_.erase(it);
    } else {
      // The fog is already re-executing; it releases the slot when done.
      fog.on_edge_released(exec.worker);
    }
    return;
  }
  if (fog.calendar().contains(pl.reservation)) {
    fog.calendar().release(pl.reservation);
  }
  if (pl.kind == AssignmentKind::EdgeWithBackup && sim.alive(pl.worker) &&
      sim.busy(pl.worker)) {
    return;  // the edge attempt is still running; keep the record
  }
  placements_.erase(it);
}

void CofeePolicy::on_edge_failure(Simulation&, ResourceId edge,
                                  std::span<const ExecutionId>) {
  // Aborted edge work is covered by its backup slot, whose timer fires on
  // schedule. A dead edge never becomes a candidate again.
  for (auto& [id, fog] : fogs_) fog.on_edge_released(edge);
}

void CofeePolicy::on_report(Simulation& sim, const ev::FreeSlotReport& e) {
  const ResourceId id = e.report.fog;
  if (e.delivered) {
    reports_[id] = e.report;
    return;
  }
  const MasterConfig& m = sim.master();
  FogScheduler& fog = fogs_.at(id);
  fog.calendar().advance(sim.now());
  FogReport rep{id, sim.now(),
                fog.calendar().top_free_slots(m.report_slots, m.report_horizon)};
  sim.schedule(sim.now() + sim.control_latency(id, sim.master_host()),
               ev::FreeSlotReport{std::move(rep), true});
  if (!sim.winding_down()) {
    sim.schedule(sim.now() + m.report_period,
                 ev::FreeSlotReport{FogReport{id, sim.now(), {}}, false});
  }
}

void CofeePolicy::on_finish(Simulation&) {
  for (const auto& [id, fog] : fogs_) {
    if (fog.pending_bids() != 0) {
      throw std::logic_error("fog has unresolved bids at end of run");
    }
    for (const Reservation& r : fog.calendar().reservations()) {
      if (r.state == ReservationState::Temporary) {
        throw std::logic_error("temporary reservation leaked");
      }
    }
    fog.calendar().check_invariants();
  }
}

}  // namespace cofee
