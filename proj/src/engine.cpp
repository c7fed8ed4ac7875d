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

#include "cofee/engine.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <stdexcept>

namespace cofee {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool later(const SimEvent& a, const SimEvent& b) {
  if (a.time != b.time) return a.time > b.time;
  if (a.priority != b.priority) return a.priority > b.priority;
  return a.seq > b.seq;
}

std::string format(const char* fmt, auto... args) {
  const int n = std::snprintf(nullptr, 0, fmt, args...);
  std::string out(static_cast<std::size_t>(n), '\0');
  std::snprintf(out.data(), out.size() + 1, fmt, args...);
  return out;
}

std::string describe(const EventPayload& p) {
  return std::visit(
      Overloaded{
          [](const ev::MicroBatchGenerated& e) {
            return format("arrival=%zu", e.arrival);
          },
          [](const ev::QueryMatched& e) {
            return format("batch=%" PRIu64, e.batch.value);
          },
          [](const ev::TriggerDag& e) {
            return format("batch=%" PRIu64 " dag=%zu", e.batch.value, e.dag);
          },
          [](const ev::InquiryDelivered& e) {
            return format("fog=%u inquiry=%" PRIu64, e.fog.value,
                          e.inquiry.value);
          },
          [](const ev::BidDelivered& e) {
            return format("bidder=%u inquiry=%" PRIu64 " kind=%s kappa=%.17g",
                          e.bid.bidder.value, e.bid.inquiry.value,
                          std::string(to_string(e.bid.kind)).c_str(),
                          e.bid.kappa);
          },
          [](const ev::SelectionTimeout& e) {
            return format("inquiry=%" PRIu64, e.inquiry.value);
          },
          [](const ev::AcceptDelivered& e) {
            return format("fog=%u inquiry=%" PRIu64 " handle=%" PRIu64,
                          e.fog.value, e.inquiry.value, e.handle.value);
          },
          [](const ev::RejectDelivered& e) {
            return format("fog=%u handle=%" PRIu64, e.fog.value,
                          e.handle.value);
          },
          [](const ev::TransferComplete& e) {
            return format("pipeline=%u task=%u to=%u", e.task.pipeline.value,
                          e.task.index, e.to.value);
          },
          [](const ev::TaskStarted& e) {
            return format("exec=%" PRIu64, e.exec.value);
          },
          [](const ev::TaskCompleted& e) {
            return format("exec=%" PRIu64, e.exec.value);
          },
          [](const ev::EdgeFailed& e) {
            return format("edge=%u", e.edge.value);
          },
          [](const ev::SlotTimerFired& e) {
            return format("fog=%u reservation=%" PRIu64, e.fog.value,
                          e.reservation.value);
          },
          [](const ev::FreeSlotReport& e) {
            return format("fog=%u slots=%zu delivered=%d", e.report.fog.value,
                          e.report.slots.size(), e.delivered ? 1 : 0);
          },
          [](const ev::TaskNotified& e) {
            return format("pipeline=%u task=%u exec=%" PRIu64,
                          e.task.pipeline.value, e.task.index, e.exec.value);
          },
          [](const ev::PipelineDone& e) {
            return format("pipeline=%u", e.pipeline.value);
          },
      },
      p);
}

}  // namespace

std::string_view event_name(const EventPayload& p) {
  static constexpr std::string_view kNames[] = {
      "MicroBatchGenerated", "QueryMatched",     "TriggerDag",
      "InquiryDelivered",    "BidDelivered",     "SelectionTimeout",
      "AcceptDelivered",     "RejectDelivered",  "TransferComplete",
      "TaskStarted",         "TaskCompleted",    "EdgeFailed",
      "SlotTimerFired",      "FreeSlotReport",   "TaskNotified",
      "PipelineDone"};
  static_assert(std::size(kNames) == std::variant_size_v<EventPayload>);
  return kNames[p.index()];
}

int event_priority(const EventPayload& p) {
  if (std::holds_alternative<ev::TaskCompleted>(p)) return 0;
  if (std::holds_alternative<ev::TaskNotified>(p)) return 1;
  if (std::holds_alternative<ev::SlotTimerFired>(p)) return 3;
  return 2;
}

Simulation::Simulation(const Scenario& scenario, SchedulerPolicy& policy,
                       std::uint64_t seed, std::ostream* trace)
    : scenario_(scenario),
      policy_(policy),
      seed_(seed),
      trace_(trace),
      topo_(scenario.topology),
      queue_(later),
      jitter_rng_(substream(seed, "jitter")) {
  const auto clouds = topo_.clouds();
  if (clouds.empty()) throw ValidationError("topology has no cloud worker");
  master_host_ = clouds.front();
  for (const DagSpec& d : scenario_.dags) {
    queries_.register_query(d.filter);
    chains_.push_back(unroll(d));
  }
}

Seconds Simulation::control_latency(ResourceId from, ResourceId to) const {
  if (from == to) return 0.0;
  return scenario_.network.control_latency(topo_.at(from), topo_.at(to), topo_);
}

void Simulation::schedule(Seconds at, EventPayload payload) {
  if (at < now_) {
    throw std::logic_error("event scheduled in the past: " +
                           std::string(event_name(payload)));
  }
  const int prio = event_priority(payload);
  queue_.push(SimEvent{at, prio, next_seq_++, std::move(payload)});
}

void Simulation::trace(const std::string& line) {
  if (trace_) *trace_ << line << '\n';
}

bool Simulation::winding_down() const {
  return now_ >= scenario_.workload.duration && running_ == 0 && inflight_ == 0;
}

bool Simulation::task_open(TaskRef t) const {
  const PipelineInstance& p = pipeline(t.pipeline);
  return p.status() == PipelineStatus::Running && p.cursor() == t.index &&
         !finished_.contains(t.key());
}

MetricsReport Simulation::run() {
  record_ = RunRecord{};
  record_.policy = std::string(policy_.name());
  record_.seed = seed_;
  record_.duration = scenario_.workload.duration;

  const auto edges = topo_.edges();
  auto workload_rng = substream(seed_, "workload");
  arrivals_ = generate_arrivals(scenario_.workload, edges,
                                scenario_.dags.size(), workload_rng);
  for (std::size_t i = 0; i < arrivals_.size(); ++i) {
    schedule(arrivals_[i].time, ev::MicroBatchGenerated{i});
  }
  auto failure_rng = substream(seed_, "failures");
  for (const FailureEvent& f :
       inject_failures(edges, scenario_.workload.mtbf,
                       scenario_.workload.duration, failure_rng)) {
    schedule(f.time, ev::EdgeFailed{f.edge});
  }

  policy_.on_start(*this);
  while (!queue_.empty()) {
    SimEvent e = queue_.top();
    queue_.pop();
    now_ = e.time;
    dispatch(e);
  }
  policy_.on_finish(*this);

  for (const PipelineInstance& p : pipelines_) {
    record_.pipelines.push_back(p.status());
  }
  return summarize(record_);
}

void Simulation::dispatch(const SimEvent& e) {
  if (trace_) {
    trace(format("%.9f %s %s", now_, std::string(event_name(e.payload)).c_str(),
                 describe(e.payload).c_str()));
  }
  std::visit(Overloaded{
                 [&](const ev::MicroBatchGenerated& x) { handle(x); },
                 [&](const ev::QueryMatched& x) { handle(x); },
                 [&](const ev::TriggerDag& x) { handle(x); },
                 [&](const ev::TaskStarted& x) { handle(x); },
                 [&](const ev::TaskCompleted& x) { handle(x); },
                 [&](const ev::TaskNotified& x) { handle(x); },
                 [&](const ev::EdgeFailed& x) { handle(x); },
                 [&](const ev::PipelineDone& x) { handle(x); },
                 [&](const ev::TransferComplete&) {},
                 [&](const auto&) { policy_.on_event(*this, e.payload); },
             },
             e.payload);
}

void Simulation::handle(const ev::MicroBatchGenerated& e) {
  const Arrival& a = arrivals_.at(e.arrival);
  const Resource& edge = topo_.at(a.edge);
  if (!edge.alive) return;  // a dead edge produces no data
  ++record_.micro_batches;
  MicroBatchMeta mb;
  mb.id = MicroBatchId{next_batch_++};
  mb.sid = edge.name;
  mb.t_begin = std::max(0.0, now_ - scenario_.workload.window);
  mb.t_end = now_;
  mb.lat = edge.lat;
  mb.lon = edge.lon;
  mb.kv.emplace_back("topic", scenario_.dags.at(a.dag).id);
  mb.size = a.size;
  mb.location = a.edge;
  ++inflight_;
  schedule(now_ + control_latency(a.edge, *edge.partition),
           ev::QueryMatched{mb.id});
  batches_.emplace(mb.id, std::move(mb));
}

void Simulation::handle(const ev::QueryMatched& e) {
  --inflight_;
  auto it = batches_.find(e.batch);
  const MicroBatchMeta& mb = it->second;
  const Resource& host = topo_.at(mb.location);
  if (!host.alive) {
    ++record_.dropped_batches;
    batches_.erase(it);
    return;
  }
  const Seconds notify =
      now_ + control_latency(*host.partition, master_host_);
  for (const std::string& dag_id : queries_.match(mb)) {
    for (std::size_t d = 0; d < scenario_.dags.size(); ++d) {
      if (scenario_.dags[d].id == dag_id) {
        ++inflight_;
        schedule(notify, ev::TriggerDag{mb.id, d});
      }
    }
  }
}

void Simulation::handle(const ev::TriggerDag& e) {
  --inflight_;
  const MicroBatchMeta& mb = batches_.at(e.batch);
  const DagSpec& dag = scenario_.dags.at(e.dag);
  ++record_.dag_triggers;
  const auto trigger = static_cast<std::uint64_t>(triggers_.size());
  triggers_.push_back(TriggerInstance{now_, chains_[e.dag].size(), false, now_});
  std::vector<PipelineId> ids;
  for (const TaskChain& chain : chains_[e.dag]) {
    PipelineId id{static_cast<std::uint32_t>(pipelines_.size())};
    pipelines_.emplace_back(id, dag, chain, mb, now_, trigger);
    record_.tasks.emplace_back(chain.size(), TaskOutcome::NotReached);
    ++running_;
    ids.push_back(id);
  }
  policy_.on_trigger(*this, ids);
  for (PipelineId id : ids) ready(TaskRef{id, 0}, mb);
}

void Simulation::ready(TaskRef t, const MicroBatchMeta& input) {
  record_.tasks.at(t.pipeline.value).at(t.index) = TaskOutcome::Pending;
  policy_.on_task_ready(*this, t, input);
}

Seconds Simulation::transfer(TaskRef t, const MicroBatchMeta& mb,
                             ResourceId to) {
  if (mb.location == to) return now_;
  const Resource& from = topo_.at(mb.location);
  const Resource& dest = topo_.at(to);
  const Seconds d = transfer_time(mb, from, dest, topo_, scenario_.network);
  const Cents c = transfer_cost(mb, from, dest, topo_, scenario_.network);
  add_cost(t.pipeline, c, false);
  if (trace_) {
    trace(format("%.9f bill-xfer pipeline=%u task=%u from=%s to=%s bytes=%" PRIu64
                 " cents=%.17g",
                 now_, t.pipeline.value, t.index, from.name.c_str(),
                 dest.name.c_str(), mb.size, c));
  }
  schedule(now_ + d, ev::TransferComplete{t, to});
  return now_ + d;
}

ExecutionId Simulation::execute(TaskRef t, ResourceId worker, Seconds start) {
  const Resource& r = topo_.at(worker);
  if (r.tier != Tier::Cloud && busy(worker)) {
    throw std::logic_error("worker '" + r.name + "' is already busy");
  }
  Seconds duration = exec_duration(task(t).theta, r);
  if (scenario_.workload.jitter > 0.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    duration *= 1.0 + scenario_.workload.jitter * u(jitter_rng_);
  }
  Execution x{ExecutionId{next_exec_++}, t, worker, r.tier,
              std::max(start, now_), duration, ExecState::Scheduled};
  if (r.tier != Tier::Cloud) occupant_[worker] = x.id;
  if (r.tier == Tier::Edge) assigned_[worker].push_back(x.id);
  schedule(x.start, ev::TaskStarted{x.id});
  execs_.emplace(x.id, x);
  return x.id;
}

void Simulation::handle(const ev::TaskStarted& e) {
  Execution& x = execs_.at(e.exec);
  if (x.state != ExecState::Scheduled) return;
  x.state = ExecState::Running;
  schedule(now_ + x.duration, ev::TaskCompleted{x.id});
}

void Simulation::handle(const ev::TaskCompleted& e) {
  Execution& x = execs_.at(e.exec);
  if (x.state != ExecState::Running) return;
  x.state = ExecState::Finished;
  const Resource& r = topo_.at(x.worker);
  const Cents c = scenario_.billing.bill(x.duration, r);
  add_cost(x.task.pipeline, c, false);
  if (trace_) {
    trace(format("%.9f bill-exec pipeline=%u task=%u res=%s dur=%.17g "
                 "cents=%.17g aborted=0",
                 now_, x.task.pipeline.value, x.task.index, r.name.c_str(),
                 x.duration, c));
  }
  auto occ = occupant_.find(x.worker);
  if (occ != occupant_.end() && occ->second == x.id) occupant_.erase(occ);
  if (auto as = assigned_.find(x.worker); as != assigned_.end()) {
    std::erase(as->second, x.id);
  }
  if (task_open(x.task)) {
    finished_[x.task.key()] = Finished{x.id, now_};
    schedule(now_ + control_latency(x.worker, master_host_),
             ev::TaskNotified{x.task, x.id});
  }
  policy_.on_task_complete(*this, x);
}

void Simulation::handle(const ev::TaskNotified& e) {
  auto fin = finished_.find(e.task.key());
  if (fin == finished_.end()) return;
  const Finished f = fin->second;
  finished_.erase(fin);
  PipelineInstance& p = pipelines_.at(e.task.pipeline.value);
  if (p.status() != PipelineStatus::Running) return;
  const Execution& x = execs_.at(f.exec);
  const Resource& worker = topo_.at(x.worker);
  const TaskSpec& spec = p.task(e.task.index);

  MicroBatchMeta out;
  out.id = MicroBatchId{next_batch_++};
  out.sid = p.dag_id() + "/" + spec.id;
  out.t_begin = f.completion;
  out.t_end = f.completion;
  out.lat = worker.lat;
  out.lon = worker.lon;
  out.kv = p.trigger_batch().kv;
  out.size = spec.output_bytes;
  out.location = x.worker;

  TaskOutcome tier = x.tier == Tier::Edge  ? TaskOutcome::Edge
                     : x.tier == Tier::Fog ? TaskOutcome::Fog
                                           : TaskOutcome::Cloud;
  auto& outcome = record_.tasks.at(e.task.pipeline.value).at(e.task.index);
  AdvanceResult r = p.advance(e.task.index, f.completion, out);
  std::visit(Overloaded{
                 [&](const NextTask& next) {
                   outcome = tier;
                   ready(TaskRef{p.id(), static_cast<std::uint32_t>(next.index)},
                         next.input);
                 },
                 [&](const PipelineCompleted&) {
                   outcome = tier;
                   finish_pipeline(p.id(), f.completion);
                 },
                 [&](const PipelineLate& late) {
                   outcome = TaskOutcome::Failed;
                   if (trace_) {
                     trace(format("%.9f pipeline-failed pipeline=%u reason=late "
                                  "completion=%.9f sub_deadline=%.9f",
                                  now_, p.id().value, late.completion,
                                  late.sub_deadline));
                   }
                   finish_pipeline(p.id(), f.completion);
                 },
             },
             r);
}

void Simulation::fail_pipeline(PipelineId id, std::string_view reason) {
  PipelineInstance& p = pipelines_.at(id.value);
  if (p.status() != PipelineStatus::Running) return;
  const TaskRef cursor{id, static_cast<std::uint32_t>(p.cursor())};
  if (finished_.contains(cursor.key())) return;  // its result is on the way
  p.fail();
  record_.tasks.at(id.value).at(cursor.index) = TaskOutcome::Failed;
  if (trace_) {
    trace(format("%.9f pipeline-failed pipeline=%u reason=%s", now_, id.value,
                 std::string(reason).c_str()));
  }
  finish_pipeline(id, now_);
}

void Simulation::finish_pipeline(PipelineId id, Seconds completion) {
  --running_;
  const PipelineInstance& p = pipelines_.at(id.value);
  TriggerInstance& trig = triggers_.at(p.trigger_instance());
  trig.failed = trig.failed || p.status() == PipelineStatus::Failed;
  trig.last_completion = std::max(trig.last_completion, completion);
  if (--trig.remaining == 0 && !trig.failed) {
    record_.dag_latencies.push_back(trig.last_completion - trig.trigger_time);
  }
  schedule(now_, ev::PipelineDone{id});
}

void Simulation::handle(const ev::PipelineDone& e) {
  if (trace_) {
    trace(format("%.9f pipeline-status pipeline=%u status=%s", now_,
                 e.pipeline.value,
                 std::string(to_string(pipeline(e.pipeline).status())).c_str()));
  }
}

void Simulation::handle(const ev::EdgeFailed& e) {
  Resource& edge = topo_.at(e.edge);
  if (!edge.alive) return;
  edge.alive = false;
  ++record_.edge_failures;
  std::vector<ExecutionId> aborted;
  if (auto it = assigned_.find(e.edge); it != assigned_.end()) {
    for (ExecutionId id : it->second) {
      Execution& x = execs_.at(id);
      if (x.state == ExecState::Running) {
        const Seconds used = now_ - x.start;
        const Cents c = scenario_.billing.bill(used, edge);
        add_cost(x.task.pipeline, c, true);
        if (trace_) {
          trace(format("%.9f bill-exec pipeline=%u task=%u res=%s dur=%.17g "
                       "cents=%.17g aborted=1",
                       now_, x.task.pipeline.value, x.task.index,
                       edge.name.c_str(), used, c));
        }
      }
      if (x.state == ExecState::Running || x.state == ExecState::Scheduled) {
        x.state = ExecState::Aborted;
        aborted.push_back(id);
      }
    }
    assigned_.erase(it);
  }
  occupant_.erase(e.edge);
  policy_.on_edge_failure(*this, e.edge, aborted);
}

void Simulation::task_scheduled(TaskRef) {
  record_.scheduled_at.push_back(now_);
}

void Simulation::add_cost(PipelineId id, Cents amount, bool aborted) {
  pipelines_.at(id.value).add_cost(amount);
  record_.costs.push_back(CostEntry{id, amount, aborted});
}

}  // namespace cofee
