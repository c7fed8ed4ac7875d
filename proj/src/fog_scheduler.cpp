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

#include "cofee/fog_scheduler.hpp"

#include <algorithm>
#include <tuple>

namespace cofee {

std::string_view to_string(BidKind kind) {
  switch (kind) {
    case BidKind::Empty:
      return "empty";
    case BidKind::EdgeWithBackup:
      return "edge";
    case BidKind::FogDirect:
      return "fog";
    case BidKind::Cloud:
      return "cloud";
  }
  return "?";
}

FogScheduler::FogScheduler(ResourceId fog, std::vector<ResourceId> edges,
                           double oversubscription)
    : fog_(fog), edges_(std::move(edges)), calendar_(oversubscription) {
  for (ResourceId e : edges_) state_[e] = EdgeState{};
}

bool FogScheduler::edge_idle(ResourceId edge) const {
  auto it = state_.find(edge);
  return it != state_.end() && !it->second.busy;
}

std::vector<EdgeCandidate> FogScheduler::edge_candidates(
    const Inquiry& inq, const FogContext& ctx) const {
  const Resource& fog = ctx.topo.at(fog_);
  const Resource& src = ctx.topo.at(inq.input.location);
  const Seconds on_fog = exec_duration(inq.theta, fog);
  const Cents fog_exec = exec_cost(inq.theta, fog, ctx.billing);

  std::vector<std::pair<EdgeCandidate, const Resource*>> found;
  for (ResourceId id : edges_) {
    const Resource& edge = ctx.topo.at(id);
    if (!edge.alive || !edge_idle(id)) continue;
    Seconds d = 0.0;
    Cents k_edge = 0.0, k_fog = 0.0;
    try {
      d = transfer_time(inq.input, src, edge, ctx.topo, ctx.net);
      k_edge = transfer_cost(inq.input, src, edge, ctx.topo, ctx.net);
      k_fog = transfer_cost(inq.input, edge, fog, ctx.topo, ctx.net);
    } catch (const Unreachable&) {
      continue;
    }
    const Seconds on_edge = exec_duration(inq.theta, edge);
    const Seconds omega = inq.issued_at + ctx.bid_timeout + d + on_edge;
    if (omega + on_fog > inq.sub_deadline) continue;
    const double p = failure_probability(edge, on_edge);
    const Cents kappa = (k_edge + exec_cost(inq.theta, edge, ctx.billing)) +
                        (k_fog + p * fog_exec);
    found.push_back({EdgeCandidate{id, omega, kappa, d}, &edge});
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.kappa, a.second->name) <
           std::tie(b.first.kappa, b.second->name);
  });
  std::vector<EdgeCandidate> out;
  out.reserve(found.size());
  for (auto& f : found) out.push_back(f.first);
  return out;
}

Bid FogScheduler::compute_bid(const Inquiry& inq, const FogContext& ctx,
                              std::vector<ReservationId>* moved) {
  const Resource& fog = ctx.topo.at(fog_);
  const Seconds on_fog = exec_duration(inq.theta, fog);
  Bid bid;
  bid.inquiry = inq.id;
  bid.bidder = fog_;

  for (const EdgeCandidate& c : edge_candidates(inq, ctx)) {
    auto handle = calendar_.reserve(
        ReserveRequest{ReservationKind::Backup, inq.task, on_fog,
                       c.latest_completion, inq.sub_deadline},
        moved);
    if (!handle) continue;
    const Resource& edge = ctx.topo.at(c.edge);
    state_[c.edge].busy = true;
    pending_[*handle] = Pending{inq, AssignmentKind::EdgeWithBackup, c.edge};
    bid.kind = BidKind::EdgeWithBackup;
    bid.worker = c.edge;
    bid.worker_tier = Tier::Edge;
    bid.worker_name = edge.name;
    bid.kappa = c.kappa;
    bid.reservation = *handle;
    bid.projected_completion = c.latest_completion;
    return bid;
  }

  const Resource& src = ctx.topo.at(inq.input.location);
  Seconds d = 0.0;
  Cents k = 0.0;
  try {
    d = transfer_time(inq.input, src, fog, ctx.topo, ctx.net);
    k = transfer_cost(inq.input, src, fog, ctx.topo, ctx.net);
  } catch (const Unreachable&) {
    return bid;
  }
  const Seconds ready = inq.issued_at + ctx.bid_timeout + d;
  if (ready + on_fog > inq.sub_deadline) return bid;
  auto handle = calendar_.reserve(
      ReserveRequest{ReservationKind::Primary, inq.task, on_fog, ready,
                     inq.sub_deadline},
      moved);
  if (!handle) return bid;
  pending_[*handle] = Pending{inq, AssignmentKind::FogDirect, fog_};
  bid.kind = BidKind::FogDirect;
  bid.worker = fog_;
  bid.worker_tier = Tier::Fog;
  bid.worker_name = fog.name;
  bid.kappa = k + exec_cost(inq.theta, fog, ctx.billing);
  bid.reservation = *handle;
  bid.projected_completion = calendar_.get(*handle).end;
  return bid;
}

Assignment FogScheduler::on_accept(ReservationId handle) {
  auto it = pending_.find(handle);
  if (it == pending_.end()) {
    throw ProtocolError("accept for unknown bid handle " +
                        std::to_string(handle.value));
  }
  calendar_.make_permanent(handle);
  Assignment a{it->second.kind, it->second.worker, handle,
               std::move(it->second.inquiry)};
  pending_.erase(it);
  return a;
}

void FogScheduler::on_reject(ReservationId handle) {
  auto it = pending_.find(handle);
  if (it == pending_.end()) {
    throw ProtocolError("reject for unknown bid handle " +
                        std::to_string(handle.value));
  }
  if (it->second.kind == AssignmentKind::EdgeWithBackup) {
    state_[it->second.worker].busy = false;
  }
  calendar_.release(handle);
  pending_.erase(it);
}

void FogScheduler::on_task_complete(ResourceId edge, ReservationId backup) {
  if (calendar_.contains(backup)) calendar_.release(backup);
  on_edge_released(edge);
}

void FogScheduler::on_edge_released(ResourceId edge) {
  auto it = state_.find(edge);
  if (it != state_.end()) it->second.busy = false;
}

}  // namespace cofee
