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

#pragma once

#include <map>
#include <optional>
#include <vector>

#include "cofee/domain.hpp"
#include "cofee/protocol.hpp"
#include "cofee/slot_calendar.hpp"

namespace cofee {

struct FogContext {
  const Topology& topo;
  const NetworkModel& net;
  const BillingPolicy& billing;
  Seconds bid_timeout;
};

/// An idle edge that can finish the task with time left for a re-execution
/// on the parent fog.
struct EdgeCandidate {
  ResourceId edge;
  Seconds latest_completion = 0.0;  // omega
  Cents kappa = 0.0;
  Seconds transfer_time = 0.0;
};

enum class AssignmentKind { EdgeWithBackup, FogDirect };

/// What a fog has to carry out once the master accepts its bid.
struct Assignment {
  AssignmentKind kind;
  ResourceId worker;
  ReservationId reservation;
  Inquiry inquiry;
};

/// Bid computation and slot bookkeeping for one fog partition.
class FogScheduler {
 public:
  FogScheduler(ResourceId fog, std::vector<ResourceId> edges,
               double oversubscription);

  ResourceId fog() const { return fog_; }
  const std::vector<ResourceId>& edges() const { return edges_; }
  SlotCalendar& calendar() { return calendar_; }
  const SlotCalendar& calendar() const { return calendar_; }

  /// Idle, alive edges passing the deadline test, cheapest first.
  std::vector<EdgeCandidate> edge_candidates(const Inquiry& inq,
                                             const FogContext& ctx) const;

  /// Tries edges cheapest first, each needing a backup slot on the fog; then a
  /// primary slot on the fog itself; otherwise an empty bid. A viable bid
  /// holds a temporary reservation until on_accept or on_reject.
  Bid compute_bid(const Inquiry& inq, const FogContext& ctx,
                  std::vector<ReservationId>* moved = nullptr);

  Assignment on_accept(ReservationId handle);
  void on_reject(ReservationId handle);

  /// The edge finished: its backup slot is released and the edge is idle.
  void on_task_complete(ResourceId edge, ReservationId backup);
  /// The edge stopped working on its task (failure or abort).
  void on_edge_released(ResourceId edge);

  bool edge_idle(ResourceId edge) const;
  std::size_t pending_bids() const { return pending_.size(); }

 private:
  struct EdgeState {
    bool busy = false;  // assigned, or held by an outstanding bid
  };
  struct Pending {
    Inquiry inquiry;
    AssignmentKind kind;
    ResourceId worker;
  };

  ResourceId fog_;
  std::vector<ResourceId> edges_;
  std::map<ResourceId, EdgeState> state_;
  std::map<ReservationId, Pending> pending_;
  SlotCalendar calendar_;
};

}  // namespace cofee
