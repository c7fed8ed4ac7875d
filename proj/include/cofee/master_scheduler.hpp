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

#include <optional>
#include <span>
#include <vector>

#include "cofee/domain.hpp"
#include "cofee/protocol.hpp"

namespace cofee {

struct MasterConfig {
  std::size_t fanout = 2;         // n
  Seconds bid_timeout = 1.0;      // t_inq
  std::size_t report_slots = 3;   // k
  Seconds report_period = 5.0;
  Seconds report_horizon = 600.0;

  void validate() const;
};

/// Fogs whose reported free slots can hold the task before its sub-deadline,
/// cheapest first. Equal prices go to the fog with more reported free time,
/// then to the lower name.
std::vector<ResourceId> select_candidate_fogs(const Inquiry& inq,
                                              std::span<const FogReport> reports,
                                              const Topology& topo,
                                              std::size_t n);

/// The cloud's bid at time `now`. Never throws for a late or unreachable task;
/// the bid is simply empty.
Bid cloud_bid(const Inquiry& inq, const Resource& cloud, Seconds now,
              const Topology& topo, const NetworkModel& net,
              const BillingPolicy& billing);

struct SelectionOutcome {
  std::optional<std::size_t> winner;  // index into the bid list
  std::vector<std::size_t> rejected;  // viable fog bids that lost
};

/// Cheapest viable bid wins. Equal kappa prefers Edge over Fog over Cloud,
/// then the lower worker name.
SelectionOutcome run_selection(std::span<const Bid> bids);

}  // namespace cofee
