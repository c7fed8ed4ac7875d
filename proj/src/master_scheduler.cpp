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

#include "cofee/master_scheduler.hpp"

#include <algorithm>
#include <tuple>

namespace cofee {

void MasterConfig::validate() const {
  if (fanout < 1) throw ValidationError("master.fanout must be >= 1");
  if (!(bid_timeout > 0.0)) throw ValidationError("master.t_inq must be > 0");
  if (report_slots < 1) throw ValidationError("master.report_slots must be >= 1");
  if (!(report_period > 0.0)) {
    throw ValidationError("master.report_period must be > 0");
  }
  if (!(report_horizon > 0.0)) {
    throw ValidationError("master.report_horizon must be > 0");
  }
}

std::vector<ResourceId> select_candidate_fogs(const Inquiry& inq,
                                              std::span<const FogReport> reports,
                                              const Topology& topo,
                                              std::size_t n) {
  struct Ranked {
    Cents price;
    Seconds free;
    const Resource* fog;
  };
  std::vector<Ranked> viable;
  for (const FogReport& rep : reports) {
    const Resource& fog = topo.at(rep.fog);
    if (!fog.alive) continue;
    const Seconds needed = exec_duration(inq.theta, fog);
    bool fits = false;
    Seconds free = 0.0;
    for (const FreeSlot& s : rep.slots) {
      free += s.length();
      const Seconds start = std::max(s.start, inq.issued_at);
      if (start + needed <= std::min(s.end, inq.sub_deadline)) fits = true;
    }
    if (fits) viable.push_back({fog.price, free, &fog});
  }
  std::sort(viable.begin(), viable.end(), [](const Ranked& a, const Ranked& b) {
    return std::tie(a.price, b.free, a.fog->name) <
           std::tie(b.price, a.free, b.fog->name);
  });
  std::vector<ResourceId> out;
  for (std::size_t i = 0; i < viable.size() && i < n; ++i) {
    out.push_back(viable[i].fog->id);
  }
  return out;
}

Bid cloud_bid(const Inquiry& inq, const Resource& cloud, Seconds now,
              const Topology& topo, const NetworkModel& net,
              const BillingPolicy& billing) {
  Bid bid;
  bid.inquiry = inq.id;
  bid.bidder = cloud.id;
  const Resource& src = topo.at(inq.input.location);
  Seconds d = 0.0;
  Cents k = 0.0;
  try {
    d = transfer_time(inq.input, src, cloud, topo, net);
    k = transfer_cost(inq.input, src, cloud, topo, net);
  } catch (const Unreachable&) {
    return bid;
  }
  const Seconds finish = now + d + exec_duration(inq.theta, cloud);
  if (finish > inq.sub_deadline) return bid;
  bid.kind = BidKind::Cloud;
  bid.worker = cloud.id;
  bid.worker_tier = Tier::Cloud;
  bid.worker_name = cloud.name;
  bid.kappa = k + exec_cost(inq.theta, cloud, billing);
  bid.projected_completion = finish;
  return bid;
}

SelectionOutcome run_selection(std::span<const Bid> bids) {
  SelectionOutcome out;
  auto key = [&](std::size_t i) {
    return std::make_tuple(bids[i].kappa, static_cast<int>(bids[i].worker_tier),
                           std::string_view(bids[i].worker_name));
  };
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (!bids[i].viable()) continue;
    if (!out.winner || key(i) < key(*out.winner)) out.winner = i;
  }
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (bids[i].viable() && bids[i].reservation && i != out.winner) {
      out.rejected.push_back(i);
    }
  }
  return out;
}

}  // namespace cofee
