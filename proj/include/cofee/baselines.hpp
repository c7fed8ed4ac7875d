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

#include <functional>
#include <memory>
#include <optional>
#include <string_view>

#include "cofee/engine.hpp"

namespace cofee {

/// Cloud worker for a task: the one already holding its input, otherwise
/// the next in round-robin order.
ResourceId cloud_only_place(const MicroBatchMeta& input,
                            std::span<const ResourceId> clouds,
                            std::size_t& round_robin);

/// Local placement inside one fog partition with no reservations: the
/// cheapest idle edge that meets the sub-deadline, else the idle parent fog,
/// else nothing. `busy` reports workers currently occupied.
std::optional<ResourceId> local_fog_place(
    Seconds theta, Seconds sub_deadline, Seconds now, Seconds bid_timeout,
    const MicroBatchMeta& input, ResourceId fog, const Topology& topo,
    const NetworkModel& net, const BillingPolicy& billing,
    const std::function<bool(ResourceId)>& busy);

/// Every task runs on the cloud.
class CloudOnlyPolicy final : public SchedulerPolicy {
 public:
  explicit CloudOnlyPolicy(const Scenario& scenario);
  std::string_view name() const override { return "cloud-only"; }
  void on_task_ready(Simulation& sim, TaskRef task,
                     const MicroBatchMeta& input) override;
  void on_task_complete(Simulation&, const Execution&) override {}
  void on_edge_failure(Simulation&, ResourceId,
                       std::span<const ExecutionId>) override {}

 private:
  std::vector<ResourceId> clouds_;
  std::size_t next_ = 0;
};

/// Every task of a trigger runs in the partition of its source edge, placed
/// greedily when ready; no backups and no cloud.
class LocalFogPolicy final : public SchedulerPolicy {
 public:
  explicit LocalFogPolicy(const Scenario& scenario) { (void)scenario; }
  std::string_view name() const override { return "lfp"; }
  void on_task_ready(Simulation& sim, TaskRef task,
                     const MicroBatchMeta& input) override;
  void on_task_complete(Simulation&, const Execution&) override {}
  void on_edge_failure(Simulation& sim, ResourceId edge,
                       std::span<const ExecutionId> aborted) override;
};

/// Known names: cofee, cloud-only (alias co), lfp.
std::unique_ptr<SchedulerPolicy> make_policy(std::string_view name,
                                             const Scenario& scenario);
/// Canonical policy name; throws ConfigError for unknown names.
std::string canonical_policy(std::string_view name);

}  // namespace cofee
