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

#include "cofee/baselines.hpp"

#include <algorithm>
#include <tuple>

#include "cofee/cofee_policy.hpp"

namespace cofee {

ResourceId cloud_only_place(const MicroBatchMeta& input,
                            std::span<const ResourceId> clouds,
                            std::size_t& round_robin) {
  if (std::find(clouds.begin(), clouds.end(), input.location) != clouds.end()) {
    return input.location;
  }
  return clouds[round_robin++ % clouds.size()];
}

std::optional<ResourceId> local_fog_place(
    Seconds theta, Seconds sub_deadline, Seconds now, Seconds bid_timeout,
    const MicroBatchMeta& input, ResourceId fog_id, const Topology& topo,
    const NetworkModel& net, const BillingPolicy& billing,
    const std::function<bool(ResourceId)>& busy) {
  const Resource& src = topo.at(input.location);
  std::optional<ResourceId> best;
  Cents best_cost = 0.0;
  const std::string* best_name = nullptr;
  for (ResourceId id : topo.children(fog_id)) {
    const Resource& edge = topo.at(id);
    if (!edge.alive || busy(id)) continue;
    Seconds d = 0.0;
    Cents k = 0.0;
    try {
      d = transfer_time(input, src, edge, topo, net);
      k = transfer_cost(input, src, edge, topo, net);
    } catch (const Unreachable&) {
      continue;
    }
    if (now + bid_timeout + d + exec_duration(theta, edge) > sub_deadline) {
      continue;
    }
    const Cents cost = k + exec_cost(theta, edge, billing);
    if (!best || std::tie(cost, edge.name) < std::tie(best_cost, *best_name)) {
      best = id;
      best_cost = cost;
      best_name = &edge.name;
    }
  }
  if (best) return best;
  const Resource& fog = topo.at(fog_id);
  if (busy(fog_id)) return std::nullopt;
  try {
    const Seconds d = transfer_time(input, src, fog, topo, net);
    if (now + bid_timeout + d + exec_duration(theta, fog) <= sub_deadline) {
      return fog_id;
    }
  } catch (const Unreachable&) {
  }
  return std::nullopt;
}

CloudOnlyPolicy::CloudOnlyPolicy(const Scenario& scenario)
    : clouds_(scenario.topology.clouds()) {}

void CloudOnlyPolicy::on_task_ready(Simulation& sim, TaskRef task,
                                    const MicroBatchMeta& input) {
  if (!sim.alive(input.location)) {
    sim.fail_pipeline(task.pipeline, "input-lost");
    return;
  }
  const ResourceId cloud = cloud_only_place(input, clouds_, next_);
  sim.task_scheduled(task);
  const Seconds arrival = sim.transfer(task, input, cloud);
  sim.execute(task, cloud, arrival);
}

void LocalFogPolicy::on_task_ready(Simulation& sim, TaskRef task,
                                   const MicroBatchMeta& input) {
  if (!sim.alive(input.location)) {
    sim.fail_pipeline(task.pipeline, "input-lost");
    return;
  }
  const ResourceId source = sim.pipeline(task.pipeline).trigger_batch().location;
  const ResourceId fog = *sim.topology().at(source).partition;
  const auto worker = local_fog_place(
      sim.task(task).theta, sim.sub_deadline(task), sim.now(),
      sim.master().bid_timeout, input, fog, sim.topology(), sim.network(),
      sim.billing(), [&](ResourceId r) { return sim.busy(r); });
  if (!worker) {
    sim.fail_pipeline(task.pipeline, "no-local-capacity");
    return;
  }
  sim.task_scheduled(task);
  const Seconds arrival = sim.transfer(task, input, *worker);
  sim.execute(task, *worker, arrival);
}

void LocalFogPolicy::on_edge_failure(Simulation& sim, ResourceId,
                                     std::span<const ExecutionId> aborted) {
  for (ExecutionId id : aborted) {
    sim.fail_pipeline(sim.execution(id).task.pipeline, "edge-failed");
  }
}

std::string canonical_policy(std::string_view name) {
  if (name == "cofee") return "cofee";
  if (name == "cloud-only" || name == "co") return "cloud-only";
  if (name == "lfp" || name == "local-fog") return "lfp";
  throw ConfigError("unknown policy '" + std::string(name) +
                    "' (expected cofee, cloud-only or lfp)");
}

std::unique_ptr<SchedulerPolicy> make_policy(std::string_view name,
                                             const Scenario& scenario) {
  const std::string canon = canonical_policy(name);
  if (canon == "cofee") return std::make_unique<CofeePolicy>(scenario);
  if (canon == "cloud-only") return std::make_unique<CloudOnlyPolicy>(scenario);
  return std::make_unique<LocalFogPolicy>(scenario);
}

}  // namespace cofee
