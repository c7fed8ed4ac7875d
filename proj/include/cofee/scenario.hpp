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
#include <string>
#include <vector>

#include "cofee/dag.hpp"
#include "cofee/domain.hpp"
#include "cofee/master_scheduler.hpp"
#include "cofee/workload.hpp"

namespace cofee {

/// Everything a run needs besides the policy and the seed.
struct Scenario {
  std::string name;
  Topology topology;
  NetworkModel network;
  BillingPolicy billing;
  MasterConfig master;
  std::vector<DagSpec> dags;
  WorkloadConfig workload;
  std::map<ResourceId, double> oversubscription;  // per fog; default 1

  double oversubscription_of(ResourceId fog) const;
  /// Cross-checks topology, DAGs, workload and master settings.
  void validate() const;
};

}  // namespace cofee
