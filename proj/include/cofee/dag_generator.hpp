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

#include <cstdint>
#include <random>
#include <vector>

#include "cofee/dag.hpp"

namespace cofee {

/// Shape of the synthetic out-tree DAGs.
///
/// Each DAG has a spine of `spine_min..spine_max` tasks from the root, then
/// one extra branch per additional leaf. Branches hang off spine or branch
/// tasks no deeper than `attach_depth` times the spine length and add
/// `branch_min..branch_max` tasks. Task base times come from 8 task types
/// with theta = 10 + 50 i / 7 seconds; the type index is a rounded normal
/// draw centred on the middle type with a standard deviation of one type.
struct DagShape {
  int leaves_min = 2;
  int leaves_max = 7;
  int spine_min = 4;
  int spine_max = 7;
  int branch_min = 1;
  int branch_max = 2;
  double attach_depth = 0.25;
  std::uint64_t output_min = 500'000;
  std::uint64_t output_max = 1'500'000;
};

Seconds task_type_theta(int type);

DagSpec generate_dag(const std::string& id, const DagShape& shape,
                     std::mt19937_64& rng);

std::vector<DagSpec> generate_dag_set(std::size_t count, std::uint64_t seed,
                                      const DagShape& shape = {});

struct DagSetStats {
  double median_critical_path = 0.0;
  double mean_unrolled_work = 0.0;  // sum of theta over all pipelines
  double mean_pipelines = 0.0;
  double mean_tasks = 0.0;
};

DagSetStats dag_set_stats(const std::vector<DagSpec>& dags);

/// Tries seeds 1..attempts and keeps the set whose median critical path and
/// mean unrolled work are jointly closest, in relative terms, to the targets.
std::vector<DagSpec> calibrated_dag_set(std::size_t count,
                                        Seconds target_critical_path,
                                        Seconds target_unrolled_work,
                                        std::uint64_t attempts = 2000,
                                        const DagShape& shape = {});

}  // namespace cofee
