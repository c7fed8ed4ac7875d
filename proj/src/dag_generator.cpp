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

#include "cofee/dag_generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cofee/metrics.hpp"

namespace cofee {

Seconds task_type_theta(int type) { return 10.0 + 50.0 * type / 7.0; }

DagSpec generate_dag(const std::string& id, const DagShape& shape,
                     std::mt19937_64& rng) {
  std::normal_distribution<double> type_draw(3.5, 1.0);
  std::uniform_int_distribution<std::uint64_t> size(shape.output_min,
                                                    shape.output_max);
  DagSpec dag;
  dag.id = id;
  std::vector<int> depth;
  std::vector<bool> leaf;
  auto add_task = [&](std::optional<std::size_t> parent) {
    const int type =
        static_cast<int>(std::clamp(std::round(type_draw(rng)), 0.0, 7.0));
    const std::size_t idx = dag.tasks.size();
    dag.tasks.push_back(TaskSpec{"t" + std::to_string(idx),
                                 task_type_theta(type), size(rng)});
    depth.push_back(parent ? depth[*parent] + 1 : 0);
    leaf.push_back(true);
    if (parent) {
      dag.edges.emplace_back(*parent, idx);
      leaf[*parent] = false;
    }
    return idx;
  };

  const int leaves =
      std::uniform_int_distribution<int>(shape.leaves_min, shape.leaves_max)(rng);
  const int spine =
      std::uniform_int_distribution<int>(shape.spine_min, shape.spine_max)(rng);
  std::size_t prev = add_task(std::nullopt);
  for (int k = 1; k < spine; ++k) prev = add_task(prev);

  const double max_depth = shape.attach_depth * (spine - 1);
  std::uniform_int_distribution<int> branch_len(shape.branch_min,
                                                shape.branch_max);
  for (int b = 1; b < leaves; ++b) {
    // Attaching below an inner task adds exactly one root-to-leaf path.
    std::vector<std::size_t> anchors;
    for (std::size_t i = 0; i < dag.tasks.size(); ++i) {
      if (!leaf[i] && depth[i] <= max_depth) anchors.push_back(i);
    }
    std::size_t at = anchors[std::uniform_int_distribution<std::size_t>(
        0, anchors.size() - 1)(rng)];
    const int len = branch_len(rng);
    for (int k = 0; k < len; ++k) at = add_task(at);
  }
  dag.filter.dag_id = id;
  dag.filter.domain = DomainPredicate{"topic", id};
  return dag;
}

std::vector<DagSpec> generate_dag_set(std::size_t count, std::uint64_t seed,
                                      const DagShape& shape) {
  std::mt19937_64 rng(seed);
  std::vector<DagSpec> out;
  for (std::size_t i = 0; i < count; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "dag-%02zu", i);
    out.push_back(generate_dag(id, shape, rng));
  }
  return out;
}

DagSetStats dag_set_stats(const std::vector<DagSpec>& dags) {
  DagSetStats s;
  if (dags.empty()) return s;
  std::vector<double> cps;
  for (const DagSpec& d : dags) {
    cps.push_back(critical_path(d));
    const auto chains = unroll(d);
    s.mean_pipelines += chains.size();
    s.mean_tasks += d.tasks.size();
    for (const TaskChain& c : chains) {
      for (std::size_t t : c) s.mean_unrolled_work += d.tasks[t].theta;
    }
  }
  const double n = static_cast<double>(dags.size());
  s.median_critical_path = median(cps);
  s.mean_unrolled_work /= n;
  s.mean_pipelines /= n;
  s.mean_tasks /= n;
  return s;
}

std::vector<DagSpec> calibrated_dag_set(std::size_t count,
                                        Seconds target_critical_path,
                                        Seconds target_unrolled_work,
                                        std::uint64_t attempts,
                                        const DagShape& shape) {
  std::vector<DagSpec> best;
  double best_err = 0.0;
  for (std::uint64_t seed = 1; seed <= attempts; ++seed) {
    auto set = generate_dag_set(count, seed, shape);
    const DagSetStats s = dag_set_stats(set);
    const double err =
        std::abs(s.median_critical_path / target_critical_path - 1.0) +
        std::abs(s.mean_unrolled_work / target_unrolled_work - 1.0);
    if (best.empty() || err < best_err) {
      best = std::move(set);
      best_err = err;
    }
  }
  return best;
}

}  // namespace cofee
