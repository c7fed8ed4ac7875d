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

#include "cofee/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cofee {

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

MetricsReport summarize(const RunRecord& rec) {
  MetricsReport m;
  m.policy = rec.policy;
  m.seed = rec.seed;
  m.micro_batches = rec.micro_batches;
  m.dropped_batches = rec.dropped_batches;
  m.dag_triggers = rec.dag_triggers;
  m.edge_failures = rec.edge_failures;
  m.backup_executions = rec.backup_executions;

  m.pipelines = rec.pipelines.size();
  for (PipelineStatus s : rec.pipelines) {
    if (s == PipelineStatus::Completed) ++m.pipelines_completed;
    if (s == PipelineStatus::Failed) ++m.pipelines_failed;
  }
  if (m.pipelines > 0) {
    m.success_rate = static_cast<double>(m.pipelines_completed) / m.pipelines;
    m.failure_rate = static_cast<double>(m.pipelines_failed) / m.pipelines;
  }

  for (const auto& chain : rec.tasks) {
    for (TaskOutcome t : chain) {
      switch (t) {
        case TaskOutcome::NotReached:
          continue;
        case TaskOutcome::Pending:
          break;
        case TaskOutcome::Edge:
          ++m.tasks_edge;
          break;
        case TaskOutcome::Fog:
          ++m.tasks_fog;
          break;
        case TaskOutcome::Cloud:
          ++m.tasks_cloud;
          break;
        case TaskOutcome::Failed:
          ++m.tasks_failed;
          break;
      }
      ++m.tasks_triggered;
    }
  }
  const double done =
      static_cast<double>(m.tasks_edge + m.tasks_fog + m.tasks_cloud);
  if (done > 0) {
    m.edge_fraction = m.tasks_edge / done;
    m.fog_fraction = m.tasks_fog / done;
    m.cloud_fraction = m.tasks_cloud / done;
  }

  for (const CostEntry& c : rec.costs) {
    m.total_cost += c.amount;
    const bool ok = !c.aborted && rec.pipelines.at(c.pipeline.value) ==
                                      PipelineStatus::Completed;
    (ok ? m.successful_cost : m.wasted_cost) += c.amount;
  }
  if (m.pipelines_completed > 0) {
    m.avg_cost_per_success = m.successful_cost / m.pipelines_completed;
  }

  const auto minutes =
      static_cast<std::size_t>(std::max(0.0, std::ceil(rec.duration / 60.0)));
  m.tasks_per_minute.assign(minutes, 0.0);
  for (Seconds t : rec.scheduled_at) {
    const auto bucket = static_cast<std::size_t>(t / 60.0);
    if (bucket < minutes) m.tasks_per_minute[bucket] += 1.0;
  }
  m.median_tasks_per_minute = median(m.tasks_per_minute);

  m.dag_latencies = rec.dag_latencies;
  if (!m.dag_latencies.empty()) {
    m.mean_dag_latency =
        std::accumulate(m.dag_latencies.begin(), m.dag_latencies.end(), 0.0) /
        m.dag_latencies.size();
  }
  return m;
}

}  // namespace cofee
