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
#include <string>
#include <vector>

#include "cofee/dag.hpp"
#include "cofee/domain.hpp"

namespace cofee {

/// Outcome of one run. Cost of a failed pipeline, and of every aborted
/// execution attempt, is wasted; everything else is successful cost.
struct MetricsReport {
  std::string policy;
  std::uint64_t seed = 0;

  std::uint64_t micro_batches = 0;   // generated on live edges
  std::uint64_t dropped_batches = 0; // lost with their edge before matching
  std::uint64_t dag_triggers = 0;
  std::uint64_t pipelines = 0;
  std::uint64_t pipelines_completed = 0;
  std::uint64_t pipelines_failed = 0;
  double success_rate = 0.0;
  double failure_rate = 0.0;

  std::uint64_t tasks_triggered = 0;
  std::uint64_t tasks_edge = 0;
  std::uint64_t tasks_fog = 0;
  std::uint64_t tasks_cloud = 0;
  std::uint64_t tasks_failed = 0;
  double edge_fraction = 0.0;   // over completed tasks
  double fog_fraction = 0.0;
  double cloud_fraction = 0.0;
  std::uint64_t backup_executions = 0;

  Cents total_cost = 0.0;
  Cents successful_cost = 0.0;
  Cents wasted_cost = 0.0;
  Cents avg_cost_per_success = 0.0;

  std::vector<double> tasks_per_minute;
  double median_tasks_per_minute = 0.0;
  std::vector<double> dag_latencies;  // completed DAG triggers, completion order
  double mean_dag_latency = 0.0;

  std::uint64_t edge_failures = 0;

  bool operator==(const MetricsReport&) const = default;
};

enum class TaskOutcome { NotReached, Pending, Edge, Fog, Cloud, Failed };

struct CostEntry {
  PipelineId pipeline;
  Cents amount = 0.0;
  bool aborted = false;
};

/// Raw per-run facts collected by the engine.
struct RunRecord {
  std::string policy;
  std::uint64_t seed = 0;
  Seconds duration = 0.0;
  std::uint64_t micro_batches = 0;
  std::uint64_t dropped_batches = 0;
  std::uint64_t dag_triggers = 0;
  std::vector<PipelineStatus> pipelines;        // indexed by PipelineId
  std::vector<std::vector<TaskOutcome>> tasks;  // per pipeline, per position
  std::vector<CostEntry> costs;
  std::vector<Seconds> scheduled_at;            // one entry per placed task
  std::vector<double> dag_latencies;
  std::uint64_t edge_failures = 0;
  std::uint64_t backup_executions = 0;
};

MetricsReport summarize(const RunRecord& rec);

double median(std::vector<double> values);

}  // namespace cofee
