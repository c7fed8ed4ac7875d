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
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cofee/domain.hpp"
#include "cofee/query_engine.hpp"

namespace cofee {

struct TaskSpec {
  std::string id;
  Seconds theta = 0.0;            // base-resource seconds
  std::uint64_t output_bytes = 0;
};

struct DagSpec {
  std::string id;
  std::vector<TaskSpec> tasks;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // task indices
  Seconds deadline = 0.0;  // relative to the trigger
  FilterQuery filter;

  /// Positive sizes and times, indices in range, a single root, no cycles.
  void validate() const;
  std::size_t root() const;
  std::size_t task_index(const std::string& task_id) const;
};

using TaskChain = std::vector<std::size_t>;

/// One chain per root-to-leaf path. Tasks reachable along several paths are
/// repeated in each chain. Throws ValidationError on a cycle.
std::vector<TaskChain> unroll(const DagSpec& dag);

/// Longest root-to-leaf sum of theta.
Seconds critical_path(const DagSpec& dag);

/// Sub-deadline spans proportional to each task's share of the chain time.
std::vector<Seconds> apportion(std::span<const Seconds> thetas, Seconds delta);

using PipelineId = StrongId<struct PipelineTag>;

enum class PipelineStatus { Running, Completed, Failed };

std::string_view to_string(PipelineStatus s);

struct NextTask {
  std::size_t index;  // position in the chain
  Seconds sub_deadline;
  MicroBatchMeta input;
};
struct PipelineCompleted {};
struct PipelineLate {
  Seconds completion;
  Seconds sub_deadline;
};

using AdvanceResult = std::variant<NextTask, PipelineCompleted, PipelineLate>;

/// A linear chain of one DAG bound to one triggering micro-batch.
class PipelineInstance {
 public:
  PipelineInstance(PipelineId id, const DagSpec& dag, TaskChain chain,
                   MicroBatchMeta trigger, Seconds trigger_time,
                   std::uint64_t trigger_instance);

  PipelineId id() const { return id_; }
  const std::string& dag_id() const { return dag_id_; }
  std::uint64_t trigger_instance() const { return trigger_instance_; }
  const TaskChain& chain() const { return chain_; }
  std::size_t size() const { return chain_.size(); }
  const TaskSpec& task(std::size_t pos) const { return tasks_[pos]; }
  Seconds sub_deadline(std::size_t pos) const { return sub_deadlines_[pos]; }
  const std::vector<Seconds>& sub_deadlines() const { return sub_deadlines_; }
  Seconds trigger_time() const { return trigger_time_; }
  Seconds deadline() const { return sub_deadlines_.back(); }
  const MicroBatchMeta& trigger_batch() const { return trigger_; }
  std::size_t cursor() const { return cursor_; }
  PipelineStatus status() const { return status_; }
  Cents cost() const { return cost_; }

  void add_cost(Cents c) { cost_ += c; }
  void fail() { status_ = PipelineStatus::Failed; }

  /// Records completion of the cursor task. Late completions fail the
  /// pipeline; otherwise the next task is returned with its input.
  AdvanceResult advance(std::size_t completed, Seconds completion_time,
                        const MicroBatchMeta& output);

 private:
  PipelineId id_;
  std::string dag_id_;
  std::uint64_t trigger_instance_;
  TaskChain chain_;
  std::vector<TaskSpec> tasks_;
  std::vector<Seconds> sub_deadlines_;
  MicroBatchMeta trigger_;
  Seconds trigger_time_;
  std::size_t cursor_ = 0;
  PipelineStatus status_ = PipelineStatus::Running;
  Cents cost_ = 0.0;
};

}  // namespace cofee
