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

#include "cofee/dag.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace cofee {

namespace {

std::vector<std::vector<std::size_t>> successors(const DagSpec& dag) {
  std::vector<std::vector<std::size_t>> succ(dag.tasks.size());
  for (auto [from, to] : dag.edges) succ.at(from).push_back(to);
  for (auto& s : succ) std::sort(s.begin(), s.end());
  return succ;
}

void check_acyclic(const DagSpec& dag,
                   const std::vector<std::vector<std::size_t>>& succ) {
  enum class Mark { None, Active, Done };
  std::vector<Mark> mark(dag.tasks.size(), Mark::None);
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    mark[v] = Mark::Active;
    for (std::size_t w : succ[v]) {
      if (mark[w] == Mark::Active) {
        throw ValidationError("dag '" + dag.id + "' has a cycle through '" +
                              dag.tasks[w].id + "'");
      }
      if (mark[w] == Mark::None) visit(w);
    }
    mark[v] = Mark::Done;
  };
  for (std::size_t v = 0; v < dag.tasks.size(); ++v) {
    if (mark[v] == Mark::None) visit(v);
  }
}

}  // namespace

void DagSpec::validate() const {
  if (id.empty()) throw ValidationError("dag without id");
  if (tasks.empty()) throw ValidationError("dag '" + id + "' has no tasks");
  for (const TaskSpec& t : tasks) {
    if (!(t.theta > 0.0)) {
      throw ValidationError("dag '" + id + "' task '" + t.id +
                            "': theta must be > 0");
    }
    if (t.output_bytes == 0) {
      throw ValidationError("dag '" + id + "' task '" + t.id +
                            "': output size must be > 0");
    }
  }
  for (auto [from, to] : edges) {
    if (from >= tasks.size() || to >= tasks.size()) {
      throw ValidationError("dag '" + id + "': edge references unknown task");
    }
    if (from == to) {
      throw ValidationError("dag '" + id + "' has a cycle through '" +
                            tasks[from].id + "'");
    }
  }
  check_acyclic(*this, successors(*this));
  (void)root();
  if (!(deadline > 0.0)) {
    throw ValidationError("dag '" + id + "': deadline must be > 0");
  }
}

std::size_t DagSpec::root() const {
  std::vector<bool> has_parent(tasks.size(), false);
  for (auto [from, to] : edges) has_parent.at(to) = true;
  std::size_t count = 0, found = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!has_parent[i]) {
      ++count;
      found = i;
    }
  }
  if (count != 1) {
    throw ValidationError("dag '" + id + "' must have exactly one root, has " +
                          std::to_string(count));
  }
  return found;
}

std::size_t DagSpec::task_index(const std::string& task_id) const {
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].id == task_id) return i;
  }
  throw ValidationError("dag '" + id + "' has no task '" + task_id + "'");
}

std::vector<TaskChain> unroll(const DagSpec& dag) {
  auto succ = successors(dag);
  check_acyclic(dag, succ);
  std::vector<TaskChain> chains;
  TaskChain path;
  std::function<void(std::size_t)> walk = [&](std::size_t v) {
    path.push_back(v);
    if (succ[v].empty()) {
      chains.push_back(path);
    } else {
      for (std::size_t w : succ[v]) walk(w);
    }
    path.pop_back();
  };
  walk(dag.root());
  return chains;
}

Seconds critical_path(const DagSpec& dag) {
  Seconds best = 0.0;
  for (const TaskChain& chain : unroll(dag)) {
    Seconds sum = 0.0;
    for (std::size_t t : chain) sum += dag.tasks[t].theta;
    best = std::max(best, sum);
  }
  return best;
}

std::vector<Seconds> apportion(std::span<const Seconds> thetas, Seconds delta) {
  const Seconds total = std::accumulate(thetas.begin(), thetas.end(), 0.0);
  std::vector<Seconds> spans;
  spans.reserve(thetas.size());
  for (Seconds t : thetas) spans.push_back(t / total * delta);
  return spans;
}

std::string_view to_string(PipelineStatus s) {
  switch (s) {
    case PipelineStatus::Running:
      return "running";
    case PipelineStatus::Completed:
      return "completed";
    case PipelineStatus::Failed:
      return "failed";
  }
  return "?";
}

PipelineInstance::PipelineInstance(PipelineId id, const DagSpec& dag,
                                   TaskChain chain, MicroBatchMeta trigger,
                                   Seconds trigger_time,
                                   std::uint64_t trigger_instance)
    : id_(id),
      dag_id_(dag.id),
      trigger_instance_(trigger_instance),
      chain_(std::move(chain)),
      trigger_(std::move(trigger)),
      trigger_time_(trigger_time) {
  Seconds total = 0.0;
  for (std::size_t t : chain_) {
    tasks_.push_back(dag.tasks.at(t));
    total += dag.tasks[t].theta;
  }
  // Absolute sub-deadlines from the cumulative theta share, so the last one
  // lands exactly on trigger + delta.
  Seconds prefix = 0.0;
  for (const TaskSpec& t : tasks_) {
    prefix += t.theta;
    sub_deadlines_.push_back(trigger_time_ + prefix / total * dag.deadline);
  }
  sub_deadlines_.back() = trigger_time_ + dag.deadline;
}

AdvanceResult PipelineInstance::advance(std::size_t completed,
                                        Seconds completion_time,
                                        const MicroBatchMeta& output) {
  if (status_ != PipelineStatus::Running || completed != cursor_) {
    throw ProtocolError("completion for task " + std::to_string(completed) +
                        " but pipeline cursor is at " +
                        std::to_string(cursor_));
  }
  if (completion_time > sub_deadlines_[cursor_]) {
    status_ = PipelineStatus::Failed;
    return PipelineLate{completion_time, sub_deadlines_[cursor_]};
  }
  ++cursor_;
  if (cursor_ == chain_.size()) {
    status_ = PipelineStatus::Completed;
    return PipelineCompleted{};
  }
  return NextTask{cursor_, sub_deadlines_[cursor_], output};
}

}  // namespace cofee
