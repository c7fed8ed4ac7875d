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
#include <map>
#include <optional>
#include <memory>
#include <ostream>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cofee/dag.hpp"
#include "cofee/metrics.hpp"
#include "cofee/protocol.hpp"
#include "cofee/query_engine.hpp"
#include "cofee/scenario.hpp"

namespace cofee {

/// One task position of one pipeline.
struct TaskRef {
  PipelineId pipeline;
  std::uint32_t index = 0;

  std::uint64_t key() const {
    return (static_cast<std::uint64_t>(pipeline.value) << 32) | index;
  }
  static TaskRef from_key(std::uint64_t k) {
    return {PipelineId{static_cast<std::uint32_t>(k >> 32)},
            static_cast<std::uint32_t>(k)};
  }
  auto operator<=>(const TaskRef&) const = default;
};

using ExecutionId = StrongId<struct ExecutionTag, std::uint64_t>;

enum class ExecState { Scheduled, Running, Finished, Aborted };

struct Execution {
  ExecutionId id;
  TaskRef task;
  ResourceId worker;
  Tier tier = Tier::Cloud;
  Seconds start = 0.0;
  Seconds duration = 0.0;
  ExecState state = ExecState::Scheduled;
};

namespace ev {
struct MicroBatchGenerated { std::size_t arrival; };
struct QueryMatched { MicroBatchId batch; };
struct TriggerDag { MicroBatchId batch; std::size_t dag; };
struct InquiryDelivered { ResourceId fog; InquiryId inquiry; };
struct BidDelivered { Bid bid; };
struct SelectionTimeout { InquiryId inquiry; };
struct AcceptDelivered { ResourceId fog; InquiryId inquiry; ReservationId handle; };
struct RejectDelivered { ResourceId fog; ReservationId handle; };
struct TransferComplete { TaskRef task; ResourceId to; };
struct TaskStarted { ExecutionId exec; };
struct TaskCompleted { ExecutionId exec; };
struct EdgeFailed { ResourceId edge; };
struct SlotTimerFired { ResourceId fog; ReservationId reservation; Seconds start; };
struct FreeSlotReport { FogReport report; bool delivered = false; };
struct TaskNotified { TaskRef task; ExecutionId exec; };
struct PipelineDone { PipelineId pipeline; };
}  // namespace ev

using EventPayload =
    std::variant<ev::MicroBatchGenerated, ev::QueryMatched, ev::TriggerDag,
                 ev::InquiryDelivered, ev::BidDelivered, ev::SelectionTimeout,
                 ev::AcceptDelivered, ev::RejectDelivered, ev::TransferComplete,
                 ev::TaskStarted, ev::TaskCompleted, ev::EdgeFailed,
                 ev::SlotTimerFired, ev::FreeSlotReport, ev::TaskNotified,
                 ev::PipelineDone>;

std::string_view event_name(const EventPayload& p);

/// Events at the same instant run completions first, then notifications,
/// then ordinary messages, then slot timers; within a class, in the order
/// they were scheduled.
int event_priority(const EventPayload& p);

struct SimEvent {
  Seconds time = 0.0;
  int priority = 0;
  std::uint64_t seq = 0;
  EventPayload payload;
};

class Simulation;

/// Placement strategy plugged into the engine.
class SchedulerPolicy {
 public:
  virtual ~SchedulerPolicy() = default;
  virtual std::string_view name() const = 0;

  virtual void on_start(Simulation&) {}
  /// New pipelines of one DAG trigger; their first tasks become ready next.
  virtual void on_trigger(Simulation&, std::span<const PipelineId>) {}
  virtual void on_task_ready(Simulation& sim, TaskRef task,
                             const MicroBatchMeta& input) = 0;
  /// A finished execution; the engine has already recorded the outcome.
  virtual void on_task_complete(Simulation& sim, const Execution& exec) = 0;
  /// The edge is dead; `aborted` lists executions it was running or about
  /// to start.
  virtual void on_edge_failure(Simulation& sim, ResourceId edge,
                               std::span<const ExecutionId> aborted) = 0;
  /// Protocol events the engine does not handle itself.
  virtual void on_event(Simulation&, const EventPayload&) {}
  /// End-of-run audit hook.
  virtual void on_finish(Simulation&) {}
};

/// Single-threaded deterministic discrete-event run of one scenario under
/// one policy and seed.
class Simulation {
 public:
  Simulation(const Scenario& scenario, SchedulerPolicy& policy,
             std::uint64_t seed, std::ostream* trace = nullptr);

  MetricsReport run();

  Seconds now() const { return now_; }
  const Scenario& scenario() const { return scenario_; }
  const Topology& topology() const { return topo_; }
  const NetworkModel& network() const { return scenario_.network; }
  const BillingPolicy& billing() const { return scenario_.billing; }
  const MasterConfig& master() const { return scenario_.master; }
  /// The master runs beside the first cloud worker.
  ResourceId master_host() const { return master_host_; }
  Seconds control_latency(ResourceId from, ResourceId to) const;

  void schedule(Seconds at, EventPayload payload);

  const PipelineInstance& pipeline(PipelineId id) const {
    return pipelines_.at(id.value);
  }
  const TaskSpec& task(TaskRef t) const {
    return pipeline(t.pipeline).task(t.index);
  }
  Seconds sub_deadline(TaskRef t) const {
    return pipeline(t.pipeline).sub_deadline(t.index);
  }
  /// The task is the pipeline's current one and has not finished.
  bool task_open(TaskRef t) const;

  /// Moves `mb` to `to`, billing the pipeline; returns the arrival time.
  Seconds transfer(TaskRef t, const MicroBatchMeta& mb, ResourceId to);
  /// Runs the task on `worker` from max(start, now). Edges and fogs run one
  /// task at a time; the caller must check busy() first.
  ExecutionId execute(TaskRef t, ResourceId worker, Seconds start);
  const Execution& execution(ExecutionId id) const { return execs_.at(id); }
  bool busy(ResourceId worker) const { return occupant_.contains(worker); }
  /// Expected finish of the task occupying `worker`, if any.
  std::optional<Seconds> busy_until(ResourceId worker) const {
    auto it = occupant_.find(worker);
    if (it == occupant_.end()) return std::nullopt;
    const Execution& x = execs_.at(it->second);
    return x.start + x.duration;
  }
  bool alive(ResourceId r) const { return topo_.at(r).alive; }

  /// Records the placement time for throughput metrics.
  void task_scheduled(TaskRef t);
  void count_backup_execution() { ++record_.backup_executions; }
  void fail_pipeline(PipelineId id, std::string_view reason);

  /// No new work will arrive and no pipeline is running.
  bool winding_down() const;

  bool tracing() const { return trace_ != nullptr; }
  void trace(const std::string& line);

  std::mt19937_64& jitter_rng() { return jitter_rng_; }

 private:
  struct TriggerInstance {
    Seconds trigger_time = 0.0;
    std::size_t remaining = 0;
    bool failed = false;
    Seconds last_completion = 0.0;
  };
  struct Finished {
    ExecutionId exec;
    Seconds completion = 0.0;
  };

  void dispatch(const SimEvent& e);
  void handle(const ev::MicroBatchGenerated& e);
  void handle(const ev::QueryMatched& e);
  void handle(const ev::TriggerDag& e);
  void handle(const ev::TaskStarted& e);
  void handle(const ev::TaskCompleted& e);
  void handle(const ev::TaskNotified& e);
  void handle(const ev::EdgeFailed& e);
  void handle(const ev::PipelineDone& e);
  void ready(TaskRef t, const MicroBatchMeta& input);
  void finish_pipeline(PipelineId id, Seconds completion);
  void add_cost(PipelineId id, Cents amount, bool aborted);

  const Scenario& scenario_;
  SchedulerPolicy& policy_;
  std::uint64_t seed_;
  std::ostream* trace_;
  Topology topo_;
  ResourceId master_host_;
  QueryEngine queries_;
  std::vector<std::vector<TaskChain>> chains_;  // per DAG

  using Queue = std::priority_queue<SimEvent, std::vector<SimEvent>,
                                    bool (*)(const SimEvent&, const SimEvent&)>;
  Queue queue_;
  std::uint64_t next_seq_ = 0;
  Seconds now_ = 0.0;

  std::vector<Arrival> arrivals_;
  std::unordered_map<MicroBatchId, MicroBatchMeta> batches_;
  std::uint64_t next_batch_ = 1;
  std::vector<PipelineInstance> pipelines_;
  std::vector<TriggerInstance> triggers_;
  std::size_t running_ = 0;
  std::size_t inflight_ = 0;  // batches between generation and trigger
  std::map<std::uint64_t, Finished> finished_;  // task key -> first completion
  std::unordered_map<ExecutionId, Execution> execs_;
  std::uint64_t next_exec_ = 1;
  std::map<ResourceId, ExecutionId> occupant_;
  std::map<ResourceId, std::vector<ExecutionId>> assigned_;  // edge -> execs
  std::mt19937_64 jitter_rng_;
  RunRecord record_;
};

}  // namespace cofee
