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
#include <vector>

#include "cofee/engine.hpp"
#include "cofee/fog_scheduler.hpp"
#include "cofee/master_scheduler.hpp"

namespace cofee {

/// Inquiry, bid and selection across fog partitions and the cloud, with
/// backup slots on the parent fog guarding every edge placement.
class CofeePolicy final : public SchedulerPolicy {
 public:
  explicit CofeePolicy(const Scenario& scenario);

  std::string_view name() const override { return "cofee"; }
  void on_start(Simulation& sim) override;
  void on_task_ready(Simulation& sim, TaskRef task,
                     const MicroBatchMeta& input) override;
  void on_task_complete(Simulation& sim, const Execution& exec) override;
  void on_edge_failure(Simulation& sim, ResourceId edge,
                       std::span<const ExecutionId> aborted) override;
  void on_event(Simulation& sim, const EventPayload& payload) override;
  /// Throws std::logic_error if a bid or temporary reservation leaked.
  void on_finish(Simulation& sim) override;

  const FogScheduler& fog(ResourceId id) const { return fogs_.at(id); }

 private:
  struct OpenInquiry {
    Inquiry inquiry;
    TaskRef task;
    std::size_t asked = 0;
    std::vector<Bid> bids;
    bool closed = false;
  };
  struct Placement {
    ResourceId fog;
    AssignmentKind kind;
    ResourceId worker;
    ReservationId reservation;
    bool slot_started = false;
  };

  FogContext context(const Simulation& sim) const;
  void on_inquiry(Simulation& sim, const ev::InquiryDelivered& e);
  void on_bid(Simulation& sim, const ev::BidDelivered& e);
  void select(Simulation& sim, OpenInquiry& open);
  void on_accept(Simulation& sim, const ev::AcceptDelivered& e);
  void on_reject(Simulation& sim, const ev::RejectDelivered& e);
  void on_slot_timer(Simulation& sim, const ev::SlotTimerFired& e);
  void on_report(Simulation& sim, const ev::FreeSlotReport& e);
  void reschedule_moved(Simulation& sim, ResourceId fog,
                        const std::vector<ReservationId>& moved);
  void send_reject(Simulation& sim, const Bid& bid);
  ResourceId pick_cloud(const MicroBatchMeta& input);

  std::map<ResourceId, FogScheduler> fogs_;
  std::vector<ResourceId> clouds_;
  std::size_t next_cloud_ = 0;
  std::map<ResourceId, FogReport> reports_;
  std::map<InquiryId, OpenInquiry> inquiries_;
  std::uint64_t next_inquiry_ = 1;
  std::map<std::uint64_t, Placement> placements_;  // by task key
  // Permanent reservations waiting for their timer: (fog, reservation) -> task.
  std::map<std::pair<ResourceId, ReservationId>, std::uint64_t> slot_tasks_;
};

}  // namespace cofee
