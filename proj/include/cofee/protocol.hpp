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
#include <optional>
#include <string>
#include <vector>

#include "cofee/domain.hpp"
#include "cofee/slot_calendar.hpp"

namespace cofee {

using InquiryId = StrongId<struct InquiryTag, std::uint64_t>;

/// Request for bids on one task of a running pipeline.
struct Inquiry {
  InquiryId id;
  std::uint64_t task = 0;  // opaque task key owned by the caller
  Seconds theta = 0.0;
  Seconds sub_deadline = 0.0;
  MicroBatchMeta input;    // id, size and current location
  Seconds issued_at = 0.0;
};

enum class BidKind { Empty, EdgeWithBackup, FogDirect, Cloud };

std::string_view to_string(BidKind kind);

struct Bid {
  InquiryId inquiry;
  ResourceId bidder;
  BidKind kind = BidKind::Empty;
  std::optional<ResourceId> worker;
  Tier worker_tier = Tier::Cloud;
  std::string worker_name;
  Cents kappa = 0.0;
  std::optional<ReservationId> reservation;  // fog bids only
  Seconds projected_completion = 0.0;

  bool viable() const { return kind != BidKind::Empty; }
};

/// A fog's periodic summary of its longest free slots.
struct FogReport {
  ResourceId fog;
  Seconds reported_at = 0.0;
  std::vector<FreeSlot> slots;
};

}  // namespace cofee
