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
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "cofee/domain.hpp"

namespace cofee {

using ReservationId = StrongId<struct ReservationTag, std::uint64_t>;

enum class ReservationKind { Primary, Backup };
enum class ReservationState { Temporary, Permanent };

inline constexpr Seconds kForever = std::numeric_limits<Seconds>::infinity();

/// A slice [start, end) of a fog's future timeline held for one task.
/// `earliest_start` and `latest_end` bound every later slide.
struct Reservation {
  ReservationId id;
  std::uint64_t task = 0;
  ReservationKind kind = ReservationKind::Primary;
  ReservationState state = ReservationState::Temporary;
  std::size_t lane = 0;
  Seconds start = 0.0;
  Seconds end = 0.0;
  Seconds earliest_start = 0.0;
  Seconds latest_end = 0.0;

  Seconds length() const { return end - start; }
};

struct FreeSlot {
  std::size_t lane = 0;
  Seconds start = 0.0;
  Seconds end = kForever;

  Seconds length() const { return end - start; }
  bool operator==(const FreeSlot&) const = default;
};

struct ReserveRequest {
  ReservationKind kind = ReservationKind::Primary;
  std::uint64_t task = 0;
  Seconds duration = 0.0;
  Seconds earliest_start = 0.0;
  Seconds latest_end = 0.0;
};

enum class SlideKind { SuccessorLater, PredecessorEarlier, Both };

struct DefragResult {
  FreeSlot slot;
  SlideKind slide;
  std::vector<ReservationId> moved;
};

/// Future timeline of one fog.
///
/// The timeline is split into floor(chi) lanes. Lane 0 is the fog's real
/// execution timeline and holds every primary slot; the remaining lanes exist
/// only with over-subscription and hold backup slots, so up to floor(chi)
/// backups can share an instant while primaries never overlap. Within a lane
/// intervals are half-open and disjoint.
///
/// Free gaps are indexed by length so the worst-fit search walks them from
/// largest to smallest; insert, release and slide are O(log n).
class SlotCalendar {
 public:
  explicit SlotCalendar(double oversubscription = 1.0, Seconds origin = 0.0);

  std::size_t lanes() const { return lanes_.size(); }
  double oversubscription() const { return oversubscription_; }
  Seconds origin() const { return origin_; }

  /// Moves the timeline origin forward. Free time before `now` is dropped;
  /// reservations that already started become immovable.
  void advance(Seconds now);

  /// Worst-fit reservation, falling back to one defragmentation pass.
  /// Reservations shifted by defragmentation are appended to `moved`.
  std::optional<ReservationId> reserve(const ReserveRequest& req,
                                       std::vector<ReservationId>* moved = nullptr);

  /// Slides the neighbours of the largest gaps inside [omega, sigma] until a
  /// gap can hold `needed`. Leaves the calendar untouched when it fails.
  std::optional<DefragResult> defragment(ReservationKind kind, Seconds omega,
                                         Seconds sigma, Seconds needed);

  void release(ReservationId id);
  void make_permanent(ReservationId id);

  bool contains(ReservationId id) const { return by_id_.contains(id); }
  const Reservation& get(ReservationId id) const;
  std::size_t size() const { return by_id_.size(); }

  /// Reservations ordered by lane then start.
  std::vector<Reservation> reservations() const;
  /// Gaps ordered by lane then start.
  std::vector<FreeSlot> free_slots() const;
  /// The k longest gaps clipped to [origin, origin + horizon].
  std::vector<FreeSlot> top_free_slots(std::size_t k, Seconds horizon) const;

  /// Throws std::logic_error when an internal invariant is broken.
  void check_invariants() const;

 private:
  struct Lane {
    std::map<Seconds, ReservationId> by_start;
    std::map<Seconds, Seconds> gaps;  // start -> end
  };
  struct GapKey {
    Seconds length;
    Seconds start;
    std::size_t lane;
    bool operator<(const GapKey& o) const {
      if (length != o.length) return length > o.length;
      if (start != o.start) return start < o.start;
      return lane < o.lane;
    }
  };

  bool lane_allowed(ReservationKind kind, std::size_t lane) const {
    return kind == ReservationKind::Backup || lane == 0;
  }
  void add_gap(std::size_t lane, Seconds start, Seconds end);
  void remove_gap(std::size_t lane, Seconds start);
  void insert_interval(Reservation& r);
  void erase_interval(const Reservation& r);
  void move(ReservationId id, Seconds new_start);
  const Reservation* predecessor(std::size_t lane, Seconds gap_start) const;
  const Reservation* successor(std::size_t lane, Seconds gap_end) const;
  bool movable(const Reservation& r) const { return r.start > origin_; }

  double oversubscription_;
  Seconds origin_;
  std::vector<Lane> lanes_;
  std::set<GapKey> gap_index_;
  std::unordered_map<ReservationId, Reservation> by_id_;
  std::uint64_t next_id_ = 1;
};

}  // namespace cofee
