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

#include "cofee/slot_calendar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cofee {

SlotCalendar::SlotCalendar(double oversubscription, Seconds origin)
    : oversubscription_(oversubscription), origin_(origin) {
  if (!(oversubscription >= 1.0)) {
    throw ValidationError("over-subscription ratio must be >= 1");
  }
  const auto count = static_cast<std::size_t>(std::floor(oversubscription));
  lanes_.resize(count);
  for (std::size_t lane = 0; lane < count; ++lane) {
    add_gap(lane, origin_, kForever);
  }
}

void SlotCalendar::add_gap(std::size_t lane, Seconds start, Seconds end) {
  start = std::max(start, origin_);
  if (!(end > start)) return;
  lanes_[lane].gaps.emplace(start, end);
  gap_index_.insert({end - start, start, lane});
}

void SlotCalendar::remove_gap(std::size_t lane, Seconds start) {
  auto& gaps = lanes_[lane].gaps;
  auto it = gaps.find(start);
  if (it == gaps.end()) return;
  gap_index_.erase({it->second - it->first, it->first, lane});
  gaps.erase(it);
}

void SlotCalendar::advance(Seconds now) {
  if (now <= origin_) return;
  origin_ = now;
  for (std::size_t lane = 0; lane < lanes_.size(); ++lane) {
    auto& gaps = lanes_[lane].gaps;
    while (!gaps.empty() && gaps.begin()->first < origin_) {
      auto [start, end] = *gaps.begin();
      remove_gap(lane, start);
      add_gap(lane, origin_, end);
      if (end > origin_) break;
    }
  }
}

void SlotCalendar::insert_interval(Reservation& r) {
  auto& lane = lanes_[r.lane];
  auto it = lane.gaps.upper_bound(r.start);
  if (it == lane.gaps.begin()) {
    throw std::logic_error("reservation does not fall inside a free gap");
  }
  --it;
  const Seconds gap_start = it->first;
  const Seconds gap_end = it->second;
  if (r.end > gap_end) {
    throw std::logic_error("reservation does not fall inside a free gap");
  }
  remove_gap(r.lane, gap_start);
  add_gap(r.lane, gap_start, r.start);
  add_gap(r.lane, r.end, gap_end);
  lane.by_start.emplace(r.start, r.id);
}

void SlotCalendar::erase_interval(const Reservation& r) {
  auto& lane = lanes_[r.lane];
  lane.by_start.erase(r.start);
  Seconds merged_start = r.start;
  Seconds merged_end = r.end;
  auto right = lane.gaps.find(r.end);
  if (right != lane.gaps.end()) {
    merged_end = right->second;
    remove_gap(r.lane, right->first);
  }
  auto left = lane.gaps.lower_bound(r.start);
  if (left != lane.gaps.begin()) {
    --left;
    if (left->second == r.start) {
      merged_start = left->first;
      remove_gap(r.lane, left->first);
    }
  }
  add_gap(r.lane, merged_start, merged_end);
}

void SlotCalendar::move(ReservationId id, Seconds new_start) {
  Reservation& r = by_id_.at(id);
  erase_interval(r);
  const Seconds len = r.length();
  r.start = new_start;
  r.end = new_start + len;
  insert_interval(r);
}

const Reservation* SlotCalendar::predecessor(std::size_t lane,
                                             Seconds gap_start) const {
  const auto& by_start = lanes_[lane].by_start;
  auto it = by_start.lower_bound(gap_start);
  if (it == by_start.begin()) return nullptr;
  --it;
  const Reservation& r = by_id_.at(it->second);
  return r.end == gap_start ? &r : nullptr;
}

const Reservation* SlotCalendar::successor(std::size_t lane,
                                           Seconds gap_end) const {
  if (gap_end == kForever) return nullptr;
  const auto& by_start = lanes_[lane].by_start;
  auto it = by_start.find(gap_end);
  return it == by_start.end() ? nullptr : &by_id_.at(it->second);
}

namespace {

bool fits(Seconds omega, Seconds sigma, Seconds needed, Seconds t,
          Seconds t_end) {
  const Seconds finish = std::max(omega, t) + needed;
  return finish <= t_end && finish <= sigma;
}

}  // namespace

std::optional<ReservationId> SlotCalendar::reserve(
    const ReserveRequest& req, std::vector<ReservationId>* moved) {
  if (!(req.duration > 0.0)) {
    throw ValidationError("reservation duration must be > 0");
  }
  if (!(req.earliest_start < req.latest_end)) return std::nullopt;

  // Backups try the over-subscription lanes before lane 0 so the fog's real
  // timeline stays open for primaries; worst-fit applies within each pass.
  std::optional<FreeSlot> chosen;
  const bool spare_lanes = req.kind == ReservationKind::Backup && lanes_.size() > 1;
  for (int pass = spare_lanes ? 0 : 1; pass < 2 && !chosen; ++pass) {
    for (const GapKey& g : gap_index_) {
      if (!lane_allowed(req.kind, g.lane)) continue;
      if (pass == 0 && g.lane == 0) continue;
      const Seconds end = lanes_[g.lane].gaps.at(g.start);
      if (fits(req.earliest_start, req.latest_end, req.duration, g.start, end)) {
        chosen = FreeSlot{g.lane, g.start, end};
        break;
      }
    }
  }
  if (!chosen) {
    auto defrag = defragment(req.kind, req.earliest_start, req.latest_end,
                             req.duration);
    if (!defrag) return std::nullopt;
    chosen = defrag->slot;
    if (moved) moved->insert(moved->end(), defrag->moved.begin(),
                             defrag->moved.end());
  }

  Reservation r;
  r.id = ReservationId{next_id_++};
  r.task = req.task;
  r.kind = req.kind;
  r.lane = chosen->lane;
  r.start = std::max(req.earliest_start, chosen->start);
  r.end = r.start + req.duration;
  r.earliest_start = req.earliest_start;
  r.latest_end = req.latest_end;
  insert_interval(r);
  by_id_.emplace(r.id, r);
  return r.id;
}

std::optional<DefragResult> SlotCalendar::defragment(ReservationKind kind,
                                                     Seconds omega,
                                                     Seconds sigma,
                                                     Seconds needed) {
  struct Candidate {
    Seconds clipped;
    FreeSlot gap;
  };
  std::vector<Candidate> candidates;
  for (std::size_t lane = 0; lane < lanes_.size(); ++lane) {
    if (!lane_allowed(kind, lane)) continue;
    for (auto [start, end] : lanes_[lane].gaps) {
      if (start >= sigma) break;
      if (end <= omega) continue;
      candidates.push_back(
          {std::min(end, sigma) - std::max(start, omega), {lane, start, end}});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.clipped != b.clipped) return a.clipped > b.clipped;
                     if (a.gap.start != b.gap.start) {
                       return a.gap.start < b.gap.start;
                     }
                     return a.gap.lane < b.gap.lane;
                   });

  for (const Candidate& c : candidates) {
    const FreeSlot& gap = c.gap;
    const Reservation* succ = successor(gap.lane, gap.end);
    const Reservation* pred = predecessor(gap.lane, gap.start);

    std::optional<Seconds> succ_start;  // successor pushed later
    if (succ && movable(*succ)) {
      Seconds limit = succ->latest_end;
      auto next = lanes_[gap.lane].by_start.upper_bound(succ->start);
      if (next != lanes_[gap.lane].by_start.end()) {
        limit = std::min(limit, next->first);
      }
      const Seconds len = succ->length();
      Seconds s = limit - len;
      // Rounding may push the slid end past its limit by an ulp.
      while (s + len > limit) s = std::nextafter(s, -kForever);
      if (s > succ->start) succ_start = s;
    }
    std::optional<Seconds> pred_start;  // predecessor pulled earlier
    if (pred && movable(*pred)) {
      Seconds floor = std::max(pred->earliest_start, origin_);
      auto it = lanes_[gap.lane].by_start.find(pred->start);
      if (it != lanes_[gap.lane].by_start.begin()) {
        const Reservation& prev = by_id_.at(std::prev(it)->second);
        floor = std::max(floor, prev.end);
      }
      if (floor < pred->start) pred_start = floor;
    }

    auto commit = [&](SlideKind slide, bool use_succ,
                      bool use_pred) -> DefragResult {
      DefragResult out{gap, slide, {}};
      if (use_succ) {
        const ReservationId id = succ->id;
        move(id, *succ_start);
        out.slot.end = by_id_.at(id).start;
        out.moved.push_back(id);
      }
      if (use_pred) {
        const ReservationId id = pred->id;
        move(id, *pred_start);
        out.slot.start = by_id_.at(id).end;
        out.moved.push_back(id);
      }
      return out;
    };

    if (succ_start &&
        fits(omega, sigma, needed, gap.start, *succ_start)) {
      return commit(SlideKind::SuccessorLater, true, false);
    }
    if (pred_start &&
        fits(omega, sigma, needed, *pred_start + pred->length(), gap.end)) {
      return commit(SlideKind::PredecessorEarlier, false, true);
    }
    if (succ_start && pred_start &&
        fits(omega, sigma, needed, *pred_start + pred->length(),
             *succ_start)) {
      return commit(SlideKind::Both, true, true);
    }
  }
  return std::nullopt;
}

void SlotCalendar::release(ReservationId id) {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    throw ProtocolError("unknown reservation " + std::to_string(id.value));
  }
  erase_interval(it->second);
  by_id_.erase(it);
}

void SlotCalendar::make_permanent(ReservationId id) {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    throw ProtocolError("unknown reservation " + std::to_string(id.value));
  }
  it->second.state = ReservationState::Permanent;
}

const Reservation& SlotCalendar::get(ReservationId id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    throw ProtocolError("unknown reservation " + std::to_string(id.value));
  }
  return it->second;
}

std::vector<Reservation> SlotCalendar::reservations() const {
  std::vector<Reservation> out;
  for (std::size_t lane = 0; lane < lanes_.size(); ++lane) {
    for (auto [start, id] : lanes_[lane].by_start) out.push_back(by_id_.at(id));
  }
  return out;
}

std::vector<FreeSlot> SlotCalendar::free_slots() const {
  std::vector<FreeSlot> out;
  for (std::size_t lane = 0; lane < lanes_.size(); ++lane) {
    for (auto [start, end] : lanes_[lane].gaps) out.push_back({lane, start, end});
  }
  return out;
}

std::vector<FreeSlot> SlotCalendar::top_free_slots(std::size_t k,
                                                   Seconds horizon) const {
  const Seconds limit = origin_ + horizon;
  std::vector<FreeSlot> out;
  for (const FreeSlot& s : free_slots()) {
    if (s.start >= limit) continue;
    out.push_back({s.lane, s.start, std::min(s.end, limit)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const FreeSlot& a, const FreeSlot& b) {
                     if (a.length() != b.length()) return a.length() > b.length();
                     if (a.start != b.start) return a.start < b.start;
                     return a.lane < b.lane;
                   });
  if (out.size() > k) out.resize(k);
  return out;
}

void SlotCalendar::check_invariants() const {
  auto fail = [](const std::string& what) {
    throw std::logic_error("slot calendar invariant: " + what);
  };
  std::size_t indexed = 0;
  std::size_t counted = 0;
  for (std::size_t lane = 0; lane < lanes_.size(); ++lane) {
    const Lane& l = lanes_[lane];
    // Rebuild the expected gaps from the reservations alone.
    std::vector<FreeSlot> expected;
    Seconds cursor = origin_;
    Seconds prev_end = -kForever;
    for (auto [start, id] : l.by_start) {
      const Reservation& r = by_id_.at(id);
      ++counted;
      if (r.start != start || r.lane != lane) fail("index out of sync");
      if (!(r.end > r.start)) fail("empty reservation");
      if (r.start < r.earliest_start - 1e-9) fail("start before earliest start");
      if (r.end > r.latest_end + 1e-9) fail("end after latest end");
      if (r.kind == ReservationKind::Primary && lane != 0) {
        fail("primary outside lane 0");
      }
      if (start < prev_end) fail("overlapping reservations");
      prev_end = r.end;
      if (start > cursor) expected.push_back({lane, cursor, start});
      cursor = std::max(cursor, r.end);
    }
    expected.push_back({lane, cursor, kForever});
    std::vector<FreeSlot> actual;
    for (auto [start, end] : l.gaps) {
      actual.push_back({lane, start, end});
      if (!gap_index_.contains({end - start, start, lane})) {
        fail("gap missing from index");
      }
      ++indexed;
    }
    if (actual != expected) fail("gaps differ from a scan of reservations");
  }
  if (indexed != gap_index_.size()) fail("stale gaps in index");
  if (counted != by_id_.size()) fail("reservation missing from lanes");
}

}  // namespace cofee
