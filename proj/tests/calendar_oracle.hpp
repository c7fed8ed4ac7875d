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

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cofee/slot_calendar.hpp"

namespace cofee::test {

struct CalendarPropertyStats {
  std::uint64_t sequences = 0;
  std::uint64_t operations = 0;
  std::uint64_t reservations = 0;   // successful reserve calls
  std::uint64_t defragmented = 0;   // of those, how many moved a neighbour
  std::uint64_t violations = 0;
  std::string first_violation;
};

/// Random reserve / release / make_permanent / advance sequences checked
/// against a plain list of intervals after every step:
///   - every reservation lies inside its own [earliest, latest] bounds;
///   - primaries sit on lane 0 and no two reservations of a lane overlap;
///   - free_slots() and top_free_slots() equal a brute-force scan;
///   - a request that fits without moving anything is always granted, and
///     then nothing moves;
///   - defragmentation moves at most the two neighbours of one gap.
/// A successful reserve leaves a layout that passes all of the above, which is
/// the witness that the request was brute-force feasible.
inline CalendarPropertyStats run_calendar_property(std::uint64_t seed, int sequences,
                                                   std::size_t max_live = 20) {
  struct Model {
    std::size_t lane;
    Seconds start, end, earliest, latest;
    ReservationKind kind;
  };
  constexpr auto kPrimary = ReservationKind::Primary;
  constexpr auto kBackup = ReservationKind::Backup;
  constexpr double kChis[] = {1.0, 1.5, 2.0, 3.7};

  CalendarPropertyStats st;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto violation = [&](int seq, int op, const std::string& what) {
    if (st.violations++ == 0) {
      std::ostringstream os;
      os << "sequence " << seq << " op " << op << ": " << what;
      st.first_violation = os.str();
    }
  };

  for (int seq = 0; seq < sequences; ++seq) {
    const double chi = kChis[seq % 4];
    SlotCalendar cal(chi);
    const auto lanes = static_cast<std::size_t>(chi);
    std::map<ReservationId, Model> model;

    auto overlaps = [&](std::size_t lane, Seconds s, Seconds e, ReservationId skip) {
      for (const auto& [id, m] : model) {
        if (id != skip && m.lane == lane && s < m.end && m.start < e) return true;
      }
      return false;
    };
    // Start candidates are omega and every reservation end after it: the
    // earliest feasible start in any lane is one of them.
    auto placeable = [&](ReservationKind kind, Seconds d, Seconds w, Seconds sg) {
      for (std::size_t lane = 0; lane < lanes; ++lane) {
        if (kind == kPrimary && lane != 0) continue;
        std::vector<Seconds> starts{std::max(w, cal.origin())};
        for (const auto& [id, m] : model) {
          if (m.lane == lane && m.end >= w) starts.push_back(m.end);
        }
        for (Seconds s : starts) {
          if (s + d <= sg && !overlaps(lane, s, s + d, ReservationId{0})) return true;
        }
      }
      return false;
    };
    auto brute_gaps = [&] {
      std::vector<FreeSlot> out;
      for (std::size_t lane = 0; lane < lanes; ++lane) {
        std::vector<const Model*> in_lane;
        for (const auto& [id, m] : model) {
          if (m.lane == lane) in_lane.push_back(&m);
        }
        std::sort(in_lane.begin(), in_lane.end(),
                  [](const Model* a, const Model* b) { return a->start < b->start; });
        Seconds cursor = cal.origin();
        for (const Model* m : in_lane) {
          if (m->start > cursor) out.push_back({lane, cursor, m->start});
          cursor = std::max(cursor, m->end);
        }
        out.push_back({lane, cursor, kForever});
      }
      return out;
    };

    for (int op = 0; op < 25; ++op) {
      ++st.operations;
      const double pick = unit(rng);
      if (pick < 0.5 && model.size() < max_live) {
        const auto kind = unit(rng) < 0.5 ? kPrimary : kBackup;
        const Seconds d = 0.5 + 9.5 * unit(rng);
        const Seconds w = cal.origin() + 40.0 * unit(rng);
        const Seconds sg = w + d * (0.8 + 2.2 * unit(rng));
        const bool easy = placeable(kind, d, w, sg);
        std::vector<ReservationId> moved;
        const auto id = cal.reserve(ReserveRequest{kind, 0, d, w, sg}, &moved);
        if (easy && !id) violation(seq, op, "a request that fits without slides was refused");
        if (easy && !moved.empty()) violation(seq, op, "slid reservations although a gap fitted");
        if (!id) {
          if (!moved.empty()) violation(seq, op, "failed reserve reported moves");
          continue;
        }
        ++st.reservations;
        if (!moved.empty()) ++st.defragmented;
        if (moved.size() > 2) violation(seq, op, "defragmentation moved more than two");
        for (ReservationId m : moved) {
          const Reservation& r = cal.get(m);
          model.at(m).start = r.start;
          model.at(m).end = r.end;
        }
        const Reservation& r = cal.get(*id);
        if (std::abs((r.end - r.start) - d) > 1e-9) violation(seq, op, "wrong length");
        model[*id] = Model{r.lane, r.start, r.end, w, sg, kind};
      } else if (pick < 0.75 && !model.empty()) {
        auto it = model.begin();
        std::advance(it, static_cast<long>(unit(rng) * static_cast<double>(model.size())));
        cal.release(it->first);
        model.erase(it);
      } else if (pick < 0.85 && !model.empty()) {
        cal.make_permanent(model.begin()->first);
      } else {
        cal.advance(cal.origin() + 5.0 * unit(rng));
      }

      for (const auto& [id, m] : model) {
        if (m.start < m.earliest - 1e-9 || m.end > m.latest + 1e-9) {
          violation(seq, op, "reservation outside its bounds");
        }
        if (m.kind == kPrimary && m.lane != 0) violation(seq, op, "primary off lane 0");
        if (overlaps(m.lane, m.start, m.end, id)) violation(seq, op, "overlap in a lane");
      }
      const auto gaps = brute_gaps();
      if (cal.free_slots() != gaps) violation(seq, op, "free slots differ from scan");
      const Seconds horizon = 50.0;
      std::vector<FreeSlot> top;
      for (FreeSlot s : gaps) {
        if (s.start >= cal.origin() + horizon) continue;
        s.end = std::min(s.end, cal.origin() + horizon);
        top.push_back(s);
      }
      std::stable_sort(top.begin(), top.end(), [](const FreeSlot& a, const FreeSlot& b) {
        if (a.length() != b.length()) return a.length() > b.length();
        if (a.start != b.start) return a.start < b.start;
        return a.lane < b.lane;
      });
      if (top.size() > 3) top.resize(3);
      if (cal.top_free_slots(3, horizon) != top) {
        violation(seq, op, "top free slots differ from scan");
      }
    }
    try {
      cal.check_invariants();
    } catch (const std::exception& e) {
      violation(seq, -1, e.what());
    }
    ++st.sequences;
  }
  return st;
}

}  // namespace cofee::test
