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

#include <array>
#include <cstdint>
#include <istream>

#include "cofee/scenario.hpp"

namespace cofee {

/// Costs recomputed from the bill lines of an event trace.
struct TraceAudit {
  Cents total = 0.0;           // recomputed from durations and sizes
  Cents logged_total = 0.0;    // sum of the amounts written in the trace
  std::uint64_t bill_lines = 0;
  std::uint64_t mismatches = 0;  // lines whose amount disagrees with the model
  std::array<std::uint64_t, 3> executions_by_tier{};  // Edge, Fog, Cloud
  bool time_monotone = true;
};

TraceAudit audit_trace(std::istream& trace, const Scenario& scenario);

}  // namespace cofee
