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
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cofee/metrics.hpp"
#include "cofee/scenario.hpp"

namespace cofee {

/// One simulation of `scenario` under `policy`.
MetricsReport run_once(const Scenario& scenario, std::string_view policy,
                       std::uint64_t seed, std::ostream* trace = nullptr);

struct ExperimentOptions {
  std::size_t threads = 1;
  /// When set, each run writes trace-<policy>-<seed>.log here.
  std::optional<std::filesystem::path> trace_dir;
};

/// Every (policy, seed) pair, policies outermost. Runs are independent, so
/// the result does not depend on the thread count.
std::vector<MetricsReport> run_experiment(const Scenario& scenario,
                                          const std::vector<std::string>& policies,
                                          const std::vector<std::uint64_t>& seeds,
                                          const ExperimentOptions& options = {});

}  // namespace cofee
