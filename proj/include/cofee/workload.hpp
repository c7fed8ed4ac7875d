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
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "cofee/domain.hpp"

namespace cofee {

struct WorkloadConfig {
  double rate_per_min = 15.0;          // micro-batches per minute, all edges
  std::uint64_t size_min = 500'000;    // bytes
  std::uint64_t size_max = 1'500'000;  // bytes
  Seconds duration = 1200.0;           // arrivals stop here; the run drains
  std::optional<Seconds> mtbf;         // edge MTBF; empty means reliable
  Seconds window = 60.0;               // time span covered by one micro-batch
  double jitter = 0.0;                 // relative execution-time noise

  void validate() const;
};

/// Independent generator for one named purpose, derived from the run seed.
std::mt19937_64 substream(std::uint64_t seed, std::string_view name);

struct Arrival {
  Seconds time = 0.0;
  ResourceId edge;
  std::size_t dag = 0;
  std::uint64_t size = 0;
};

/// Poisson arrivals over [0, duration), each on a uniform edge and aimed at a
/// uniform DAG. Ordered by time.
std::vector<Arrival> generate_arrivals(const WorkloadConfig& w,
                                       std::span<const ResourceId> edges,
                                       std::size_t dag_count,
                                       std::mt19937_64& rng);

struct FailureEvent {
  Seconds time = 0.0;
  ResourceId edge;
};

/// At most one permanent failure per edge, with probability
/// min(1, duration / mtbf) and a uniform time in [0, duration).
std::vector<FailureEvent> inject_failures(std::span<const ResourceId> edges,
                                          std::optional<Seconds> mtbf,
                                          Seconds duration,
                                          std::mt19937_64& rng);

}  // namespace cofee
