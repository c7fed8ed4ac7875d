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

#include "cofee/workload.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace cofee {

void WorkloadConfig::validate() const {
  if (!(rate_per_min >= 0.0) || !std::isfinite(rate_per_min)) {
    throw ValidationError("workload.rate_per_min must be >= 0");
  }
  if (size_min == 0 || size_min > size_max) {
    throw ValidationError("workload sizes need 0 < size_min <= size_max");
  }
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw ValidationError("workload.duration must be >= 0");
  }
  if (mtbf && !(*mtbf > 0.0)) {
    throw ValidationError("workload.mtbf must be > 0");
  }
  if (!(window >= 0.0)) throw ValidationError("workload.window must be >= 0");
  if (!(jitter >= 0.0 && jitter < 1.0)) {
    throw ValidationError("workload.jitter must be in [0, 1)");
  }
}

std::mt19937_64 substream(std::uint64_t seed, std::string_view name) {
  // FNV-1a keeps the mapping stable across platforms and library versions.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h),
                    static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

std::vector<Arrival> generate_arrivals(const WorkloadConfig& w,
                                       std::span<const ResourceId> edges,
                                       std::size_t dag_count,
                                       std::mt19937_64& rng) {
  std::vector<Arrival> out;
  if (w.rate_per_min <= 0.0 || edges.empty() || dag_count == 0) return out;
  std::exponential_distribution<double> gap(w.rate_per_min / 60.0);
  std::uniform_int_distribution<std::size_t> pick_edge(0, edges.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_dag(0, dag_count - 1);
  std::uniform_int_distribution<std::uint64_t> pick_size(w.size_min, w.size_max);
  for (Seconds t = gap(rng); t < w.duration; t += gap(rng)) {
    Arrival a;
    a.time = t;
    a.edge = edges[pick_edge(rng)];
    a.dag = pick_dag(rng);
    a.size = pick_size(rng);
    out.push_back(a);
  }
  return out;
}

std::vector<FailureEvent> inject_failures(std::span<const ResourceId> edges,
                                          std::optional<Seconds> mtbf,
                                          Seconds duration,
                                          std::mt19937_64& rng) {
  std::vector<FailureEvent> out;
  if (!mtbf || !std::isfinite(*mtbf) || duration <= 0.0) return out;
  const double p = std::min(1.0, duration / *mtbf);
  std::bernoulli_distribution fails(p);
  std::uniform_real_distribution<double> when(0.0, duration);
  for (ResourceId e : edges) {
    // Both draws happen for every edge so the stream position does not depend
    // on earlier outcomes.
    const bool f = fails(rng);
    const Seconds t = when(rng);
    if (f) out.push_back({t, e});
  }
  std::sort(out.begin(), out.end(), [](const FailureEvent& a, const FailureEvent& b) {
    return std::tie(a.time, a.edge) < std::tie(b.time, b.edge);
  });
  return out;
}

}  // namespace cofee
