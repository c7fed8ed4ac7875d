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

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cofee/errors.hpp"

namespace cofee {

using Seconds = double;
using Cents = double;

template <typename Tag, typename Rep = std::uint32_t>
struct StrongId {
  Rep value{};
  constexpr auto operator<=>(const StrongId&) const = default;
};

using ResourceId = StrongId<struct ResourceTag>;
using MicroBatchId = StrongId<struct MicroBatchTag, std::uint64_t>;

enum class Tier { Edge, Fog, Cloud };

std::string_view to_string(Tier tier);
Tier tier_from_string(std::string_view name);

struct Resource {
  ResourceId id;
  std::string name;
  Tier tier = Tier::Edge;
  // Parent fog for edges, the fog itself for fogs, empty for cloud.
  std::optional<ResourceId> partition;
  double speed = 1.0;             // relative to the base resource
  Cents price = 0.0;              // per billing increment
  double failure_prob = 0.0;      // fixed per-task failure probability
  std::optional<Seconds> mtbf;    // when set, overrides failure_prob
  bool alive = true;
  double lat = 0.0;
  double lon = 0.0;
};

/// Per-task failure probability used when pricing a bid. With an MTBF the
/// estimate is the chance of a failure during the execution itself.
double failure_probability(const Resource& r, Seconds exec_duration);

/// All workers known to the system, indexed densely by ResourceId.
class Topology {
 public:
  ResourceId add(Resource r);

  /// Checks parent links, speeds, prices and the base resource.
  void validate() const;

  const Resource& at(ResourceId id) const { return resources_.at(id.value); }
  Resource& at(ResourceId id) { return resources_.at(id.value); }
  std::optional<ResourceId> find(std::string_view name) const;
  const std::vector<Resource>& resources() const { return resources_; }
  std::size_t size() const { return resources_.size(); }

  std::vector<ResourceId> edges() const { return of_tier(Tier::Edge); }
  std::vector<ResourceId> fogs() const { return of_tier(Tier::Fog); }
  std::vector<ResourceId> clouds() const { return of_tier(Tier::Cloud); }
  std::vector<ResourceId> children(ResourceId fog) const;

 private:
  std::vector<ResourceId> of_tier(Tier t) const;

  std::vector<Resource> resources_;
  std::map<std::string, ResourceId, std::less<>> by_name_;
};

struct LinkParams {
  double bandwidth_bps = 0.0;  // 0 means unreachable
  Seconds latency = 0.0;
  Cents price_per_byte = 0.0;
};

struct Hop {
  ResourceId from;
  ResourceId to;
};

/// Bandwidth, latency and transfer price between resources. Edge traffic
/// always transits the parent fog.
class NetworkModel {
 public:
  /// Symmetric default for a tier pair. Edge-Fog applies to an edge and its
  /// own parent fog only.
  void set_tier_link(Tier a, Tier b, LinkParams p);
  /// Ordered per-pair override.
  void set_link(ResourceId from, ResourceId to, LinkParams p);

  LinkParams link(const Resource& from, const Resource& to) const;
  std::vector<Hop> route(const Resource& from, const Resource& to) const;

  /// Sum of hop latencies; used for small control messages.
  Seconds control_latency(const Resource& from, const Resource& to,
                          const Topology& topo) const;

 private:
  std::map<std::pair<Tier, Tier>, LinkParams> tier_links_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, LinkParams> overrides_;
};

struct MicroBatchMeta {
  MicroBatchId id;
  std::string sid;
  Seconds t_begin = 0.0;
  Seconds t_end = 0.0;
  double lat = 0.0;
  double lon = 0.0;
  std::vector<std::pair<std::string, std::string>> kv;
  std::uint64_t size = 0;  // bytes
  ResourceId location;

  void validate(const Topology& topo) const;
};

struct BillingPolicy {
  Seconds epsilon = 1.0;

  /// Whole billing increments needed to cover `units` increments.
  static double billed_units(double units);
  /// Cost of occupying `r` for `duration` wall seconds.
  Cents bill(Seconds duration, const Resource& r) const;
};

Seconds transfer_time(const MicroBatchMeta& mb, const Resource& from,
                      const Resource& to, const Topology& topo,
                      const NetworkModel& net);

Cents transfer_cost(const MicroBatchMeta& mb, const Resource& from,
                    const Resource& to, const Topology& topo,
                    const NetworkModel& net);

/// ceil(theta / (speed * epsilon)) * price, theta in base-resource seconds.
Cents exec_cost(Seconds theta, const Resource& r, const BillingPolicy& billing);

/// Execution time of a task with base time `theta` on `r`.
inline Seconds exec_duration(Seconds theta, const Resource& r) {
  return theta / r.speed;
}

}  // namespace cofee

template <typename Tag, typename Rep>
struct std::hash<cofee::StrongId<Tag, Rep>> {
  std::size_t operator()(const cofee::StrongId<Tag, Rep>& id) const noexcept {
    return std::hash<Rep>{}(id.value);
  }
};
