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

#include "cofee/domain.hpp"

#include <algorithm>
#include <cmath>

namespace cofee {

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::Edge:
      return "edge";
    case Tier::Fog:
      return "fog";
    case Tier::Cloud:
      return "cloud";
  }
  return "?";
}

Tier tier_from_string(std::string_view name) {
  if (name == "edge") return Tier::Edge;
  if (name == "fog") return Tier::Fog;
  if (name == "cloud") return Tier::Cloud;
  throw ValidationError("unknown tier '" + std::string(name) + "'");
}

double failure_probability(const Resource& r, Seconds exec_duration) {
  if (r.tier != Tier::Edge) return 0.0;
  if (r.mtbf) {
    if (!std::isfinite(*r.mtbf)) return 0.0;
    return std::clamp(exec_duration / *r.mtbf, 0.0, 1.0);
  }
  return r.failure_prob;
}

ResourceId Topology::add(Resource r) {
  if (by_name_.contains(r.name)) {
    throw ValidationError("duplicate resource id '" + r.name + "'");
  }
  r.id = ResourceId{static_cast<std::uint32_t>(resources_.size())};
  by_name_.emplace(r.name, r.id);
  resources_.push_back(std::move(r));
  return resources_.back().id;
}

std::optional<ResourceId> Topology::find(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::vector<ResourceId> Topology::of_tier(Tier t) const {
  std::vector<ResourceId> out;
  for (const auto& r : resources_) {
    if (r.tier == t) out.push_back(r.id);
  }
  return out;
}

std::vector<ResourceId> Topology::children(ResourceId fog) const {
  std::vector<ResourceId> out;
  for (const auto& r : resources_) {
    if (r.tier == Tier::Edge && r.partition == fog) out.push_back(r.id);
  }
  return out;
}

void Topology::validate() const {
  bool has_base = false;
  for (const auto& r : resources_) {
    if (!(r.speed >= 1.0)) {
      throw ValidationError("resource '" + r.name + "': speed must be >= 1");
    }
    if (r.speed == 1.0) has_base = true;
    if (!(r.price >= 0.0)) {
      throw ValidationError("resource '" + r.name + "': negative price");
    }
    if (r.failure_prob < 0.0 || r.failure_prob > 1.0) {
      throw ValidationError("resource '" + r.name +
                            "': failure probability outside [0,1]");
    }
    switch (r.tier) {
      case Tier::Edge: {
        if (!r.partition || r.partition->value >= resources_.size() ||
            resources_[r.partition->value].tier != Tier::Fog) {
          throw ValidationError("edge '" + r.name + "' needs a parent fog");
        }
        break;
      }
      case Tier::Fog:
        if (r.partition != r.id) {
          throw ValidationError("fog '" + r.name + "' must be its own partition");
        }
        [[fallthrough]];
      case Tier::Cloud:
        if (r.failure_prob != 0.0 || r.mtbf) {
          throw ValidationError("resource '" + r.name +
                                "': only edges may fail");
        }
        if (r.tier == Tier::Cloud && r.partition) {
          throw ValidationError("cloud '" + r.name + "' has no partition");
        }
        break;
    }
  }
  if (!resources_.empty() && !has_base) {
    throw ValidationError("no base resource with speed 1");
  }
}

namespace {

std::pair<Tier, Tier> ordered(Tier a, Tier b) {
  return a <= b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

void NetworkModel::set_tier_link(Tier a, Tier b, LinkParams p) {
  tier_links_[ordered(a, b)] = p;
}

void NetworkModel::set_link(ResourceId from, ResourceId to, LinkParams p) {
  overrides_[{from.value, to.value}] = p;
}

LinkParams NetworkModel::link(const Resource& from, const Resource& to) const {
  if (auto it = overrides_.find({from.id.value, to.id.value});
      it != overrides_.end()) {
    return it->second;
  }
  auto key = ordered(from.tier, to.tier);
  if (key == std::pair{Tier::Edge, Tier::Fog}) {
    const Resource& edge = from.tier == Tier::Edge ? from : to;
    const Resource& fog = from.tier == Tier::Edge ? to : from;
    if (edge.partition != fog.id) return {};
  }
  if (key.first == Tier::Edge && key.second == Tier::Edge) return {};
  auto it = tier_links_.find(key);
  return it == tier_links_.end() ? LinkParams{} : it->second;
}

std::vector<Hop> NetworkModel::route(const Resource& from,
                                     const Resource& to) const {
  if (from.id == to.id) return {};
  std::vector<ResourceId> path;
  path.push_back(from.id);
  if (from.tier == Tier::Edge) path.push_back(*from.partition);
  if (to.tier == Tier::Edge) {
    if (path.back() != *to.partition) path.push_back(*to.partition);
  }
  if (path.back() != to.id) path.push_back(to.id);

  std::vector<Hop> hops;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    hops.push_back({path[i], path[i + 1]});
  }
  return hops;
}

Seconds NetworkModel::control_latency(const Resource& from, const Resource& to,
                                      const Topology& topo) const {
  Seconds total = 0.0;
  for (const Hop& h : route(from, to)) {
    LinkParams p = link(topo.at(h.from), topo.at(h.to));
    if (p.bandwidth_bps <= 0.0) {
      throw Unreachable("no link " + topo.at(h.from).name + " -> " +
                        topo.at(h.to).name);
    }
    total += p.latency;
  }
  return total;
}

void MicroBatchMeta::validate(const Topology& topo) const {
  if (t_begin > t_end) throw ValidationError("micro-batch with t_begin > t_end");
  if (size == 0) throw ValidationError("micro-batch with zero size");
  if (location.value >= topo.size()) {
    throw ValidationError("micro-batch located on unknown resource");
  }
}

double BillingPolicy::billed_units(double units) {
  // Snap values within floating-point noise of an integer before the ceiling
  // so that exact multiples of epsilon are not billed an extra increment.
  const double nearest = std::round(units);
  if (std::abs(units - nearest) <= 1e-9 * std::max(1.0, std::abs(units))) {
    return std::max(0.0, nearest);
  }
  return std::max(0.0, std::ceil(units));
}

Cents BillingPolicy::bill(Seconds duration, const Resource& r) const {
  if (duration <= 0.0) return 0.0;
  return billed_units(duration / epsilon) * r.price;
}

namespace {

template <typename F>
void for_each_hop(const MicroBatchMeta& mb, const Resource& from,
                  const Resource& to, const Topology& topo,
                  const NetworkModel& net, F&& f) {
  (void)mb;
  for (const Hop& h : net.route(from, to)) {
    const Resource& a = topo.at(h.from);
    const Resource& b = topo.at(h.to);
    LinkParams p = net.link(a, b);
    if (p.bandwidth_bps <= 0.0) {
      throw Unreachable("no link " + a.name + " -> " + b.name);
    }
    f(p);
  }
}

}  // namespace

Seconds transfer_time(const MicroBatchMeta& mb, const Resource& from,
                      const Resource& to, const Topology& topo,
                      const NetworkModel& net) {
  const double bits = static_cast<double>(mb.size) * 8.0;
  Seconds total = 0.0;
  for_each_hop(mb, from, to, topo, net, [&](const LinkParams& p) {
    total += p.latency + bits / p.bandwidth_bps;
  });
  return total;
}

Cents transfer_cost(const MicroBatchMeta& mb, const Resource& from,
                    const Resource& to, const Topology& topo,
                    const NetworkModel& net) {
  Cents per_byte = 0.0;
  for_each_hop(mb, from, to, topo, net,
               [&](const LinkParams& p) { per_byte += p.price_per_byte; });
  return static_cast<double>(mb.size) * per_byte;
}

Cents exec_cost(Seconds theta, const Resource& r, const BillingPolicy& billing) {
  if (theta <= 0.0) return 0.0;
  return BillingPolicy::billed_units(theta / (r.speed * billing.epsilon)) *
         r.price;
}

}  // namespace cofee
