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

#include <string>

#include <json.hpp>

#include "cofee/config.hpp"
#include "cofee/domain.hpp"

namespace cofee::test {

inline constexpr double kEdgePerHour = 0.167;
inline constexpr double kFogPerHour = 1.467;
inline constexpr double kCloudPerHour = 10.0;

inline Resource make_resource(std::string name, Tier tier, double speed,
                              double per_hour) {
  Resource r;
  r.name = std::move(name);
  r.tier = tier;
  r.speed = speed;
  r.price = per_hour / 3600.0;  // epsilon = 1 s
  return r;
}

/// Fogs "fog-<f>" with edges "edge-<f>-<e>", then clouds "cloud-<c>".
/// Speeds 1:8:50 and the per-hour prices used throughout the tests.
inline Topology small_topology(int fogs, int edges_per_fog, int clouds) {
  Topology t;
  for (int f = 0; f < fogs; ++f) {
    const ResourceId fog = t.add(make_resource("fog-" + std::to_string(f),
                                               Tier::Fog, 8.0, kFogPerHour));
    t.at(fog).partition = fog;
    for (int e = 0; e < edges_per_fog; ++e) {
      Resource r = make_resource(
          "edge-" + std::to_string(f) + "-" + std::to_string(e), Tier::Edge,
          1.0, kEdgePerHour);
      r.partition = fog;
      t.add(std::move(r));
    }
  }
  for (int c = 0; c < clouds; ++c) {
    t.add(make_resource("cloud-" + std::to_string(c), Tier::Cloud, 50.0,
                        kCloudPerHour));
  }
  return t;
}

inline NetworkModel default_network() {
  NetworkModel n;
  n.set_tier_link(Tier::Edge, Tier::Fog, {60e6, 0.001, 0.0});
  n.set_tier_link(Tier::Fog, Tier::Fog, {100e6, 0.005, 0.0});
  n.set_tier_link(Tier::Fog, Tier::Cloud, {100e6, 0.005, 0.0});
  n.set_tier_link(Tier::Cloud, Tier::Cloud, {100e6, 0.005, 0.0});
  return n;
}

inline MicroBatchMeta batch_at(const Topology& t, const std::string& where,
                               std::uint64_t bytes) {
  MicroBatchMeta mb;
  mb.id = MicroBatchId{1};
  mb.size = bytes;
  mb.location = *t.find(where);
  return mb;
}

inline bool near(double a, double b, double rel = 1e-6) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= rel * scale;
}

inline bool rel_near(double a, double b, double rel = 1e-6) {
  return std::abs(a - b) <= rel * std::abs(b);
}

/// A JSON scenario with `fogs` partitions of `edges` edges and `clouds`
/// clouds. Callers patch workload, dags and policy as needed.
inline nlohmann::json scenario_json(int fogs, int edges, int clouds) {
  using nlohmann::json;
  json resources = json::array();
  for (int f = 0; f < fogs; ++f) {
    const std::string fog = "fog-" + std::to_string(f);
    resources.push_back({{"id", fog}, {"tier", "fog"}});
    for (int e = 0; e < edges; ++e) {
      resources.push_back({{"id", "edge-" + std::to_string(f) + "-" + std::to_string(e)},
                           {"tier", "edge"},
                           {"parent", fog}});
    }
  }
  for (int c = 0; c < clouds; ++c) {
    resources.push_back({{"id", "cloud-" + std::to_string(c)}, {"tier", "cloud"}});
  }
  return {
      {"name", "test"},
      {"resource_defaults",
       {{"edge", {{"speed", 1.0}, {"price_per_hour", kEdgePerHour}}},
        {"fog", {{"speed", 8.0}, {"price_per_hour", kFogPerHour}}},
        {"cloud", {{"speed", 50.0}, {"price_per_hour", kCloudPerHour}}}}},
      {"resources", resources},
      {"workload", {{"rate_per_min", 2.0}, {"duration_sec", 300.0}}},
      {"dags",
       json::array({{{"id", "chain"},
                     {"tasks",
                      json::array({{{"id", "a"}, {"theta", 20.0}, {"output_bytes", 800000}},
                                   {{"id", "b"}, {"theta", 30.0}, {"output_bytes", 600000}}})},
                     {"edges", json::array({json::array({"a", "b"})})}}})},
      {"deadline_factor", 1.5},
  };
}

}  // namespace cofee::test
