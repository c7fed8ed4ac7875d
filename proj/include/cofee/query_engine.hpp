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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cofee/domain.hpp"

namespace cofee {

enum class MatchOp { Equals, Intersects, Contains };

MatchOp match_op_from_string(std::string_view name);
std::string_view to_string(MatchOp op);

/// Axis-aligned lat/long rectangle; a point is a degenerate rectangle.
struct GeoRect {
  double min_lat = 0.0;
  double min_lon = 0.0;
  double max_lat = 0.0;
  double max_lon = 0.0;

  static GeoRect point(double lat, double lon) { return {lat, lon, lat, lon}; }
};

struct SpatialPredicate {
  MatchOp op = MatchOp::Contains;
  GeoRect region;
};

struct TemporalPredicate {
  MatchOp op = MatchOp::Intersects;
  Seconds begin = 0.0;
  Seconds end = 0.0;
};

/// Equality on the sensor id (empty key) or on one key-value pair.
struct DomainPredicate {
  std::string key;
  std::string value;

  bool on_sensor_id() const { return key.empty(); }
};

struct FilterQuery {
  std::string dag_id;
  std::optional<SpatialPredicate> spatial;
  std::optional<TemporalPredicate> temporal;
  std::optional<DomainPredicate> domain;

  void validate() const;
  /// AND over the predicates that are present.
  bool matches(const MicroBatchMeta& meta) const;
};

/// Tolerance, in degrees, for spatial equality.
inline constexpr double kSpatialTolerance = 1e-6;

bool spatial_holds(const SpatialPredicate& p, double lat, double lon);
bool temporal_holds(const TemporalPredicate& p, Seconds t_begin, Seconds t_end);
bool domain_holds(const DomainPredicate& p, const MicroBatchMeta& meta);

/// DAG ids of every query that matches `meta`, sorted, without duplicates.
std::vector<std::string> match(const MicroBatchMeta& meta,
                               std::span<const FilterQuery> queries);

using RegistrationId = std::uint64_t;

class QueryEngine {
 public:
  RegistrationId register_query(FilterQuery q);
  void unregister(RegistrationId id);
  std::vector<std::string> match(const MicroBatchMeta& meta) const;
  std::size_t size() const { return queries_.size(); }

 private:
  std::map<RegistrationId, FilterQuery> queries_;
  std::map<std::string, RegistrationId, std::less<>> by_dag_;
  RegistrationId next_ = 1;
};

/// Parses "YYYY-MM-DDTHH:MM:SS" (UTC) into seconds since the Unix epoch.
Seconds parse_timestamp(std::string_view text);

}  // namespace cofee
