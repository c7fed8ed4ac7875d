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

#include "cofee/query_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cofee {

MatchOp match_op_from_string(std::string_view name) {
  if (name == "equals") return MatchOp::Equals;
  if (name == "intersects") return MatchOp::Intersects;
  if (name == "contains") return MatchOp::Contains;
  throw ValidationError("unknown match operator '" + std::string(name) + "'");
}

std::string_view to_string(MatchOp op) {
  switch (op) {
    case MatchOp::Equals:
      return "equals";
    case MatchOp::Intersects:
      return "intersects";
    case MatchOp::Contains:
      return "contains";
  }
  return "?";
}

void FilterQuery::validate() const {
  if (dag_id.empty()) throw ValidationError("filter query without dag id");
  if (!spatial && !temporal && !domain) {
    throw ValidationError("filter query for '" + dag_id +
                          "' has no predicates");
  }
  if (spatial) {
    const GeoRect& r = spatial->region;
    if (r.min_lat > r.max_lat || r.min_lon > r.max_lon) {
      throw ValidationError("filter query for '" + dag_id +
                            "': rectangle min exceeds max");
    }
  }
  if (temporal && temporal->begin > temporal->end) {
    throw ValidationError("filter query for '" + dag_id +
                          "': time range begins after it ends");
  }
  if (domain && domain->value.empty()) {
    throw ValidationError("filter query for '" + dag_id +
                          "': empty domain value");
  }
}

bool spatial_holds(const SpatialPredicate& p, double lat, double lon) {
  const GeoRect& r = p.region;
  switch (p.op) {
    case MatchOp::Equals:
      return std::abs(lat - r.min_lat) <= kSpatialTolerance &&
             std::abs(lat - r.max_lat) <= kSpatialTolerance &&
             std::abs(lon - r.min_lon) <= kSpatialTolerance &&
             std::abs(lon - r.max_lon) <= kSpatialTolerance;
    case MatchOp::Contains:
      return r.min_lat <= lat && lat <= r.max_lat && r.min_lon <= lon &&
             lon <= r.max_lon;
    case MatchOp::Intersects:
      return r.min_lat - kSpatialTolerance <= lat &&
             lat <= r.max_lat + kSpatialTolerance &&
             r.min_lon - kSpatialTolerance <= lon &&
             lon <= r.max_lon + kSpatialTolerance;
  }
  return false;
}

bool temporal_holds(const TemporalPredicate& p, Seconds t_begin,
                    Seconds t_end) {
  switch (p.op) {
    case MatchOp::Equals:
      return t_begin == p.begin && t_end == p.end;
    case MatchOp::Contains:
      return p.begin <= t_begin && t_end <= p.end;
    case MatchOp::Intersects:
      return t_begin <= p.end && p.begin <= t_end;
  }
  return false;
}

bool domain_holds(const DomainPredicate& p, const MicroBatchMeta& meta) {
  if (p.on_sensor_id()) return meta.sid == p.value;
  return std::any_of(meta.kv.begin(), meta.kv.end(), [&](const auto& kv) {
    return kv.first == p.key && kv.second == p.value;
  });
}

bool FilterQuery::matches(const MicroBatchMeta& meta) const {
  if (spatial && !spatial_holds(*spatial, meta.lat, meta.lon)) return false;
  if (temporal && !temporal_holds(*temporal, meta.t_begin, meta.t_end)) {
    return false;
  }
  if (domain && !domain_holds(*domain, meta)) return false;
  return true;
}

std::vector<std::string> match(const MicroBatchMeta& meta,
                               std::span<const FilterQuery> queries) {
  std::vector<std::string> out;
  for (const FilterQuery& q : queries) {
    if (q.matches(meta)) out.push_back(q.dag_id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RegistrationId QueryEngine::register_query(FilterQuery q) {
  q.validate();
  if (by_dag_.contains(q.dag_id)) {
    throw ValidationError("a query for dag '" + q.dag_id +
                          "' is already registered");
  }
  RegistrationId id = next_++;
  by_dag_.emplace(q.dag_id, id);
  queries_.emplace(id, std::move(q));
  return id;
}

void QueryEngine::unregister(RegistrationId id) {
  auto it = queries_.find(id);
  if (it == queries_.end()) throw ProtocolError("unknown query registration");
  by_dag_.erase(it->second.dag_id);
  queries_.erase(it);
}

std::vector<std::string> QueryEngine::match(const MicroBatchMeta& meta) const {
  std::vector<std::string> out;
  for (const auto& [id, q] : queries_) {
    if (q.matches(meta)) out.push_back(q.dag_id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Howard Hinnant's days_from_civil.
long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

}  // namespace

Seconds parse_timestamp(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  double s = 0.0;
  std::string buf(text);
  if (std::sscanf(buf.c_str(), "%d-%d-%dT%d:%d:%lf", &y, &mo, &d, &h, &mi,
                  &s) != 6 ||
      mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 ||
      mi > 59 || s < 0.0 || s >= 61.0) {
    throw ValidationError("bad timestamp '" + buf + "'");
  }
  const long long days =
      days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
  return static_cast<double>(days) * 86400.0 + h * 3600.0 + mi * 60.0 + s;
}

}  // namespace cofee
