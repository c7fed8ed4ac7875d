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

#include "cofee/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cofee/baselines.hpp"

namespace cofee {

using nlohmann::json;
namespace fs = std::filesystem;

double Scenario::oversubscription_of(ResourceId fog) const {
  auto it = oversubscription.find(fog);
  return it == oversubscription.end() ? 1.0 : it->second;
}

void Scenario::validate() const {
  topology.validate();
  if (topology.clouds().empty()) {
    throw ValidationError("topology needs at least one cloud worker");
  }
  std::set<std::string> ids;
  for (const DagSpec& d : dags) {
    d.validate();
    d.filter.validate();
    if (d.filter.dag_id != d.id) {
      throw ValidationError("dag '" + d.id + "': filter bound to '" +
                            d.filter.dag_id + "'");
    }
    if (!ids.insert(d.id).second) {
      throw ValidationError("duplicate dag id '" + d.id + "'");
    }
  }
  workload.validate();
  master.validate();
  for (const auto& [fog, chi] : oversubscription) {
    if (fog.value >= topology.size() || topology.at(fog).tier != Tier::Fog) {
      throw ValidationError("over-subscription set on a non-fog resource");
    }
    if (!(chi >= 1.0)) {
      throw ValidationError("fog '" + topology.at(fog).name +
                            "': over-subscription must be >= 1");
    }
  }
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

double number_or(const json& obj, const char* key, const std::string& path,
                 double fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, path + "." + key);
}

std::uint64_t count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    fail(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json resolve(const fs::path& path, std::set<fs::path>& seen) {
  const fs::path canon = fs::weakly_canonical(path);
  if (!seen.insert(canon).second) {
    throw ConfigError(path.string() + ": extends cycle");
  }
  json doc = read_json(path);
  if (!doc.is_object()) throw ConfigError(path.string() + ": expected an object");
  auto it = doc.find("extends");
  if (it == doc.end()) return doc;
  const fs::path base_path = path.parent_path() / text(*it, "extends");
  json base = resolve(base_path, seen);
  doc.erase("extends");
  // Relative references inside the base stay relative to the base file.
  if (auto d = base.find("dags"); d != base.end() && d->is_string()) {
    *d = fs::absolute(base_path.parent_path() / d->get<std::string>()).string();
  }
  base.merge_patch(doc);
  return base;
}

Seconds time_value(const json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return parse_timestamp(j.get<std::string>());
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
  }
  return number(j, path);
}

FilterQuery filter_from_json(const json& j, const std::string& dag_id,
                             const std::string& path) {
  FilterQuery q;
  q.dag_id = dag_id;
  if (!j.is_object()) fail(path, "expected an object");
  if (auto s = j.find("spatial"); s != j.end()) {
    const std::string p = path + ".spatial";
    SpatialPredicate sp;
    try {
      sp.op = match_op_from_string(text(require(*s, "op", p), p + ".op"));
    } catch (const ValidationError& e) {
      fail(p + ".op", e.what());
    }
    if (auto pt = s->find("point"); pt != s->end()) {
      if (!pt->is_array() || pt->size() != 2) fail(p + ".point", "expected [lat, lon]");
      sp.region = GeoRect::point(number((*pt)[0], p + ".point[0]"),
                                 number((*pt)[1], p + ".point[1]"));
    } else {
      const json& r = require(*s, "rect", p);
      if (!r.is_array() || r.size() != 4) {
        fail(p + ".rect", "expected [min_lat, min_lon, max_lat, max_lon]");
      }
      sp.region = GeoRect{number(r[0], p + ".rect[0]"), number(r[1], p + ".rect[1]"),
                          number(r[2], p + ".rect[2]"), number(r[3], p + ".rect[3]")};
    }
    q.spatial = sp;
  }
  if (auto t = j.find("temporal"); t != j.end()) {
    const std::string p = path + ".temporal";
    TemporalPredicate tp;
    try {
      tp.op = match_op_from_string(text(require(*t, "op", p), p + ".op"));
    } catch (const ValidationError& e) {
      fail(p + ".op", e.what());
    }
    tp.begin = time_value(require(*t, "begin", p), p + ".begin");
    tp.end = time_value(require(*t, "end", p), p + ".end");
    q.temporal = tp;
  }
  if (auto d = j.find("domain"); d != j.end()) {
    const std::string p = path + ".domain";
    DomainPredicate dp;
    if (auto sid = d->find("sid"); sid != d->end()) {
      dp.value = text(*sid, p + ".sid");
    } else {
      dp.key = text(require(*d, "key", p), p + ".key");
      dp.value = text(require(*d, "value", p), p + ".value");
    }
    q.domain = dp;
  }
  try {
    q.validate();
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
  return q;
}

LinkParams link_from_json(const json& j, const std::string& path,
                          LinkParams fallback) {
  LinkParams p = fallback;
  if (!j.is_object()) fail(path, "expected an object");
  if (j.contains("bandwidth_mbps")) {
    p.bandwidth_bps = number(j["bandwidth_mbps"], path + ".bandwidth_mbps") * 1e6;
  }
  if (j.contains("latency_ms")) {
    p.latency = number(j["latency_ms"], path + ".latency_ms") / 1000.0;
  }
  if (j.contains("price_per_byte")) {
    p.price_per_byte = number(j["price_per_byte"], path + ".price_per_byte");
  }
  if (p.bandwidth_bps < 0 || p.latency < 0 || p.price_per_byte < 0) {
    fail(path, "link parameters must be >= 0");
  }
  return p;
}

void parse_network(const json& doc, Scenario& s) {
  struct TierPair {
    const char* key;
    Tier a, b;
    LinkParams fallback;
  };
  const TierPair pairs[] = {
      {"edge-fog", Tier::Edge, Tier::Fog, {60e6, 0.001, 0.0}},
      {"fog-fog", Tier::Fog, Tier::Fog, {100e6, 0.005, 0.0}},
      {"fog-cloud", Tier::Fog, Tier::Cloud, {100e6, 0.005, 0.0}},
      {"cloud-cloud", Tier::Cloud, Tier::Cloud, {100e6, 0.005, 0.0}},
  };
  const json net = doc.value("network", json::object());
  if (!net.is_object()) fail("network", "expected an object");
  for (const TierPair& tp : pairs) {
    LinkParams p = tp.fallback;
    if (auto it = net.find(tp.key); it != net.end()) {
      p = link_from_json(*it, std::string("network.") + tp.key, tp.fallback);
    }
    s.network.set_tier_link(tp.a, tp.b, p);
  }
  for (const auto& [key, value] : net.items()) {
    if (key == "overrides") continue;
    bool known = false;
    for (const TierPair& tp : pairs) known = known || key == tp.key;
    if (!known) fail("network." + key, "unknown link class");
  }
  if (auto ov = net.find("overrides"); ov != net.end()) {
    if (!ov->is_array()) fail("network.overrides", "expected an array");
    for (std::size_t i = 0; i < ov->size(); ++i) {
      const std::string p = "network.overrides[" + std::to_string(i) + "]";
      const json& o = (*ov)[i];
      auto from = s.topology.find(text(require(o, "from", p), p + ".from"));
      auto to = s.topology.find(text(require(o, "to", p), p + ".to"));
      if (!from) fail(p + ".from", "unknown resource");
      if (!to) fail(p + ".to", "unknown resource");
      const LinkParams lp = link_from_json(o, p, s.network.link(
          s.topology.at(*from), s.topology.at(*to)));
      s.network.set_link(*from, *to, lp);
      if (o.value("symmetric", true)) s.network.set_link(*to, *from, lp);
    }
  }
}

void parse_resources(const json& doc, Scenario& s, const WorkloadConfig& w) {
  const json& list = require(doc, "resources", "config");
  if (!list.is_array()) fail("resources", "expected an array");
  const json defaults = doc.value("resource_defaults", json::object());
  const double epsilon = s.billing.epsilon;

  std::map<std::string, std::size_t> index;
  std::vector<json> entries;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string p = "resources[" + std::to_string(i) + "]";
    json e = list[i];
    if (!e.is_object()) fail(p, "expected an object");
    const std::string tier = text(require(e, "tier", p), p + ".tier");
    if (auto d = defaults.find(tier); d != defaults.end()) {
      json merged = *d;
      merged.merge_patch(e);
      e = std::move(merged);
    }
    const std::string id = text(require(e, "id", p), p + ".id");
    if (!index.emplace(id, i).second) fail(p + ".id", "duplicate id '" + id + "'");
    entries.push_back(std::move(e));
  }

  std::vector<std::pair<ResourceId, json>> auto_chi;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string p = "resources[" + std::to_string(i) + "]";
    const json& e = entries[i];
    Resource r;
    r.name = e["id"].get<std::string>();
    try {
      r.tier = tier_from_string(e["tier"].get<std::string>());
    } catch (const ValidationError& ex) {
      fail(p + ".tier", ex.what());
    }
    r.speed = number_or(e, "speed", p, 1.0);
    if (e.contains("price_per_hour")) {
      r.price = number(e["price_per_hour"], p + ".price_per_hour") * epsilon / 3600.0;
    } else {
      r.price = number_or(e, "price", p, 0.0);
    }
    r.failure_prob = number_or(e, "failure_prob", p, 0.0);
    r.lat = number_or(e, "lat", p, 0.0);
    r.lon = number_or(e, "lon", p, 0.0);
    const ResourceId self{static_cast<std::uint32_t>(i)};
    if (r.tier == Tier::Edge) {
      const std::string parent = text(require(e, "parent", p), p + ".parent");
      auto it = index.find(parent);
      if (it == index.end() || entries[it->second]["tier"] != "fog") {
        fail(p + ".parent", "unknown fog '" + parent + "'");
      }
      r.partition = ResourceId{static_cast<std::uint32_t>(it->second)};
      r.mtbf = w.mtbf;
    } else if (e.contains("parent")) {
      fail(p + ".parent", "only edges have a parent");
    }
    if (r.tier == Tier::Fog) {
      r.partition = self;
      if (auto chi = e.find("oversubscription"); chi != e.end()) {
        auto_chi.emplace_back(self, *chi);
      }
    } else if (e.contains("oversubscription")) {
      fail(p + ".oversubscription", "only fogs take an over-subscription ratio");
    }
    try {
      s.topology.add(std::move(r));
    } catch (const ValidationError& ex) {
      fail(p, ex.what());
    }
  }
  for (auto& [fog, chi] : auto_chi) {
    const std::string p = "resources[" + std::to_string(fog.value) + "].oversubscription";
    if (chi.is_string()) {
      if (chi != "auto") fail(p, "expected a number or \"auto\"");
      double capacity = 0.0;
      for (ResourceId e : s.topology.children(fog)) capacity += s.topology.at(e).speed;
      s.oversubscription[fog] =
          1.0 + std::ceil(capacity / s.topology.at(fog).speed);
    } else {
      s.oversubscription[fog] = number(chi, p);
    }
  }
}

WorkloadConfig parse_workload(const json& doc) {
  WorkloadConfig w;
  const json j = doc.value("workload", json::object());
  const std::string p = "workload";
  if (!j.is_object()) fail(p, "expected an object");
  w.rate_per_min = number_or(j, "rate_per_min", p, w.rate_per_min);
  if (j.contains("size_min_bytes")) w.size_min = count(j["size_min_bytes"], p + ".size_min_bytes");
  if (j.contains("size_max_bytes")) w.size_max = count(j["size_max_bytes"], p + ".size_max_bytes");
  if (j.contains("duration_min")) {
    w.duration = number(j["duration_min"], p + ".duration_min") * 60.0;
  } else {
    w.duration = number_or(j, "duration_sec", p, w.duration);
  }
  if (auto m = j.find("mtbf_min"); m != j.end() && !m->is_null()) {
    w.mtbf = number(*m, p + ".mtbf_min") * 60.0;
  }
  w.window = number_or(j, "window_sec", p, w.window);
  w.jitter = number_or(j, "jitter", p, w.jitter);
  try {
    w.validate();
  } catch (const ValidationError& e) {
    fail(p, e.what());
  }
  return w;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_range(const std::string& t) {
  auto to_u64 = [&](const std::string& part) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || part.front() == '-') {
      throw ConfigError("seeds: cannot parse '" + t + "'");
    }
    return static_cast<std::uint64_t>(v);
  };
  std::vector<std::uint64_t> out;
  if (auto dots = t.find(".."); dots != std::string::npos) {
    const std::uint64_t lo = to_u64(t.substr(0, dots));
    const std::uint64_t hi = to_u64(t.substr(dots + 2));
    if (hi < lo) throw ConfigError("seeds: empty range '" + t + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  } else {
    out.push_back(to_u64(t));
  }
  return out;
}

std::vector<std::uint64_t> parse_seeds(const json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return parse_seed_range(j.get<std::string>());
    } catch (const ConfigError& e) {
      fail(path, e.what());
    }
  }
  if (j.is_number_integer()) return {count(j, path)};
  if (!j.is_array() || j.empty()) fail(path, "expected a range string or integer list");
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(count(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

json dag_to_json(const DagSpec& dag) {
  json tasks = json::array();
  for (const TaskSpec& t : dag.tasks) {
    tasks.push_back({{"id", t.id}, {"theta", t.theta}, {"output_bytes", t.output_bytes}});
  }
  json edges = json::array();
  for (auto [a, b] : dag.edges) edges.push_back({dag.tasks[a].id, dag.tasks[b].id});
  return {{"id", dag.id}, {"tasks", tasks}, {"edges", edges}};
}

DagSpec dag_from_json(const json& j, const std::string& path) {
  DagSpec d;
  d.id = text(require(j, "id", path), path + ".id");
  const json& tasks = require(j, "tasks", path);
  if (!tasks.is_array() || tasks.empty()) fail(path + ".tasks", "expected a non-empty array");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string p = path + ".tasks[" + std::to_string(i) + "]";
    TaskSpec t;
    t.id = text(require(tasks[i], "id", p), p + ".id");
    t.theta = number(require(tasks[i], "theta", p), p + ".theta");
    if (!(t.theta > 0.0)) fail(p + ".theta", "must be > 0");
    t.output_bytes = count(require(tasks[i], "output_bytes", p), p + ".output_bytes");
    for (const TaskSpec& other : d.tasks) {
      if (other.id == t.id) fail(p + ".id", "duplicate task id '" + t.id + "'");
    }
    d.tasks.push_back(std::move(t));
  }
  if (auto e = j.find("edges"); e != j.end()) {
    if (!e->is_array()) fail(path + ".edges", "expected an array");
    for (std::size_t i = 0; i < e->size(); ++i) {
      const std::string p = path + ".edges[" + std::to_string(i) + "]";
      const json& pair = (*e)[i];
      if (!pair.is_array() || pair.size() != 2) fail(p, "expected [from, to]");
      try {
        d.edges.emplace_back(d.task_index(text(pair[0], p + "[0]")),
                             d.task_index(text(pair[1], p + "[1]")));
      } catch (const ValidationError& ex) {
        fail(p, ex.what());
      }
    }
  }
  if (auto dl = j.find("deadline"); dl != j.end()) {
    d.deadline = number(*dl, path + ".deadline");
  }
  if (auto f = j.find("filter"); f != j.end()) {
    d.filter = filter_from_json(*f, d.id, path + ".filter");
  } else {
    d.filter.dag_id = d.id;
    d.filter.domain = DomainPredicate{"topic", d.id};
  }
  return d;
}

nlohmann::json resolve_config(const fs::path& path) {
  std::set<fs::path> seen;
  return resolve(path, seen);
}

RunConfig load_config(const fs::path& path) {
  return parse_config(resolve_config(path), path.parent_path());
}

RunConfig parse_config(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config: expected an object");
  RunConfig cfg;
  Scenario& s = cfg.scenario;
  s.name = doc.value("name", std::string("unnamed"));

  if (auto b = doc.find("billing"); b != doc.end()) {
    s.billing.epsilon = number_or(*b, "epsilon", "billing", 1.0);
    if (!(s.billing.epsilon > 0.0)) fail("billing.epsilon", "must be > 0");
  }
  s.workload = parse_workload(doc);
  parse_resources(doc, s, s.workload);
  parse_network(doc, s);

  if (auto m = doc.find("master"); m != doc.end()) {
    const std::string p = "master";
    if (m->contains("fanout")) s.master.fanout = count((*m)["fanout"], p + ".fanout");
    s.master.bid_timeout = number_or(*m, "t_inq", p, s.master.bid_timeout);
    if (m->contains("report_slots")) {
      s.master.report_slots = count((*m)["report_slots"], p + ".report_slots");
    }
    s.master.report_period = number_or(*m, "report_period", p, s.master.report_period);
    s.master.report_horizon = number_or(*m, "report_horizon", p, s.master.report_horizon);
    try {
      s.master.validate();
    } catch (const ValidationError& e) {
      fail(p, e.what());
    }
  }

  json dags = doc.value("dags", json::array());
  std::string dag_path = "dags";
  if (dags.is_string()) {
    fs::path file = dags.get<std::string>();
    if (file.is_relative()) file = base_dir / file;
    dag_path = file.string();
    dags = read_json(file);
    if (dags.is_object()) dags = require(dags, "dags", dag_path);
  }
  if (!dags.is_array()) fail(dag_path, "expected an array of DAGs");
  const double factor = number_or(doc, "deadline_factor", "config", 1.1);
  const double theta_scale = number_or(doc, "theta_scale", "config", 1.0);
  if (!(factor > 0.0)) fail("deadline_factor", "must be > 0");
  if (!(theta_scale > 0.0)) fail("theta_scale", "must be > 0");
  for (std::size_t i = 0; i < dags.size(); ++i) {
    const std::string p = dag_path + "[" + std::to_string(i) + "]";
    DagSpec d = dag_from_json(dags[i], p);
    for (TaskSpec& t : d.tasks) t.theta *= theta_scale;
    try {
      if (d.deadline <= 0.0) d.deadline = factor * critical_path(d);
      d.validate();
    } catch (const ValidationError& e) {
      fail(p, e.what());
    }
    s.dags.push_back(std::move(d));
  }

  const json policy = doc.value("policy", json("cofee"));
  auto add_policy = [&](const json& j, const std::string& p) {
    try {
      cfg.policies.push_back(canonical_policy(text(j, p)));
    } catch (const ConfigError& e) {
      fail(p, e.what());
    }
  };
  if (policy.is_array()) {
    for (std::size_t i = 0; i < policy.size(); ++i) {
      add_policy(policy[i], "policy[" + std::to_string(i) + "]");
    }
  } else {
    add_policy(policy, "policy");
  }
  cfg.seeds = parse_seeds(doc.value("seeds", json(1)), "seeds");

  try {
    s.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

}  // namespace cofee
