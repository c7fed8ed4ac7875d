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

#include "cofee/trace_audit.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <string>

namespace cofee {

namespace {

std::map<std::string, std::string> fields(std::istringstream& in) {
  std::map<std::string, std::string> out;
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

const Resource& resource(const Scenario& s, const std::string& name) {
  auto id = s.topology.find(name);
  if (!id) throw ValidationError("trace names unknown resource '" + name + "'");
  return s.topology.at(*id);
}

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TraceAudit audit_trace(std::istream& trace, const Scenario& scenario) {
  TraceAudit audit;
  std::string line;
  double last = -1.0;
  while (std::getline(trace, line)) {
    std::istringstream in(line);
    double t = 0.0;
    std::string kind;
    if (!(in >> t >> kind)) continue;
    if (t < last) audit.time_monotone = false;
    last = t;
    if (kind != "bill-exec" && kind != "bill-xfer") continue;
    auto f = fields(in);
    ++audit.bill_lines;
    const double logged = std::stod(f.at("cents"));
    double expected = 0.0;
    if (kind == "bill-exec") {
      const Resource& r = resource(scenario, f.at("res"));
      expected = scenario.billing.bill(std::stod(f.at("dur")), r);
      if (f.at("aborted") == "0") {
        ++audit.executions_by_tier[static_cast<std::size_t>(r.tier)];
      }
    } else {
      MicroBatchMeta mb;
      mb.size = std::stoull(f.at("bytes"));
      expected = transfer_cost(mb, resource(scenario, f.at("from")),
                               resource(scenario, f.at("to")),
                               scenario.topology, scenario.network);
    }
    if (!close(expected, logged)) ++audit.mismatches;
    audit.total += expected;
    audit.logged_total += logged;
  }
  return audit;
}

}  // namespace cofee
