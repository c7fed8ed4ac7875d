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

#include "cofee/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <variant>

#include "cofee/errors.hpp"

namespace cofee {

namespace {

using Field = std::variant<std::string MetricsReport::*,
                           std::uint64_t MetricsReport::*,
                           double MetricsReport::*,
                           std::vector<double> MetricsReport::*>;

struct Column {
  const char* name;
  Field field;
};

const std::vector<Column>& columns() {
  using M = MetricsReport;
  static const std::vector<Column> cols = {
      {"policy", &M::policy},
      {"seed", &M::seed},
      {"micro_batches", &M::micro_batches},
      {"dropped_batches", &M::dropped_batches},
      {"dag_triggers", &M::dag_triggers},
      {"pipelines", &M::pipelines},
      {"pipelines_completed", &M::pipelines_completed},
      {"pipelines_failed", &M::pipelines_failed},
      {"success_rate", &M::success_rate},
      {"failure_rate", &M::failure_rate},
      {"tasks_triggered", &M::tasks_triggered},
      {"tasks_edge", &M::tasks_edge},
      {"tasks_fog", &M::tasks_fog},
      {"tasks_cloud", &M::tasks_cloud},
      {"tasks_failed", &M::tasks_failed},
      {"edge_fraction", &M::edge_fraction},
      {"fog_fraction", &M::fog_fraction},
      {"cloud_fraction", &M::cloud_fraction},
      {"backup_executions", &M::backup_executions},
      {"total_cost", &M::total_cost},
      {"successful_cost", &M::successful_cost},
      {"wasted_cost", &M::wasted_cost},
      {"avg_cost_per_success", &M::avg_cost_per_success},
      {"median_tasks_per_minute", &M::median_tasks_per_minute},
      {"mean_dag_latency", &M::mean_dag_latency},
      {"edge_failures", &M::edge_failures},
      {"tasks_per_minute", &M::tasks_per_minute},
      {"dag_latencies", &M::dag_latencies},
  };
  return cols;
}

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError("metrics.csv: bad number '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string cell(const MetricsReport& m, const Field& f) {
  return std::visit(
      [&](auto ptr) -> std::string {
        const auto& v = m.*ptr;
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return real(v);
        } else {
          std::string s;
          for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ';';
            s += real(v[i]);
          }
          return s;
        }
      },
      f);
}

void assign(MetricsReport& m, const Field& f, const std::string& text) {
  std::visit(
      [&](auto ptr) {
        auto& v = m.*ptr;
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          v = text;
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          v = static_cast<std::uint64_t>(std::stoull(text));
        } else if constexpr (std::is_same_v<T, double>) {
          v = parse_real(text);
        } else {
          v.clear();
          if (!text.empty()) {
            for (const std::string& part : split(text, ';')) {
              v.push_back(parse_real(part));
            }
          }
        }
      },
      f);
}

std::optional<double> scalar(const MetricsReport& m, const Field& f) {
  if (auto p = std::get_if<std::uint64_t MetricsReport::*>(&f)) {
    return static_cast<double>(m.**p);
  }
  if (auto p = std::get_if<double MetricsReport::*>(&f)) return m.**p;
  return std::nullopt;
}

}  // namespace

std::vector<std::string> csv_columns() {
  std::vector<std::string> out;
  for (const Column& c : columns()) out.emplace_back(c.name);
  return out;
}

std::string to_csv(const std::vector<MetricsReport>& reports) {
  std::string out;
  const auto& cols = columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i].name;
  }
  out += '\n';
  for (const MetricsReport& m : reports) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out += ',';
      out += cell(m, cols[i].field);
    }
    out += '\n';
  }
  return out;
}

std::vector<MetricsReport> parse_csv(std::string_view text) {
  std::vector<MetricsReport> out;
  const auto lines = split(text, '\n');
  if (lines.empty()) throw ConfigError("metrics.csv: empty");
  const auto header = split(lines[0], ',');
  const auto& cols = columns();
  if (header != csv_columns()) {
    throw ConfigError("metrics.csv: unexpected header");
  }
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (lines[l].empty()) continue;
    const auto cells = split(lines[l], ',');
    if (cells.size() != cols.size()) {
      throw ConfigError("metrics.csv: row " + std::to_string(l) +
                        " has the wrong number of cells");
    }
    MetricsReport m;
    for (std::size_t i = 0; i < cols.size(); ++i) assign(m, cols[i].field, cells[i]);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<PolicyAggregate> aggregate(const std::vector<MetricsReport>& reports) {
  std::vector<PolicyAggregate> out;
  std::map<std::string, std::vector<const MetricsReport*>> by_policy;
  for (const MetricsReport& m : reports) {
    if (!by_policy.contains(m.policy)) {
      out.push_back(PolicyAggregate{m.policy, 0, {}});
    }
    by_policy[m.policy].push_back(&m);
  }
  for (PolicyAggregate& agg : out) {
    const auto& runs = by_policy[agg.policy];
    agg.runs = runs.size();
    for (const Column& c : columns()) {
      if (std::string_view(c.name) == "seed") continue;
      std::vector<double> xs;
      for (const MetricsReport* m : runs) {
        if (auto v = scalar(*m, c.field)) xs.push_back(*v);
      }
      if (xs.empty()) continue;
      Stat s;
      for (double x : xs) s.mean += x;
      s.mean /= xs.size();
      if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / (xs.size() - 1));
      }
      agg.stats[c.name] = s;
    }
  }
  return out;
}

std::string format_significant(double value, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

std::string summary_text(const std::vector<MetricsReport>& reports) {
  static const char* const kRows[] = {
      "pipelines",        "success_rate",         "failure_rate",
      "total_cost",       "successful_cost",      "wasted_cost",
      "avg_cost_per_success", "edge_fraction",    "fog_fraction",
      "cloud_fraction",   "tasks_triggered",      "backup_executions",
      "median_tasks_per_minute", "mean_dag_latency", "edge_failures"};
  const auto aggs = aggregate(reports);
  std::ostringstream out;
  out << "Mean (stddev) over seeds. Costs in cents.\n\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-26s", "metric");
  out << line;
  for (const PolicyAggregate& a : aggs) {
    std::snprintf(line, sizeof line, " %24s",
                  (a.policy + " (n=" + std::to_string(a.runs) + ")").c_str());
    out << line;
  }
  out << '\n';
  for (const char* row : kRows) {
    std::snprintf(line, sizeof line, "%-26s", row);
    out << line;
    for (const PolicyAggregate& a : aggs) {
      const Stat& s = a.stats.at(row);
      const std::string v =
          format_significant(s.mean) + " (" + format_significant(s.stddev) + ")";
      std::snprintf(line, sizeof line, " %24s", v.c_str());
      out << line;
    }
    out << '\n';
  }
  return out.str();
}

void write_atomically(const std::filesystem::path& path,
                      const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    const auto fail = [&] {
      throw std::filesystem::filesystem_error(
          "cannot write", tmp, std::make_error_code(std::errc::io_error));
    };
    if (!f) fail();
    f << content;
    f.flush();
    if (!f) fail();
  }
  std::filesystem::rename(tmp, path);
}

void emit_report(const std::vector<MetricsReport>& reports,
                 const std::filesystem::path& out_dir) {
  if (reports.empty()) throw std::invalid_argument("no reports to emit");
  std::filesystem::create_directories(out_dir);
  write_atomically(out_dir / "metrics.csv", to_csv(reports));
  write_atomically(out_dir / "summary.txt", summary_text(reports));
}

}  // namespace cofee
