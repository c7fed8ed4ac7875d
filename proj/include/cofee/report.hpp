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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cofee/metrics.hpp"

namespace cofee {

/// metrics.csv column names in output order.
std::vector<std::string> csv_columns();

/// Header plus one row per report. Reals use 17 significant digits and list
/// columns join values with ';', so parse_csv restores the reports exactly.
std::string to_csv(const std::vector<MetricsReport>& reports);
std::vector<MetricsReport> parse_csv(std::string_view text);

struct Stat {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single run
};

struct PolicyAggregate {
  std::string policy;
  std::size_t runs = 0;
  std::map<std::string, Stat> stats;  // every scalar numeric column
};

/// One aggregate per policy, in order of first appearance.
std::vector<PolicyAggregate> aggregate(const std::vector<MetricsReport>& reports);

/// Human-readable comparison table, 4 significant digits.
std::string summary_text(const std::vector<MetricsReport>& reports);

/// Writes metrics.csv and summary.txt into `out_dir`, each through a
/// temporary file and a rename.
void emit_report(const std::vector<MetricsReport>& reports,
                 const std::filesystem::path& out_dir);

void write_atomically(const std::filesystem::path& path,
                      const std::string& content);

std::string format_significant(double value, int digits = 4);

}  // namespace cofee
