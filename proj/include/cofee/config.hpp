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
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cofee/scenario.hpp"

namespace cofee {

/// A validated run description read from a config file.
struct RunConfig {
  Scenario scenario;
  std::vector<std::string> policies;  // canonical names
  std::vector<std::uint64_t> seeds;
};

/// Reads a JSON config. An "extends" key names a base file, relative to the
/// including file, that is merged underneath (objects merge key by key,
/// everything else is replaced). Errors name the offending field path.
RunConfig load_config(const std::filesystem::path& path);

/// The config after "extends" resolution, before interpretation.
nlohmann::json resolve_config(const std::filesystem::path& path);

/// Interprets an already-resolved document. Relative file references are
/// taken from `base_dir`.
RunConfig parse_config(const nlohmann::json& doc,
                       const std::filesystem::path& base_dir);

nlohmann::json dag_to_json(const DagSpec& dag);
/// Parses one DAG. `path` prefixes error messages.
DagSpec dag_from_json(const nlohmann::json& j, const std::string& path);

/// "1..20", "7" or a JSON array of integers.
std::vector<std::uint64_t> parse_seeds(const nlohmann::json& j,
                                       const std::string& path);
std::vector<std::uint64_t> parse_seed_range(const std::string& text);

}  // namespace cofee
