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

// Command-line driver: runs experiments from a config file and regenerates the
// bundled presets.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cofee/baselines.hpp"
#include "cofee/config.hpp"
#include "cofee/dag_generator.hpp"
#include "cofee/experiment.hpp"
#include "cofee/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kIo = 3 };

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct RunArgs {
  std::string config;
  std::string policy;
  std::string seed;
  std::string seeds;
  std::string out;
  bool trace = false;
  std::size_t threads = 0;
};

int run(const RunArgs& a) {
  cofee::RunConfig cfg = cofee::load_config(a.config);
  std::vector<std::string> policies = cfg.policies;
  if (!a.policy.empty()) {
    policies.clear();
    for (const std::string& p : split_list(a.policy)) {
      policies.push_back(cofee::canonical_policy(p));
    }
  }
  std::vector<std::uint64_t> seeds = cfg.seeds;
  if (!a.seeds.empty()) seeds = cofee::parse_seed_range(a.seeds);
  if (!a.seed.empty()) seeds = cofee::parse_seed_range(a.seed);

  cofee::ExperimentOptions opt;
  opt.threads = a.threads ? a.threads
                          : std::max(1u, std::thread::hardware_concurrency());
  if (a.trace) opt.trace_dir = fs::path(a.out) / "traces";
  const auto reports =
      cofee::run_experiment(cfg.scenario, policies, seeds, opt);
  cofee::emit_report(reports, a.out);
  std::cout << cofee::summary_text(reports);
  return kOk;
}

json link(double mbps, double ms) {
  return {{"bandwidth_mbps", mbps}, {"latency_ms", ms}, {"price_per_byte", 0.0}};
}

json testbed() {
  // Five partitions of 15 to 25 edges, 100 edges in all.
  const int partition_sizes[] = {15, 18, 20, 22, 25};
  json resources = json::array();
  for (int f = 0; f < 5; ++f) {
    const std::string fog = "fog-" + std::to_string(f);
    const double lat = 12.90 + 0.04 * f;
    const double lon = 77.50 + 0.03 * f;
    resources.push_back({{"id", fog}, {"tier", "fog"}, {"lat", lat}, {"lon", lon}});
    for (int e = 0; e < partition_sizes[f]; ++e) {
      char id[32];
      std::snprintf(id, sizeof id, "edge-%d-%02d", f, e);
      resources.push_back({{"id", id},
                           {"tier", "edge"},
                           {"parent", fog},
                           {"lat", lat + 0.001 * (e % 5)},
                           {"lon", lon + 0.001 * (e / 5)}});
    }
  }
  for (int c = 0; c < 6; ++c) {
    resources.push_back({{"id", "cloud-" + std::to_string(c)}, {"tier", "cloud"}});
  }
  return {
      {"name", "testbed"},
      {"billing", {{"epsilon", 1.0}}},
      {"resource_defaults",
       {{"edge", {{"speed", 1.0}, {"price_per_hour", 0.167}}},
        {"fog", {{"speed", 8.0}, {"price_per_hour", 1.467}, {"oversubscription", "auto"}}},
        {"cloud", {{"speed", 50.0}, {"price_per_hour", 10.0}}}}},
      {"resources", resources},
      {"network",
       {{"edge-fog", link(60, 1)},
        {"fog-fog", link(100, 5)},
        {"fog-cloud", link(100, 5)},
        {"cloud-cloud", link(100, 5)}}},
      {"master",
       {{"fanout", 2},
        {"t_inq", 1.0},
        {"report_slots", 3},
        {"report_period", 5.0},
        {"report_horizon", 600.0}}},
  };
}

void write_json(const fs::path& path, const json& j) {
  cofee::write_atomically(path, j.dump(2) + "\n");
  std::cout << "wrote " << path.string() << "\n";
}

int gen_presets(const std::string& out) {
  const fs::path dir(out);
  fs::create_directories(dir);
  const auto dags = cofee::calibrated_dag_set(30, 204.0, 537.0);
  const auto stats = cofee::dag_set_stats(dags);
  json dag_list = json::array();
  for (const auto& d : dags) dag_list.push_back(cofee::dag_to_json(d));
  write_json(dir / "dags-30.json", {{"dags", dag_list}});
  std::printf("dags: median critical path %.1f s, mean unrolled work %.1f s, "
              "mean pipelines %.2f, mean tasks %.2f\n",
              stats.median_critical_path, stats.mean_unrolled_work,
              stats.mean_pipelines, stats.mean_tasks);

  write_json(dir / "testbed.json", testbed());
  write_json(dir / "workload-30dags.json",
             {{"extends", "testbed.json"},
              {"name", "workload-30dags"},
              {"dags", "dags-30.json"},
              {"deadline_factor", 1.1},
              {"theta_scale", 1.0},
              {"workload",
               {{"rate_per_min", 15.0},
                {"size_min_bytes", 500000},
                {"size_max_bytes", 1500000},
                {"duration_min", 20.0},
                {"mtbf_min", nullptr},
                {"window_sec", 60.0},
                {"jitter", 0.0}}},
              {"policy", {"cofee", "cloud-only", "lfp"}},
              {"seeds", "1..20"}});
  write_json(dir / "reliable.json",
             {{"extends", "workload-30dags.json"}, {"name", "reliable"}});
  write_json(dir / "m100.json",
             {{"extends", "workload-30dags.json"},
              {"name", "m100"},
              {"workload", {{"rate_per_min", 10.0}, {"mtbf_min", 100.0}}}});
  write_json(dir / "m40.json",
             {{"extends", "workload-30dags.json"},
              {"name", "m40"},
              {"workload", {{"rate_per_min", 10.0}, {"mtbf_min", 40.0}}}});
  write_json(dir / "scale-1x.json",
             {{"extends", "reliable.json"},
              {"name", "scale-1x"},
              {"policy", {"cofee"}}});
  write_json(dir / "scale-2x.json",
             {{"extends", "scale-1x.json"},
              {"name", "scale-2x"},
              {"theta_scale", 0.5},
              {"deadline_factor", 1.25},
              {"workload", {{"rate_per_min", 30.0}}}});

  json desk = json::array();
  for (int f = 0; f < 2; ++f) {
    const std::string fog = "fog-" + std::to_string(f);
    desk.push_back({{"id", fog}, {"tier", "fog"}, {"oversubscription", 1.0}});
    for (int e = 0; e < 10; ++e) {
      char id[32];
      std::snprintf(id, sizeof id, "edge-%d-%02d", f, e);
      desk.push_back({{"id", id}, {"tier", "edge"}, {"parent", fog}});
    }
  }
  desk.push_back({{"id", "cloud-0"}, {"tier", "cloud"}});
  write_json(dir / "desk.json",
             {{"extends", "workload-30dags.json"},
              {"name", "desk"},
              {"resources", desk},
              {"workload", {{"rate_per_min", 2.0}, {"duration_min", 5.0}}},
              {"policy", {"cofee"}}});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deadline-aware edge/fog/cloud DAG scheduling simulator"};
  app.require_subcommand(1);

  RunArgs args;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a config under one or more policies");
  run_cmd->add_option("--config", args.config, "Config file (JSON)")
      ->required()
      ->envname("COFEE_CONFIG");
  run_cmd->add_option("--policy", args.policy,
                      "Policy or comma list: cofee, cloud-only, lfp")
      ->envname("COFEE_POLICY");
  auto* seed = run_cmd->add_option("--seed", args.seed, "Single seed")
                   ->envname("COFEE_SEED");
  run_cmd->add_option("--seeds", args.seeds, "Seed range n..m")
      ->envname("COFEE_SEEDS")
      ->excludes(seed);
  run_cmd->add_option("--out", args.out, "Output directory")
      ->required()
      ->envname("COFEE_OUT");
  run_cmd->add_flag("--trace", args.trace, "Write per-run event traces")
      ->envname("COFEE_TRACE");
  run_cmd->add_option("--threads", args.threads, "Worker threads (0 = all cores)")
      ->envname("COFEE_THREADS");

  std::string preset_dir = "presets";
  CLI::App* gen_cmd =
      app.add_subcommand("gen-presets", "Regenerate the bundled preset files");
  gen_cmd->add_option("--out", preset_dir, "Destination directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run_cmd) return run(args);
    if (*gen_cmd) return gen_presets(preset_dir);
  } catch (const cofee::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const cofee::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
