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

#include "cofee/experiment.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "cofee/baselines.hpp"
#include "cofee/engine.hpp"

namespace cofee {

MetricsReport run_once(const Scenario& scenario, std::string_view policy,
                       std::uint64_t seed, std::ostream* trace) {
  auto p = make_policy(policy, scenario);
  Simulation sim(scenario, *p, seed, trace);
  return sim.run();
}

std::vector<MetricsReport> run_experiment(const Scenario& scenario,
                                          const std::vector<std::string>& policies,
                                          const std::vector<std::uint64_t>& seeds,
                                          const ExperimentOptions& options) {
  struct Job {
    std::string policy;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const std::string& p : policies) {
    for (std::uint64_t s : seeds) jobs.push_back({canonical_policy(p), s});
  }
  std::vector<MetricsReport> results(jobs.size());
  if (options.trace_dir) std::filesystem::create_directories(*options.trace_dir);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const Job& job = jobs[i];
        if (options.trace_dir) {
          std::ofstream trace(*options.trace_dir /
                              ("trace-" + job.policy + "-" +
                               std::to_string(job.seed) + ".log"));
          results[i] = run_once(scenario, job.policy, job.seed, &trace);
        } else {
          results[i] = run_once(scenario, job.policy, job.seed);
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t n =
      std::max<std::size_t>(1, std::min(options.threads, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace cofee
