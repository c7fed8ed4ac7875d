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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Tolerances are the documented ones; nothing here is
// tuned to make a result pass.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "calendar_oracle.hpp"
#include "cofee/config.hpp"
#include "cofee/dag.hpp"
#include "cofee/experiment.hpp"
#include "cofee/fog_scheduler.hpp"
#include "cofee/report.hpp"
#include "cofee/trace_audit.hpp"
#include "support.hpp"

using namespace cofee;
using namespace cofee::test;
namespace fs = std::filesystem;

namespace {

const fs::path kPresets = COFEE_PRESET_DIR;

std::size_t worker_threads() {
  return std::max(2u, std::thread::hardware_concurrency());
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Collects the sub-checks of one criterion into a single verdict line.
class Criterion {
 public:
  Criterion(int number, std::string title) : number_(number), title_(std::move(title)) {}

  void check(bool ok, const std::string& what) {
    ok_ = ok_ && ok;
    notes_.push_back((ok ? "ok   " : "MISS ") + what);
  }

  bool report(double seconds, double budget) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "runtime %.2f s (budget %.0f s)", seconds, budget);
    check(seconds < budget, buf);
    std::printf("%s criterion %d: %s\n", ok_ ? "PASS" : "FAIL", number_, title_.c_str());
    for (const std::string& n : notes_) std::printf("       %s\n", n.c_str());
    std::fflush(stdout);
    return ok_;
  }

 private:
  int number_;
  std::string title_;
  bool ok_ = true;
  std::vector<std::string> notes_;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

bool rel_ok(double got, double want, double rel) {
  return std::abs(got - want) <= rel * std::abs(want);
}

// ---------------------------------------------------------------------------
// Audited runs shared by criteria 3 to 6 and checked by criterion 8.

struct AuditedRun {
  MetricsReport report;
  TraceAudit audit;
};

std::vector<AuditedRun> run_audited(const Scenario& s,
                                    const std::vector<std::string>& policies,
                                    const std::vector<std::uint64_t>& seeds) {
  struct Job {
    std::string policy;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& p : policies) {
    for (auto seed : seeds) jobs.push_back({p, seed});
  }
  std::vector<AuditedRun> out(jobs.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs.size());
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      try {
        std::ostringstream trace;
        out[i].report = run_once(s, jobs[i].policy, jobs[i].seed, &trace);
        std::istringstream in(trace.str());
        out[i].audit = audit_trace(in, s);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < worker_threads(); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<AuditedRun> g_audited;  // every run of criteria 3 to 6

struct PolicyMeans {
  double success = 0, failure = 0, total_cost = 0, avg_cost = 0;
  double edge = 0, fog = 0, cloud = 0, tasks_per_min = 0;
  std::size_t runs = 0;
};

PolicyMeans means(const std::vector<AuditedRun>& runs, const std::string& policy) {
  PolicyMeans m;
  for (const AuditedRun& r : runs) {
    if (r.report.policy != policy) continue;
    const MetricsReport& x = r.report;
    m.success += x.success_rate;
    m.failure += x.failure_rate;
    m.total_cost += x.total_cost;
    m.avg_cost += x.avg_cost_per_success;
    m.edge += x.edge_fraction;
    m.fog += x.fog_fraction;
    m.cloud += x.cloud_fraction;
    m.tasks_per_min += x.median_tasks_per_minute;
    ++m.runs;
  }
  if (m.runs) {
    const double n = static_cast<double>(m.runs);
    for (double* v : {&m.success, &m.failure, &m.total_cost, &m.avg_cost, &m.edge,
                      &m.fog, &m.cloud, &m.tasks_per_min}) {
      *v /= n;
    }
  }
  return m;
}

std::vector<std::uint64_t> seeds_1_to_20() { return parse_seed_range("1..20"); }

// ---------------------------------------------------------------------------

bool criterion_1() {
  Timer t;
  Criterion c(1, "formula oracles match hand-computed values (1e-6 relative)");
  constexpr double kRel = 1e-6;

  const auto spans = apportion(std::vector<Seconds>{10, 30, 60}, 110.0);
  c.check(spans.size() == 3 && rel_ok(spans[0], 11, kRel) && rel_ok(spans[1], 33, kRel) &&
              rel_ok(spans[2], 66, kRel),
          fmt("sub-deadline spans [%.6g, %.6g, %.6g] vs [11, 33, 66]", spans[0],
              spans[1], spans[2]));

  const Topology topo = small_topology(1, 1, 1);
  const NetworkModel net = default_network();
  const Resource& cloud = topo.at(*topo.find("cloud-0"));
  const Resource& fog = topo.at(*topo.find("fog-0"));
  const Resource& edge = topo.at(*topo.find("edge-0-0"));
  const MicroBatchMeta mb = batch_at(topo, "cloud-0", 1'000'000);
  // Two hops: 5 ms + 8e6 bit / 100 Mbps, then 1 ms + 8e6 bit / 60 Mbps.
  const double d_hand = (0.005 + 8e6 / 100e6) + (0.001 + 8e6 / 60e6);
  const Seconds d = transfer_time(mb, cloud, edge, topo, net);
  c.check(rel_ok(d, d_hand, kRel), fmt("transfer time %.9f vs %.9f s", d, d_hand));

  NetworkModel priced = default_network();
  priced.set_tier_link(Tier::Fog, Tier::Cloud, {100e6, 0.005, 1e-8});
  priced.set_tier_link(Tier::Edge, Tier::Fog, {60e6, 0.001, 2e-8});
  const Cents k = transfer_cost(mb, cloud, edge, topo, priced);
  c.check(rel_ok(k, 1e6 * 1e-8 + 1e6 * 2e-8, kRel), fmt("transfer cost %.9g vs 0.03 c", k));

  const BillingPolicy billing;
  const double edge_hand = 60.0 * (0.167 / 3600.0);
  const double fog_hand = 8.0 * (1.467 / 3600.0);  // ceil(60 / 8) increments
  c.check(rel_ok(exec_cost(60, edge, billing), edge_hand, kRel),
          fmt("edge exec cost %.9g vs %.9g c", exec_cost(60, edge, billing), edge_hand));
  c.check(rel_ok(exec_cost(60, fog, billing), fog_hand, kRel),
          fmt("fog exec cost %.9g vs %.9g c", exec_cost(60, fog, billing), fog_hand));
  c.check(exec_cost(64, fog, billing) == 8.0 * fog.price,
          "exact multiple bills exactly k increments");

  Topology t2 = topo;
  t2.at(edge.id).failure_prob = 0.1;
  FogScheduler fs(fog.id, {edge.id}, 1.0);
  Inquiry inq;
  inq.id = InquiryId{1};
  inq.theta = 60.0;
  inq.issued_at = 100.0;
  inq.sub_deadline = 180.0;
  inq.input = mb;
  const FogContext ctx{t2, net, billing, 1.0};
  const auto cands = fs.edge_candidates(inq, ctx);
  const double omega_hand = 100.0 + 1.0 + d_hand + 60.0;
  const double kappa_hand = edge_hand + 0.1 * fog_hand;
  c.check(cands.size() == 1 && rel_ok(cands[0].latest_completion, omega_hand, kRel),
          fmt("latest completion %.9f vs %.9f s",
              cands.empty() ? 0.0 : cands[0].latest_completion, omega_hand));
  c.check(cands.size() == 1 && rel_ok(cands[0].kappa, kappa_hand, kRel),
          fmt("expected maximum cost %.9g vs %.9g c", cands.empty() ? 0.0 : cands[0].kappa,
              kappa_hand));
  return c.report(t.seconds(), 1.0);
}

bool criterion_2() {
  Timer t;
  Criterion c(2, "slot calendar agrees with brute force on 10,000 random sequences");
  const CalendarPropertyStats st = run_calendar_property(20'260'101, 10'000, 20);
  c.check(st.sequences == 10'000, fmt("%.0f sequences, %.0f operations",
                                      static_cast<double>(st.sequences),
                                      static_cast<double>(st.operations)));
  c.check(st.violations == 0,
          fmt("%.0f violations", static_cast<double>(st.violations)) +
              (st.first_violation.empty() ? "" : " (first: " + st.first_violation + ")"));
  c.check(st.defragmented > 0,
          fmt("%.0f reservations, %.0f needed defragmentation",
              static_cast<double>(st.reservations), static_cast<double>(st.defragmented)));
  return c.report(t.seconds(), 30.0);
}

bool criterion_3() {
  Timer t;
  Criterion c(3, "desk scale, reliable edges, chi = 1: every accepted task meets its deadline");
  const RunConfig cfg = load_config(kPresets / "desk.json");
  const Scenario& s = cfg.scenario;
  c.check(s.topology.edges().size() == 20 && s.topology.fogs().size() == 2 &&
              s.topology.clouds().size() == 1,
          "20 edges, 2 fogs, 1 cloud");
  bool chi_one = true;
  for (ResourceId f : s.topology.fogs()) chi_one = chi_one && s.oversubscription_of(f) == 1.0;
  c.check(chi_one, "over-subscription 1 on every fog");
  c.check(s.workload.duration == 300.0 && !s.workload.mtbf, "5 sim-min, no failures");

  Timer runs;
  auto results = run_audited(s, {"cofee"}, seeds_1_to_20());
  const double per_seed = runs.seconds() / 20.0;
  std::uint64_t pipelines = 0, failed = 0;
  for (const auto& r : results) {
    pipelines += r.report.pipelines;
    failed += r.report.pipelines_failed;
  }
  c.check(results.size() == 20 && pipelines > 0 && failed == 0,
          fmt("%.0f pipelines over 20 seeds, %.0f missed a deadline",
              static_cast<double>(pipelines), static_cast<double>(failed)));
  c.check(per_seed < 10.0, fmt("%.3f s per seed (wall, parallel)", per_seed));
  g_audited.insert(g_audited.end(), results.begin(), results.end());
  return c.report(t.seconds(), 10.0 * 20);
}

bool criterion_4() {
  Timer t;
  Criterion c(4, "reliable edges: CoFEE vs cloud-only vs local-fog-partition");
  const RunConfig cfg = load_config(kPresets / "reliable.json");
  const Scenario& s = cfg.scenario;
  c.check(s.topology.edges().size() == 100 && s.topology.fogs().size() == 5 &&
              s.topology.clouds().size() == 6 && s.workload.duration == 1200.0 &&
              s.workload.rate_per_min == 15.0,
          "100 edges, 5 fogs, 6 clouds, 20 sim-min, 15 micro-batches/min");

  const auto results = run_audited(s, {"cofee", "cloud-only", "lfp"}, seeds_1_to_20());
  const PolicyMeans cf = means(results, "cofee");
  const PolicyMeans co = means(results, "cloud-only");
  const PolicyMeans lfp = means(results, "lfp");

  c.check(cf.success == 1.0, fmt("CoFEE success %.4f (need 1)", cf.success));
  c.check(lfp.failure >= 0.20 && lfp.failure <= 0.45,
          fmt("LFP failure %.4f (need [0.20, 0.45])", lfp.failure));
  c.check(lfp.total_cost < cf.total_cost && cf.total_cost < co.total_cost,
          fmt("total cost LFP %.4f < CoFEE %.4f < CO %.4f c", lfp.total_cost,
              cf.total_cost, co.total_cost));
  const double ratio = cf.avg_cost / co.avg_cost;
  c.check(ratio <= 0.6, fmt("avg cost per successful pipeline CoFEE/CO %.4f (need <= 0.6)",
                            ratio));
  c.check(cf.cloud <= 0.10, fmt("CoFEE cloud fraction %.4f (need <= 0.10)", cf.cloud));
  c.check(cf.edge >= 0.55, fmt("CoFEE edge fraction %.4f (need >= 0.55)", cf.edge));
  g_audited.insert(g_audited.end(), results.begin(), results.end());
  return c.report(t.seconds(), 300.0);
}

bool criterion_5() {
  Timer t;
  Criterion c(5, "unreliable edges: backups keep CoFEE pipelines alive");
  const RunConfig m100 = load_config(kPresets / "m100.json");
  const RunConfig m40 = load_config(kPresets / "m40.json");
  c.check(m100.scenario.workload.mtbf == 6000.0 && m40.scenario.workload.mtbf == 2400.0,
          "edge MTBF 100 and 40 min");
  const auto r100 = run_audited(m100.scenario, {"cofee", "lfp"}, seeds_1_to_20());
  const auto r40 = run_audited(m40.scenario, {"cofee", "lfp"}, seeds_1_to_20());
  const PolicyMeans c100 = means(r100, "cofee"), l100 = means(r100, "lfp");
  const PolicyMeans c40 = means(r40, "cofee"), l40 = means(r40, "lfp");

  c.check(c100.success >= 0.995, fmt("M100 CoFEE success %.4f (need >= 0.995)", c100.success));
  c.check(c40.success >= 0.98, fmt("M40 CoFEE success %.4f (need >= 0.98)", c40.success));
  c.check(c40.cloud > c100.cloud,
          fmt("CoFEE cloud fraction M100 %.4f -> M40 %.4f (need an increase)", c100.cloud,
              c40.cloud));
  c.check(l100.failure - c100.failure >= 0.15,
          fmt("M100 failure gap LFP %.4f - CoFEE %.4f (need >= 0.15)", l100.failure,
              c100.failure));
  c.check(l40.failure - c40.failure >= 0.15,
          fmt("M40 failure gap LFP %.4f - CoFEE %.4f (need >= 0.15)", l40.failure,
              c40.failure));
  g_audited.insert(g_audited.end(), r100.begin(), r100.end());
  g_audited.insert(g_audited.end(), r40.begin(), r40.end());
  return c.report(t.seconds(), 300.0);
}

bool criterion_6() {
  Timer t;
  Criterion c(6, "doubling the workload with half-length tasks");
  const RunConfig one = load_config(kPresets / "scale-1x.json");
  const RunConfig two = load_config(kPresets / "scale-2x.json");
  c.check(two.scenario.workload.rate_per_min == 2 * one.scenario.workload.rate_per_min,
          "2x preset doubles the trigger rate");
  const auto r1 = run_audited(one.scenario, {"cofee"}, seeds_1_to_20());
  const auto r2 = run_audited(two.scenario, {"cofee"}, seeds_1_to_20());
  const PolicyMeans a = means(r1, "cofee"), b = means(r2, "cofee");

  const double throughput = b.tasks_per_min / a.tasks_per_min;
  c.check(throughput >= 1.8, fmt("median tasks/min 1x %.2f, 2x %.2f, ratio %.3f (need >= 1.8)",
                                 a.tasks_per_min, b.tasks_per_min, throughput));
  const double cost = b.avg_cost / a.avg_cost;
  c.check(cost >= 0.4 && cost <= 0.6,
          fmt("avg cost per pipeline 1x %.6f, 2x %.6f, ratio %.3f (need [0.4, 0.6])",
              a.avg_cost, b.avg_cost, cost));
  c.check(b.total_cost >= a.total_cost,
          fmt("total cost 1x %.4f, 2x %.4f c (need 2x >= 1x)", a.total_cost, b.total_cost));
  g_audited.insert(g_audited.end(), r1.begin(), r1.end());
  g_audited.insert(g_audited.end(), r2.begin(), r2.end());
  return c.report(t.seconds(), 300.0);
}

bool criterion_7() {
  Timer t;
  Criterion c(7, "identical config and seed give byte-identical metrics.csv");
  const RunConfig cfg = load_config(kPresets / "reliable.json");
  const auto seeds = parse_seed_range("1..6");
  const fs::path root = fs::temp_directory_path() / "cofee-acceptance-determinism";
  fs::remove_all(root);

  std::vector<std::string> files;
  for (std::size_t threads : {std::size_t{1}, std::size_t{1}, worker_threads()}) {
    ExperimentOptions opt;
    opt.threads = threads;
    const fs::path dir = root / std::to_string(files.size());
    emit_report(run_experiment(cfg.scenario, cfg.policies, seeds, opt), dir);
    std::ifstream in(dir / "metrics.csv", std::ios::binary);
    files.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  fs::remove_all(root);
  c.check(!files[0].empty() && files[0] == files[1], "two single-threaded runs match");
  c.check(files[0] == files[2],
          fmt("single-threaded and %.0f-thread runs match",
              static_cast<double>(worker_threads())));
  return c.report(t.seconds(), 60.0);
}

bool criterion_8() {
  Timer t;
  Criterion c(8, "pipeline and cost conservation, trace audit");
  std::size_t pipelines_bad = 0, cost_bad = 0, audit_bad = 0;
  for (const AuditedRun& r : g_audited) {
    const MetricsReport& m = r.report;
    if (m.pipelines_completed + m.pipelines_failed != m.pipelines) ++pipelines_bad;
    if (std::abs(m.successful_cost + m.wasted_cost - m.total_cost) > 1e-9) ++cost_bad;
    const double tol = 1e-9 * std::max(1.0, m.total_cost);
    if (r.audit.mismatches != 0 || !r.audit.time_monotone ||
        std::abs(r.audit.total - m.total_cost) > tol ||
        std::abs(r.audit.logged_total - m.total_cost) > tol) {
      ++audit_bad;
    }
  }
  const double n = static_cast<double>(g_audited.size());
  c.check(!g_audited.empty(), fmt("%.0f audited runs from criteria 3 to 6", n));
  c.check(pipelines_bad == 0, fmt("completed + failed = triggered in %.0f of %.0f runs",
                                  n - static_cast<double>(pipelines_bad), n));
  c.check(cost_bad == 0, fmt("successful + wasted = total (1e-9) in %.0f of %.0f runs",
                             n - static_cast<double>(cost_bad), n));
  c.check(audit_bad == 0, fmt("trace recomputation matches the report in %.0f of %.0f runs",
                              n - static_cast<double>(audit_bad), n));
  return c.report(t.seconds(), 60.0);
}

}  // namespace

int main() {
  int failed = 0;
  auto guard = [&](int number, bool (*fn)()) {
    try {
      if (!fn()) ++failed;
    } catch (const std::exception& e) {
      std::printf("FAIL criterion %d: threw %s\n", number, e.what());
      ++failed;
    }
  };
  guard(1, criterion_1);
  guard(2, criterion_2);
  guard(3, criterion_3);
  guard(4, criterion_4);
  guard(5, criterion_5);
  guard(6, criterion_6);
  guard(7, criterion_7);
  guard(8, criterion_8);
  std::printf("%d of 8 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
