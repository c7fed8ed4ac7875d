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

#include <algorithm>
#include <random>
#include <set>

#include <doctest.h>

#include "cofee/dag.hpp"
#include "cofee/dag_generator.hpp"

using namespace cofee;

namespace {

DagSpec make_dag(const std::vector<std::string>& ids,
                 const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                 std::vector<Seconds> thetas = {}) {
  DagSpec d;
  d.id = "d";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    d.tasks.push_back({ids[i], thetas.empty() ? 10.0 : thetas[i], 1000});
  }
  d.edges = edges;
  d.deadline = 100.0;
  d.filter.dag_id = "d";
  d.filter.domain = DomainPredicate{"topic", "d"};
  return d;
}

/// Root-to-sink paths by explicit-stack enumeration.
std::set<TaskChain> enumerate_paths(const DagSpec& d) {
  std::vector<std::vector<std::size_t>> succ(d.tasks.size());
  std::vector<int> indegree(d.tasks.size(), 0);
  for (auto [a, b] : d.edges) {
    succ[a].push_back(b);
    ++indegree[b];
  }
  const auto root = static_cast<std::size_t>(
      std::find(indegree.begin(), indegree.end(), 0) - indegree.begin());
  std::set<TaskChain> out;
  std::vector<TaskChain> stack{{root}};
  while (!stack.empty()) {
    TaskChain p = stack.back();
    stack.pop_back();
    if (succ[p.back()].empty()) {
      out.insert(p);
      continue;
    }
    for (std::size_t w : succ[p.back()]) {
      TaskChain q = p;
      q.push_back(w);
      stack.push_back(std::move(q));
    }
  }
  return out;
}

/// Path count by dynamic programming over a topological order.
std::uint64_t count_paths(const DagSpec& d) {
  const std::size_t n = d.tasks.size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (auto [a, b] : d.edges) succ[a].push_back(b);
  // Tasks are generated so that every edge points to a higher index.
  std::vector<std::uint64_t> from(n, 0);
  for (std::size_t v = n; v-- > 0;) {
    if (succ[v].empty()) {
      from[v] = 1;
    } else {
      for (std::size_t w : succ[v]) from[v] += from[w];
    }
  }
  return from[0];
}

}  // namespace

TEST_CASE("a diamond unrolls into one chain per path with the join repeated") {
  // A->B, B->C, B->D, C->E, D->E
  const DagSpec d = make_dag({"A", "B", "C", "D", "E"},
                             {{0, 1}, {1, 2}, {1, 3}, {2, 4}, {3, 4}});
  const auto chains = unroll(d);
  REQUIRE(chains.size() == 2);
  CHECK(chains[0] == TaskChain{0, 1, 2, 4});
  CHECK(chains[1] == TaskChain{0, 1, 3, 4});
}

TEST_CASE("a linear chain is its own single pipeline") {
  const DagSpec d = make_dag({"A", "B", "C"}, {{0, 1}, {1, 2}});
  CHECK(unroll(d) == std::vector<TaskChain>{{0, 1, 2}});
}

TEST_CASE("cycles and multiple roots are rejected") {
  const DagSpec cyclic = make_dag({"A", "B", "C"}, {{0, 1}, {1, 2}, {2, 0}});
  CHECK_THROWS_AS(unroll(cyclic), ValidationError);
  CHECK_THROWS_AS(cyclic.validate(), ValidationError);
  const DagSpec two_roots = make_dag({"A", "B", "C"}, {{0, 2}, {1, 2}});
  CHECK_THROWS_AS(two_roots.validate(), ValidationError);
}

TEST_CASE("unrolled chains equal brute-force path enumeration on random DAGs") {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 500; ++round) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("t" + std::to_string(i));
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::bernoulli_distribution extra(0.25);
    for (std::size_t v = 1; v < n; ++v) {
      // At least one parent keeps task 0 the only root.
      std::set<std::size_t> parents{
          std::uniform_int_distribution<std::size_t>(0, v - 1)(rng)};
      for (std::size_t u = 0; u < v; ++u) {
        if (extra(rng)) parents.insert(u);
      }
      for (std::size_t u : parents) edges.emplace_back(u, v);
    }
    const DagSpec d = make_dag(ids, edges);
    REQUIRE_NOTHROW(d.validate());
    const auto chains = unroll(d);
    CHECK(chains.size() == count_paths(d));
    CHECK(std::set<TaskChain>(chains.begin(), chains.end()) == enumerate_paths(d));
  }
}

TEST_CASE("sub-deadline spans follow each task's share of the chain time") {
  const std::vector<Seconds> thetas{10, 30, 60};
  const auto spans = apportion(thetas, 110.0);
  REQUIRE(spans.size() == 3);
  CHECK(spans[0] == doctest::Approx(11.0).epsilon(1e-12));
  CHECK(spans[1] == doctest::Approx(33.0).epsilon(1e-12));
  CHECK(spans[2] == doctest::Approx(66.0).epsilon(1e-12));

  const std::vector<Seconds> one{42};
  CHECK(apportion(one, 17.0) == std::vector<Seconds>{17.0});
  const std::vector<Seconds> equal{5, 5, 5, 5};
  for (Seconds s : apportion(equal, 80.0)) CHECK(s == doctest::Approx(20.0));
}

TEST_CASE("the last sub-deadline is the trigger time plus the DAG deadline") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> th(0.1, 97.0);
  std::uniform_real_distribution<double> when(0.0, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + i % 7;
    std::vector<std::string> ids;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<Seconds> thetas;
    for (std::size_t k = 0; k < n; ++k) {
      ids.push_back("t" + std::to_string(k));
      thetas.push_back(th(rng));
      if (k) edges.emplace_back(k - 1, k);
    }
    DagSpec d = make_dag(ids, edges, thetas);
    d.deadline = th(rng) * 3;
    const Seconds t0 = when(rng);
    PipelineInstance p(PipelineId{0}, d, unroll(d)[0], {}, t0, 0);
    CHECK(p.deadline() == t0 + d.deadline);
    for (std::size_t k = 1; k < p.size(); ++k) {
      CHECK(p.sub_deadline(k) > p.sub_deadline(k - 1));
    }
  }
}

TEST_CASE("pipeline cursor semantics") {
  const DagSpec d = make_dag({"A", "B"}, {{0, 1}}, {10, 30});
  MicroBatchMeta out;
  out.id = MicroBatchId{9};

  SUBCASE("on-time completion hands the output to the next task") {
    PipelineInstance p(PipelineId{1}, d, {0, 1}, {}, 0.0, 0);
    const auto r = p.advance(0, 20.0, out);
    REQUIRE(std::holds_alternative<NextTask>(r));
    CHECK(std::get<NextTask>(r).index == 1);
    CHECK(std::get<NextTask>(r).input.id == out.id);
    CHECK(std::holds_alternative<PipelineCompleted>(p.advance(1, 100.0, out)));
    CHECK(p.status() == PipelineStatus::Completed);
  }
  SUBCASE("completion exactly at the sub-deadline is on time") {
    PipelineInstance p(PipelineId{1}, d, {0, 1}, {}, 0.0, 0);
    CHECK(std::holds_alternative<NextTask>(p.advance(0, p.sub_deadline(0), out)));
  }
  SUBCASE("a late completion fails the pipeline") {
    PipelineInstance p(PipelineId{1}, d, {0, 1}, {}, 0.0, 0);
    CHECK(std::holds_alternative<PipelineLate>(p.advance(0, 25.0 + 1e-9, out)));
    CHECK(p.status() == PipelineStatus::Failed);
  }
  SUBCASE("out-of-order completion is a protocol error") {
    PipelineInstance p(PipelineId{1}, d, {0, 1}, {}, 0.0, 0);
    CHECK_THROWS_AS(p.advance(1, 5.0, out), ProtocolError);
  }
}

TEST_CASE("generated DAGs have the configured shape") {
  const auto dags = generate_dag_set(30, 3);
  REQUIRE(dags.size() == 30);
  for (const DagSpec& d : dags) {
    CHECK_NOTHROW(unroll(d));
    const auto chains = unroll(d);
    CHECK(chains.size() >= 2);
    CHECK(chains.size() <= 7);
    for (const TaskSpec& t : d.tasks) {
      CHECK(t.theta >= 10.0);
      CHECK(t.theta <= 60.0);
      CHECK(t.output_bytes >= 500'000);
      CHECK(t.output_bytes <= 1'500'000);
    }
  }
  CHECK(task_type_theta(0) == 10.0);
  CHECK(task_type_theta(7) == 60.0);
  CHECK(generate_dag_set(5, 9).size() == 5);
  // Same seed, same set.
  const auto again = generate_dag_set(30, 3);
  for (std::size_t i = 0; i < dags.size(); ++i) {
    CHECK(again[i].edges == dags[i].edges);
  }
}
