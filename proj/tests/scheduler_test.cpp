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

#include <doctest.h>

#include "cofee/fog_scheduler.hpp"
#include "cofee/master_scheduler.hpp"
#include "support.hpp"

using namespace cofee;
using namespace cofee::test;

namespace {

struct Fixture {
  Topology topo = small_topology(1, 1, 1);
  NetworkModel net = default_network();
  BillingPolicy billing;
  ResourceId fog = *topo.find("fog-0");
  ResourceId edge = *topo.find("edge-0-0");
  ResourceId cloud = *topo.find("cloud-0");

  FogContext ctx() const { return FogContext{topo, net, billing, 1.0}; }

  Inquiry inquiry(Seconds theta, Seconds issued, Seconds sigma,
                  const std::string& where, std::uint64_t bytes = 1'000'000) const {
    Inquiry q;
    q.id = InquiryId{1};
    q.task = 7;
    q.theta = theta;
    q.issued_at = issued;
    q.sub_deadline = sigma;
    q.input = batch_at(topo, where, bytes);
    return q;
  }
};

Bid bid(Tier tier, const std::string& worker, Cents kappa, bool with_slot = false) {
  Bid b;
  b.kind = tier == Tier::Edge ? BidKind::EdgeWithBackup
           : tier == Tier::Fog ? BidKind::FogDirect
                               : BidKind::Cloud;
  b.worker_tier = tier;
  b.worker_name = worker;
  b.kappa = kappa;
  if (with_slot) b.reservation = ReservationId{1};
  return b;
}

}  // namespace

TEST_CASE("edge bid cost and backup slot for a cloud-resident input") {
  Fixture f;
  f.topo.at(f.edge).failure_prob = 0.1;
  FogScheduler fs(f.fog, {f.edge}, 1.0);
  const Inquiry inq = f.inquiry(60.0, 100.0, 180.0, "cloud-0");

  const auto cands = fs.edge_candidates(inq, f.ctx());
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].latest_completion == doctest::Approx(161.2193).epsilon(1e-6));

  const Bid b = fs.compute_bid(inq, f.ctx());
  REQUIRE(b.kind == BidKind::EdgeWithBackup);
  CHECK(*b.worker == f.edge);
  const Cents expected = 60.0 * kEdgePerHour / 3600.0 + 0.1 * 8.0 * kFogPerHour / 3600.0;
  CHECK(rel_near(b.kappa, expected, 1e-9));
  CHECK(rel_near(b.kappa, 3.109e-3, 1e-3));
  const Reservation& r = fs.calendar().get(*b.reservation);
  CHECK(r.kind == ReservationKind::Backup);
  CHECK(r.length() == doctest::Approx(7.5));
  CHECK(r.start >= cands[0].latest_completion);
  CHECK(r.end <= 180.0);
  CHECK_FALSE(fs.edge_idle(f.edge));
  CHECK(fs.pending_bids() == 1);
}

TEST_CASE("a busy edge leaves the fog to bid on its own timeline") {
  Fixture f;
  FogScheduler fs(f.fog, {f.edge}, 1.0);
  const Inquiry first = f.inquiry(60.0, 0.0, 100.0, "edge-0-0");
  const Bid a = fs.compute_bid(first, f.ctx());
  REQUIRE(a.kind == BidKind::EdgeWithBackup);

  const Bid b = fs.compute_bid(f.inquiry(60.0, 0.0, 100.0, "edge-0-0"), f.ctx());
  REQUIRE(b.kind == BidKind::FogDirect);
  CHECK(*b.worker == f.fog);
  CHECK(fs.calendar().get(*b.reservation).kind == ReservationKind::Primary);
  // Worst-fit skips the short gap before the first bid's backup [61, 68.5)
  // and takes the open tail.
  CHECK(b.projected_completion == doctest::Approx(68.5 + 7.5));
  CHECK(rel_near(b.kappa, 8.0 * kFogPerHour / 3600.0, 1e-9));
}

TEST_CASE("a tight deadline rules out the edge") {
  Fixture f;
  FogScheduler fs(f.fog, {f.edge}, 1.0);
  // 1 + 60 on the edge + 7.5 backup exceeds 50, but the fog alone fits.
  const Bid b = fs.compute_bid(f.inquiry(60.0, 0.0, 50.0, "fog-0"), f.ctx());
  CHECK(b.kind == BidKind::FogDirect);
  CHECK(fs.edge_idle(f.edge));
}

TEST_CASE("a full calendar yields an empty bid") {
  Fixture f;
  FogScheduler fs(f.fog, {f.edge}, 1.0);
  fs.calendar().reserve(ReserveRequest{ReservationKind::Primary, 1, 500.0, 0.0, 500.0});
  const Bid b = fs.compute_bid(f.inquiry(60.0, 0.0, 200.0, "fog-0"), f.ctx());
  CHECK_FALSE(b.viable());
  CHECK(fs.pending_bids() == 0);
  CHECK(fs.edge_idle(f.edge));
}

TEST_CASE("accept and reject close the bid; unknown handles are protocol errors") {
  Fixture f;
  FogScheduler fs(f.fog, {f.edge}, 1.0);
  const Bid a = fs.compute_bid(f.inquiry(60.0, 0.0, 100.0, "edge-0-0"), f.ctx());
  const auto free_before_b = fs.calendar().free_slots();
  const Bid b = fs.compute_bid(f.inquiry(60.0, 0.0, 100.0, "edge-0-0"), f.ctx());
  fs.on_reject(*b.reservation);
  CHECK(fs.calendar().free_slots() == free_before_b);

  const Assignment asg = fs.on_accept(*a.reservation);
  CHECK(asg.kind == AssignmentKind::EdgeWithBackup);
  CHECK(asg.worker == f.edge);
  CHECK(fs.calendar().get(*a.reservation).state == ReservationState::Permanent);
  CHECK_THROWS_AS(fs.on_accept(*a.reservation), ProtocolError);
  CHECK_THROWS_AS(fs.on_reject(ReservationId{4242}), ProtocolError);

  fs.on_task_complete(f.edge, *a.reservation);
  CHECK(fs.edge_idle(f.edge));
  CHECK(fs.calendar().size() == 0);
}

TEST_CASE("candidate fogs are the cheapest whose reported slots fit") {
  Topology topo = small_topology(3, 0, 0);
  Inquiry inq;
  inq.theta = 80.0;  // 10 s on a fog
  inq.issued_at = 0.0;
  inq.sub_deadline = 100.0;
  std::vector<FogReport> reports;
  const Seconds spans[] = {50.0, 5.0, 50.0};
  for (int i = 0; i < 3; ++i) {
    const ResourceId fog = *topo.find("fog-" + std::to_string(i));
    reports.push_back(FogReport{fog, 0.0, {FreeSlot{0, 0.0, spans[i]}}});
  }
  CHECK(select_candidate_fogs(inq, reports, topo, 2) ==
        std::vector<ResourceId>{*topo.find("fog-0"), *topo.find("fog-2")});
  CHECK(select_candidate_fogs(inq, reports, topo, 1) ==
        std::vector<ResourceId>{*topo.find("fog-0")});

  // A cheaper fog outranks a roomier one.
  topo.at(*topo.find("fog-2")).price /= 2;
  CHECK(select_candidate_fogs(inq, reports, topo, 1) ==
        std::vector<ResourceId>{*topo.find("fog-2")});

  inq.sub_deadline = 8.0;
  CHECK(select_candidate_fogs(inq, reports, topo, 2).empty());
}

TEST_CASE("cloud bids include the input transfer") {
  Fixture f;
  const Resource& cloud = f.topo.at(f.cloud);
  const Inquiry inq = f.inquiry(60.0, 0.0, 100.0, "fog-0");
  const Bid b = cloud_bid(inq, cloud, 10.0, f.topo, f.net, f.billing);
  REQUIRE(b.kind == BidKind::Cloud);
  // 5 ms + 8e6 / 100e6 = 0.085 s, then 1.2 s of execution billed as 2 s.
  CHECK(b.projected_completion == doctest::Approx(10.0 + 0.085 + 1.2));
  CHECK(rel_near(b.kappa, 2.0 * kCloudPerHour / 3600.0, 1e-9));

  const Bid late = cloud_bid(inq, cloud, 99.0, f.topo, f.net, f.billing);
  CHECK_FALSE(late.viable());

  const Bid local = cloud_bid(f.inquiry(60.0, 0.0, 100.0, "cloud-0"), cloud, 10.0,
                              f.topo, f.net, f.billing);
  CHECK(local.projected_completion == doctest::Approx(11.2));
}

TEST_CASE("selection picks the cheapest viable bid") {
  std::vector<Bid> bids{bid(Tier::Edge, "edge-a", 0.003, true),
                        bid(Tier::Fog, "fog-b", 0.002, true),
                        bid(Tier::Cloud, "cloud-c", 0.0055)};
  const auto out = run_selection(bids);
  REQUIRE(out.winner);
  CHECK(*out.winner == 1);
  CHECK(out.rejected == std::vector<std::size_t>{0});

  SUBCASE("empty bids never win") {
    std::vector<Bid> none(3);
    CHECK_FALSE(run_selection(none).winner);
  }
  SUBCASE("ties prefer edge, then fog, then cloud") {
    std::vector<Bid> tied{bid(Tier::Cloud, "a", 0.001), bid(Tier::Fog, "b", 0.001, true),
                          bid(Tier::Edge, "c", 0.001, true)};
    CHECK(*run_selection(tied).winner == 2);
    tied.pop_back();
    CHECK(*run_selection(tied).winner == 1);
  }
  SUBCASE("scaling every price leaves the winner unchanged") {
    for (double scale : {1e-3, 0.5, 3.0, 1e4}) {
      std::vector<Bid> scaled = bids;
      for (Bid& b : scaled) b.kappa *= scale;
      CHECK(run_selection(scaled).winner == out.winner);
    }
  }
}
