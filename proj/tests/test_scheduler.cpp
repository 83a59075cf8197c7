#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "vodsim/errors.hpp"
#include "vodsim/rng.hpp"
#include "vodsim/scheduler.hpp"

using namespace vodsim;

namespace {

constexpr NodeId kRequester = 0;

// Builds a ServerState in which node 0 requests `piece` from the given
// candidate set.
ServerState make_state(const std::vector<oracles::CandidateFacts>& candidates,
                       PieceId piece, const VideoSpec& video,
                       double rssi_threshold = -75.0) {
  ServerState st(0.5, 1.0, false, rssi_threshold);
  ConnectivityReport report;
  report.node = kRequester;
  for (const auto& c : candidates) {
    report.entries.push_back(
        NeighborRecord{c.node, c.rssi_dbm, 2412.0, "node", 0.0});
    if (c.has_piece) st.apply_content_update(c.node, piece, video);
    if (!c.schedulable) {
      // Two matching low evaluations pin the mean below threshold.
      st.trust().record_evaluation({kRequester, c.node, 0.0, 0.0});
    }
    if (c.busy) st.mark_busy(c.node);
    st.apply_rbt_report(c.node, c.rbt_s);
  }
  st.apply_connectivity_report(report);
  return st;
}

}  // namespace

TEST_CASE("no neighbors means the server delivers") {
  VideoSpec video;
  ServerState st(0.5, 1.0, false, -75.0);
  const ScheduleDecision d = schedule_piece(st, kRequester, 3);
  CHECK(d.source.is_server());
  CHECK(d.audit.neighbors == 0);
  CHECK(d.audit.idle == 0);
}

TEST_CASE("the eligible peer with the largest reported RBT wins") {
  VideoSpec video;
  std::vector<oracles::CandidateFacts> cands{
      {1, -60.0, true, true, false, 8.0},
      {2, -60.0, true, true, false, 12.0},
  };
  ServerState st = make_state(cands, 5, video);
  const ScheduleDecision d = schedule_piece(st, kRequester, 5);
  CHECK(d.source == PieceSource::from_peer(2));
  CHECK(d.chosen_rbt_s == doctest::Approx(12.0));
  CHECK(d.audit.neighbors == 2);
  CHECK(d.audit.idle == 2);
}

TEST_CASE("a sole low-trust candidate forces server fallback") {
  VideoSpec video;
  std::vector<oracles::CandidateFacts> cands{
      {1, -60.0, true, false, false, 20.0},
  };
  ServerState st = make_state(cands, 5, video);
  const ScheduleDecision d = schedule_piece(st, kRequester, 5);
  CHECK(d.source.is_server());
  CHECK(d.audit.have_piece == 1);
  CHECK(d.audit.trusted == 0);
}

TEST_CASE("RBT ties break toward the lowest node id") {
  VideoSpec video;
  std::vector<oracles::CandidateFacts> cands{
      {9, -60.0, true, true, false, 10.0},
      {4, -60.0, true, true, false, 10.0},
  };
  ServerState st = make_state(cands, 2, video);
  const ScheduleDecision d = schedule_piece(st, kRequester, 2);
  CHECK(d.source == PieceSource::from_peer(4));
}

TEST_CASE("thresholds are boundary-inclusive for trust and RSSI") {
  VideoSpec video;
  ServerState st(0.5, 1.0, false, -75.0);
  ConnectivityReport report;
  report.node = kRequester;
  report.entries.push_back(NeighborRecord{1, -75.0, 2412.0, "node-1", 0.0});
  st.apply_connectivity_report(report);
  st.apply_content_update(1, 0, video);
  // Mean exactly at threshold.
  st.trust().record_evaluation({0, 1, 0.2, 0.0});
  st.trust().record_evaluation({2, 1, 0.8, 0.0});

  const ScheduleDecision d = schedule_piece(st, kRequester, 0);
  CHECK(d.source == PieceSource::from_peer(1));
}

TEST_CASE("busy candidates are excluded at stage 4") {
  VideoSpec video;
  std::vector<oracles::CandidateFacts> cands{
      {1, -60.0, true, true, true, 25.0},
      {2, -60.0, true, true, false, 5.0},
  };
  ServerState st = make_state(cands, 1, video);
  const ScheduleDecision d = schedule_piece(st, kRequester, 1);
  CHECK(d.source == PieceSource::from_peer(2));
  CHECK(d.audit.rssi_ok == 2);
  CHECK(d.audit.idle == 1);
}

TEST_CASE("audit counts never increase across stages") {
  VideoSpec video;
  RngStream rng(31, "audit-monotone");
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<oracles::CandidateFacts> cands;
    const std::uint32_t n = rng.below(6);
    for (std::uint32_t i = 0; i < n; ++i) {
      cands.push_back({i + 1, rng.uniform(-95, -40), rng.next_unit() < 0.7,
                       rng.next_unit() < 0.8, rng.next_unit() < 0.25,
                       rng.uniform(0, 40)});
    }
    ServerState st = make_state(cands, 0, video);
    const ScheduleDecision d = schedule_piece(st, kRequester, 0);
    CHECK(d.audit.neighbors >= d.audit.have_piece);
    CHECK(d.audit.have_piece >= d.audit.trusted);
    CHECK(d.audit.trusted >= d.audit.rssi_ok);
    CHECK(d.audit.rssi_ok >= d.audit.idle);
  }
}

TEST_CASE("schedule_piece matches the brute-force oracle on random states") {
  VideoSpec video;
  RngStream rng(127, "scheduler-oracle");
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<oracles::CandidateFacts> cands;
    const std::uint32_t n = rng.below(9);
    for (std::uint32_t i = 0; i < n; ++i) {
      double rbt = rng.uniform(0, 40);
      if (!cands.empty() && rng.next_unit() < 0.3) rbt = cands.back().rbt_s;  // ties
      cands.push_back({i + 1, rng.uniform(-95, -40), rng.next_unit() < 0.7,
                       rng.next_unit() < 0.8, rng.next_unit() < 0.25, rbt});
    }
    ServerState st = make_state(cands, 7, video);
    const ScheduleDecision d = schedule_piece(st, kRequester, 7);
    const auto expected = oracles::schedule_oracle(cands, st.rssi_threshold_dbm());
    CHECK(d.source == expected.source);
    CHECK(d.audit == expected.audit);
    if (!d.source.is_server()) CHECK(d.chosen_rbt_s == expected.chosen_rbt_s);
  }
}

TEST_CASE("a busy requester or one already holding the piece is a protocol error") {
  VideoSpec video;
  ServerState st(0.5, 1.0, false, -75.0);
  st.mark_busy(kRequester);
  CHECK_THROWS_AS(schedule_piece(st, kRequester, 0), ProtocolError);
  st.mark_idle(kRequester);
  st.apply_content_update(kRequester, 0, video);
  CHECK_THROWS_AS(schedule_piece(st, kRequester, 0), ProtocolError);
}

TEST_CASE("busy bookkeeping round-trips and rejects double transitions") {
  ServerState st(0.5, 1.0, false, -75.0);
  st.mark_busy(3);
  CHECK(st.is_busy(3));
  CHECK_THROWS_AS(st.mark_busy(3), ProtocolError);
  st.mark_idle(3);
  CHECK_FALSE(st.is_busy(3));
  CHECK_THROWS_AS(st.mark_idle(3), ProtocolError);
}

TEST_CASE("connectivity reports replace the view wholesale") {
  ServerState st(0.5, 1.0, false, -75.0);
  ConnectivityReport first{0, {NeighborRecord{1, -50, 2412, "node-1", 0.0},
                               NeighborRecord{2, -60, 2412, "node-2", 0.0}}};
  st.apply_connectivity_report(first);
  CHECK(st.connectivity().neighbors_of(0).size() == 2);

  ConnectivityReport second{0, {NeighborRecord{3, -55, 2412, "node-3", 1.0}}};
  st.apply_connectivity_report(second);
  REQUIRE(st.connectivity().neighbors_of(0).size() == 1);
  CHECK(st.connectivity().neighbors_of(0)[0].neighbor == 3);

  st.apply_connectivity_report(ConnectivityReport{0, {}});
  CHECK(st.connectivity().neighbors_of(0).empty());
}

TEST_CASE("content updates accumulate, reject out-of-range pieces") {
  VideoSpec video;
  video.piece_count = 10;
  ServerState st(0.5, 1.0, false, -75.0);
  for (PieceId p = 0; p < 5; ++p) st.apply_content_update(2, p, video);
  st.apply_content_update(2, 3, video);  // idempotent
  REQUIRE(st.content().holdings(2) != nullptr);
  CHECK(st.content().holdings(2)->size() == 5);
  for (PieceId p = 0; p < 5; ++p) CHECK(st.content().has_piece(2, p));
  CHECK_THROWS_AS(st.apply_content_update(2, 10, video), ConfigError);
}

TEST_CASE("grouping: the default policy is one global group") {
  ServerState st(0.5, 1.0, false, -75.0);
  auto groups = assign_group(st, {2, 0, 1}, Grouping::kGlobal);
  REQUIRE(groups.size() == 1);
  CHECK(groups[0] == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("grouping: components splits mutually unreachable clusters") {
  ServerState st(0.5, 1.0, false, -75.0);
  auto link = [&](NodeId a, NodeId b) {
    ConnectivityReport ra{a, st.connectivity().neighbors_of(a)};
    ra.entries.push_back(NeighborRecord{b, -50, 2412, "x", 0.0});
    st.apply_connectivity_report(ra);
  };
  // Cluster {0,1} mutual, cluster {2,3} mutual, 4 isolated, and one
  // asymmetric link 0 -> 2 that must not merge the clusters.
  link(0, 1);
  link(1, 0);
  link(2, 3);
  link(3, 2);
  link(0, 2);

  auto groups = assign_group(st, {0, 1, 2, 3, 4}, Grouping::kComponents);
  auto expected = oracles::components_oracle(st.connectivity(), {0, 1, 2, 3, 4});
  CHECK(groups == expected);
  REQUIRE(groups.size() == 3);
  CHECK(groups[0] == std::vector<NodeId>{0, 1});
  CHECK(groups[1] == std::vector<NodeId>{2, 3});
  CHECK(groups[2] == std::vector<NodeId>{4});
}

TEST_CASE("grouping: two clusters 1 km apart form two components") {
  // Build connectivity the way the system does: from probe rounds.
  std::map<NodeId, Position> positions{{0, Position{0, 0}},
                                       {1, Position{5, 0}},
                                       {2, Position{1000, 0}},
                                       {3, Position{1005, 0}}};
  RadioParams radio;
  ServerState st(0.5, 1.0, false, -75.0);
  for (NodeId n = 0; n < 4; ++n) {
    NeighborList list;
    list = run_probe_round(n, positions, radio, 0.0, std::move(list));
    st.apply_connectivity_report(report_to_server(n, list));
  }
  auto groups = assign_group(st, {0, 1, 2, 3}, Grouping::kComponents);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0] == std::vector<NodeId>{0, 1});
  CHECK(groups[1] == std::vector<NodeId>{2, 3});
  CHECK(groups == oracles::components_oracle(st.connectivity(), {0, 1, 2, 3}));
}

TEST_CASE("grouping: random connectivity matches the BFS oracle") {
  RngStream rng(67, "groups");
  for (int trial = 0; trial < 50; ++trial) {
    ServerState st(0.5, 1.0, false, -75.0);
    const std::uint32_t n = 2 + rng.below(7);
    std::vector<NodeId> nodes;
    for (NodeId i = 0; i < n; ++i) nodes.push_back(i);
    for (NodeId a = 0; a < n; ++a) {
      ConnectivityReport r{a, {}};
      for (NodeId b = 0; b < n; ++b) {
        if (a != b && rng.next_unit() < 0.3) {
          r.entries.push_back(NeighborRecord{b, -50, 2412, "x", 0.0});
        }
      }
      st.apply_connectivity_report(r);
    }
    CHECK(assign_group(st, nodes, Grouping::kComponents) ==
          oracles::components_oracle(st.connectivity(), nodes));
  }
}
