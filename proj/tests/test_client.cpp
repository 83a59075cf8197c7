#include "doctest.h"
#include "oracles.hpp"
#include "vodsim/client.hpp"
#include "vodsim/errors.hpp"
#include "vodsim/rng.hpp"

using namespace vodsim;

namespace {

VideoSpec four_second_pieces() {
  VideoSpec v;
  v.piece_count = 10;
  v.piece_size_bytes = 262144;
  v.bitrate_bps = 524288.0;  // exactly 4 s per piece
  return v;
}

}  // namespace

TEST_CASE("a fresh client asks for piece 0") {
  VideoSpec video = four_second_pieces();
  PlayoutState c(0, 0.0, 4.0, 30.0, 1);
  CHECK(c.next_request(video) == PieceId{0});
}

TEST_CASE("requests go strictly in order") {
  VideoSpec video = four_second_pieces();
  PlayoutState c(0, 0.0, 4.0, 1000.0, 1);
  for (PieceId p = 0; p < 5; ++p) {
    REQUIRE(c.next_request(video) == p);
    c.begin_request(p);
    CHECK(c.next_request(video) == std::nullopt);  // pipeline depth 1
    c.on_piece_received(p, video, 0.1 * (p + 1));
  }
  CHECK(c.next_request(video) == PieceId{5});
}

TEST_CASE("requesting pauses at the high watermark") {
  VideoSpec video = four_second_pieces();
  PlayoutState c(0, 0.0, 4.0, 30.0, 1);
  double t = 0.0;
  // 8 pieces buffered = 32 s lead >= 30 s watermark.
  for (PieceId p = 0; p < 8; ++p) {
    c.begin_request(p);
    t += 0.1;
    c.on_piece_received(p, video, t);
  }
  CHECK(c.rbt(video) >= 30.0);
  CHECK(c.next_request(video) == std::nullopt);
  // Playback consumes the lead; requesting resumes below the watermark.
  c.advance_playout(3.0, video);
  CHECK(c.rbt(video) < 30.0);
  CHECK(c.next_request(video) == PieceId{8});
}

TEST_CASE("playback starts once the prebuffer target is met") {
  VideoSpec video = four_second_pieces();
  PlayoutState c(0, 0.0, 4.0, 30.0, 1);
  CHECK_FALSE(c.playing());
  c.begin_request(0);
  c.on_piece_received(0, video, 1.5);
  CHECK(c.playing());
  REQUIRE(c.started_at_s().has_value());
  CHECK(*c.started_at_s() == doctest::Approx(1.5));
}

TEST_CASE("an unexpected piece is a protocol error") {
  VideoSpec video = four_second_pieces();
  PlayoutState c(0, 0.0, 4.0, 30.0, 1);
  c.begin_request(0);
  CHECK_THROWS_AS(c.on_piece_received(1, video, 0.5), ProtocolError);
}

TEST_CASE("after the final piece there is nothing left to request") {
  VideoSpec video = four_second_pieces();
  PlayoutState c(0, 0.0, 4.0, 1e9, 1);
  double t = 0.0;
  for (PieceId p = 0; p < video.piece_count; ++p) {
    c.begin_request(p);
    t += 0.1;
    c.on_piece_received(p, video, t);
  }
  CHECK(c.all_held(video));
  CHECK(c.next_request(video) == std::nullopt);
}

TEST_CASE("rbt: empty buffer is zero") {
  VideoSpec video = four_second_pieces();
  PlayoutState c(0, 0.0, 4.0, 30.0, 1);
  CHECK(c.rbt(video) == doctest::Approx(0.0));
}

TEST_CASE("rbt: contiguous run ahead of the playhead") {
  VideoSpec video = four_second_pieces();
  PlayoutState c(0, 0.0, 4.0, 30.0, 1);
  for (PieceId p : {0, 1, 2}) {
    c.begin_request(p);
    c.on_piece_received(p, video, 0.0);
  }
  // held {0,1,2}, playhead 0 -> 12 s.
  CHECK(c.rbt(video) == doctest::Approx(12.0));
  CHECK(c.rbt(video) == doctest::Approx(oracles::rbt_oracle(c.held(), 0.0, video)));
}

TEST_CASE("rbt: a gap ends the contiguous run") {
  VideoSpec video = four_second_pieces();
  PlayoutState c(0, 0.0, 4.0, 30.0, 1);
  c.begin_request(0);
  c.on_piece_received(0, video, 0.0);  // playback starts
  c.begin_request(1);
  c.on_piece_received(1, video, 0.0);
  c.begin_request(3);
  c.on_piece_received(3, video, 0.0);
  c.advance_playout(1.0, video);
  // held {0,1,3}, playhead 1.0 -> pieces 0..1 buffered, 8 - 1 = 7 s.
  CHECK(c.playhead_s(video) == doctest::Approx(1.0));
  CHECK(c.rbt(video) == doctest::Approx(7.0));
  CHECK(c.rbt(video) ==
        doctest::Approx(oracles::rbt_oracle(c.held(), c.playhead_s(video), video)));
}

TEST_CASE("playout stops at a missing piece boundary and opens a stall") {
  VideoSpec video = four_second_pieces();
  PlayoutState c(0, 0.0, 4.0, 30.0, 1);
  c.begin_request(0);
  c.on_piece_received(0, video, 0.0);
  c.advance_playout(4.0, video);
  CHECK(c.playhead_s(video) == doctest::Approx(4.0));
  REQUIRE(c.open_stall_since_s().has_value());
  CHECK(*c.open_stall_since_s() == doctest::Approx(4.0));

  // Piece 1 arrives at t=6: the stall closes with end = arrival time.
  c.begin_request(1);
  c.on_piece_received(1, video, 6.0);
  CHECK_FALSE(c.open_stall_since_s().has_value());
  REQUIRE(c.stalls().size() == 1);
  CHECK(c.stalls()[0].start_s == doctest::Approx(4.0));
  CHECK(c.stalls()[0].end_s == doctest::Approx(6.0));
  CHECK(c.stall_total_s() == doctest::Approx(2.0));

  // Playback resumes after the stall.
  c.advance_playout(1.0, video);
  CHECK(c.playhead_s(video) == doctest::Approx(5.0));
}

TEST_CASE("playhead clamps at the end of the video and records completion") {
  VideoSpec video = four_second_pieces();
  PlayoutState c(0, 0.0, 4.0, 1e9, 1);
  for (PieceId p = 0; p < video.piece_count; ++p) {
    c.begin_request(p);
    c.on_piece_received(p, video, 1.0);
  }
  c.advance_playout(1000.0, video);
  CHECK(c.playhead_s(video) == doctest::Approx(video.duration_s()));
  REQUIRE(c.completed_at_s().has_value());
  // Playback ran start-to-end without stalls: 1.0 + 40 s of video.
  CHECK(*c.completed_at_s() == doctest::Approx(41.0));
}

TEST_CASE("the stall opens mid-advance at the exact boundary instant") {
  VideoSpec video = four_second_pieces();
  PlayoutState c(0, 0.0, 4.0, 30.0, 1);
  c.begin_request(0);
  c.on_piece_received(0, video, 2.0);  // playback starts at 2.0
  c.advance_playout(10.0, video);      // only 4 s of content exists
  REQUIRE(c.open_stall_since_s().has_value());
  CHECK(*c.open_stall_since_s() == doctest::Approx(6.0));
  CHECK(c.synced_to_s() == doctest::Approx(12.0));
}

TEST_CASE("state reports expose rbt and holdings read-only") {
  VideoSpec video = four_second_pieces();
  PlayoutState c(7, 0.0, 4.0, 30.0, 1);
  StateReport fresh = c.report_state(video);
  CHECK(fresh.node == 7);
  CHECK(fresh.rbt_s == doctest::Approx(0.0));
  CHECK(fresh.held->empty());

  for (PieceId p : {0, 1, 2}) {
    c.begin_request(p);
    c.on_piece_received(p, video, 0.0);
  }
  StateReport later = c.report_state(video);
  CHECK(later.rbt_s == doctest::Approx(12.0));
  CHECK(later.held->size() == 3);
}

TEST_CASE("rbt matches the scan-forward oracle under random traffic") {
  VideoSpec video;
  video.piece_count = 40;
  RngStream rng(53, "client-rbt");
  for (int trial = 0; trial < 50; ++trial) {
    PlayoutState c(0, 0.0, video.piece_duration_s(), 1e9, 1);
    double t = 0.0;
    for (int step = 0; step < 60; ++step) {
      if (rng.next_unit() < 0.6) {
        auto next = c.next_request(video);
        if (next) {
          c.begin_request(*next);
          t += rng.uniform(0.0, 2.0);
          c.on_piece_received(*next, video, t);
        }
      } else {
        const double dt = rng.uniform(0.0, 3.0);
        c.advance_playout(dt, video);
        t = c.synced_to_s();
      }
      REQUIRE(c.rbt(video) ==
              doctest::Approx(oracles::rbt_oracle(c.held(), c.playhead_s(video), video)));
    }
  }
}

TEST_CASE("pipeline depth greater than one keeps several requests in flight") {
  VideoSpec video = four_second_pieces();
  PlayoutState c(0, 0.0, 4.0, 30.0, 3);
  c.begin_request(0);
  c.begin_request(1);
  CHECK(c.next_request(video) == PieceId{2});
  c.begin_request(2);
  CHECK(c.next_request(video) == std::nullopt);
  c.on_piece_received(1, video, 0.5);  // out-of-order arrival is fine at depth 3
  CHECK(c.next_request(video) == PieceId{3});
}
