#pragma once

#include <optional>
#include <set>
#include <vector>

#include "vodsim/core.hpp"

namespace vodsim {

struct StallInterval {
  double start_s = 0.0;
  double end_s = 0.0;
  bool operator==(const StallInterval&) const = default;
};

struct StateReport {
  NodeId node = 0;
  double rbt_s = 0.0;
  const std::set<PieceId>* held = nullptr;
};

// Per-node playout state machine: in-order requesting, playout buffer,
// remaining-buffer-time computation, startup and stall accounting.
//
// The playhead is kept as (piece index, offset into piece) so piece
// boundaries are hit exactly, without floating-point drift. Playout is
// advanced lazily: advance_playout(dt) simulates the span since the last
// call, opening a stall at the precise instant the playhead reaches a
// missing piece.
class PlayoutState {
 public:
  PlayoutState() = default;
  PlayoutState(NodeId node, double joined_at_s, double prebuffer_target_s,
               double high_watermark_s, std::uint32_t pipeline_depth);

  // The next piece to fetch: the lowest id not held and not in flight.
  // Nothing while the pipeline is full, everything is held, or the
  // buffered lead is at/above the high watermark.
  std::optional<PieceId> next_request(const VideoSpec& video) const;

  // Marks a request as outstanding.
  void begin_request(PieceId piece);

  // Delivery of an outstanding piece at `now`. Catches playout up to
  // `now` first, so an open stall closes exactly at the arrival instant;
  // starts playback once the prebuffer target is met. A piece that was
  // never requested -> ProtocolError.
  void on_piece_received(PieceId piece, const VideoSpec& video, double now_s);

  // Seconds of contiguously buffered video ahead of the playhead.
  double rbt(const VideoSpec& video) const;

  // Advances playout by dt seconds of wall time from where the previous
  // advance left off. Playback stops at the first missing piece boundary
  // (opening a stall) and at the end of the video.
  void advance_playout(double dt, const VideoSpec& video);

  // Convenience: advance up to an absolute simulation time.
  void sync_to(double now_s, const VideoSpec& video);

  StateReport report_state(const VideoSpec& video) const;

  NodeId node() const { return node_; }
  double joined_at_s() const { return joined_at_s_; }
  const std::set<PieceId>& held() const { return held_; }
  bool all_held(const VideoSpec& video) const {
    return held_.size() >= video.piece_count;
  }
  const std::vector<PieceId>& inflight() const { return inflight_; }
  double playhead_s(const VideoSpec& video) const;
  bool playing() const { return playing_; }
  std::optional<double> started_at_s() const { return started_at_s_; }
  std::optional<double> completed_at_s() const { return completed_at_s_; }
  const std::vector<StallInterval>& stalls() const { return stalls_; }
  std::optional<double> open_stall_since_s() const { return stall_open_s_; }
  double stall_total_s() const;
  double synced_to_s() const { return synced_to_s_; }
  double high_watermark_s() const { return high_watermark_s_; }
  double prebuffer_target_s() const { return prebuffer_target_s_; }

 private:
  bool holds(PieceId p) const { return held_.count(p) > 0; }

  NodeId node_ = 0;
  double joined_at_s_ = 0.0;
  double prebuffer_target_s_ = 0.0;
  double high_watermark_s_ = 30.0;
  std::uint32_t pipeline_depth_ = 1;

  std::set<PieceId> held_;
  std::vector<PieceId> inflight_;

  std::uint32_t playhead_piece_ = 0;   // current piece index
  double playhead_offset_s_ = 0.0;     // seconds into that piece
  bool playing_ = false;
  std::optional<double> started_at_s_;
  std::optional<double> completed_at_s_;
  std::vector<StallInterval> stalls_;
  std::optional<double> stall_open_s_;
  double synced_to_s_ = 0.0;  // playout simulated up to this instant
};

}  // namespace vodsim
