#include "vodsim/client.hpp"

#include <algorithm>
#include <string>

#include "vodsim/errors.hpp"

namespace vodsim {

PlayoutState::PlayoutState(NodeId node, double joined_at_s,
                           double prebuffer_target_s, double high_watermark_s,
                           std::uint32_t pipeline_depth)
    : node_(node),
      joined_at_s_(joined_at_s),
      prebuffer_target_s_(prebuffer_target_s),
      high_watermark_s_(high_watermark_s),
      pipeline_depth_(pipeline_depth == 0 ? 1 : pipeline_depth),
      synced_to_s_(joined_at_s) {}

std::optional<PieceId> PlayoutState::next_request(const VideoSpec& video) const {
  if (inflight_.size() >= pipeline_depth_) return std::nullopt;
  if (held_.size() + inflight_.size() >= video.piece_count) return std::nullopt;
  if (rbt(video) >= high_watermark_s_) return std::nullopt;

  for (PieceId p = 0; p < video.piece_count; ++p) {
    if (holds(p)) continue;
    if (std::find(inflight_.begin(), inflight_.end(), p) != inflight_.end()) continue;
    return p;
  }
  return std::nullopt;
}

void PlayoutState::begin_request(PieceId piece) {
  if (holds(piece)) {
    throw ProtocolError("begin_request: piece " + std::to_string(piece) +
                        " already held");
  }
  if (std::find(inflight_.begin(), inflight_.end(), piece) != inflight_.end()) {
    throw ProtocolError("begin_request: piece " + std::to_string(piece) +
                        " already in flight");
  }
  if (inflight_.size() >= pipeline_depth_) {
    throw ProtocolError("begin_request: pipeline full");
  }
  inflight_.push_back(piece);
}

void PlayoutState::on_piece_received(PieceId piece, const VideoSpec& video,
                                     double now_s) {
  sync_to(now_s, video);

  auto it = std::find(inflight_.begin(), inflight_.end(), piece);
  if (it == inflight_.end()) {
    throw ProtocolError("on_piece_received: unexpected piece " +
                        std::to_string(piece) + " at node " +
                        std::to_string(node_));
  }
  inflight_.erase(it);
  held_.insert(piece);

  // A stall ends the moment the piece at the playhead arrives.
  if (stall_open_s_ && playhead_piece_ < video.piece_count &&
      holds(playhead_piece_)) {
    stalls_.push_back({*stall_open_s_, now_s});
    stall_open_s_.reset();
  }

  if (!playing_ && rbt(video) >= prebuffer_target_s_) {
    playing_ = true;
    started_at_s_ = now_s;
    synced_to_s_ = now_s;
  }
}

double PlayoutState::rbt(const VideoSpec& video) const {
  if (playhead_piece_ >= video.piece_count) return 0.0;
  PieceId m = playhead_piece_;
  while (m < video.piece_count && holds(m)) ++m;
  const double dur = video.piece_duration_s();
  const double lead = static_cast<double>(m) * dur -
                      (static_cast<double>(playhead_piece_) * dur + playhead_offset_s_);
  return lead > 0.0 ? lead : 0.0;
}

void PlayoutState::advance_playout(double dt, const VideoSpec& video) {
  if (dt < 0.0) throw ProtocolError("advance_playout: negative dt");
  const double target = synced_to_s_ + dt;

  if (!playing_ || completed_at_s_ || stall_open_s_) {
    // Time passes; the playhead stays put (not started, done, or stalled).
    synced_to_s_ = target;
    return;
  }

  const double dur = video.piece_duration_s();
  double remaining = dt;
  for (;;) {
    if (playhead_piece_ >= video.piece_count) {
      completed_at_s_ = synced_to_s_;
      break;
    }
    if (!holds(playhead_piece_)) {
      // Landing exactly on a missing boundary still opens the stall.
      stall_open_s_ = synced_to_s_;
      break;
    }
    if (remaining <= 0.0) break;
    const double room = dur - playhead_offset_s_;
    if (remaining >= room) {
      // Cross the boundary exactly.
      ++playhead_piece_;
      playhead_offset_s_ = 0.0;
      synced_to_s_ += room;
      remaining -= room;
    } else {
      playhead_offset_s_ += remaining;
      synced_to_s_ += remaining;
      remaining = 0.0;
    }
  }
  synced_to_s_ = target;  // absorb any leftover spent stalled/completed
}

void PlayoutState::sync_to(double now_s, const VideoSpec& video) {
  if (now_s <= synced_to_s_) return;
  advance_playout(now_s - synced_to_s_, video);
}

StateReport PlayoutState::report_state(const VideoSpec& video) const {
  return StateReport{node_, rbt(video), &held_};
}

double PlayoutState::playhead_s(const VideoSpec& video) const {
  return static_cast<double>(playhead_piece_) * video.piece_duration_s() +
         playhead_offset_s_;
}

double PlayoutState::stall_total_s() const {
  double total = 0.0;
  for (const auto& s : stalls_) total += s.end_s - s.start_s;
  return total;
}

}  // namespace vodsim
