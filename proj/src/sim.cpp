#include "vodsim/sim.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "vodsim/errors.hpp"
#include "vodsim/rng.hpp"

namespace vodsim {

namespace {

// Tie-break rank at equal timestamps. Joins are processed ahead of
// everything else so a node exists before its first request fires.
enum class EventKind : int {
  kNodeJoin = 0,
  kTransferComplete = 1,
  kPieceRequest = 2,
  kReportTick = 3,
  kProbeRound = 4,
  kPlayoutTick = 5,
  kTrustEvent = 6,
};

struct Event {
  double at_s = 0.0;
  EventKind kind = EventKind::kNodeJoin;
  std::uint64_t subject = 0;  // node id, transfer id, or trust-event index
  std::uint64_t seq = 0;      // final tie-break, assigned at enqueue
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.at_s != b.at_s) return a.at_s > b.at_s;
    if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
    if (a.subject != b.subject) return a.subject > b.subject;
    return a.seq > b.seq;
  }
};

struct ActiveTransfer {
  std::uint64_t id = 0;
  PieceSource source = PieceSource::from_server();
  NodeId dest = 0;
  PieceId piece = 0;
  double started_s = 0.0;
  double rate_bps = 0.0;
};

struct PendingServerTransfer {
  NodeId dest = 0;
  PieceId piece = 0;
};

struct NodeRuntime {
  bool joined = false;
  bool request_pending = false;  // a PieceRequest event sits in the queue
  PlayoutState client;
  NeighborList nlist;
  std::uint64_t bytes_from_server = 0;
  std::uint64_t bytes_from_peers = 0;
};

// Re-check slack after a watermark pause: the pause boundary is
// inclusive, so re-evaluating exactly at rbt == watermark would pause
// again forever.
constexpr double kWatermarkRecheckSlackS = 1e-6;

class Sim {
 public:
  Sim(const Scenario& scenario, const RunHooks* hooks)
      : sc_(scenario),
        hooks_(hooks),
        positions_(scenario),
        offsets_(resolve_start_offsets(scenario)),
        server_(scenario.scheduler.trust_threshold, scenario.scheduler.default_trust,
                scenario.scheduler.sticky_blacklist,
                scenario.scheduler.rssi_threshold_dbm),
        probe_loss_rng_(scenario.seed, "probe_loss") {
    nodes_.resize(sc_.node_count);
    playout_tick_s_ = sc_.video.piece_duration_s();
  }

  Report run() {
    for (NodeId n = 0; n < sc_.node_count; ++n) {
      push(offsets_[n], EventKind::kNodeJoin, n);
    }
    for (std::size_t i = 0; i < sc_.trust_events.size(); ++i) {
      push(sc_.trust_events[i].at_s, EventKind::kTrustEvent, i);
    }

    bool truncated = false;
    while (!queue_.empty()) {
      if (all_complete()) break;
      const Event ev = queue_.top();
      if (ev.at_s > sc_.duration_cap_s) {
        truncated = true;
        now_ = sc_.duration_cap_s;
        break;
      }
      queue_.pop();
      now_ = ev.at_s;
      dispatch(ev);
    }
    if (queue_.empty() && !all_complete()) truncated = true;

    return build_report(truncated);
  }

 private:
  void push(double at, EventKind kind, std::uint64_t subject) {
    queue_.push(Event{at, kind, subject, seq_++});
  }

  bool all_complete() const {
    for (const auto& rt : nodes_) {
      if (!rt.joined || !rt.client.completed_at_s()) return false;
    }
    return true;
  }

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case EventKind::kNodeJoin:
        on_join(static_cast<NodeId>(ev.subject));
        break;
      case EventKind::kTransferComplete:
        on_transfer_complete(ev.subject);
        break;
      case EventKind::kPieceRequest:
        on_piece_request(static_cast<NodeId>(ev.subject));
        break;
      case EventKind::kReportTick:
        on_report_tick(static_cast<NodeId>(ev.subject));
        break;
      case EventKind::kProbeRound:
        on_probe_round(static_cast<NodeId>(ev.subject));
        break;
      case EventKind::kPlayoutTick:
        on_playout_tick(static_cast<NodeId>(ev.subject));
        break;
      case EventKind::kTrustEvent:
        on_trust_event(ev.subject);
        break;
    }
  }

  void on_join(NodeId n) {
    NodeRuntime& rt = nodes_[n];
    rt.joined = true;
    rt.client = PlayoutState(n, now_, sc_.resolved_prebuffer_s(),
                             sc_.client.high_watermark_s, sc_.client.pipeline_depth);
    rt.nlist.owner = n;
    rt.nlist.generated_at_s = now_;

    const double stagger =
        n * (sc_.timers.probe_interval_s / static_cast<double>(sc_.node_count));
    push(now_ + stagger, EventKind::kProbeRound, n);
    push(now_ + sc_.timers.report_interval_s, EventKind::kReportTick, n);
    push(now_ + playout_tick_s_, EventKind::kPlayoutTick, n);
    maybe_schedule_request(n, now_);
  }

  void on_probe_round(NodeId n) {
    NodeRuntime& rt = nodes_[n];
    std::map<NodeId, Position> joined_positions;
    for (NodeId m = 0; m < sc_.node_count; ++m) {
      if (nodes_[m].joined) joined_positions[m] = positions_.at(m, now_);
    }
    rt.nlist = run_probe_round(n, joined_positions, sc_.radio, now_,
                               std::move(rt.nlist), &probe_loss_rng_,
                               sc_.timers.probe_loss_prob);
    push(now_ + sc_.timers.probe_interval_s, EventKind::kProbeRound, n);
  }

  void on_report_tick(NodeId n) {
    NodeRuntime& rt = nodes_[n];
    rt.client.sync_to(now_, sc_.video);
    rt.nlist = expire_stale(std::move(rt.nlist), now_, sc_.timers);
    server_.apply_connectivity_report(report_to_server(n, rt.nlist));

    const double rbt = rt.client.rbt(sc_.video);
    server_.apply_rbt_report(n, rbt);
    // Content updates ride the same report; arrivals already posted them,
    // so this only fills gaps (none, in the current event flow).
    if (server_.content().count(n) != rt.client.held().size()) {
      for (PieceId p : rt.client.held()) {
        server_.apply_content_update(n, p, sc_.video);
      }
    }
    if (hooks_ && hooks_->on_report) hooks_->on_report(n, now_, rt.client, rbt);

    push(now_ + sc_.timers.report_interval_s, EventKind::kReportTick, n);
  }

  void on_playout_tick(NodeId n) {
    NodeRuntime& rt = nodes_[n];
    rt.client.sync_to(now_, sc_.video);
    if (!rt.client.completed_at_s()) {
      push(now_ + playout_tick_s_, EventKind::kPlayoutTick, n);
    }
  }

  void on_trust_event(std::uint64_t index) {
    const TrustEvent& ev = sc_.trust_events[index];
    server_.trust().record_evaluation(
        TrustEvaluation{ev.evaluator, ev.subject, ev.value, now_});
  }

  void maybe_schedule_request(NodeId n, double at) {
    NodeRuntime& rt = nodes_[n];
    if (!rt.joined || rt.request_pending) return;
    if (rt.client.all_held(sc_.video)) return;
    rt.request_pending = true;
    push(at, EventKind::kPieceRequest, n);
  }

  void on_piece_request(NodeId n) {
    NodeRuntime& rt = nodes_[n];
    rt.request_pending = false;
    if (rt.client.all_held(sc_.video)) return;
    // Serving someone right now; mark_idle will re-trigger.
    if (server_.is_busy(n)) return;

    rt.client.sync_to(now_, sc_.video);
    const auto piece = rt.client.next_request(sc_.video);
    if (!piece) {
      if (rt.client.inflight().empty()) {
        // Paused by the watermark; requesting resumes once playback has
        // consumed the excess lead.
        const double rbt = rt.client.rbt(sc_.video);
        const double excess = rbt - rt.client.high_watermark_s();
        if (excess >= 0.0) {
          maybe_schedule_request(n, now_ + excess + kWatermarkRecheckSlackS);
        }
      }
      return;
    }

    ScheduleDecision decision;
    if (sc_.mode == Mode::kServerOnly) {
      decision.requester = n;
      decision.piece = *piece;
      decision.source = PieceSource::from_server();
    } else {
      decision = schedule_piece(server_, n, *piece);
    }
    decision.at_s = now_;
    decisions_.push_back(decision);

    rt.client.begin_request(*piece);
    if (decision.source.is_server() && sc_.cell_max_concurrent > 0 &&
        server_active_ >= sc_.cell_max_concurrent) {
      server_wait_queue_.push_back(PendingServerTransfer{n, *piece});
      return;
    }
    start_transfer(decision.source, n, *piece);
  }

  void start_transfer(const PieceSource& source, NodeId dest, PieceId piece) {
    double rate;
    if (source.is_server()) {
      rate = sc_.radio.cell_rate_bps;
      ++server_active_;
    } else {
      // The requester's own reading of the source is the link that was
      // thresholded, so it also picks the rate tier.
      double rssi = 0.0;
      for (const NeighborRecord& r : server_.connectivity().neighbors_of(dest)) {
        if (r.neighbor == source.peer) {
          rssi = r.rssi_dbm;
          break;
        }
      }
      rate = wifi_rate_bps_for(rssi, sc_.radio);
    }

    ActiveTransfer tr;
    tr.id = next_transfer_id_++;
    tr.source = source;
    tr.dest = dest;
    tr.piece = piece;
    tr.started_s = now_;
    tr.rate_bps = rate;
    active_.emplace(tr.id, tr);

    server_.mark_busy(dest);
    if (!source.is_server()) server_.mark_busy(source.peer);

    const double duration =
        static_cast<double>(sc_.video.piece_size_bytes) * 8.0 / rate;
    push(now_ + duration, EventKind::kTransferComplete, tr.id);
  }

  void on_transfer_complete(std::uint64_t id) {
    auto it = active_.find(id);
    if (it == active_.end()) {
      throw ProtocolError("transfer " + std::to_string(id) + " not active");
    }
    const ActiveTransfer tr = it->second;
    active_.erase(it);

    NodeRuntime& rt = nodes_[tr.dest];
    rt.client.on_piece_received(tr.piece, sc_.video, now_);
    server_.apply_content_update(tr.dest, tr.piece, sc_.video);

    if (tr.source.is_server()) {
      rt.bytes_from_server += sc_.video.piece_size_bytes;
      --server_active_;
    } else {
      rt.bytes_from_peers += sc_.video.piece_size_bytes;
    }

    transfers_.push_back(TransferRecord{tr.id, tr.source, tr.dest, tr.piece,
                                        tr.started_s, now_, tr.rate_bps,
                                        sc_.video.piece_size_bytes});

    server_.mark_idle(tr.dest);
    if (!tr.source.is_server()) server_.mark_idle(tr.source.peer);

    start_queued_server_transfers();
    maybe_schedule_request(tr.dest, now_);
    if (!tr.source.is_server()) maybe_schedule_request(tr.source.peer, now_);
  }

  void start_queued_server_transfers() {
    if (sc_.cell_max_concurrent == 0) return;
    for (auto it = server_wait_queue_.begin();
         it != server_wait_queue_.end() && server_active_ < sc_.cell_max_concurrent;) {
      if (server_.is_busy(it->dest)) {
        ++it;  // dest mid-transfer; retried when it goes idle
        continue;
      }
      start_transfer(PieceSource::from_server(), it->dest, it->piece);
      it = server_wait_queue_.erase(it);
    }
  }

  Report build_report(bool truncated) {
    Report rep;
    rep.mode = sc_.mode;
    rep.seed = sc_.seed;
    rep.scenario = sc_;
    rep.decisions = std::move(decisions_);
    rep.transfers = std::move(transfers_);

    for (NodeId n = 0; n < sc_.node_count; ++n) {
      const NodeRuntime& rt = nodes_[n];
      NodeStats ns;
      ns.node = n;
      ns.join_s = offsets_[n];
      ns.bytes_from_server = rt.bytes_from_server;
      ns.bytes_from_peers = rt.bytes_from_peers;
      if (rt.joined) {
        const PlayoutState& cl = rt.client;
        if (cl.started_at_s()) {
          ns.startup_delay_s = *cl.started_at_s() - cl.joined_at_s();
        }
        ns.stall_count = static_cast<std::uint32_t>(cl.stalls().size());
        ns.stall_total_s = cl.stall_total_s();
        if (cl.open_stall_since_s()) {
          // A stall still open at the end of a truncated run counts up to
          // the run boundary.
          ++ns.stall_count;
          ns.stall_total_s += now_ - *cl.open_stall_since_s();
        }
        ns.completed = cl.completed_at_s().has_value();
        ns.completed_at_s = cl.completed_at_s();
      }
      rep.nodes.push_back(ns);

      rep.global.server_bytes += ns.bytes_from_server;
      rep.global.peer_bytes += ns.bytes_from_peers;
    }

    rep.global.improvement =
        compute_improvement(rep.global.server_bytes, rep.global.peer_bytes);
    rep.global.duration_s = now_;
    rep.global.truncated = truncated;
    return rep;
  }

  Scenario sc_;
  const RunHooks* hooks_;
  PositionModel positions_;
  std::vector<double> offsets_;
  ServerState server_;
  RngStream probe_loss_rng_;

  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
  double playout_tick_s_ = 1.0;

  std::vector<NodeRuntime> nodes_;
  std::map<std::uint64_t, ActiveTransfer> active_;
  std::uint64_t next_transfer_id_ = 0;
  std::uint32_t server_active_ = 0;
  std::deque<PendingServerTransfer> server_wait_queue_;

  std::vector<ScheduleDecision> decisions_;
  std::vector<TransferRecord> transfers_;
};

}  // namespace

Report run(const Scenario& scenario, const RunHooks* hooks) {
  scenario.validate();
  Sim sim(scenario, hooks);
  return sim.run();
}

}  // namespace vodsim
