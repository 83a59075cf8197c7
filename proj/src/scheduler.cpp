#include "vodsim/scheduler.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "vodsim/errors.hpp"

namespace vodsim {

ServerState::ServerState(double trust_threshold, double default_trust,
                         bool sticky_blacklist, double rssi_threshold_dbm)
    : trust_(trust_threshold, default_trust, sticky_blacklist),
      rssi_threshold_dbm_(rssi_threshold_dbm) {}

void ServerState::apply_connectivity_report(const ConnectivityReport& report) {
  connectivity_.view[report.node] = report.entries;
}

void ServerState::apply_content_update(NodeId node, PieceId piece,
                                       const VideoSpec& video) {
  if (piece >= video.piece_count) {
    throw ConfigError("content update: piece " + std::to_string(piece) +
                      " out of range");
  }
  content_.add(node, piece);
}

void ServerState::apply_rbt_report(NodeId node, double rbt_s) {
  rbt_view_[node] = rbt_s;
}

void ServerState::mark_busy(NodeId node) {
  if (!busy_.insert(node).second) {
    throw ProtocolError("mark_busy: node " + std::to_string(node) +
                        " already busy");
  }
}

void ServerState::mark_idle(NodeId node) {
  if (busy_.erase(node) == 0) {
    throw ProtocolError("mark_idle: node " + std::to_string(node) +
                        " was not busy");
  }
}

double ServerState::rbt_of(NodeId node) const {
  auto it = rbt_view_.find(node);
  return it == rbt_view_.end() ? 0.0 : it->second;
}

ScheduleDecision schedule_piece(const ServerState& state, NodeId requester,
                                PieceId piece) {
  if (state.is_busy(requester)) {
    throw ProtocolError("schedule_piece: requester " + std::to_string(requester) +
                        " is busy");
  }
  if (state.content().has_piece(requester, piece)) {
    throw ProtocolError("schedule_piece: requester " + std::to_string(requester) +
                        " already holds piece " + std::to_string(piece));
  }

  ScheduleDecision d;
  d.requester = requester;
  d.piece = piece;

  for (const NeighborRecord& rec : state.connectivity().neighbors_of(requester)) {
    CandidateSnapshot c;
    c.node = rec.neighbor;
    c.rssi_dbm = rec.rssi_dbm;
    c.has_piece = state.content().has_piece(rec.neighbor, piece);
    c.schedulable = state.trust().is_schedulable(rec.neighbor);
    c.busy = state.is_busy(rec.neighbor);
    c.rbt_s = state.rbt_of(rec.neighbor);
    d.candidates.push_back(c);
  }

  d.audit.neighbors = static_cast<std::uint32_t>(d.candidates.size());
  const CandidateSnapshot* best = nullptr;
  std::uint32_t have_piece = 0, trusted = 0, rssi_ok = 0, idle = 0;
  for (const CandidateSnapshot& c : d.candidates) {
    if (!c.has_piece) continue;
    ++have_piece;
    if (!c.schedulable) continue;
    ++trusted;
    if (!(c.rssi_dbm >= state.rssi_threshold_dbm())) continue;
    ++rssi_ok;
    if (c.busy) continue;
    ++idle;
    if (best == nullptr || c.rbt_s > best->rbt_s ||
        (c.rbt_s == best->rbt_s && canonical_order(c.node, best->node) < 0)) {
      best = &c;
    }
  }
  d.audit.have_piece = have_piece;
  d.audit.trusted = trusted;
  d.audit.rssi_ok = rssi_ok;
  d.audit.idle = idle;

  if (best != nullptr) {
    d.source = PieceSource::from_peer(best->node);
    d.chosen_rbt_s = best->rbt_s;
  } else {
    d.source = PieceSource::from_server();
    d.chosen_rbt_s = 0.0;
  }
  return d;
}

namespace {

NodeId find_root(std::map<NodeId, NodeId>& parent, NodeId x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

std::vector<std::vector<NodeId>> assign_group(const ServerState& state,
                                              const std::vector<NodeId>& nodes,
                                              Grouping policy) {
  std::vector<NodeId> sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  if (policy == Grouping::kGlobal) {
    if (sorted.empty()) return {};
    return {sorted};
  }

  std::map<NodeId, NodeId> parent;
  for (NodeId n : sorted) parent[n] = n;

  auto member = [&](NodeId n) { return parent.count(n) > 0; };
  auto lists = [&](NodeId a, NodeId b) {
    for (const NeighborRecord& r : state.connectivity().neighbors_of(a)) {
      if (r.neighbor == b) return true;
    }
    return false;
  };

  for (NodeId a : sorted) {
    for (const NeighborRecord& r : state.connectivity().neighbors_of(a)) {
      const NodeId b = r.neighbor;
      if (!member(b) || !lists(b, a)) continue;  // mutual links only
      NodeId ra = find_root(parent, a);
      NodeId rb = find_root(parent, b);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
  }

  std::map<NodeId, std::vector<NodeId>> groups;
  for (NodeId n : sorted) groups[find_root(parent, n)].push_back(n);

  std::vector<std::vector<NodeId>> out;
  out.reserve(groups.size());
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;  // map order = by smallest member; members already sorted
}

}  // namespace vodsim
