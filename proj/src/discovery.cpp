#include "vodsim/discovery.hpp"

#include <algorithm>
#include <string>

#include "vodsim/errors.hpp"

namespace vodsim {

void DiscoveryTimers::validate() const {
  if (!(probe_interval_s > 0.0)) throw ConfigError("timers.probe_s must be > 0");
  if (!(report_interval_s > 0.0)) throw ConfigError("timers.report_s must be > 0");
  if (staleness_rounds <= 0) throw ConfigError("timers.staleness_rounds must be > 0");
  if (probe_loss_prob < 0.0 || probe_loss_prob > 1.0) {
    throw ConfigError("timers.probe_loss_prob must be in [0,1]");
  }
}

NeighborList run_probe_round(NodeId node,
                             const std::map<NodeId, Position>& positions,
                             const RadioParams& params, double now_s,
                             NeighborList list, RngStream* loss_rng,
                             double probe_loss_prob) {
  auto self = positions.find(node);
  if (self == positions.end()) {
    throw ConfigError("run_probe_round: unknown node id " + std::to_string(node));
  }
  list.owner = node;
  list.generated_at_s = now_s;
  for (const auto& [other, pos] : positions) {
    if (other == node) continue;
    if (!in_range(self->second, pos, params)) continue;
    if (probe_loss_prob > 0.0 && loss_rng != nullptr &&
        loss_rng->next_unit() < probe_loss_prob) {
      continue;  // response lost this round
    }
    const double rssi = rssi_dbm(self->second, pos, params);
    auto it = std::find_if(list.entries.begin(), list.entries.end(),
                           [&](const NeighborRecord& r) { return r.neighbor == other; });
    if (it == list.entries.end()) {
      NeighborRecord rec;
      rec.neighbor = other;
      rec.rssi_dbm = rssi;
      rec.addr_meta = "node-" + std::to_string(other);
      rec.last_seen_s = now_s;
      list.entries.push_back(rec);
    } else {
      it->rssi_dbm = rssi;
      it->last_seen_s = now_s;
    }
  }
  std::sort(list.entries.begin(), list.entries.end(),
            [](const NeighborRecord& a, const NeighborRecord& b) {
              return canonical_order(a.neighbor, b.neighbor) < 0;
            });
  return list;
}

NeighborList expire_stale(NeighborList list, double now_s,
                          const DiscoveryTimers& timers) {
  const double horizon = timers.staleness_rounds * timers.probe_interval_s;
  std::erase_if(list.entries, [&](const NeighborRecord& r) {
    return now_s - r.last_seen_s > horizon;  // strictly stale only
  });
  list.generated_at_s = now_s;
  return list;
}

ConnectivityReport report_to_server(NodeId node, const NeighborList& list) {
  if (list.owner != node) {
    throw ProtocolError("report_to_server: list owner mismatch");
  }
  return ConnectivityReport{node, list.entries};
}

}  // namespace vodsim
