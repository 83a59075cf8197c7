#pragma once

#include <map>
#include <vector>

#include "vodsim/core.hpp"
#include "vodsim/radio.hpp"
#include "vodsim/rng.hpp"

namespace vodsim {

// A node's local neighbor list, populated by probe rounds and shipped to
// the server on the report cadence.
struct NeighborList {
  NodeId owner = 0;
  std::vector<NeighborRecord> entries;  // sorted by neighbor id, unique
  double generated_at_s = 0.0;
};

struct DiscoveryTimers {
  double probe_interval_s = 2.0;
  double report_interval_s = 0.020;
  int staleness_rounds = 3;
  double probe_loss_prob = 0.0;  // reserved hook; 0 disables the loss draw

  void validate() const;  // throws ConfigError
  bool operator==(const DiscoveryTimers&) const = default;
};

// One broadcast-probe round: every other in-range node answers and is
// inserted/refreshed with its current RSSI and last_seen = now. Entries
// for nodes now out of range keep their old last_seen; expiry removes
// them later. Unknown node id -> ConfigError.
NeighborList run_probe_round(NodeId node,
                             const std::map<NodeId, Position>& positions,
                             const RadioParams& params, double now_s,
                             NeighborList list, RngStream* loss_rng = nullptr,
                             double probe_loss_prob = 0.0);

// Drops entries with now - last_seen strictly greater than
// staleness_rounds * probe_interval.
NeighborList expire_stale(NeighborList list, double now_s,
                          const DiscoveryTimers& timers);

// Snapshot of a neighbor list on its way to the server. Consuming it
// replaces the server's view for the owner wholesale.
struct ConnectivityReport {
  NodeId node = 0;
  std::vector<NeighborRecord> entries;
};

ConnectivityReport report_to_server(NodeId node, const NeighborList& list);

}  // namespace vodsim
