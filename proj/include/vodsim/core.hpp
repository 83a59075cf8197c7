#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace vodsim {

// Mobile node identifier. Ids are dense 0..N-1 for an N-node scenario.
// The central server is not a NodeId; it is the sentinel in PieceSource.
using NodeId = std::uint32_t;

// Index of a video piece, contiguous 0..piece_count-1.
using PieceId = std::uint32_t;

// Canonical tie-break order used everywhere a deterministic choice
// between nodes is needed.
inline std::strong_ordering canonical_order(NodeId a, NodeId b) {
  return a <=> b;
}

// Where a piece gets delivered from: a peer over ad-hoc Wi-Fi, or the
// server over the cellular link.
struct PieceSource {
  bool server = true;
  NodeId peer = 0;  // meaningful only when !server

  static PieceSource from_server() { return PieceSource{true, 0}; }
  static PieceSource from_peer(NodeId n) { return PieceSource{false, n}; }
  bool is_server() const { return server; }
  bool operator==(const PieceSource&) const = default;
};

struct VideoSpec {
  std::uint32_t piece_count = 75;
  std::uint64_t piece_size_bytes = 262144;  // 256 KiB
  double bitrate_bps = 512000.0;

  double piece_duration_s() const {
    return static_cast<double>(piece_size_bytes) * 8.0 / bitrate_bps;
  }
  double duration_s() const { return piece_count * piece_duration_s(); }

  void validate() const;  // throws ConfigError
  bool operator==(const VideoSpec&) const = default;
};

// One entry of a node's neighbor list, as reported to the server.
// addr_meta stands in for IP/MAC and is never consulted by scheduling.
struct NeighborRecord {
  NodeId neighbor = 0;
  double rssi_dbm = 0.0;
  double freq_mhz = 2412.0;
  std::string addr_meta;
  double last_seen_s = 0.0;

  bool operator==(const NeighborRecord&) const = default;
};

// Server-side map of which pieces each node holds. Entries only ever
// grow during a run. The server itself is a seeder and is queried via
// source_has_piece.
class ContentMap {
 public:
  void add(NodeId node, PieceId piece);
  bool has_piece(NodeId node, PieceId piece) const;
  bool source_has_piece(const PieceSource& src, PieceId piece) const;
  std::size_t count(NodeId node) const;
  const std::set<PieceId>* holdings(NodeId node) const;
  const std::map<NodeId, std::set<PieceId>>& all() const { return holdings_; }

 private:
  std::map<NodeId, std::set<PieceId>> holdings_;
};

// Server-side aggregate of every node's reported neighbor list.
// Symmetry is not assumed: A may hear B without B hearing A.
struct ConnectivityMap {
  std::map<NodeId, std::vector<NeighborRecord>> view;

  const std::vector<NeighborRecord>& neighbors_of(NodeId node) const;
};

}  // namespace vodsim
