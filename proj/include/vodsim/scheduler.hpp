#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "vodsim/core.hpp"
#include "vodsim/discovery.hpp"
#include "vodsim/trust.hpp"

namespace vodsim {

enum class Grouping { kGlobal, kComponents };

// Candidate counts surviving each filter stage, in pipeline order.
struct StageAudit {
  std::uint32_t neighbors = 0;
  std::uint32_t have_piece = 0;
  std::uint32_t trusted = 0;
  std::uint32_t rssi_ok = 0;
  std::uint32_t idle = 0;

  bool operator==(const StageAudit&) const = default;
};

// Per-candidate snapshot taken at decision time. This is what makes every
// decision independently re-verifiable from the log alone.
struct CandidateSnapshot {
  NodeId node = 0;
  double rssi_dbm = 0.0;  // as heard by the requester
  bool has_piece = false;
  bool schedulable = false;  // trust gate
  bool busy = false;
  double rbt_s = 0.0;  // last reported remaining buffer time

  bool operator==(const CandidateSnapshot&) const = default;
};

struct ScheduleDecision {
  double at_s = 0.0;
  NodeId requester = 0;
  PieceId piece = 0;
  PieceSource source = PieceSource::from_server();
  StageAudit audit;
  double chosen_rbt_s = 0.0;  // winner's RBT when source is a peer
  std::vector<CandidateSnapshot> candidates;

  bool operator==(const ScheduleDecision&) const = default;
};

// Everything the server knows: connectivity, content and trust maps, the
// busy set, and the latest reported RBT per node.
class ServerState {
 public:
  ServerState() = default;
  ServerState(double trust_threshold, double default_trust, bool sticky_blacklist,
              double rssi_threshold_dbm);

  // Replaces the requester's neighbor view wholesale (no merge).
  void apply_connectivity_report(const ConnectivityReport& report);

  // Adds one piece to a node's holdings; idempotent. Out-of-range piece ->
  // ConfigError.
  void apply_content_update(NodeId node, PieceId piece, const VideoSpec& video);

  // Refreshes the node's reported remaining buffer time.
  void apply_rbt_report(NodeId node, double rbt_s);

  // Busy bookkeeping; double-busy and double-idle are protocol errors
  // (they would mean overlapping transfers on one node).
  void mark_busy(NodeId node);
  void mark_idle(NodeId node);

  bool is_busy(NodeId node) const { return busy_.count(node) > 0; }
  double rbt_of(NodeId node) const;

  const ConnectivityMap& connectivity() const { return connectivity_; }
  const ContentMap& content() const { return content_; }
  const TrustState& trust() const { return trust_; }
  TrustState& trust() { return trust_; }
  const std::set<NodeId>& busy() const { return busy_; }
  double rssi_threshold_dbm() const { return rssi_threshold_dbm_; }

 private:
  ConnectivityMap connectivity_;
  ContentMap content_;
  TrustState trust_;
  std::set<NodeId> busy_;
  double rssi_threshold_dbm_ = -75.0;
  std::map<NodeId, double> rbt_view_;
};

// The source-selection pipeline, applied to a state snapshot:
//   stage 0  candidates = the requester's reported neighbors
//   stage 1  keep those holding the piece
//   stage 2  keep those passing the trust gate
//   stage 3  keep those heard at RSSI >= threshold
//   stage 4  drop those currently in a transfer
// Survivors: the one with the largest reported RBT wins, ties broken by
// lowest node id. No survivors: the server delivers.
// Requester busy or already holding the piece -> ProtocolError.
ScheduleDecision schedule_piece(const ServerState& state, NodeId requester,
                                PieceId piece);

// Ad-hoc group assignment. The default policy is one global group; the
// "components" policy returns connected components of the mutual-
// reachability graph (a and b linked iff each appears in the other's
// reported neighbor list). Groups are ordered by smallest member.
std::vector<std::vector<NodeId>> assign_group(const ServerState& state,
                                              const std::vector<NodeId>& nodes,
                                              Grouping policy);

}  // namespace vodsim
