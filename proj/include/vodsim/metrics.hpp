#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vodsim/scenario.hpp"
#include "vodsim/scheduler.hpp"

namespace vodsim {

struct NodeStats {
  NodeId node = 0;
  double join_s = 0.0;
  std::uint64_t bytes_from_server = 0;
  std::uint64_t bytes_from_peers = 0;
  std::optional<double> startup_delay_s;
  std::uint32_t stall_count = 0;
  double stall_total_s = 0.0;
  bool completed = false;
  std::optional<double> completed_at_s;

  bool operator==(const NodeStats&) const = default;
};

struct GlobalStats {
  std::uint64_t server_bytes = 0;
  std::uint64_t peer_bytes = 0;
  std::optional<double> improvement;  // absent when no bytes moved
  double duration_s = 0.0;
  bool truncated = false;

  bool operator==(const GlobalStats&) const = default;
};

struct TransferRecord {
  std::uint64_t id = 0;
  PieceSource source = PieceSource::from_server();
  NodeId dest = 0;
  PieceId piece = 0;
  double started_s = 0.0;
  double finished_s = 0.0;
  double rate_bps = 0.0;
  std::uint64_t bytes = 0;

  bool operator==(const TransferRecord&) const = default;
};

struct Report {
  std::uint32_t schema_version = 1;
  Mode mode = Mode::kP2p;
  std::uint64_t seed = 0;
  Scenario scenario;  // resolved config echo
  GlobalStats global;
  std::vector<NodeStats> nodes;           // ordered by node id
  std::vector<ScheduleDecision> decisions;  // in decision order
  std::vector<TransferRecord> transfers;    // in start order

  bool operator==(const Report&) const = default;
};

// Fraction of delivered bytes the server did not carry. Absent when the
// run moved no bytes at all.
std::optional<double> compute_improvement(std::uint64_t server_bytes,
                                          std::uint64_t peer_bytes);
std::optional<double> improvement(const Report& report);

// Recomputes the byte totals from the transfer log alone; the report's
// global block must be a pure summary of it.
GlobalStats recompute_global(const Report& report);

struct RunSummary {
  Mode mode = Mode::kP2p;
  std::uint64_t seed = 0;
  std::uint64_t server_bytes = 0;
  std::uint64_t peer_bytes = 0;
  std::optional<double> improvement;
  double mean_startup_s = 0.0;     // over nodes that started
  double mean_stall_total_s = 0.0;  // over all nodes
};

RunSummary summarize(const Report& report);

struct CompareSummary {
  RunSummary a;
  RunSummary b;
  double server_bytes_delta = 0.0;  // b - a
  double improvement_delta = 0.0;
  double mean_startup_delta_s = 0.0;
  double mean_stall_delta_s = 0.0;
};

// Side-by-side deltas for two runs of the same scenario (mode and seed may
// differ, everything else must match). Mismatch -> ConfigError.
CompareSummary compare(const Report& a, const Report& b);

}  // namespace vodsim
