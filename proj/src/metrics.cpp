#include "vodsim/metrics.hpp"

#include "vodsim/errors.hpp"

namespace vodsim {

std::optional<double> compute_improvement(std::uint64_t server_bytes,
                                          std::uint64_t peer_bytes) {
  const std::uint64_t total = server_bytes + peer_bytes;
  if (total == 0) return std::nullopt;
  return static_cast<double>(peer_bytes) / static_cast<double>(total);
}

std::optional<double> improvement(const Report& report) {
  return compute_improvement(report.global.server_bytes, report.global.peer_bytes);
}

GlobalStats recompute_global(const Report& report) {
  GlobalStats g;
  for (const TransferRecord& t : report.transfers) {
    if (t.source.is_server()) {
      g.server_bytes += t.bytes;
    } else {
      g.peer_bytes += t.bytes;
    }
  }
  g.improvement = compute_improvement(g.server_bytes, g.peer_bytes);
  g.duration_s = report.global.duration_s;
  g.truncated = report.global.truncated;
  return g;
}

RunSummary summarize(const Report& report) {
  RunSummary s;
  s.mode = report.mode;
  s.seed = report.seed;
  s.server_bytes = report.global.server_bytes;
  s.peer_bytes = report.global.peer_bytes;
  s.improvement = report.global.improvement;

  double startup_sum = 0.0;
  std::size_t started = 0;
  double stall_sum = 0.0;
  for (const NodeStats& n : report.nodes) {
    if (n.startup_delay_s) {
      startup_sum += *n.startup_delay_s;
      ++started;
    }
    stall_sum += n.stall_total_s;
  }
  s.mean_startup_s = started > 0 ? startup_sum / static_cast<double>(started) : 0.0;
  s.mean_stall_total_s =
      report.nodes.empty() ? 0.0 : stall_sum / static_cast<double>(report.nodes.size());
  return s;
}

CompareSummary compare(const Report& a, const Report& b) {
  Scenario sa = a.scenario;
  Scenario sb = b.scenario;
  // Mode and seed are the run knobs a comparison varies; everything else
  // must line up.
  sa.mode = sb.mode;
  sa.seed = sb.seed;
  if (!(sa == sb)) {
    throw ConfigError("compare: reports come from different scenarios");
  }

  CompareSummary c;
  c.a = summarize(a);
  c.b = summarize(b);
  c.server_bytes_delta = static_cast<double>(c.b.server_bytes) -
                         static_cast<double>(c.a.server_bytes);
  c.improvement_delta = c.b.improvement.value_or(0.0) - c.a.improvement.value_or(0.0);
  c.mean_startup_delta_s = c.b.mean_startup_s - c.a.mean_startup_s;
  c.mean_stall_delta_s = c.b.mean_stall_total_s - c.a.mean_stall_total_s;
  return c;
}

}  // namespace vodsim
