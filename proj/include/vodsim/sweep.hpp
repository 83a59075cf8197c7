#pragma once

#include <cstdint>
#include <vector>

#include "vodsim/scenario.hpp"
#include "vodsim/sim.hpp"

namespace vodsim {

struct SweepRow {
  std::uint32_t node_count = 0;
  std::uint64_t seed = 0;
  double improvement = 0.0;
  double mean_startup_s = 0.0;
  double mean_stall_s = 0.0;
  bool truncated = false;
};

struct SweepCountMean {
  std::uint32_t node_count = 0;
  double mean_improvement = 0.0;
  double mean_startup_s = 0.0;
  double mean_stall_s = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;          // in (count, seed) order
  std::vector<SweepCountMean> by_count;  // in count order
};

// Derives the point scenario for one sweep cell: node count and seed
// replaced, everything else from the base. Requires a generative layout
// (random square + offset range) when the count differs from the base.
Scenario sweep_point(const Scenario& base, std::uint32_t node_count,
                     std::uint64_t seed);

// Runs every (count, seed_base + k) cell, fanning runs out across worker
// threads; results are merged in deterministic (count, seed) order.
SweepResult run_sweep(const Scenario& base, const std::vector<std::uint32_t>& counts,
                      std::uint32_t seeds_per_point, unsigned threads = 0);

std::string sweep_to_csv(const SweepResult& result);

}  // namespace vodsim
