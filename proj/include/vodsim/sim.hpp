#pragma once

#include <functional>

#include "vodsim/client.hpp"
#include "vodsim/metrics.hpp"
#include "vodsim/scenario.hpp"

namespace vodsim {

// Observation hooks; they must not mutate anything the run depends on.
struct RunHooks {
  // Fired on every periodic client report, after playout has been synced.
  std::function<void(NodeId node, double now_s, const PlayoutState& client,
                     double reported_rbt_s)>
      on_report;
};

// Runs the scenario to completion (all nodes finish playback) or to the
// duration cap, whichever comes first, and returns the full report.
// Deterministic: identical (scenario, seed) gives an identical report.
Report run(const Scenario& scenario, const RunHooks* hooks = nullptr);

}  // namespace vodsim
