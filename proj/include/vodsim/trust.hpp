#pragma once

#include <map>
#include <set>
#include <vector>

#include "vodsim/core.hpp"

namespace vodsim {

// One peer-submitted evaluation of another node, value in [0,1].
struct TrustEvaluation {
  NodeId evaluator = 0;
  NodeId subject = 0;
  double value = 1.0;
  double at_s = 0.0;

  bool operator==(const TrustEvaluation&) const = default;
};

// Server-side trust map. Aggregated trust per node is the arithmetic mean
// of all evaluations of it; nodes with no evaluations sit at default_trust.
// The blacklist is derived state: exactly the nodes whose aggregated trust
// is strictly below the threshold. With sticky_blacklist, membership is
// never revoked once earned.
class TrustState {
 public:
  TrustState() = default;
  TrustState(double threshold, double default_trust, bool sticky_blacklist);

  // Appends the evaluation and re-derives the subject's aggregate and
  // blacklist membership. Self-evaluation or value outside [0,1] ->
  // ConfigError.
  void record_evaluation(const TrustEvaluation& eval);

  double trust_of(NodeId subject) const;

  // The scheduler's single trust gate: not blacklisted and at/above
  // threshold.
  bool is_schedulable(NodeId subject) const;

  const std::set<NodeId>& blacklist() const { return blacklist_; }
  const std::vector<TrustEvaluation>& evaluations() const { return evaluations_; }
  double threshold() const { return threshold_; }
  double default_trust() const { return default_trust_; }

 private:
  std::vector<TrustEvaluation> evaluations_;
  std::map<NodeId, double> aggregated_;
  std::set<NodeId> blacklist_;
  double threshold_ = 0.5;
  double default_trust_ = 1.0;
  bool sticky_blacklist_ = false;
};

}  // namespace vodsim
