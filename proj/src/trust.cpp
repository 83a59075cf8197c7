#include "vodsim/trust.hpp"

#include <string>

#include "vodsim/errors.hpp"

namespace vodsim {

TrustState::TrustState(double threshold, double default_trust, bool sticky_blacklist)
    : threshold_(threshold),
      default_trust_(default_trust),
      sticky_blacklist_(sticky_blacklist) {}

void TrustState::record_evaluation(const TrustEvaluation& eval) {
  if (eval.evaluator == eval.subject) {
    throw ConfigError("trust: self-evaluation by node " + std::to_string(eval.evaluator));
  }
  if (!(eval.value >= 0.0 && eval.value <= 1.0)) {
    throw ConfigError("trust: value must be in [0,1]");
  }
  evaluations_.push_back(eval);

  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& e : evaluations_) {
    if (e.subject == eval.subject) {
      sum += e.value;
      ++n;
    }
  }
  const double mean = sum / static_cast<double>(n);
  aggregated_[eval.subject] = mean;

  if (mean < threshold_) {
    blacklist_.insert(eval.subject);
  } else if (!sticky_blacklist_) {
    blacklist_.erase(eval.subject);
  }
}

double TrustState::trust_of(NodeId subject) const {
  auto it = aggregated_.find(subject);
  return it == aggregated_.end() ? default_trust_ : it->second;
}

bool TrustState::is_schedulable(NodeId subject) const {
  return blacklist_.count(subject) == 0 && trust_of(subject) >= threshold_;
}

}  // namespace vodsim
