#pragma once

#include <cstdint>
#include <string_view>

namespace vodsim {

// Deterministic random stream derived from (seed, label). Same pair gives
// the same sequence on every platform; distinct labels give independent
// streams. splitmix64 underneath.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view label);

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double next_unit();

  // Uniform in [lo, hi).
  double uniform(double lo, double hi);

  // Uniform in [0, bound); bound must be > 0.
  std::uint32_t below(std::uint32_t bound);

 private:
  std::uint64_t state_;
};

}  // namespace vodsim
