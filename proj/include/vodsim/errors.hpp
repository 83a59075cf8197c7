#pragma once

#include <stdexcept>

namespace vodsim {

// Bad input: unreadable/invalid scenario files, out-of-range values,
// malformed operation arguments. Maps to CLI exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Contract breach inside the engine (an invariant a correct run can
// never violate). Maps to CLI exit code 2.
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vodsim
