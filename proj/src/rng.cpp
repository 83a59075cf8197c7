#include "vodsim/rng.hpp"

#include "vodsim/errors.hpp"

namespace vodsim {

namespace {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::string_view label)
    : state_(seed ^ fnv1a64(label)) {
  // One warm-up step so that seeds differing only in low bits already
  // diverge on the first draw.
  splitmix64(state_);
}

std::uint64_t RngStream::next_u64() { return splitmix64(state_); }

double RngStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_unit();
}

std::uint32_t RngStream::below(std::uint32_t bound) {
  if (bound == 0) throw ConfigError("RngStream::below: bound must be > 0");
  return static_cast<std::uint32_t>(next_u64() % bound);
}

}  // namespace vodsim
