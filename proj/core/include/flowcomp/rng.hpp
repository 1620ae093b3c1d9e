#pragma once

#include <cstdint>

namespace flowcomp {

/// SplitMix64. The exact sequence is part of the triplet-sampling contract
/// (see README "Triplet sampling"), so reports are reproducible across
/// implementations.
class SplitMix64 {
public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform index in [0, n): next() modulo n.
  uint64_t next_below(uint64_t n) { return next() % n; }

private:
  uint64_t state_;
};

}  // namespace flowcomp
