#pragma once

#include <cstdint>
#include <random>

namespace rrb {

/// Seeded deterministic stream. Substreams are derived from (seed, index)
/// by SplitMix64 mixing, so a worker that owns substream k produces the same
/// values no matter which thread runs it.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  RandomSource substream(std::uint64_t index) const;
  std::uint64_t seed() const { return seed_; }

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  std::uint64_t binomial(std::uint64_t trials, double p);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace rrb
