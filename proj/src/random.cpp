#include "rrb/random.hpp"

#include <algorithm>

namespace rrb {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

RandomSource RandomSource::substream(std::uint64_t index) const {
  return RandomSource(splitmix64(seed_ ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

double RandomSource::uniform() {
  // 53 random mantissa bits.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RandomSource::normal() {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(engine_);
}

std::uint64_t RandomSource::below(std::uint64_t n) {
  std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
  return dist(engine_);
}

std::uint64_t RandomSource::binomial(std::uint64_t trials, double p) {
  p = std::clamp(p, 0.0, 1.0);
  std::binomial_distribution<std::uint64_t> dist(trials, p);
  return dist(engine_);
}

}  // namespace rrb
