#pragma once

// Portable random streams.
//
// All randomness comes from std::mt19937_64, whose output sequence is fixed
// by the C++ standard. Standard distributions are implementation-defined, so
// doubles and integers are derived here by hand:
//   uniform01   = (next() >> 11) * 2^-53
//   below(k)    = rejection sampling on the raw 64-bit draw, then modulo
// Sub-streams are derived with SplitMix64: derive_seed(seed, a, b, ...)
// folds each key through one SplitMix64 step, so (seed, keys) determine the
// stream independently of the order in which streams are created.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace unelisa {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632BE59BD9B4E019ULL));
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double prob) { return uniform01() < prob; }

  /// Uniform integer in [0, k).
  std::uint64_t below(std::uint64_t k) {
    if (k <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % k);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % k;
  }

  int sign(double prob_positive = 0.5) { return bernoulli(prob_positive) ? 1 : -1; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace unelisa
