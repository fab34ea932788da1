#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace fibottention {

// Splitmix64 stream (Steele/Lea/Flood; Vigna's fixed-increment variant).
// All randomness in this library flows through this generator so that a
// given seed produces bit-identical results on every platform.
class Splitmix64 {
public:
  explicit Splitmix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound). Modulo reduction: the tiny bias is irrelevant
  // here, determinism is what matters.
  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

// Sub-stream seed for layer ell of a seeded run.
inline std::uint64_t layer_seed(std::uint64_t seed, std::uint64_t layer) {
  return seed ^ layer;
}

// Fisher-Yates permutation of {0, ..., n-1} driven by the given stream.
inline std::vector<int> random_permutation(int n, Splitmix64& rng) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  return perm;
}

}  // namespace fibottention
