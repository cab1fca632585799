#pragma once

// Seeded randomness with results fixed across standard libraries:
// std::mt19937_64 is fully specified, the distributions in <random> are not.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace murmur {

using Rng = std::mt19937_64;

/// Uniform integer in [0, n), n > 0, by rejection sampling.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Fisher-Yates shuffle.
template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

}  // namespace murmur
