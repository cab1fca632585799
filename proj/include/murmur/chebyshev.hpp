#pragma once

#include <cstdint>
#include <vector>

#include "murmur/primes.hpp"

namespace murmur {

/// Remainders of odd primes mod 4. A remainder of 1 is a +1 discrepancy from
/// the mean remainder 2, a remainder of 3 is -1; aggregates are running sums.
struct BiasSeries {
  std::vector<std::uint32_t> primes;
  std::vector<int> discrepancies;
  std::vector<std::int64_t> aggregates;

  std::size_t size() const noexcept { return primes.size(); }
  std::uint32_t remainder(std::size_t k) const { return primes[k] % 4; }
};

/// Odd primes <= limit with their mod-4 discrepancies and running sums.
inline BiasSeries bias_series(std::uint64_t limit) {
  BiasSeries s;
  std::int64_t running = 0;
  for (std::uint32_t p : sieve_primes(limit)) {
    if (p == 2) continue;
    const int disc = p % 4 == 1 ? 1 : -1;
    running += disc;
    s.primes.push_back(p);
    s.discrepancies.push_back(disc);
    s.aggregates.push_back(running);
  }
  return s;
}

/// The first `count` odd primes <= limit at which the aggregate is strictly
/// positive. Shorter (possibly empty) when fewer exist.
inline std::vector<std::uint32_t> first_positive_crossings(std::uint64_t limit, std::size_t count) {
  std::vector<std::uint32_t> out;
  if (count == 0) return out;
  const BiasSeries s = bias_series(limit);
  for (std::size_t k = 0; k < s.size() && out.size() < count; ++k)
    if (s.aggregates[k] > 0) out.push_back(s.primes[k]);
  return out;
}

}  // namespace murmur
