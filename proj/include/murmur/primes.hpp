#pragma once

#include <cstdint>
#include <vector>

namespace murmur {

/// All primes <= limit in ascending order (sieve of Eratosthenes).
/// Returns an empty list for limit < 2.
inline std::vector<std::uint32_t> sieve_primes(std::uint64_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  // composite[i] marks 2i+1 for odd candidates.
  const std::uint64_t half = (limit - 1) / 2;
  std::vector<bool> composite(half + 1, false);
  primes.push_back(2);
  for (std::uint64_t i = 1; i <= half; ++i) {
    if (composite[i]) continue;
    const std::uint64_t p = 2 * i + 1;
    primes.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t m = p * p; m <= limit; m += 2 * p) composite[m / 2] = true;
  }
  return primes;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

}  // namespace murmur
