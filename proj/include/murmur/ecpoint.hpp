#pragma once

// Point counting for Weierstrass curves over F_p and Frobenius traces
// a_p = p + 1 - #E(F_p).
//
// Bad-prime convention: #E(F_p) counts every projective point of the reduced
// equation, including the singular point. With this single formula a_p comes
// out as 0 / +1 / -1 at additive / split multiplicative / nonsplit
// multiplicative primes without classifying the reduction type.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

#include "murmur/curve.hpp"
#include "murmur/error.hpp"
#include "murmur/parallel.hpp"
#include "murmur/primes.hpp"

namespace murmur {

/// Exclusive ceiling on the field characteristic. Keeps every sum of two
/// residues inside 32 bits and every product inside 64 bits.
inline constexpr std::uint64_t kPrimeCeiling = std::uint64_t{1} << 31;

namespace detail {

inline std::uint32_t add_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  const std::uint32_t s = a + b;
  return s >= p ? s - p : s;
}

inline std::uint32_t sub_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return a >= b ? a - b : a + p - b;
}

inline std::uint32_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>(a * b % p);
}

inline std::uint32_t pow_mod(std::uint32_t base, std::uint64_t e, std::uint32_t p) {
  std::uint64_t r = 1 % p, b = base % p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

inline void check_prime_range(std::uint64_t p) {
  if (p < 2 || p >= kPrimeCeiling)
    throw Error(errc::precondition, "prime " + std::to_string(p) + " outside [2, 2^31)");
}

}  // namespace detail

/// Coefficients [a1, a2, a3, a4, a6] reduced to least nonnegative residues mod p.
struct ReducedCurve {
  std::uint32_t p = 0;
  std::array<std::uint32_t, 5> a{};
};

inline ReducedCurve reduce(const CurveEquation& curve, std::uint32_t p) {
  detail::check_prime_range(p);
  ReducedCurve r{p, {}};
  for (std::size_t i = 0; i < 5; ++i) r.a[i] = curve.coefficient_mod(i, p);
  return r;
}

enum class Reduction { good, bad };

struct FrobeniusTrace {
  std::uint32_t prime = 0;
  std::int64_t value = 0;
  Reduction reduction = Reduction::good;
};

/// Hasse bound a^2 <= 4p at good primes; a in {-1, 0, 1} at bad primes.
/// Integer-only.
inline bool satisfies_trace_bound(const FrobeniusTrace& t) {
  if (t.reduction == Reduction::bad) return t.value >= -1 && t.value <= 1;
  return t.value * t.value <= 4 * static_cast<std::int64_t>(t.prime);
}

/// Per-prime lookup data for the character-sum count: the quadratic
/// character chi (chi(0) = 0) stored over [0, 2p) so that a sum of two
/// residues indexes it without reduction, and the table u -> 4u^3 mod p.
/// Immutable after construction; share freely across threads.
class ResidueTable {
 public:
  explicit ResidueTable(std::uint32_t p) : p_(p) {
    detail::check_prime_range(p);
    chi2_.assign(2 * static_cast<std::size_t>(p), -1);
    cubes4_.resize(p);
    chi2_[0] = chi2_[p] = 0;
    for (std::uint64_t x = 1; x <= p / 2; ++x) {
      const auto sq = static_cast<std::uint32_t>(x * x % p);
      chi2_[sq] = chi2_[sq + p] = 1;
    }
    for (std::uint64_t u = 0; u < p; ++u)
      cubes4_[u] = static_cast<std::uint32_t>(4 * (u * u % p * u % p) % p);
  }

  std::uint32_t prime() const noexcept { return p_; }

  /// Quadratic character of r, for 0 <= r < 2p.
  int chi(std::uint32_t r) const { return chi2_[r]; }

  /// sum over u in F_p of chi(4u^3 + c*u + d), with c, d < p.
  std::int64_t cubic_character_sum(std::uint32_t c, std::uint32_t d) const {
    const std::uint32_t p = p_;
    const std::int32_t* chi = chi2_.data();
    const std::uint32_t* cubes = cubes4_.data();
    std::int64_t sum = 0;
    std::uint32_t u = 0;
    std::uint32_t w = d;  // c*u + d mod p
#if defined(__AVX2__)
    // Eight lanes per step: lane k holds c*(u+k) + d mod p.
    alignas(32) std::uint32_t step[8] = {0};
    for (int k = 1; k < 8; ++k) step[k] = detail::add_mod(step[k - 1], c, p);
    const std::uint32_t stride = detail::mul_mod(8, c, p);
    const __m256i vp = _mm256_set1_epi32(static_cast<int>(p));
    const __m256i vstep = _mm256_load_si256(reinterpret_cast<const __m256i*>(step));
    __m256i acc = _mm256_setzero_si256();
    for (; u + 8 <= p; u += 8) {
      __m256i lane = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(w)), vstep);
      lane = _mm256_min_epu32(lane, _mm256_sub_epi32(lane, vp));
      const __m256i idx = _mm256_add_epi32(
          lane, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(cubes + u)));
      acc = _mm256_add_epi32(acc, _mm256_i32gather_epi32(chi, idx, 4));
      w = detail::add_mod(w, stride, p);
    }
    alignas(32) std::int32_t lanes[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    for (auto v : lanes) sum += v;
#endif
    for (; u < p; ++u, w = detail::add_mod(w, c, p)) sum += chi[cubes[u] + w];
    return sum;
  }

 private:
  std::uint32_t p_;
  std::vector<std::int32_t> chi2_;
  std::vector<std::uint32_t> cubes4_;
};

/// Residue tables for every prime <= limit, built once and shared read-only.
class PrimeTables {
 public:
  explicit PrimeTables(std::uint64_t limit, unsigned threads = 1) : primes_(sieve_primes(limit)) {
    if (!primes_.empty()) detail::check_prime_range(primes_.back());
    std::vector<std::optional<ResidueTable>> built(primes_.size());
    parallel_for(primes_.size(), threads, [&](std::size_t k) { built[k].emplace(primes_[k]); });
    tables_.reserve(built.size());
    for (auto& t : built) tables_.push_back(std::move(*t));
  }

  const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }
  const ResidueTable& table(std::size_t k) const { return tables_.at(k); }
  std::size_t size() const noexcept { return primes_.size(); }

 private:
  std::vector<std::uint32_t> primes_;
  std::vector<ResidueTable> tables_;
};

/// #E(F_p) by exhaustive search over F_p x F_p, plus the point at infinity.
inline std::uint64_t count_points_naive(const ReducedCurve& e) {
  const std::uint64_t p = e.p;
  const auto [a1, a2, a3, a4, a6] = e.a;
  std::uint64_t count = 1;
  for (std::uint64_t x = 0; x < p; ++x) {
    const std::uint64_t rhs = ((x * x % p * x % p) + a2 * (x * x % p) + a4 * x + a6) % p;
    const std::uint64_t t = (a1 * x + a3) % p;
    for (std::uint64_t y = 0; y < p; ++y)
      if (y * ((y + t) % p) % p == rhs) ++count;
  }
  return count;
}

inline std::uint64_t count_points_naive(const CurveEquation& curve, std::uint32_t p) {
  return count_points_naive(reduce(curve, p));
}

/// #E(F_p) via the character sum. For odd p, completing the square gives
/// (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6 =: g(x), so the affine
/// count is p + sum_x chi(g(x)). For p >= 5 the x^2 term is shifted away so
/// that the shared 4u^3 table applies. p = 2, 3 use the naive count.
inline std::uint64_t count_points_fast(const ReducedCurve& e, const ResidueTable& table) {
  if (table.prime() != e.p)
    throw Error(errc::precondition, "residue table built for p=" + std::to_string(table.prime()) +
                                        " used with p=" + std::to_string(e.p));
  const std::uint32_t p = e.p;
  if (p < 5) return count_points_naive(e);
  using namespace detail;
  const auto [a1, a2, a3, a4, a6] = e.a;
  const std::uint32_t b2 = add_mod(mul_mod(a1, a1, p), mul_mod(4, a2, p), p);
  const std::uint32_t b4 = add_mod(mul_mod(2, a4, p), mul_mod(a1, a3, p), p);
  const std::uint32_t b6 = add_mod(mul_mod(a3, a3, p), mul_mod(4, a6, p), p);
  const auto g = [&](std::uint32_t x) {
    std::uint32_t v = 4 % p;
    v = add_mod(mul_mod(v, x, p), b2, p);
    v = add_mod(mul_mod(v, x, p), mul_mod(2, b4, p), p);
    return add_mod(mul_mod(v, x, p), b6, p);
  };
  // g(u - s) = 4u^3 + c u + d with s = b2 / 12.
  const std::uint32_t s = mul_mod(b2, pow_mod(12, p - 2, p), p);
  const std::uint32_t d = g(sub_mod(0, s, p));
  const std::uint32_t c = sub_mod(sub_mod(g(sub_mod(1, s, p)), d, p), 4, p);
  const std::int64_t sum = table.cubic_character_sum(c, d);
  return static_cast<std::uint64_t>(static_cast<std::int64_t>(p) + 1 + sum);
}

inline std::uint64_t count_points_fast(const CurveEquation& curve, std::uint32_t p,
                                       const ResidueTable& table) {
  return count_points_fast(reduce(curve, p), table);
}

inline FrobeniusTrace frobenius_trace(const CurveEquation& curve, const ResidueTable& table) {
  const std::uint32_t p = table.prime();
  const auto count = count_points_fast(curve, p, table);
  return {p, static_cast<std::int64_t>(p) + 1 - static_cast<std::int64_t>(count),
          curve.discriminant_mod(p) == 0 ? Reduction::bad : Reduction::good};
}

inline FrobeniusTrace frobenius_trace(const CurveEquation& curve, std::uint32_t p) {
  if (!is_prime(p)) throw Error(errc::precondition, std::to_string(p) + " is not prime");
  return frobenius_trace(curve, ResidueTable(p));
}

/// X(E) = (a_{p_1}, ..., a_{p_n}) over the first n primes.
struct ApVector {
  std::string curve_id;
  std::vector<std::int32_t> values;

  std::size_t prime_count() const noexcept { return values.size(); }
};

/// Writes a_p for every prime of `tables` into out (out.size() == tables.size()).
inline void ap_values(const CurveEquation& curve, const PrimeTables& tables,
                      std::span<std::int32_t> out) {
  if (out.size() != tables.size())
    throw Error(errc::dimension_mismatch, "output span does not match prime count");
  for (std::size_t k = 0; k < tables.size(); ++k) {
    const std::uint32_t p = tables.primes()[k];
    const auto count = count_points_fast(reduce(curve, p), tables.table(k));
    out[k] = static_cast<std::int32_t>(static_cast<std::int64_t>(p) + 1 -
                                       static_cast<std::int64_t>(count));
  }
}

inline ApVector ap_vector(const CurveEquation& curve, const PrimeTables& tables,
                          std::string curve_id = {}) {
  ApVector v{std::move(curve_id), std::vector<std::int32_t>(tables.size())};
  ap_values(curve, tables, v.values);
  return v;
}

inline ApVector ap_vector(const CurveEquation& curve, std::uint64_t prime_limit,
                          std::string curve_id = {}) {
  return ap_vector(curve, PrimeTables(prime_limit), std::move(curve_id));
}

struct AggregatePoint {
  std::uint32_t prime = 0;
  std::int64_t aggregate = 0;

  friend bool operator==(const AggregatePoint&, const AggregatePoint&) = default;
};

/// Running sums of a_p over the primes <= prime_limit.
inline std::vector<AggregatePoint> aggregate_discrepancy(const CurveEquation& curve,
                                                         std::uint64_t prime_limit) {
  const PrimeTables tables(prime_limit);
  const ApVector ap = ap_vector(curve, tables);
  std::vector<AggregatePoint> out;
  out.reserve(ap.values.size());
  std::int64_t running = 0;
  for (std::size_t k = 0; k < ap.values.size(); ++k) {
    running += ap.values[k];
    out.push_back({tables.primes()[k], running});
  }
  return out;
}

}  // namespace murmur
