#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "murmur/error.hpp"

namespace murmur {

using BigInt = boost::multiprecision::cpp_int;

/// Long Weierstrass equation y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
/// over Q with integer coefficients. Construction rejects singular equations
/// (zero discriminant). Coefficient order everywhere is [a1, a2, a3, a4, a6].
class CurveEquation {
 public:
  using Coefficients = std::array<BigInt, 5>;

  explicit CurveEquation(Coefficients a) : a_(std::move(a)) {
    disc_ = compute_discriminant();
    if (disc_ == 0) throw Error(errc::singular_curve, "discriminant is zero");
    for (std::size_t i = 0; i < 5; ++i) {
      fits_[i] = a_[i] >= std::numeric_limits<std::int64_t>::min() &&
                 a_[i] <= std::numeric_limits<std::int64_t>::max();
      small_[i] = fits_[i] ? static_cast<std::int64_t>(a_[i]) : 0;
    }
  }

  CurveEquation(const BigInt& a1, const BigInt& a2, const BigInt& a3, const BigInt& a4,
                const BigInt& a6)
      : CurveEquation(Coefficients{a1, a2, a3, a4, a6}) {}

  /// Parses "a1,a2,a3,a4,a6" (decimal, optional sign, surrounding blanks allowed).
  static CurveEquation parse(std::string_view text) {
    Coefficients a;
    std::size_t idx = 0;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = text.find(',', pos);
      const std::string_view field =
          text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
      if (idx >= 5) throw Error(errc::usage, "expected exactly 5 coefficients");
      a[idx++] = parse_integer(field);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (idx != 5) throw Error(errc::usage, "expected exactly 5 coefficients");
    return CurveEquation(std::move(a));
  }

  /// Strict decimal integer parser; throws Error(usage) on anything else.
  static BigInt parse_integer(std::string_view field) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
      field.remove_suffix(1);
    std::string_view digits = field;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
    if (digits.empty())
      throw Error(errc::usage, "not an integer: '" + std::string(field) + "'");
    for (char c : digits)
      if (c < '0' || c > '9')
        throw Error(errc::usage, "not an integer: '" + std::string(field) + "'");
    if (field.front() == '+') field.remove_prefix(1);
    return BigInt(std::string(field));
  }

  const Coefficients& coefficients() const noexcept { return a_; }
  const BigInt& a1() const noexcept { return a_[0]; }
  const BigInt& a2() const noexcept { return a_[1]; }
  const BigInt& a3() const noexcept { return a_[2]; }
  const BigInt& a4() const noexcept { return a_[3]; }
  const BigInt& a6() const noexcept { return a_[4]; }

  BigInt b2() const { return a1() * a1() + 4 * a2(); }
  BigInt b4() const { return 2 * a4() + a1() * a3(); }
  BigInt b6() const { return a3() * a3() + 4 * a6(); }
  BigInt b8() const {
    return a1() * a1() * a6() + 4 * a2() * a6() - a1() * a3() * a4() + a2() * a3() * a3() -
           a4() * a4();
  }

  const BigInt& discriminant() const noexcept { return disc_; }

  /// Least nonnegative residue of coefficient i modulo m.
  std::uint32_t coefficient_mod(std::size_t i, std::uint32_t m) const {
    if (fits_[i]) {
      const std::int64_t r = small_[i] % static_cast<std::int64_t>(m);
      return static_cast<std::uint32_t>(r < 0 ? r + m : r);
    }
    return residue(a_[i], m);
  }

  std::uint32_t discriminant_mod(std::uint32_t m) const { return residue(disc_, m); }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < 5; ++i) {
      if (i) s += ',';
      s += a_[i].str();
    }
    return s;
  }

  friend bool operator==(const CurveEquation& x, const CurveEquation& y) { return x.a_ == y.a_; }

 private:
  static std::uint32_t residue(const BigInt& v, std::uint32_t m) {
    BigInt r = v % m;
    if (r < 0) r += m;
    return static_cast<std::uint32_t>(r);
  }

  BigInt compute_discriminant() const {
    const BigInt B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
  }

  Coefficients a_;
  BigInt disc_;
  std::array<std::int64_t, 5> small_{};
  std::array<bool, 5> fits_{};
};

}  // namespace murmur
