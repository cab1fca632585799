#pragma once

#include <cmath>
#include <span>

#include "murmur/error.hpp"

namespace murmur {

/// Pearson correlation of two equally long samples. Throws
/// Error(zero_variance) if either sample is constant.
inline double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw Error(errc::dimension_mismatch, "correlation needs two nonempty samples of equal length");
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0 || sbb == 0) throw Error(errc::zero_variance, "zero variance");
  const double r = sab / std::sqrt(saa * sbb);
  return std::fmax(-1.0, std::fmin(1.0, r));
}

}  // namespace murmur
