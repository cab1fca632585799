#pragma once

// Principal component analysis of a_p point clouds. Columns are centered and
// optionally multiplied by a fixed per-column scale (1/sqrt(p) tempers the
// growth of |a_p| with p, without which the largest primes dominate every
// component). Components come from power iteration on the covariance;
// each iterate is re-orthogonalized against the components already found,
// which deflates them out exactly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "murmur/error.hpp"
#include "murmur/matrix.hpp"
#include "murmur/parallel.hpp"
#include "murmur/rng.hpp"

namespace murmur {

struct PcaOptions {
  double tolerance = 1e-10;  // relative change of the eigenvalue estimate
  std::size_t max_iterations = 10000;
  std::uint64_t seed = 12;
  unsigned threads = 0;
  std::vector<double> feature_scale;  // per-column multiplier; empty = identity
};

/// 1/sqrt(p) for each prime.
inline std::vector<double> sqrt_prime_scale(std::span<const std::uint32_t> primes) {
  std::vector<double> out;
  out.reserve(primes.size());
  for (auto p : primes) out.push_back(1.0 / std::sqrt(static_cast<double>(p)));
  return out;
}

struct PcaModel {
  std::vector<double> feature_scale;  // applied before centering; empty = identity
  std::vector<double> mean;           // of the scaled columns
  std::vector<std::vector<double>> components;  // k unit vectors of length dimension()
  std::vector<double> explained_variance;       // non-increasing
  std::vector<std::uint32_t> primes;            // feature labels, empty if unknown
  std::vector<std::size_t> iterations;          // power iterations used per component

  std::size_t dimension() const noexcept { return mean.size(); }
  std::size_t k() const noexcept { return components.size(); }
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline void orthogonalize(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
  // Two passes of modified Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) {
      const double c = dot(v, b);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
}

inline std::vector<double> column_means(const Matrix<double>& x) {
  std::vector<double> mean(x.cols(), 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto row = x.row(r);
    for (std::size_t c = 0; c < x.cols(); ++c) mean[c] += row[c];
  }
  for (auto& m : mean) m /= static_cast<double>(x.rows());
  return mean;
}

/// Covariance (divisor rows) of the centered data. Upper triangle
/// is accumulated in fixed row chunks, combined in chunk order.
inline Matrix<double> sample_covariance(const Matrix<double>& x, std::span<const double> mean,
                                        unsigned threads) {
  const std::size_t n = x.cols();
  using Acc = std::vector<double>;
  Acc upper = deterministic_reduce(
      x.rows(), 128, threads, Acc(n * n, 0.0),
      [&](std::size_t begin, std::size_t end) {
        Acc local(n * n, 0.0);
        std::vector<double> centered(n);
        for (std::size_t r = begin; r < end; ++r) {
          const auto row = x.row(r);
          for (std::size_t c = 0; c < n; ++c) centered[c] = row[c] - mean[c];
          for (std::size_t i = 0; i < n; ++i) {
            const double ci = centered[i];
            double* out = local.data() + i * n;
            for (std::size_t j = i; j < n; ++j) out[j] += ci * centered[j];
          }
        }
        return local;
      },
      [](Acc acc, Acc part) {
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += part[i];
        return acc;
      });
  Matrix<double> cov(n, n);
  const double denom = static_cast<double>(x.rows());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) cov(i, j) = cov(j, i) = upper[i * n + j] / denom;
  return cov;
}

inline void multiply(const Matrix<double>& a, std::span<const double> v, std::span<double> out) {
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), v);
}

inline Matrix<double> apply_scale(const Matrix<double>& x, std::span<const double> scale) {
  Matrix<double> out = x;
  if (scale.empty()) return out;
  if (scale.size() != x.cols())
    throw Error(errc::dimension_mismatch, "feature scale has " + std::to_string(scale.size()) +
                                              " entries for " + std::to_string(x.cols()) + " columns");
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] *= scale[c];
  }
  return out;
}

inline void fix_sign(std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  if (v[best] < 0)
    for (auto& x : v) x = -x;
}

}  // namespace detail

/// Top-k principal components of the rows of x (rows = samples).
/// Throws Error(zero_variance) for k == 0 or when every row is identical.
inline PcaModel pca_fit(const Matrix<double>& raw, std::size_t k, const PcaOptions& opt = {}) {
  if (k == 0) throw Error(errc::zero_variance, "zero variance: no components requested");
  if (raw.rows() < 2) throw Error(errc::precondition, "PCA needs at least 2 rows");
  if (k > std::min(raw.rows(), raw.cols()))
    throw Error(errc::precondition, "k exceeds min(rows, columns)");
  const Matrix<double> x = detail::apply_scale(raw, opt.feature_scale);
  const std::size_t n = x.cols();
  PcaModel model;
  model.feature_scale = opt.feature_scale;
  model.mean = detail::column_means(x);
  const Matrix<double> cov = detail::sample_covariance(x, model.mean, opt.threads);
  double trace = 0;
  for (std::size_t i = 0; i < n; ++i) trace += cov(i, i);
  if (!(trace > 0)) throw Error(errc::zero_variance, "zero variance");

  Rng rng(opt.seed);
  std::vector<double> v(n), w(n);
  for (std::size_t comp = 0; comp < k; ++comp) {
    for (auto& e : v) e = 2.0 * uniform_unit(rng) - 1.0;
    detail::orthogonalize(v, model.components);
    double len = detail::norm(v);
    for (auto& e : v) e /= len;
    double lambda = 0;
    std::size_t it = 0;
    for (; it < opt.max_iterations; ++it) {
      detail::multiply(cov, v, w);
      detail::orthogonalize(w, model.components);
      const double next = detail::dot(v, w);  // Rayleigh quotient of v
      len = detail::norm(w);
      // Remaining variance exhausted: any unit vector in the complement will do.
      if (len <= 1e-300 || len <= 1e-14 * trace) {
        lambda = 0;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / len;
      const bool converged = it > 0 && std::abs(next - lambda) <= opt.tolerance * std::abs(next);
      lambda = next;
      if (converged) break;
    }
    detail::orthogonalize(v, model.components);
    len = detail::norm(v);
    for (auto& e : v) e /= len;
    detail::fix_sign(v);
    detail::multiply(cov, v, w);
    model.explained_variance.push_back(std::max(0.0, detail::dot(v, w)));
    model.components.push_back(v);
    model.iterations.push_back(it);
  }
  // Power iteration finds the components in order; a near-tie can still swap
  // two neighbours by a rounding error.
  for (std::size_t i = 1; i < k; ++i)
    if (model.explained_variance[i] > model.explained_variance[i - 1])
      model.explained_variance[i] = model.explained_variance[i - 1];
  return model;
}

/// Rows projected onto the components: (scale * row - mean) . component.
inline Matrix<double> pca_project(const PcaModel& model, const Matrix<double>& x) {
  if (x.cols() != model.dimension())
    throw Error(errc::dimension_mismatch, "matrix has " + std::to_string(x.cols()) +
                                              " columns, model expects " +
                                              std::to_string(model.dimension()));
  Matrix<double> out(x.rows(), model.k());
  std::vector<double> centered(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto row = x.row(r);
    for (std::size_t c = 0; c < x.cols(); ++c)
      centered[c] = row[c] * (model.feature_scale.empty() ? 1.0 : model.feature_scale[c]) - model.mean[c];
    for (std::size_t j = 0; j < model.k(); ++j) out(r, j) = detail::dot(centered, model.components[j]);
  }
  return out;
}

struct ProfileEntry {
  std::uint32_t prime = 0;
  double weight = 0;
};

/// The first principal direction paired with its primes, in prime order.
inline std::vector<ProfileEntry> first_component_profile(const PcaModel& model) {
  if (model.k() == 0) throw Error(errc::precondition, "model has no components");
  if (model.primes.size() != model.dimension())
    throw Error(errc::dimension_mismatch, "model carries no prime labels for its features");
  std::vector<ProfileEntry> out;
  out.reserve(model.dimension());
  for (std::size_t i = 0; i < model.dimension(); ++i)
    out.push_back({model.primes[i], model.components[0][i]});
  return out;
}

}  // namespace murmur
