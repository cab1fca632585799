#pragma once

// Multinomial logistic regression: rank ~ argmax softmax(x . w + b), trained
// by full-batch gradient descent on the mean categorical cross-entropy.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "murmur/error.hpp"
#include "murmur/matrix.hpp"
#include "murmur/parallel.hpp"
#include "murmur/rng.hpp"

namespace murmur {

/// Numerically stable softmax.
inline std::vector<double> softmax(std::span<const double> z) {
  std::vector<double> out(z.begin(), z.end());
  if (out.empty()) return out;
  const double m = *std::max_element(out.begin(), out.end());
  double total = 0;
  for (auto& v : out) total += (v = std::exp(v - m));
  for (auto& v : out) v /= total;
  return out;
}

struct LogisticModel {
  Matrix<double> weights;  // classes x n
  std::vector<double> bias;
  std::vector<int> classes;  // rank label of each output
  std::vector<double> feature_scale;  // multiplies raw features before w; empty = identity
  std::vector<std::uint32_t> primes;

  std::size_t dimension() const noexcept { return weights.cols(); }
  std::size_t class_count() const noexcept { return classes.size(); }

  /// Raw features scaled by feature_scale.
  std::vector<double> scaled(std::span<const double> raw) const {
    if (raw.size() != dimension()) throw Error(errc::dimension_mismatch, "feature length mismatch");
    std::vector<double> out(raw.begin(), raw.end());
    if (!feature_scale.empty())
      for (std::size_t i = 0; i < out.size(); ++i) out[i] *= feature_scale[i];
    return out;
  }

  /// x . w + b for an already scaled feature row.
  void logits_scaled(std::span<const double> xs, std::span<double> z) const {
    for (std::size_t c = 0; c < class_count(); ++c) {
      const auto w = weights.row(c);
      double s = bias[c];
      for (std::size_t i = 0; i < xs.size(); ++i) s += w[i] * xs[i];
      z[c] = s;
    }
  }

  std::vector<double> logits(std::span<const double> raw) const {
    std::vector<double> z(class_count());
    logits_scaled(scaled(raw), z);
    return z;
  }

  std::vector<double> probabilities(std::span<const double> raw) const { return softmax(logits(raw)); }

  /// Index into `classes` of the most probable class.
  std::size_t predict_index(std::span<const double> raw) const {
    const auto z = logits(raw);
    return static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
  }

  int predict(std::span<const double> raw) const { return classes[predict_index(raw)]; }
};

struct LogisticConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 1000;
  std::uint64_t seed = 1;
  double train_fraction = 0.8;
  bool scale_by_sqrt_p = true;  // divide a_p by sqrt(p) (needs primes)
  unsigned threads = 0;
};

struct LogisticGradient {
  Matrix<double> weights;
  std::vector<double> bias;
};

namespace detail {

struct LossAndGradient {
  double loss = 0;
  LogisticGradient grad;
};

/// Mean cross-entropy and its gradient over the given rows of xs, a matrix
/// of already scaled features. `targets` are class indices (positions in
/// model.classes).
inline LossAndGradient loss_and_gradient(const LogisticModel& model, const Matrix<double>& xs,
                                         std::span<const std::size_t> rows,
                                         std::span<const std::size_t> targets, unsigned threads,
                                         bool want_gradient = true) {
  const std::size_t k = model.class_count(), n = model.dimension();
  const auto zero = [&] {
    return LossAndGradient{0.0, {Matrix<double>(want_gradient ? k : 0, want_gradient ? n : 0),
                                 std::vector<double>(want_gradient ? k : 0, 0.0)}};
  };
  LossAndGradient total = deterministic_reduce(
      rows.size(), 256, threads, zero(),
      [&](std::size_t begin, std::size_t end) {
        LossAndGradient part = zero();
        std::vector<double> z(k);
        for (std::size_t i = begin; i < end; ++i) {
          const auto row = xs.row(rows[i]);
          model.logits_scaled(row, z);
          const double m = *std::max_element(z.begin(), z.end());
          double lse = 0;
          for (double v : z) lse += std::exp(v - m);
          lse = m + std::log(lse);
          part.loss += lse - z[targets[i]];
          if (!want_gradient) continue;
          for (std::size_t c = 0; c < k; ++c) {
            const double delta = std::exp(z[c] - lse) - (c == targets[i] ? 1.0 : 0.0);
            part.grad.bias[c] += delta;
            auto g = part.grad.weights.row(c);
            for (std::size_t j = 0; j < n; ++j) g[j] += delta * row[j];
          }
        }
        return part;
      },
      [&](LossAndGradient acc, LossAndGradient part) {
        acc.loss += part.loss;
        if (want_gradient) {
          for (std::size_t i = 0; i < acc.grad.bias.size(); ++i) acc.grad.bias[i] += part.grad.bias[i];
          auto a = acc.grad.weights.flat();
          auto b = part.grad.weights.flat();
          for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        }
        return acc;
      });
  const double inv = 1.0 / static_cast<double>(rows.size());
  total.loss *= inv;
  for (auto& v : total.grad.bias) v *= inv;
  for (auto& v : total.grad.weights.flat()) v *= inv;
  return total;
}

inline Matrix<double> scale_features(const LogisticModel& model, const Matrix<double>& x) {
  if (x.cols() != model.dimension()) throw Error(errc::dimension_mismatch, "feature length mismatch");
  Matrix<double> xs = x;
  if (!model.feature_scale.empty())
    for (std::size_t r = 0; r < xs.rows(); ++r) {
      auto row = xs.row(r);
      for (std::size_t j = 0; j < row.size(); ++j) row[j] *= model.feature_scale[j];
    }
  return xs;
}

inline std::vector<std::size_t> class_indices(const LogisticModel& model, std::span<const int> labels) {
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (int label : labels) {
    const auto it = std::find(model.classes.begin(), model.classes.end(), label);
    if (it == model.classes.end())
      throw Error(errc::precondition, "label " + std::to_string(label) + " is not a model class");
    out.push_back(static_cast<std::size_t>(it - model.classes.begin()));
  }
  return out;
}

}  // namespace detail

/// Mean cross-entropy of the model on every row of x.
inline double logreg_loss(const LogisticModel& model, const Matrix<double>& x,
                          std::span<const int> labels, unsigned threads = 1) {
  if (x.rows() == 0 || x.rows() != labels.size())
    throw Error(errc::dimension_mismatch, "batch rows and labels disagree");
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const auto targets = detail::class_indices(model, labels);
  return detail::loss_and_gradient(model, detail::scale_features(model, x), rows, targets, threads, false).loss;
}

/// Analytic gradient of the mean cross-entropy with respect to (w, b).
inline LogisticGradient logreg_gradient(const LogisticModel& model, const Matrix<double>& x,
                                        std::span<const int> labels, unsigned threads = 1) {
  if (x.rows() == 0 || x.rows() != labels.size())
    throw Error(errc::dimension_mismatch, "batch rows and labels disagree");
  if (x.cols() != model.dimension()) throw Error(errc::dimension_mismatch, "feature length mismatch");
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const auto targets = detail::class_indices(model, labels);
  return detail::loss_and_gradient(model, detail::scale_features(model, x), rows, targets, threads).grad;
}

struct ClassMetrics {
  int label = 0;
  double precision = 0;  // 0 when the class is never predicted
  double recall = 0;
  std::size_t support = 0;
};

struct TrainingReport {
  LogisticModel model;
  std::vector<ClassMetrics> per_class;
  Matrix<std::size_t> confusion;  // confusion(true index, predicted index)
  double precision = 0;   // macro average over classes
  double accuracy = 0;
  double confidence = 0;  // mean top-class probability on the held-out rows
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::vector<double> loss_history;  // training loss before each epoch, then final
};

/// Shuffles rows by cfg.seed, trains on the first train_fraction, and reports
/// held-out metrics on the rest.
inline TrainingReport logreg_train(const Matrix<double>& x, std::span<const int> labels,
                                   const LogisticConfig& cfg,
                                   std::span<const std::uint32_t> primes = {}) {
  if (x.rows() != labels.size()) throw Error(errc::dimension_mismatch, "rows and labels disagree");
  if (x.rows() < 10) throw Error(errc::precondition, "logistic regression needs at least 10 rows");
  std::vector<int> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.size() < 2)
    throw Error(errc::single_class, "need at least 2 distinct labels, got " + std::to_string(classes.size()));
  if (!(cfg.train_fraction > 0 && cfg.train_fraction < 1))
    throw Error(errc::precondition, "train fraction must lie in (0, 1)");
  if (!(cfg.learning_rate > 0)) throw Error(errc::precondition, "learning rate must be positive");

  TrainingReport report;
  LogisticModel& model = report.model;
  model.classes = classes;
  model.weights = Matrix<double>(classes.size(), x.cols(), 0.0);
  model.bias.assign(classes.size(), 0.0);
  if (cfg.scale_by_sqrt_p) {
    if (primes.size() != x.cols())
      throw Error(errc::dimension_mismatch, "1/sqrt(p) scaling needs one prime per column");
    for (auto p : primes) model.feature_scale.push_back(1.0 / std::sqrt(static_cast<double>(p)));
  }
  model.primes.assign(primes.begin(), primes.end());

  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(cfg.seed);
  shuffle(order, rng);
  const auto n_train = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(x.rows()))), 1,
      x.rows() - 1);
  const std::span<const std::size_t> train(order.data(), n_train);
  const std::span<const std::size_t> test(order.data() + n_train, x.rows() - n_train);
  const auto targets_all = detail::class_indices(model, labels);
  const Matrix<double> xs = detail::scale_features(model, x);
  std::vector<std::size_t> train_targets;
  for (auto r : train) train_targets.push_back(targets_all[r]);

  for (std::size_t epoch = 0; epoch <= cfg.epochs; ++epoch) {
    const bool last = epoch == cfg.epochs;
    auto lg = detail::loss_and_gradient(model, xs, train, train_targets, cfg.threads, !last);
    if (!std::isfinite(lg.loss)) throw Error(errc::diverged, "diverged; lower learning rate");
    report.loss_history.push_back(lg.loss);
    if (last) break;
    auto w = model.weights.flat();
    const auto g = lg.grad.weights.flat();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= cfg.learning_rate * g[i];
    for (std::size_t c = 0; c < model.bias.size(); ++c) model.bias[c] -= cfg.learning_rate * lg.grad.bias[c];
  }

  const std::size_t k = classes.size();
  report.confusion = Matrix<std::size_t>(k, k, 0);
  double confidence = 0;
  std::vector<double> z(k);
  for (auto r : test) {
    model.logits_scaled(xs.row(r), z);
    const auto probs = softmax(z);
    const auto pred = static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
    confidence += probs[pred];
    ++report.confusion(targets_all[r], pred);
  }
  report.train_rows = train.size();
  report.test_rows = test.size();
  report.confidence = confidence / static_cast<double>(test.size());
  std::size_t correct = 0;
  double precision_sum = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t predicted = 0, actual = 0;
    for (std::size_t t = 0; t < k; ++t) predicted += report.confusion(t, c);
    for (std::size_t p = 0; p < k; ++p) actual += report.confusion(c, p);
    correct += report.confusion(c, c);
    ClassMetrics m{classes[c], 0.0, 0.0, actual};
    if (predicted) m.precision = static_cast<double>(report.confusion(c, c)) / static_cast<double>(predicted);
    if (actual) m.recall = static_cast<double>(report.confusion(c, c)) / static_cast<double>(actual);
    precision_sum += m.precision;
    report.per_class.push_back(m);
  }
  report.precision = precision_sum / static_cast<double>(k);
  report.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
  return report;
}

}  // namespace murmur
