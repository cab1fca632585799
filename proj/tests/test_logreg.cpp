#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "murmur/logreg.hpp"
#include "murmur/model_io.hpp"
#include "oracles.hpp"

using namespace murmur;

namespace {

struct Instance {
  LogisticModel model;
  Matrix<double> x;
  std::vector<int> labels;
};

Instance random_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 1);
  std::uniform_int_distribution<std::size_t> dim(2, 6), cls(2, 4), rows(1, 12);
  const std::size_t n = dim(rng), k = cls(rng), m = rows(rng);
  Instance in;
  for (std::size_t c = 0; c < k; ++c) in.model.classes.push_back(static_cast<int>(c));
  in.model.weights = Matrix<double>(k, n);
  for (auto& w : in.model.weights.flat()) w = g(rng);
  for (std::size_t c = 0; c < k; ++c) in.model.bias.push_back(g(rng));
  in.x = Matrix<double>(m, n);
  for (auto& v : in.x.flat()) v = 2 * g(rng);
  std::uniform_int_distribution<int> label(0, static_cast<int>(k) - 1);
  for (std::size_t r = 0; r < m; ++r) in.labels.push_back(label(rng));
  return in;
}

double oracle_loss(const LogisticModel& model, const Matrix<double>& x, const std::vector<int>& labels) {
  oracle::Dense w(model.class_count()), rows(x.rows());
  for (std::size_t c = 0; c < model.class_count(); ++c) w[c].assign(model.weights.row(c).begin(), model.weights.row(c).end());
  for (std::size_t r = 0; r < x.rows(); ++r) rows[r].assign(x.row(r).begin(), x.row(r).end());
  std::vector<std::size_t> t(labels.begin(), labels.end());
  return oracle::cross_entropy(w, model.bias, rows, t);
}

double relative_error(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

// Two Gaussian blobs far apart.
std::pair<Matrix<double>, std::vector<int>> separable(std::size_t rows) {
  Matrix<double> x(rows, 2);
  std::vector<int> labels;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0, 0.3);
  for (std::size_t r = 0; r < rows; ++r) {
    const int c = static_cast<int>(r % 2);
    x(r, 0) = (c ? 3.0 : -3.0) + g(rng);
    x(r, 1) = (c ? -1.0 : 1.0) + g(rng);
    labels.push_back(c * 5);  // labels 0 and 5
  }
  return {x, labels};
}

}  // namespace

TEST(Logreg, GradientMatchesCentralDifferences) {
  const double h = 1e-5;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto in = random_instance(seed);
    const auto grad = logreg_gradient(in.model, in.x, in.labels);
    EXPECT_NEAR(logreg_loss(in.model, in.x, in.labels), oracle_loss(in.model, in.x, in.labels), 1e-12);
    auto w = in.model.weights.flat();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double saved = w[i];
      w[i] = saved + h;
      const double up = oracle_loss(in.model, in.x, in.labels);
      w[i] = saved - h;
      const double down = oracle_loss(in.model, in.x, in.labels);
      w[i] = saved;
      EXPECT_LE(relative_error(grad.weights.flat()[i], (up - down) / (2 * h)), 1e-4) << "seed " << seed;
    }
    for (std::size_t c = 0; c < in.model.bias.size(); ++c) {
      const double saved = in.model.bias[c];
      in.model.bias[c] = saved + h;
      const double up = oracle_loss(in.model, in.x, in.labels);
      in.model.bias[c] = saved - h;
      const double down = oracle_loss(in.model, in.x, in.labels);
      in.model.bias[c] = saved;
      EXPECT_LE(relative_error(grad.bias[c], (up - down) / (2 * h)), 1e-4) << "seed " << seed;
    }
  }
}

TEST(Logreg, ClosedFormCases) {
  LogisticModel model;
  model.classes = {0, 1};
  model.weights = Matrix<double>(2, 2, 0.0);
  model.bias = {0, 0};
  // Mirrored features, balanced labels: bias gradient vanishes.
  Matrix<double> x(2, 2);
  x(0, 0) = 1, x(0, 1) = 2, x(1, 0) = -1, x(1, 1) = -2;
  const std::vector<int> labels = {0, 1};
  const auto g = logreg_gradient(model, x, labels);
  EXPECT_NEAR(g.bias[0], 0.0, 1e-15);
  EXPECT_NEAR(g.bias[1], 0.0, 1e-15);
  // Single example: (softmax - onehot) outer x.
  Matrix<double> one(1, 2);
  one(0, 0) = 3, one(0, 1) = -1;
  const std::vector<int> l1 = {1};
  const auto g1 = logreg_gradient(model, one, l1);
  EXPECT_NEAR(g1.weights(0, 0), 0.5 * 3, 1e-15);
  EXPECT_NEAR(g1.weights(1, 0), -0.5 * 3, 1e-15);
  EXPECT_NEAR(g1.weights(1, 1), -0.5 * -1, 1e-15);
  EXPECT_NEAR(g1.bias[1], -0.5, 1e-15);
}

TEST(Logreg, SoftmaxProperties) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0, 5);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> z(4), shifted(4);
    for (auto& v : z) v = g(rng);
    const double c = g(rng) * 100;
    for (std::size_t i = 0; i < 4; ++i) shifted[i] = z[i] + c;
    const auto a = softmax(z), b = softmax(shifted);
    double sum = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_NEAR(a[i], b[i], 1e-12);
      sum += a[i];
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_EQ(std::max_element(a.begin(), a.end()) - a.begin(), std::max_element(z.begin(), z.end()) - z.begin());
  }
  const auto big = softmax(std::vector<double>{1000, 0});
  EXPECT_NEAR(big[0], 1.0, 1e-15);
}

TEST(Logreg, SeparableToyData) {
  const auto [x, labels] = separable(20);
  LogisticConfig cfg;
  cfg.scale_by_sqrt_p = false;
  cfg.epochs = 300;
  const auto report = logreg_train(x, labels, cfg);
  EXPECT_EQ(report.precision, 1.0);
  EXPECT_EQ(report.accuracy, 1.0);
  EXPECT_EQ(report.train_rows, 16u);
  EXPECT_EQ(report.test_rows, 4u);
  EXPECT_EQ(report.model.classes, (std::vector<int>{0, 5}));
  for (std::size_t e = 1; e < report.loss_history.size(); ++e)
    EXPECT_LE(report.loss_history[e], report.loss_history[e - 1] + 1e-15);
  EXPECT_GT(report.confidence, 0.5);
  EXPECT_LE(report.confidence, 1.0);
  std::vector<double> probe = {3.0, -1.0};
  EXPECT_EQ(report.model.predict(probe), 5);
}

TEST(Logreg, DeterministicAcrossThreads) {
  const auto [x, labels] = separable(600);
  LogisticConfig cfg;
  cfg.scale_by_sqrt_p = false;
  cfg.epochs = 50;
  cfg.threads = 1;
  const auto a = logreg_train(x, labels, cfg);
  cfg.threads = 4;
  const auto b = logreg_train(x, labels, cfg);
  EXPECT_EQ(a.model.weights, b.model.weights);
  EXPECT_EQ(a.model.bias, b.model.bias);
  EXPECT_EQ(a.loss_history, b.loss_history);
  EXPECT_EQ(metrics_json(a).dump(), metrics_json(b).dump());
}

TEST(Logreg, Errors) {
  const auto [x, labels] = separable(20);
  LogisticConfig cfg;
  cfg.scale_by_sqrt_p = false;
  const std::vector<int> single(20, 1);
  try {
    logreg_train(x, single, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::single_class);
  }
  cfg.learning_rate = 1e308;
  try {
    logreg_train(x, labels, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::diverged);
    EXPECT_STREQ(e.what(), "diverged; lower learning rate");
  }
  cfg.learning_rate = 0.1;
  cfg.scale_by_sqrt_p = true;  // needs a prime per column
  EXPECT_THROW(logreg_train(x, labels, cfg), Error);
  const std::vector<std::uint32_t> primes = {2, 3};
  EXPECT_NO_THROW(logreg_train(x, labels, cfg, primes));
  Matrix<double> few(5, 2);
  EXPECT_THROW(logreg_train(few, std::vector<int>{0, 1, 0, 1, 0}, cfg, primes), Error);
}
