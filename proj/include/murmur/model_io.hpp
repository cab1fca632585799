#pragma once

// Model files: a CSV dump of the numeric parameters plus a JSON sidecar with
// metadata. Metrics reports are JSON.

#include <cstdint>
#include <ostream>
#include <string>

#include <json.hpp>

#include "murmur/format.hpp"
#include "murmur/logreg.hpp"
#include "murmur/pca.hpp"

namespace murmur {

namespace detail {

inline void write_feature_header(std::ostream& out, std::span<const std::uint32_t> primes,
                                 std::size_t dimension) {
  out << "row";
  for (std::size_t i = 0; i < dimension; ++i) {
    if (primes.size() == dimension)
      out << ",p_" << primes[i];
    else
      out << ",f_" << i;
  }
}

inline void write_values(std::ostream& out, std::span<const double> values) {
  for (double v : values) out << ',' << format_double(v);
}

}  // namespace detail

/// Rows: `scale` (when scaled), `mean`, then `component_1` .. `component_k`.
inline void write_pca_csv(std::ostream& out, const PcaModel& model) {
  detail::write_feature_header(out, model.primes, model.dimension());
  if (!model.feature_scale.empty()) {
    out << '\n' << "scale";
    detail::write_values(out, model.feature_scale);
  }
  out << '\n' << "mean";
  detail::write_values(out, model.mean);
  out << '\n';
  for (std::size_t j = 0; j < model.k(); ++j) {
    out << "component_" << (j + 1);
    detail::write_values(out, model.components[j]);
    out << '\n';
  }
}

inline nlohmann::ordered_json pca_metadata(const PcaModel& model, const PcaOptions& opt) {
  nlohmann::ordered_json j;
  j["model"] = "pca";
  j["dimension"] = model.dimension();
  j["k"] = model.k();
  j["feature_scaling"] = model.feature_scale.empty() ? "none" : "1/sqrt(p)";
  j["primes"] = model.primes;
  j["explained_variance"] = model.explained_variance;
  j["iterations"] = model.iterations;
  j["tolerance"] = opt.tolerance;
  j["max_iterations"] = opt.max_iterations;
  j["seed"] = opt.seed;
  return j;
}

/// Rows `class_<rank>`: weights on scaled features followed by the bias.
inline void write_logistic_csv(std::ostream& out, const LogisticModel& model) {
  detail::write_feature_header(out, model.primes, model.dimension());
  out << ",bias\n";
  for (std::size_t c = 0; c < model.class_count(); ++c) {
    out << "class_" << model.classes[c];
    detail::write_values(out, model.weights.row(c));
    out << ',' << format_double(model.bias[c]) << '\n';
  }
}

inline nlohmann::ordered_json logistic_metadata(const LogisticModel& model, const LogisticConfig& cfg) {
  nlohmann::ordered_json j;
  j["model"] = "logistic_regression";
  j["dimension"] = model.dimension();
  j["classes"] = model.classes;
  j["primes"] = model.primes;
  j["feature_scaling"] = model.feature_scale.empty() ? "none" : "1/sqrt(p)";
  j["learning_rate"] = cfg.learning_rate;
  j["epochs"] = cfg.epochs;
  j["seed"] = cfg.seed;
  j["train_fraction"] = cfg.train_fraction;
  return j;
}

inline nlohmann::ordered_json metrics_json(const TrainingReport& report) {
  nlohmann::ordered_json j;
  j["classes"] = report.model.classes;
  j["precision"] = report.precision;
  j["accuracy"] = report.accuracy;
  j["confidence"] = report.confidence;
  j["train_rows"] = report.train_rows;
  j["test_rows"] = report.test_rows;
  auto per = nlohmann::ordered_json::array();
  for (const auto& m : report.per_class)
    per.push_back({{"rank", m.label}, {"precision", m.precision}, {"recall", m.recall}, {"support", m.support}});
  j["per_class"] = per;
  auto conf = nlohmann::ordered_json::array();
  for (std::size_t t = 0; t < report.confusion.rows(); ++t) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t p = 0; p < report.confusion.cols(); ++p) row.push_back(report.confusion(t, p));
    conf.push_back(row);
  }
  j["confusion"] = conf;
  j["final_training_loss"] = report.loss_history.empty() ? 0.0 : report.loss_history.back();
  return j;
}

}  // namespace murmur
