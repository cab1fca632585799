// murmur: command-line front end.
//
//   murmur ap        --curve a1,a2,a3,a4,a6 --pmax N
//   murmur chebyshev --limit N [--crossings K]
//   murmur dataset   --interval lo:hi [--parity 0|1|all] --pmax N
//   murmur average   --interval lo:hi [--pmax N] [--normalize]
//   murmur pca       --interval lo:hi --pmax N --k K
//   murmur train     --classes 0,1 --per-class N
//   murmur rerun     manifest.json [--threads N]
//
// Every run writes a JSON manifest with the fully resolved configuration and
// the canonical argument list; `rerun` replays it.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "murmur/murmur.hpp"
#include "murmur/svg.hpp"

#ifndef MURMUR_DEFAULT_CORPUS
#define MURMUR_DEFAULT_CORPUS "data/ecq_conductor_le_1000.csv"
#endif

namespace {

using murmur::Error;
namespace errc = murmur::errc;
using json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string subcommand;
  // ap
  std::string curve;
  // chebyshev
  std::uint64_t limit = 100;
  int modulus = 4;
  std::size_t crossings = 0;
  // corpus-based commands
  std::string corpus;
  std::string interval;
  std::string parity = "all";
  std::string classes;
  std::size_t per_class = 20000;
  std::uint64_t pmax = 0;  // 0 = subcommand default
  bool normalize = false;
  int decimals = 3;
  std::size_t k = 2;
  double learning_rate = 0.1;
  std::size_t epochs = 1000;
  double train_fraction = 0.8;
  bool no_sqrt_scaling = false;
  std::string model;
  std::string profile_plot;
  // common
  std::string out;
  std::string plot;
  std::string manifest;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  // rerun
  std::string rerun_manifest;
};

std::string default_corpus() {
  if (const char* env = std::getenv("MURMUR_CORPUS"); env && *env) return env;
  return MURMUR_DEFAULT_CORPUS;
}

void write_file(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(errc::io, "cannot write " + path);
  f << content;
  if (!f) throw Error(errc::io, "failed writing " + path);
}

/// "lo:hi", closed on both ends, mapped to [lo, hi + 1).
murmur::ConductorInterval parse_interval(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(errc::usage, "interval must look like lo:hi, got '" + text + "'");
  try {
    std::size_t used = 0;
    const auto lo = std::stoull(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("lo");
    const std::string hi_text = text.substr(colon + 1);
    const auto hi = std::stoull(hi_text, &used);
    if (used != hi_text.size()) throw std::invalid_argument("hi");
    return murmur::ConductorInterval::closed(lo, hi);
  } catch (const std::logic_error&) {
    throw Error(errc::usage, "interval must look like lo:hi, got '" + text + "'");
  }
}

std::vector<int> parse_class_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw Error(errc::usage, "class list must be comma-separated ranks, got '" + text + "'");
    }
  }
  if (out.empty()) throw Error(errc::usage, "empty class list");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Canonical option list for the manifest; rerun parses it back.
class Manifest {
 public:
  explicit Manifest(const RunConfig& cfg) : cfg_(cfg) { argv_.push_back(cfg.subcommand); }

  template <class T>
  Manifest& opt(const std::string& name, const T& value) {
    std::ostringstream s;
    s << value;
    argv_.push_back("--" + name);
    argv_.push_back(s.str());
    config_[name] = value;
    return *this;
  }

  Manifest& flag(const std::string& name, bool on) {
    if (on) argv_.push_back("--" + name);
    config_[name] = on;
    return *this;
  }

  Manifest& str_opt(const std::string& name, const std::string& value) {
    if (!value.empty()) {
      argv_.push_back("--" + name);
      argv_.push_back(value);
    }
    config_[name] = value;
    return *this;
  }

  json extra;

  void write(const std::string& fallback_stem) const {
    json j;
    j["tool"] = "murmur";
    j["version"] = kVersion;
    j["subcommand"] = cfg_.subcommand;
    j["config"] = config_;
    if (!extra.is_null()) j["results"] = extra;
    j["argv"] = argv_;
    std::string path = cfg_.manifest;
    if (path.empty()) path = (cfg_.out.empty() || cfg_.out == "-") ? fallback_stem : cfg_.out + ".manifest.json";
    write_file(path, j.dump(2) + "\n");
  }

 private:
  const RunConfig& cfg_;
  std::vector<std::string> argv_;
  json config_ = json::object();
};

Manifest& common(Manifest& m, const RunConfig& cfg) {
  // Thread count is left out: results do not depend on it.
  m.str_opt("out", cfg.out).str_opt("plot", cfg.plot);
  return m;
}

std::string manifest_stem(const RunConfig& cfg) { return "murmur-" + cfg.subcommand + ".manifest.json"; }

// ---------------------------------------------------------------------------

int cmd_ap(const RunConfig& cfg) {
  const auto curve = murmur::CurveEquation::parse(cfg.curve);
  const std::uint64_t pmax = cfg.pmax ? cfg.pmax : 100;
  const murmur::PrimeTables tables(pmax, cfg.threads);
  const auto ap = murmur::ap_vector(curve, tables);
  std::ostringstream csv;
  csv << "prime,count,discrepancy,aggregate\n";
  murmur::PlotSeries disc{"discrepancy a_p", "blue", {}}, agg{"aggregate", "red", {}};
  std::int64_t running = 0;
  for (std::size_t k = 0; k < ap.values.size(); ++k) {
    const std::int64_t p = tables.primes()[k];
    running += ap.values[k];
    // Affine solution count; #E_p adds the point at infinity.
    csv << p << ',' << (p - ap.values[k]) << ',' << ap.values[k] << ',' << running << '\n';
    disc.points.emplace_back(static_cast<double>(p), ap.values[k]);
    agg.points.emplace_back(static_cast<double>(p), static_cast<double>(running));
  }
  write_file(cfg.out, csv.str());
  if (!cfg.plot.empty()) {
    murmur::PlotSpec spec{"Frobenius traces of [" + curve.to_string() + "]", "p", "a_p", 1200, 400, 3.0};
    write_file(cfg.plot, murmur::render_scatter_svg({disc, agg}, spec));
  }
  Manifest m(cfg);
  m.str_opt("curve", curve.to_string()).opt("pmax", pmax);
  common(m, cfg).write(manifest_stem(cfg));
  return 0;
}

int cmd_chebyshev(const RunConfig& cfg) {
  if (cfg.modulus != 4) throw Error(errc::usage, "only modulus 4 is supported");
  const auto series = murmur::bias_series(cfg.limit);
  const bool csv_to_stdout = cfg.out.empty() || cfg.out == "-";
  if (!csv_to_stdout || cfg.crossings == 0) {
    std::ostringstream csv;
    csv << "prime,remainder,discrepancy,aggregate\n";
    for (std::size_t k = 0; k < series.size(); ++k)
      csv << series.primes[k] << ',' << series.remainder(k) << ',' << series.discrepancies[k] << ','
          << series.aggregates[k] << '\n';
    write_file(cfg.out, csv.str());
  }
  json results;
  if (cfg.crossings > 0) {
    const auto found = murmur::first_positive_crossings(cfg.limit, cfg.crossings);
    std::ostringstream rep;
    rep << "crossing,prime\n";
    for (std::size_t i = 0; i < found.size(); ++i) rep << (i + 1) << ',' << found[i] << '\n';
    if (csv_to_stdout)
      std::cout << rep.str();
    else
      std::cerr << rep.str();
    results["positive_aggregate_primes"] = found;
  }
  if (!cfg.plot.empty()) {
    murmur::PlotSeries s{"aggregate discrepancy", "black", {}};
    for (std::size_t k = 0; k < series.size(); ++k)
      s.points.emplace_back(series.primes[k], static_cast<double>(series.aggregates[k]));
    murmur::PlotSpec spec{"Odd primes mod 4: aggregate discrepancy", "p", "aggregate", 1200, 400, 1.0};
    write_file(cfg.plot, murmur::render_scatter_svg({s}, spec));
  }
  Manifest m(cfg);
  m.opt("limit", cfg.limit).opt("modulus", cfg.modulus).opt("crossings", cfg.crossings);
  m.extra = results;
  common(m, cfg).write(manifest_stem(cfg));
  return 0;
}

std::vector<murmur::IsogenyClassRecord> load(const RunConfig& cfg) {
  auto records = murmur::load_corpus(cfg.corpus);
  std::cerr << "loaded " << records.size() << " isogeny classes from " << cfg.corpus << '\n';
  return records;
}

int cmd_dataset(const RunConfig& cfg) {
  const auto interval = parse_interval(cfg.interval);
  const std::uint64_t pmax = cfg.pmax ? cfg.pmax : 100;
  const auto records = load(cfg);
  std::vector<murmur::IsogenyClassRecord> members;
  if (cfg.parity == "all") {
    for (const auto& r : records)
      if (interval.contains(r.conductor)) members.push_back(r);
  } else if (cfg.parity == "0" || cfg.parity == "1") {
    members = murmur::select(records, cfg.parity == "1", interval).members;
  } else {
    throw Error(errc::usage, "parity must be 0, 1 or all");
  }
  const auto matrix = murmur::materialize_ap(members, pmax, cfg.threads);
  std::ostringstream csv;
  murmur::write_ap_matrix_csv(csv, matrix);
  write_file(cfg.out, csv.str());
  std::cerr << matrix.values.rows() << " rows x " << matrix.primes.size() << " primes\n";
  Manifest m(cfg);
  m.str_opt("corpus", cfg.corpus).str_opt("interval", cfg.interval).str_opt("parity", cfg.parity).opt("pmax", pmax);
  m.extra = {{"rows", matrix.values.rows()}, {"primes", matrix.primes.size()}};
  common(m, cfg).write(manifest_stem(cfg));
  return 0;
}

int cmd_average(const RunConfig& cfg) {
  const auto interval = parse_interval(cfg.interval);
  const std::uint64_t pmax = cfg.pmax ? cfg.pmax : interval.lo;
  const auto records = load(cfg);
  const auto [even, odd] = murmur::paired_series(records, interval, pmax, cfg.threads);
  if (cfg.normalize) {
    // Validates the prime grid against the interval start.
    (void)murmur::normalized_series(even);
  }
  std::ostringstream csv;
  murmur::write_series_csv(csv, even, odd, cfg.decimals);
  write_file(cfg.out, csv.str());
  if (!cfg.plot.empty()) write_file(cfg.plot, murmur::render_series_svg(even, odd, cfg.normalize));
  std::cerr << "even: " << even.member_count << " classes, odd: " << odd.member_count << " classes\n";
  Manifest m(cfg);
  m.str_opt("corpus", cfg.corpus).str_opt("interval", cfg.interval).opt("pmax", pmax);
  m.flag("normalize", cfg.normalize).opt("decimals", cfg.decimals);
  m.extra = {{"count_even", even.member_count}, {"count_odd", odd.member_count}};
  common(m, cfg).write(manifest_stem(cfg));
  return 0;
}

const char* rank_color(std::uint32_t rank) {
  static const char* colors[] = {"blue", "red", "green", "orange"};
  return colors[std::min<std::uint32_t>(rank, 3)];
}

int cmd_pca(const RunConfig& cfg) {
  const auto interval = parse_interval(cfg.interval);
  const std::uint64_t pmax = cfg.pmax ? cfg.pmax : 4096;
  const auto records = load(cfg);
  std::optional<std::vector<int>> ranks;
  if (!cfg.classes.empty()) ranks = parse_class_list(cfg.classes);
  std::vector<murmur::IsogenyClassRecord> members;
  for (const auto& r : records)
    if (interval.contains(r.conductor) &&
        (!ranks || std::count(ranks->begin(), ranks->end(), static_cast<int>(r.rank))))
      members.push_back(r);
  const auto ap = murmur::materialize_ap(members, pmax, cfg.threads);
  murmur::PcaOptions opt;
  opt.seed = cfg.seed;
  opt.threads = cfg.threads;
  if (!cfg.no_sqrt_scaling) opt.feature_scale = murmur::sqrt_prime_scale(ap.primes);
  auto model = murmur::pca_fit(ap.values.cast<double>(), cfg.k, opt);
  model.primes = ap.primes;
  const auto proj = murmur::pca_project(model, ap.values.cast<double>());

  std::ostringstream csv;
  csv << "prime,weight\n";
  murmur::PlotSeries profile{"first principal direction", "black", {}};
  for (const auto& e : murmur::first_component_profile(model)) {
    csv << e.prime << ',' << murmur::format_double(e.weight) << '\n';
    profile.points.emplace_back(e.prime, e.weight);
  }
  write_file(cfg.out, csv.str());
  if (!cfg.plot.empty()) {
    std::map<std::uint32_t, murmur::PlotSeries> by_rank;
    for (std::size_t i = 0; i < members.size(); ++i) {
      auto& s = by_rank[members[i].rank];
      if (s.name.empty()) s = {"rank " + std::to_string(members[i].rank), rank_color(members[i].rank), {}};
      s.points.emplace_back(proj(i, 0), model.k() > 1 ? proj(i, 1) : 0.0);
    }
    std::vector<murmur::PlotSeries> series;
    for (auto& [rank, s] : by_rank) series.push_back(std::move(s));
    murmur::PlotSpec spec{"PCA of a_p vectors, conductor in " + interval.to_string(), "PC1", "PC2", 800, 800, 1.5};
    write_file(cfg.plot, murmur::render_scatter_svg(series, spec));
  }
  if (!cfg.profile_plot.empty()) {
    murmur::PlotSpec spec{"First principal direction", "p", "weight", 1200, 400, 2.0};
    write_file(cfg.profile_plot, murmur::render_scatter_svg({profile}, spec));
  }
  if (!cfg.model.empty()) {
    std::ostringstream mcsv;
    murmur::write_pca_csv(mcsv, model);
    write_file(cfg.model + ".csv", mcsv.str());
    write_file(cfg.model + ".json", murmur::pca_metadata(model, opt).dump(2) + "\n");
  }
  std::cerr << members.size() << " classes, explained variance:";
  for (double v : model.explained_variance) std::cerr << ' ' << v;
  std::cerr << '\n';
  Manifest m(cfg);
  m.str_opt("corpus", cfg.corpus).str_opt("interval", cfg.interval).str_opt("classes", cfg.classes);
  m.opt("pmax", pmax).opt("k", cfg.k).opt("seed", cfg.seed).flag("no-sqrt-scaling", cfg.no_sqrt_scaling);
  m.str_opt("model", cfg.model).str_opt("profile-plot", cfg.profile_plot);
  m.extra = {{"rows", members.size()}, {"explained_variance", model.explained_variance}};
  common(m, cfg).write(manifest_stem(cfg));
  return 0;
}

int cmd_train(const RunConfig& cfg) {
  const auto classes = parse_class_list(cfg.classes);
  if (classes.size() < 2)
    throw Error(errc::single_class, "need at least 2 distinct classes, got " + cfg.classes);
  const auto interval = parse_interval(cfg.interval.empty() ? "1:99999" : cfg.interval);
  const std::uint64_t pmax = cfg.pmax ? cfg.pmax : 4096;
  const auto records = load(cfg);

  const auto sample = murmur::sample_by_rank(records, classes, cfg.per_class, interval, cfg.seed);
  json counts = json::object();
  for (std::size_t i = 0; i < classes.size(); ++i) {
    counts[std::to_string(classes[i])] = sample.counts[i];
    std::cerr << "rank " << classes[i] << ": " << sample.counts[i] << " classes sampled\n";
  }
  const auto ap = murmur::materialize_ap(sample.members, pmax, cfg.threads);
  murmur::LogisticConfig lc;
  lc.learning_rate = cfg.learning_rate;
  lc.epochs = cfg.epochs;
  lc.seed = cfg.seed;
  lc.train_fraction = cfg.train_fraction;
  lc.scale_by_sqrt_p = !cfg.no_sqrt_scaling;
  lc.threads = cfg.threads;
  const auto report = murmur::logreg_train(ap.values.cast<double>(), sample.labels, lc, ap.primes);
  auto metrics = murmur::metrics_json(report);
  metrics["sample_counts"] = counts;
  metrics["pmax"] = pmax;
  write_file(cfg.out, metrics.dump(2) + "\n");
  if (!cfg.model.empty()) {
    std::ostringstream mcsv;
    murmur::write_logistic_csv(mcsv, report.model);
    write_file(cfg.model + ".csv", mcsv.str());
    write_file(cfg.model + ".json", murmur::logistic_metadata(report.model, lc).dump(2) + "\n");
  }
  std::cerr << "held-out precision " << report.precision << ", accuracy " << report.accuracy
            << ", confidence " << report.confidence << '\n';
  Manifest m(cfg);
  m.str_opt("corpus", cfg.corpus).str_opt("interval", cfg.interval.empty() ? "1:99999" : cfg.interval);
  m.str_opt("classes", cfg.classes).opt("per-class", cfg.per_class).opt("pmax", pmax);
  m.opt("lr", cfg.learning_rate).opt("epochs", cfg.epochs).opt("train-fraction", cfg.train_fraction);
  m.flag("no-sqrt-scaling", cfg.no_sqrt_scaling).opt("seed", cfg.seed).str_opt("model", cfg.model);
  m.extra = {{"precision", report.precision}, {"sample_counts", counts}};
  common(m, cfg).write(manifest_stem(cfg));
  return 0;
}

int run(std::vector<std::string> args);

int cmd_rerun(const RunConfig& cfg) {
  std::ifstream in(cfg.rerun_manifest);
  if (!in) throw Error(errc::io, "cannot read manifest " + cfg.rerun_manifest);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(errc::usage, "malformed manifest: " + std::string(e.what()));
  }
  if (!j.contains("argv") || !j["argv"].is_array()) throw Error(errc::usage, "manifest has no argv list");
  auto argv = j["argv"].get<std::vector<std::string>>();
  if (argv.empty() || argv.front() == "rerun") throw Error(errc::usage, "manifest argv is not replayable");
  argv.push_back("--threads");
  argv.push_back(std::to_string(cfg.threads));
  if (!cfg.manifest.empty()) {
    argv.push_back("--manifest");
    argv.push_back(cfg.manifest);
  }
  return run(argv);
}

// ---------------------------------------------------------------------------

int run(std::vector<std::string> args) {
  RunConfig cfg;
  CLI::App app{"Frobenius traces, murmurations and rank probes for elliptic curves over Q", "murmur"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Primary output file (default: stdout)");
    sub->add_option("--plot", cfg.plot, "SVG plot output");
    sub->add_option("--manifest", cfg.manifest, "Manifest path (default: <out>.manifest.json)");
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  };
  const auto add_corpus = [&](CLI::App* sub) {
    cfg.corpus = default_corpus();
    sub->add_option("--corpus", cfg.corpus, "Corpus CSV (.csv or .csv.gz); default $MURMUR_CORPUS or bundled");
  };

  auto* ap = app.add_subcommand("ap", "Point counts and Frobenius traces of one curve");
  ap->add_option("--curve", cfg.curve, "Coefficients a1,a2,a3,a4,a6")->required()->allow_extra_args(false);
  ap->add_option("--pmax", cfg.pmax, "Largest prime (default 100)");
  add_common(ap);

  auto* cheb = app.add_subcommand("chebyshev", "Remainders of odd primes mod 4 and their running bias");
  cheb->add_option("--limit", cfg.limit, "Largest prime considered")->required();
  cheb->add_option("--modulus", cfg.modulus, "Modulus (only 4)");
  cheb->add_option("--crossings", cfg.crossings, "Report the first K primes with positive aggregate");
  add_common(cheb);

  auto* ds = app.add_subcommand("dataset", "Export the a_p matrix of a conductor window");
  add_corpus(ds);
  ds->add_option("--interval", cfg.interval, "Closed conductor interval lo:hi")->required();
  ds->add_option("--parity", cfg.parity, "Rank parity 0, 1 or all");
  ds->add_option("--pmax", cfg.pmax, "Largest prime (default 100)");
  add_common(ds);

  auto* avg = app.add_subcommand("average", "Murmuration averages for both rank parities");
  add_corpus(avg);
  avg->add_option("--interval", cfg.interval, "Closed conductor interval lo:hi")->required();
  avg->add_option("--pmax", cfg.pmax, "Largest prime (default: interval start)");
  avg->add_flag("--normalize", cfg.normalize, "Plot against x = p / lo");
  avg->add_option("--decimals", cfg.decimals, "Decimals for the means (half-to-even)");
  add_common(avg);

  auto* pca = app.add_subcommand("pca", "Principal components of a_p vectors");
  add_corpus(pca);
  pca->add_option("--interval", cfg.interval, "Closed conductor interval lo:hi")->required();
  pca->add_option("--classes", cfg.classes, "Restrict to these ranks, e.g. 0,1");
  pca->add_option("--pmax", cfg.pmax, "Largest prime (default 4096)");
  pca->add_option("--k", cfg.k, "Number of components");
  pca->add_option("--seed", cfg.seed, "Power-iteration start seed");
  pca->add_flag("--no-sqrt-scaling", cfg.no_sqrt_scaling, "Use raw a_p instead of a_p / sqrt(p)");
  pca->add_option("--model", cfg.model, "Write model to <prefix>.csv and <prefix>.json");
  pca->add_option("--profile-plot", cfg.profile_plot, "SVG of the first principal direction");
  add_common(pca);

  auto* train = app.add_subcommand("train", "Logistic-regression rank classifier");
  add_corpus(train);
  train->add_option("--classes", cfg.classes, "Ranks to separate, e.g. 0,1")->required();
  train->add_option("--per-class", cfg.per_class, "Isogeny classes sampled per rank");
  train->add_option("--interval", cfg.interval, "Closed conductor interval (default 1:99999)");
  train->add_option("--pmax", cfg.pmax, "Largest prime (default 4096)");
  train->add_option("--lr", cfg.learning_rate, "Learning rate");
  train->add_option("--epochs", cfg.epochs, "Full-batch gradient steps");
  train->add_option("--train-fraction", cfg.train_fraction, "Training share of the sample");
  train->add_flag("--no-sqrt-scaling", cfg.no_sqrt_scaling, "Use raw a_p instead of a_p / sqrt(p)");
  train->add_option("--seed", cfg.seed, "Sampling and split seed");
  train->add_option("--model", cfg.model, "Write model to <prefix>.csv and <prefix>.json");
  add_common(train);

  auto* rerun = app.add_subcommand("rerun", "Replay a manifest");
  rerun->add_option("path", cfg.rerun_manifest, "Manifest JSON to replay")->required();
  rerun->add_option("--threads", cfg.threads, "Override the thread count");
  rerun->add_option("--manifest", cfg.manifest, "Where the replay writes its own manifest");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[" << errc::usage << "]: " << e.what() << '\n';
    return 2;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (cfg.subcommand == "ap") return cmd_ap(cfg);
  if (cfg.subcommand == "chebyshev") return cmd_chebyshev(cfg);
  if (cfg.subcommand == "dataset") return cmd_dataset(cfg);
  if (cfg.subcommand == "average") return cmd_average(cfg);
  if (cfg.subcommand == "pca") return cmd_pca(cfg);
  if (cfg.subcommand == "train") return cmd_train(cfg);
  return cmd_rerun(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const Error& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << '\n';
    return e.code() == errc::usage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << '\n';
    return 1;
  }
}
