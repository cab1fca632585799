// End-to-end acceptance checks. Prints one PASS/FAIL/SKIP line per criterion
// and exits nonzero when any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "murmur/murmur.hpp"

using namespace murmur;
namespace fs = std::filesystem;

namespace {

enum class Status { pass, fail, skip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome verdict(bool ok, std::string detail) { return {ok ? Status::pass : Status::fail, std::move(detail)}; }

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "murmur_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int cli(const std::string& args) {
  const std::string cmd = std::string("\"") + MURMUR_CLI + "\" " + args + " 2>>\"" +
                          (scratch() / "cli.log").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& file) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(file));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string fixed(double v, int places = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

const std::vector<std::uint32_t> kPrimesTo97 = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                                43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

bool large_corpus_present() { return fs::exists(MURMUR_LARGE_CORPUS); }

const std::vector<IsogenyClassRecord>& large_corpus() {
  static const auto records = load_corpus(MURMUR_LARGE_CORPUS);
  return records;
}

// ---------------------------------------------------------------------------

Outcome single_curve_tables() {
  struct Case {
    const char* coefficients;
    std::vector<int> traces;
    long final_aggregate;
  };
  const std::vector<Case> cases = {
      {"0,1,1,1,0", {0, -2, 3, -1, 3, -4, -3, 1, 0, 6, -4, 2, -6, -1, -3, 12, -6, -1, -4, 6, -7, 8, 12, 12, 8}, 31},
      {"0,0,1,-1,0", {-2, -3, -2, -1, -5, -2, 0, 0, 2, 6, -4, -1, -9, 2, -9, 1, 8, -8, 8, 9, -1, 4, -15, 4, 4}, -14},
  };
  int mismatches = 0, checked = 0;
  for (const auto& c : cases) {
    const auto out = scratch() / (std::string("table_") + c.coefficients + ".csv");
    if (cli(std::string("ap --curve ") + c.coefficients + " --pmax 100 --out \"" + out.string() + "\"") != 0)
      return verdict(false, std::string("cli failed for ") + c.coefficients);
    const auto rows = read_csv(out);
    if (rows.size() != 26) return verdict(false, "expected 25 data rows");
    long running = 0;
    for (std::size_t k = 0; k < 25; ++k) {
      const long p = kPrimesTo97[k];
      running += c.traces[k];
      const std::vector<std::string> want = {std::to_string(p), std::to_string(p - c.traces[k]),
                                             std::to_string(c.traces[k]), std::to_string(running)};
      checked += 4;
      for (std::size_t j = 0; j < 4; ++j) mismatches += rows[k + 1][j] != want[j];
    }
    if (running != c.final_aggregate) ++mismatches;
  }
  return verdict(mismatches == 0, std::to_string(checked - mismatches) + "/" + std::to_string(checked) +
                                      " entries exact");
}

Outcome prime_race() {
  const std::vector<std::int64_t> aggregates = {-1, 0,  -1, -2, -1, 0,  -1, -2, -1, -2, -1, 0,
                                                -1, -2, -1, -2, -1, -2, -3, -2, -3, -4, -3, -2};
  const auto s = bias_series(100);
  bool rows_ok = s.size() == 24 && s.aggregates == aggregates;
  for (std::size_t k = 0; rows_ok && k < s.size(); ++k)
    rows_ok = s.primes[k] == kPrimesTo97[k + 1] && s.remainder(k) == s.primes[k] % 4;
  const auto crossings = first_positive_crossings(700000, 2);
  const bool cross_ok = crossings == std::vector<std::uint32_t>{26861, 616841};
  std::string found;
  for (auto p : crossings) found += (found.empty() ? "" : ",") + std::to_string(p);
  return verdict(rows_ok && cross_ok, std::string("24 rows ") + (rows_ok ? "exact" : "differ") +
                                          ", crossings [" + found + "]");
}

Outcome murmuration_window() {
  const std::vector<std::string> even_ref = {
      "0.137",  "0.266",  "0.715",  "0.871",  "1.078",  "0.770",  "0.906",  "0.777",  "0.918",
      "0.039",  "-0.266", "-0.863", "-0.812", "-0.953", "-1.148", "-1.484", "-1.062", "-1.535",
      "-1.648", "-0.523", "-1.039", "-0.742", "0.031",  "0.410",  "0.703"};
  const std::vector<std::string> odd_ref = {
      "-0.242", "-0.605", "-1.100", "-1.579", "-1.937", "-2.263", "-1.905", "-1.963", "-1.321",
      "-0.974", "-1.047", "-0.684", "-0.105", "-0.321", "0.332",  "1.505",  "0.668",  "0.968",
      "0.316",  "0.463",  "-0.342", "-0.542", "-0.189", "-1.379", "-1.789"};
  const auto records = load_corpus(MURMUR_SMALL_CORPUS);
  const auto [even, odd] = paired_series(records, ConductorInterval::closed(200, 400), 100);
  int matches = 0;
  for (std::size_t k = 0; k < 25 && k < even.size(); ++k) {
    const bool e = even.rounded_mean(k) == even_ref[k] && std::abs(even.means[k] - std::stod(even_ref[k])) <= 0.0005;
    const bool o = odd.rounded_mean(k) == odd_ref[k] && std::abs(odd.means[k] - std::stod(odd_ref[k])) <= 0.0005;
    matches += e + o;
  }
  const bool counts = even.member_count == 256 && odd.member_count == 190;
  return verdict(counts && matches == 50 && even.size() == 25,
                 "counts " + std::to_string(even.member_count) + "/" + std::to_string(odd.member_count) + ", " +
                     std::to_string(matches) + "/50 averages match");
}

Outcome isogeny_invariance() {
  const PrimeTables tables(1000);
  const std::vector<std::string> named = {"0,0,1,-1,0", "0,-1,1,-7820,-263580", "0,-1,1,-10,-20"};
  std::vector<ApVector> vectors;
  for (const auto& c : named) vectors.push_back(ap_vector(CurveEquation::parse(c), tables));
  std::string detail;
  bool identical = true;
  for (std::size_t j = 1; j < vectors.size(); ++j) {
    for (std::size_t k = 0; k < tables.size(); ++k)
      if (vectors[j].values[k] != vectors[0].values[k]) {
        identical = false;
        detail += "[" + named[0] + "] and [" + named[j] + "] differ first at p=" +
                  std::to_string(tables.primes()[k]) + " (" + std::to_string(vectors[0].values[k]) + " vs " +
                  std::to_string(vectors[j].values[k]) + "); ";
        break;
      }
  }
  // The two conductor-11 curves with y^2 + y = x^3 - x^2 form a genuine class.
  const auto third = ap_vector(CurveEquation::parse("0,-1,1,0,0"), tables);
  const bool class11 = vectors[1].values == vectors[2].values && vectors[2].values == third.values;
  detail += std::string("conductor-11 class {[0,-1,1,-7820,-263580], [0,-1,1,-10,-20], [0,-1,1,0,0]} ") +
            (class11 ? "identical" : "differs") + " over 168 primes";
  if (identical) detail = "all three identical over 168 primes";
  return verdict(identical, detail);
}

Outcome fast_vs_naive() {
  std::mt19937_64 rng(20240101);
  std::uniform_int_distribution<int> coef(-20, 20);
  const auto primes = sieve_primes(101);
  std::vector<ResidueTable> tables;
  for (auto p : primes) tables.emplace_back(p);
  int curves = 0;
  long disagreements = 0, comparisons = 0;
  while (curves < 200) {
    CurveEquation::Coefficients c;
    for (auto& v : c) v = coef(rng);
    std::optional<CurveEquation> e;
    try {
      e.emplace(c);
    } catch (const Error&) {
      continue;
    }
    ++curves;
    for (std::size_t k = 0; k < primes.size(); ++k) {
      ++comparisons;
      disagreements += count_points_fast(*e, primes[k], tables[k]) != count_points_naive(*e, primes[k]);
    }
  }
  return verdict(disagreements == 0, std::to_string(comparisons) + " counts compared, " +
                                         std::to_string(disagreements) + " disagreements");
}

Outcome hasse_and_bad_primes() {
  const auto records = load_corpus(MURMUR_SMALL_CORPUS);
  const PrimeTables tables(4096);
  long violations = 0, checks = 0, bad = 0;
  for (const auto& r : records) {
    for (std::size_t k = 0; k < tables.size(); ++k) {
      const auto t = frobenius_trace(r.curve, tables.table(k));
      ++checks;
      if (!satisfies_trace_bound(t)) ++violations;
      if (t.reduction == Reduction::bad) {
        ++bad;
        if (r.conductor % t.prime != 0) ++violations;
      }
    }
  }
  return verdict(violations == 0, std::to_string(records.size()) + " classes x " + std::to_string(tables.size()) +
                                      " primes, " + std::to_string(bad) + " bad-prime traces, " +
                                      std::to_string(violations) + " violations");
}

Outcome pca_separation() {
  if (!large_corpus_present()) return verdict(false, "corpus " MURMUR_LARGE_CORPUS " not found");
  const auto interval = ConductorInterval::closed(5000, 10000);
  std::vector<IsogenyClassRecord> members;
  for (const auto& r : large_corpus())
    if (interval.contains(r.conductor)) members.push_back(r);
  const auto ap = materialize_ap(members, 4096);
  if (ap.primes.size() != 564) return verdict(false, "expected 564 primes");
  const auto x = ap.values.cast<double>();
  PcaOptions opt;
  opt.feature_scale = sqrt_prime_scale(ap.primes);
  auto model = pca_fit(x, 2, opt);
  model.primes = ap.primes;
  const auto proj = pca_project(model, x);

  // Best single threshold on the first coordinate, either orientation.
  std::vector<std::pair<double, int>> scored;
  std::size_t odd_total = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    scored.emplace_back(proj(i, 0), members[i].parity());
    odd_total += members[i].parity();
  }
  std::sort(scored.begin(), scored.end());
  const std::size_t n = scored.size();
  std::size_t odd_below = 0, best = std::max(odd_total, n - odd_total);
  for (std::size_t i = 0; i < n; ++i) {
    odd_below += scored[i].second;
    const std::size_t below = i + 1;
    const std::size_t even_low = (below - odd_below) + (odd_total - odd_below);
    best = std::max({best, even_low, n - even_low});
  }
  const double accuracy = static_cast<double>(best) / static_cast<double>(n);

  // Even-minus-odd murmuration in the coordinates PCA sees (a_p / sqrt p).
  std::vector<double> diff(ap.primes.size(), 0.0);
  std::vector<std::int64_t> sum_even(ap.primes.size(), 0), sum_odd(ap.primes.size(), 0);
  std::size_t n_even = 0, n_odd = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto& sums = members[i].parity() ? sum_odd : sum_even;
    (members[i].parity() ? n_odd : n_even)++;
    const auto row = ap.values.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) sums[k] += row[k];
  }
  for (std::size_t k = 0; k < diff.size(); ++k)
    diff[k] = (static_cast<double>(sum_even[k]) / n_even - static_cast<double>(sum_odd[k]) / n_odd) *
              opt.feature_scale[k];
  const auto profile = first_component_profile(model);
  std::vector<double> weights;
  for (const auto& e : profile) weights.push_back(e.weight);
  const double corr = pearson_correlation(weights, diff);
  return verdict(accuracy >= 0.85 && corr >= 0.8,
                 std::to_string(n) + " classes, threshold accuracy " + fixed(accuracy, 4) +
                     ", profile correlation " + fixed(corr, 4));
}

Outcome rank_classifier() {
  if (!large_corpus_present()) return verdict(false, "corpus " MURMUR_LARGE_CORPUS " not found");
  const auto interval = ConductorInterval::closed(1, 99999);
  struct Run {
    std::vector<int> ranks;
    double threshold;
    double precision = 0;
    std::vector<std::size_t> counts;
  };
  std::vector<Run> runs = {{{0, 1}, 0.90, 0, {}}, {{1, 2}, 0.95, 0, {}}};
  const PrimeTables tables(4096);
  bool ok = true;
  std::string detail;
  for (auto& run : runs) {
    const auto sample = sample_by_rank(large_corpus(), run.ranks, 20000, interval, 1);
    run.counts = sample.counts;
    const auto ap = materialize_ap(sample.members, tables);
    const auto report = logreg_train(ap.values.cast<double>(), sample.labels, LogisticConfig{}, ap.primes);
    run.precision = report.precision;
    for (auto c : run.counts) ok = ok && c >= 5000;
    ok = ok && run.precision >= run.threshold;
    detail += "{" + std::to_string(run.ranks[0]) + "," + std::to_string(run.ranks[1]) + "} precision " +
              fixed(run.precision, 4) + " (n=" + std::to_string(run.counts[0]) + "+" +
              std::to_string(run.counts[1]) + "); ";
  }

  // Gradient check against central differences of the loss.
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0, 1);
  double worst = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t n = 2 + inst % 5, k = 2 + inst % 3, m = 3 + inst % 7;
    LogisticModel model;
    for (std::size_t c = 0; c < k; ++c) model.classes.push_back(static_cast<int>(c));
    model.weights = Matrix<double>(k, n);
    for (auto& w : model.weights.flat()) w = g(rng);
    for (std::size_t c = 0; c < k; ++c) model.bias.push_back(g(rng));
    Matrix<double> x(m, n);
    for (auto& v : x.flat()) v = g(rng);
    std::vector<int> labels;
    for (std::size_t r = 0; r < m; ++r) labels.push_back(static_cast<int>(r % k));
    const auto grad = logreg_gradient(model, x, labels);
    const double h = 1e-5;
    auto w = model.weights.flat();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double saved = w[i];
      w[i] = saved + h;
      const double up = logreg_loss(model, x, labels);
      w[i] = saved - h;
      const double down = logreg_loss(model, x, labels);
      w[i] = saved;
      const double fd = (up - down) / (2 * h), an = grad.weights.flat()[i];
      worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::max(std::abs(fd), std::abs(an))));
    }
    for (std::size_t c = 0; c < k; ++c) {
      const double saved = model.bias[c];
      model.bias[c] = saved + h;
      const double up = logreg_loss(model, x, labels);
      model.bias[c] = saved - h;
      const double down = logreg_loss(model, x, labels);
      model.bias[c] = saved;
      const double fd = (up - down) / (2 * h);
      worst = std::max(worst, std::abs(fd - grad.bias[c]) / std::max(1.0, std::max(std::abs(fd), std::abs(grad.bias[c]))));
    }
  }
  ok = ok && worst <= 1e-4;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", worst);
  return verdict(ok, detail + "gradient max rel. error " + buf);
}

Outcome scale_invariance() {
  if (!large_corpus_present()) return {Status::skip, "corpus " MURMUR_LARGE_CORPUS " not found"};
  const auto windows = dyadic_windows(5000, 2);
  std::vector<std::pair<MurmurationSeries, MurmurationSeries>> series;
  for (const auto& w : windows) series.push_back(paired_series(large_corpus(), w, w.lo));
  const double even = scale_alignment_score(normalized_series(series[0].first), normalized_series(series[1].first));
  const double odd = scale_alignment_score(normalized_series(series[0].second), normalized_series(series[1].second));
  return verdict(even >= 0.8 && odd >= 0.8,
                 windows[0].to_string() + " vs " + windows[1].to_string() + ": even " + fixed(even, 4) + ", odd " +
                     fixed(odd, 4));
}

Outcome determinism() {
  const std::string corpus = std::string("--corpus \"") + MURMUR_SMALL_CORPUS + "\"";
  struct Job {
    std::string name, args;
    std::vector<std::string> extra_outputs;
  };
  const auto dir = scratch() / "determinism";
  fs::create_directories(dir);
  const auto file = [&](const std::string& n) { return (dir / n).string(); };
  const std::vector<Job> jobs = {
      {"ap", "ap --curve 1,-1,0,-4,3 --pmax 2000 --plot \"" + file("ap.svg") + "\"", {"ap.svg"}},
      {"chebyshev", "chebyshev --limit 100000 --crossings 1", {}},
      {"dataset", "dataset " + corpus + " --interval 1:1000 --pmax 500", {}},
      {"average", "average " + corpus + " --interval 500:1000 --pmax 500 --normalize --plot \"" + file("avg.svg") + "\"",
       {"avg.svg"}},
      {"pca", "pca " + corpus + " --interval 200:1000 --pmax 1000 --k 2 --model \"" + file("pca_model") + "\"",
       {"pca_model.csv", "pca_model.json"}},
      {"train", "train " + corpus + " --classes 0,1,2 --per-class 400 --pmax 500 --epochs 200 --model \"" +
                    file("lr_model") + "\"",
       {"lr_model.csv", "lr_model.json"}},
  };
  const unsigned n_threads = std::max(4u, resolve_threads(0));
  int identical = 0, compared = 0;
  std::string failures;
  for (const auto& job : jobs) {
    const auto out = file(job.name + ".out");
    if (cli(job.args + " --threads 1 --out \"" + out + "\"") != 0) return verdict(false, job.name + " failed");
    std::vector<std::string> first = {slurp(out), slurp(out + ".manifest.json")};
    for (const auto& e : job.extra_outputs) first.push_back(slurp(file(e)));
    fs::remove(out);
    for (const auto& e : job.extra_outputs) fs::remove(file(e));
    if (cli("rerun \"" + out + ".manifest.json\" --threads " + std::to_string(n_threads) + " --manifest \"" +
            file(job.name + ".replay.json") + "\"") != 0)
      return verdict(false, job.name + " rerun failed");
    std::vector<std::string> second = {slurp(out), slurp(file(job.name + ".replay.json"))};
    for (const auto& e : job.extra_outputs) second.push_back(slurp(file(e)));
    for (std::size_t i = 0; i < first.size(); ++i) {
      ++compared;
      if (!first[i].empty() && first[i] == second[i])
        ++identical;
      else
        failures += " " + job.name + "#" + std::to_string(i);
    }
  }
  return verdict(identical == compared, std::to_string(identical) + "/" + std::to_string(compared) +
                                            " files byte-identical at 1 vs " + std::to_string(n_threads) +
                                            " threads" + failures);
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0 = no runtime requirement
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "single-curve trace tables", 1.0, single_curve_tables},
      {2, "mod-4 prime race", 1.0, prime_race},
      {3, "murmuration averages over [200,400]", 5.0, murmuration_window},
      {4, "isogeny invariance", 1.0, isogeny_invariance},
      {5, "fast count equals naive count", 0, fast_vs_naive},
      {6, "Hasse bound and bad primes", 0, hasse_and_bad_primes},
      {7, "PCA separates rank parity", 0, pca_separation},
      {8, "logistic rank classifier", 0, rank_classifier},
      {9, "scale invariance across dyadic windows", 0, scale_invariance},
      {10, "determinism across thread counts", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Status::fail, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.status == Status::pass && c.budget_seconds > 0 && seconds > c.budget_seconds) {
      o.status = Status::fail;
      o.detail += "; exceeded " + fixed(c.budget_seconds, 0) + " s budget";
    }
    const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "SKIP";
    std::cout << "[" << tag << "] criterion " << c.id << ": " << c.name << " -- " << o.detail << " ("
              << fixed(seconds, 2) << " s)" << std::endl;
    failed += o.status == Status::fail;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << '\n';
  return failed ? 1 : 0;
}
