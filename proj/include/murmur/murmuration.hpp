#pragma once

// Murmuration averages m(parity, I)(p) = (1/|S|) sum_{E in S} a_p(E) over a
// dataset S(parity, I), accumulated exactly as integer sums.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "murmur/dataset.hpp"
#include "murmur/ecpoint.hpp"
#include "murmur/error.hpp"
#include "murmur/format.hpp"
#include "murmur/parallel.hpp"
#include "murmur/stats.hpp"
#include "murmur/svg.hpp"

namespace murmur {

struct MurmurationSeries {
  int parity = 0;
  ConductorInterval interval;
  std::vector<std::uint32_t> primes;
  std::vector<std::int64_t> sums;  // exact numerators; mean = sums[k] / member_count
  std::vector<double> means;
  std::uint64_t member_count = 0;

  std::size_t size() const noexcept { return primes.size(); }

  /// Mean at index k with `places` decimals, rounded half to even.
  std::string rounded_mean(std::size_t k, int places = 3) const {
    return format_rational(sums.at(k), member_count, places);
  }
};

namespace detail {

inline MurmurationSeries make_series(int parity, const ConductorInterval& interval,
                                     std::vector<std::uint32_t> primes,
                                     std::vector<std::int64_t> sums, std::uint64_t count) {
  MurmurationSeries s{parity, interval, std::move(primes), std::move(sums), {}, count};
  s.means.reserve(s.sums.size());
  for (auto v : s.sums) s.means.push_back(static_cast<double>(v) / static_cast<double>(count));
  return s;
}

}  // namespace detail

/// Column sums over an already materialized a_p matrix.
inline MurmurationSeries murmuration(int parity, const ConductorInterval& interval,
                                     const ApMatrix& matrix) {
  if (matrix.values.rows() == 0) throw Error(errc::empty_dataset, "empty dataset");
  std::vector<std::int64_t> sums(matrix.values.cols(), 0);
  for (std::size_t i = 0; i < matrix.values.rows(); ++i) {
    const auto row = matrix.values.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) sums[k] += row[k];
  }
  return detail::make_series(parity, interval, matrix.primes, std::move(sums), matrix.values.rows());
}

/// Streams a_p rows without keeping the full matrix. Rows are processed in
/// fixed chunks and partial sums are combined in chunk order.
inline MurmurationSeries murmuration(const DatasetSelection& selection, const PrimeTables& tables,
                                     unsigned threads = 0) {
  const auto& members = selection.members;
  if (members.empty()) throw Error(errc::empty_dataset, "empty dataset");
  const std::size_t n = tables.size();
  using Sums = std::vector<std::int64_t>;
  Sums sums = deterministic_reduce(
      members.size(), 64, threads, Sums(n, 0),
      [&](std::size_t begin, std::size_t end) {
        Sums local(n, 0);
        std::vector<std::int32_t> row(n);
        for (std::size_t i = begin; i < end; ++i) {
          ap_values(members[i].curve, tables, row);
          for (std::size_t k = 0; k < n; ++k) local[k] += row[k];
        }
        return local;
      },
      [](Sums acc, Sums part) {
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += part[k];
        return acc;
      });
  return detail::make_series(selection.parity, selection.interval, tables.primes(), std::move(sums),
                             members.size());
}

inline MurmurationSeries murmuration(const DatasetSelection& selection, std::uint64_t prime_limit,
                                     unsigned threads = 0) {
  if (selection.members.empty()) throw Error(errc::empty_dataset, "empty dataset");
  return murmuration(selection, PrimeTables(prime_limit, threads), threads);
}

/// Even- and odd-parity series over the same interval and prime grid.
inline std::pair<MurmurationSeries, MurmurationSeries> paired_series(
    const std::vector<IsogenyClassRecord>& records, const ConductorInterval& interval,
    std::uint64_t prime_limit, unsigned threads = 0) {
  const DatasetSelection even = select(records, 0, interval);
  const DatasetSelection odd = select(records, 1, interval);
  if (even.members.empty())
    throw Error(errc::empty_dataset, "empty dataset for parity 0 (even rank) in " + interval.to_string());
  if (odd.members.empty())
    throw Error(errc::empty_dataset, "empty dataset for parity 1 (odd rank) in " + interval.to_string());
  const PrimeTables tables(prime_limit, threads);
  return {murmuration(even, tables, threads), murmuration(odd, tables, threads)};
}

/// [base 2^k, base 2^(k+1)) for k = 0 .. count-1.
inline std::vector<ConductorInterval> dyadic_windows(std::uint64_t base, std::size_t count) {
  if (base == 0 || count == 0) throw Error(errc::precondition, "dyadic windows need base >= 1 and count >= 1");
  std::vector<ConductorInterval> out;
  std::uint64_t lo = base;
  for (std::size_t k = 0; k < count; ++k) {
    if (lo > UINT64_MAX / 2) throw Error(errc::precondition, "dyadic window overflows 64 bits");
    out.push_back({lo, 2 * lo});
    lo *= 2;
  }
  return out;
}

struct NormalizedPoint {
  double x = 0;
  double y = 0;
};

struct NormalizedSeries {
  int parity = 0;
  std::vector<NormalizedPoint> points;
};

/// Maps each prime to x = p / lo(I). Requires every prime to be <= lo(I)
/// (the series is taken over primes up to the start of the interval).
inline NormalizedSeries normalized_series(const MurmurationSeries& series) {
  const double lo = static_cast<double>(series.interval.lo);
  if (series.interval.lo == 0) throw Error(errc::precondition, "interval starts at 0; cannot normalize");
  NormalizedSeries out{series.parity, {}};
  out.points.reserve(series.size());
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (series.primes[k] > series.interval.lo)
      throw Error(errc::precondition, "prime " + std::to_string(series.primes[k]) +
                                          " exceeds the interval start " +
                                          std::to_string(series.interval.lo));
    out.points.push_back({series.primes[k] / lo, series.means[k]});
  }
  return out;
}

namespace detail {

/// Piecewise-linear interpolation through points sorted by x; clamped at the ends.
inline double interpolate(const std::vector<NormalizedPoint>& pts, double x) {
  if (x <= pts.front().x) return pts.front().y;
  if (x >= pts.back().x) return pts.back().y;
  std::size_t lo = 0, hi = pts.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (pts[mid].x <= x ? lo : hi) = mid;
  }
  const double t = (x - pts[lo].x) / (pts[hi].x - pts[lo].x);
  return pts[lo].y + t * (pts[hi].y - pts[lo].y);
}

}  // namespace detail

/// Pearson correlation of two normalized series after resampling both onto
/// x = i / grid, i = 1..grid, by linear interpolation.
inline double scale_alignment_score(const NormalizedSeries& a, const NormalizedSeries& b,
                                    std::size_t grid = 256) {
  if (a.points.empty() || b.points.empty())
    throw Error(errc::precondition, "alignment needs two nonempty series");
  if (a.parity != b.parity) throw Error(errc::precondition, "alignment compares series of the same parity");
  if (grid < 2) throw Error(errc::precondition, "resampling grid needs at least 2 points");
  std::vector<double> ya(grid), yb(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    const double x = static_cast<double>(i + 1) / static_cast<double>(grid);
    ya[i] = detail::interpolate(a.points, x);
    yb[i] = detail::interpolate(b.points, x);
  }
  return pearson_correlation(ya, yb);
}

/// Series CSV: prime,x,mean_even,mean_odd,count_even,count_odd with
/// x = p / lo(I) and means rounded half to even.
inline void write_series_csv(std::ostream& out, const MurmurationSeries& even,
                             const MurmurationSeries& odd, int places = 3) {
  if (even.primes != odd.primes) throw Error(errc::dimension_mismatch, "series prime grids differ");
  out << "prime,x,mean_even,mean_odd,count_even,count_odd\n";
  const double lo = static_cast<double>(even.interval.lo == 0 ? 1 : even.interval.lo);
  for (std::size_t k = 0; k < even.size(); ++k) {
    out << even.primes[k] << ',' << format_double(even.primes[k] / lo) << ','
        << even.rounded_mean(k, places) << ',' << odd.rounded_mean(k, places) << ','
        << even.member_count << ',' << odd.member_count << '\n';
  }
}

/// Scatter of both parities: even in blue, odd in red.
inline std::string render_series_svg(const MurmurationSeries& even, const MurmurationSeries& odd,
                                     bool normalize) {
  PlotSeries e{"even rank (" + std::to_string(even.member_count) + ")", "blue", {}};
  PlotSeries o{"odd rank (" + std::to_string(odd.member_count) + ")", "red", {}};
  const double lo = static_cast<double>(even.interval.lo == 0 ? 1 : even.interval.lo);
  for (std::size_t k = 0; k < even.size(); ++k) {
    const double x = normalize ? even.primes[k] / lo : even.primes[k];
    e.points.emplace_back(x, even.means[k]);
  }
  for (std::size_t k = 0; k < odd.size(); ++k) {
    const double x = normalize ? odd.primes[k] / lo : odd.primes[k];
    o.points.emplace_back(x, odd.means[k]);
  }
  PlotSpec spec;
  spec.title = "Average of a_p over isogeny classes with conductor in " + even.interval.to_string();
  spec.x_label = normalize ? "p / " + std::to_string(even.interval.lo) : "p";
  spec.y_label = "mean a_p";
  return render_scatter_svg({e, o}, spec);
}

}  // namespace murmur
