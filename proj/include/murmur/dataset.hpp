#pragma once

// Labeled isogeny-class corpora and the datasets S(parity, I) built from them.
//
// Corpus CSV (UTF-8): header `label,conductor,rank,a1,a2,a3,a4,a6`, one
// isogeny class per row, decimal integers, `#` comment lines. Conductor and
// rank are trusted labels; the equation must be nonsingular.

#include <zlib.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "murmur/curve.hpp"
#include "murmur/ecpoint.hpp"
#include "murmur/error.hpp"
#include "murmur/matrix.hpp"
#include "murmur/parallel.hpp"
#include "murmur/rng.hpp"

namespace murmur {

inline constexpr std::string_view kCorpusHeader = "label,conductor,rank,a1,a2,a3,a4,a6";

/// Half-open conductor interval [lo, hi).
struct ConductorInterval {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  static ConductorInterval half_open(std::uint64_t lo, std::uint64_t hi) {
    if (lo >= hi)
      throw Error(errc::precondition, "empty interval [" + std::to_string(lo) + "," +
                                          std::to_string(hi) + ")");
    return {lo, hi};
  }

  /// The closed interval [lo, hi], stored as [lo, hi + 1).
  static ConductorInterval closed(std::uint64_t lo, std::uint64_t hi) {
    if (lo > hi)
      throw Error(errc::precondition, "empty interval [" + std::to_string(lo) + "," +
                                          std::to_string(hi) + "]");
    return {lo, hi + 1};
  }

  bool contains(std::uint64_t n) const noexcept { return lo <= n && n < hi; }

  std::string to_string() const {
    return "[" + std::to_string(lo) + "," + std::to_string(hi) + ")";
  }

  friend bool operator==(const ConductorInterval&, const ConductorInterval&) = default;
};

struct IsogenyClassRecord {
  std::string label;
  std::uint64_t conductor = 0;
  std::uint32_t rank = 0;
  CurveEquation curve;
  std::optional<ApVector> ap;

  int parity() const noexcept { return static_cast<int>(rank % 2); }
};

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] inline void corpus_error(std::size_t line, std::string_view field,
                                      const std::string& what) {
  throw Error(errc::corpus_parse,
              "line " + std::to_string(line) + ": field '" + std::string(field) + "': " + what);
}

inline std::uint64_t parse_unsigned_field(std::string_view text, std::size_t line,
                                          std::string_view field) {
  text = trim(text);
  if (text.empty()) corpus_error(line, field, "empty");
  std::uint64_t v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') corpus_error(line, field, "not a nonnegative integer: '" + std::string(text) + "'");
    if (v > (UINT64_MAX - 9) / 10) corpus_error(line, field, "out of range");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

}  // namespace detail

/// One record per data row, in stream order. Throws Error(corpus_parse) naming
/// the line and field on malformed input, Error(duplicate_label) on a repeated
/// label. An empty stream yields an empty list.
inline std::vector<IsogenyClassRecord> parse_corpus(std::istream& in) {
  static constexpr std::string_view kFieldNames[] = {"label", "conductor", "rank", "a1",
                                                     "a2",    "a3",        "a4",   "a6"};
  std::vector<IsogenyClassRecord> records;
  std::unordered_set<std::string> labels;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::trim(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kCorpusHeader)
        throw Error(errc::corpus_parse, "line " + std::to_string(line_no) + ": expected header '" +
                                            std::string(kCorpusHeader) + "'");
      header_seen = true;
      continue;
    }
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 8)
      throw Error(errc::corpus_parse, "line " + std::to_string(line_no) + ": expected 8 fields, got " +
                                          std::to_string(fields.size()));
    const std::string label(detail::trim(fields[0]));
    if (label.empty()) detail::corpus_error(line_no, "label", "empty");
    const std::uint64_t conductor = detail::parse_unsigned_field(fields[1], line_no, "conductor");
    if (conductor == 0) detail::corpus_error(line_no, "conductor", "must be positive");
    const std::uint64_t rank = detail::parse_unsigned_field(fields[2], line_no, "rank");
    if (rank > UINT32_MAX) detail::corpus_error(line_no, "rank", "out of range");
    CurveEquation::Coefficients a;
    for (std::size_t i = 0; i < 5; ++i) {
      try {
        a[i] = CurveEquation::parse_integer(fields[3 + i]);
      } catch (const Error& e) {
        detail::corpus_error(line_no, kFieldNames[3 + i], e.what());
      }
    }
    std::optional<CurveEquation> curve;
    try {
      curve.emplace(std::move(a));
    } catch (const Error& e) {
      detail::corpus_error(line_no, "a1..a6", e.what());
    }
    if (!labels.insert(label).second)
      throw Error(errc::duplicate_label,
                  "line " + std::to_string(line_no) + ": duplicate label '" + label + "'");
    records.push_back({label, conductor, static_cast<std::uint32_t>(rank), std::move(*curve), {}});
  }
  return records;
}

/// Reads a corpus file; paths ending in ".gz" are decompressed transparently.
inline std::vector<IsogenyClassRecord> load_corpus(const std::filesystem::path& path) {
  if (path.extension() == ".gz") {
    gzFile gz = gzopen(path.string().c_str(), "rb");
    if (!gz) throw Error(errc::io, "cannot open corpus " + path.string());
    std::string text;
    char buf[1 << 16];
    int n = 0;
    while ((n = gzread(gz, buf, sizeof buf)) > 0) text.append(buf, static_cast<std::size_t>(n));
    const bool failed = n < 0;
    gzclose(gz);
    if (failed) throw Error(errc::io, "corrupt gzip stream in " + path.string());
    std::istringstream in(std::move(text));
    return parse_corpus(in);
  }
  std::ifstream in(path);
  if (!in) throw Error(errc::io, "cannot open corpus " + path.string());
  return parse_corpus(in);
}

/// S(parity, I): classes with conductor in I and rank = parity mod 2.
struct DatasetSelection {
  int parity = 0;
  ConductorInterval interval;
  std::vector<IsogenyClassRecord> members;
};

inline DatasetSelection select(const std::vector<IsogenyClassRecord>& records, int parity,
                               const ConductorInterval& interval) {
  if (parity != 0 && parity != 1)
    throw Error(errc::precondition, "parity must be 0 or 1");
  if (interval.lo >= interval.hi) throw Error(errc::precondition, "empty interval " + interval.to_string());
  DatasetSelection s{parity, interval, {}};
  for (const auto& r : records)
    if (interval.contains(r.conductor) && r.parity() == parity) s.members.push_back(r);
  return s;
}

struct RankSample {
  std::vector<IsogenyClassRecord> members;
  std::vector<int> labels;          // rank of each member
  std::vector<std::size_t> counts;  // members drawn per requested rank
};

/// Up to `per_class` classes of each rank in `ranks` with conductor in
/// `interval`, drawn uniformly without replacement by a seeded shuffle.
/// Members of one rank keep corpus order.
inline RankSample sample_by_rank(const std::vector<IsogenyClassRecord>& records, std::span<const int> ranks,
                                 std::size_t per_class, const ConductorInterval& interval,
                                 std::uint64_t seed) {
  Rng rng(seed);
  RankSample out;
  for (int rank : ranks) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < records.size(); ++i)
      if (interval.contains(records[i].conductor) && static_cast<int>(records[i].rank) == rank)
        idx.push_back(i);
    shuffle(idx, rng);
    if (idx.size() > per_class) idx.resize(per_class);
    std::sort(idx.begin(), idx.end());
    for (auto i : idx) {
      out.members.push_back(records[i]);
      out.labels.push_back(rank);
    }
    out.counts.push_back(idx.size());
  }
  return out;
}

/// a_p values for a list of records: one row per record, one column per prime.
struct ApMatrix {
  std::vector<std::string> labels;
  std::vector<std::uint32_t> primes;
  Matrix<std::int32_t> values;
};

inline ApMatrix materialize_ap(const std::vector<IsogenyClassRecord>& members,
                               const PrimeTables& tables, unsigned threads = 0) {
  if (members.empty()) throw Error(errc::empty_dataset, "empty dataset");
  ApMatrix m{{}, tables.primes(), Matrix<std::int32_t>(members.size(), tables.size())};
  m.labels.reserve(members.size());
  for (const auto& r : members) m.labels.push_back(r.label);
  parallel_for(members.size(), threads,
               [&](std::size_t i) { ap_values(members[i].curve, tables, m.values.row(i)); });
  return m;
}

inline ApMatrix materialize_ap(const std::vector<IsogenyClassRecord>& members,
                               std::uint64_t prime_limit, unsigned threads = 0) {
  if (members.empty()) throw Error(errc::empty_dataset, "empty dataset");
  return materialize_ap(members, PrimeTables(prime_limit, threads), threads);
}

inline ApMatrix materialize_ap(const DatasetSelection& selection, std::uint64_t prime_limit,
                               unsigned threads = 0) {
  return materialize_ap(selection.members, prime_limit, threads);
}

/// Fills record.ap for every record.
inline void attach_ap(std::vector<IsogenyClassRecord>& records, const PrimeTables& tables,
                      unsigned threads = 0) {
  parallel_for(records.size(), threads, [&](std::size_t i) {
    records[i].ap = ap_vector(records[i].curve, tables, records[i].label);
  });
}

/// Primes among `primes` where the equation has bad reduction but which do not
/// divide the labeled conductor. Empty when the record is consistent.
inline std::vector<std::uint32_t> conductor_violations(const IsogenyClassRecord& record,
                                                       std::span<const std::uint32_t> primes) {
  std::vector<std::uint32_t> bad;
  for (std::uint32_t p : primes)
    if (record.curve.discriminant_mod(p) == 0 && record.conductor % p != 0) bad.push_back(p);
  return bad;
}

/// CSV with header `label,p_2,p_3,...`.
inline void write_ap_matrix_csv(std::ostream& out, const ApMatrix& m) {
  out << "label";
  for (auto p : m.primes) out << ",p_" << p;
  out << '\n';
  for (std::size_t i = 0; i < m.values.rows(); ++i) {
    out << m.labels[i];
    for (auto v : m.values.row(i)) out << ',' << v;
    out << '\n';
  }
}

}  // namespace murmur
