#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polis/error.hpp"
#include "polis/ingest.hpp"
#include "polis/io.hpp"
#include "polis/lexicon.hpp"
#include "polis/textpipe.hpp"

namespace polis {

enum class Denominator { full, pii };

// Per-term yearly counts c(y) and relative frequencies f(y) = c(y) / D(y).
struct TermFrequencySeries {
  std::string term;
  std::vector<int> years;  // ascending
  std::vector<std::uint64_t> counts;
  std::vector<double> freqs;
  Denominator denominator = Denominator::full;

  std::size_t size() const { return years.size(); }
};

// One series per lexicon term seen in any year; every store year is present
// in every series, zero counts included.
inline std::vector<TermFrequencySeries> build_frequency_series(const CorpusStore& store, const Lexicon& lexicon,
                                                               Denominator denominator = Denominator::full,
                                                               MatchMode match = MatchMode::single_token) {
  const auto years = store.years();
  if (years.empty()) throw DataError("no years available for frequency series");
  std::map<std::string, std::vector<std::uint64_t>> counts;
  std::vector<std::uint64_t> denom(years.size(), 0);
  for (std::size_t yi = 0; yi < years.size(); ++yi) {
    const auto& yc = store.at(years[yi]);
    std::uint64_t matched = 0;
    for (const auto& doc : yc.docs) {
      auto occ = match_lexicon(doc.tokens, lexicon, match);
      matched += occ.total;
      for (const auto& [term, c] : occ.counts) {
        auto& row = counts[term];
        if (row.empty()) row.assign(years.size(), 0);
        row[yi] += c;
      }
    }
    denom[yi] = denominator == Denominator::full ? yc.token_count : matched;
  }
  std::vector<TermFrequencySeries> out;
  for (auto& [term, row] : counts) {
    TermFrequencySeries s{term, years, std::move(row), {}, denominator};
    s.freqs.resize(years.size());
    for (std::size_t i = 0; i < years.size(); ++i)
      s.freqs[i] = s.counts[i] == 0 ? 0.0 : static_cast<double>(s.counts[i]) / static_cast<double>(denom[i]);
    out.push_back(std::move(s));
  }
  return out;
}

enum class TurbulenceKind { rising, falling, stable, emergent };

inline const char* to_string(TurbulenceKind k) {
  switch (k) {
    case TurbulenceKind::rising: return "rising";
    case TurbulenceKind::falling: return "falling";
    case TurbulenceKind::stable: return "stable";
    case TurbulenceKind::emergent: return "emergent";
  }
  return "?";
}

enum class StabilityRule { endpoints, spread };

struct TurbulenceParams {
  int window_years = 7;
  double factor = 10.0;
  double drop = 0.15;
  int span_years = 20;
  double tolerance = 0.02;
  std::uint64_t min_support = 100;
  std::uint64_t min_count_emerge = 20;
  StabilityRule stability = StabilityRule::endpoints;
};

struct TurbulenceLabel {
  std::string term;
  TurbulenceKind kind = TurbulenceKind::rising;
  std::vector<int> window_years;      // evidence window
  std::vector<double> window_freqs;   // f over the window
  std::vector<std::uint64_t> window_counts;
  std::string params;

  int start_year() const { return window_years.front(); }
  int end_year() const { return window_years.back(); }
  double f_start() const { return window_freqs.front(); }
  double f_end() const { return window_freqs.back(); }
};

namespace turbulence_detail {

inline TurbulenceLabel make_label(const TermFrequencySeries& s, TurbulenceKind kind, std::size_t from,
                                  std::size_t to, std::string params) {
  TurbulenceLabel label{s.term, kind, {}, {}, {}, std::move(params)};
  for (std::size_t i = from; i <= to; ++i) {
    label.window_years.push_back(s.years[i]);
    label.window_freqs.push_back(s.freqs[i]);
    label.window_counts.push_back(s.counts[i]);
  }
  return label;
}

inline std::string fmt(double v) { return io::format_double(v); }

}  // namespace turbulence_detail

// Rise by more than `factor` within `window_years`, from a nonzero baseline.
// Evidence is the pair (a, b) only: earliest a, then earliest b.
inline std::optional<TurbulenceLabel> classify_rising(const TermFrequencySeries& s, int window_years = 7,
                                                      double factor = 10.0, std::uint64_t min_support = 100) {
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (!(s.freqs[a] > 0.0)) continue;
    for (std::size_t b = a + 1; b < s.size() && s.years[b] - s.years[a] <= window_years; ++b) {
      if (s.freqs[b] > factor * s.freqs[a] && s.counts[b] >= min_support) {
        auto label = turbulence_detail::make_label(
            s, TurbulenceKind::rising, a, a,
            "window_years=" + std::to_string(window_years) + ";factor=" + turbulence_detail::fmt(factor) +
                ";min_support=" + std::to_string(min_support));
        label.window_years.push_back(s.years[b]);
        label.window_freqs.push_back(s.freqs[b]);
        label.window_counts.push_back(s.counts[b]);
        return label;
      }
    }
  }
  return std::nullopt;
}

// Fall of more than `drop` (fraction) between consecutive years.
inline std::optional<TurbulenceLabel> classify_falling(const TermFrequencySeries& s, double drop = 0.15,
                                                       std::uint64_t min_support = 100) {
  for (std::size_t y = 0; y + 1 < s.size(); ++y) {
    if (s.years[y + 1] != s.years[y] + 1) continue;
    if (s.freqs[y] > 0.0 && s.counts[y] >= min_support && s.freqs[y + 1] < (1.0 - drop) * s.freqs[y]) {
      return turbulence_detail::make_label(
          s, TurbulenceKind::falling, y, y + 1,
          "drop=" + turbulence_detail::fmt(drop) + ";min_support=" + std::to_string(min_support));
    }
  }
  return std::nullopt;
}

// Relative change below `tolerance` across the whole series, which must span
// at least `span_years`. The endpoint rule compares first and last year; the
// spread rule compares max and min over the span.
inline std::optional<TurbulenceLabel> classify_stable(const TermFrequencySeries& s, int span_years = 20,
                                                      double tolerance = 0.02,
                                                      StabilityRule rule = StabilityRule::endpoints) {
  if (s.size() < 2 || s.years.back() - s.years.front() < span_years) return std::nullopt;
  const double first = s.freqs.front(), last = s.freqs.back();
  if (!(first > 0.0) || !(last > 0.0)) return std::nullopt;
  std::string params = "span_years=" + std::to_string(span_years) +
                       ";tolerance=" + turbulence_detail::fmt(tolerance) +
                       (rule == StabilityRule::endpoints ? ";rule=endpoints" : ";rule=spread");
  if (rule == StabilityRule::endpoints) {
    if (std::abs(last - first) / first < tolerance)
      return turbulence_detail::make_label(s, TurbulenceKind::stable, 0, s.size() - 1, std::move(params));
    return std::nullopt;
  }
  const auto [lo, hi] = std::minmax_element(s.freqs.begin(), s.freqs.end());
  if (*lo > 0.0 && (*hi - *lo) / *lo < tolerance)
    return turbulence_detail::make_label(s, TurbulenceKind::stable, 0, s.size() - 1, std::move(params));
  return std::nullopt;
}

// At least `min_count` occurrences in a year after a zero-count year.
inline std::optional<TurbulenceLabel> classify_emergent(const TermFrequencySeries& s, std::uint64_t min_count = 20) {
  for (std::size_t y = 1; y < s.size(); ++y) {
    if (s.years[y] != s.years[y - 1] + 1) continue;
    if (s.counts[y - 1] == 0 && s.counts[y] >= min_count)
      return turbulence_detail::make_label(s, TurbulenceKind::emergent, y - 1, y,
                                           "min_count=" + std::to_string(min_count));
  }
  return std::nullopt;
}

// Re-checks a label's defining inequality from its stored evidence alone.
inline bool evidence_holds(const TurbulenceLabel& l, const TurbulenceParams& p) {
  if (l.window_years.size() < 2) return false;
  const auto& f = l.window_freqs;
  const auto& c = l.window_counts;
  switch (l.kind) {
    case TurbulenceKind::rising:
      return l.window_years.size() == 2 && f[0] > 0.0 && l.end_year() - l.start_year() <= p.window_years &&
             l.end_year() > l.start_year() && f[1] > p.factor * f[0] && f[1] / f[0] > p.factor &&
             c[1] >= p.min_support;
    case TurbulenceKind::falling:
      return l.window_years.size() == 2 && l.end_year() == l.start_year() + 1 && f[0] > 0.0 &&
             c[0] >= p.min_support && f[1] < (1.0 - p.drop) * f[0];
    case TurbulenceKind::stable: {
      if (l.end_year() - l.start_year() < p.span_years || !(f.front() > 0.0) || !(f.back() > 0.0)) return false;
      if (p.stability == StabilityRule::endpoints) return std::abs(f.back() - f.front()) / f.front() < p.tolerance;
      const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
      return *lo > 0.0 && (*hi - *lo) / *lo < p.tolerance;
    }
    case TurbulenceKind::emergent:
      return l.window_years.size() == 2 && l.end_year() == l.start_year() + 1 && c[0] == 0 &&
             c[1] >= p.min_count_emerge;
  }
  return false;
}

// Every label each series earns; a term may carry several.
inline std::vector<TurbulenceLabel> classify_all(std::span<const TermFrequencySeries> series,
                                                 const TurbulenceParams& p,
                                                 std::span<const TurbulenceKind> kinds) {
  std::vector<TurbulenceLabel> out;
  for (const auto& s : series) {
    for (auto kind : kinds) {
      std::optional<TurbulenceLabel> label;
      switch (kind) {
        case TurbulenceKind::rising: label = classify_rising(s, p.window_years, p.factor, p.min_support); break;
        case TurbulenceKind::falling: label = classify_falling(s, p.drop, p.min_support); break;
        case TurbulenceKind::stable: label = classify_stable(s, p.span_years, p.tolerance, p.stability); break;
        case TurbulenceKind::emergent: label = classify_emergent(s, p.min_count_emerge); break;
      }
      if (label) out.push_back(std::move(*label));
    }
  }
  return out;
}

struct SeriesSelection {
  std::vector<TermFrequencySeries> series;  // in request order
  std::vector<std::string> missing;
};

inline SeriesSelection select_series(std::span<const TermFrequencySeries> all, std::span<const std::string> terms) {
  SeriesSelection sel;
  for (const auto& raw : terms) {
    const auto term = normalize_term(raw);
    auto it = std::find_if(all.begin(), all.end(), [&](const auto& s) { return s.term == term; });
    if (it == all.end()) sel.missing.push_back(term);
    else sel.series.push_back(*it);
  }
  return sel;
}

inline std::string series_csv(std::span<const TermFrequencySeries> series) {
  std::string out = "term,year,count,frequency\n";
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.size(); ++i)
      out += io::csv_escape(s.term) + ',' + std::to_string(s.years[i]) + ',' + std::to_string(s.counts[i]) + ',' +
             io::format_double(s.freqs[i]) + '\n';
  return out;
}

inline std::string labels_csv(std::span<const TurbulenceLabel> labels) {
  std::string out = "term,label,evidence_start_year,evidence_end_year,f_start,f_end,params\n";
  for (const auto& l : labels)
    out += io::csv_escape(l.term) + ',' + to_string(l.kind) + ',' + std::to_string(l.start_year()) + ',' +
           std::to_string(l.end_year()) + ',' + io::format_double(l.f_start()) + ',' +
           io::format_double(l.f_end()) + ',' + io::csv_escape(l.params) + '\n';
  return out;
}

}  // namespace polis
