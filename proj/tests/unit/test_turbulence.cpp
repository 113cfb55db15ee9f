#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace polis;

namespace {

// Series over consecutive years starting at `first`.
TermFrequencySeries series(int first, std::vector<double> f, std::vector<std::uint64_t> c = {}) {
  TermFrequencySeries s;
  s.term = "t";
  for (std::size_t i = 0; i < f.size(); ++i) s.years.push_back(first + static_cast<int>(i));
  if (c.empty()) c.assign(f.size(), 1000);
  s.counts = std::move(c);
  s.freqs = std::move(f);
  return s;
}

// Two-point series (a, b) with the years in between at frequency `mid`.
TermFrequencySeries endpoints(int ya, double fa, int yb, double fb, double mid = 0.0) {
  std::vector<double> f(static_cast<std::size_t>(yb - ya + 1), mid);
  f.front() = fa;
  f.back() = fb;
  return series(ya, f);
}

}  // namespace

TEST(Frequency, DirectRatio) {
  std::vector<std::string> toks(95, "word");
  for (int i = 0; i < 5; ++i) toks.push_back("cookies");
  auto store = CorpusStore::from_documents({{2010, {{"d", toks}}}});
  auto s = build_frequency_series(store, Lexicon::from_entries({"cookies", "beacons"}));
  ASSERT_EQ(s.size(), 1u);  // beacons never appears
  EXPECT_EQ(s[0].term, "cookies");
  EXPECT_DOUBLE_EQ(s[0].freqs[0], 0.05);
}

TEST(Frequency, PiiDenominator) {
  auto store = CorpusStore::from_documents({{2010, {{"d", {"cookies", "beacons", "beacons", "other"}}}}});
  auto s = build_frequency_series(store, Lexicon::from_entries({"cookies", "beacons"}), Denominator::pii);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s[0].freqs[0], 2.0 / 3.0);  // beacons
  EXPECT_DOUBLE_EQ(s[1].freqs[0], 1.0 / 3.0);
}

TEST(Frequency, SelectionReportsMissingTerms) {
  auto store = CorpusStore::from_documents({{2010, {{"d", {"cookies"}}}}});
  auto all = build_frequency_series(store, Lexicon::from_entries({"cookies"}));
  auto sel = select_series(all, std::vector<std::string>{"nonexistent"});
  EXPECT_TRUE(sel.series.empty());
  EXPECT_EQ(sel.missing, std::vector<std::string>{"nonexistent"});
}

TEST(Rising, TwelveFoldInSixYears) {
  auto label = classify_rising(endpoints(2010, 0.001, 2016, 0.012, 0.002));
  ASSERT_TRUE(label);
  EXPECT_EQ(label->start_year(), 2010);
  EXPECT_EQ(label->end_year(), 2016);
}

TEST(Rising, ZeroBaselineIsNotRising) {
  EXPECT_FALSE(classify_rising(endpoints(2010, 0.0, 2016, 0.012)));
}

TEST(Rising, GapBeyondWindow) { EXPECT_FALSE(classify_rising(endpoints(2008, 0.001, 2016, 0.011))); }

TEST(Rising, SupportFloorOnLaterYear) {
  auto s = endpoints(2010, 0.001, 2016, 0.012);
  s.counts.back() = 99;
  EXPECT_FALSE(classify_rising(s));
  EXPECT_TRUE(classify_rising(s, 7, 10.0, 99));
}

TEST(Falling, TwentyPercentDrop) {
  auto label = classify_falling(series(2010, {0.010, 0.008}));
  ASSERT_TRUE(label);
  EXPECT_EQ(label->start_year(), 2010);
}

TEST(Falling, FourteenPercentIsNotEnough) { EXPECT_FALSE(classify_falling(series(2010, {0.010, 0.0086}))); }

TEST(Falling, SupportFloor) { EXPECT_FALSE(classify_falling(series(2010, {0.010, 0.001}, {3, 1}), 0.15, 100)); }

TEST(Stable, OnePercentOverTwentyYears) {
  EXPECT_TRUE(classify_stable(endpoints(1999, 0.0100, 2019, 0.0101, 0.02)));
}

TEST(Stable, ThreePercentIsNotStable) { EXPECT_FALSE(classify_stable(endpoints(1999, 0.0100, 2019, 0.0103))); }

TEST(Stable, ShortSpanNotEligible) { EXPECT_FALSE(classify_stable(endpoints(2005, 0.0100, 2019, 0.0100, 0.01))); }

TEST(Stable, SpreadRuleLooksInsideTheSpan) {
  auto s = endpoints(1999, 0.0100, 2019, 0.0101, 0.02);
  EXPECT_FALSE(classify_stable(s, 20, 0.02, StabilityRule::spread));
  EXPECT_TRUE(classify_stable(endpoints(1999, 0.0100, 2019, 0.0101, 0.01005), 20, 0.02, StabilityRule::spread));
}

TEST(Emergent, TwentyAfterZero) {
  auto label = classify_emergent(series(2015, {0.0, 0.01}, {0, 20}));
  ASSERT_TRUE(label);
  EXPECT_EQ(label->end_year(), 2016);
}

TEST(Emergent, NineteenIsNotEnough) { EXPECT_FALSE(classify_emergent(series(2015, {0.0, 0.01}, {0, 19}))); }

TEST(Emergent, NonzeroPriorYear) { EXPECT_FALSE(classify_emergent(series(2015, {0.0001, 0.5}, {1, 500}))); }

TEST(Labels, CsvShape) {
  std::vector<TermFrequencySeries> all = {series(2015, {0.0, 0.01}, {0, 20})};
  const std::vector<TurbulenceKind> kinds = {TurbulenceKind::emergent};
  auto labels = classify_all(all, {}, kinds);
  EXPECT_EQ(labels_csv(labels),
            "term,label,evidence_start_year,evidence_end_year,f_start,f_end,params\n"
            "t,emergent,2015,2016,0,0.01,min_count=20\n");
}

// Independent restatement of each rule over the whole series: true when some
// evidence exists.
namespace {

bool any_rising(const TermFrequencySeries& s, const TurbulenceParams& p) {
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      if (s.freqs[a] > 0 && s.years[b] - s.years[a] <= p.window_years && s.freqs[b] / s.freqs[a] > p.factor &&
          s.counts[b] >= p.min_support)
        return true;
  return false;
}

bool any_falling(const TermFrequencySeries& s, const TurbulenceParams& p) {
  for (std::size_t y = 0; y + 1 < s.size(); ++y)
    if (s.years[y + 1] == s.years[y] + 1 && s.freqs[y] > 0 && s.counts[y] >= p.min_support &&
        (s.freqs[y] - s.freqs[y + 1]) / s.freqs[y] > p.drop)
      return true;
  return false;
}

bool any_emergent(const TermFrequencySeries& s, const TurbulenceParams& p) {
  for (std::size_t y = 1; y < s.size(); ++y)
    if (s.years[y] == s.years[y - 1] + 1 && s.counts[y - 1] == 0 && s.counts[y] >= p.min_count_emerge) return true;
  return false;
}

}  // namespace

TEST(TurbulenceProperty, LabelsMatchRestatedRules) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> len(1, 26), zero(0, 4), start(1990, 2000);
  std::lognormal_distribution<double> level(-5.0, 1.5);
  std::uniform_int_distribution<std::uint64_t> count(1, 400);
  const std::vector<TurbulenceKind> kinds = {TurbulenceKind::rising, TurbulenceKind::falling, TurbulenceKind::stable,
                                             TurbulenceKind::emergent};
  for (int trial = 0; trial < 1000; ++trial) {
    TermFrequencySeries s;
    s.term = "t" + std::to_string(trial);
    int year = start(rng);
    for (int i = len(rng); i > 0; --i) {
      s.years.push_back(year);
      year += zero(rng) == 0 ? 2 : 1;  // occasional gap year
      const bool absent = zero(rng) == 0;
      s.counts.push_back(absent ? 0 : count(rng));
      s.freqs.push_back(absent ? 0.0 : level(rng));
    }
    TurbulenceParams p;
    p.min_support = trial % 3 == 0 ? 100 : 1;
    p.stability = trial % 2 ? StabilityRule::spread : StabilityRule::endpoints;
    if (trial % 5 == 0) p.span_years = 5, p.tolerance = 0.5;
    std::vector<TermFrequencySeries> one = {s};
    auto labels = classify_all(one, p, kinds);
    bool seen[4] = {false, false, false, false};
    for (const auto& l : labels) {
      seen[static_cast<int>(l.kind)] = true;
      ASSERT_TRUE(evidence_holds(l, p)) << s.term << ' ' << to_string(l.kind);
      // Evidence must be copied from the series, not invented.
      for (std::size_t i = 0; i < l.window_years.size(); ++i) {
        auto it = std::find(s.years.begin(), s.years.end(), l.window_years[i]);
        ASSERT_NE(it, s.years.end());
        const auto k = static_cast<std::size_t>(it - s.years.begin());
        EXPECT_EQ(l.window_freqs[i], s.freqs[k]);
        EXPECT_EQ(l.window_counts[i], s.counts[k]);
      }
    }
    EXPECT_EQ(seen[0], any_rising(s, p)) << s.term;
    EXPECT_EQ(seen[1], any_falling(s, p)) << s.term;
    EXPECT_EQ(seen[3], any_emergent(s, p)) << s.term;
  }
}

TEST(TurbulenceProperty, TamperedEvidenceIsRejected) {
  TurbulenceParams p;
  auto label = *classify_rising(endpoints(2010, 0.001, 2016, 0.012));
  label.window_freqs.back() = 0.009;
  EXPECT_FALSE(evidence_holds(label, p));
  auto fall = *classify_falling(series(2010, {0.010, 0.008}));
  fall.window_freqs.back() = 0.009;
  EXPECT_FALSE(evidence_holds(fall, p));
}
