#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"

using namespace polis;

namespace {

std::vector<CleanedDocument> docs_of(std::initializer_list<std::vector<std::string>> tokens) {
  std::vector<CleanedDocument> out;
  for (const auto& t : tokens) out.push_back({"d" + std::to_string(out.size() + 1), t});
  return out;
}

oracle::Matrix dense(const BipartiteCountGraph& g) {
  oracle::Matrix a(g.words.size(), std::vector<double>(g.docs.size(), 0.0));
  for (const auto& e : g.entries) a[e.word][e.doc] = static_cast<double>(e.count);
  return a;
}

std::vector<std::uint32_t> random_labels(std::mt19937_64& rng, std::size_t n, std::uint32_t k) {
  std::uniform_int_distribution<std::uint32_t> pick(0, k - 1);
  std::vector<std::uint32_t> out(n);
  for (auto& x : out) x = pick(rng);
  return out;
}

}  // namespace

TEST(Bipartite, DirectCounting) {
  auto g = build_bipartite(docs_of({{"a", "a", "b"}, {"b"}}));
  ASSERT_EQ(g.words, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(g.total, 4u);
  auto a = dense(g);
  EXPECT_EQ(a[0][0], 2);
  EXPECT_EQ(a[1][0], 1);
  EXPECT_EQ(a[1][1], 1);
  EXPECT_EQ(a[0][1], 0);
}

TEST(Bipartite, LexiconVocabularyAndEmptyDocs) {
  auto lex = Lexicon::from_entries({"cookies", "address"});
  auto g = build_bipartite(docs_of({{"we", "use", "cookies"}, {"hello"}}), {Vocabulary::lexicon, &lex});
  EXPECT_EQ(g.words, std::vector<std::string>{"cookies"});
  EXPECT_EQ(g.docs.size(), 2u);
  EXPECT_EQ(g.empty_docs, std::vector<std::uint32_t>{1});
}

TEST(Bipartite, EmptyCorpusIsAnError) { EXPECT_THROW(build_bipartite(std::vector<CleanedDocument>{}), DataError); }

TEST(DescriptionLength, OneBlockCollapse) {
  auto g = build_bipartite(docs_of({{"a", "a", "b"}, {"b", "c"}, {"c", "c", "c", "a"}}));
  const double e = static_cast<double>(g.total), nw = 3, nd = 3;
  double lnfact = 0;
  for (const auto& x : g.entries) lnfact += std::lgamma(static_cast<double>(x.count) + 1);
  const double expected = e - e * std::log(e / (nw * nd)) + lnfact + 0.5 * std::log(e);
  auto st = make_state(g, {0, 0, 0}, {0, 0, 0});
  EXPECT_NEAR(st.dl_nats, expected, 1e-9);
}

TEST(DescriptionLength, MatchesDenseOracle) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> count(0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    BipartiteCountGraph g;
    const std::size_t nw = 2 + trial % 6, nd = 2 + trial % 5;
    for (std::size_t w = 0; w < nw; ++w) g.words.push_back("w" + std::to_string(w));
    for (std::size_t d = 0; d < nd; ++d) g.docs.push_back("d" + std::to_string(d));
    for (std::uint32_t w = 0; w < nw; ++w)
      for (std::uint32_t d = 0; d < nd; ++d)
        if (int c = count(rng); c > 1) {
          g.entries.push_back({w, d, static_cast<std::uint64_t>(c)});
          g.total += static_cast<std::uint64_t>(c);
        }
    if (g.total == 0) continue;
    auto wb = random_labels(rng, nw, 3), db = random_labels(rng, nd, 3);
    auto st = make_state(g, wb, db);
    const double expect = oracle::bipartite_dl(dense(g), st.word_block, st.doc_block);
    EXPECT_NEAR(st.dl_nats, expect, 1e-9 * std::abs(expect));
  }
}

TEST(DescriptionLength, PlantedBeatsShuffled) {
  auto p = fixtures::planted_bipartite(2, 4, 3, 5, 0);
  const double planted = make_state(p.graph, p.word_group, p.doc_group).dl_nats;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto wb = p.word_group, db = p.doc_group;
    std::shuffle(wb.begin(), wb.end(), rng);
    std::shuffle(db.begin(), db.end(), rng);
    if (wb == p.word_group && db == p.doc_group) continue;
    EXPECT_LT(planted, make_state(p.graph, wb, db).dl_nats);
  }
}

TEST(DescriptionLength, MergingIdenticalProfilesNeverIncreasesLikelihood) {
  // 4 words, two of which (w0, w1) have identical document profiles.
  BipartiteCountGraph g;
  g.words = {"w0", "w1", "w2", "w3"};
  g.docs = {"d0", "d1", "d2"};
  const std::uint64_t a[4][3] = {{3, 1, 0}, {3, 1, 0}, {0, 2, 5}, {1, 0, 4}};
  for (std::uint32_t w = 0; w < 4; ++w)
    for (std::uint32_t d = 0; d < 3; ++d)
      if (a[w][d]) g.entries.push_back({w, d, a[w][d]}), g.total += a[w][d];
  auto likelihood = [&](const SBMState& st) {
    const double code = 4 * std::log(static_cast<double>(st.word_blocks)) + 3 * std::log(static_cast<double>(st.doc_blocks)) +
                        static_cast<double>(st.word_blocks * st.doc_blocks) / 2 * std::log(static_cast<double>(g.total));
    return st.dl_nats - code;
  };
  // Every partition in which w0 and w1 are singleton blocks, against every
  // doc partition: merging the two singletons leaves the likelihood term no worse.
  std::size_t checked = 0;
  oracle::for_each_partition(4, [&](const std::vector<std::uint32_t>& wb) {
    if (std::count(wb.begin(), wb.end(), wb[0]) != 1 || std::count(wb.begin(), wb.end(), wb[1]) != 1) return;
    oracle::for_each_partition(3, [&](const std::vector<std::uint32_t>& db) {
      auto merged = wb;
      merged[1] = wb[0];
      EXPECT_LE(likelihood(make_state(g, merged, db)), likelihood(make_state(g, wb, db)) + 1e-9);
      ++checked;
    });
  });
  EXPECT_EQ(checked, 2u * 5u);
}

TEST(DescriptionLength, EmptyGraphIsAnError) {
  BipartiteCountGraph g;
  g.words = {"a"};
  g.docs = {"d"};
  EXPECT_THROW(fit_sbm(g), DomainError);
}

TEST(Fit, PlantedThreeByThreeIsExhaustiveOptimum) {
  auto p = fixtures::planted_bipartite(3, 4, 3, 6, 0);
  const auto a = p.counts;
  // With documents at the planted partition, no word partition beats the planted one.
  const double planted = oracle::bipartite_dl(a, p.word_group, p.doc_group);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::uint32_t> best_wb;
  oracle::for_each_partition(12, [&](const std::vector<std::uint32_t>& wb) {
    const double dl = oracle::bipartite_dl(a, wb, p.doc_group);
    if (dl < best - 1e-9) best = dl, best_wb = wb;
  });
  EXPECT_NEAR(best, planted, 1e-9);
  EXPECT_DOUBLE_EQ(oracle::nmi(best_wb, p.word_group), 1.0);

  auto st = fit_sbm(p.graph, {42});
  EXPECT_DOUBLE_EQ(oracle::nmi(st.word_block, p.word_group), 1.0);
  EXPECT_DOUBLE_EQ(oracle::nmi(st.doc_block, p.doc_group), 1.0);
  EXPECT_NEAR(st.dl_nats, planted, 1e-9 * planted);
}

TEST(Fit, IdenticalProfilesGiveOneWordBlock) {
  BipartiteCountGraph g;
  g.words = {"a", "b", "c"};
  g.docs = {"d0", "d1"};
  for (std::uint32_t w = 0; w < 3; ++w) {
    g.entries.push_back({w, 0, 2});
    g.entries.push_back({w, 1, 3});
    g.total += 5;
  }
  const double one = make_state(g, {0, 0, 0}, {0, 0}).dl_nats;
  const double two = make_state(g, {0, 0, 1}, {0, 0}).dl_nats;
  EXPECT_LT(one, two);
  EXPECT_EQ(fit_sbm(g).word_blocks, 1u);
}

TEST(Fit, SeedDeterminism) {
  auto p = fixtures::planted_bipartite(3, 5, 4, 2, 1);
  auto a = fit_sbm(p.graph, {9}), b = fit_sbm(p.graph, {9});
  EXPECT_EQ(a.word_block, b.word_block);
  EXPECT_EQ(a.doc_block, b.doc_block);
  EXPECT_EQ(a.dl_nats, b.dl_nats);
}

TEST(Fit, TraceMonotoneAndIncrementalMatchesScratch) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> count(0, 3);
  for (int trial = 0; trial < 20; ++trial) {
    BipartiteCountGraph g;
    for (int w = 0; w < 15; ++w) g.words.push_back("w" + std::to_string(w));
    for (int d = 0; d < 10; ++d) g.docs.push_back("d" + std::to_string(d));
    for (std::uint32_t w = 0; w < 15; ++w)
      for (std::uint32_t d = 0; d < 10; ++d)
        if (int c = count(rng) * ((w / 5 == d / 4) ? 3 : 1); c > 1) {
          g.entries.push_back({w, d, static_cast<std::uint64_t>(c)});
          g.total += static_cast<std::uint64_t>(c);
        }
    auto st = fit_sbm(g, {static_cast<std::uint64_t>(trial), 0, true, true});
    ASSERT_FALSE(st.dl_trace.empty());
    for (std::size_t i = 1; i < st.dl_trace.size(); ++i) EXPECT_LE(st.dl_trace[i], st.dl_trace[i - 1] + 1e-9);
    EXPECT_LE(st.max_step_discrepancy, 1e-6);
    EXPECT_NEAR(st.dl_trace.back(), st.dl_nats, 1e-6 * st.dl_nats);
  }
}

TEST(Topics, WeightsAndOmission) {
  BipartiteCountGraph g;
  g.words = {"analyze", "movements", "preferences", "tiny"};
  g.docs = {"d0"};
  const std::uint64_t counts[] = {2520, 380, 7100, 5};
  for (std::uint32_t w = 0; w < 4; ++w) g.entries.push_back({w, 0, counts[w]}), g.total += counts[w];
  auto st = make_state(g, {0, 0, 0, 0}, {0});
  auto topics = extract_topics(st, g);
  ASSERT_EQ(topics.size(), 1u);
  double sum = 0;
  for (const auto& w : topics[0].words) sum += w.weight;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_EQ(topics_text(topics), "preferences-analyze-movements: preferences (0.71), analyze (0.252), movements (0.038)\n");
  auto json = nlohmann::json::parse(topics_json(topics));
  EXPECT_EQ(json[0]["words"].size(), 3u);  // "tiny" (0.0005) omitted
}

TEST(Topics, SingleWordBlockReportsOnePointZero) {
  BipartiteCountGraph g;
  g.words = {"address", "cookies"};
  g.docs = {"d0", "d1"};
  g.entries = {{0, 0, 3}, {1, 1, 4}};
  g.total = 7;
  auto topics = extract_topics(make_state(g, {0, 1}, {0, 1}), g);
  EXPECT_EQ(topics_text(topics), "cookies: cookies (1.0)\naddress: address (1.0)\n");
  EXPECT_EQ(format_weight(0.2414), "0.241");
  EXPECT_EQ(format_weight(0.5), "0.5");
}

TEST(Prevalence, DirectRatio) {
  std::vector<Topic> topics(2);
  topics[0].words = {{"cookies", 1.0}};
  topics[1].words = {{"address", 0.5}, {"email", 0.5}};
  auto s = topic_prevalence(topics, 2019, {{"cookies", 3}, {"address", 1}});
  EXPECT_DOUBLE_EQ(s.share[0], 0.75);
  EXPECT_DOUBLE_EQ(s.share[1], 0.25);
  auto none = topic_prevalence(topics, 2019, {{"other", 4}});
  EXPECT_TRUE(none.no_vocabulary_tokens);
  EXPECT_EQ(none.share, (std::vector<double>{0.0, 0.0}));
  auto partial = topic_prevalence(topics, 2019, {{"cookies", 3}});
  EXPECT_EQ(partial.share[1], 0.0);
}

TEST(Complexity, UnitConversionsAndFactors) {
  EXPECT_NEAR(nats_to_bits(1.0), 1.4426950408889, 1e-10);
  EXPECT_EQ(nats_to_bits(0.0), 0.0);
  EXPECT_NEAR(nats_to_bits(std::numbers::ln2), 1.0, 1e-15);
  EXPECT_THROW(nats_to_bits(-1.0), DomainError);
  EXPECT_DOUBLE_EQ(text_description_length(1, 2), 1.0);
  EXPECT_NEAR(text_description_length(4743, 1148), 48212.15, 0.5);
  EXPECT_THROW(text_description_length(10, 1), DomainError);
  EXPECT_DOUBLE_EQ(compression_factor(5.0, 5.0), 1.0);
  EXPECT_THROW(compression_factor(1.0, 0.0), DomainError);
}

TEST(Sampling, ShortYearAndDeterminism) {
  auto s = sample_policies(9, 2800, 42, 1997);
  EXPECT_EQ(s.indices.size(), 9u);
  EXPECT_TRUE(s.short_year);
  auto a = sample_policies(1000, 50, 42, 2010), b = sample_policies(1000, 50, 42, 2010);
  EXPECT_EQ(a.indices, b.indices);
  EXPECT_EQ(std::set<std::size_t>(a.indices.begin(), a.indices.end()).size(), 50u);
  EXPECT_NE(a.indices, sample_policies(1000, 50, 42, 2011).indices);
}
