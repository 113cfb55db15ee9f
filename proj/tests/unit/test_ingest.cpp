#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "fixtures.hpp"

using namespace polis;

namespace {

NegationLexicon neg() { return NegationLexicon::from_entries({"never", "not"}); }

CorpusStore store_of(const std::string& jsonl, std::optional<YearRange> range = {}) {
  return CorpusStore::build(parse_corpus(jsonl, CorpusFormat::jsonl).snapshots, neg(), {}, range);
}

}  // namespace

TEST(Load, JsonlFieldMapping) {
  auto r = parse_corpus(R"({"url":"a.com","year":1999,"category":"shopping","text":"We collect cookies."})",
                        CorpusFormat::jsonl);
  ASSERT_EQ(r.snapshots.size(), 1u);
  const auto& s = r.snapshots[0];
  EXPECT_EQ(s.url, "a.com");
  EXPECT_EQ(s.year, 1999);
  EXPECT_EQ(s.category, "shopping");
  EXPECT_EQ(s.text, "We collect cookies.");
  EXPECT_EQ(s.id, "0");
}

TEST(Load, MissingYearNamesTheLine) {
  const std::string content = "{\"url\":\"a.com\",\"year\":1999,\"text\":\"x\"}\n{\"url\":\"b.com\",\"text\":\"y\"}\n";
  try {
    parse_corpus(content, CorpusFormat::jsonl);
    FAIL() << "expected a record error";
  } catch (const RecordError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Load, SkipBadKeepsGoing) {
  const std::string content = "not json\n{\"year\":2001,\"text\":\"ok\"}\n{\"year\":\"abc\",\"text\":\"bad\"}\n";
  auto r = parse_corpus(content, CorpusFormat::jsonl, LoadOptions{true});
  EXPECT_EQ(r.snapshots.size(), 1u);
  EXPECT_EQ(r.skipped.size(), 2u);
  EXPECT_EQ(r.records_read, 3u);
}

TEST(Load, SameUrlDifferentYearsAreTwoSnapshots) {
  auto r = parse_corpus("{\"url\":\"a.com\",\"year\":2001,\"text\":\"x\"}\n{\"url\":\"a.com\",\"year\":2002,\"text\":\"y\"}\n",
                        CorpusFormat::jsonl);
  ASSERT_EQ(r.snapshots.size(), 2u);
  EXPECT_EQ(r.snapshots[0].year, 2001);
  EXPECT_EQ(r.snapshots[1].year, 2002);
}

TEST(Load, BlankTextDroppedAndCounted) {
  auto r = parse_corpus("{\"year\":2001,\"text\":\"  \\n \"}\n{\"year\":2001,\"text\":\"x\"}\n", CorpusFormat::jsonl);
  EXPECT_EQ(r.snapshots.size(), 1u);
  EXPECT_EQ(r.dropped_blank, 1u);
}

TEST(Load, DuplicateIdIsARecordError) {
  EXPECT_THROW(parse_corpus("{\"id\":\"a\",\"year\":1,\"text\":\"x\"}\n{\"id\":\"a\",\"year\":2,\"text\":\"y\"}\n",
                            CorpusFormat::jsonl),
               RecordError);
}

TEST(Load, CsvWithQuotedNewlines) {
  const std::string csv = "id,url,year,category,text\nx1,a.com,2005,,\"line one.\nline \"\"two\"\".\"\n";
  auto r = parse_corpus(csv, CorpusFormat::csv);
  ASSERT_EQ(r.snapshots.size(), 1u);
  EXPECT_EQ(r.snapshots[0].text, "line one.\nline \"two\".");
  EXPECT_FALSE(r.snapshots[0].category.has_value());
}

TEST(Load, CsvMissingYearColumn) {
  EXPECT_THROW(parse_corpus("url,text\na,b\n", CorpusFormat::csv), DataError);
}

TEST(Load, PropertyJsonlAndCsvRoundTrip) {
  std::mt19937_64 rng(17);
  const std::vector<std::string> parts = {"We", " ", "\"", ",", "\n", "é", "\t", "cookies.", "\\", "{}", "’"};
  std::uniform_int_distribution<std::size_t> pick(0, parts.size() - 1), len(1, 25);
  std::uniform_int_distribution<int> year(1990, 2020);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<PolicySnapshot> snaps;
    for (int i = 0; i < 5; ++i) {
      PolicySnapshot s{"id" + std::to_string(i), "https://x" + std::to_string(i) + ".com", year(rng), std::nullopt, "x"};
      for (std::size_t k = len(rng); k > 0; --k) s.text += parts[pick(rng)];
      if (i % 2) s.category = "news, daily";
      snaps.push_back(s);
    }
    EXPECT_EQ(parse_corpus(write_jsonl(snaps), CorpusFormat::jsonl).snapshots, snaps);
    EXPECT_EQ(parse_corpus(write_csv(snaps), CorpusFormat::csv).snapshots, snaps);
  }
}

TEST(Summary, FullAndFilteredCounts) {
  auto store = store_of(
      "{\"year\":2001,\"text\":\"We use cookies and cookies. We never sell your address.\"}\n"
      "{\"year\":2001,\"text\":\"Hello world.\"}\n");
  auto lex = Lexicon::from_entries({"cookies", "address"});
  auto full = summary_stats(store, 2001, SummaryMode::full);
  EXPECT_EQ(full.n_policies, 2u);
  EXPECT_EQ(full.n_tokens, 7u);  // we use cookies and cookies hello world
  EXPECT_EQ(full.n_unique_tokens, 6u);
  auto filtered = summary_stats(store, 2001, SummaryMode::pii_filtered, &lex);
  EXPECT_EQ(filtered.n_policies, 1u);
  EXPECT_EQ(filtered.n_tokens, 2u);
  EXPECT_EQ(filtered.n_unique_tokens, 1u);
}

TEST(Summary, EmptyYearIsZero) {
  auto store = store_of("{\"year\":2001,\"text\":\"x\"}\n", YearRange{2000, 2001});
  auto row = summary_stats(store, 2000, SummaryMode::full);
  EXPECT_EQ(row.n_policies, 0u);
  EXPECT_EQ(row.n_tokens, 0u);
  EXPECT_EQ(row.n_unique_tokens, 0u);
  EXPECT_THROW(summary_stats(store, 1999, SummaryMode::full), DataError);
}

TEST(Store, ThreadCountDoesNotChangeOutput) {
  auto snaps = load_corpus(fixtures::data_file("mini_corpus.jsonl")).snapshots;
  auto one = CorpusStore::build(snaps, neg(), {}, {}, 1);
  auto four = CorpusStore::build(snaps, neg(), {}, {}, 4);
  ASSERT_EQ(one.years(), four.years());
  for (int y : one.years()) EXPECT_EQ(one.at(y).docs, four.at(y).docs);
}

TEST(TokenStore, RoundTripIdentity) {
  auto store = store_of(
      "{\"id\":\"tab\\there\",\"year\":2003,\"text\":\"We use cookies. Données personnelles!\"}\n"
      "{\"id\":\"b\",\"year\":2003,\"text\":\"#\"}\n");
  auto dir = fixtures::temp_dir("tokens_roundtrip");
  auto path = persist_tokens(store, 2003, dir);
  auto tf = load_tokens(path);
  EXPECT_EQ(tf.year, 2003);
  EXPECT_EQ(tf.docs, store.at(2003).docs);
}

TEST(TokenStore, EmptyYearWritesEmptyStore) {
  auto store = store_of("{\"year\":2001,\"text\":\"x\"}\n", YearRange{2000, 2001});
  auto dir = fixtures::temp_dir("tokens_empty");
  auto path = persist_tokens(store, 2000, dir);
  ASSERT_TRUE(std::filesystem::exists(path));
  auto tf = load_tokens(path);
  EXPECT_EQ(tf.year, 2000);
  EXPECT_TRUE(tf.docs.empty());
}

TEST(TokenStore, SecondPersistReplacesFirst) {
  auto dir = fixtures::temp_dir("tokens_twice");
  auto a = store_of("{\"year\":2001,\"text\":\"first version\"}\n");
  auto b = store_of("{\"year\":2001,\"text\":\"second\"}\n");
  persist_tokens(a, 2001, dir);
  auto path = persist_tokens(b, 2001, dir);
  EXPECT_EQ(load_tokens(path).docs, b.at(2001).docs);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1u);
}

TEST(TokenStore, CorruptFileIsAnError) {
  EXPECT_THROW(decode_tokens("garbage"), DataError);
  EXPECT_THROW(decode_tokens("POLIS-TOKENS v1\nyear\t2001\ndocuments\t2\na\tb\n"), DataError);
}
