#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polis/blockmodel.hpp"
#include "polis/error.hpp"
#include "polis/ingest.hpp"
#include "polis/io.hpp"
#include "polis/lexicon.hpp"
#include "polis/rng.hpp"
#include "polis/textpipe.hpp"

namespace polis {

// Word-document multigraph: A(w, d) = occurrences of word w in document d.
struct BipartiteCountGraph {
  struct Entry {
    std::uint32_t word;
    std::uint32_t doc;
    std::uint64_t count;
  };

  std::vector<std::string> words;  // sorted
  std::vector<std::string> docs;   // corpus order
  std::vector<Entry> entries;      // sorted by (word, doc), counts >= 1
  std::uint64_t total = 0;         // E
  std::vector<std::uint32_t> empty_docs;

  std::vector<std::uint64_t> word_totals() const {
    std::vector<std::uint64_t> t(words.size(), 0);
    for (const auto& e : entries) t[e.word] += e.count;
    return t;
  }
};

enum class Vocabulary { full, lexicon };

struct BipartiteOptions {
  Vocabulary vocabulary = Vocabulary::full;
  const Lexicon* lexicon = nullptr;  // required for Vocabulary::lexicon
  MatchMode match = MatchMode::single_token;
  std::uint64_t min_count = 1;       // drop words rarer than this corpus-wide
};

inline BipartiteCountGraph build_bipartite(std::span<const CleanedDocument> docs, const BipartiteOptions& opts = {}) {
  if (docs.empty()) throw DataError("cannot build a word-document graph from an empty corpus");
  if (opts.vocabulary == Vocabulary::lexicon && !opts.lexicon)
    throw std::invalid_argument("lexicon vocabulary requested without a lexicon");
  std::vector<std::map<std::string, std::uint64_t>> per_doc(docs.size());
  std::map<std::string, std::uint64_t> totals;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (opts.vocabulary == Vocabulary::full) {
      for (const auto& t : docs[d].tokens) ++per_doc[d][t];
    } else {
      per_doc[d] = match_lexicon(docs[d].tokens, *opts.lexicon, opts.match).counts;
    }
    for (const auto& [w, c] : per_doc[d]) totals[w] += c;
  }
  BipartiteCountGraph g;
  std::map<std::string, std::uint32_t> word_id;
  for (const auto& [w, c] : totals) {
    if (c < opts.min_count) continue;
    word_id.emplace(w, static_cast<std::uint32_t>(g.words.size()));
    g.words.push_back(w);
  }
  for (std::size_t d = 0; d < docs.size(); ++d) {
    g.docs.push_back(docs[d].id);
    bool any = false;
    for (const auto& [w, c] : per_doc[d]) {
      auto it = word_id.find(w);
      if (it == word_id.end()) continue;
      g.entries.push_back({it->second, static_cast<std::uint32_t>(d), c});
      g.total += c;
      any = true;
    }
    if (!any) g.empty_docs.push_back(static_cast<std::uint32_t>(d));
  }
  std::sort(g.entries.begin(), g.entries.end(),
            [](const auto& a, const auto& b) { return std::tie(a.word, a.doc) < std::tie(b.word, b.doc); });
  return g;
}

// Words are block-graph nodes [0, W), documents [W, W + D).
inline sbm::BlockGraph to_block_graph(const BipartiteCountGraph& g) {
  sbm::BlockGraph bg;
  bg.bipartite = true;
  for (std::size_t i = 0; i < g.words.size(); ++i) bg.add_node(0);
  for (std::size_t i = 0; i < g.docs.size(); ++i) bg.add_node(1);
  const auto offset = static_cast<std::uint32_t>(g.words.size());
  for (const auto& e : g.entries) bg.add_edge(e.word, offset + e.doc, static_cast<double>(e.count));
  return bg;
}

struct SBMState {
  std::vector<std::uint32_t> word_block;
  std::vector<std::uint32_t> doc_block;
  std::size_t word_blocks = 0;
  std::size_t doc_blocks = 0;
  std::vector<std::uint64_t> block_counts;  // m_rs, row-major word_blocks x doc_blocks
  std::vector<std::size_t> word_block_sizes;
  std::vector<std::size_t> doc_block_sizes;
  double dl_nats = 0.0;

  // Search diagnostics (empty for hand-built states).
  std::vector<double> dl_trace;
  double max_step_discrepancy = 0.0;

  std::uint64_t m(std::size_t r, std::size_t s) const { return block_counts[r * doc_blocks + s]; }
};

// Full state for a given partition; labels are compacted in order of first
// appearance.
inline SBMState make_state(const BipartiteCountGraph& g, std::vector<std::uint32_t> word_block,
                           std::vector<std::uint32_t> doc_block) {
  if (word_block.size() != g.words.size() || doc_block.size() != g.docs.size())
    throw std::invalid_argument("partition does not cover the graph");
  auto compact = [](std::vector<std::uint32_t>& labels) {
    std::map<std::uint32_t, std::uint32_t> remap;
    for (auto& l : labels) l = remap.try_emplace(l, static_cast<std::uint32_t>(remap.size())).first->second;
    return remap.size();
  };
  SBMState st;
  st.word_blocks = compact(word_block);
  st.doc_blocks = compact(doc_block);
  st.word_block = std::move(word_block);
  st.doc_block = std::move(doc_block);
  st.block_counts.assign(st.word_blocks * st.doc_blocks, 0);
  st.word_block_sizes.assign(st.word_blocks, 0);
  st.doc_block_sizes.assign(st.doc_blocks, 0);
  for (auto b : st.word_block) ++st.word_block_sizes[b];
  for (auto b : st.doc_block) ++st.doc_block_sizes[b];
  for (const auto& e : g.entries) st.block_counts[st.word_block[e.word] * st.doc_blocks + st.doc_block[e.doc]] += e.count;

  std::vector<std::uint32_t> joint(st.word_block);
  for (auto b : st.doc_block) joint.push_back(static_cast<std::uint32_t>(st.word_blocks) + b);
  st.dl_nats = sbm::description_length(to_block_graph(g), joint);
  return st;
}

// Recomputes the description length (nats) of the state's partition.
inline double description_length(const BipartiteCountGraph& g, const SBMState& st) {
  if (g.total == 0) throw DomainError("description length of a graph with no word occurrences");
  std::vector<std::uint32_t> joint(st.word_block);
  for (auto b : st.doc_block) joint.push_back(static_cast<std::uint32_t>(st.word_blocks) + b);
  return sbm::description_length(to_block_graph(g), joint);
}

struct FitSbmOptions {
  std::uint64_t seed = 42;
  std::size_t max_blocks = 0;  // initial cap per side; 0 -> max(64, ceil(sqrt(N)))
  bool record_trace = false;
  bool verify_steps = false;
};

inline SBMState fit_sbm(const BipartiteCountGraph& g, const FitSbmOptions& opts = {}) {
  if (g.total == 0) throw DomainError("cannot fit a block model to an empty word-document graph");
  const auto bg = to_block_graph(g);
  sbm::FitOptions fo;
  fo.seed = opts.seed;
  fo.max_blocks = opts.max_blocks;
  fo.record_trace = opts.record_trace;
  fo.verify_steps = opts.verify_steps;
  const auto res = sbm::fit(bg, fo);
  const std::size_t nw = g.words.size();
  std::vector<std::uint32_t> wb(res.block.begin(), res.block.begin() + static_cast<long>(nw));
  std::vector<std::uint32_t> db(res.block.begin() + static_cast<long>(nw), res.block.end());
  for (auto& b : db) b -= static_cast<std::uint32_t>(res.blocks[0]);
  auto st = make_state(g, std::move(wb), std::move(db));
  st.dl_trace = res.trace;
  st.max_step_discrepancy = res.max_step_discrepancy;
  return st;
}

// ---- topics ---------------------------------------------------------------

struct TopicWord {
  std::string word;
  double weight = 0.0;
};

struct Topic {
  std::size_t id = 0;
  std::vector<TopicWord> words;  // weight descending, then word
  std::uint64_t mass = 0;        // tokens in the block

  // Appendix-style label: the top three words joined with '-'.
  std::string label() const {
    std::string out;
    for (std::size_t i = 0; i < words.size() && i < 3; ++i) out += (i ? "-" : "") + words[i].word;
    return out;
  }
};

inline constexpr double kReportWeightFloor = 0.001;

// One topic per word block; weight(w) = count(w) / block total. Topics are
// ordered by mass, largest first.
inline std::vector<Topic> extract_topics(const SBMState& st, const BipartiteCountGraph& g) {
  const auto totals = g.word_totals();
  std::vector<Topic> topics(st.word_blocks);
  for (std::size_t w = 0; w < g.words.size(); ++w) {
    auto& t = topics[st.word_block[w]];
    t.mass += totals[w];
    t.words.push_back({g.words[w], static_cast<double>(totals[w])});
  }
  std::erase_if(topics, [](const Topic& t) { return t.mass == 0; });
  for (auto& t : topics) {
    std::erase_if(t.words, [](const TopicWord& w) { return w.weight == 0.0; });
    for (auto& w : t.words) w.weight /= static_cast<double>(t.mass);
    std::sort(t.words.begin(), t.words.end(), [](const TopicWord& a, const TopicWord& b) {
      return a.weight != b.weight ? a.weight > b.weight : a.word < b.word;
    });
  }
  std::stable_sort(topics.begin(), topics.end(), [](const Topic& a, const Topic& b) {
    return a.mass != b.mass ? a.mass > b.mass : a.words.front().word < b.words.front().word;
  });
  for (std::size_t i = 0; i < topics.size(); ++i) topics[i].id = i;
  return topics;
}

// Report view: words with weight below the floor omitted.
inline std::vector<Topic> report_view(std::vector<Topic> topics, double floor = kReportWeightFloor) {
  for (auto& t : topics) std::erase_if(t.words, [&](const TopicWord& w) { return w.weight < floor; });
  return topics;
}

inline std::string topics_json(std::span<const Topic> topics) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& t : report_view({topics.begin(), topics.end()})) {
    nlohmann::ordered_json words = nlohmann::ordered_json::array();
    for (const auto& w : t.words) words.push_back({{"word", w.word}, {"weight", w.weight}});
    arr.push_back({{"topic_id", t.id}, {"words", std::move(words)}});
  }
  return arr.dump(2) + "\n";
}

// Three-decimal weight, trailing zeros trimmed but keeping one: 1 -> "1.0".
inline std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", w);
  std::string s(buf);
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

// "label: word (weight), ..." lines.
inline std::string topics_text(std::span<const Topic> topics) {
  std::string out;
  for (const auto& t : report_view({topics.begin(), topics.end()})) {
    out += t.label() + ":";
    for (std::size_t i = 0; i < t.words.size(); ++i)
      out += (i ? ", " : " ") + t.words[i].word + " (" + format_weight(t.words[i].weight) + ")";
    out += '\n';
  }
  return out;
}

struct TopicShares {
  int year = 0;
  std::vector<double> share;  // indexed by topic position
  bool no_vocabulary_tokens = false;
};

// share_t(y) = sum_{w in t} c_y(w) / sum_{w in vocabulary} c_y(w).
inline TopicShares topic_prevalence(std::span<const Topic> topics, int year,
                                    const std::map<std::string, std::uint64_t>& year_counts) {
  TopicShares out{year, std::vector<double>(topics.size(), 0.0), false};
  std::vector<std::uint64_t> per_topic(topics.size(), 0);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < topics.size(); ++i) {
    for (const auto& w : topics[i].words) {
      auto it = year_counts.find(w.word);
      if (it == year_counts.end()) continue;
      per_topic[i] += it->second;
      total += it->second;
    }
  }
  if (total == 0) {
    out.no_vocabulary_tokens = true;
    return out;
  }
  for (std::size_t i = 0; i < topics.size(); ++i)
    out.share[i] = static_cast<double>(per_topic[i]) / static_cast<double>(total);
  return out;
}

inline std::string prevalence_csv(std::span<const Topic> topics, std::span<const TopicShares> rows) {
  std::string out = "year,topic_id,share\n";
  for (const auto& r : rows)
    for (std::size_t i = 0; i < topics.size(); ++i)
      out += std::to_string(r.year) + ',' + std::to_string(topics[i].id) + ',' + io::format_double(r.share[i]) + '\n';
  return out;
}

// ---- complexity -------------------------------------------------------------

inline double nats_to_bits(double nats) {
  if (nats < 0.0) throw DomainError("description length cannot be negative");
  return nats / std::numbers::ln2;
}

// Uncompressed text size in bits: total_words * log2(unique_words).
inline double text_description_length(std::uint64_t total_words, std::uint64_t unique_words) {
  if (total_words < 1) throw DomainError("text description length needs at least one word");
  if (unique_words < 2) throw DomainError("text description length needs at least two unique words");
  return static_cast<double>(total_words) * std::log2(static_cast<double>(unique_words));
}

inline double compression_factor(double mdl_bits, double tdl_bits) {
  if (!(tdl_bits > 0.0)) throw DomainError("compression factor needs a positive text description length");
  if (!(mdl_bits > 0.0)) throw DomainError("compression factor needs a positive description length");
  return mdl_bits / tdl_bits;
}

struct ComplexityRecord {
  int year = 0;
  std::uint64_t total_words = 0;
  std::uint64_t unique_words = 0;
  std::size_t n_policies = 0;
  double mdl_nats = 0.0;
  double mdl_bits = 0.0;
  double tdl_bits = 0.0;
  double compression_factor = 0.0;
};

inline ComplexityRecord make_complexity_record(int year, const BipartiteCountGraph& g, double mdl_nats) {
  ComplexityRecord r;
  r.year = year;
  r.total_words = g.total;
  r.unique_words = g.words.size();
  r.n_policies = g.docs.size() - g.empty_docs.size();
  r.mdl_nats = mdl_nats;
  r.mdl_bits = nats_to_bits(mdl_nats);
  r.tdl_bits = text_description_length(r.total_words, r.unique_words);
  r.compression_factor = compression_factor(r.mdl_bits, r.tdl_bits);
  return r;
}

inline std::string complexity_csv(std::span<const ComplexityRecord> rows) {
  std::string out = "year,n_words,n_unique,n_policies,mdl_bits,tdl_bits,compression_factor\n";
  for (const auto& r : rows)
    out += std::to_string(r.year) + ',' + std::to_string(r.total_words) + ',' + std::to_string(r.unique_words) + ',' +
           std::to_string(r.n_policies) + ',' + io::format_double(r.mdl_bits) + ',' + io::format_double(r.tdl_bits) +
           ',' + io::format_double(r.compression_factor) + '\n';
  return out;
}

struct Sample {
  std::vector<std::size_t> indices;  // ascending positions in the year corpus
  bool short_year = false;           // fewer policies than requested
};

// Uniform sample without replacement; the whole year when it is too small.
inline Sample sample_policies(std::size_t population, std::size_t n, std::uint64_t seed, int year) {
  if (n < 1) throw std::invalid_argument("sample size must be at least 1");
  Sample s;
  std::vector<std::size_t> all(population);
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (population <= n) {
    s.indices = std::move(all);
    s.short_year = population < n;
    return s;
  }
  auto rng = make_rng(seed, "sample:" + std::to_string(year));
  // Partial Fisher-Yates over the index range.
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, population - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  s.indices.assign(all.begin(), all.begin() + static_cast<long>(n));
  std::sort(s.indices.begin(), s.indices.end());
  return s;
}

}  // namespace polis
