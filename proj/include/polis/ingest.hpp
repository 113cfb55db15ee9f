#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "polis/error.hpp"
#include "polis/io.hpp"
#include "polis/lexicon.hpp"
#include "polis/textpipe.hpp"

namespace polis {

struct PolicySnapshot {
  std::string id;
  std::string url;
  int year = 0;
  std::optional<std::string> category;
  std::string text;

  bool operator==(const PolicySnapshot&) const = default;
};

enum class CorpusFormat { jsonl, csv };

inline CorpusFormat format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? CorpusFormat::csv : CorpusFormat::jsonl;
}

struct LoadOptions {
  bool skip_bad = false;
};

struct LoadResult {
  std::vector<PolicySnapshot> snapshots;
  std::size_t records_read = 0;
  std::size_t dropped_blank = 0;         // whitespace-only text
  std::vector<std::string> skipped;      // record errors tolerated by skip_bad
};

namespace ingest_detail {

inline bool all_space(std::string_view s) {
  for (std::size_t pos = 0; pos < s.size();)
    if (!unicode::is_space(unicode::decode(s, pos))) return false;
  return true;
}

inline int parse_year(std::string_view s, std::size_t line) {
  int year = 0;
  auto b = s.find_first_not_of(" \t"), e = s.find_last_not_of(" \t");
  if (b == std::string_view::npos) throw RecordError(line, "missing year");
  s = s.substr(b, e - b + 1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), year);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw RecordError(line, "year is not an integer");
  if (year <= 0) throw RecordError(line, "year must be positive");
  return year;
}

class Collector {
 public:
  Collector(LoadResult& out, const LoadOptions& opts) : out_(out), opts_(opts) {}

  template <class F>
  void record(std::size_t line, F&& make) {
    ++out_.records_read;
    const std::size_t index = out_.records_read - 1;
    try {
      PolicySnapshot snap = make();
      if (snap.id.empty()) snap.id = std::to_string(index);
      if (!ids_.insert(snap.id).second) throw RecordError(line, "duplicate id '" + snap.id + "'");
      if (all_space(snap.text)) {
        ++out_.dropped_blank;
        return;
      }
      out_.snapshots.push_back(std::move(snap));
    } catch (const RecordError& e) {
      if (!opts_.skip_bad) throw;
      out_.skipped.push_back(e.what());
    }
  }

 private:
  LoadResult& out_;
  const LoadOptions& opts_;
  std::unordered_set<std::string> ids_;
};

inline void parse_jsonl(std::string_view content, const LoadOptions& opts, LoadResult& out) {
  using nlohmann::json;
  Collector collect(out, opts);
  std::size_t line_no = 0, start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (ingest_detail::all_space(line)) continue;
    collect.record(line_no, [&] {
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error& e) {
        throw RecordError(line_no, std::string("malformed JSON: ") + e.what());
      }
      if (!obj.is_object()) throw RecordError(line_no, "record is not a JSON object");
      PolicySnapshot snap;
      auto year = obj.find("year");
      if (year == obj.end() || year->is_null()) throw RecordError(line_no, "missing year");
      if (year->is_number_integer()) {
        const auto y = year->get<long long>();
        if (y <= 0 || y > 1000000) throw RecordError(line_no, "year must be positive");
        snap.year = static_cast<int>(y);
      } else if (year->is_string()) {
        snap.year = parse_year(year->get_ref<const std::string&>(), line_no);
      } else {
        throw RecordError(line_no, "year is not an integer");
      }
      auto text = obj.find("text");
      if (text == obj.end() || !text->is_string()) throw RecordError(line_no, "missing text");
      snap.text = text->get<std::string>();
      if (auto it = obj.find("url"); it != obj.end() && it->is_string()) snap.url = it->get<std::string>();
      if (auto it = obj.find("category"); it != obj.end() && it->is_string())
        snap.category = it->get<std::string>();
      if (auto it = obj.find("id"); it != obj.end()) {
        if (it->is_string()) snap.id = it->get<std::string>();
        else if (it->is_number_integer()) snap.id = std::to_string(it->get<long long>());
      }
      return snap;
    });
  }
}

inline void parse_csv(std::string_view content, const LoadOptions& opts, LoadResult& out) {
  auto records = io::parse_csv(content);
  if (records.empty()) return;
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < records[0].fields.size(); ++i) col[normalize_term(records[0].fields[i])] = i;
  if (!col.count("year") || !col.count("text"))
    throw DataError("line 1: CSV header must name 'year' and 'text' columns");
  Collector collect(out, opts);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    auto field = [&](const char* name) -> std::optional<std::string> {
      auto it = col.find(name);
      if (it == col.end() || it->second >= rec.fields.size()) return std::nullopt;
      return rec.fields[it->second];
    };
    collect.record(rec.line, [&] {
      PolicySnapshot snap;
      auto year = field("year");
      if (!year) throw RecordError(rec.line, "missing year");
      snap.year = parse_year(*year, rec.line);
      auto text = field("text");
      if (!text) throw RecordError(rec.line, "missing text");
      snap.text = *text;
      snap.url = field("url").value_or("");
      if (auto c = field("category"); c && !c->empty()) snap.category = *c;
      snap.id = field("id").value_or("");
      return snap;
    });
  }
}

}  // namespace ingest_detail

inline LoadResult parse_corpus(std::string_view content, CorpusFormat format, const LoadOptions& opts = {}) {
  LoadResult out;
  if (format == CorpusFormat::jsonl) ingest_detail::parse_jsonl(content, opts, out);
  else ingest_detail::parse_csv(content, opts, out);
  return out;
}

inline LoadResult load_corpus(const std::filesystem::path& path, CorpusFormat format,
                              const LoadOptions& opts = {}) {
  return parse_corpus(io::read_file(path), format, opts);
}

inline LoadResult load_corpus(const std::filesystem::path& path, const LoadOptions& opts = {}) {
  return load_corpus(path, format_from_path(path), opts);
}

inline std::string write_jsonl(std::span<const PolicySnapshot> snapshots) {
  std::string out;
  for (const auto& s : snapshots) {
    nlohmann::ordered_json obj;
    obj["id"] = s.id;
    obj["url"] = s.url;
    obj["year"] = s.year;
    if (s.category) obj["category"] = *s.category;
    obj["text"] = s.text;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

inline std::string write_csv(std::span<const PolicySnapshot> snapshots) {
  std::string out = "id,url,year,category,text\n";
  for (const auto& s : snapshots) {
    out += io::csv_escape(s.id) + ',' + io::csv_escape(s.url) + ',' + std::to_string(s.year) + ',' +
           io::csv_escape(s.category.value_or("")) + ',' + io::csv_escape(s.text) + '\n';
  }
  return out;
}

struct CleanedDocument {
  std::string id;
  std::vector<std::string> tokens;
  bool operator==(const CleanedDocument&) const = default;
};

struct YearCorpus {
  int year = 0;
  std::vector<PolicySnapshot> snapshots;
  std::vector<CleanedDocument> docs;  // parallel to snapshots
  std::size_t token_count = 0;
  std::size_t unique_token_count = 0;
  std::size_t sentences_in = 0;
  std::size_t sentences_dropped = 0;

  void recount() {
    std::unordered_set<std::string_view> unique;
    token_count = 0;
    for (const auto& d : docs) {
      token_count += d.tokens.size();
      for (const auto& t : d.tokens) unique.insert(t);
    }
    unique_token_count = unique.size();
  }
};

struct YearRange {
  int first = 0;
  int last = 0;
  bool contains(int y) const { return y >= first && y <= last; }
};

// Cleaned, per-year corpus. Built once, then read-only.
class CorpusStore {
 public:
  // Cleans every snapshot (optionally on several threads; output order does
  // not depend on the thread count). Years inside `range` with no snapshots
  // are materialized empty; snapshots outside it are ignored.
  static CorpusStore build(std::vector<PolicySnapshot> snapshots, const NegationLexicon& neg,
                           const CleanOptions& opts = {}, std::optional<YearRange> range = {},
                           unsigned threads = 1) {
    if (range) {
      std::erase_if(snapshots, [&](const PolicySnapshot& s) { return !range->contains(s.year); });
    }
    std::unordered_set<std::string_view> ids;
    for (const auto& s : snapshots)
      if (!ids.insert(s.id).second) throw DataError("duplicate snapshot id '" + s.id + "'");

    std::vector<CleanedText> cleaned(snapshots.size());
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(snapshots.size())));
    {
      std::vector<std::jthread> workers;
      for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
          for (std::size_t i = t; i < snapshots.size(); i += threads)
            cleaned[i] = clean_text(snapshots[i].text, neg, opts);
        });
      }
    }

    CorpusStore store;
    if (range)
      for (int y = range->first; y <= range->last; ++y) store.years_[y].year = y;
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
      auto& yc = store.years_[snapshots[i].year];
      yc.year = snapshots[i].year;
      yc.sentences_in += cleaned[i].sentences_in;
      yc.sentences_dropped += cleaned[i].sentences_dropped;
      yc.docs.push_back({snapshots[i].id, std::move(cleaned[i].tokens)});
      yc.snapshots.push_back(std::move(snapshots[i]));
    }
    for (auto& [y, yc] : store.years_) yc.recount();
    return store;
  }

  // Store over already-cleaned documents (token-store reload, tests).
  static CorpusStore from_documents(std::map<int, std::vector<CleanedDocument>> by_year) {
    CorpusStore store;
    for (auto& [y, docs] : by_year) {
      auto& yc = store.years_[y];
      yc.year = y;
      yc.docs = std::move(docs);
      for (const auto& d : yc.docs) yc.snapshots.push_back({d.id, "", y, std::nullopt, ""});
      yc.recount();
    }
    return store;
  }

  std::vector<int> years() const {
    std::vector<int> out;
    for (const auto& [y, _] : years_) out.push_back(y);
    return out;
  }
  bool contains(int year) const { return years_.count(year) != 0; }
  bool empty() const { return years_.empty(); }

  const YearCorpus& at(int year) const {
    auto it = years_.find(year);
    if (it == years_.end()) throw DataError("year " + std::to_string(year) + " is not in the corpus");
    return it->second;
  }

 private:
  std::map<int, YearCorpus> years_;
};

enum class SummaryMode { full, pii_filtered };

struct CorpusSummaryRow {
  int year = 0;
  std::size_t n_policies = 0;
  std::size_t n_tokens = 0;
  std::size_t n_unique_tokens = 0;
  SummaryMode mode = SummaryMode::full;
  bool operator==(const CorpusSummaryRow&) const = default;
};

// Policy count = snapshots contributing at least one (matched) token.
inline CorpusSummaryRow summary_stats(const CorpusStore& store, int year, SummaryMode mode,
                                      const Lexicon* lexicon = nullptr,
                                      MatchMode match = MatchMode::single_token) {
  const auto& yc = store.at(year);
  CorpusSummaryRow row{year, 0, 0, 0, mode};
  if (mode == SummaryMode::full) {
    for (const auto& d : yc.docs)
      if (!d.tokens.empty()) ++row.n_policies;
    row.n_tokens = yc.token_count;
    row.n_unique_tokens = yc.unique_token_count;
    return row;
  }
  if (!lexicon) throw std::invalid_argument("pii-filtered summary needs a lexicon");
  std::set<std::string> unique;
  for (const auto& d : yc.docs) {
    auto occ = match_lexicon(d.tokens, *lexicon, match);
    if (occ.total == 0) continue;
    ++row.n_policies;
    row.n_tokens += occ.total;
    for (const auto& [term, _] : occ.counts) unique.insert(term);
  }
  row.n_unique_tokens = unique.size();
  return row;
}

// ---- token store ---------------------------------------------------------

inline constexpr std::string_view kTokenStoreMagic = "POLIS-TOKENS v1";

namespace ingest_detail {

inline std::string escape_id(std::string_view id) {
  std::string out;
  for (char c : id) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string unescape_id(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    switch (s[++i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: out += s[i];
    }
  }
  return out;
}

}  // namespace ingest_detail

struct TokenFile {
  int year = 0;
  std::vector<CleanedDocument> docs;
};

inline std::string encode_tokens(int year, std::span<const CleanedDocument> docs) {
  std::string out(kTokenStoreMagic);
  out += "\nyear\t" + std::to_string(year) + "\ndocuments\t" + std::to_string(docs.size()) + '\n';
  for (const auto& d : docs) {
    out += ingest_detail::escape_id(d.id);
    out += '\t';
    for (std::size_t i = 0; i < d.tokens.size(); ++i) {
      if (i) out += ' ';
      out += d.tokens[i];
    }
    out += '\n';
  }
  return out;
}

inline TokenFile decode_tokens(std::string_view content, const std::string& origin = "token file") {
  auto bad = [&](const std::string& why) { return DataError(origin + ": " + why); };
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < content.size();) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    lines.push_back(content.substr(start, end - start));
    start = end + 1;
  }
  if (lines.size() < 3 || lines[0] != kTokenStoreMagic) throw bad("missing POLIS-TOKENS v1 header");
  TokenFile tf;
  std::size_t n = 0;
  auto header_value = [&](std::string_view line, std::string_view key) {
    if (!line.starts_with(key) || line.size() <= key.size() + 1 || line[key.size()] != '\t')
      throw bad("malformed header line");
    return line.substr(key.size() + 1);
  };
  auto year = header_value(lines[1], "year");
  auto count = header_value(lines[2], "documents");
  if (std::from_chars(year.data(), year.data() + year.size(), tf.year).ec != std::errc{} ||
      std::from_chars(count.data(), count.data() + count.size(), n).ec != std::errc{})
    throw bad("malformed header value");
  if (lines.size() != 3 + n) throw bad("document count mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    auto line = lines[3 + i];
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw bad("malformed document line");
    CleanedDocument doc{ingest_detail::unescape_id(line.substr(0, tab)), {}};
    auto rest = line.substr(tab + 1);
    for (std::size_t s = 0; s < rest.size();) {
      std::size_t e = rest.find(' ', s);
      if (e == std::string_view::npos) e = rest.size();
      if (e > s) doc.tokens.emplace_back(rest.substr(s, e - s));
      s = e + 1;
    }
    tf.docs.push_back(std::move(doc));
  }
  return tf;
}

inline std::filesystem::path token_store_path(const std::filesystem::path& dir, int year) {
  return dir / (std::to_string(year) + ".tokens");
}

inline std::filesystem::path persist_tokens(const CorpusStore& store, int year, const std::filesystem::path& dir) {
  const auto& yc = store.at(year);
  const auto path = token_store_path(dir, year);
  io::atomic_write(path, encode_tokens(year, yc.docs));
  return path;
}

inline TokenFile load_tokens(const std::filesystem::path& path) {
  return decode_tokens(io::read_file(path), path.string());
}

}  // namespace polis
