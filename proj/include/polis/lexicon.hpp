#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "polis/error.hpp"
#include "polis/io.hpp"
#include "polis/tokenize.hpp"
#include "polis/unicode.hpp"

namespace polis {

namespace lexicon_detail {

inline bool is_quote(char32_t cp) {
  return cp == '"' || cp == '\'' || cp == '`' || cp == 0x201C || cp == 0x201D ||
         cp == 0x2018 || cp == 0x2019;
}

inline std::vector<char32_t> decode_all(std::string_view s) {
  std::vector<char32_t> out;
  for (std::size_t pos = 0; pos < s.size();) out.push_back(unicode::decode(s, pos));
  return out;
}

inline std::string encode_all(const std::vector<char32_t>& cps, std::size_t b, std::size_t e) {
  std::string out;
  for (std::size_t i = b; i < e; ++i) unicode::append_utf8(out, cps[i]);
  return out;
}

inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) words.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return words;
}

// Splits a line of quoted, comma-separated entries. A quote closes an entry
// only when followed by a comma or the end of the line, so "'driver's
// license'" stays one entry.
inline std::vector<std::string> split_quoted_list(std::string_view line) {
  const auto cps = decode_all(line);
  std::vector<std::string> items;
  std::size_t i = 0;
  const std::size_t n = cps.size();
  auto skip_blank = [&] {
    while (i < n && (unicode::is_space(cps[i]) || cps[i] == ',')) ++i;
  };
  skip_blank();
  while (i < n) {
    std::size_t open = i;
    while (i < n && is_quote(cps[i])) ++i;
    const std::size_t body = i;
    std::size_t close = n;
    for (std::size_t k = body; k < n; ++k) {
      if (!is_quote(cps[k])) continue;
      std::size_t after = k;
      while (after < n && is_quote(cps[after])) ++after;
      std::size_t probe = after;
      while (probe < n && unicode::is_space(cps[probe])) ++probe;
      if (probe == n || cps[probe] == ',') {
        close = k;
        i = probe;
        break;
      }
      k = after - 1;
    }
    if (close == n) {
      items.push_back(encode_all(cps, open, n));
      break;
    }
    items.push_back(encode_all(cps, body, close));
    skip_blank();
  }
  return items;
}

inline std::vector<std::string> read_entries(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  std::vector<std::string> entries;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos && line[first] != '#') {
      line.remove_prefix(first);
      std::size_t pos = 0;
      const bool list_form = is_quote(unicode::decode(line, pos)) && line.find(',') != line.npos;
      if (list_form) {
        for (auto& item : split_quoted_list(line)) entries.push_back(std::move(item));
      } else {
        entries.emplace_back(line);
      }
    }
    start = end + 1;
  }
  return entries;
}

}  // namespace lexicon_detail

// Lowercases, maps typographic apostrophes to ASCII, strips surrounding
// quotes and collapses whitespace runs. Idempotent.
inline std::string normalize_term(std::string_view raw) {
  std::vector<char32_t> cps;
  for (std::size_t pos = 0; pos < raw.size();) {
    char32_t cp = unicode::decode(raw, pos);
    if (cp == 0x2019 || cp == 0x2018 || cp == 0x02BC) cp = '\'';
    if (cp == 0x201C || cp == 0x201D) cp = '"';
    cps.push_back(unicode::to_lower(cp));
  }
  std::size_t b = 0, e = cps.size();
  for (;;) {
    while (b < e && unicode::is_space(cps[b])) ++b;
    while (e > b && unicode::is_space(cps[e - 1])) --e;
    if (e - b >= 2 && lexicon_detail::is_quote(cps[b]) && lexicon_detail::is_quote(cps[e - 1])) {
      ++b;
      --e;
      continue;
    }
    break;
  }
  std::string out;
  bool pending_space = false;
  for (std::size_t i = b; i < e; ++i) {
    if (unicode::is_space(cps[i])) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    unicode::append_utf8(out, cps[i]);
  }
  return out;
}

// "internet protocol (ip) address" -> {"internet protocol address",
// "ip address"}. The parenthesized form replaces the preceding words whose
// initials spell it, or the single preceding word otherwise. Terms without
// parentheses come back unchanged.
inline std::vector<std::string> expand_parenthesized(const std::string& term) {
  const auto open = term.find('(');
  const auto close = term.find(')', open == std::string::npos ? 0 : open);
  if (open == std::string::npos || close == std::string::npos) return {term};
  const std::string inner = normalize_term(term.substr(open + 1, close - open - 1));
  auto before = lexicon_detail::split_words(term.substr(0, open));
  const auto after = lexicon_detail::split_words(term.substr(close + 1));

  std::vector<std::string> long_form = before;
  long_form.insert(long_form.end(), after.begin(), after.end());

  std::size_t replaced = before.empty() ? 0 : 1;
  const auto inner_cps = lexicon_detail::decode_all(inner);
  if (inner.find(' ') == std::string::npos && inner_cps.size() >= 2 &&
      inner_cps.size() <= before.size()) {
    bool initials = true;
    const std::size_t k = inner_cps.size();
    for (std::size_t i = 0; i < k && initials; ++i) {
      std::size_t pos = 0;
      initials = unicode::decode(before[before.size() - k + i], pos) == inner_cps[i];
    }
    if (initials) replaced = k;
  }
  std::vector<std::string> short_form(before.begin(), before.end() - static_cast<long>(replaced));
  if (!inner.empty()) short_form.push_back(inner);
  short_form.insert(short_form.end(), after.begin(), after.end());

  std::vector<std::string> out;
  for (const auto* form : {&long_form, &short_form}) {
    auto joined = io::join(*form, " ");
    if (!joined.empty() && std::find(out.begin(), out.end(), joined) == out.end()) out.push_back(joined);
  }
  return out;
}

struct LexiconTerm {
  std::string text;                 // normalized spelling, used as the report key
  std::vector<std::string> tokens;  // tokenizer view of `text`
  bool is_phrase() const { return tokens.size() > 1; }
};

struct LexiconLoadReport {
  std::size_t raw_entries = 0;
  std::size_t expanded_variants = 0;
  std::size_t merged_duplicates = 0;
  std::vector<std::string> warnings;
};

class Lexicon {
 public:
  Lexicon() = default;

  static Lexicon from_entries(const std::vector<std::string>& raw, std::string version = "inline") {
    Lexicon lex;
    lex.version_ = std::move(version);
    auto& report = lex.report_;
    report.raw_entries = raw.size();
    std::map<std::vector<std::string>, std::size_t> by_tokens;
    for (const auto& entry : raw) {
      const std::string norm = normalize_term(entry);
      if (norm.empty()) continue;
      const auto variants = expand_parenthesized(norm);
      report.expanded_variants += variants.size() - 1;
      for (const auto& text : variants) {
        auto tokens = tokenize(text);
        if (tokens.empty()) {
          report.warnings.push_back("term '" + text + "' has no word characters; skipped");
          continue;
        }
        if (tokens.size() == 1 && tokens.front() != text) {
          report.warnings.push_back("term '" + text + "' tokenizes to '" + tokens.front() + "'");
        }
        if (by_tokens.count(tokens)) {
          ++report.merged_duplicates;
          continue;
        }
        by_tokens.emplace(tokens, lex.terms_.size());
        lex.terms_.push_back({text, std::move(tokens)});
      }
    }
    if (lex.terms_.empty()) throw DataError("lexicon is empty");
    std::sort(lex.terms_.begin(), lex.terms_.end(),
              [](const LexiconTerm& a, const LexiconTerm& b) { return a.text < b.text; });
    lex.index();
    return lex;
  }

  static Lexicon load(const std::filesystem::path& path) {
    return from_entries(lexicon_detail::read_entries(path), path.filename().string());
  }

  const std::vector<LexiconTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  const std::string& version() const { return version_; }
  const LexiconLoadReport& report() const { return report_; }

  bool contains(std::string_view text) const {
    return std::binary_search(terms_.begin(), terms_.end(), text,
                              [](const auto& a, const auto& b) { return key(a) < key(b); });
  }

  // Single-token entry whose token equals `token`, if any.
  const LexiconTerm* single_token(std::string_view token) const {
    auto it = single_.find(std::string(token));
    return it == single_.end() ? nullptr : &terms_[it->second];
  }

  // Entries starting with `token`, longest first.
  const std::vector<std::size_t>& starting_with(const std::string& token) const {
    static const std::vector<std::size_t> kNone;
    auto it = by_first_.find(token);
    return it == by_first_.end() ? kNone : it->second;
  }

  std::vector<std::string> single_token_terms() const {
    std::vector<std::string> out;
    for (const auto& t : terms_)
      if (!t.is_phrase()) out.push_back(t.text);
    return out;
  }

 private:
  static std::string_view key(const LexiconTerm& t) { return t.text; }
  static std::string_view key(std::string_view s) { return s; }

  void index() {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const auto& t = terms_[i];
      if (!t.is_phrase()) single_.emplace(t.tokens.front(), i);
      by_first_[t.tokens.front()].push_back(i);
    }
    for (auto& [first, ids] : by_first_) {
      std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
        return terms_[a].tokens.size() > terms_[b].tokens.size();
      });
    }
  }

  std::vector<LexiconTerm> terms_;
  std::unordered_map<std::string, std::size_t> single_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_first_;
  std::string version_;
  LexiconLoadReport report_;
};

struct NegationLexicon {
  std::set<std::string> literals;
  std::set<std::string> wildcard_prefixes;  // stored without the trailing '*'

  static NegationLexicon from_entries(const std::vector<std::string>& raw) {
    NegationLexicon neg;
    for (const auto& entry : raw) {
      std::string norm = normalize_term(entry);
      if (norm.empty()) continue;
      if (norm.back() == '*') {
        norm.pop_back();
        if (!norm.empty()) neg.wildcard_prefixes.insert(norm);
      } else {
        neg.literals.insert(norm);
      }
    }
    if (neg.literals.empty() && neg.wildcard_prefixes.empty())
      throw DataError("negation lexicon is empty");
    return neg;
  }

  static NegationLexicon load(const std::filesystem::path& path) {
    return from_entries(lexicon_detail::read_entries(path));
  }
};

}  // namespace polis
