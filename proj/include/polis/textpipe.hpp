#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polis/lexicon.hpp"
#include "polis/tokenize.hpp"

namespace polis {

struct Sentence {
  std::size_t index = 0;   // position within the source text, from 0
  std::size_t offset = 0;  // byte offset of `text` in the source
  std::string_view text;   // trimmed span, borrowed from the source
};

namespace textpipe_detail {

inline bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }
inline bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace textpipe_detail

// Splits on sentence terminators followed by whitespace, on blank lines, and
// puts every markdown heading ("#...") or table row ("|...") in a unit of its
// own. Only whitespace falls between units.
inline std::vector<Sentence> segment_sentences(std::string_view text) {
  using namespace textpipe_detail;
  std::vector<Sentence> out;
  constexpr auto npos = std::string_view::npos;
  std::size_t start = npos, last = 0;  // last = one past the last non-space byte
  auto emit = [&](std::size_t end) {
    if (start != npos && end > start) out.push_back({out.size(), start, text.substr(start, end - start)});
    start = npos;
  };

  std::size_t line_begin = 0;
  while (line_begin < text.size()) {
    std::size_t line_end = text.find('\n', line_begin);
    if (line_end == npos) line_end = text.size();
    std::size_t first = line_begin;
    while (first < line_end && is_blank(text[first])) ++first;

    if (first == line_end) {
      emit(last);  // blank line closes the paragraph
    } else if (text[first] == '#' || text[first] == '|') {
      emit(last);
      std::size_t end = line_end;
      while (end > first && is_blank(text[end - 1])) --end;
      start = first;
      emit(end);
    } else {
      for (std::size_t i = first; i < line_end; ++i) {
        const char c = text[i];
        if (is_blank(c)) continue;
        if (start == npos) start = i;
        last = i + 1;
        if (is_terminator(c)) {
          std::size_t j = i + 1;
          while (j < line_end && is_terminator(text[j])) ++j;
          if (j == line_end || is_blank(text[j])) {
            last = j;
            emit(j);
          }
          i = j - 1;
        }
      }
    }
    line_begin = line_end + 1;
  }
  emit(last);
  return out;
}

inline bool is_negated(std::string_view sentence, const NegationLexicon& neg, bool wildcards) {
  for (const auto& word : scan_words(sentence)) {
    if (neg.literals.count(word)) return true;
    if (wildcards) {
      for (const auto& prefix : neg.wildcard_prefixes)
        if (word.starts_with(prefix)) return true;
    }
  }
  return false;
}

// Drops every sentence containing a negation word. Survivors keep their
// order and original indices.
inline std::vector<Sentence> filter_negation(std::span<const Sentence> sentences,
                                             const NegationLexicon& neg, bool wildcards = false) {
  std::vector<Sentence> kept;
  for (const auto& s : sentences)
    if (!is_negated(s.text, neg, wildcards)) kept.push_back(s);
  return kept;
}

enum class MatchMode { single_token, phrase };

struct TermOccurrences {
  std::map<std::string, std::uint64_t> counts;  // lexicon term -> matches
  std::uint64_t total = 0;                      // sum of counts
  std::uint64_t tokens_consumed = 0;            // tokens covered by matches
};

inline TermOccurrences match_lexicon(std::span<const std::string> tokens, const Lexicon& lexicon,
                                     MatchMode mode = MatchMode::single_token) {
  TermOccurrences occ;
  const auto& terms = lexicon.terms();
  std::size_t i = 0;
  while (i < tokens.size()) {
    const LexiconTerm* hit = nullptr;
    if (mode == MatchMode::single_token) {
      hit = lexicon.single_token(tokens[i]);
    } else {
      for (std::size_t id : lexicon.starting_with(tokens[i])) {
        const auto& cand = terms[id].tokens;
        if (cand.size() > tokens.size() - i) continue;
        if (std::equal(cand.begin(), cand.end(), tokens.begin() + static_cast<long>(i))) {
          hit = &terms[id];
          break;
        }
      }
    }
    if (hit) {
      ++occ.counts[hit->text];
      ++occ.total;
      const std::size_t len = mode == MatchMode::phrase ? hit->tokens.size() : 1;
      occ.tokens_consumed += len;
      i += len;
    } else {
      ++i;
    }
  }
  return occ;
}

struct CleanOptions {
  bool wildcard_negation = false;
};

struct CleanedText {
  std::vector<std::string> tokens;
  std::size_t sentences_in = 0;
  std::size_t sentences_dropped = 0;
};

// segment -> negation filter -> tokenize (lowercasing happens in tokenize).
inline CleanedText clean_text(std::string_view text, const NegationLexicon& neg,
                              const CleanOptions& opts = {}) {
  CleanedText out;
  const auto sentences = segment_sentences(text);
  const auto kept = filter_negation(sentences, neg, opts.wildcard_negation);
  out.sentences_in = sentences.size();
  out.sentences_dropped = sentences.size() - kept.size();
  for (const auto& s : kept) {
    auto toks = tokenize(s.text);
    out.tokens.insert(out.tokens.end(), std::make_move_iterator(toks.begin()),
                      std::make_move_iterator(toks.end()));
  }
  return out;
}

}  // namespace polis
