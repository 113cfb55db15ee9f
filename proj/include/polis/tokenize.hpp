#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "polis/unicode.hpp"

namespace polis {

// Maximal runs of word characters, lowercased, in order of appearance.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (std::size_t pos = 0; pos < text.size();) {
    const char32_t cp = unicode::decode(text, pos);
    if (unicode::is_word_char(cp)) {
      unicode::append_utf8(current, unicode::to_lower(cp));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

// Word scan that keeps internal apostrophes ("don't", "can’t" -> "can't") so
// contractions can be compared before tokenization splits them. Leading and
// trailing apostrophes are trimmed.
inline std::vector<std::string> scan_words(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    while (!current.empty() && current.back() == '\'') current.pop_back();
    if (!current.empty()) words.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t pos = 0; pos < text.size();) {
    const char32_t cp = unicode::decode(text, pos);
    if (unicode::is_word_char(cp)) {
      unicode::append_utf8(current, unicode::to_lower(cp));
    } else if (unicode::is_apostrophe(cp) && !current.empty()) {
      current.push_back('\'');
    } else {
      flush();
    }
  }
  flush();
  return words;
}

}  // namespace polis
