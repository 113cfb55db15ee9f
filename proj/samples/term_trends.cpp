// Loads a corpus, prints per-year size and the yearly frequency of the most
// common lexicon terms, then lists turbulence labels under relaxed thresholds.
//
//   term_trends [corpus.jsonl]

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "polis/polis.hpp"

int main(int argc, char** argv) {
  const std::string data = POLIS_DATA_DIR;
  const std::string input = argc > 1 ? argv[1] : data + "/mini_corpus.jsonl";
  try {
    auto lex = polis::Lexicon::load(data + "/pii_lexicon.txt");
    auto neg = polis::NegationLexicon::load(data + "/negation_lexicon.txt");
    auto store = polis::CorpusStore::build(polis::load_corpus(input).snapshots, neg);

    for (int y : store.years()) {
      const auto row = polis::summary_stats(store, y, polis::SummaryMode::full);
      std::printf("%d  %zu policies  %zu tokens  %zu unique\n", y, row.n_policies, row.n_tokens, row.n_unique_tokens);
    }

    auto series = polis::build_frequency_series(store, lex);
    auto total = [](const polis::TermFrequencySeries& s) {
      return std::accumulate(s.counts.begin(), s.counts.end(), std::uint64_t{0});
    };
    std::sort(series.begin(), series.end(), [&](const auto& a, const auto& b) { return total(a) > total(b); });
    std::printf("\n%-14s", "term");
    for (int y : store.years()) std::printf("%10d", y);
    std::printf("\n");
    for (std::size_t i = 0; i < series.size() && i < 8; ++i) {
      std::printf("%-14s", series[i].term.c_str());
      for (double f : series[i].freqs) std::printf("%10.5f", f);
      std::printf("\n");
    }

    // A five-year toy corpus cannot meet the published support floors.
    polis::TurbulenceParams p;
    p.window_years = 4;
    p.factor = 2.0;
    p.min_support = 10;
    const std::vector<polis::TurbulenceKind> kinds = {polis::TurbulenceKind::rising, polis::TurbulenceKind::falling,
                                                      polis::TurbulenceKind::emergent};
    std::printf("\n");
    for (const auto& l : polis::classify_all(series, p, kinds))
      std::printf("%-14s %-9s %d -> %d  (%.5f -> %.5f)\n", l.term.c_str(), polis::to_string(l.kind), l.start_year(),
                  l.end_year(), l.f_start(), l.f_end());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
