// Builds one year's term co-occurrence network and shows how the disparity
// backbone shrinks as alpha tightens.
//
//   cooc_backbone [corpus.jsonl] [year]

#include <cstdio>
#include <cstdlib>

#include "polis/polis.hpp"

int main(int argc, char** argv) {
  const std::string data = POLIS_DATA_DIR;
  const std::string input = argc > 1 ? argv[1] : data + "/mini_corpus.jsonl";
  try {
    auto lex = polis::Lexicon::load(data + "/pii_lexicon.txt");
    auto neg = polis::NegationLexicon::load(data + "/negation_lexicon.txt");
    auto store = polis::CorpusStore::build(polis::load_corpus(input).snapshots, neg);
    const int year = argc > 2 ? std::atoi(argv[2]) : store.years().back();

    std::vector<polis::TermOccurrences> docs;
    for (const auto& d : store.at(year).docs) docs.push_back(polis::match_lexicon(d.tokens, lex));
    auto g = polis::prune_isolates(polis::build_cooccurrence(year, docs).graph);
    if (g.empty()) {
      std::printf("%d: no co-occurring terms\n", year);
      return 0;
    }

    const auto m = polis::compute_metrics(year, g);
    std::printf("%d: %zu terms, %zu edges, density %.3f, Q %.3f in %zu communities, %zu blocks\n", year, m.nodes,
                m.edges, m.density, m.modularity, m.communities, m.blocks);
    for (double alpha : {0.5, 0.2, 0.05, 0.01}) {
      auto bb = polis::disparity_backbone(g, {alpha});
      std::printf("  alpha %.2f: %zu edges kept\n", alpha, bb.edge_count());
    }
    std::printf("\nstrongest terms:\n");
    auto ranks = polis::rank_distribution(g, polis::RankKind::strength);
    for (std::size_t i = 0; i < ranks.size() && i < 5; ++i)
      std::printf("  %zu. %-14s %g\n", ranks[i].rank, ranks[i].node.c_str(), ranks[i].value);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
