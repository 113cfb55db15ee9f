#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "polis/polis.hpp"

namespace fixtures {

inline polis::WeightedGraph to_graph(const oracle::Matrix& a) {
  polis::WeightedGraph g;
  for (std::size_t i = 0; i < a.size(); ++i) g.add_node("n" + std::to_string(i));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a[i][j] > 0) g.add_edge(static_cast<polis::NodeId>(i), static_cast<polis::NodeId>(j), a[i][j]);
  return g;
}

inline oracle::Matrix complete(std::size_t n, double w = 1.0) {
  auto a = oracle::zeros(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) a[i][j] = w;
  return a;
}

// Words and documents in `groups` aligned groups; each word of group g
// appears `within` times in every document of group g and `cross` times
// elsewhere.
struct Planted {
  polis::BipartiteCountGraph graph;
  oracle::Matrix counts;  // [word][doc]
  std::vector<std::uint32_t> word_group, doc_group;
};

inline Planted planted_bipartite(std::size_t groups, std::size_t words_per, std::size_t docs_per,
                                 std::uint64_t within, std::uint64_t cross) {
  Planted p;
  const std::size_t nw = groups * words_per, nd = groups * docs_per;
  p.counts.assign(nw, std::vector<double>(nd, 0.0));
  for (std::size_t w = 0; w < nw; ++w) {
    p.graph.words.push_back("w" + std::string(w < 10 ? "0" : "") + std::to_string(w));
    p.word_group.push_back(static_cast<std::uint32_t>(w / words_per));
  }
  for (std::size_t d = 0; d < nd; ++d) {
    p.graph.docs.push_back("d" + std::to_string(d));
    p.doc_group.push_back(static_cast<std::uint32_t>(d / docs_per));
  }
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t d = 0; d < nd; ++d) {
      const auto c = p.word_group[w] == p.doc_group[d] ? within : cross;
      if (c == 0) continue;
      p.graph.entries.push_back({static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(d), c});
      p.graph.total += c;
      p.counts[w][d] = static_cast<double>(c);
    }
  return p;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("polis_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path data_file(const std::string& name) { return std::filesystem::path(POLIS_DATA_DIR) / name; }

}  // namespace fixtures
