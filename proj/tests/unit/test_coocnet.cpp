#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"

using namespace polis;

namespace {

TermOccurrences occ(std::map<std::string, std::uint64_t> counts) {
  TermOccurrences o;
  o.counts = std::move(counts);
  for (const auto& [_, c] : o.counts) o.total += c;
  return o;
}

std::set<std::pair<std::string, std::string>> edge_names(const WeightedGraph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& e : g.edges()) out.insert(std::minmax(g.name(e.u), g.name(e.v)));
  return out;
}

}  // namespace

TEST(Cooccurrence, DirectCount) {
  std::vector<TermOccurrences> docs = {occ({{"a", 1}, {"b", 1}}), occ({{"a", 1}, {"b", 1}}), occ({{"a", 1}, {"c", 1}})};
  auto cg = build_cooccurrence(2019, docs);
  const auto& g = cg.graph;
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.weight(*g.find("a"), *g.find("b")), 2.0);
  EXPECT_EQ(g.weight(*g.find("a"), *g.find("c")), 1.0);
  EXPECT_EQ(g.weight(*g.find("b"), *g.find("c")), 0.0);
}

TEST(Cooccurrence, PresenceSemantics) {
  std::vector<TermOccurrences> docs = {occ({{"cookies", 5}, {"beacons", 1}})};
  auto g = build_cooccurrence(2019, docs).graph;
  EXPECT_EQ(g.weight(*g.find("cookies"), *g.find("beacons")), 1.0);
}

TEST(Cooccurrence, NoSharedTermsIsEdgeless) {
  std::vector<TermOccurrences> docs = {occ({{"a", 2}}), occ({{"b", 1}})};
  auto g = build_cooccurrence(2019, docs).graph;
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(Cooccurrence, PropertyWeightBoundedByEndpointDocCounts) {
  std::mt19937_64 rng(8);
  std::bernoulli_distribution has(0.4);
  std::uniform_int_distribution<std::uint64_t> count(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TermOccurrences> docs;
    for (int d = 0; d < 15; ++d) {
      std::map<std::string, std::uint64_t> m;
      for (char t = 'a'; t <= 'h'; ++t)
        if (has(rng)) m[std::string(1, t)] = count(rng);
      docs.push_back(occ(m));
    }
    auto cg = build_cooccurrence(2000, docs);
    for (const auto& e : cg.graph.edges()) {
      const auto lim = std::min(cg.doc_counts.at(cg.graph.name(e.u)), cg.doc_counts.at(cg.graph.name(e.v)));
      EXPECT_LE(e.weight, static_cast<double>(lim));
    }
  }
}

TEST(Prune, RemovesIsolatesOnly) {
  WeightedGraph g({"a", "b", "c"});
  g.add_edge(0, 1, 1.0);
  auto p = prune_isolates(g);
  EXPECT_EQ(p.node_count(), 2u);
  EXPECT_EQ(prune_isolates(WeightedGraph({"x", "y"})).node_count(), 0u);
  auto k = fixtures::to_graph(fixtures::complete(4));
  EXPECT_EQ(edge_names(prune_isolates(k)), edge_names(k));
  EXPECT_EQ(prune_isolates(k).names(), k.names());
}

TEST(Metrics, DensityAndDegree) {
  EXPECT_DOUBLE_EQ(density(2, 1), 1.0);
  EXPECT_THROW(density(1, 0), DomainError);
  EXPECT_EQ(average_degree(5, 0), 0.0);
  EXPECT_NEAR(density(26, 192), 0.5908, 1e-4);
  EXPECT_NEAR(average_degree(26, 192), 14.769, 1e-3);
}

TEST(Metrics, ClusteringSmallGraphs) {
  EXPECT_DOUBLE_EQ(average_clustering(fixtures::to_graph(fixtures::complete(3))), 1.0);
  WeightedGraph path({"a", "b", "c"});
  path.add_edge(0, 1, 1.0);
  path.add_edge(1, 2, 1.0);
  EXPECT_DOUBLE_EQ(average_clustering(path), 0.0);
  // K4 minus one edge: two nodes at 1, two at 2/3 -> 5/6
  auto a = fixtures::complete(4);
  a[0][1] = a[1][0] = 0;
  EXPECT_NEAR(average_clustering(fixtures::to_graph(a)), 5.0 / 6.0, 1e-12);
}

TEST(Metrics, ClusteringMatchesOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = oracle::random_graph(rng, 3 + trial % 10, 0.5);
    EXPECT_NEAR(average_clustering(fixtures::to_graph(a)), oracle::average_clustering(a), 1e-12);
  }
}

TEST(Modularity, TwoTrianglesIsOneHalf) {
  auto a = oracle::zeros(6);
  for (auto [i, j] : {std::pair{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}) a[i][j] = a[j][i] = 1;
  auto g = fixtures::to_graph(a);
  EXPECT_NEAR(modularity(g, {0, 0, 0, 1, 1, 1}), 0.5, 1e-12);
  EXPECT_NEAR(oracle::best_modularity(a), 0.5, 1e-12);
  auto found = detect_communities(g, 10, 1);
  EXPECT_NEAR(found.modularity, 0.5, 1e-12);
  EXPECT_EQ(found.communities, 2u);
}

TEST(Modularity, EdgelessIsZero) { EXPECT_EQ(modularity(WeightedGraph({"a", "b"}), {0, 1}), 0.0); }

TEST(Modularity, MatchesOracleOnRandomPartitions) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 9;
    auto a = oracle::random_graph(rng, n, 0.5, trial % 2);
    std::uniform_int_distribution<std::uint32_t> label(0, static_cast<std::uint32_t>(n - 1));
    Partition p(n);
    for (auto& x : p) x = label(rng);
    p = coocnet_detail::relabel(p);
    EXPECT_NEAR(modularity(fixtures::to_graph(a), p), oracle::modularity(a, p), 1e-12);
    EXPECT_NEAR(modularity(fixtures::to_graph(a), Partition(n, 0)), 0.0, 1e-12);
  }
}

TEST(Louvain, CloseToExhaustiveOptimum) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = oracle::random_graph(rng, 5 + trial % 4, 0.45);
    auto g = fixtures::to_graph(a);
    if (g.edge_count() == 0) continue;
    const double best = oracle::best_modularity(a);
    auto found = detect_communities(g, 10, 7);
    EXPECT_LE(found.modularity, best + 1e-12);
    EXPECT_GE(found.modularity, best - 0.05) << "trial " << trial;
    EXPECT_NEAR(found.modularity, modularity(g, found.partition), 1e-12);
  }
}

TEST(Louvain, SeedDeterminism) {
  std::mt19937_64 rng(5);
  auto g = fixtures::to_graph(oracle::random_graph(rng, 30, 0.2));
  auto a = detect_communities(g, 5, 123), b = detect_communities(g, 5, 123);
  EXPECT_EQ(a.partition, b.partition);
  EXPECT_EQ(a.modularity, b.modularity);
}

TEST(Backbone, SignificanceFormula) {
  // Node with k = 2, equal weights: (1 - 0.5)^1
  WeightedGraph g({"a", "b", "c"});
  g.add_edge(0, 1, 3.0);
  g.add_edge(0, 2, 3.0);
  EXPECT_DOUBLE_EQ(disparity_significance(g, 0, 1), 0.5);
  EXPECT_EQ(disparity_significance(g, 1, 0), 1.0);  // degree-1 endpoint
  EXPECT_EQ(disparity_backbone(g, {0.05}).edge_count(), 0u);
}

TEST(Backbone, UniformCompleteGraphIsEmpty) {
  auto bb = disparity_backbone(fixtures::to_graph(fixtures::complete(10)), {0.05});
  EXPECT_EQ(bb.edge_count(), 0u);
}

TEST(Backbone, AlphaOutOfRange) {
  auto g = fixtures::to_graph(fixtures::complete(3));
  EXPECT_THROW(disparity_backbone(g, {0.0}), DomainError);
  EXPECT_THROW(disparity_backbone(g, {1.0}), DomainError);
}

TEST(Backbone, PropertyAlphaMonotone) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::size_t> size(2, 30);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = fixtures::to_graph(oracle::random_graph(rng, size(rng), 0.3, false));
    auto prev = edge_names(disparity_backbone(g, {0.01}));
    for (double alpha : {0.05, 0.1, 0.3, 0.6, 0.99}) {
      auto cur = edge_names(disparity_backbone(g, {alpha}));
      EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
      prev = std::move(cur);
    }
  }
}

TEST(Ranks, DegreeAndStrength) {
  WeightedGraph star({"hub", "a", "b", "c", "d", "e"});
  for (NodeId v = 1; v <= 5; ++v) star.add_edge(0, v, 1.0);
  std::vector<double> deg;
  for (const auto& r : rank_distribution(star, RankKind::degree)) deg.push_back(r.value);
  EXPECT_EQ(deg, (std::vector<double>{5, 1, 1, 1, 1, 1}));
  WeightedGraph one({"x", "y"});
  one.add_edge(0, 1, 7.0);
  std::vector<double> str;
  for (const auto& r : rank_distribution(one, RankKind::strength)) str.push_back(r.value);
  EXPECT_EQ(str, (std::vector<double>{7, 7}));
}

TEST(Ranks, PropertyNonIncreasing) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = fixtures::to_graph(oracle::random_graph(rng, 1 + trial % 20, 0.3));
    for (auto kind : {RankKind::degree, RankKind::strength}) {
      auto r = rank_distribution(g, kind);
      for (std::size_t i = 1; i < r.size(); ++i) {
        EXPECT_GE(r[i - 1].value, r[i].value);
        EXPECT_EQ(r[i].rank, i + 1);
      }
    }
  }
}

TEST(Export, EdgeListAndGraphml) {
  WeightedGraph g({"a&b", "c"});
  g.add_edge(0, 1, 2.5);
  EXPECT_EQ(edge_list_tsv(g), "source\ttarget\tweight\na&b\tc\t2.5\n");
  const auto xml = graphml(g);
  EXPECT_NE(xml.find("a&amp;b"), std::string::npos);
  EXPECT_NE(xml.find("<edge source=\"n0\" target=\"n1\"><data key=\"weight\">2.5</data></edge>"), std::string::npos);
}

TEST(Export, MetricsRowForEdgelessGraph) {
  auto m = compute_metrics(2001, WeightedGraph({"a", "b"}));
  EXPECT_EQ(m.edges, 0u);
  EXPECT_EQ(m.modularity, 0.0);
  EXPECT_EQ(m.blocks, 1u);
}
