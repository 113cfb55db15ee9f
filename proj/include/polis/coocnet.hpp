#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "polis/blockmodel.hpp"
#include "polis/error.hpp"
#include "polis/graph.hpp"
#include "polis/io.hpp"
#include "polis/rng.hpp"
#include "polis/textpipe.hpp"

namespace polis {

struct CooccurrenceGraph {
  int year = 0;
  WeightedGraph graph;
  std::map<std::string, std::uint64_t> doc_counts;  // documents containing each term
};

// Edge weight = number of documents containing both terms. Repeats within
// a document count once.
inline CooccurrenceGraph build_cooccurrence(int year, std::span<const TermOccurrences> docs) {
  CooccurrenceGraph out;
  out.year = year;
  std::map<std::pair<std::string, std::string>, std::uint64_t> pairs;
  for (const auto& doc : docs) {
    std::vector<std::string> present;
    for (const auto& [term, c] : doc.counts)
      if (c > 0) present.push_back(term);  // map order: sorted
    for (std::size_t i = 0; i < present.size(); ++i) {
      ++out.doc_counts[present[i]];
      for (std::size_t j = i + 1; j < present.size(); ++j) ++pairs[{present[i], present[j]}];
    }
  }
  for (const auto& [term, _] : out.doc_counts) out.graph.add_node(term);
  for (const auto& [p, w] : pairs)
    out.graph.add_edge(*out.graph.find(p.first), *out.graph.find(p.second), static_cast<double>(w));
  return out;
}

// Removes degree-0 nodes; edges untouched.
inline WeightedGraph prune_isolates(const WeightedGraph& g) {
  WeightedGraph out;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (g.degree(v) > 0) out.add_node(g.name(v));
  for (const auto& e : g.edges()) out.add_edge(*out.find(g.name(e.u)), *out.find(g.name(e.v)), e.weight);
  return out;
}

inline WeightedGraph unit_weights(const WeightedGraph& g) {
  WeightedGraph out(g.names());
  for (const auto& e : g.edges()) out.add_edge(e.u, e.v, 1.0);
  return out;
}

inline double density(std::size_t nodes, std::size_t edges) {
  if (nodes < 2) throw DomainError("density needs at least two nodes");
  return 2.0 * static_cast<double>(edges) / (static_cast<double>(nodes) * static_cast<double>(nodes - 1));
}
inline double density(const WeightedGraph& g) { return density(g.node_count(), g.edge_count()); }

inline double average_degree(std::size_t nodes, std::size_t edges) {
  if (nodes < 1) throw DomainError("average degree of an empty graph");
  return 2.0 * static_cast<double>(edges) / static_cast<double>(nodes);
}
inline double average_degree(const WeightedGraph& g) { return average_degree(g.node_count(), g.edge_count()); }

// Unweighted local clustering, averaged over all nodes (deg < 2 counts 0).
inline double average_clustering(const WeightedGraph& g) {
  if (g.empty()) throw DomainError("average clustering of an empty graph");
  double sum = 0.0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto& nv = g.neighbors(v);
    const double k = static_cast<double>(nv.size());
    if (nv.size() < 2) continue;
    std::size_t links = 0;  // each triangle seen twice
    for (const auto& [u, _] : nv) {
      const auto& nu = g.neighbors(u);
      auto a = nv.begin(), b = nu.begin();
      while (a != nv.end() && b != nu.end()) {
        if (a->first < b->first) ++a;
        else if (b->first < a->first) ++b;
        else {
          ++links;
          ++a;
          ++b;
        }
      }
    }
    sum += static_cast<double>(links) / (k * (k - 1.0));
  }
  return sum / static_cast<double>(g.node_count());
}

using Partition = std::vector<std::uint32_t>;

// Q = sum_c [ w_c / W - (s_c / 2W)^2 ], W total edge weight, w_c weight inside
// c, s_c summed strength of c. Edgeless graphs score 0.
inline double modularity(const WeightedGraph& g, const Partition& part) {
  if (part.size() != g.node_count()) throw std::invalid_argument("partition size mismatch");
  const std::size_t nc = part.empty() ? 0 : *std::max_element(part.begin(), part.end()) + 1;
  std::vector<double> inside(nc, 0.0), strength(nc, 0.0);
  double total = 0.0;
  for (const auto& e : g.edges()) {
    total += e.weight;
    if (part[e.u] == part[e.v]) inside[part[e.u]] += e.weight;
    strength[part[e.u]] += e.weight;
    strength[part[e.v]] += e.weight;
  }
  if (total == 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t c = 0; c < nc; ++c) {
    const double frac = strength[c] / (2.0 * total);
    q += inside[c] / total - frac * frac;
  }
  return q;
}

struct CommunityResult {
  Partition partition;
  double modularity = 0.0;
  std::size_t communities = 0;
};

namespace coocnet_detail {

// Aggregated level graph for the Louvain passes; self-loop weight counted once.
struct LevelGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
  std::vector<double> self;
  std::size_t size() const { return adj.size(); }
};

inline Partition relabel(const Partition& p) {
  std::map<std::uint32_t, std::uint32_t> remap;
  Partition out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    out[i] = remap.try_emplace(p[i], static_cast<std::uint32_t>(remap.size())).first->second;
  return out;
}

// Local moving on one level; returns community per level node.
inline Partition local_moves(const LevelGraph& lg, double m2, Rng& rng, bool& moved_any) {
  const std::size_t n = lg.size();
  Partition comm(n);
  std::iota(comm.begin(), comm.end(), 0u);
  std::vector<double> k(n, 0.0), tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = 2.0 * lg.self[i];
    for (const auto& [j, w] : lg.adj[i]) k[i] += w;
    tot[i] = k[i];
  }
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<double> link(n, 0.0);
  std::vector<std::uint32_t> seen;
  moved_any = false;
  for (bool improved = true; improved;) {
    improved = false;
    for (auto i : order) {
      const auto old = comm[i];
      seen.clear();
      for (const auto& [j, w] : lg.adj[i]) {
        if (link[comm[j]] == 0.0) seen.push_back(comm[j]);
        link[comm[j]] += w;
      }
      tot[old] -= k[i];
      auto gain = [&](std::uint32_t c) { return link[c] - tot[c] * k[i] / m2; };
      std::uint32_t best = old;
      double best_gain = gain(old);
      for (auto c : seen) {
        const double g = gain(c);
        if (g > best_gain + 1e-12) {
          best_gain = g;
          best = c;
        }
      }
      tot[best] += k[i];
      for (auto c : seen) link[c] = 0.0;
      link[old] = 0.0;
      if (best != old) {
        comm[i] = best;
        improved = moved_any = true;
      }
    }
  }
  return relabel(comm);
}

inline LevelGraph aggregate(const LevelGraph& lg, const Partition& comm) {
  const std::size_t nc = comm.empty() ? 0 : *std::max_element(comm.begin(), comm.end()) + 1;
  std::vector<std::map<std::uint32_t, double>> acc(nc);
  LevelGraph out;
  out.self.assign(nc, 0.0);
  for (std::size_t i = 0; i < lg.size(); ++i) {
    out.self[comm[i]] += lg.self[i];
    for (const auto& [j, w] : lg.adj[i]) {
      if (comm[i] == comm[j]) {
        if (i < j) out.self[comm[i]] += w;
      } else {
        acc[comm[i]][comm[j]] += w;
      }
    }
  }
  out.adj.resize(nc);
  for (std::size_t c = 0; c < nc; ++c) out.adj[c].assign(acc[c].begin(), acc[c].end());
  return out;
}

inline Partition louvain_once(const WeightedGraph& g, Rng& rng) {
  LevelGraph lg;
  lg.adj.resize(g.node_count());
  lg.self.assign(g.node_count(), 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) lg.adj[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
  const double m2 = 2.0 * g.total_weight();
  Partition membership(g.node_count());
  std::iota(membership.begin(), membership.end(), 0u);
  if (m2 == 0.0) return membership;
  for (;;) {
    bool moved = false;
    const auto comm = local_moves(lg, m2, rng, moved);
    if (!moved) break;
    for (auto& c : membership) c = comm[c];
    lg = aggregate(lg, comm);
  }
  return relabel(membership);
}

}  // namespace coocnet_detail

// Louvain-style greedy modularity maximization, best of `runs` seeded runs.
inline CommunityResult detect_communities(const WeightedGraph& g, std::size_t runs = 10, std::uint64_t seed = 42) {
  if (g.empty()) throw DomainError("community detection on an empty graph");
  CommunityResult best;
  bool have = false;
  for (std::size_t r = 0; r < std::max<std::size_t>(runs, 1); ++r) {
    auto rng = make_rng(seed, "louvain:" + std::to_string(r));
    auto part = coocnet_detail::louvain_once(g, rng);
    const double q = modularity(g, part);
    if (!have || q > best.modularity + 1e-12) {
      best.partition = std::move(part);
      best.modularity = q;
      have = true;
    }
  }
  best.communities = *std::max_element(best.partition.begin(), best.partition.end()) + 1;
  return best;
}

inline sbm::BlockGraph to_block_graph(const WeightedGraph& g) {
  sbm::BlockGraph bg;
  for (NodeId v = 0; v < g.node_count(); ++v) bg.add_node(0);
  for (const auto& e : g.edges()) bg.add_edge(e.u, e.v, e.weight);
  return bg;
}

// Number of blocks in the minimum-description-length unipartite fit.
inline std::size_t count_blocks(const WeightedGraph& g, std::uint64_t seed = 42, std::size_t max_blocks = 0) {
  if (g.empty()) throw DomainError("block count of an empty graph");
  if (g.edge_count() == 0) return 1;
  sbm::FitOptions opts;
  opts.seed = seed;
  opts.max_blocks = max_blocks;
  return sbm::fit(to_block_graph(g), opts).blocks[0];
}

// Disparity significance of edge (v, u) from v's side: (1 - w/s_v)^(k_v - 1).
// Nodes of degree < 2 cannot certify an edge; they report 1.
inline double disparity_significance(const WeightedGraph& g, NodeId v, NodeId u) {
  const std::size_t k = g.degree(v);
  if (k < 2) return 1.0;
  const double p = g.weight(v, u) / g.strength(v);
  return std::pow(1.0 - p, static_cast<double>(k - 1));
}

struct BackboneParams {
  double alpha = 0.05;
};

// Keeps an edge when it is significant (below alpha) for at least one endpoint.
inline WeightedGraph disparity_backbone(const WeightedGraph& g, const BackboneParams& params = {}) {
  if (!(params.alpha > 0.0 && params.alpha < 1.0)) throw DomainError("alpha must lie strictly between 0 and 1");
  std::vector<Edge> kept;
  for (const auto& e : g.edges()) {
    if (disparity_significance(g, e.u, e.v) < params.alpha || disparity_significance(g, e.v, e.u) < params.alpha)
      kept.push_back(e);
  }
  std::set<NodeId> nodes;
  for (const auto& e : kept) nodes.insert({e.u, e.v});
  WeightedGraph out;
  for (auto v : nodes) out.add_node(g.name(v));
  for (const auto& e : kept) out.add_edge(*out.find(g.name(e.u)), *out.find(g.name(e.v)), e.weight);
  return out;
}

enum class RankKind { degree, strength };

struct RankedValue {
  std::size_t rank = 0;  // from 1
  double value = 0.0;
  std::string node;
};

inline std::vector<RankedValue> rank_distribution(const WeightedGraph& g, RankKind kind) {
  std::vector<RankedValue> out;
  for (NodeId v = 0; v < g.node_count(); ++v)
    out.push_back({0, kind == RankKind::degree ? static_cast<double>(g.degree(v)) : g.strength(v), g.name(v)});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.value > b.value; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

struct GraphMetrics {
  int year = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double modularity = 0.0;
  std::size_t communities = 0;
  std::size_t blocks = 0;
  double avg_clustering = 0.0;
  double avg_degree = 0.0;
  double density = 0.0;
};

struct MetricsOptions {
  std::size_t runs = 10;
  std::uint64_t seed = 42;
  bool unweighted_q = false;
};

// Full metric row on an isolate-free graph. Graphs with fewer than two
// nodes get zeros where a metric is undefined.
inline GraphMetrics compute_metrics(int year, const WeightedGraph& g, const MetricsOptions& opts = {}) {
  GraphMetrics m;
  m.year = year;
  m.nodes = g.node_count();
  m.edges = g.edge_count();
  if (g.empty()) return m;
  const auto seed = derive_seed(opts.seed, "year:" + std::to_string(year));
  auto comm = detect_communities(opts.unweighted_q ? unit_weights(g) : g, opts.runs, seed);
  m.modularity = comm.modularity;
  m.communities = comm.communities;
  m.blocks = count_blocks(g, seed);
  m.avg_clustering = average_clustering(g);
  m.avg_degree = average_degree(g);
  m.density = m.nodes >= 2 ? density(g) : 0.0;
  return m;
}

inline std::string metrics_csv(std::span<const GraphMetrics> rows) {
  std::string out = "year,nodes,edges,modularity,classes,blocks,avg_clustering,avg_degree,density\n";
  for (const auto& m : rows)
    out += std::to_string(m.year) + ',' + std::to_string(m.nodes) + ',' + std::to_string(m.edges) + ',' +
           io::format_double(m.modularity) + ',' + std::to_string(m.communities) + ',' + std::to_string(m.blocks) +
           ',' + io::format_double(m.avg_clustering) + ',' + io::format_double(m.avg_degree) + ',' +
           io::format_double(m.density) + '\n';
  return out;
}

inline std::string edge_list_tsv(const WeightedGraph& g) {
  std::string out = "source\ttarget\tweight\n";
  for (const auto& e : g.edges()) out += g.name(e.u) + '\t' + g.name(e.v) + '\t' + io::format_double(e.weight) + '\n';
  return out;
}

namespace coocnet_detail {
inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}
}  // namespace coocnet_detail

inline std::string graphml(const WeightedGraph& g, const Partition* communities = nullptr) {
  using coocnet_detail::xml_escape;
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
      "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n"
      "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
      "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out += "    <node id=\"n" + std::to_string(v) + "\"><data key=\"label\">" + xml_escape(g.name(v)) + "</data>";
    if (communities) out += "<data key=\"community\">" + std::to_string((*communities)[v]) + "</data>";
    out += "</node>\n";
  }
  for (const auto& e : g.edges())
    out += "    <edge source=\"n" + std::to_string(e.u) + "\" target=\"n" + std::to_string(e.v) +
           "\"><data key=\"weight\">" + io::format_double(e.weight) + "</data></edge>\n";
  out += "  </graph>\n</graphml>\n";
  return out;
}

}  // namespace polis
