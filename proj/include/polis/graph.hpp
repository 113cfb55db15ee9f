#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace polis {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 0.0;
  bool operator==(const Edge&) const = default;
};

// Undirected weighted simple graph with named nodes. Neighbor maps are
// ordered, so every traversal is deterministic.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(std::vector<std::string> names) {
    for (auto& n : names) add_node(std::move(n));
  }

  NodeId add_node(std::string name) {
    if (auto it = index_.find(name); it != index_.end()) return it->second;
    const auto id = static_cast<NodeId>(names_.size());
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    adj_.emplace_back();
    return id;
  }

  // Accumulates weight on (u, v).
  void add_edge(NodeId u, NodeId v, double w) {
    if (u == v) throw std::invalid_argument("self-loops are not allowed");
    if (u >= adj_.size() || v >= adj_.size()) throw std::out_of_range("unknown node");
    auto [it, fresh] = adj_[u].try_emplace(v, 0.0);
    if (fresh) ++edge_count_;
    it->second += w;
    adj_[v][u] = it->second;
  }

  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  bool empty() const { return names_.empty(); }

  const std::string& name(NodeId v) const { return names_[v]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<NodeId> find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? std::nullopt : std::optional<NodeId>(it->second);
  }

  const std::map<NodeId, double>& neighbors(NodeId v) const { return adj_[v]; }
  std::size_t degree(NodeId v) const { return adj_[v].size(); }
  double strength(NodeId v) const {
    double s = 0.0;
    for (const auto& [_, w] : adj_[v]) s += w;
    return s;
  }
  double weight(NodeId u, NodeId v) const {
    auto it = adj_[u].find(v);
    return it == adj_[u].end() ? 0.0 : it->second;
  }

  // Each edge once, u < v, ordered by (u, v).
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < adj_.size(); ++u)
      for (const auto& [v, w] : adj_[u])
        if (u < v) out.push_back({u, v, w});
    return out;
  }

  double total_weight() const {
    double t = 0.0;
    for (const auto& e : edges()) t += e.weight;
    return t;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::map<NodeId, double>> adj_;
  std::size_t edge_count_ = 0;
};

}  // namespace polis
