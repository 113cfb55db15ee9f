#pragma once

// Flat Poisson stochastic block model with a two-part description length,
// fitted by greedy agglomeration and single-node moves. Serves both the
// bipartite word-document topic model (two node sides that never share a
// block) and the unipartite block count of co-occurrence graphs.
//
// With m_rs the symmetric block edge-count matrix (diagonal counted twice),
// e_r = sum_s m_rs and n_r the block size, the likelihood part is
//
//   E - 1/2 sum_rs m_rs ln m_rs + sum_r e_r ln n_r + sum_edges ln A!
//
// which for a bipartite graph equals the usual
// E - sum_{r in W, s in D} m_rs ln(m_rs / (n_r n_s)) + sum ln A!.
// Model code: bipartite N_w ln B_w + N_d ln B_d + (B_w B_d / 2) ln E;
// unipartite N ln B + (B (B + 1) / 4) ln E.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polis/error.hpp"
#include "polis/rng.hpp"

namespace polis::sbm {

struct Neighbor {
  std::uint32_t node;
  double weight;
};

// Multigraph in the form the fitter consumes. side[v] is 0 or 1; a
// unipartite graph has every node on side 0.
struct BlockGraph {
  bool bipartite = false;
  std::vector<int> side;
  std::vector<std::vector<Neighbor>> adj;
  double total_weight = 0.0;     // E, each edge once
  double log_factorials = 0.0;   // sum over edges of ln(A!)

  std::size_t node_count() const { return side.size(); }
  std::size_t side_size(int s) const {
    return static_cast<std::size_t>(std::count(side.begin(), side.end(), s));
  }

  std::uint32_t add_node(int s) {
    side.push_back(s);
    adj.emplace_back();
    return static_cast<std::uint32_t>(side.size() - 1);
  }

  void add_edge(std::uint32_t u, std::uint32_t v, double w) {
    if (u == v) throw std::invalid_argument("block graph edges must join distinct nodes");
    adj[u].push_back({v, w});
    adj[v].push_back({u, w});
    total_weight += w;
    log_factorials += std::lgamma(w + 1.0);
  }
};

inline double xlogx(double x) { return x > 1e-12 ? x * std::log(x) : 0.0; }
inline double xlogy(double x, double y) { return (x > 1e-12 && y > 0.0) ? x * std::log(y) : 0.0; }

inline double model_code(const BlockGraph& g, std::size_t n0, std::size_t n1, std::size_t b0, std::size_t b1) {
  const double lnE = std::log(g.total_weight);
  if (g.bipartite) {
    return static_cast<double>(n0) * std::log(static_cast<double>(b0)) +
           static_cast<double>(n1) * std::log(static_cast<double>(b1)) +
           static_cast<double>(b0 * b1) / 2.0 * lnE;
  }
  return static_cast<double>(n0) * std::log(static_cast<double>(b0)) +
         static_cast<double>(b0 * (b0 + 1)) / 4.0 * lnE;
}

// Description length (nats) of `block` (any non-negative labels; a label is
// assumed to live on one side only).
inline double description_length(const BlockGraph& g, const std::vector<std::uint32_t>& block) {
  if (!(g.total_weight > 0.0)) throw DomainError("description length needs at least one edge");
  if (block.size() != g.node_count()) throw std::invalid_argument("partition size mismatch");
  const std::size_t nb = block.empty() ? 0 : *std::max_element(block.begin(), block.end()) + 1;
  std::vector<double> m(nb * nb, 0.0), e(nb, 0.0), n(nb, 0.0);
  std::vector<int> bside(nb, -1);
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    n[block[v]] += 1.0;
    if (bside[block[v]] == -1) bside[block[v]] = g.side[v];
    else if (bside[block[v]] != g.side[v]) throw std::invalid_argument("block mixes node sides");
    for (const auto& nb_ : g.adj[v]) {
      m[block[v] * nb + block[nb_.node]] += nb_.weight;
      e[block[v]] += nb_.weight;
    }
  }
  double sum_m = 0.0, sum_e = 0.0;
  for (double x : m) sum_m += xlogx(x);
  std::size_t b[2] = {0, 0};
  for (std::size_t r = 0; r < nb; ++r) {
    sum_e += xlogy(e[r], n[r]);
    if (bside[r] >= 0) ++b[bside[r]];
  }
  const double likelihood = g.total_weight - 0.5 * sum_m + sum_e + g.log_factorials;
  return likelihood + model_code(g, g.side_size(0), g.side_size(1), b[0], b[1]);
}

// Sides up to this size start with one block per node.
inline constexpr std::size_t kSingletonSide = 64;

struct FitOptions {
  std::uint64_t seed = 42;
  std::size_t max_blocks = 0;        // per side; 0 -> max(64, ceil(sqrt(side size)))
  bool record_trace = false;         // DL after every accepted step
  bool verify_steps = false;         // from-scratch DL after every step
  std::size_t max_passes = 10000;
};

struct FitResult {
  std::vector<std::uint32_t> block;  // compact labels, side 0 blocks first
  std::size_t blocks[2] = {0, 0};
  double dl = 0.0;                   // from scratch on the returned partition
  double tracked_dl = 0.0;           // incrementally maintained value
  std::vector<double> trace;
  double max_step_discrepancy = 0.0; // relative, only with verify_steps
  std::size_t accepted_merges = 0;
  std::size_t accepted_moves = 0;
};

namespace detail {

class Fitter {
 public:
  Fitter(const BlockGraph& g, const FitOptions& opts) : g_(g), opts_(opts), rng_(make_rng(opts.seed, "sbm")) {}

  FitResult run() {
    if (!(g_.total_weight > 0.0)) throw DomainError("cannot fit a block model to a graph without edges");
    initialize();
    dl_ = description_length(g_, block_);
    FitResult res;
    if (opts_.record_trace) res.trace.push_back(dl_);
    auto after_step = [&] {
      if (opts_.record_trace) res.trace.push_back(dl_);
      if (opts_.verify_steps) {
        const double scratch = description_length(g_, block_);
        res.max_step_discrepancy =
            std::max(res.max_step_discrepancy, std::abs(scratch - dl_) / std::max(1.0, std::abs(scratch)));
      }
    };
    for (std::size_t pass = 0; pass < opts_.max_passes; ++pass) {
      bool improved = false;
      if (merge_sweep()) {
        ++res.accepted_merges;
        after_step();
        improved = true;
      }
      std::vector<std::uint32_t> order(g_.node_count());
      std::iota(order.begin(), order.end(), 0u);
      std::shuffle(order.begin(), order.end(), rng_);
      for (auto v : order) {
        if (try_move(v)) {
          ++res.accepted_moves;
          after_step();
          improved = true;
        }
      }
      if (!improved) break;
    }
    res.tracked_dl = dl_;
    compact(res);
    res.dl = description_length(g_, res.block);
    if (std::abs(res.dl - res.tracked_dl) > 1e-6 * std::max(1.0, std::abs(res.dl)))
      throw std::logic_error("incremental description length drifted from the recomputed value");
    return res;
  }

 private:
  double& m(std::size_t r, std::size_t s) { return m_[r * nb_ + s]; }

  void initialize() {
    const std::size_t n = g_.node_count();
    block_.assign(n, 0);
    std::size_t next = 0;
    for (int s = 0; s < (g_.bipartite ? 2 : 1); ++s) {
      std::vector<std::uint32_t> members;
      for (std::uint32_t v = 0; v < n; ++v)
        if (g_.side[v] == s) members.push_back(v);
      if (members.empty()) continue;
      std::size_t cap = opts_.max_blocks ? opts_.max_blocks
                                         : std::max<std::size_t>(kSingletonSide, static_cast<std::size_t>(std::ceil(
                                                                                     std::sqrt(double(members.size())))));
      cap = std::clamp<std::size_t>(cap, 1, members.size());
      if (cap < members.size()) std::shuffle(members.begin(), members.end(), rng_);
      for (std::size_t i = 0; i < members.size(); ++i) block_[members[i]] = static_cast<std::uint32_t>(next + i % cap);
      for (std::size_t i = 0; i < cap; ++i) bside_.push_back(s);
      active_[s] = cap;
      next += cap;
    }
    nb_ = next;
    m_.assign(nb_ * nb_, 0.0);
    e_.assign(nb_, 0.0);
    n_.assign(nb_, 0.0);
    for (std::uint32_t v = 0; v < n; ++v) {
      n_[block_[v]] += 1.0;
      for (const auto& nb : g_.adj[v]) {
        m(block_[v], block_[nb.node]) += nb.weight;
        e_[block_[v]] += nb.weight;
      }
    }
    scratch_k_.assign(nb_, 0.0);
  }

  double code(std::size_t b0, std::size_t b1) const {
    return model_code(g_, g_.side_size(0), g_.side_size(1), b0, b1);
  }

  double code_delta(int side, long change) const {
    std::size_t b[2] = {active_[0], active_[1]};
    const double before = code(b[0], b[1]);
    b[side] = static_cast<std::size_t>(static_cast<long>(b[side]) + change);
    return code(b[0], b[1]) - before;
  }

  // ΔDL for merging block r into block t (same side).
  double merge_delta(std::size_t r, std::size_t t) {
    double dsum = 0.0;
    for (std::size_t s = 0; s < nb_; ++s) {
      if (s == r || s == t) continue;
      const double a = m(r, s), b = m(t, s);
      if (a == 0.0) continue;
      dsum += 2.0 * (xlogx(a + b) - xlogx(a) - xlogx(b));
    }
    dsum += xlogx(m(t, t) + m(r, r) + 2.0 * m(r, t)) - xlogx(m(t, t)) - xlogx(m(r, r)) - 2.0 * xlogx(m(r, t));
    const double de = xlogy(e_[r] + e_[t], n_[r] + n_[t]) - xlogy(e_[r], n_[r]) - xlogy(e_[t], n_[t]);
    return -0.5 * dsum + de + code_delta(bside_[r], -1);
  }

  void apply_merge(std::size_t r, std::size_t t) {
    const double mrr = m(r, r), mrt = m(r, t);
    for (std::size_t s = 0; s < nb_; ++s) {
      if (s == r || s == t) continue;
      m(t, s) += m(r, s);
      m(s, t) = m(t, s);
      m(r, s) = m(s, r) = 0.0;
    }
    m(t, t) += mrr + 2.0 * mrt;
    m(r, r) = m(r, t) = m(t, r) = 0.0;
    e_[t] += e_[r];
    n_[t] += n_[r];
    e_[r] = n_[r] = 0.0;
    --active_[bside_[r]];
    for (auto& b : block_)
      if (b == r) b = static_cast<std::uint32_t>(t);
  }

  std::vector<std::size_t> candidates_for(std::size_t r) {
    std::vector<std::size_t> peers;
    for (std::size_t t = 0; t < nb_; ++t)
      if (t != r && n_[t] > 0 && bside_[t] == bside_[r]) peers.push_back(t);
    if (active_[bside_[r]] < 64 || peers.size() <= 10) return peers;
    std::vector<std::pair<double, std::size_t>> scored;
    for (auto t : peers) {
      double shared = m(r, t);
      for (std::size_t s = 0; s < nb_; ++s) shared += std::min(m(r, s), m(t, s));
      scored.emplace_back(-shared, t);
    }
    std::partial_sort(scored.begin(), scored.begin() + 10, scored.end());
    peers.clear();
    for (std::size_t i = 0; i < 10; ++i) peers.push_back(scored[i].second);
    return peers;
  }

  // Applies the single best improving merge, if any.
  bool merge_sweep() {
    double best = -1e-10;
    std::size_t br = 0, bt = 0;
    bool found = false;
    for (std::size_t r = 0; r < nb_; ++r) {
      if (n_[r] == 0 || active_[bside_[r]] < 2) continue;
      for (auto t : candidates_for(r)) {
        const double d = merge_delta(r, t);
        if (d < best) {
          best = d;
          br = r;
          bt = t;
          found = true;
        }
      }
    }
    if (!found) return false;
    apply_merge(br, bt);
    dl_ += best;
    return true;
  }

  // Moves v to its best other non-empty block when that lowers DL.
  bool try_move(std::uint32_t v) {
    const std::size_t r = block_[v];
    touched_.clear();
    double deg = 0.0;
    for (const auto& nb : g_.adj[v]) {
      const auto s = block_[nb.node];
      if (scratch_k_[s] == 0.0) touched_.push_back(s);
      scratch_k_[s] += nb.weight;
      deg += nb.weight;
    }
    const int side = bside_[r];
    const bool empties = n_[r] == 1.0;
    double best = -1e-10;
    std::size_t bt = r;
    for (std::size_t t = 0; t < nb_; ++t) {
      if (t == r || n_[t] == 0 || bside_[t] != side) continue;
      const double d = move_delta(r, t, deg, empties);
      if (d < best) {
        best = d;
        bt = t;
      }
    }
    if (bt != r) apply_move(v, r, bt, deg);
    for (auto s : touched_) scratch_k_[s] = 0.0;
    if (bt == r) return false;
    dl_ += best;
    return true;
  }

  double move_delta(std::size_t r, std::size_t t, double deg, bool empties) {
    const double kr = scratch_k_[r], kt = scratch_k_[t];
    double dsum = 0.0;
    for (auto s : touched_) {
      if (s == r || s == t) continue;
      const double k = scratch_k_[s];
      dsum += 2.0 * (xlogx(m(r, s) - k) - xlogx(m(r, s)) + xlogx(m(t, s) + k) - xlogx(m(t, s)));
    }
    dsum += xlogx(m(r, r) - 2.0 * kr) - xlogx(m(r, r));
    dsum += xlogx(m(t, t) + 2.0 * kt) - xlogx(m(t, t));
    dsum += 2.0 * (xlogx(m(r, t) + kr - kt) - xlogx(m(r, t)));
    const double de = xlogy(e_[r] - deg, n_[r] - 1.0) - xlogy(e_[r], n_[r]) + xlogy(e_[t] + deg, n_[t] + 1.0) -
                      xlogy(e_[t], n_[t]);
    return -0.5 * dsum + de + (empties ? code_delta(bside_[r], -1) : 0.0);
  }

  void apply_move(std::uint32_t v, std::size_t r, std::size_t t, double deg) {
    const double kr = scratch_k_[r], kt = scratch_k_[t];
    for (auto s : touched_) {
      if (s == r || s == t) continue;
      const double k = scratch_k_[s];
      m(r, s) -= k;
      m(s, r) = m(r, s);
      m(t, s) += k;
      m(s, t) = m(t, s);
    }
    m(r, r) -= 2.0 * kr;
    m(t, t) += 2.0 * kt;
    m(r, t) += kr - kt;
    m(t, r) = m(r, t);
    e_[r] -= deg;
    e_[t] += deg;
    n_[r] -= 1.0;
    n_[t] += 1.0;
    if (n_[r] == 0.0) --active_[bside_[r]];
    block_[v] = static_cast<std::uint32_t>(t);
  }

  // Relabels blocks 0..B-1 by first appearance, side 0 first.
  void compact(FitResult& res) {
    std::vector<std::int64_t> label(nb_, -1);
    std::uint32_t next = 0;
    for (int s = 0; s < 2; ++s) {
      for (std::uint32_t v = 0; v < g_.node_count(); ++v) {
        if (g_.side[v] != s || label[block_[v]] >= 0) continue;
        label[block_[v]] = next++;
        ++res.blocks[s];
      }
    }
    res.block.resize(block_.size());
    for (std::size_t v = 0; v < block_.size(); ++v) res.block[v] = static_cast<std::uint32_t>(label[block_[v]]);
  }

  const BlockGraph& g_;
  FitOptions opts_;
  Rng rng_;
  std::vector<std::uint32_t> block_;
  std::vector<int> bside_;
  std::size_t active_[2] = {0, 0};
  std::size_t nb_ = 0;
  std::vector<double> m_, e_, n_;
  std::vector<double> scratch_k_;
  std::vector<std::size_t> touched_;
  double dl_ = 0.0;
};

}  // namespace detail

inline FitResult fit(const BlockGraph& g, const FitOptions& opts = {}) { return detail::Fitter(g, opts).run(); }

}  // namespace polis::sbm
