// Independent reference implementations used to check the library. Written
// from the defining formulas over dense matrices; they share no code with
// include/polis beyond plain data types.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix zeros(std::size_t n) { return Matrix(n, std::vector<double>(n, 0.0)); }

// Q = 1/(2m) * sum_ij [A_ij - k_i k_j / (2m)] * delta(c_i, c_j)
inline double modularity(const Matrix& a, const std::vector<std::uint32_t>& c) {
  const std::size_t n = a.size();
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      k[i] += a[i][j];
      two_m += a[i][j];
    }
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (c[i] == c[j]) q += a[i][j] - k[i] * k[j] / two_m;
  return q / two_m;
}

// Calls f with every set partition of {0..n-1} as a restricted growth string.
inline void for_each_partition(std::size_t n, const std::function<void(const std::vector<std::uint32_t>&)>& f) {
  if (n == 0) {
    f({});
    return;
  }
  std::vector<std::uint32_t> rgs(n, 0), maxv(n, 0);
  for (;;) {
    f(rgs);
    std::size_t i = n - 1;
    while (i > 0 && rgs[i] > maxv[i - 1]) --i;
    if (i == 0) return;
    ++rgs[i];
    for (std::size_t j = i + 1; j < n; ++j) rgs[j] = 0;
    for (std::size_t j = i; j < n; ++j) maxv[j] = std::max(maxv[j - 1], rgs[j]);
  }
}

inline double best_modularity(const Matrix& a) {
  double best = -1.0;
  for_each_partition(a.size(), [&](const auto& c) { best = std::max(best, modularity(a, c)); });
  return best;
}

// Local clustering averaged over all nodes (0 for degree < 2).
inline double average_clustering(const Matrix& a) {
  const std::size_t n = a.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> nb;
    for (std::size_t j = 0; j < n; ++j)
      if (a[i][j] > 0) nb.push_back(j);
    if (nb.size() < 2) continue;
    double links = 0;
    for (std::size_t x = 0; x < nb.size(); ++x)
      for (std::size_t y = x + 1; y < nb.size(); ++y)
        if (a[nb[x]][nb[y]] > 0) ++links;
    sum += 2.0 * links / (static_cast<double>(nb.size()) * static_cast<double>(nb.size() - 1));
  }
  return sum / static_cast<double>(n);
}

// Word-document description length written as
//   E - sum_{r in W, s in D} m_rs ln(m_rs / (n_r n_s)) + sum ln A!
//     + N_w ln B_w + N_d ln B_d + (B_w B_d / 2) ln E
// from a dense count matrix a[w][d].
inline double bipartite_dl(const Matrix& a, const std::vector<std::uint32_t>& wb, const std::vector<std::uint32_t>& db) {
  const std::size_t bw = *std::max_element(wb.begin(), wb.end()) + 1;
  const std::size_t bd = *std::max_element(db.begin(), db.end()) + 1;
  Matrix m(bw, std::vector<double>(bd, 0.0));
  std::vector<double> nw(bw, 0.0), nd(bd, 0.0);
  double e = 0.0, lnfact = 0.0;
  for (auto b : wb) nw[b] += 1;
  for (auto b : db) nd[b] += 1;
  for (std::size_t w = 0; w < a.size(); ++w)
    for (std::size_t d = 0; d < a[w].size(); ++d) {
      m[wb[w]][db[d]] += a[w][d];
      e += a[w][d];
      lnfact += std::lgamma(a[w][d] + 1.0);
    }
  double ll = 0.0;
  for (std::size_t r = 0; r < bw; ++r)
    for (std::size_t s = 0; s < bd; ++s)
      if (m[r][s] > 0) ll += m[r][s] * std::log(m[r][s] / (nw[r] * nd[s]));
  std::size_t used_w = 0, used_d = 0;
  for (double x : nw) used_w += x > 0;
  for (double x : nd) used_d += x > 0;
  return e - ll + lnfact + static_cast<double>(wb.size()) * std::log(static_cast<double>(used_w)) +
         static_cast<double>(db.size()) * std::log(static_cast<double>(used_d)) +
         static_cast<double>(used_w * used_d) / 2.0 * std::log(e);
}

// Normalized mutual information, arithmetic-mean normalization; 1 for two
// single-cluster labelings.
inline double nmi(const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y) {
  const double n = static_cast<double>(x.size());
  std::map<std::uint32_t, double> px, py;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> pxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    px[x[i]] += 1 / n;
    py[y[i]] += 1 / n;
    pxy[{x[i], y[i]}] += 1 / n;
  }
  auto entropy = [](const auto& p) {
    double h = 0;
    for (const auto& [_, v] : p) h -= v * std::log(v);
    return h;
  };
  const double hx = entropy(px), hy = entropy(py);
  if (hx == 0 && hy == 0) return 1.0;
  double mi = 0;
  for (const auto& [k, v] : pxy) mi += v * std::log(v / (px[k.first] * py[k.second]));
  return 2 * mi / (hx + hy);
}

// Random simple weighted graph as a dense matrix; no self-loops.
inline Matrix random_graph(std::mt19937_64& rng, std::size_t n, double p, bool integer_weights = true) {
  std::bernoulli_distribution edge(p);
  std::uniform_int_distribution<int> wi(1, 9);
  std::uniform_real_distribution<double> wr(0.1, 5.0);
  Matrix a = zeros(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (edge(rng)) a[i][j] = a[j][i] = integer_weights ? wi(rng) : wr(rng);
  return a;
}

}  // namespace oracle
