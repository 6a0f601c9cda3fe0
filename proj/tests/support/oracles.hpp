#pragma once

// Independent reference implementations used only by tests. None of these
// share code paths with the library's algorithms beyond Graph and Bag.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <vector>

#include "erl/bag.hpp"
#include "erl/graph.hpp"

namespace oracle {

inline int cut_mask(const erl::Graph& g, std::uint32_t mask) {
  int c = 0;
  for (const auto& e : g.edges()) c += (((mask >> e.u) ^ (mask >> e.v)) & 1u) ? 1 : 0;
  return c;
}

/// Classic linear-arrangement cutwidth by enumerating every node ordering.
inline int ordering_cutwidth(const erl::Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<erl::NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  int best = std::numeric_limits<int>::max();
  do {
    std::uint32_t prefix = 0;
    int worst = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      prefix |= 1u << order[i];
      worst = std::max(worst, cut_mask(g, prefix));
      if (worst >= best) break;
    }
    best = std::min(best, worst);
  } while (std::next_permutation(order.begin(), order.end()));
  return n == 0 ? 0 : best;
}

/// γ for every bag by Bellman–Ford relaxation over the explicit step digraph:
/// d(A) = min over successors B (B ⊇ A minus at most one node, B ≠ A) of
/// max(cut(B), d(B)), iterated from d(∅) = 0, d = ∞ elsewhere until stable.
inline std::vector<int> relaxation_resistance(const erl::Graph& g) {
  const std::size_t n = g.node_count();
  const std::uint32_t size = 1u << n;
  const std::uint32_t full = size - 1;
  constexpr int inf = std::numeric_limits<int>::max();
  std::vector<int> cuts(size);
  for (std::uint32_t a = 0; a < size; ++a) cuts[a] = cut_mask(g, a);
  std::vector<int> d(size, inf);
  d[0] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t a = 1; a < size; ++a) {
      int best = d[a];
      // B = (A - v) ∪ X or A ∪ X, X ⊆ complement.
      const std::uint32_t comp = full & ~a;
      for (int drop = -1; drop < static_cast<int>(n); ++drop) {
        if (drop >= 0 && !((a >> drop) & 1u)) continue;
        const std::uint32_t base = drop < 0 ? a : (a & ~(1u << drop));
        for (std::uint32_t x = comp;; x = (x - 1) & comp) {
          const std::uint32_t b = base | x;
          if (b != a && d[b] != inf) best = std::min(best, std::max(cuts[b], d[b]));
          if (x == 0) break;
        }
      }
      if (best < d[a]) {
        d[a] = best;
        changed = true;
      }
    }
  }
  return d;
}

/// Random simple graph on n nodes with max degree <= max_degree: shuffled
/// candidate pairs, each kept with probability p if both endpoints have room.
inline erl::Graph random_bounded_graph(std::size_t n, int max_degree, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<erl::Edge> pairs;
  for (erl::NodeId u = 0; u < n; ++u)
    for (erl::NodeId v = u + 1; v < n; ++v) pairs.push_back({u, v});
  std::shuffle(pairs.begin(), pairs.end(), rng);
  std::bernoulli_distribution keep(p);
  std::vector<int> deg(n, 0);
  std::vector<erl::Edge> edges;
  for (const auto& e : pairs) {
    if (deg[e.u] < max_degree && deg[e.v] < max_degree && keep(rng)) {
      edges.push_back(e);
      ++deg[e.u];
      ++deg[e.v];
    }
  }
  return erl::Graph::from_edges(n, edges, max_degree);
}

/// Exact mean extinction time on K_n from k infected nodes when the whole budget
/// r goes to one infected node: a birth–death chain with birth rate k(n-k) and
/// death rate r. Solved by the standard first-passage recursion on levels.
inline double complete_graph_mean_extinction(std::size_t n, double r, std::size_t start) {
  // e_k = expected time to go from k to k-1.
  std::vector<double> e(n + 1, 0.0);
  e[n] = 1.0 / r;
  for (std::size_t k = n - 1; k >= 1; --k) {
    const double birth = static_cast<double>(k) * static_cast<double>(n - k);
    e[k] = (1.0 + birth * e[k + 1]) / r;
  }
  double total = 0;
  for (std::size_t k = 1; k <= start; ++k) total += e[k];
  return total;
}

}  // namespace oracle
