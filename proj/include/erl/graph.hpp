#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "erl/bag.hpp"
#include "erl/error.hpp"

namespace erl {

struct Edge {
  NodeId u;
  NodeId v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable undirected simple graph on nodes 0..n-1 with a declared degree bound.
class Graph {
 public:
  Graph() = default;

  /// Validates and canonicalizes (u < v, sorted). Throws GraphError on self-loops,
  /// duplicate edges, out-of-range endpoints, or a degree bound below the max degree.
  static Graph from_edges(std::size_t n, std::vector<Edge> edges, std::optional<int> degree_bound = std::nullopt) {
    if (n == 0) throw GraphError("graph must have at least one node");
    for (auto& e : edges) {
      if (e.u >= n || e.v >= n) {
        throw GraphError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range for n = " +
                         std::to_string(n));
      }
      if (e.u == e.v) throw GraphError("self-loop at node " + std::to_string(e.u));
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    if (const auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
      throw GraphError("duplicate edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ")");
    }

    Graph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.offsets_.assign(n + 1, 0);
    for (const auto& e : g.edges_) {
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] += g.offsets_[v];
    g.adjacency_.resize(g.offsets_[n]);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& e : g.edges_) {
      g.adjacency_[fill[e.u]++] = e.v;
      g.adjacency_[fill[e.v]++] = e.u;
    }
    for (std::size_t v = 0; v < n; ++v) {
      std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
                g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));
      g.max_degree_ = std::max(g.max_degree_, static_cast<int>(g.offsets_[v + 1] - g.offsets_[v]));
    }
    g.degree_bound_ = degree_bound.value_or(g.max_degree_);
    if (g.degree_bound_ < g.max_degree_) {
      throw GraphError("declared degree bound " + std::to_string(g.degree_bound_) + " is below the maximum degree " +
                       std::to_string(g.max_degree_));
    }
    if (n <= kLatticeLimit) {
      g.adjacency_mask_.assign(n, 0);
      for (const auto& e : g.edges_) {
        g.adjacency_mask_[e.u] |= Bag::Mask{1} << e.v;
        g.adjacency_mask_[e.v] |= Bag::Mask{1} << e.u;
      }
    }
    return g;
  }

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  int degree(NodeId v) const { return static_cast<int>(offsets_[v + 1] - offsets_[v]); }

  /// Declared bound Δ used by every degree-dependent statement.
  int degree_bound() const noexcept { return degree_bound_; }
  int max_degree() const noexcept { return max_degree_; }

  bool dense() const noexcept { return n_ <= kLatticeLimit; }
  /// Neighbor bitmask; only for dense graphs.
  Bag::Mask adjacency_mask(NodeId v) const { return adjacency_mask_[v]; }

  bool has_edge(NodeId u, NodeId v) const {
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  Bag all_nodes() const { return Bag::full(n_); }
  Bag empty_bag() const { return Bag(n_); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_ && a.degree_bound_ == b.degree_bound_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
  std::vector<Bag::Mask> adjacency_mask_;
  int max_degree_ = 0;
  int degree_bound_ = 0;
};

inline void check_bag(const Graph& g, const Bag& a) {
  if (a.universe() != g.node_count()) {
    throw InvalidBagError("bag over " + std::to_string(a.universe()) + " nodes used with a graph on " +
                          std::to_string(g.node_count()) + " nodes");
  }
}

namespace detail {

inline int cut_of_mask(const Graph& g, Bag::Mask a) {
  int c = 0;
  for (Bag::Mask m = a; m != 0; m &= m - 1) {
    c += std::popcount(g.adjacency_mask(static_cast<NodeId>(std::countr_zero(m))) & ~a);
  }
  return c;
}

}  // namespace detail

/// Number of edges with exactly one endpoint in `a`.
inline int cut(const Graph& g, const Bag& a) {
  check_bag(g, a);
  if (a.dense()) return detail::cut_of_mask(g, a.mask());
  int c = 0;
  a.for_each([&](NodeId v) {
    for (const NodeId w : g.neighbors(v)) c += a.contains(w) ? 0 : 1;
  });
  return c;
}

/// cut(a △ {v}) from cut(a) in O(deg v). Adding v turns its edges to healthy
/// neighbors into crossing edges and its edges to members into interior ones.
inline int cut_after_toggle(const Graph& g, const Bag& a, NodeId v, int current_cut) {
  check_bag(g, a);
  if (v >= g.node_count()) throw InvalidBagError("node " + std::to_string(v) + " out of range");
  assert(current_cut == cut(g, a) && "stale cut passed to cut_after_toggle");
  int inside = 0;
  if (a.dense()) {
    inside = std::popcount(g.adjacency_mask(v) & a.mask());
  } else {
    for (const NodeId w : g.neighbors(v)) inside += a.contains(w) ? 1 : 0;
  }
  const int outside = g.degree(v) - inside;
  return a.contains(v) ? current_cut - outside + inside : current_cut + outside - inside;
}

}  // namespace erl
