#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "erl/bag.hpp"
#include "erl/crusade.hpp"
#include "erl/error.hpp"
#include "erl/graph.hpp"
#include "erl/parallel.hpp"

namespace erl {

/// Anything that reports the resistance of a bag.
template <typename T>
concept ResistanceLookup = requires(const T& t, const Bag& b) {
  { t.gamma(b) } -> std::convertible_to<int>;
};

using Entry = std::uint16_t;
inline constexpr Entry kUnreached = std::numeric_limits<Entry>::max();

namespace detail {

inline void require_table_size(const Graph& g, std::size_t limit, const char* what) {
  if (g.node_count() > limit) {
    throw CapacityError(std::string(what) + " supports n <= " + std::to_string(limit) + " (got n = " +
                        std::to_string(g.node_count()) + ")" +
                        (limit == kTableLimit ? "; use single-source mode (brute force, n <= 10) for spot queries" : ""));
  }
}

/// cut of every bag, indexed by bitmask; O(2^n).
inline std::vector<Entry> all_cuts(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<Entry> cuts(std::size_t{1} << n, 0);
  for (std::size_t s = 1; s < cuts.size(); ++s) {
    const auto v = static_cast<NodeId>(std::countr_zero(s));
    const auto rest = static_cast<Bag::Mask>(s & (s - 1));
    const int inside = std::popcount(g.adjacency_mask(v) & rest);
    cuts[s] = static_cast<Entry>(cuts[rest] + g.degree(v) - 2 * inside);
  }
  return cuts;
}

/// In place: m(C) <- min over D ⊇ C of m(D). One pass per bit; within a pass each
/// slot is written from a slot that pass never writes, so chunks are independent.
inline void superset_min(std::vector<Entry>& m, std::size_t n, unsigned threads) {
  const std::size_t size = m.size();
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t bit = std::size_t{1} << d;
    parallel_chunks(size, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t s = begin; s < end; ++s) {
        if ((s & bit) == 0) m[s] = std::min(m[s], m[s | bit]);
      }
    });
  }
}

inline Entry sat_max(Entry a, Entry b) { return std::max(a, b); }

/// min over successors B of A (|A \ B| <= 1) of m-values, given m = superset_min(F).
inline Entry best_successor(const std::vector<Entry>& m, std::size_t a) {
  Entry best = m[a];
  for (std::size_t rest = a; rest != 0; rest &= rest - 1) {
    best = std::min(best, m[a & ~(rest & (~rest + 1))]);
  }
  return best;
}

}  // namespace detail

/// Resistance of every bag of a small graph, indexed by bag bitmask.
class ResistanceTable {
 public:
  /// Wraps precomputed values (e.g. a loaded dump). Sizes must match.
  static ResistanceTable from_values(const Graph& g, std::vector<Entry> values, std::size_t rounds = 0) {
    detail::require_table_size(g, kTableLimit, "resistance tables");
    if (values.size() != (std::size_t{1} << g.node_count())) {
      throw InvalidInputError("table has " + std::to_string(values.size()) + " entries, graph needs 2^" +
                              std::to_string(g.node_count()));
    }
    ResistanceTable t;
    t.graph_ = g;
    t.values_ = std::move(values);
    t.rounds_ = rounds;
    return t;
  }

  const Graph& graph() const noexcept { return graph_; }
  std::size_t node_count() const noexcept { return graph_.node_count(); }
  std::span<const Entry> values() const noexcept { return values_; }
  std::size_t converged_rounds() const noexcept { return rounds_; }

  Entry at(std::size_t mask) const { return values_.at(mask); }

  int gamma(const Bag& a) const {
    check_bag(graph_, a);
    return values_[a.mask()];
  }

  /// γ(V), the CutWidth.
  int cutwidth() const { return values_.back(); }

  /// Copy with one entry replaced; used for fault injection.
  ResistanceTable with_entry(std::size_t mask, Entry value) const {
    ResistanceTable t = *this;
    t.values_.at(mask) = value;
    return t;
  }

 private:
  Graph graph_;
  std::vector<Entry> values_;
  std::size_t rounds_ = 0;
};

/// Minimax value iteration on the crusade step relation.
///
/// Each round forms F(B) = max{cut(B), γ(B)}, takes its superset-min transform
/// m, and lowers γ(A) to min{m(A), m(A - v) : v ∈ A}, which is the best
/// successor over all B with |A \ B| <= 1. Entries only decrease, so the loop
/// stops after at most |E| + 1 improving rounds per entry; the result is the
/// least fixed point with γ(∅) = 0. Rounds read only the previous round's
/// values, so any thread count gives the same table.
inline ResistanceTable resistance_table(const Graph& g, unsigned threads = 1) {
  detail::require_table_size(g, kTableLimit, "resistance tables");
  const std::size_t n = g.node_count();
  const std::size_t size = std::size_t{1} << n;
  const auto cuts = detail::all_cuts(g);
  std::vector<Entry> gamma(size, kUnreached);
  gamma[0] = 0;
  std::vector<Entry> m(size);
  std::size_t rounds = 0;
  while (true) {
    ++rounds;
    for (std::size_t s = 0; s < size; ++s) m[s] = detail::sat_max(cuts[s], gamma[s]);
    detail::superset_min(m, n, threads);
    std::atomic<bool> changed{false};
    parallel_chunks(size, threads, [&](std::size_t begin, std::size_t end) {
      bool local = false;
      for (std::size_t a = std::max<std::size_t>(begin, 1); a < end; ++a) {
        const Entry best = detail::best_successor(m, a);
        if (best < gamma[a]) {
          gamma[a] = best;
          local = true;
        }
      }
      if (local) changed = true;
    });
    if (!changed) break;
  }
  return ResistanceTable::from_values(g, std::move(gamma), rounds);
}

/// Resistance restricted to crusades that only remove nodes:
/// mγ(A) = min over v ∈ A of max{cut(A - v), mγ(A - v)}, mγ(∅) = 0.
inline ResistanceTable monotone_resistance_table(const Graph& g) {
  detail::require_table_size(g, kTableLimit, "monotone resistance tables");
  const std::size_t size = std::size_t{1} << g.node_count();
  const auto cuts = detail::all_cuts(g);
  std::vector<Entry> mono(size, kUnreached);
  mono[0] = 0;
  for (std::size_t a = 1; a < size; ++a) {
    Entry best = kUnreached;
    for (std::size_t rest = a; rest != 0; rest &= rest - 1) {
      const std::size_t b = a & ~(rest & (~rest + 1));
      best = std::min(best, detail::sat_max(cuts[b], mono[b]));
    }
    mono[a] = best;
  }
  return ResistanceTable::from_values(g, std::move(mono));
}

/// γ(V). Computed both ways; a disagreement throws InvariantViolation.
inline int cutwidth(const Graph& g, unsigned threads = 1) {
  const int general = resistance_table(g, threads).cutwidth();
  const int monotone = monotone_resistance_table(g).cutwidth();
  if (general != monotone) {
    throw InvariantViolation("CutWidth mismatch: crusade value " + std::to_string(general) + ", monotone value " +
                             std::to_string(monotone));
  }
  return general;
}

/// Independent oracle: label-setting bottleneck search from `a` to ∅ over the
/// explicit state digraph. Successors of A are enumerated literally: drop one
/// member (or none), then add every subset of the remaining complement.
inline int brute_force_resistance(const Graph& g, const Bag& a) {
  detail::require_table_size(g, kBruteForceLimit, "brute-force resistance");
  check_bag(g, a);
  const std::size_t n = g.node_count();
  const std::size_t size = std::size_t{1} << n;
  const auto full = static_cast<Bag::Mask>(size - 1);
  const std::size_t source = a.mask();
  if (source == 0) return 0;

  std::vector<int> cuts(size);
  for (std::size_t s = 0; s < size; ++s) cuts[s] = detail::cut_of_mask(g, static_cast<Bag::Mask>(s));
  const int max_label = static_cast<int>(g.edge_count());
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> label(size, kInf);
  std::vector<bool> settled(size, false);
  std::vector<std::vector<std::size_t>> buckets(static_cast<std::size_t>(max_label) + 1);
  label[source] = 0;  // the source bag's own cut is not counted
  buckets[0].push_back(source);
  for (int level = 0; level <= max_label; ++level) {
    auto& bucket = buckets[static_cast<std::size_t>(level)];
    while (!bucket.empty()) {
      const std::size_t s = bucket.back();
      bucket.pop_back();
      if (settled[s] || label[s] != level) continue;
      settled[s] = true;
      if (s == 0) return level;
      std::vector<std::size_t> drops{s};
      for (std::size_t rest = s; rest != 0; rest &= rest - 1) drops.push_back(s & ~(rest & (~rest + 1)));
      for (const std::size_t base : drops) {
        const std::size_t free = full & ~base;
        for (std::size_t add = free;; add = (add - 1) & free) {
          const std::size_t next = base | add;
          const int candidate = std::max(level, cuts[next]);
          if (!settled[next] && candidate < label[next]) {
            label[next] = candidate;
            buckets[static_cast<std::size_t>(candidate)].push_back(next);
          }
          if (add == 0) break;
        }
      }
    }
  }
  throw InvariantViolation("empty bag unreachable in brute-force search");
}

struct BellmanWitness {
  std::size_t bag = 0;  ///< bitmask
  int table_value = 0;
  int rhs = 0;  ///< min over successors of max{cut, γ}; kUnreached if none
  std::string kind;
};

struct BellmanCheck {
  bool pass = true;
  std::size_t checked = 0;
  std::vector<BellmanWitness> witnesses;  ///< capped at kMaxWitnesses
  std::size_t violations = 0;

  static constexpr std::size_t kMaxWitnesses = 16;
};

/// Checks that `t` is the resistance of `g`: γ(∅) = 0, the fixed-point
/// equation γ(A) = min_{|A \ B| <= 1} max{cut(B), γ(B)} for every A ≠ ∅, and that
/// every value is realized by a crusade (the equation alone also admits
/// spurious solutions such as the all-zeros table, since V has cut 0).
inline BellmanCheck check_bellman(const Graph& g, const ResistanceTable& t, unsigned threads = 1) {
  detail::require_table_size(g, kTableLimit, "Bellman check");
  if (!(t.graph() == g)) throw InvalidInputError("table was built for a different graph");
  const std::size_t n = g.node_count();
  const std::size_t size = std::size_t{1} << n;
  const auto cuts = detail::all_cuts(g);
  const auto values = t.values();
  BellmanCheck out;
  auto record = [&](std::size_t bag, int lhs, int rhs, const char* kind) {
    out.pass = false;
    ++out.violations;
    if (out.witnesses.size() < BellmanCheck::kMaxWitnesses) out.witnesses.push_back({bag, lhs, rhs, kind});
  };
  if (values[0] != 0) record(0, values[0], 0, "empty bag must have resistance 0");

  std::vector<Entry> m(size);
  for (std::size_t s = 0; s < size; ++s) m[s] = detail::sat_max(cuts[s], values[s]);
  detail::superset_min(m, n, threads);
  for (std::size_t a = 1; a < size; ++a) {
    ++out.checked;
    const Entry rhs = detail::best_successor(m, a);
    if (rhs != values[a]) record(a, values[a], rhs, "fixed-point equation fails");
  }

  // Realizability: A is certified once some successor B with max{cut(B), γ(B)} <= γ(A) is.
  std::vector<bool> certified(size, false);
  certified[0] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < size; ++s) m[s] = certified[s] ? detail::sat_max(cuts[s], values[s]) : kUnreached;
    detail::superset_min(m, n, threads);
    for (std::size_t a = 1; a < size; ++a) {
      if (!certified[a] && values[a] != kUnreached && detail::best_successor(m, a) <= values[a]) {
        certified[a] = true;
        changed = true;
      }
    }
  }
  for (std::size_t a = 1; a < size; ++a) {
    if (!certified[a]) record(a, values[a], kUnreached, "value not realized by any crusade");
  }
  return out;
}

/// An optimal (A-∅)-crusade for `a`, reconstructed from the table.
///
/// Among successors D that keep the width within γ(A) and lie on a shortest such
/// route to ∅, each step picks the smallest |D|, then the lexicographically
/// smallest D. The hop distances make the walk terminate.
inline Crusade optimal_crusade(const Graph& g, const ResistanceTable& t, const Bag& a) {
  check_bag(g, a);
  const std::size_t n = g.node_count();
  const std::size_t size = std::size_t{1} << n;
  const auto cuts = detail::all_cuts(g);
  const Entry w = static_cast<Entry>(t.gamma(a));
  constexpr Entry kFar = kUnreached;

  std::vector<Entry> hops(size, kFar);
  hops[0] = 0;
  std::vector<Entry> m(size);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < size; ++s) m[s] = cuts[s] <= w ? hops[s] : kFar;
    detail::superset_min(m, n, 1);
    for (std::size_t s = 1; s < size; ++s) {
      const Entry best = detail::best_successor(m, s);
      if (best != kFar && best + 1 < hops[s]) {
        hops[s] = static_cast<Entry>(best + 1);
        changed = true;
      }
    }
  }
  const std::size_t source = a.mask();
  if (hops[source] == kFar) throw InvariantViolation("table value not realized by a crusade");

  std::vector<Bag> bags{a};
  std::size_t current = source;
  while (current != 0) {
    std::optional<std::size_t> pick;
    for (std::size_t d = 0; d < size; ++d) {
      if (std::popcount(current & ~d) > 1 || cuts[d] > w || hops[d] + 1 != hops[current]) continue;
      if (!pick) {
        pick = d;
        continue;
      }
      const int pd = std::popcount(d);
      const int pp = std::popcount(*pick);
      // Equal sizes: the smaller sorted list owns the lowest differing node.
      if (pd < pp || (pd == pp && ((d ^ *pick) & d & ~((d ^ *pick) - 1)) != 0)) pick = d;
    }
    if (!pick) throw InvariantViolation("crusade reconstruction stalled");
    current = *pick;
    bags.push_back(Bag::from_mask(n, static_cast<Bag::Mask>(current)));
  }
  return Crusade(std::move(bags));
}

/// Resistance of the complete graph K_n for any n. By symmetry γ depends only on
/// |A|, and the step relation on sizes is k -> j for every j >= k - 1, so the
/// same minimax iteration runs on n + 1 states.
class CompleteGraphResistance {
 public:
  explicit CompleteGraphResistance(std::size_t n) : n_(n), by_size_(n + 1, std::numeric_limits<int>::max()) {
    if (n == 0) throw InvalidInputError("complete graph needs n >= 1");
    auto cut_of = [n](std::size_t k) { return static_cast<int>(k * (n - k)); };
    by_size_[0] = 0;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k = 1; k <= n; ++k) {
        int best = std::numeric_limits<int>::max();
        for (std::size_t j = k - 1; j <= n; ++j) {
          if (by_size_[j] == std::numeric_limits<int>::max()) continue;
          best = std::min(best, std::max(cut_of(j), by_size_[j]));
        }
        if (best < by_size_[k]) {
          by_size_[k] = best;
          changed = true;
        }
      }
    }
  }

  std::size_t node_count() const noexcept { return n_; }
  int gamma_of_size(std::size_t k) const { return by_size_.at(k); }
  int gamma(const Bag& a) const {
    if (a.universe() != n_) throw InvalidBagError("bag universe does not match K_" + std::to_string(n_));
    return by_size_[a.size()];
  }
  int cutwidth() const { return by_size_[n_]; }

 private:
  std::size_t n_;
  std::vector<int> by_size_;
};

// Binary dump: "RGT1", u32 n, then 2^n u16 entries; all little-endian.
inline void write_rgt1(std::ostream& os, const ResistanceTable& t) {
  auto put_u32 = [&](std::uint32_t v) {
    const char b[4] = {char(v & 0xFF), char((v >> 8) & 0xFF), char((v >> 16) & 0xFF), char((v >> 24) & 0xFF)};
    os.write(b, 4);
  };
  os.write("RGT1", 4);
  put_u32(static_cast<std::uint32_t>(t.node_count()));
  for (const Entry e : t.values()) {
    const char b[2] = {char(e & 0xFF), char((e >> 8) & 0xFF)};
    os.write(b, 2);
  }
}

struct RawTable {
  std::size_t n = 0;
  std::vector<Entry> values;
};

inline RawTable read_rgt1(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::string(magic, 4) != "RGT1") throw ParseError(0, "not an RGT1 table dump");
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw ParseError(0, "truncated RGT1 header");
  const std::uint32_t n = b[0] | (b[1] << 8) | (b[2] << 16) | (std::uint32_t(b[3]) << 24);
  if (n > kTableLimit) throw ParseError(0, "RGT1 table too large");
  RawTable raw;
  raw.n = n;
  raw.values.resize(std::size_t{1} << n);
  for (auto& e : raw.values) {
    if (!is.read(reinterpret_cast<char*>(b), 2)) throw ParseError(0, "truncated RGT1 body");
    e = static_cast<Entry>(b[0] | (b[1] << 8));
  }
  return raw;
}

inline void write_table_csv(std::ostream& os, const ResistanceTable& t) {
  os << "bag_bitmask,gamma\n";
  const auto values = t.values();
  for (std::size_t s = 0; s < values.size(); ++s) os << s << "," << values[s] << "\n";
}

}  // namespace erl
