#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "erl/error.hpp"

namespace erl {

using NodeId = std::uint32_t;

/// Universes up to this size store bags as a bitmask.
inline constexpr std::size_t kLatticeLimit = 24;
/// Full 2^n resistance tables are built only up to this size.
inline constexpr std::size_t kTableLimit = 20;
/// Literal state-graph search oracle limit.
inline constexpr std::size_t kBruteForceLimit = 10;

/// A subset of the nodes 0..universe-1.
///
/// Universes of at most kLatticeLimit nodes use a fixed-width bitmask so that a
/// bag maps to its lattice index in O(1); larger universes keep a sorted member
/// list. Both encodings are canonical, so equality is structural.
class Bag {
 public:
  using Mask = std::uint32_t;

  Bag() = default;
  explicit Bag(std::size_t universe) : universe_(universe) {}

  static Bag from_mask(std::size_t universe, Mask mask) {
    if (universe > kLatticeLimit) throw InvalidBagError("bitmask bags require n <= 24");
    if (universe < 32 && (mask >> universe) != 0) {
      throw InvalidBagError("bitmask " + std::to_string(mask) + " has members outside 0.." +
                            std::to_string(universe) + "-1");
    }
    Bag b(universe);
    b.mask_ = mask;
    return b;
  }

  static Bag from_nodes(std::size_t universe, std::span<const NodeId> nodes) {
    Bag b(universe);
    for (const NodeId v : nodes) {
      if (v >= universe) {
        throw InvalidBagError("node " + std::to_string(v) + " out of range for n = " + std::to_string(universe));
      }
      b.add(v);
    }
    return b;
  }

  static Bag from_nodes(std::size_t universe, std::initializer_list<NodeId> nodes) {
    return from_nodes(universe, std::span<const NodeId>(nodes.begin(), nodes.size()));
  }

  static Bag full(std::size_t universe) {
    Bag b(universe);
    if (b.dense()) {
      b.mask_ = universe == 0 ? 0 : static_cast<Mask>((std::uint64_t{1} << universe) - 1);
    } else {
      b.members_.resize(universe);
      for (std::size_t v = 0; v < universe; ++v) b.members_[v] = static_cast<NodeId>(v);
    }
    return b;
  }

  std::size_t universe() const noexcept { return universe_; }
  bool dense() const noexcept { return universe_ <= kLatticeLimit; }

  std::size_t size() const noexcept {
    return dense() ? static_cast<std::size_t>(std::popcount(mask_)) : members_.size();
  }
  bool empty() const noexcept { return size() == 0; }

  /// Lattice index; only for dense bags.
  Mask mask() const {
    if (!dense()) throw InvalidBagError("bag over " + std::to_string(universe_) + " nodes has no bitmask");
    return mask_;
  }

  bool contains(NodeId v) const noexcept {
    if (v >= universe_) return false;
    if (dense()) return (mask_ >> v) & 1U;
    return std::binary_search(members_.begin(), members_.end(), v);
  }

  void add(NodeId v) {
    check_node(v);
    if (dense()) {
      mask_ |= Mask{1} << v;
      return;
    }
    const auto it = std::lower_bound(members_.begin(), members_.end(), v);
    if (it == members_.end() || *it != v) members_.insert(it, v);
  }

  void remove(NodeId v) {
    check_node(v);
    if (dense()) {
      mask_ &= ~(Mask{1} << v);
      return;
    }
    const auto it = std::lower_bound(members_.begin(), members_.end(), v);
    if (it != members_.end() && *it == v) members_.erase(it);
  }

  void toggle(NodeId v) {
    if (contains(v)) {
      remove(v);
    } else {
      add(v);
    }
  }

  Bag with(NodeId v) const {
    Bag b = *this;
    b.add(v);
    return b;
  }
  Bag without(NodeId v) const {
    Bag b = *this;
    b.remove(v);
    return b;
  }
  Bag toggled(NodeId v) const {
    Bag b = *this;
    b.toggle(v);
    return b;
  }

  /// Members in increasing order.
  std::vector<NodeId> nodes() const {
    if (!dense()) return members_;
    std::vector<NodeId> out;
    out.reserve(size());
    for (Mask m = mask_; m != 0; m &= m - 1) out.push_back(static_cast<NodeId>(std::countr_zero(m)));
    return out;
  }

  template <typename F>
  void for_each(F&& f) const {
    if (dense()) {
      for (Mask m = mask_; m != 0; m &= m - 1) f(static_cast<NodeId>(std::countr_zero(m)));
    } else {
      for (const NodeId v : members_) f(v);
    }
  }

  Bag complement() const {
    Bag out(universe_);
    if (dense()) {
      out.mask_ = Bag::full(universe_).mask_ & ~mask_;
    } else {
      std::size_t j = 0;
      for (std::size_t v = 0; v < universe_; ++v) {
        if (j < members_.size() && members_[j] == v) {
          ++j;
        } else {
          out.members_.push_back(static_cast<NodeId>(v));
        }
      }
    }
    return out;
  }

  bool subset_of(const Bag& other) const {
    same_universe(other);
    if (dense()) return (mask_ & ~other.mask_) == 0;
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
  }

  friend Bag operator|(const Bag& a, const Bag& b) { return combine(a, b, Op::Union); }
  friend Bag operator&(const Bag& a, const Bag& b) { return combine(a, b, Op::Intersection); }
  /// Set difference A \ B.
  friend Bag operator-(const Bag& a, const Bag& b) { return combine(a, b, Op::Difference); }
  /// Symmetric difference A △ B.
  friend Bag operator^(const Bag& a, const Bag& b) { return combine(a, b, Op::Symmetric); }

  friend bool operator==(const Bag& a, const Bag& b) noexcept {
    return a.universe_ == b.universe_ && a.mask_ == b.mask_ && a.members_ == b.members_;
  }

  /// Lexicographic order of the sorted member lists.
  friend bool lexicographically_less(const Bag& a, const Bag& b) {
    const auto x = a.nodes();
    const auto y = b.nodes();
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for_each([&](NodeId v) {
      if (!first) s += ",";
      s += std::to_string(v);
      first = false;
    });
    return s + "}";
  }

 private:
  enum class Op { Union, Intersection, Difference, Symmetric };

  static Bag combine(const Bag& a, const Bag& b, Op op) {
    a.same_universe(b);
    Bag out(a.universe_);
    if (a.dense()) {
      switch (op) {
        case Op::Union: out.mask_ = a.mask_ | b.mask_; break;
        case Op::Intersection: out.mask_ = a.mask_ & b.mask_; break;
        case Op::Difference: out.mask_ = a.mask_ & ~b.mask_; break;
        case Op::Symmetric: out.mask_ = a.mask_ ^ b.mask_; break;
      }
      return out;
    }
    auto& m = out.members_;
    const auto& x = a.members_;
    const auto& y = b.members_;
    switch (op) {
      case Op::Union: std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(m)); break;
      case Op::Intersection:
        std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(m));
        break;
      case Op::Difference: std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(m)); break;
      case Op::Symmetric:
        std::set_symmetric_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(m));
        break;
    }
    return out;
  }

  void same_universe(const Bag& other) const {
    if (universe_ != other.universe_) {
      throw InvalidBagError("bags over different universes (" + std::to_string(universe_) + " vs " +
                            std::to_string(other.universe_) + ")");
    }
  }

  void check_node(NodeId v) const {
    if (v >= universe_) {
      throw InvalidBagError("node " + std::to_string(v) + " out of range for n = " + std::to_string(universe_));
    }
  }

  std::size_t universe_ = 0;
  Mask mask_ = 0;
  std::vector<NodeId> members_;
};

}  // namespace erl
