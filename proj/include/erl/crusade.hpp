#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "erl/bag.hpp"
#include "erl/error.hpp"
#include "erl/graph.hpp"

namespace erl {

struct CrusadeCheck {
  bool valid = false;
  /// Index i of the first offending element: the endpoint that mismatches, or the
  /// step (i, i+1) that removes more than one node.
  std::optional<std::size_t> first_violation;
  std::string reason;
};

/// Checks seq[0] = a, seq.back() = b, and |seq[i] \ seq[i+1]| <= 1 for every step.
inline CrusadeCheck validate_crusade(std::span<const Bag> seq, const Bag& a, const Bag& b) {
  if (seq.empty()) throw InvalidInputError("crusade must contain at least one bag");
  if (!(seq.front() == a)) return {false, 0, "first bag differs from the source bag"};
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if ((seq[i] - seq[i + 1]).size() > 1) return {false, i, "step removes more than one node"};
  }
  if (!(seq.back() == b)) return {false, seq.size() - 1, "last bag differs from the target bag"};
  return {true, std::nullopt, {}};
}

/// A sequence of bags in which every step removes at most one node.
class Crusade {
 public:
  explicit Crusade(std::vector<Bag> bags) : bags_(std::move(bags)) {
    if (bags_.empty()) throw InvalidInputError("crusade must contain at least one bag");
    const auto check = validate_crusade(bags_, bags_.front(), bags_.back());
    if (!check.valid) {
      throw InvalidInputError("not a crusade at index " + std::to_string(*check.first_violation) + ": " + check.reason);
    }
  }

  std::span<const Bag> bags() const noexcept { return bags_; }
  /// Number of steps k (bags minus one).
  std::size_t steps() const noexcept { return bags_.size() - 1; }
  const Bag& source() const { return bags_.front(); }
  const Bag& target() const { return bags_.back(); }

 private:
  std::vector<Bag> bags_;
};

/// Maximum cut over bags 1..k; the source bag is not counted. A crusade with no
/// steps has width 0.
inline int width(const Graph& g, const Crusade& c) {
  int w = 0;
  const auto bags = c.bags();
  for (std::size_t i = 1; i < bags.size(); ++i) w = std::max(w, cut(g, bags[i]));
  return w;
}

struct BottleneckSequence {
  std::vector<Bag> bags;
};

namespace detail {

inline void require_unit_steps(std::span<const Bag> seq) {
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if ((seq[i] ^ seq[i - 1]).size() != 1) {
      throw InvalidInputError("step " + std::to_string(i) + " changes " + std::to_string((seq[i] ^ seq[i - 1]).size()) +
                              " nodes; a unit-step sequence changes exactly one");
    }
  }
}

}  // namespace detail

/// Running intersections Θ_i = A_0 ∩ ... ∩ A_i of a unit-step sequence.
inline BottleneckSequence bottleneck_sequence(std::span<const Bag> seq) {
  detail::require_unit_steps(seq);
  BottleneckSequence out;
  out.bags.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    out.bags.push_back(i == 0 ? seq[0] : out.bags.back() & seq[i]);
  }
  return out;
}

struct BottleneckAudit {
  bool pass = true;
  std::optional<std::size_t> first_violation;
  std::string violated;
  std::size_t steps = 0;
  int max_increase = 0;  ///< largest single-step rise of cut(Θ)
};

/// Streaming form of the bottleneck construction: holds only the current bag,
/// the running Θ and their cuts, and audits every step as it is fed.
class BottleneckTracker {
 public:
  BottleneckTracker(const Graph& g, Bag start)
      : g_(&g), current_(std::move(start)), theta_(current_), cut_current_(cut(g, current_)), cut_theta_(cut_current_),
        cut_theta_start_(cut_theta_), max_cut_theta_(cut_theta_) {}

  /// Applies A_i = A_{i-1} △ {v}.
  void toggle(NodeId v) {
    ++steps_;
    const bool removal = current_.contains(v);
    cut_current_ = cut_after_toggle(*g_, current_, v, cut_current_);
    current_.toggle(v);
    const int before = cut_theta_;
    if (removal && theta_.contains(v)) {
      cut_theta_ = cut_after_toggle(*g_, theta_, v, cut_theta_);
      theta_.remove(v);
    }
    if (removal) ++removals_;
    record(before, removal);
  }

  const Bag& current() const noexcept { return current_; }
  const Bag& theta() const noexcept { return theta_; }
  int current_cut() const noexcept { return cut_current_; }
  int theta_cut() const noexcept { return cut_theta_; }
  int theta_cut_start() const noexcept { return cut_theta_start_; }
  int max_theta_cut() const noexcept { return max_cut_theta_; }
  std::size_t removals() const noexcept { return removals_; }
  const BottleneckAudit& audit() const noexcept { return audit_; }

 private:
  void record(int before, bool removal) {
    const int rise = cut_theta_ - before;
    audit_.steps = steps_;
    audit_.max_increase = std::max(audit_.max_increase, rise);
    max_cut_theta_ = std::max(max_cut_theta_, cut_theta_);
    if (!audit_.pass) return;
    if (!theta_.subset_of(current_)) {
      fail("theta not a subset of the current bag");
    } else if (rise > 0 && !removal) {
      fail("cut(theta) increased on an addition step");
    } else if (rise > g_->degree_bound()) {
      fail("cut(theta) increased by more than the degree bound");
    }
  }

  void fail(const char* what) {
    audit_.pass = false;
    audit_.first_violation = steps_;
    audit_.violated = what;
  }

  const Graph* g_;
  Bag current_;
  Bag theta_;
  int cut_current_;
  int cut_theta_;
  int cut_theta_start_;
  int max_cut_theta_;
  std::size_t steps_ = 0;
  std::size_t removals_ = 0;
  BottleneckAudit audit_;
};

/// Audits a supplied Θ sequence against its source sequence: Θ_i ⊆ A_i,
/// Θ_i ⊆ Θ_{i-1}, cut(Θ) rises only when A_i ⊂ A_{i-1}, and by at most Δ.
inline BottleneckAudit audit_bottleneck(const Graph& g, std::span<const Bag> seq, std::span<const Bag> thetas) {
  detail::require_unit_steps(seq);
  if (thetas.size() != seq.size()) throw InvalidInputError("theta sequence length differs from the bag sequence");
  BottleneckAudit audit;
  audit.steps = seq.empty() ? 0 : seq.size() - 1;
  auto fail = [&](std::size_t i, const char* what) {
    if (audit.pass) {
      audit.pass = false;
      audit.first_violation = i;
      audit.violated = what;
    }
  };
  if (!seq.empty() && !(thetas[0] == seq[0])) fail(0, "theta_0 differs from A_0");
  int previous = seq.empty() ? 0 : cut(g, thetas[0]);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!thetas[i].subset_of(seq[i])) fail(i, "theta not a subset of the current bag");
    if (i == 0) continue;
    if (!thetas[i].subset_of(thetas[i - 1])) fail(i, "theta grew");
    const int now = cut(g, thetas[i]);
    const int rise = now - previous;
    audit.max_increase = std::max(audit.max_increase, rise);
    const bool removal = seq[i].subset_of(seq[i - 1]);
    if (rise > 0 && !removal) fail(i, "cut(theta) increased on an addition step");
    if (rise > g.degree_bound()) fail(i, "cut(theta) increased by more than the degree bound");
    previous = now;
  }
  return audit;
}

inline BottleneckAudit audit_bottleneck(const Graph& g, std::span<const Bag> seq) {
  const auto thetas = bottleneck_sequence(seq);
  return audit_bottleneck(g, seq, thetas.bags);
}

}  // namespace erl
