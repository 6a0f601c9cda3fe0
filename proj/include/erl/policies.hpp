#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "erl/epidemic.hpp"
#include "erl/error.hpp"
#include "erl/resistance.hpp"
#include "erl/rng.hpp"

namespace erl {

/// Entire budget to the infected node whose removal leaves the smallest cut;
/// ties go to the smaller node id.
class MaxCutDropPolicy final : public Policy {
 public:
  std::string name() const override { return "max_cut_drop"; }
  Allocation allocate(const SimulationView& view) override {
    NodeId best = 0;
    std::int64_t best_cut = std::numeric_limits<std::int64_t>::max();
    for (const NodeId v : view.infected_nodes()) {
      const std::int64_t c = view.cut_without(v);
      if (c < best_cut || (c == best_cut && v < best)) {
        best = v;
        best_cut = c;
      }
    }
    return Allocation::single(best, view.budget());
  }
  std::unique_ptr<Policy> clone() const override { return std::make_unique<MaxCutDropPolicy>(*this); }
};

/// Entire budget to the infected v minimizing γ(I - v), then cut(I - v), then id.
class ResistanceGreedyPolicy final : public Policy {
 public:
  explicit ResistanceGreedyPolicy(std::shared_ptr<const ResistanceTable> table) : table_(std::move(table)) {
    if (!table_) throw InvalidInputError("resistance_greedy needs a resistance table");
  }

  std::string name() const override { return "resistance_greedy"; }
  Allocation allocate(const SimulationView& view) override {
    if (view.graph().node_count() != table_->node_count()) {
      throw InvalidInputError("resistance_greedy table does not match the graph");
    }
    const std::size_t mask = view.infected().mask();
    NodeId best = 0;
    int best_gamma = std::numeric_limits<int>::max();
    std::int64_t best_cut = std::numeric_limits<std::int64_t>::max();
    for (const NodeId v : view.infected_nodes()) {
      const int gm = table_->at(mask & ~(std::size_t{1} << v));
      const std::int64_t c = view.cut_without(v);
      if (gm < best_gamma || (gm == best_gamma && (c < best_cut || (c == best_cut && v < best)))) {
        best = v;
        best_gamma = gm;
        best_cut = c;
      }
    }
    return Allocation::single(best, view.budget());
  }
  std::unique_ptr<Policy> clone() const override { return std::make_unique<ResistanceGreedyPolicy>(*this); }

 private:
  std::shared_ptr<const ResistanceTable> table_;
};

/// ρ_v = r·deg(v) / Σ deg over infected nodes. Infected isolated nodes share r
/// equally when every infected node has degree 0.
class DegreeProportionalPolicy final : public Policy {
 public:
  std::string name() const override { return "degree_proportional"; }
  Allocation allocate(const SimulationView& view) override {
    std::int64_t total = 0;
    for (const NodeId v : view.infected_nodes()) total += view.graph().degree(v);
    Allocation a;
    const auto count = static_cast<std::int64_t>(view.infected_nodes().size());
    for (const NodeId v : view.infected_nodes()) {
      const Rational share = total == 0 ? view.budget() / Rational(count)
                                        : view.budget() * Rational(view.graph().degree(v), total);
      if (!share.is_zero()) a.rates.emplace_back(v, share);
    }
    return a;
  }
  std::unique_ptr<Policy> clone() const override { return std::make_unique<DegreeProportionalPolicy>(*this); }
};

class UniformPolicy final : public Policy {
 public:
  std::string name() const override { return "uniform"; }
  Allocation allocate(const SimulationView& view) override {
    Allocation a;
    const auto count = static_cast<std::int64_t>(view.infected_nodes().size());
    const Rational share = view.budget() / Rational(count);
    if (share.is_zero()) return a;
    for (const NodeId v : view.infected_nodes()) a.rates.emplace_back(v, share);
    return a;
  }
  std::unique_ptr<Policy> clone() const override { return std::make_unique<UniformPolicy>(*this); }
};

/// Entire budget to a uniformly random infected node, drawn from the policy's own stream.
class RandomNodePolicy final : public Policy {
 public:
  std::string name() const override { return "random_node"; }
  void reset(std::uint64_t seed) override { rng_ = SplitMix64(seed); }
  Allocation allocate(const SimulationView& view) override {
    // infected_nodes() order depends on history; sort so the pick depends only on the bag.
    scratch_.assign(view.infected_nodes().begin(), view.infected_nodes().end());
    std::sort(scratch_.begin(), scratch_.end());
    return Allocation::single(scratch_[rng_.below(scratch_.size())], view.budget());
  }
  std::unique_ptr<Policy> clone() const override { return std::make_unique<RandomNodePolicy>(*this); }

 private:
  SplitMix64 rng_{0};
  std::vector<NodeId> scratch_;
};

inline const std::vector<std::string>& builtin_policy_names() {
  static const std::vector<std::string> names = {"max_cut_drop", "resistance_greedy", "degree_proportional", "uniform",
                                                 "random_node"};
  return names;
}

/// `table` is required for resistance_greedy and ignored otherwise.
inline std::unique_ptr<Policy> builtin_policy(std::string_view kind,
                                              std::shared_ptr<const ResistanceTable> table = nullptr) {
  if (kind == "max_cut_drop") return std::make_unique<MaxCutDropPolicy>();
  if (kind == "resistance_greedy") return std::make_unique<ResistanceGreedyPolicy>(std::move(table));
  if (kind == "degree_proportional") return std::make_unique<DegreeProportionalPolicy>();
  if (kind == "uniform") return std::make_unique<UniformPolicy>();
  if (kind == "random_node") return std::make_unique<RandomNodePolicy>();
  throw InvalidInputError("unknown policy '" + std::string(kind) + "'");
}

}  // namespace erl
