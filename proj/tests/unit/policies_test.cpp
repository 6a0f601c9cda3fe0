#include <gtest/gtest.h>

#include <memory>

#include "erl/epidemic.hpp"
#include "erl/generators.hpp"
#include "erl/policies.hpp"
#include "erl/resistance.hpp"

using erl::Bag;
using erl::GraphKind;
using erl::Rational;

namespace {

/// Builds a view of a fixed infected bag without running a simulation.
struct Snapshot {
  erl::detail::SimulationState state;
  std::vector<erl::Event> history;

  Snapshot(const erl::Graph& g, const Bag& infected, Rational budget) {
    state.graph = &g;
    state.budget = budget;
    state.infected = infected;
    state.flags.assign(g.node_count(), 0);
    state.position.assign(g.node_count(), 0);
    state.infected_neighbors.assign(g.node_count(), 0);
    infected.for_each([&](erl::NodeId v) {
      state.flags[v] = 1;
      state.position[v] = state.members.size();
      state.members.push_back(v);
      for (const erl::NodeId w : g.neighbors(v)) ++state.infected_neighbors[w];
    });
    state.cut = erl::cut(g, infected);
    state.history = &history;
  }
  erl::SimulationView view() const { return erl::SimulationView(state); }
};

Rational rate_of(const erl::Allocation& a, erl::NodeId v) {
  for (const auto& [u, r] : a.rates)
    if (u == v) return r;
  return Rational(0);
}

}  // namespace

TEST(Policies, MaxCutDropPath) {
  const erl::Graph path = erl::generate(GraphKind::Line, {3});
  Snapshot s(path, Bag::from_nodes(3, {0, 1}), Rational(1));
  erl::MaxCutDropPolicy p;
  const auto a = p.allocate(s.view());
  ASSERT_EQ(a.rates.size(), 1u);
  EXPECT_EQ(a.rates[0].first, 1u);
  EXPECT_EQ(a.rates[0].second, Rational(1));
}

TEST(Policies, MaxCutDropTiesToSmallerId) {
  const erl::Graph iso = erl::Graph::from_edges(4, {});
  Snapshot s(iso, Bag::from_nodes(4, {3, 1, 2}), Rational(1));
  erl::MaxCutDropPolicy p;
  EXPECT_EQ(p.allocate(s.view()).rates[0].first, 1u);
}

TEST(Policies, DegreeProportionalStar) {
  const erl::Graph star = erl::generate(GraphKind::Star, {3});
  Snapshot s(star, Bag::from_nodes(4, {0, 1}), Rational(1));
  erl::DegreeProportionalPolicy p;
  const auto a = p.allocate(s.view());
  EXPECT_EQ(rate_of(a, 0), Rational(3, 4));
  EXPECT_EQ(rate_of(a, 1), Rational(1, 4));
  EXPECT_EQ(a.total(), Rational(1));
}

TEST(Policies, UniformSplit) {
  const erl::Graph g = erl::generate(GraphKind::Cycle, {6});
  Snapshot s(g, Bag::from_nodes(6, {0, 2, 3, 5}), Rational(2));
  erl::UniformPolicy p;
  const auto a = p.allocate(s.view());
  ASSERT_EQ(a.rates.size(), 4u);
  for (const auto& [v, r] : a.rates) EXPECT_EQ(r, Rational(1, 2));
}

TEST(Policies, ResistanceGreedyPrefersLowerResistance) {
  const erl::Graph g = erl::generate(GraphKind::Line, {5});
  auto table = std::make_shared<const erl::ResistanceTable>(erl::resistance_table(g));
  erl::ResistanceGreedyPolicy p(table);
  // I = {1,2,3}: removing 1 or 3 leaves a two-node run (γ 1); removing 2 leaves {1},{3} (γ 1).
  // Ties on γ fall to smaller cut(I - v): cut({2,3}) = 2, cut({1,3}) = 4, cut({1,2}) = 2, then id.
  Snapshot s(g, Bag::from_nodes(5, {1, 2, 3}), Rational(1));
  EXPECT_EQ(p.allocate(s.view()).rates[0].first, 1u);
  EXPECT_THROW(erl::ResistanceGreedyPolicy(nullptr), erl::InvalidInputError);
}

TEST(Policies, RandomNodeUsesOwnStream) {
  const erl::Graph g = erl::Graph::from_edges(6, {});
  Snapshot s(g, g.all_nodes(), Rational(1));
  erl::RandomNodePolicy a;
  erl::RandomNodePolicy b;
  a.reset(5);
  b.reset(5);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(a.allocate(s.view()).rates[0].first, b.allocate(s.view()).rates[0].first);
}

TEST(Policies, NeverAllocateToHealthyNodes) {
  const erl::Graph g = erl::generate_from_spec("random_regular:10,3", 1);
  auto table = std::make_shared<const erl::ResistanceTable>(erl::resistance_table(g));
  const Bag infected = Bag::from_nodes(10, {0, 4, 7});
  Snapshot s(g, infected, Rational(3));
  for (const auto& name : erl::builtin_policy_names()) {
    auto p = erl::builtin_policy(name, table);
    p->reset(1);
    const auto a = p->allocate(s.view());
    EXPECT_LE(a.total(), Rational(3)) << name;
    for (const auto& [v, r] : a.rates) EXPECT_TRUE(infected.contains(v)) << name;
  }
  EXPECT_THROW(erl::builtin_policy("nope"), erl::InvalidInputError);
}
