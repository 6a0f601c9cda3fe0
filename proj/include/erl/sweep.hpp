#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "erl/bag.hpp"
#include "erl/epidemic.hpp"
#include "erl/error.hpp"
#include "erl/event_log.hpp"
#include "erl/generators.hpp"
#include "erl/policies.hpp"
#include "erl/rational.hpp"
#include "erl/resistance.hpp"

namespace erl {

enum class BudgetRule { Constant, PerNode, PerCutwidth };

inline const char* to_string(BudgetRule r) {
  switch (r) {
    case BudgetRule::Constant: return "constant";
    case BudgetRule::PerNode: return "per_node";
    case BudgetRule::PerCutwidth: return "per_cutwidth";
  }
  return "unknown";
}

/// One family of graphs swept over n. The budget is `budget_value` (constant),
/// `budget_value`·n (per_node) or `budget_value`·W (per_cutwidth).
struct SweepSpec {
  GraphKind family = GraphKind::Complete;
  std::vector<std::int64_t> sizes;
  /// Extra generator parameters after n (e.g. the degree for random_regular).
  std::vector<std::int64_t> extra_params;
  BudgetRule budget_rule = BudgetRule::Constant;
  Rational budget_value{1};
  std::string policy = "max_cut_drop";
  std::size_t replications = 100;
  std::uint64_t master_seed = 0;
  std::optional<double> horizon;
  std::uint64_t max_events = 100'000'000;
  unsigned threads = 1;
};

struct SweepRecord {
  std::string family;
  std::int64_t n = 0;
  Rational r;
  std::string policy;
  std::size_t replications = 0;
  std::size_t extinct = 0;
  std::size_t censored = 0;
  double mean_tau = std::numeric_limits<double>::quiet_NaN();  ///< over extinct runs only
  double stderr_tau = std::numeric_limits<double>::quiet_NaN();
  bool lower_bound = false;  ///< more than half the runs censored
  std::optional<double> growth_ratio;  ///< mean τ here over mean τ at the previous point
  std::optional<double> growth_ratio_stderr;
  std::uint64_t seed = 0;  ///< master seed of this point
  std::optional<std::string> error;  ///< capacity or input error; the sweep continues
};

/// Graph for one point; the first parameter is n for every family except
/// hypercube (dimension) and grid, where n is the side of a square grid.
inline Graph sweep_graph(const SweepSpec& spec, std::int64_t n) {
  std::vector<std::int64_t> params{n};
  if (spec.family == GraphKind::Grid && spec.extra_params.empty()) params.push_back(n);
  if (spec.family == GraphKind::Star) params[0] = n - 1;
  params.insert(params.end(), spec.extra_params.begin(), spec.extra_params.end());
  return generate(spec.family, params, spec.master_seed);
}

inline Rational sweep_budget(const SweepSpec& spec, const Graph& g) {
  switch (spec.budget_rule) {
    case BudgetRule::Constant: return spec.budget_value;
    case BudgetRule::PerNode: return spec.budget_value * Rational(static_cast<std::int64_t>(g.node_count()));
    case BudgetRule::PerCutwidth: {
      if (spec.family == GraphKind::Complete) {
        return spec.budget_value * Rational(CompleteGraphResistance(g.node_count()).cutwidth());
      }
      if (g.node_count() > kTableLimit) throw CapacityError("per_cutwidth budget needs n <= 20");
      return spec.budget_value * Rational(cutwidth(g, spec.threads));
    }
  }
  return spec.budget_value;
}

/// Replicated extinction-time runs from I_0 = V at each n. Point k uses master
/// seed derive_seed(spec.master_seed, k); replication j of it uses
/// derive_seed(point seed, j). Errors at a point are recorded on its record.
inline std::vector<SweepRecord> extinction_sweep(const SweepSpec& spec) {
  std::vector<SweepRecord> out;
  if (spec.replications == 0) return out;
  out.reserve(spec.sizes.size());
  const SweepRecord* previous = nullptr;
  for (std::size_t k = 0; k < spec.sizes.size(); ++k) {
    SweepRecord rec;
    rec.family = std::string(to_string(spec.family));
    rec.n = spec.sizes[k];
    rec.policy = spec.policy;
    rec.replications = spec.replications;
    rec.seed = derive_seed(spec.master_seed, k);
    try {
      const Graph g = sweep_graph(spec, spec.sizes[k]);
      rec.n = static_cast<std::int64_t>(g.node_count());
      rec.r = sweep_budget(spec, g);
      std::shared_ptr<const ResistanceTable> table;
      if (spec.policy == "resistance_greedy") {
        if (g.node_count() > kTableLimit) throw CapacityError("resistance_greedy needs n <= 20");
        table = std::make_shared<const ResistanceTable>(resistance_table(g, spec.threads));
      }
      const auto policy = builtin_policy(spec.policy, table);
      EpidemicConfig config;
      config.graph = g;
      config.initial_infected = g.all_nodes();
      config.budget = rec.r;
      config.horizon = spec.horizon;
      config.max_events = spec.max_events;
      config.record_events = false;
      config.audit_hazards = false;
      const auto results = run_replications(config, *policy, spec.replications, rec.seed, spec.threads);
      const ExtinctionSummary s = summarize(results);
      rec.extinct = s.extinct;
      rec.censored = s.censored;
      rec.mean_tau = s.mean;
      rec.stderr_tau = s.stderr_mean;
      rec.lower_bound = 2 * s.censored > s.replications;
    } catch (const Error& e) {
      rec.error = e.what();
    }
    if (previous && !previous->error && !rec.error && previous->extinct > 0 && rec.extinct > 0) {
      const double ratio = rec.mean_tau / previous->mean_tau;
      rec.growth_ratio = ratio;
      const double rel_a = rec.extinct > 1 ? rec.stderr_tau / rec.mean_tau : 0.0;
      const double rel_b = previous->extinct > 1 ? previous->stderr_tau / previous->mean_tau : 0.0;
      rec.growth_ratio_stderr = ratio * std::sqrt(rel_a * rel_a + rel_b * rel_b);
    }
    out.push_back(std::move(rec));
    previous = &out.back();
  }
  return out;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << "family,n,r,policy,replications,mean_tau,stderr,censored,growth_ratio,seed\n";
  auto num = [](double x) { return std::isfinite(x) ? format_time(x) : std::string(); };
  for (const auto& r : records) {
    os << r.family << ',' << r.n << ',' << r.r.to_string() << ',' << r.policy << ',' << r.replications << ','
       << num(r.mean_tau) << ',' << num(r.stderr_tau) << ',' << r.censored << ','
       << (r.growth_ratio ? format_time(*r.growth_ratio) : std::string()) << ',' << r.seed << '\n';
  }
}

}  // namespace erl
