#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "erl/bag.hpp"
#include "erl/error.hpp"
#include "erl/graph.hpp"
#include "erl/parallel.hpp"
#include "erl/rational.hpp"
#include "erl/rng.hpp"

namespace erl {

#ifdef NDEBUG
inline constexpr bool kAuditByDefault = false;
#else
inline constexpr bool kAuditByDefault = true;
#endif

enum class EventKind : std::uint8_t { Infection = 0, Recovery = 1 };

inline const char* to_string(EventKind k) { return k == EventKind::Infection ? "INFECTION" : "RECOVERY"; }

struct Event {
  double time = 0;
  EventKind kind = EventKind::Infection;
  NodeId node = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

struct EventLog {
  Bag initial_infected;
  std::vector<Event> events;
  Bag final_infected;

  friend bool operator==(const EventLog&, const EventLog&) = default;
};

enum class CensorReason { None, Horizon, MaxEvents, Stalled };

inline const char* to_string(CensorReason r) {
  switch (r) {
    case CensorReason::None: return "NONE";
    case CensorReason::Horizon: return "HORIZON";
    case CensorReason::MaxEvents: return "MAX_EVENTS";
    case CensorReason::Stalled: return "STALLED";
  }
  return "UNKNOWN";
}

struct SimulationResult {
  std::optional<double> extinction_time;  ///< set iff the run ended at ∅
  CensorReason censor = CensorReason::None;
  double end_time = 0;
  EventLog log;  ///< events are empty unless the config records them
  std::uint64_t infection_count = 0;
  std::uint64_t recovery_count = 0;

  bool extinct() const noexcept { return extinction_time.has_value(); }
};

/// Curing rates ρ_v; nodes not listed get rate 0.
struct Allocation {
  std::vector<std::pair<NodeId, Rational>> rates;

  Rational total() const {
    Rational sum;
    for (const auto& [v, rho] : rates) sum += rho;
    return sum;
  }

  static Allocation single(NodeId v, Rational rate) {
    Allocation a;
    if (!rate.is_zero()) a.rates.emplace_back(v, rate);
    return a;
  }
};

struct EpidemicConfig {
  Graph graph;
  Bag initial_infected;
  Rational budget;
  Rational infection_rate{1};
  std::optional<double> horizon;  ///< nullopt = unbounded
  std::uint64_t seed = 0;
  std::uint64_t max_events = 100'000'000;
  bool record_events = true;
  /// Recompute the infection hazard from scratch after every event.
  bool audit_hazards = kAuditByDefault;
};

namespace detail {

/// Fenwick tree over integer infection weights (infected-neighbor counts of healthy nodes).
class HazardTree {
 public:
  explicit HazardTree(std::size_t n) : tree_(n + 1, 0), weights_(n, 0) {
    step_ = n == 0 ? 0 : std::bit_floor(n);
  }

  void set(std::size_t i, std::int64_t w) {
    const std::int64_t delta = w - weights_[i];
    if (delta == 0) return;
    weights_[i] = w;
    total_ += delta;
    for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
  }

  std::int64_t weight(std::size_t i) const { return weights_[i]; }
  std::int64_t total() const noexcept { return total_; }

  /// Index i with prefix(i) <= target < prefix(i + 1), for 0 <= target < total.
  std::size_t find(std::int64_t target) const {
    std::size_t pos = 0;
    for (std::size_t step = step_; step != 0; step >>= 1) {
      if (pos + step < tree_.size() && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    return pos;
  }

 private:
  std::vector<std::int64_t> tree_;
  std::vector<std::int64_t> weights_;
  std::int64_t total_ = 0;
  std::size_t step_ = 0;
};

struct SimulationState {
  const Graph* graph = nullptr;
  Rational budget;
  double time = 0;
  Bag infected;
  std::vector<std::uint8_t> flags;
  std::vector<NodeId> members;       // unordered infected list
  std::vector<std::size_t> position;  // index into members
  std::vector<int> infected_neighbors;
  std::int64_t cut = 0;
  const std::vector<Event>* history = nullptr;
};

}  // namespace detail

/// Read-only view of the running process handed to policies.
class SimulationView {
 public:
  explicit SimulationView(const detail::SimulationState& s) : s_(&s) {}

  const Graph& graph() const noexcept { return *s_->graph; }
  double time() const noexcept { return s_->time; }
  const Rational& budget() const noexcept { return s_->budget; }
  const Bag& infected() const noexcept { return s_->infected; }
  /// Infected nodes in unspecified order.
  std::span<const NodeId> infected_nodes() const noexcept { return s_->members; }
  bool is_infected(NodeId v) const { return s_->flags[v] != 0; }
  int infected_neighbors(NodeId v) const { return s_->infected_neighbors[v]; }
  /// cut(I_t), the total infection hazard when β = 1.
  std::int64_t cut() const noexcept { return s_->cut; }
  /// cut(I_t - v) for infected v, in O(1).
  std::int64_t cut_without(NodeId v) const {
    return s_->cut + 2 * s_->infected_neighbors[v] - s_->graph->degree(v);
  }
  /// Events so far; empty when the run does not record events.
  std::span<const Event> history() const noexcept { return *s_->history; }

 private:
  const detail::SimulationState* s_;
};

/// Maps the observable state and history to curing rates within the budget.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  /// Called once per run with the policy's own stream seed.
  virtual void reset(std::uint64_t /*seed*/) {}
  virtual Allocation allocate(const SimulationView& view) = 0;
  virtual std::unique_ptr<Policy> clone() const = 0;
};

namespace detail {

inline void validate_allocation(const Policy& policy, const SimulationState& s, Allocation& a) {
  auto violation = [&](const std::string& what) {
    throw PolicyViolation("policy '" + policy.name() + "': " + what);
  };
  std::sort(a.rates.begin(), a.rates.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  Rational sum;
  for (std::size_t i = 0; i < a.rates.size(); ++i) {
    const auto& [v, rho] = a.rates[i];
    if (v >= s.flags.size()) violation("rate for nonexistent node " + std::to_string(v));
    if (i > 0 && a.rates[i - 1].first == v) violation("duplicate rate for node " + std::to_string(v));
    if (rho.is_negative()) violation("negative rate for node " + std::to_string(v));
    if (!rho.is_zero() && s.flags[v] == 0) violation("positive rate for healthy node " + std::to_string(v));
    sum += rho;
  }
  if (sum > s.budget) violation("total rate " + sum.to_string() + " exceeds budget " + s.budget.to_string());
}

class Simulator {
 public:
  Simulator(const EpidemicConfig& config, Policy& policy, std::uint64_t seed)
      : config_(config), policy_(policy), rng_(derive_seed(seed, 0)), tree_(config.graph.node_count()) {
    const Graph& g = config.graph;
    check_bag(g, config.initial_infected);
    if (config.budget.is_negative()) throw InvalidInputError("budget must be nonnegative");
    if (config.infection_rate <= Rational(0)) throw InvalidInputError("infection rate must be positive");
    if (config.horizon && !(*config.horizon > 0)) throw InvalidInputError("horizon must be positive");
    beta_ = config.infection_rate.to_double();
    const std::size_t n = g.node_count();
    state_.graph = &g;
    state_.budget = config.budget;
    state_.infected = Bag(n);
    state_.flags.assign(n, 0);
    state_.position.assign(n, 0);
    state_.infected_neighbors.assign(n, 0);
    state_.history = &result_.log.events;
    config.initial_infected.for_each([&](NodeId v) { infect(v); });
    result_.log.initial_infected = config.initial_infected;
    policy_.reset(derive_seed(seed, 1));
  }

  SimulationResult run() {
    const bool record = config_.record_events;
    while (true) {
      if (state_.members.empty()) {
        result_.extinction_time = state_.time;
        break;
      }
      if (events_ >= config_.max_events) {
        result_.censor = CensorReason::MaxEvents;
        break;
      }
      Allocation alloc = policy_.allocate(SimulationView(state_));
      validate_allocation(policy_, state_, alloc);
      double recovery_hazard = 0;
      for (const auto& [v, rho] : alloc.rates) recovery_hazard += rho.to_double();
      const double infection_hazard = beta_ * static_cast<double>(state_.cut);
      const double total = infection_hazard + recovery_hazard;
      if (!(total > 0)) {
        if (config_.horizon) {
          result_.censor = CensorReason::Horizon;
          state_.time = *config_.horizon;
        } else {
          result_.censor = CensorReason::Stalled;
        }
        break;
      }
      const double dt = rng_.exponential(total);
      double next = state_.time + dt;
      if (!(next > state_.time)) next = std::nextafter(state_.time, std::numeric_limits<double>::infinity());
      if (config_.horizon && next > *config_.horizon) {
        result_.censor = CensorReason::Horizon;
        state_.time = *config_.horizon;
        break;
      }
      state_.time = next;
      Event event{next, EventKind::Infection, 0};
      if (rng_.uniform() * total < infection_hazard) {
        const auto pick = tree_.find(static_cast<std::int64_t>(rng_.below(static_cast<std::uint64_t>(state_.cut))));
        event.node = static_cast<NodeId>(pick);
        infect(event.node);
        ++result_.infection_count;
      } else {
        const double target = rng_.uniform() * recovery_hazard;
        double acc = 0;
        event.kind = EventKind::Recovery;
        event.node = alloc.rates.back().first;
        for (const auto& [v, rho] : alloc.rates) {
          acc += rho.to_double();
          if (target < acc) {
            event.node = v;
            break;
          }
        }
        recover(event.node);
        ++result_.recovery_count;
      }
      ++events_;
      if (record) result_.log.events.push_back(event);
      if (config_.audit_hazards) audit();
    }
    result_.end_time = state_.time;
    result_.log.final_infected = state_.infected;
    return std::move(result_);
  }

 private:
  void infect(NodeId v) {
    const Graph& g = *state_.graph;
    state_.flags[v] = 1;
    state_.position[v] = state_.members.size();
    state_.members.push_back(v);
    state_.infected.add(v);
    state_.cut += g.degree(v) - 2 * state_.infected_neighbors[v];
    tree_.set(v, 0);
    for (const NodeId w : g.neighbors(v)) {
      ++state_.infected_neighbors[w];
      if (state_.flags[w] == 0) tree_.set(w, state_.infected_neighbors[w]);
    }
  }

  void recover(NodeId v) {
    const Graph& g = *state_.graph;
    state_.flags[v] = 0;
    const std::size_t pos = state_.position[v];
    const NodeId last = state_.members.back();
    state_.members[pos] = last;
    state_.position[last] = pos;
    state_.members.pop_back();
    state_.infected.remove(v);
    state_.cut -= g.degree(v) - 2 * state_.infected_neighbors[v];
    tree_.set(v, state_.infected_neighbors[v]);
    for (const NodeId w : g.neighbors(v)) {
      --state_.infected_neighbors[w];
      if (state_.flags[w] == 0) tree_.set(w, state_.infected_neighbors[w]);
    }
  }

  void audit() const {
    const int fresh = erl::cut(*state_.graph, state_.infected);
    if (fresh != state_.cut || tree_.total() != state_.cut) {
      throw InvariantViolation("infection hazard bookkeeping: cached " + std::to_string(state_.cut) + ", tree " +
                               std::to_string(tree_.total()) + ", recomputed " + std::to_string(fresh) + " at event " +
                               std::to_string(events_));
    }
  }

  const EpidemicConfig& config_;
  Policy& policy_;
  SplitMix64 rng_;
  HazardTree tree_;
  SimulationState state_;
  SimulationResult result_;
  double beta_ = 1;
  std::uint64_t events_ = 0;
};

}  // namespace detail

/// Exact event-driven run of the controlled SIS process.
///
/// Healthy node v is infected at rate β·(infected neighbors of v), so the total
/// infection hazard is β·cut(I_t); infected v recovers at the policy's ρ_v. The
/// policy is queried after every event and its allocation is held constant until
/// the next one, which makes the embedded jump chain exact (Gillespie direct
/// method). Event and policy randomness come from separate streams of `seed`.
inline SimulationResult simulate(const EpidemicConfig& config, Policy& policy) {
  return detail::Simulator(config, policy, config.seed).run();
}

/// Independent runs; replication j uses seed derive_seed(master_seed, j) and a
/// fresh clone of `prototype`. Results are ordered by replication index.
inline std::vector<SimulationResult> run_replications(const EpidemicConfig& config, const Policy& prototype,
                                                      std::size_t count, std::uint64_t master_seed,
                                                      unsigned threads = 1) {
  std::vector<SimulationResult> out(count);
  parallel_for(count, threads, [&](std::size_t j) {
    auto policy = prototype.clone();
    out[j] = detail::Simulator(config, *policy, derive_seed(master_seed, j)).run();
  });
  return out;
}

struct ExtinctionSummary {
  std::size_t replications = 0;
  std::size_t extinct = 0;
  std::size_t censored = 0;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double variance = std::numeric_limits<double>::quiet_NaN();
  double stderr_mean = std::numeric_limits<double>::quiet_NaN();
  /// Standard error of the sample variance, from the fourth central moment.
  double stderr_variance = std::numeric_limits<double>::quiet_NaN();
};

/// Moments of τ over extinct runs; censored runs are counted, never averaged in.
inline ExtinctionSummary summarize(std::span<const SimulationResult> results) {
  ExtinctionSummary s;
  s.replications = results.size();
  std::vector<double> taus;
  for (const auto& r : results) {
    if (r.extinct()) {
      taus.push_back(*r.extinction_time);
    } else {
      ++s.censored;
    }
  }
  s.extinct = taus.size();
  if (taus.empty()) return s;
  double sum = 0;
  for (const double t : taus) sum += t;
  const double k = static_cast<double>(taus.size());
  s.mean = sum / k;
  if (taus.size() < 2) return s;
  double m2 = 0;
  double m4 = 0;
  for (const double t : taus) {
    const double d = t - s.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  s.variance = m2 / (k - 1);
  s.stderr_mean = std::sqrt(s.variance / k);
  const double mu2 = m2 / k;
  const double mu4 = m4 / k;
  s.stderr_variance = std::sqrt(std::max(0.0, mu4 - mu2 * mu2) / k);
  return s;
}

struct TrajectorySegment {
  double start = 0;
  Bag bag;
};

namespace detail {

/// Walks a log, checking each event against the current state. Calls
/// step(index, event, state_after) after applying each event.
template <typename Step>
void walk_log(const EventLog& log, const Graph& g, Step&& step) {
  check_bag(g, log.initial_infected);
  Bag state = log.initial_infected;
  double last = 0;
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    const Event& e = log.events[i];
    if (e.node >= g.node_count()) throw ReplayError(i, "node " + std::to_string(e.node) + " out of range");
    if (!(e.time > last)) throw ReplayError(i, "event times must be strictly increasing and positive");
    last = e.time;
    if (e.kind == EventKind::Recovery) {
      if (!state.contains(e.node)) throw ReplayError(i, "recovery of healthy node " + std::to_string(e.node));
      state.remove(e.node);
    } else {
      if (state.contains(e.node)) throw ReplayError(i, "infection of infected node " + std::to_string(e.node));
      bool exposed = false;
      for (const NodeId w : g.neighbors(e.node)) exposed = exposed || state.contains(w);
      if (!exposed) throw ReplayError(i, "infection of node " + std::to_string(e.node) + " with no infected neighbor");
      state.add(e.node);
    }
    step(i, e, state);
  }
  if (!(state == log.final_infected)) {
    throw ReplayError(log.events.size(), "final bag " + log.final_infected.to_string() + " differs from replayed " +
                                             state.to_string());
  }
}

}  // namespace detail

/// Piecewise-constant trajectory: the initial segment from time 0, then one per event.
inline std::vector<TrajectorySegment> replay(const EventLog& log, const Graph& g) {
  std::vector<TrajectorySegment> out;
  out.push_back({0.0, log.initial_infected});
  detail::walk_log(log, g, [&](std::size_t, const Event& e, const Bag& state) { out.push_back({e.time, state}); });
  return out;
}

}  // namespace erl
