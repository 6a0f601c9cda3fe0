#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "erl/bag.hpp"
#include "erl/crusade.hpp"
#include "erl/epidemic.hpp"
#include "erl/error.hpp"
#include "erl/graph.hpp"
#include "erl/parallel.hpp"
#include "erl/rational.hpp"
#include "erl/resistance.hpp"
#include "erl/rng.hpp"

namespace erl {

// ---------------------------------------------------------------------------
// Lemma suite on a full resistance table

struct LemmaWitness {
  std::size_t a = 0;  ///< bitmask
  std::optional<std::size_t> b;
  std::optional<NodeId> v;
  std::string detail;
};

struct LemmaCheck {
  std::string name;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::vector<LemmaWitness> witnesses;  ///< capped at kMaxWitnesses

  static constexpr std::size_t kMaxWitnesses = 16;
  bool pass() const noexcept { return violations == 0; }
};

struct LemmaReport {
  std::vector<LemmaCheck> checks;
  bool exhaustive_pairs = false;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return c.pass(); });
  }
  std::size_t violations() const {
    std::size_t total = 0;
    for (const auto& c : checks) total += c.violations;
    return total;
  }
  const LemmaCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

struct VerifyMode {
  bool exhaustive = true;
  std::size_t samples = 0;  ///< sampled pairs (exhaustive mode, n > 8) or all samples (sampled mode)
  std::uint64_t seed = 0;

  static VerifyMode exhaustive_mode(std::size_t pair_samples = 100000, std::uint64_t seed = 0) {
    return {true, pair_samples, seed};
  }
  static VerifyMode sampled(std::size_t k, std::uint64_t seed) { return {false, k, seed}; }
};

inline constexpr std::size_t kExhaustivePairLimit = 8;

namespace detail {

class CheckSink {
 public:
  explicit CheckSink(std::string name) { check_.name = std::move(name); }
  void pass() { ++check_.checked; }
  void fail(LemmaWitness w) {
    ++check_.checked;
    ++check_.violations;
    if (check_.witnesses.size() < LemmaCheck::kMaxWitnesses) check_.witnesses.push_back(std::move(w));
  }
  void expect(bool ok, LemmaWitness w) { ok ? pass() : fail(std::move(w)); }
  void merge(const CheckSink& other) {
    check_.checked += other.check_.checked;
    check_.violations += other.check_.violations;
    for (const auto& w : other.check_.witnesses)
      if (check_.witnesses.size() < LemmaCheck::kMaxWitnesses) check_.witnesses.push_back(w);
  }
  LemmaCheck take() { return std::move(check_); }

 private:
  LemmaCheck check_;
};

inline std::string ints(const char* fmt_a, long x, const char* fmt_b, long y) {
  return std::string(fmt_a) + std::to_string(x) + fmt_b + std::to_string(y);
}

/// Runs body(begin, end, sink_index) over [0, count) and merges per-chunk sinks in order.
template <typename Body>
std::vector<CheckSink> chunked_checks(std::size_t count, unsigned threads, const std::vector<std::string>& names,
                                      Body&& body) {
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  std::vector<std::vector<CheckSink>> parts(chunks);
  for (auto& p : parts)
    for (const auto& nm : names) p.emplace_back(nm);
  const std::size_t per = (count + chunks - 1) / chunks;
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t begin = std::min(count, c * per);
    const std::size_t end = std::min(count, begin + per);
    body(begin, end, parts[c]);
  });
  std::vector<CheckSink> out;
  for (const auto& nm : names) out.emplace_back(nm);
  for (const auto& p : parts)
    for (std::size_t i = 0; i < out.size(); ++i) out[i].merge(p[i]);
  return out;
}

}  // namespace detail

/// Machine-checks the cut and resistance lemmas on a full table:
///   cut_smoothness      |c(A) - c(B)| <= Δ|A △ B|
///   cut_submodularity   A ⊆ B, v ∈ A: c(A-v) - c(A) <= c(B-v) - c(B)
///   monotonicity        A ⊆ B: γ(A) <= γ(B)
///   smoothness          |γ(A) - γ(B)| <= Δ|A △ B|
///   cut_when_drops      γ(A-v) < γ(A) implies c(A-v) >= γ(A)
///   bellman             fixed point, γ(∅) = 0, realizability
///   below_cutwidth      γ(A) <= W
/// In exhaustive mode every bag and every (A, v) is checked; pairs (A, B) are
/// exhaustive when n <= 8 and otherwise `samples` random pairs. Sampled mode
/// draws `samples` random instances for each check.
inline LemmaReport verify_lemma_suite(const Graph& g, const ResistanceTable& t, VerifyMode mode = {},
                                      unsigned threads = 1) {
  detail::require_table_size(g, kTableLimit, "lemma verification");
  if (!(t.graph() == g)) throw InvalidInputError("table was built for a different graph");
  const std::size_t n = g.node_count();
  const std::size_t size = std::size_t{1} << n;
  const int delta = g.degree_bound();
  const auto cuts = detail::all_cuts(g);
  const auto gamma = t.values();
  const int w = t.cutwidth();

  const std::vector<std::string> names = {"cut_smoothness", "cut_submodularity", "monotonicity", "smoothness",
                                          "cut_when_drops", "below_cutwidth"};
  enum { kCutSmooth, kSubmod, kMono, kSmooth, kDrop, kBelowW };

  auto check_pair = [&](std::size_t a, std::size_t b, std::vector<detail::CheckSink>& s) {
    const int dist = std::popcount(a ^ b);
    const int dc = std::abs(int(cuts[a]) - int(cuts[b]));
    s[kCutSmooth].expect(dc <= delta * dist, {a, b, std::nullopt, detail::ints("cut gap ", dc, " > Δ·|A△B| = ", delta * dist)});
    const int dg = std::abs(int(gamma[a]) - int(gamma[b]));
    s[kSmooth].expect(dg <= delta * dist, {a, b, std::nullopt, detail::ints("γ gap ", dg, " > Δ·|A△B| = ", delta * dist)});
    if ((a & b) == a) {
      s[kMono].expect(gamma[a] <= gamma[b], {a, b, std::nullopt, detail::ints("γ(A) = ", gamma[a], " > γ(B) = ", gamma[b])});
      for (std::size_t rest = a; rest != 0; rest &= rest - 1) {
        const std::size_t bit = rest & (~rest + 1);
        const int lhs = int(cuts[a & ~bit]) - int(cuts[a]);
        const int rhs = int(cuts[b & ~bit]) - int(cuts[b]);
        s[kSubmod].expect(lhs <= rhs, {a, b, static_cast<NodeId>(std::countr_zero(bit)),
                                       detail::ints("c(A-v)-c(A) = ", lhs, " > c(B-v)-c(B) = ", rhs)});
      }
    }
  };

  auto check_single = [&](std::size_t a, std::vector<detail::CheckSink>& s) {
    s[kBelowW].expect(gamma[a] <= w, {a, std::nullopt, std::nullopt, detail::ints("γ(A) = ", gamma[a], " > W = ", w)});
    for (NodeId v = 0; v < n; ++v) {
      const std::size_t bit = std::size_t{1} << v;
      if (!(a & bit)) continue;
      const std::size_t b = a & ~bit;
      s[kCutSmooth].expect(std::abs(int(cuts[a]) - int(cuts[b])) <= delta,
                           {a, b, v, detail::ints("cut step ", int(cuts[a]) - int(cuts[b]), " exceeds Δ = ", delta)});
      s[kSmooth].expect(std::abs(int(gamma[a]) - int(gamma[b])) <= delta,
                        {a, b, v, detail::ints("γ step ", int(gamma[a]) - int(gamma[b]), " exceeds Δ = ", delta)});
      s[kMono].expect(gamma[b] <= gamma[a], {a, b, v, detail::ints("γ(A-v) = ", gamma[b], " > γ(A) = ", gamma[a])});
      if (gamma[b] < gamma[a]) {
        s[kDrop].expect(cuts[b] >= gamma[a], {a, b, v, detail::ints("c(A-v) = ", cuts[b], " < γ(A) = ", gamma[a])});
      } else {
        s[kDrop].pass();
      }
      // Submodularity against B = V, the superset with the most room.
      const std::size_t full = size - 1;
      const int lhs = int(cuts[b]) - int(cuts[a]);
      const int rhs = int(cuts[full & ~bit]) - int(cuts[full]);
      s[kSubmod].expect(lhs <= rhs, {a, full, v, detail::ints("c(A-v)-c(A) = ", lhs, " > c(V-v)-c(V) = ", rhs)});
    }
  };

  LemmaReport report;
  std::vector<detail::CheckSink> sinks;
  if (mode.exhaustive) {
    sinks = detail::chunked_checks(size, threads, names, [&](std::size_t begin, std::size_t end, auto& s) {
      for (std::size_t a = begin; a < end; ++a) check_single(a, s);
    });
    std::vector<detail::CheckSink> pair_sinks;
    if (n <= kExhaustivePairLimit) {
      report.exhaustive_pairs = true;
      pair_sinks = detail::chunked_checks(size, threads, names, [&](std::size_t begin, std::size_t end, auto& s) {
        for (std::size_t a = begin; a < end; ++a)
          for (std::size_t b = 0; b < size; ++b) check_pair(a, b, s);
      });
    } else {
      pair_sinks = detail::chunked_checks(mode.samples, threads, names, [&](std::size_t begin, std::size_t end, auto& s) {
        for (std::size_t i = begin; i < end; ++i) {
          SplitMix64 rng(derive_seed(mode.seed, i));
          const std::size_t b = rng() & (size - 1);
          const std::size_t a = (i % 2 == 0) ? (b & rng()) : (rng() & (size - 1));  // half the pairs nested
          check_pair(a, b, s);
        }
      });
    }
    for (std::size_t i = 0; i < sinks.size(); ++i) sinks[i].merge(pair_sinks[i]);
  } else {
    sinks = detail::chunked_checks(mode.samples, threads, names, [&](std::size_t begin, std::size_t end, auto& s) {
      for (std::size_t i = begin; i < end; ++i) {
        SplitMix64 rng(derive_seed(mode.seed, i));
        const std::size_t b = rng() & (size - 1);
        check_single(b, s);
        check_pair(b & rng(), b, s);
      }
    });
  }
  for (auto& s : sinks) report.checks.push_back(s.take());

  const BellmanCheck bellman = check_bellman(g, t, threads);
  LemmaCheck bc;
  bc.name = "bellman";
  bc.checked = bellman.checked;
  bc.violations = bellman.violations;
  for (const auto& wv : bellman.witnesses)
    bc.witnesses.push_back({wv.bag, std::nullopt, std::nullopt,
                            wv.kind + ": table " + std::to_string(wv.table_value) + ", equation " + std::to_string(wv.rhs)});
  report.checks.push_back(std::move(bc));
  return report;
}

// ---------------------------------------------------------------------------
// Trajectory audits

enum class Lemma4Case { Case1, Case2, NotApplicable };

inline const char* to_string(Lemma4Case c) {
  switch (c) {
    case Lemma4Case::Case1: return "CASE1";
    case Lemma4Case::Case2: return "CASE2";
    case Lemma4Case::NotApplicable: return "NOT_APPLICABLE";
  }
  return "UNKNOWN";
}

/// Interval-witness quantities for one extinct trajectory. Counts are over
/// events with time in (t_prime, t_double_prime]; the state on [t', t''] is
/// I_{t'} followed by those events.
struct IntervalWitness {
  Lemma4Case case_tag = Lemma4Case::NotApplicable;
  int gamma = 0;            ///< γ(I_0)
  int delta = 0;
  int cut_threshold = 0;    ///< ⌈γ/4⌉
  int b = 0;                ///< ⌊γ/(4Δ)⌋ - 1
  std::size_t node_count = 0;
  double T = 0;             ///< first time γ(I_t) <= γ/2
  std::optional<double> T_prime;
  std::optional<int> cut_at_T;        ///< c(I_T), present when T > 0
  std::optional<int> gamma_before_T;  ///< γ(I_{T-}), present when T > 0
  std::size_t recoveries_before_T = 0;  ///< recoveries in (t_start, T] with t_start = 0 or T'
  double t_prime = 0;
  double t_double_prime = 0;
  std::size_t recoveries = 0;
  std::size_t infections = 0;
  int min_cut_on_interval = 0;

  bool applicable() const noexcept { return case_tag != Lemma4Case::NotApplicable; }
};

namespace detail {

struct LogState {
  double time;
  const Event* event;  // nullptr for the initial state
  Bag bag;
  int cut;
};

/// Cut and bag after each event, index 0 being the initial state.
inline std::vector<LogState> log_states(const EventLog& log, const Graph& g) {
  std::vector<LogState> out;
  out.push_back({0.0, nullptr, log.initial_infected, cut(g, log.initial_infected)});
  detail::walk_log(log, g, [&](std::size_t, const Event& e, const Bag& state) {
    const LogState& prev = out.back();
    out.push_back({e.time, &e, state, cut_after_toggle(g, prev.bag, e.node, prev.cut)});
  });
  return out;
}

inline int ceil_div(int a, int b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

}  // namespace detail

/// Replays an extinct trajectory along the interval construction and checks
/// its three properties on the extracted interval.
///
/// T is the first time γ(I_t) <= γ/2. Case 1: c(I_t) >= γ/4 on [0, T], and
/// t' = 0. Case 2: otherwise, t' = T' = sup{t <= T : c(I_t) < γ/4}. In both,
/// t'' is the time of the b-th recovery after t'. The checks at the drop
/// (I_T = I_{T-} - v and c(I_T) >= γ(I_{T-}) > γ/2) run whenever T > 0, even
/// when b < 1 makes the interval part vacuous.
template <ResistanceLookup Table>
IntervalWitness scan_lemma4(const Graph& g, const Table& t, const EventLog& log) {
  if (!log.final_infected.empty()) throw InvalidInputError("scan_lemma4 needs an extinct trajectory");
  const auto states = detail::log_states(log, g);
  IntervalWitness w;
  w.gamma = t.gamma(log.initial_infected);
  w.delta = g.degree_bound();
  w.node_count = g.node_count();
  w.cut_threshold = detail::ceil_div(w.gamma, 4);
  w.b = w.delta > 0 ? w.gamma / (4 * w.delta) - 1 : -1;
  auto violation = [](const std::string& what) { throw LemmaViolation("interval witness: " + what); };

  std::size_t t_index = 0;
  int gamma_prev = w.gamma;
  for (; t_index < states.size(); ++t_index) {
    const int gm = t.gamma(states[t_index].bag);
    if (2 * gm <= w.gamma) break;
    gamma_prev = gm;
  }
  if (t_index == states.size()) violation("resistance never drops to γ/2 on an extinct path");
  w.T = states[t_index].time;
  if (t_index > 0) {
    const detail::LogState& at = states[t_index];
    if (at.event->kind != EventKind::Recovery) violation("resistance dropped on an infection");
    w.cut_at_T = at.cut;
    w.gamma_before_T = gamma_prev;
    if (at.cut < gamma_prev) violation("c(I_T) = " + std::to_string(at.cut) + " < γ(I_{T-}) = " + std::to_string(gamma_prev));
    if (2 * gamma_prev <= w.gamma) violation("γ(I_{T-}) not above γ/2");
  }

  std::optional<std::size_t> last_low;
  for (std::size_t i = 0; i <= t_index; ++i)
    if (states[i].cut < w.cut_threshold) last_low = i;
  std::size_t start = 0;
  if (last_low) {
    if (*last_low == t_index) violation("c(I_T) below γ/4");
    start = *last_low + 1;
    w.T_prime = states[start].time;
    if (states[start].cut >= w.cut_threshold + w.delta) violation("c(I_{T'}) >= γ/4 + Δ");
  }
  for (std::size_t i = start + 1; i <= t_index; ++i)
    if (states[i].event->kind == EventKind::Recovery) ++w.recoveries_before_T;

  if (w.b < 1) return w;
  w.case_tag = last_low ? Lemma4Case::Case2 : Lemma4Case::Case1;
  w.t_prime = states[start].time;
  w.min_cut_on_interval = states[start].cut;
  std::size_t i = start;
  while (w.recoveries < static_cast<std::size_t>(w.b)) {
    if (++i > t_index) {
      violation("only " + std::to_string(w.recoveries) + " recoveries in the interval ending at T, need b = " +
                std::to_string(w.b));
    }
    if (states[i].event->kind == EventKind::Recovery) {
      ++w.recoveries;
    } else {
      ++w.infections;
    }
    w.min_cut_on_interval = std::min(w.min_cut_on_interval, states[i].cut);
  }
  w.t_double_prime = states[i].time;
  if (w.min_cut_on_interval < w.cut_threshold) violation("cut below γ/4 inside the interval");
  if (w.infections > w.node_count + static_cast<std::size_t>(w.b)) violation("more than n + b infections");
  return w;
}

struct RecoveryBoundReport {
  int gamma = 0;  ///< γ(I_0) of the log
  int delta = 0;
  std::size_t events = 0;
  std::size_t recoveries = 0;
  int cut_theta_start = 0;
  int max_cut_theta = 0;
  bool counting_bound_holds = true;  ///< Δ·recoveries >= max c(Θ) - c(Θ_0)
  std::optional<std::size_t> crossing;  ///< i* with γ(Θ_{i*}) <= γ/2 < γ(Θ_{i*-1})
  std::optional<int> cut_at_crossing;
  std::optional<int> gamma_before_crossing;
  bool crossing_bound_holds = true;  ///< c(Θ_{i*}) >= γ(Θ_{i*-1})
  bool lemma5_applicable = false;    ///< c(Θ_0) < γ/4 + Δ and a crossing exists
  bool lemma5_holds = true;          ///< recoveries >= ⌊γ/(4Δ)⌋ - 1
  BottleneckAudit bottleneck;

  bool pass() const noexcept { return counting_bound_holds && crossing_bound_holds && lemma5_holds && bottleneck.pass; }
};

/// Audits the bottleneck construction over the segment [from, to]: Θ starts at
/// I_from and follows the events with time in (from, to]. Throws
/// LemmaViolation when any asserted inequality fails.
template <ResistanceLookup Table>
RecoveryBoundReport audit_recovery_bound(const Graph& g, const Table& t, const EventLog& log, double from, double to) {
  if (!(from <= to)) throw InvalidInputError("segment start after its end");
  RecoveryBoundReport r;
  r.gamma = t.gamma(log.initial_infected);
  r.delta = g.degree_bound();
  const auto states = detail::log_states(log, g);
  std::size_t first = 0;
  while (first + 1 < states.size() && states[first + 1].time <= from) ++first;
  BottleneckTracker tracker(g, states[first].bag);
  r.cut_theta_start = tracker.theta_cut();
  int gamma_prev = t.gamma(tracker.theta());
  for (std::size_t i = first + 1; i < states.size() && states[i].time <= to; ++i) {
    tracker.toggle(states[i].event->node);
    ++r.events;
    const int gm = t.gamma(tracker.theta());
    if (!r.crossing && 2 * gm <= r.gamma && 2 * gamma_prev > r.gamma) {
      r.crossing = r.events;
      r.cut_at_crossing = tracker.theta_cut();
      r.gamma_before_crossing = gamma_prev;
    }
    gamma_prev = gm;
  }
  r.recoveries = tracker.removals();
  r.max_cut_theta = tracker.max_theta_cut();
  r.bottleneck = tracker.audit();
  r.counting_bound_holds =
      static_cast<long long>(r.delta) * static_cast<long long>(r.recoveries) >= r.max_cut_theta - r.cut_theta_start;
  if (r.crossing) r.crossing_bound_holds = *r.cut_at_crossing >= *r.gamma_before_crossing;
  r.lemma5_applicable = r.crossing && r.cut_theta_start < detail::ceil_div(r.gamma, 4) + r.delta;
  if (r.lemma5_applicable) {
    const int b = r.delta > 0 ? r.gamma / (4 * r.delta) - 1 : 0;
    r.lemma5_holds = static_cast<long long>(r.recoveries) >= b;
  }
  if (!r.bottleneck.pass) throw LemmaViolation("bottleneck audit failed: " + r.bottleneck.violated);
  if (!r.counting_bound_holds) {
    throw LemmaViolation("counting bound: Δ·" + std::to_string(r.recoveries) + " < " +
                         std::to_string(r.max_cut_theta - r.cut_theta_start));
  }
  if (!r.crossing_bound_holds) throw LemmaViolation("cut at the resistance crossing below the previous resistance");
  if (!r.lemma5_holds) throw LemmaViolation("fewer than γ/(4Δ) - 1 recoveries before the crossing");
  return r;
}

// ---------------------------------------------------------------------------
// Large deviations and theorem constants

/// Poisson Chernoff exponent ε(λ, λ') = λ' ln(λ'/λ) - λ' + λ. For X ~ Poisson(λn),
/// P(X >= λ'n) <= e^{-εn} when λ' > λ and P(X <= λ'n) <= e^{-εn} when λ' < λ.
inline double poisson_ld_exponent(double lambda, double lambda_prime) {
  if (!(lambda > 0) || !(lambda_prime > 0) || !std::isfinite(lambda) || !std::isfinite(lambda_prime)) {
    throw DomainError("Poisson exponent needs positive finite rates");
  }
  const double e = lambda_prime * std::log(lambda_prime / lambda) - lambda_prime + lambda;
  return std::max(0.0, e);
}

struct TheoremConstants {
  Rational c_gamma;
  int delta = 0;
  Rational c_r;    ///< c_γ² / (80Δ)
  Rational t_bar;  ///< 12 / c_γ
  Rational gamma_threshold;  ///< 8Δ: smallest γ with b >= 1
  /// b as a function of n when γ = c_γ·n: ⌊c_γ n / (4Δ)⌋ - 1.
  std::int64_t b_at(std::int64_t n) const {
    const Rational x = c_gamma * Rational(n) / Rational(4 * delta);
    return x.num() / x.den() - 1;
  }
};

/// Budget and interval constants for a resistance level c_γ on degree bound Δ,
/// with both constraints on them checked exactly.
inline TheoremConstants theorem_constants(const Rational& c_gamma, int delta) {
  if (delta < 1) throw DomainError("degree bound must be a positive integer");
  if (c_gamma <= Rational(0) || c_gamma > Rational(delta)) {
    throw DomainError("c_gamma must lie in (0, Δ], got " + c_gamma.to_string());
  }
  TheoremConstants k;
  k.c_gamma = c_gamma;
  k.delta = delta;
  k.c_r = c_gamma * c_gamma / Rational(80 * delta);
  k.t_bar = Rational(12) / c_gamma;
  k.gamma_threshold = Rational(8 * delta);
  if (!(k.c_r < c_gamma * c_gamma / Rational(40 * delta))) throw InvariantViolation("c_r not below c_γ²/(40Δ)");
  if (!(k.c_r * k.t_bar < c_gamma / Rational(5 * delta))) throw InvariantViolation("c_r·t̄ not below c_γ/(5Δ)");
  if (!(c_gamma / Rational(4) * k.t_bar > Rational(2))) throw InvariantViolation("(c_γ/4)·t̄ not above 2");
  return k;
}

}  // namespace erl
