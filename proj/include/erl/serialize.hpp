#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "erl/analysis.hpp"
#include "erl/bag.hpp"
#include "erl/crusade.hpp"
#include "erl/epidemic.hpp"
#include "erl/resistance.hpp"
#include "erl/sweep.hpp"

namespace erl {

using Json = nlohmann::ordered_json;

inline Json bag_json(const Bag& b) {
  Json nodes = Json::array();
  b.for_each([&](NodeId v) { nodes.push_back(v); });
  return nodes;
}

inline Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

template <typename T>
Json optional_json(const std::optional<T>& x) {
  return x ? Json(*x) : Json(nullptr);
}

inline Json to_json(const Crusade& c, const Graph& g) {
  Json bags = Json::array();
  for (const Bag& b : c.bags()) bags.push_back(bag_json(b));
  return {{"source", bag_json(c.source())}, {"target", bag_json(c.target())}, {"width", width(g, c)},
          {"steps", c.steps()}, {"bags", bags}};
}

inline Json to_json(const SimulationResult& r) {
  Json j;
  j["extinct"] = r.extinct();
  j["extinction_time"] = r.extinction_time ? Json(*r.extinction_time) : Json(nullptr);
  j["censor"] = to_string(r.censor);
  j["end_time"] = r.end_time;
  j["infection_count"] = r.infection_count;
  j["recovery_count"] = r.recovery_count;
  j["initial_infected"] = bag_json(r.log.initial_infected);
  j["final_infected"] = bag_json(r.log.final_infected);
  return j;
}

inline Json to_json(const ExtinctionSummary& s) {
  return {{"replications", s.replications}, {"extinct", s.extinct},           {"censored", s.censored},
          {"mean_tau", number_or_null(s.mean)}, {"stderr", number_or_null(s.stderr_mean)},
          {"variance", number_or_null(s.variance)}};
}

inline Json to_json(const LemmaReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json ws = Json::array();
    for (const auto& w : c.witnesses) {
      ws.push_back({{"a", w.a}, {"b", optional_json(w.b)}, {"v", optional_json(w.v)}, {"detail", w.detail}});
    }
    checks.push_back({{"name", c.name}, {"checked", c.checked}, {"violations", c.violations}, {"witnesses", ws}});
  }
  return {{"pass", r.pass()}, {"exhaustive_pairs", r.exhaustive_pairs}, {"checks", checks}};
}

inline Json to_json(const IntervalWitness& w) {
  return {{"case", to_string(w.case_tag)},
          {"gamma", w.gamma},
          {"delta", w.delta},
          {"cut_threshold", w.cut_threshold},
          {"b", w.b},
          {"T", w.T},
          {"T_prime", optional_json(w.T_prime)},
          {"cut_at_T", optional_json(w.cut_at_T)},
          {"gamma_before_T", optional_json(w.gamma_before_T)},
          {"recoveries_before_T", w.recoveries_before_T},
          {"t_prime", w.t_prime},
          {"t_double_prime", w.t_double_prime},
          {"recoveries", w.recoveries},
          {"infections", w.infections},
          {"min_cut_on_interval", w.min_cut_on_interval}};
}

inline Json to_json(const RecoveryBoundReport& r) {
  return {{"pass", r.pass()},
          {"gamma", r.gamma},
          {"delta", r.delta},
          {"events", r.events},
          {"recoveries", r.recoveries},
          {"cut_theta_start", r.cut_theta_start},
          {"max_cut_theta", r.max_cut_theta},
          {"counting_bound_holds", r.counting_bound_holds},
          {"crossing", optional_json(r.crossing)},
          {"cut_at_crossing", optional_json(r.cut_at_crossing)},
          {"gamma_before_crossing", optional_json(r.gamma_before_crossing)},
          {"crossing_bound_holds", r.crossing_bound_holds},
          {"lemma5_applicable", r.lemma5_applicable},
          {"lemma5_holds", r.lemma5_holds}};
}

inline Json to_json(const TheoremConstants& k) {
  return {{"c_gamma", k.c_gamma.to_string()}, {"delta", k.delta},      {"c_r", k.c_r.to_string()},
          {"c_r_value", k.c_r.to_double()},     {"t_bar", k.t_bar.to_string()},
          {"gamma_threshold", k.gamma_threshold.to_string()}};
}

inline Json to_json(const SweepRecord& r) {
  return {{"family", r.family},
          {"n", r.n},
          {"r", r.r.to_string()},
          {"policy", r.policy},
          {"replications", r.replications},
          {"extinct", r.extinct},
          {"censored", r.censored},
          {"mean_tau", number_or_null(r.mean_tau)},
          {"stderr", number_or_null(r.stderr_tau)},
          {"lower_bound", r.lower_bound},
          {"growth_ratio", optional_json(r.growth_ratio)},
          {"growth_ratio_stderr", optional_json(r.growth_ratio_stderr)},
          {"seed", r.seed},
          {"error", optional_json(r.error)}};
}

}  // namespace erl
