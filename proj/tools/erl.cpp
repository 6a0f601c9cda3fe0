// erl: resistance tables, CutWidth, controlled SIS simulation, lemma
// verification and extinction-time sweeps.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "erl.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kViolations = 1, kUsage = 2, kIo = 3 };

struct GraphArgs {
  std::string gen;
  std::string file;
};

struct Context {
  std::vector<std::string> argv;
  std::string subcommand;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string manifest;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw erl::IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::string& path, Context& ctx, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw erl::IoError("cannot write '" + path + "'");
  ctx.outputs.push_back(path);
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void add_graph_flags(CLI::App* cmd, GraphArgs& g) {
  auto* gen = cmd->add_option("--gen", g.gen, "Generator spec kind:params, e.g. random_regular:10,3");
  auto* file = cmd->add_option("--graph", g.file, "Graph file (edge list or JSON)");
  gen->excludes(file);
}

erl::Graph load_graph(const GraphArgs& g, const Context& ctx) {
  if (!g.gen.empty()) return erl::generate_from_spec(g.gen, ctx.seed);
  if (!g.file.empty()) return erl::parse_graph(read_file(g.file));
  throw CLI::RequiredError("--gen or --graph");
}

/// "all", "none", hex bitmask "0x..", or a comma-separated node list.
erl::Bag parse_bag(const std::string& text, std::size_t n) {
  if (text == "all") return erl::Bag::full(n);
  if (text == "none" || text.empty()) return erl::Bag(n);
  erl::Bag bag(n);
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    erl::NodeId bit = 0;
    for (auto it = text.rbegin(); it != text.rend() - 2; ++it) {
      const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(*it)));
      int nibble = 0;
      if (c >= '0' && c <= '9') {
        nibble = c - '0';
      } else if (c >= 'a' && c <= 'f') {
        nibble = c - 'a' + 10;
      } else {
        throw erl::InvalidBagError("bad hex digit in bag '" + text + "'");
      }
      for (int k = 0; k < 4; ++k, ++bit)
        if ((nibble >> k) & 1) bag.add(bit);
    }
    return bag;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw erl::InvalidBagError("bad node '" + item + "' in bag '" + text + "'");
    bag.add(static_cast<erl::NodeId>(v));
  }
  return bag;
}

void write_manifest(const Context& ctx) {
  std::string path = ctx.manifest;
  if (path.empty() && !ctx.outputs.empty()) path = ctx.outputs.front() + ".manifest.json";
  if (path.empty()) return;
  erl::Json m;
  m["subcommand"] = ctx.subcommand;
  m["argv"] = ctx.argv;
  m["seed"] = ctx.seed;
  m["threads"] = ctx.threads;
  m["version"] = kVersion;
  m["outputs"] = ctx.outputs;
  m["duration_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
  std::ofstream out(path);
  if (!out) throw erl::IoError("cannot write manifest '" + path + "'");
  out << m.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

struct ResistanceArgs {
  GraphArgs graph;
  std::vector<std::string> out;
  std::string witness;
  std::string witness_out;
  std::string source;
};

int cmd_resistance(const ResistanceArgs& a, Context& ctx) {
  const erl::Graph g = load_graph(a.graph, ctx);
  if (!a.source.empty()) {
    const erl::Bag bag = parse_bag(a.source, g.node_count());
    const erl::Json j = {{"n", g.node_count()}, {"source", erl::bag_json(bag)},
                         {"gamma", erl::brute_force_resistance(g, bag)}};
    std::cout << j.dump(2) << '\n';
    return kOk;
  }
  const auto t = erl::resistance_table(g, ctx.threads);
  for (const auto& path : a.out) {
    if (ends_with(path, ".csv")) {
      auto out = open_out(path, ctx);
      erl::write_table_csv(out, t);
    } else {
      auto out = open_out(path, ctx, true);
      erl::write_rgt1(out, t);
    }
  }
  const erl::BellmanCheck check = erl::check_bellman(g, t, ctx.threads);
  erl::Json summary = {{"n", g.node_count()},
                       {"edges", g.edge_count()},
                       {"cutwidth", t.cutwidth()},
                       {"rounds", t.converged_rounds()},
                       {"bellman_pass", check.pass}};
  if (!a.witness.empty()) {
    const erl::Bag bag = parse_bag(a.witness, g.node_count());
    const erl::Crusade c = erl::optimal_crusade(g, t, bag);
    const auto valid = erl::validate_crusade(c.bags(), bag, g.empty_bag());
    if (!valid.valid || erl::width(g, c) != t.gamma(bag)) {
      throw erl::InvariantViolation("witness crusade failed validation");
    }
    const erl::Json cj = erl::to_json(c, g);
    if (!a.witness_out.empty()) {
      auto out = open_out(a.witness_out, ctx);
      out << cj.dump(2) << '\n';
    } else {
      summary["witness"] = cj;
    }
  }
  std::cout << summary.dump(2) << '\n';
  return check.pass ? kOk : kViolations;
}

int cmd_cutwidth(const GraphArgs& a, Context& ctx) {
  const erl::Graph g = load_graph(a, ctx);
  const int general = erl::resistance_table(g, ctx.threads).cutwidth();
  const int monotone = erl::monotone_resistance_table(g).cutwidth();
  std::cout << general << '\n';
  std::cerr << "crusade value " << general << ", monotone value " << monotone << '\n';
  if (general != monotone) {
    std::cerr << "error: the two CutWidth computations disagree\n";
    return kViolations;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  GraphArgs graph;
  std::string initial = "all";
  std::string budget = "1";
  std::string beta = "1";
  std::string policy = "max_cut_drop";
  std::size_t replications = 1;
  std::optional<double> horizon;
  std::uint64_t max_events = 100'000'000;
  std::string out;
  std::string events;
  bool audit = false;
};

std::shared_ptr<const erl::ResistanceTable> table_for(const std::string& policy, const erl::Graph& g, unsigned threads) {
  if (policy != "resistance_greedy") return nullptr;
  return std::make_shared<const erl::ResistanceTable>(erl::resistance_table(g, threads));
}

int cmd_simulate(const SimulateArgs& a, Context& ctx) {
  const erl::Graph g = load_graph(a.graph, ctx);
  erl::EpidemicConfig config;
  config.graph = g;
  config.initial_infected = parse_bag(a.initial, g.node_count());
  config.budget = erl::Rational::parse(a.budget);
  config.infection_rate = erl::Rational::parse(a.beta);
  config.horizon = a.horizon;
  config.seed = ctx.seed;
  config.max_events = a.max_events;
  config.audit_hazards = a.audit || erl::kAuditByDefault;
  const auto policy = erl::builtin_policy(a.policy, table_for(a.policy, g, ctx.threads));

  erl::Json doc;
  doc["graph"] = {{"n", g.node_count()}, {"edges", g.edge_count()}};
  doc["budget"] = config.budget.to_string();
  doc["policy"] = policy->name();
  doc["seed"] = ctx.seed;
  if (a.replications <= 1) {
    config.record_events = !a.events.empty();
    const auto r = erl::simulate(config, *policy);
    doc["result"] = erl::to_json(r);
    if (!a.events.empty()) {
      if (ends_with(a.events, ".evl")) {
        auto out = open_out(a.events, ctx, true);
        erl::write_event_binary(out, r.log);
      } else {
        auto out = open_out(a.events, ctx);
        erl::write_event_csv(out, r.log);
      }
    }
  } else {
    if (!a.events.empty()) throw CLI::ValidationError("--events", "only available with a single replication");
    config.record_events = false;
    const auto results = erl::run_replications(config, *policy, a.replications, ctx.seed, ctx.threads);
    doc["summary"] = erl::to_json(erl::summarize(results));
  }
  if (!a.out.empty()) {
    auto out = open_out(a.out, ctx);
    out << doc.dump(2) << '\n';
  }
  std::cout << doc.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  GraphArgs graph;
  std::string mode = "exhaustive";
  std::size_t samples = 100000;
  std::size_t trajectories = 0;
  std::string budget;
  std::uint64_t max_events = 10'000'000;
  bool inject_fault = false;
  std::string out;
};

int cmd_verify(const VerifyArgs& a, Context& ctx) {
  const erl::Graph g = load_graph(a.graph, ctx);
  auto table = erl::resistance_table(g, ctx.threads);
  erl::Json doc;
  doc["graph"] = {{"n", g.node_count()}, {"edges", g.edge_count()}, {"cutwidth", table.cutwidth()}};
  if (a.inject_fault) {
    // γ(V) forced to 0: breaks monotonicity and realizability on any graph with W > 0.
    const std::size_t full = table.values().size() - 1;
    table = table.with_entry(full, 0);
    doc["injected_fault"] = {{"bag", full}, {"value", 0}};
  }
  const auto mode = a.mode == "sampled" ? erl::VerifyMode::sampled(a.samples, ctx.seed)
                                        : erl::VerifyMode::exhaustive_mode(a.samples, ctx.seed);
  const auto report = erl::verify_lemma_suite(g, table, mode, ctx.threads);
  doc["lemmas"] = erl::to_json(report);
  std::size_t violations = report.violations();

  if (a.trajectories > 0) {
    erl::EpidemicConfig config;
    config.graph = g;
    config.initial_infected = g.all_nodes();
    config.budget = a.budget.empty() ? erl::Rational(static_cast<std::int64_t>(g.edge_count()) + 1)
                                     : erl::Rational::parse(a.budget);
    config.max_events = a.max_events;
    erl::MaxCutDropPolicy policy;
    const auto runs = erl::run_replications(config, policy, a.trajectories, ctx.seed, ctx.threads);
    std::size_t audited = 0;
    std::size_t censored = 0;
    std::size_t applicable = 0;
    erl::Json failures = erl::Json::array();
    for (std::size_t j = 0; j < runs.size(); ++j) {
      if (!runs[j].extinct()) {
        ++censored;
        continue;
      }
      try {
        erl::audit_recovery_bound(g, table, runs[j].log, 0.0, *runs[j].extinction_time);
        if (erl::scan_lemma4(g, table, runs[j].log).applicable()) ++applicable;
        ++audited;
      } catch (const erl::LemmaViolation& e) {
        ++violations;
        if (failures.size() < 16) failures.push_back({{"replication", j}, {"error", e.what()}});
      }
    }
    doc["trajectories"] = {{"requested", a.trajectories}, {"audited", audited},  {"censored", censored},
                           {"lemma4_applicable", applicable}, {"budget", config.budget.to_string()},
                           {"failures", failures}};
  }
  doc["violations"] = violations;
  doc["pass"] = violations == 0;
  if (!a.out.empty()) {
    auto out = open_out(a.out, ctx);
    out << doc.dump(2) << '\n';
  }
  std::cout << doc.dump(2) << '\n';
  if (violations > 0) {
    for (const auto& c : report.checks) {
      for (const auto& w : c.witnesses) std::cerr << "violation " << c.name << ": bag " << w.a << ": " << w.detail << '\n';
    }
  }
  return violations == 0 ? kOk : kViolations;
}

// ---------------------------------------------------------------------------

erl::SweepSpec parse_sweep_spec(const std::string& text, const Context& ctx) {
  erl::Json doc;
  try {
    doc = erl::Json::parse(text);
  } catch (const erl::Json::parse_error& e) {
    throw erl::ParseError(0, std::string("sweep spec is not valid JSON: ") + e.what());
  }
  auto fail = [](const std::string& field, const std::string& what) -> void {
    throw erl::InvalidInputError("sweep spec: field '" + field + "' " + what);
  };
  if (!doc.is_object()) fail("<root>", "must be an object");
  static const std::vector<std::string> known = {"family",     "sizes",        "extra_params", "budget",
                                                 "policy",     "replications", "master_seed",  "horizon",
                                                 "max_events"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) fail(key, "is not a recognized field");
  }
  erl::SweepSpec spec;
  spec.threads = ctx.threads;
  spec.master_seed = ctx.seed;

  if (!doc.contains("family") || !doc["family"].is_string()) fail("family", "must be a graph family name");
  const auto family = erl::graph_kind_from_string(doc["family"].get<std::string>());
  if (!family) fail("family", "names an unknown graph family");
  spec.family = *family;

  if (!doc.contains("sizes") || !doc["sizes"].is_array() || doc["sizes"].empty()) {
    fail("sizes", "must be a nonempty array of positive integers");
  }
  for (const auto& v : doc["sizes"]) {
    if (!v.is_number_unsigned() || v.get<std::int64_t>() < 1) fail("sizes", "must contain positive integers");
    spec.sizes.push_back(v.get<std::int64_t>());
  }
  if (doc.contains("extra_params")) {
    if (!doc["extra_params"].is_array()) fail("extra_params", "must be an array of integers");
    for (const auto& v : doc["extra_params"]) {
      if (!v.is_number_integer()) fail("extra_params", "must contain integers");
      spec.extra_params.push_back(v.get<std::int64_t>());
    }
  }
  if (!doc.contains("budget") || !doc["budget"].is_object()) fail("budget", "must be an object {rule, value}");
  const auto& budget = doc["budget"];
  const std::string rule = budget.value("rule", "");
  if (rule == "constant") {
    spec.budget_rule = erl::BudgetRule::Constant;
  } else if (rule == "per_node") {
    spec.budget_rule = erl::BudgetRule::PerNode;
  } else if (rule == "per_cutwidth") {
    spec.budget_rule = erl::BudgetRule::PerCutwidth;
  } else {
    fail("budget.rule", "must be one of constant, per_node, per_cutwidth");
  }
  if (!budget.contains("value")) fail("budget.value", "is required");
  try {
    const auto& v = budget["value"];
    spec.budget_value = v.is_string() ? erl::Rational::parse(v.get<std::string>())
                                      : erl::Rational::parse(v.dump());
  } catch (const erl::Error&) {
    fail("budget.value", "must be a nonnegative number or fraction string");
  }
  if (spec.budget_value.is_negative()) fail("budget.value", "must be nonnegative");

  if (doc.contains("policy")) {
    if (!doc["policy"].is_string()) fail("policy", "must be a string");
    spec.policy = doc["policy"].get<std::string>();
    const auto& names = erl::builtin_policy_names();
    if (std::find(names.begin(), names.end(), spec.policy) == names.end()) fail("policy", "names an unknown policy");
  }
  if (!doc.contains("replications") || !doc["replications"].is_number_unsigned()) {
    fail("replications", "must be a nonnegative integer");
  }
  spec.replications = doc["replications"].get<std::size_t>();
  if (doc.contains("master_seed")) {
    if (!doc["master_seed"].is_number_unsigned()) fail("master_seed", "must be a nonnegative integer");
    spec.master_seed = doc["master_seed"].get<std::uint64_t>();
  }
  if (doc.contains("horizon") && !doc["horizon"].is_null()) {
    if (!doc["horizon"].is_number() || !(doc["horizon"].get<double>() > 0)) fail("horizon", "must be positive or null");
    spec.horizon = doc["horizon"].get<double>();
  }
  if (doc.contains("max_events")) {
    if (!doc["max_events"].is_number_unsigned()) fail("max_events", "must be a positive integer");
    spec.max_events = doc["max_events"].get<std::uint64_t>();
  }
  return spec;
}

struct SweepArgs {
  std::string spec_file;
  std::string out;
  std::string json_out;
};

int cmd_sweep(const SweepArgs& a, Context& ctx) {
  const erl::SweepSpec spec = parse_sweep_spec(read_file(a.spec_file), ctx);
  ctx.seed = spec.master_seed;
  const auto records = erl::extinction_sweep(spec);
  if (!a.out.empty()) {
    auto out = open_out(a.out, ctx);
    erl::write_sweep_csv(out, records);
  } else {
    erl::write_sweep_csv(std::cout, records);
  }
  if (!a.json_out.empty()) {
    erl::Json arr = erl::Json::array();
    for (const auto& r : records) arr.push_back(erl::to_json(r));
    auto out = open_out(a.json_out, ctx);
    out << arr.dump(2) << '\n';
  }
  for (const auto& r : records) {
    if (r.error) std::cerr << "point n=" << r.n << ": " << *r.error << '\n';
    if (r.lower_bound) std::cerr << "point n=" << r.n << ": more than half censored, mean is a lower bound\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  ctx.argv.assign(argv, argv + argc);
  ctx.threads = erl::default_threads();

  CLI::App app{"Resistance, CutWidth and extinction-time tools for the controlled SIS model"};
  app.set_version_flag("--version", kVersion);
  app.add_option("--threads", ctx.threads, "Worker threads (default: ERL_THREADS or 1)")->check(CLI::PositiveNumber);
  app.add_option("--manifest", ctx.manifest, "Manifest path (default: first output + .manifest.json)");
  app.require_subcommand(1);

  ResistanceArgs ra;
  auto* res = app.add_subcommand("resistance", "Full resistance table, optional optimal crusade");
  add_graph_flags(res, ra.graph);
  res->add_option("--seed", ctx.seed, "Seed for random generators");
  res->add_option("--out", ra.out, "Output path(s): .csv for CSV, anything else for the RGT1 dump");
  res->add_option("--witness", ra.witness, "Bag for an optimal crusade: all, 0x<hex>, or node list");
  res->add_option("--witness-out", ra.witness_out, "Write the crusade JSON here instead of stdout");
  res->add_option("--source", ra.source, "Single-source mode: gamma of one bag by brute force (n <= 10), no table");

  GraphArgs cw;
  auto* cut = app.add_subcommand("cutwidth", "CutWidth, checked against the monotone recursion");
  add_graph_flags(cut, cw);
  cut->add_option("--seed", ctx.seed, "Seed for random generators");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Event-driven simulation under a curing policy");
  add_graph_flags(sim, sa.graph);
  sim->add_option("--seed", ctx.seed, "Master seed");
  sim->add_option("--initial", sa.initial, "Initial infected bag: all, 0x<hex>, or node list");
  sim->add_option("--budget", sa.budget, "Curing budget r (integer, decimal or a/b)");
  sim->add_option("--beta", sa.beta, "Infection rate");
  sim->add_option("--policy", sa.policy, "Policy")->check(CLI::IsMember(erl::builtin_policy_names()));
  sim->add_option("--replications", sa.replications, "Independent runs");
  sim->add_option("--horizon", sa.horizon, "Time horizon (default unbounded)")->check(CLI::PositiveNumber);
  sim->add_option("--max-events", sa.max_events, "Event cap per run");
  sim->add_option("--out", sa.out, "Result JSON path");
  sim->add_option("--events", sa.events, "Event log path (.evl for binary, CSV otherwise)");
  sim->add_flag("--audit", sa.audit, "Recheck the infection hazard after every event");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Check the lemma suite and trajectory audits");
  add_graph_flags(ver, va.graph);
  ver->add_option("--seed", ctx.seed, "Seed for sampling and trajectories");
  ver->add_option("--mode", va.mode, "exhaustive or sampled")->check(CLI::IsMember({"exhaustive", "sampled"}));
  ver->add_option("--samples", va.samples, "Sampled pairs (or all samples in sampled mode)");
  ver->add_option("--trajectories", va.trajectories, "Simulated extinct trajectories to audit");
  ver->add_option("--budget", va.budget, "Budget for trajectories (default |E| + 1)");
  ver->add_option("--max-events", va.max_events, "Event cap per trajectory");
  ver->add_flag("--inject-fault", va.inject_fault, "Corrupt one table entry first");
  ver->add_option("--out", va.out, "Report JSON path");

  SweepArgs sw;
  auto* swp = app.add_subcommand("sweep", "Extinction-time sweep from a JSON spec");
  swp->add_option("spec", sw.spec_file, "Sweep spec JSON")->required();
  swp->add_option("--out", sw.out, "CSV path (default stdout)");
  swp->add_option("--json", sw.json_out, "Records as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    int code = kOk;
    if (*res) {
      ctx.subcommand = "resistance";
      code = cmd_resistance(ra, ctx);
    } else if (*cut) {
      ctx.subcommand = "cutwidth";
      code = cmd_cutwidth(cw, ctx);
    } else if (*sim) {
      ctx.subcommand = "simulate";
      code = cmd_simulate(sa, ctx);
    } else if (*ver) {
      ctx.subcommand = "verify";
      code = cmd_verify(va, ctx);
    } else if (*swp) {
      ctx.subcommand = "sweep";
      code = cmd_sweep(sw, ctx);
    }
    write_manifest(ctx);
    return code;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const erl::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const erl::CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const erl::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const erl::InvalidInputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const erl::InvalidBagError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const erl::GraphError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const erl::GenerationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const erl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kViolations;
  }
}
