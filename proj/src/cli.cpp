#include "lmix/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lmix/error.hpp"
#include "lmix/gossip.hpp"
#include "lmix/graph.hpp"
#include "lmix/local_mixing.hpp"
#include "lmix/walk_oracle.hpp"

namespace lmix {

namespace {

using Json = nlohmann::ordered_json;

struct GraphSpec {
  std::string path;
  std::string kind;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t cliques = 0;
  std::size_t size = 0;
};

struct Common {
  GraphSpec graph;
  std::uint64_t seed = 0;
  std::string json_path;
  bool timing = false;
};

struct SourceChoice {
  NodeId source = 0;
  bool all_sources = false;
  std::size_t sample_sources = 0;
};

const std::vector<std::string> kGenKinds{"complete", "cycle", "path", "random-regular", "barbell"};
const std::vector<std::string> kModes{"oracle-def", "oracle-grid", "approx", "exact"};

void add_generator_options(CLI::App* cmd, GraphSpec& spec) {
  cmd->add_option("-n", spec.n, "node count (complete, cycle, path, random-regular)");
  cmd->add_option("-d", spec.d, "degree (random-regular)");
  cmd->add_option("--cliques", spec.cliques, "clique count (barbell)");
  cmd->add_option("--size", spec.size, "clique size (barbell)");
}

void add_graph_options(CLI::App* cmd, Common& common) {
  auto* path = cmd->add_option("--graph", common.graph.path, "edge-list file");
  auto* gen = cmd->add_option("--gen", common.graph.kind, "generate the graph instead")
                  ->check(CLI::IsMember(kGenKinds));
  path->excludes(gen);
  add_generator_options(cmd, common.graph);
  cmd->add_option("--seed", common.seed, "seed for generators and randomized runs");
  cmd->add_option("--json", common.json_path, "write the JSON report here instead of stdout");
  cmd->add_flag("--timing", common.timing, "include wall-clock time in the report");
}

void add_source_options(CLI::App* cmd, SourceChoice& choice) {
  auto* all = cmd->add_flag("--all-sources", choice.all_sources, "run from every node, report the max");
  auto* sample = cmd->add_option("--sample-sources", choice.sample_sources,
                                 "run from K seeded random sources, report the max");
  all->excludes(sample);
  cmd->add_option("--source", choice.source, "walk source node");
}

std::size_t require(std::size_t value, const char* flag, const std::string& kind) {
  if (value == 0) {
    throw Error(ErrorCode::InvalidInput, kind + " needs " + flag);
  }
  return value;
}

Graph generate(const GraphSpec& spec, std::uint64_t seed) {
  if (spec.kind == "complete") return gen::complete(require(spec.n, "-n", spec.kind));
  if (spec.kind == "cycle") return gen::cycle(require(spec.n, "-n", spec.kind));
  if (spec.kind == "path") return gen::path(require(spec.n, "-n", spec.kind));
  if (spec.kind == "random-regular") {
    return gen::random_regular(require(spec.n, "-n", spec.kind), require(spec.d, "-d", spec.kind),
                               seed);
  }
  if (spec.kind == "barbell") {
    return gen::barbell(require(spec.cliques, "--cliques", spec.kind),
                        require(spec.size, "--size", spec.kind));
  }
  throw Error(ErrorCode::InvalidInput, "unknown generator '" + spec.kind + "'");
}

Graph load_graph(const Common& common) {
  if (!common.graph.path.empty()) return read_edge_list_file(common.graph.path);
  if (!common.graph.kind.empty()) return generate(common.graph, common.seed);
  throw Error(ErrorCode::InvalidInput, "give --graph PATH or --gen KIND");
}

Json graph_summary(const Graph& g) {
  Json j;
  j["n"] = g.node_count();
  j["m"] = g.edge_count();
  if (auto d = g.regular_degree()) {
    j["regular_degree"] = *d;
  } else {
    j["regular_degree"] = "irregular";
  }
  if (g.is_connected()) {
    j["diameter"] = g.diameter();
  } else {
    j["diameter"] = nullptr;
  }
  return j;
}

// Exact value on the 1/n^exponent grid plus a float for convenience.
Json grid_fraction(Wide numerator, std::size_t n, unsigned exponent, double value) {
  Json j;
  j["numerator"] = to_string(numerator);
  j["n"] = n;
  j["exponent"] = exponent;
  j["value"] = value;
  return j;
}

Json ledger_json(const RoundLedger& ledger) {
  Json j;
  j["rounds"] = ledger.rounds();
  j["messages"] = ledger.messages();
  j["max_message_bits"] = ledger.max_message_bits();
  Json phases = Json::object();
  for (Phase p : {Phase::bfs, Phase::flooding, Phase::selection}) {
    phases[std::string(to_string(p))] = {{"rounds", ledger.rounds(p)},
                                         {"messages", ledger.messages(p)}};
  }
  j["phases"] = phases;
  return j;
}

std::vector<NodeId> pick_sources(const Graph& g, const SourceChoice& choice, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  if (choice.all_sources || choice.sample_sources >= n) {
    std::vector<NodeId> all(n);
    std::iota(all.begin(), all.end(), NodeId{0});
    return all;
  }
  if (choice.sample_sources > 0) {
    std::vector<NodeId> all(n);
    std::iota(all.begin(), all.end(), NodeId{0});
    std::vector<NodeId> picked;
    std::sample(all.begin(), all.end(), std::back_inserter(picked), choice.sample_sources,
                std::mt19937_64(seed));
    return picked;
  }
  if (choice.source >= n) throw Error(ErrorCode::OutOfRange, "source out of range");
  return {choice.source};
}

std::string command_echo(const std::vector<std::string>& args) {
  std::string echo;
  for (const auto& a : args) {
    if (!echo.empty()) echo += ' ';
    echo += a;
  }
  return echo;
}

void emit(const Common& common, Json report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (common.json_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(common.json_path, std::ios::binary);
  if (!file) throw Error(ErrorCode::InvalidInput, "cannot write " + common.json_path);
  file << text;
}

using Clock = std::chrono::steady_clock;

void stamp(Json& report, const Common& common, Clock::time_point start) {
  if (!common.timing) return;
  const auto ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  report["wall_clock_ms"] = ms;
}

// Runs `one` for every chosen source; the per-source payloads are kept in
// source order and the summary is the max over `key`.
template <typename Fn>
Json per_source(const std::vector<NodeId>& sources, const char* key, Fn one) {
  if (sources.size() == 1) return one(sources.front());
  Json runs = Json::array();
  std::size_t worst = 0;
  NodeId worst_source = sources.front();
  for (NodeId s : sources) {
    Json r = one(s);
    const std::size_t value = r[key].get<std::size_t>();
    if (runs.empty() || value > worst) {
      worst = value;
      worst_source = s;
    }
    runs.push_back(std::move(r));
  }
  Json j;
  j[key] = worst;
  j["argmax_source"] = worst_source;
  j["runs"] = std::move(runs);
  return j;
}

struct MixArgs {
  Common common;
  SourceChoice sources;
  double eps = kDefaultEps;
  bool lazy = false;
};

void run_mix(const MixArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const auto start = Clock::now();
  const Graph g = load_graph(a.common);
  const auto sources = pick_sources(g, a.sources, a.common.seed);
  Json report;
  report["schema"] = 1;
  report["command"] = command_echo(args);
  report["graph"] = graph_summary(g);
  report["params"] = {{"eps", a.eps}, {"lazy", a.lazy}, {"seed", a.common.seed}};
  report["result"] = per_source(sources, "tau", [&](NodeId s) {
    Json r;
    r["source"] = s;
    r["tau"] = mixing_time(g, s, a.eps, a.lazy);
    return r;
  });
  stamp(report, a.common, start);
  emit(a.common, std::move(report), out);
}

struct LocalArgs {
  Common common;
  SourceChoice sources;
  std::string mode = "approx";
  double beta = 1.0;
  double eps = kDefaultEps;
  std::optional<double> eps_grid;
  unsigned c = kDefaultGridExponent;
  bool lazy = false;
  bool contain_source = false;
  bool perturb = false;
  bool allow_irregular = false;
  bool strict_first = false;
  bool rebuild_bfs = false;
  std::string schedule = "unit";
};

Json oracle_payload(const Graph& g, NodeId s, const LocalArgs& a, OracleMode mode) {
  OracleOptions opts;
  opts.mode = mode;
  opts.contain_source = a.contain_source;
  opts.eps_grid = a.eps_grid;
  opts.strict_first = a.strict_first;
  opts.schedule = a.schedule == "doubling" ? LengthSchedule::doubling : LengthSchedule::unit;
  const auto res = local_mixing_oracle(g, s, {a.beta, a.eps, a.lazy}, opts);
  Json r;
  r["source"] = s;
  r["tau"] = res.tau;
  r["set_size"] = res.set_size;
  r["gap"] = res.gap;
  r["condition"] = validate_condition(g, res);
  r["witness"] = res.witness;
  return r;
}

Json distributed_payload(const Graph& g, NodeId s, const LocalArgs& a, bool exact) {
  LocalMixingOptions opts;
  opts.beta = a.beta;
  opts.eps = a.eps;
  opts.c = a.c;
  opts.eps_grid = a.eps_grid;
  opts.lazy = a.lazy;
  opts.allow_irregular = a.allow_irregular;
  opts.strict_first = a.strict_first;
  opts.perturb = a.perturb;
  opts.perturb_seed = a.common.seed;
  opts.bfs = a.rebuild_bfs ? BfsStrategy::rebuild : BfsStrategy::incremental;
  const auto res = exact ? exact_local_mixing(g, s, opts) : approx_local_mixing(g, s, opts);
  const unsigned exponent = a.perturb ? a.c + 2 : a.c;
  const std::size_t n = g.node_count();
  Json r;
  r["source"] = s;
  r["ell"] = res.ell;
  r["tau"] = res.ell;
  r["set_size"] = res.set_size;
  r["gap"] = grid_fraction(res.gap_raw, n, exponent, res.gap);
  r["grid"] = res.schedule.sizes;
  r["iterations"] = res.iterations;
  r["tree_depth"] = res.tree_depth;
  r["ledger"] = ledger_json(res.ledger);
  const std::size_t grid = res.schedule.sizes.size();
  r["round_bound"] = exact ? exact_round_bound(n, res.ell, g.diameter(), grid)
                           : approx_round_bound(n, res.ell, grid);
  return r;
}

void run_local_mix(const LocalArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const auto start = Clock::now();
  const Graph g = load_graph(a.common);
  const auto sources = pick_sources(g, a.sources, a.common.seed);
  Json report;
  report["schema"] = 1;
  report["command"] = command_echo(args);
  report["graph"] = graph_summary(g);
  Json params{{"mode", a.mode}, {"beta", a.beta}, {"eps", a.eps}, {"c", a.c},
              {"lazy", a.lazy}, {"seed", a.common.seed}};
  if (a.eps_grid) params["eps_grid"] = *a.eps_grid;
  params["contain_source"] = a.contain_source;
  params["perturb"] = a.perturb;
  params["strict_first"] = a.strict_first;
  report["params"] = std::move(params);
  report["result"] = per_source(sources, "tau", [&](NodeId s) {
    if (a.mode == "oracle-def") return oracle_payload(g, s, a, OracleMode::definition);
    if (a.mode == "oracle-grid") return oracle_payload(g, s, a, OracleMode::algorithm_grid);
    return distributed_payload(g, s, a, a.mode == "exact");
  });
  stamp(report, a.common, start);
  emit(a.common, std::move(report), out);
}

struct GossipArgs {
  Common common;
  double beta = 1.0;
  std::size_t seeds = 1;
  std::optional<std::size_t> budget;
  std::size_t cap = 100000;
  std::string model = "local";
  std::string csv_path;
};

std::optional<std::size_t> median(std::vector<std::size_t> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

void run_gossip(const GossipArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const auto start = Clock::now();
  const Graph g = load_graph(a.common);
  if (!g.is_connected()) throw Error(ErrorCode::Disconnected, "graph is not connected");
  const GossipModel model = a.model == "congest" ? GossipModel::congest : GossipModel::local;
  Json report;
  report["schema"] = 1;
  report["command"] = command_echo(args);
  report["graph"] = graph_summary(g);
  Json params{{"beta", a.beta}, {"seed", a.common.seed}, {"seeds", a.seeds},
              {"round_cap", a.cap}, {"model", a.model}};
  if (a.budget) params["budget"] = *a.budget;
  report["params"] = std::move(params);

  Json runs = Json::array();
  std::vector<std::size_t> partial, full;
  std::size_t capped = 0;
  for (std::size_t i = 0; i < a.seeds; ++i) {
    const auto rep = run_spreading(g, a.beta, a.common.seed + i, a.cap, model);
    Json r;
    r["seed"] = rep.seed;
    r["rounds_to_partial"] = rep.rounds_to_partial ? Json(*rep.rounds_to_partial) : Json(nullptr);
    r["rounds_to_full"] = rep.rounds_to_full ? Json(*rep.rounds_to_full) : Json(nullptr);
    r["cap_exceeded"] = rep.cap_exceeded;
    runs.push_back(std::move(r));
    if (rep.rounds_to_partial) partial.push_back(*rep.rounds_to_partial);
    if (rep.rounds_to_full) full.push_back(*rep.rounds_to_full);
    if (rep.cap_exceeded) ++capped;
    if (i == 0 && !a.csv_path.empty()) {
      std::ofstream csv(a.csv_path, std::ios::binary);
      if (!csv) throw Error(ErrorCode::InvalidInput, "cannot write " + a.csv_path);
      write_coverage_csv(csv, rep.histogram);
    }
  }
  Json result;
  result["partial_threshold"] = partial_threshold(g.node_count(), a.beta);
  if (a.budget) {
    result["success_fraction"] =
        success_fraction(g, a.beta, *a.budget, a.seeds, a.common.seed, model);
  }
  const auto mp = median(partial);
  const auto mf = median(full);
  result["median_rounds_to_partial"] = mp ? Json(*mp) : Json(nullptr);
  result["median_rounds_to_full"] = mf ? Json(*mf) : Json(nullptr);
  result["cap_exceeded_runs"] = capped;
  result["runs"] = std::move(runs);
  report["result"] = std::move(result);
  stamp(report, a.common, start);
  emit(a.common, std::move(report), out);
}

struct GenArgs {
  GraphSpec spec;
  std::uint64_t seed = 0;
  std::string out_path;
};

void run_gen(const GenArgs& a, std::ostream& out) {
  const Graph g = generate(a.spec, a.seed);
  if (a.out_path.empty()) {
    write_edge_list(out, g);
    return;
  }
  std::ofstream file(a.out_path, std::ios::binary);
  if (!file) throw Error(ErrorCode::InvalidInput, "cannot write " + a.out_path);
  write_edge_list(file, g);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixing and local mixing times of graphs, with CONGEST and gossip simulation",
               "lmix"};
  app.require_subcommand(1);

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "write a generated graph as an edge list");
  gen_cmd->add_option("kind", gen_args.spec.kind, "graph family")
      ->required()
      ->check(CLI::IsMember(kGenKinds));
  add_generator_options(gen_cmd, gen_args.spec);
  gen_cmd->add_option("--seed", gen_args.seed, "generator seed");
  gen_cmd->add_option("-o,--out", gen_args.out_path, "output file (default stdout)");

  MixArgs mix_args;
  auto* mix_cmd = app.add_subcommand("mix", "mixing time from the centralized oracle");
  add_graph_options(mix_cmd, mix_args.common);
  add_source_options(mix_cmd, mix_args.sources);
  mix_cmd->add_option("--eps", mix_args.eps, "distance threshold");
  mix_cmd->add_flag("--lazy", mix_args.lazy, "lazy walk");

  LocalArgs local_args;
  auto* local_cmd = app.add_subcommand("local-mix", "local mixing time");
  add_graph_options(local_cmd, local_args.common);
  add_source_options(local_cmd, local_args.sources);
  local_cmd->add_option("--mode", local_args.mode, "oracle-def, oracle-grid, approx or exact")
      ->check(CLI::IsMember(kModes));
  local_cmd->add_option("--beta", local_args.beta, "set-size parameter, sets have >= n/beta nodes");
  local_cmd->add_option("--eps", local_args.eps, "distance threshold");
  local_cmd->add_option("--eps-grid", local_args.eps_grid, "set-size grid ratio (default eps)");
  local_cmd->add_option("--c", local_args.c, "fixed-point exponent, values are multiples of n^-c");
  local_cmd->add_flag("--lazy", local_args.lazy, "lazy walk");
  local_cmd->add_flag("--contain-source", local_args.contain_source,
                      "oracle sets must contain the source");
  local_cmd->add_flag("--perturb", local_args.perturb, "break key ties with random offsets");
  local_cmd->add_flag("--allow-irregular", local_args.allow_irregular,
                      "run the distributed modes on non-regular graphs");
  local_cmd->add_flag("--strict-first", local_args.strict_first,
                      "require gap < eps at the smallest set size");
  local_cmd->add_flag("--rebuild-bfs", local_args.rebuild_bfs,
                      "exact mode: rebuild the BFS tree every iteration");
  local_cmd->add_option("--schedule", local_args.schedule, "oracle-grid walk lengths")
      ->check(CLI::IsMember({"unit", "doubling"}));

  GossipArgs gossip_args;
  auto* gossip_cmd = app.add_subcommand("gossip", "push-pull spreading experiments");
  add_graph_options(gossip_cmd, gossip_args.common);
  gossip_cmd->add_option("--beta", gossip_args.beta, "partial spreading parameter");
  gossip_cmd->add_option("--seeds", gossip_args.seeds, "number of seeds, starting at --seed")
      ->check(CLI::PositiveNumber);
  gossip_cmd->add_option("--budget", gossip_args.budget, "round budget for the success fraction");
  gossip_cmd->add_option("--round-cap", gossip_args.cap, "stop each run after this many rounds");
  gossip_cmd->add_option("--model", gossip_args.model, "local or congest")
      ->check(CLI::IsMember({"local", "congest"}));
  gossip_cmd->add_option("--csv", gossip_args.csv_path, "coverage histogram of the first seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (*gen_cmd) run_gen(gen_args, out);
    if (*mix_cmd) run_mix(mix_args, args, out);
    if (*local_cmd) run_local_mix(local_args, args, out);
    if (*gossip_cmd) run_gossip(gossip_args, args, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ExceededCap ? kExitCap : kExitInvalid;
  }
  return kExitOk;
}

}  // namespace lmix
