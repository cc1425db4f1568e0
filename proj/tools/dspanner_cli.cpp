// dspanner: command-line front end for the directed k-spanner library.
//
//   dspanner gen     --spec er:n=20,p=0.2,seed=1 [--out g.txt]
//   dspanner lp      --graph g.txt -k 3 [--out lp.json] [--export-lp model.lp]
//   dspanner round   --graph g.txt --lp lp.json -k 3 --trials 10
//   dspanner solve   (--graph g.txt | --spec ...) -k 3 --trials 10 [--oracle]
//   dspanner verify  --graph g.txt --subgraph h.txt -k 3
//   dspanner oracle  --graph g.txt -k 3
//   dspanner claims  --instances 100 --triples 500 --max-n 7
//
// Reports go to stdout (or --out) as JSON; a one-line summary goes to stderr.
// Exit codes: 0 ok, 2 parse/config error, 3 cap exceeded, 4 infeasible under
// --require-feasible, 5 internal numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dspanner/error.hpp"
#include "dspanner/generate.hpp"
#include "dspanner/io.hpp"
#include "dspanner/lp.hpp"
#include "dspanner/pipeline.hpp"

namespace {

using namespace dspanner;

struct Options {
  std::string graph;
  std::string spec;
  std::string out;
  std::string lp_dump;
  std::string subgraph;
  std::string export_lp;
  std::string mode = "auto";
  int k = 3;
  double alpha = 0.0;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  std::size_t jobs = 1;
  bool oracle = false;
  bool require_feasible = false;
  std::optional<std::size_t> max_paths;
  std::optional<std::size_t> max_hops;
  std::optional<std::size_t> max_arborescences;
  std::optional<std::size_t> max_free_edges;
  std::size_t instances = 100;
  std::size_t triples = 500;
  std::size_t max_n = 7;
  std::size_t max_covered = 7;
};

void add_caps(CLI::App* cmd, Options& o) {
  cmd->add_option("--max-paths", o.max_paths, "Path cap per demand (env DSPANNER_MAX_PATHS)");
  cmd->add_option("--max-hops", o.max_hops, "Hop cap per path (env DSPANNER_MAX_HOPS)");
  cmd->add_option("--max-arborescences", o.max_arborescences,
                  "Arborescence enumeration cap (env DSPANNER_MAX_ARBORESCENCES)");
  cmd->add_option("--max-free-edges", o.max_free_edges,
                  "Free-edge cap for the exact oracle (env DSPANNER_MAX_FREE_EDGES)");
}

void add_input(CLI::App* cmd, Options& o, bool allow_spec) {
  auto* g = cmd->add_option("--graph,-g", o.graph, "Edge-list graph file");
  if (allow_spec) {
    auto* s = cmd->add_option("--spec", o.spec, "Generator spec, e.g. er:n=30,p=0.15,seed=1");
    g->excludes(s);
    cmd->require_option(1, 0);
  } else {
    g->required();
  }
}

void add_run(CLI::App* cmd, Options& o) {
  cmd->add_option("-k", o.k, "Stretch factor")->check(CLI::PositiveNumber);
  cmd->add_option("--mode", o.mode, "Alpha regime: unit, general or auto")
      ->check(CLI::IsMember({"unit", "general", "auto"}));
  cmd->add_option("--alpha", o.alpha, "Override alpha (> 0)")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--trials", o.trials, "Independent rounding trials")->check(CLI::PositiveNumber);
  cmd->add_option("--jobs,-j", o.jobs, "Concurrent trials")->check(CLI::PositiveNumber);
  cmd->add_flag("--require-feasible", o.require_feasible, "Exit 4 if any trial is infeasible");
}

Caps resolve_caps(const Options& o) {
  Caps caps = apply_env_caps(Caps{});
  if (o.max_paths) caps.paths.max_paths = *o.max_paths;
  if (o.max_hops) caps.paths.max_hops = *o.max_hops;
  if (o.max_arborescences) caps.arborescences.max_arborescences = *o.max_arborescences;
  if (o.max_free_edges) caps.oracle.max_free_edges = *o.max_free_edges;
  return caps;
}

RunConfig make_config(const Options& o) {
  RunConfig c;
  c.k = o.k;
  c.mode = parse_mode(o.mode);
  if (o.alpha > 0.0) c.alpha_override = o.alpha;
  c.seed = o.seed;
  c.trials = o.trials;
  c.jobs = o.jobs;
  c.caps = resolve_caps(o);
  c.run_oracle = o.oracle;
  c.require_feasible = o.require_feasible;
  c.source = o.graph.empty() ? o.spec : o.graph;
  return c;
}

DiGraph load_input(const Options& o) {
  if (!o.spec.empty()) return generate_instance(parse_instance_spec(o.spec));
  return read_graph_file(o.graph);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::kInvalidArgument, "cannot write " + o.out);
  f << text;
}

int summarize(const RunReport& r, const RunConfig& c) {
  std::cerr << "n=" << r.n << " m=" << r.m << " k=" << r.k << " lp=" << r.lp_value;
  if (r.opt) std::cerr << " opt=" << *r.opt;
  std::cerr << " trials=" << r.trials.size() << " feasible=" << r.aggregate.feasible_fraction
            << " mean|E_H|=" << r.aggregate.mean_e_h << "\n";
  return run_exit_status(r, c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed k-spanner approximation: LP relaxation, randomized rounding, verification"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Generate an instance in edge-list format");
  gen->add_option("--spec", o.spec, "Generator spec, e.g. er:n=20,p=0.2,maxlen=4,seed=7")->required();
  gen->add_option("--out,-o", o.out, "Output file (default stdout)");

  auto* lp = app.add_subcommand("lp", "Build and solve the path LP");
  add_input(lp, o, true);
  lp->add_option("-k", o.k, "Stretch factor")->check(CLI::PositiveNumber);
  lp->add_option("--out,-o", o.out, "Report file (default stdout)");
  lp->add_option("--export-lp", o.export_lp, "Also write the model in CPLEX LP format");
  add_caps(lp, o);

  auto* round = app.add_subcommand("round", "Rounding trials from an LP dump");
  add_input(round, o, false);
  round->add_option("--lp", o.lp_dump, "JSON written by 'dspanner lp'")->required();
  add_run(round, o);
  round->add_option("--out,-o", o.out, "Report file (default stdout)");

  auto* solve = app.add_subcommand("solve", "LP, rounding trials and verification");
  add_input(solve, o, true);
  add_run(solve, o);
  solve->add_flag("--oracle", o.oracle, "Also compute the exact optimum");
  solve->add_option("--out,-o", o.out, "Report file (default stdout)");
  add_caps(solve, o);

  auto* verify = app.add_subcommand("verify", "Check whether a subgraph is a k-spanner");
  add_input(verify, o, false);
  verify->add_option("--subgraph,-s", o.subgraph, "Edge-list file with the candidate edges")->required();
  verify->add_option("-k", o.k, "Stretch factor")->check(CLI::PositiveNumber);
  verify->add_option("--out,-o", o.out, "Report file (default stdout)");

  auto* oracle = app.add_subcommand("oracle", "Exact minimum k-spanner by branch-and-bound");
  add_input(oracle, o, true);
  oracle->add_option("-k", o.k, "Stretch factor")->check(CLI::PositiveNumber);
  oracle->add_option("--out,-o", o.out, "Report file (default stdout)");
  add_caps(oracle, o);

  auto* claims = app.add_subcommand("claims", "Randomized checks of the arborescence-cut claims");
  claims->add_option("--graph,-g", o.graph, "Check every demand of this graph instead of a random batch");
  claims->add_option("--instances", o.instances, "Solved random instances for the cut-mass check");
  claims->add_option("--triples", o.triples, "Random (G', H', K) triples for the path/cut check");
  claims->add_option("--max-n", o.max_n, "Largest random instance")->check(CLI::Range(2, 12));
  claims->add_option("--max-covered", o.max_covered, "Skip demands covering more vertices");
  claims->add_option("-k", o.k, "Stretch factor")->check(CLI::PositiveNumber);
  claims->add_option("--seed", o.seed, "Master seed");
  claims->add_option("--out,-o", o.out, "Report file (default stdout)");
  add_caps(claims, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      emit(o, serialize_graph(generate_instance(parse_instance_spec(o.spec))));
      return 0;
    }
    if (lp->parsed()) {
      const DiGraph g = load_input(o);
      const LpReport report = run_lp(g, make_config(o));
      if (!o.export_lp.empty()) {
        std::ofstream f(o.export_lp);
        if (!f) throw Error(ErrorCode::kInvalidArgument, "cannot write " + o.export_lp);
        write_cplex_lp(report.model, f);
      }
      emit(o, to_json(report));
      std::cerr << "n=" << report.n << " m=" << report.m << " k=" << report.k
                << " lp=" << report.solution.objective_value << " path_vars=" << report.model.num_path_vars()
                << "\n";
      return 0;
    }
    if (round->parsed()) {
      const DiGraph g = read_graph_file(o.graph);
      const LpSolution sol = parse_lp_dump(read_text_file(o.lp_dump), g);
      const RunConfig config = make_config(o);
      const RunReport report = run_round(g, sol, config);
      emit(o, to_json(report));
      return summarize(report, config);
    }
    if (solve->parsed()) {
      const DiGraph g = load_input(o);
      const RunConfig config = make_config(o);
      const RunReport report = run_solve(g, config);
      emit(o, to_json(report));
      return summarize(report, config);
    }
    if (verify->parsed()) {
      const DiGraph g = read_graph_file(o.graph);
      const DiGraph h = read_graph_file(o.subgraph);
      const VerifyReport report = run_verify(g, h, o.k);
      emit(o, to_json(report));
      std::cerr << (report.check.ok ? "k-spanner" : "not a k-spanner") << " (" << report.h_edges << " of "
                << report.m << " edges)\n";
      return 0;
    }
    if (oracle->parsed()) {
      const DiGraph g = load_input(o);
      const OracleReport report = run_oracle(g, make_config(o));
      emit(o, to_json(report));
      std::cerr << "opt=" << report.result.opt << " lp=" << report.lp_value << "\n";
      return 0;
    }
    if (claims->parsed()) {
      ClaimsConfig cc;
      cc.lp_instances = o.instances;
      cc.claim1_triples = o.triples;
      cc.max_n = o.max_n;
      cc.max_covered = o.max_covered;
      cc.k = o.k;
      cc.seed = o.seed;
      cc.caps = resolve_caps(o);
      const ClaimsReport report =
          o.graph.empty() ? run_claims(cc) : run_claims_on_graph(read_graph_file(o.graph), cc);
      emit(o, to_json(report));
      std::cerr << "violations=" << report.violations() << " arborescences=" << report.arborescences << "\n";
      return report.violations() == 0 ? 0 : 5;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
  return 0;
}
