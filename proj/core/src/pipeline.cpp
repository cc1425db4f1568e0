#include "dspanner/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "dspanner/error.hpp"
#include "json.hpp"

namespace dspanner {

using Json = nlohmann::ordered_json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::optional<std::size_t> env_size(const char* name) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || v == 0) {
    throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

std::string_view mode_name(RoundingMode mode) {
  return mode == RoundingMode::kUnit ? "unit" : "general";
}

Json violation_json(const std::optional<SpannerViolation>& v) {
  if (!v) return nullptr;
  Json j;
  j["demand"] = v->demand;
  j["dist_h"] = v->dist_h == kUnreachable ? Json(nullptr) : Json(v->dist_h);
  j["dist_g"] = v->dist_g;
  return j;
}

Json trial_json(const TrialRecord& t) {
  Json j;
  j["trial"] = t.trial;
  j["seed"] = t.seed;
  j["alpha"] = t.alpha;
  j["rounded_edges"] = t.rounded_edges;
  j["tree_roots"] = t.tree_roots;
  j["tree_edges"] = t.tree_edges;
  j["e_h"] = t.e_h;
  j["feasible"] = t.feasible;
  j["violation"] = violation_json(t.violation);
  return j;
}

Json length_or_null(Length v) { return v == kUnreachable ? Json(nullptr) : Json(v); }

RoundingParams rounding_params(const DiGraph& g, const RunConfig& config, std::uint64_t seed) {
  RoundingParams params;
  params.mode = resolve_mode(config.mode, g);
  params.k = config.k;
  params.seed = seed;
  params.alpha = config.alpha_override;
  return params;
}

void validate_config(const RunConfig& config) {
  if (config.k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (config.trials < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  if (config.alpha_override && !(*config.alpha_override > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must be > 0");
  }
}

LpSolveOptions lp_options(const Caps& caps) {
  LpSolveOptions opt;
  opt.max_iterations = caps.max_simplex_iterations;
  return opt;
}

// Fills the expectation fields and trials of a report from a solved LP.
void fill_rounding(RunReport& report, const DiGraph& g, const LpSolution& lp, const RunConfig& config) {
  report.mode = resolve_mode(config.mode, g);
  if (g.num_edges() > 0) {
    const auto p = edge_inclusion_probabilities(g, lp.x, rounding_params(g, config, config.seed));
    for (double q : p) {
      report.expected_rounded_edges += q;
      report.rounded_edges_variance += q * (1.0 - q);
    }
  }
  const auto start = std::chrono::steady_clock::now();
  report.trials = run_trials(g, lp, config);
  report.trials_seconds = seconds_since(start);
  report.aggregate = aggregate_trials(report.trials, report.lp_value, report.opt);
}

}  // namespace

Caps apply_env_caps(Caps caps) {
  if (auto v = env_size("DSPANNER_MAX_PATHS")) caps.paths.max_paths = *v;
  if (auto v = env_size("DSPANNER_MAX_HOPS")) caps.paths.max_hops = *v;
  if (auto v = env_size("DSPANNER_MAX_ARBORESCENCES")) caps.arborescences.max_arborescences = *v;
  if (auto v = env_size("DSPANNER_MAX_FREE_EDGES")) caps.oracle.max_free_edges = *v;
  return caps;
}

ModeSetting parse_mode(std::string_view text) {
  if (text == "unit") return ModeSetting::kUnit;
  if (text == "general") return ModeSetting::kGeneral;
  if (text == "auto") return ModeSetting::kAuto;
  throw Error(ErrorCode::kInvalidArgument, "mode must be unit, general or auto");
}

RoundingMode resolve_mode(ModeSetting setting, const DiGraph& g) {
  switch (setting) {
    case ModeSetting::kUnit:
      if (!g.all_unit_lengths()) {
        throw Error(ErrorCode::kNotUnitLength, "mode unit requires all edge lengths = 1");
      }
      return RoundingMode::kUnit;
    case ModeSetting::kGeneral: return RoundingMode::kGeneral;
    case ModeSetting::kAuto: break;
  }
  return g.all_unit_lengths() ? RoundingMode::kUnit : RoundingMode::kGeneral;
}

std::vector<TrialRecord> run_trials(const DiGraph& g, const LpSolution& lp, const RunConfig& config) {
  validate_config(config);
  std::vector<TrialRecord> records(config.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= records.size()) return;
      try {
        const std::uint64_t seed = trial_seed(config.seed, i);
        const SpannerResult r = build_spanner(g, lp, rounding_params(g, config, seed));
        TrialRecord& t = records[i];
        t.trial = i;
        t.seed = seed;
        t.alpha = r.alpha;
        t.rounded_edges = r.rounded_edges.size();
        t.tree_roots = r.tree_roots.size();
        t.tree_edges = r.tree_edges.size();
        t.e_h = r.e_h.size();
        t.feasible = r.feasible;
        t.violation = r.violation;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = records.size();
        return;
      }
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, records.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

RunAggregate aggregate_trials(const std::vector<TrialRecord>& trials, double lp_value,
                              std::optional<std::size_t> opt) {
  RunAggregate agg;
  if (trials.empty()) return agg;
  std::size_t feasible = 0;
  double sum_e_h = 0.0;
  double sum_rounded = 0.0;
  for (const auto& t : trials) {
    if (t.feasible) ++feasible;
    sum_e_h += static_cast<double>(t.e_h);
    sum_rounded += static_cast<double>(t.rounded_edges);
    agg.max_e_h = std::max(agg.max_e_h, t.e_h);
  }
  const auto count = static_cast<double>(trials.size());
  agg.feasible_fraction = static_cast<double>(feasible) / count;
  agg.mean_e_h = sum_e_h / count;
  agg.mean_rounded_edges = sum_rounded / count;
  agg.ratio_vs_lp = lp_value > 0.0 ? agg.mean_e_h / lp_value : 0.0;
  if (opt && *opt > 0) {
    agg.ratio_vs_opt = agg.mean_e_h / static_cast<double>(*opt);
    agg.max_ratio_vs_opt = static_cast<double>(agg.max_e_h) / static_cast<double>(*opt);
  }
  return agg;
}

RunReport run_solve(const DiGraph& g, const RunConfig& config) {
  validate_config(config);
  RunReport report;
  report.source = config.source;
  report.n = g.num_vertices();
  report.m = g.num_edges();
  report.k = config.k;

  auto start = std::chrono::steady_clock::now();
  const LpModel model = build_lp(g, config.k, config.caps.paths);
  const LpSolution lp = solve_lp(model, lp_options(config.caps));
  report.lp_seconds = seconds_since(start);
  if (lp.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kNumericalFailure, "LP did not reach an optimal solution");
  }
  report.lp_value = lp.objective_value;
  report.lp_path_vars = model.num_path_vars();

  if (config.run_oracle) {
    start = std::chrono::steady_clock::now();
    report.opt = brute_force_opt(g, config.k, config.caps.oracle, lp.x).opt;
    report.oracle_seconds = seconds_since(start);
  }
  fill_rounding(report, g, lp, config);
  return report;
}

RunReport run_round(const DiGraph& g, const LpSolution& lp, const RunConfig& config) {
  validate_config(config);
  RunReport report;
  report.source = config.source;
  report.n = g.num_vertices();
  report.m = g.num_edges();
  report.k = config.k;
  report.lp_value = lp.objective_value;
  fill_rounding(report, g, lp, config);
  return report;
}

int run_exit_status(const RunReport& report, const RunConfig& config) {
  if (config.require_feasible) {
    for (const auto& t : report.trials) {
      if (!t.feasible) return 4;
    }
  }
  return 0;
}

std::string trials_to_json(const std::vector<TrialRecord>& trials) {
  Json arr = Json::array();
  for (const auto& t : trials) arr.push_back(trial_json(t));
  return arr.dump(2);
}

std::string to_json(const RunReport& r) {
  Json j;
  j["command"] = "solve";
  j["instance"] = {{"source", r.source}, {"n", r.n}, {"m", r.m}, {"k", r.k}};
  j["mode"] = mode_name(r.mode);
  j["lp_value"] = r.lp_value;
  j["lp_path_vars"] = r.lp_path_vars;
  j["opt"] = r.opt ? Json(*r.opt) : Json(nullptr);
  j["expected_rounded_edges"] = r.expected_rounded_edges;
  j["rounded_edges_variance"] = r.rounded_edges_variance;
  Json trials = Json::array();
  for (const auto& t : r.trials) trials.push_back(trial_json(t));
  j["trials"] = std::move(trials);
  const RunAggregate& a = r.aggregate;
  j["aggregate"] = {
      {"trials", r.trials.size()},
      {"feasible_fraction", a.feasible_fraction},
      {"mean_e_h", a.mean_e_h},
      {"max_e_h", a.max_e_h},
      {"mean_rounded_edges", a.mean_rounded_edges},
      {"ratio_vs_lp", a.ratio_vs_lp},
      {"ratio_vs_opt", a.ratio_vs_opt ? Json(*a.ratio_vs_opt) : Json(nullptr)},
      {"max_ratio_vs_opt", a.max_ratio_vs_opt ? Json(*a.max_ratio_vs_opt) : Json(nullptr)},
  };
  j["timing"] = {{"lp_seconds", r.lp_seconds},
                 {"oracle_seconds", r.oracle_seconds},
                 {"trials_seconds", r.trials_seconds}};
  return j.dump(2) + "\n";
}

LpReport run_lp(const DiGraph& g, const RunConfig& config) {
  validate_config(config);
  LpReport report;
  report.n = g.num_vertices();
  report.m = g.num_edges();
  report.k = config.k;
  const auto start = std::chrono::steady_clock::now();
  report.model = build_lp(g, config.k, config.caps.paths);
  report.solution = solve_lp(report.model, lp_options(config.caps));
  report.seconds = seconds_since(start);
  return report;
}

std::string to_json(const LpReport& r) {
  Json j;
  j["command"] = "lp";
  j["instance"] = {{"n", r.n}, {"m", r.m}, {"k", r.k}};
  j["status"] = r.solution.status == LpStatus::kOptimal ? "optimal" : "infeasible";
  j["lp_value"] = r.solution.objective_value;
  j["edge_vars"] = r.model.num_edge_vars();
  j["path_vars"] = r.model.num_path_vars();
  j["capacity_rows"] = r.model.capacity_rows.size();
  std::size_t mandatory = 0;
  for (const auto& d : r.model.demands) mandatory += d.mandatory ? 1 : 0;
  j["mandatory_demands"] = mandatory;
  j["simplex_iterations"] = r.solution.iterations;
  j["x"] = r.solution.x;
  Json flows = Json::array();
  for (std::size_t p = 0; p < r.solution.f.size(); ++p) {
    if (r.solution.f[p] == 0.0) continue;
    flows.push_back({{"demand", r.model.paths[p].demand},
                     {"path", r.model.paths[p].vertices},
                     {"flow", r.solution.f[p]}});
  }
  j["flows"] = std::move(flows);
  j["timing"] = {{"seconds", r.seconds}};
  return j.dump(2) + "\n";
}

LpSolution parse_lp_dump(std::string_view json_text, const DiGraph& g) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kSyntaxError, std::string("LP dump: ") + e.what());
  }
  if (!j.contains("x") || !j["x"].is_array()) {
    throw Error(ErrorCode::kSyntaxError, "LP dump: missing array 'x'");
  }
  if (j.value("status", std::string("optimal")) != "optimal") {
    throw Error(ErrorCode::kInvalidArgument, "LP dump: solution is not optimal");
  }
  LpSolution sol;
  sol.status = LpStatus::kOptimal;
  for (const auto& v : j["x"]) {
    if (!v.is_number()) throw Error(ErrorCode::kSyntaxError, "LP dump: non-numeric x entry");
    const double x = v.get<double>();
    if (x < 0.0) throw Error(ErrorCode::kInvalidArgument, "LP dump: negative x entry");
    sol.x.push_back(x);
    sol.objective_value += x;
  }
  if (sol.x.size() != g.num_edges()) {
    throw Error(ErrorCode::kInvalidArgument, "LP dump has " + std::to_string(sol.x.size()) +
                                                 " x entries but the graph has " +
                                                 std::to_string(g.num_edges()) + " edges");
  }
  return sol;
}

OracleReport run_oracle(const DiGraph& g, const RunConfig& config) {
  validate_config(config);
  OracleReport report;
  report.n = g.num_vertices();
  report.m = g.num_edges();
  report.k = config.k;
  const LpModel model = build_lp(g, config.k, config.caps.paths);
  const LpSolution lp = solve_lp(model, lp_options(config.caps));
  report.lp_value = lp.objective_value;
  const auto start = std::chrono::steady_clock::now();
  report.result = brute_force_opt(g, config.k, config.caps.oracle, lp.x);
  report.seconds = seconds_since(start);
  return report;
}

std::string to_json(const OracleReport& r) {
  Json j;
  j["command"] = "oracle";
  j["instance"] = {{"n", r.n}, {"m", r.m}, {"k", r.k}};
  j["opt"] = r.result.opt;
  j["lp_value"] = r.lp_value;
  j["lp_lower_bound_ok"] = r.lp_value <= static_cast<double>(r.result.opt) + 1e-7;
  j["mandatory_edges"] = r.result.mandatory;
  j["free_edges"] = r.result.free_edges;
  j["search_nodes"] = r.result.nodes;
  j["witness"] = r.result.witness.ids();
  j["timing"] = {{"seconds", r.seconds}};
  return j.dump(2) + "\n";
}

VerifyReport run_verify(const DiGraph& g, const DiGraph& h, int k) {
  if (h.num_vertices() > g.num_vertices()) {
    throw Error(ErrorCode::kInvalidArgument, "subgraph has more vertices than the graph");
  }
  EdgeSet set(g.num_edges());
  for (const Edge& e : h.edges()) {
    const auto id = g.find_edge(e.tail, e.head);
    if (!id) {
      throw Error(ErrorCode::kInvalidArgument, "subgraph edge " + std::to_string(e.tail) + " -> " +
                                                   std::to_string(e.head) + " is not in the graph");
    }
    set.insert(*id);
  }
  VerifyReport report;
  report.n = g.num_vertices();
  report.m = g.num_edges();
  report.k = k;
  report.h_edges = set.size();
  report.check = is_k_spanner(g, set, k);
  report.all_pairs_ok = is_k_spanner_all_pairs(g, set, k);
  return report;
}

std::string to_json(const VerifyReport& r) {
  Json j;
  j["command"] = "verify";
  j["instance"] = {{"n", r.n}, {"m", r.m}, {"k", r.k}};
  j["h_edges"] = r.h_edges;
  j["is_k_spanner"] = r.check.ok;
  j["all_pairs_ok"] = r.all_pairs_ok;
  j["violation"] = violation_json(r.check.violation);
  return j.dump(2) + "\n";
}

void ClaimsReport::merge(const ClaimsReport& o) {
  lp_instances += o.lp_instances;
  claim2_demands += o.claim2_demands;
  claim2_skipped += o.claim2_skipped;
  claim2_long_arborescences += o.claim2_long_arborescences;
  claim2_violations += o.claim2_violations;
  min_claim2_mass = std::min(min_claim2_mass, o.min_claim2_mass);
  claim1_triples += o.claim1_triples;
  claim1_long_arborescences += o.claim1_long_arborescences;
  claim1_disagreements += o.claim1_disagreements;
  spt_cut_checks += o.spt_cut_checks;
  spt_cut_violations += o.spt_cut_violations;
  arborescences += o.arborescences;
}

namespace {

EdgeSet random_edge_subset(std::size_t m, std::mt19937_64& rng) {
  const double keep = 0.2 + 0.6 * uniform01(rng);
  EdgeSet h(m);
  for (EdgeId e = 0; e < m; ++e) {
    if (uniform01(rng) < keep) h.insert(e);
  }
  return h;
}

// The shortest-path tree of H rooted at u has no shortcut edge inside H.
bool spt_cut_empty(const DiGraph& g, const EdgeSet& h, VertexId u) {
  const DistanceMap d = shortest_paths(g, u, Direction::kOutward, &h);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!h.contains(e)) continue;
    const Edge& edge = g.edge(e);
    if (d.dist[edge.head] > d.dist[edge.tail] + edge.length) return false;
  }
  return true;
}

void check_claim1_into(ClaimsReport& report, const DiGraph& g, const EdgeSet& h, VertexId u, VertexId v,
                       Length bound, const Caps& caps) {
  const Claim1Report c1 = check_claim1(g, h, u, v, bound, caps.arborescences);
  ++report.claim1_triples;
  report.arborescences += c1.arborescences;
  report.claim1_long_arborescences += c1.long_arborescences;
  if (!c1.agree()) ++report.claim1_disagreements;
  ++report.spt_cut_checks;
  if (!spt_cut_empty(g, h, u)) ++report.spt_cut_violations;
}

}  // namespace

ClaimsReport run_claims_on_graph(const DiGraph& g, const ClaimsConfig& config) {
  ClaimsReport report;
  report.lp_instances = 1;
  const LpModel model = build_lp(g, config.k, config.caps.paths);
  const LpSolution lp = solve_lp(model, lp_options(config.caps));
  std::mt19937_64 rng(mix_seed(config.seed ^ 0x434c41494d53ULL));

  for (EdgeId d = 0; d < g.num_edges(); ++d) {
    const DemandPaths dp = enumerate_demand_paths(g, config.k, d, config.caps.paths);
    const auto covered = covered_vertices(dp);
    if (covered.size() > config.max_covered) {
      ++report.claim2_skipped;
      continue;
    }
    const InducedSubgraph sub = induced_subgraph(g, covered);
    const VertexId u = *sub.from_parent_vertex[dp.source];
    const VertexId v = *sub.from_parent_vertex[dp.target];
    std::vector<double> x_sub(sub.graph.num_edges());
    for (EdgeId e = 0; e < sub.graph.num_edges(); ++e) x_sub[e] = lp.x[sub.to_parent_edge[e]];

    const Length bound = static_cast<Length>(config.k) * g.edge(d).length;
    const Claim2Report c2 = check_claim2(x_sub, sub.graph, u, v, bound, config.tolerance, config.caps.arborescences);
    ++report.claim2_demands;
    report.arborescences += c2.arborescences;
    report.claim2_long_arborescences += c2.long_arborescences;
    report.min_claim2_mass = std::min(report.min_claim2_mass, c2.min_cut_mass);
    if (!c2.holds) ++report.claim2_violations;

    check_claim1_into(report, sub.graph, random_edge_subset(sub.graph.num_edges(), rng), u, v, dp.budget,
                      config.caps);
  }
  return report;
}

ClaimsReport run_claims(const ClaimsConfig& config) {
  ClaimsReport report;
  std::mt19937_64 rng(mix_seed(config.seed));
  for (std::size_t i = 0; i < config.claim1_triples; ++i) {
    const Claim1Instance inst = random_claim1_instance(rng, config.max_n);
    check_claim1_into(report, inst.graph, inst.h, inst.u, inst.v, inst.bound, config.caps);
  }
  for (std::size_t i = 0; i < config.lp_instances; ++i) {
    const InstanceSpec spec = random_small_spec(rng, 3, config.max_n);
    const DiGraph g = generate_instance(spec);
    ClaimsConfig sub = config;
    sub.seed = rng();
    report.merge(run_claims_on_graph(g, sub));
  }
  return report;
}

std::string to_json(const ClaimsReport& r) {
  Json j;
  j["command"] = "claims";
  j["violations"] = r.violations();
  j["claim1"] = {{"triples", r.claim1_triples},
                 {"long_arborescences", r.claim1_long_arborescences},
                 {"disagreements", r.claim1_disagreements}};
  j["claim2"] = {{"lp_instances", r.lp_instances},
                 {"demands", r.claim2_demands},
                 {"skipped_demands", r.claim2_skipped},
                 {"long_arborescences", r.claim2_long_arborescences},
                 {"violations", r.claim2_violations},
                 {"min_cut_mass", length_or_null(r.min_claim2_mass)}};
  j["spt_cut"] = {{"checks", r.spt_cut_checks}, {"violations", r.spt_cut_violations}};
  j["arborescences"] = r.arborescences;
  return j.dump(2) + "\n";
}

InstanceSpec random_small_spec(std::mt19937_64& rng, std::size_t min_n, std::size_t max_n) {
  InstanceSpec spec;
  spec.n = min_n + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(max_n - min_n + 1));
  spec.max_length = uniform01(rng) < 0.5 ? 1 : 4;
  spec.seed = rng();
  switch (static_cast<int>(uniform01(rng) * 5.0)) {
    case 0:
      spec.family = Family::kCycle;
      break;
    case 1:
      spec.family = Family::kLayered;
      spec.layers = std::min<std::size_t>(spec.n, 2 + static_cast<std::size_t>(uniform01(rng) * 2.0));
      spec.p = 0.5 + 0.4 * uniform01(rng);
      break;
    case 2:
      spec.family = Family::kGrid;
      spec.bidirectional = uniform01(rng) < 0.5;
      break;
    default:
      spec.family = Family::kErdosRenyi;
      spec.p = 0.25 + 0.3 * uniform01(rng);
      break;
  }
  return spec;
}

Claim1Instance random_claim1_instance(std::mt19937_64& rng, std::size_t max_vertices) {
  if (max_vertices < 2) throw Error(ErrorCode::kInvalidArgument, "claim instances need >= 2 vertices");
  const std::size_t n = 2 + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(max_vertices - 1));
  auto length = [&] { return 1.0 + std::floor(uniform01(rng) * 3.0); };

  std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
  std::vector<Edge> edges;
  // A random out-tree from 0 keeps every vertex reachable.
  for (VertexId w = 1; w < n; ++w) {
    const auto parent = static_cast<VertexId>(uniform01(rng) * w);
    present[parent][w] = true;
    edges.push_back({parent, w, length()});
  }
  const double extra = 0.15 + 0.4 * uniform01(rng);
  for (VertexId a = 0; a < n; ++a) {
    for (VertexId b = 0; b < n; ++b) {
      if (a == b || present[a][b]) continue;
      if (uniform01(rng) < extra) {
        present[a][b] = true;
        edges.push_back({a, b, length()});
      }
    }
  }
  Claim1Instance inst;
  inst.graph = DiGraph::build(n, std::move(edges));
  inst.u = 0;
  inst.v = 1 + static_cast<VertexId>(uniform01(rng) * static_cast<double>(n - 1));
  inst.h = random_edge_subset(inst.graph.num_edges(), rng);
  const Length d = shortest_paths(inst.graph, inst.u, Direction::kOutward).dist[inst.v];
  inst.bound = d + std::floor(uniform01(rng) * (2.0 * d + 2.0));
  return inst;
}

}  // namespace dspanner
