#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dspanner/generate.hpp"
#include "dspanner/graph.hpp"
#include "dspanner/lp.hpp"
#include "dspanner/paths.hpp"
#include "dspanner/rounding.hpp"
#include "dspanner/verify.hpp"

namespace dspanner {

struct Caps {
  PathCaps paths;
  ArborescenceCaps arborescences;
  OracleCaps oracle;
  std::size_t max_simplex_iterations = 1'000'000;
};

/// Overrides cap values from DSPANNER_MAX_PATHS, DSPANNER_MAX_HOPS,
/// DSPANNER_MAX_ARBORESCENCES and DSPANNER_MAX_FREE_EDGES when set.
Caps apply_env_caps(Caps caps);

enum class ModeSetting { kUnit, kGeneral, kAuto };

ModeSetting parse_mode(std::string_view text);

/// auto -> unit iff every length is 1. Explicit unit on other lengths throws
/// NotUnitLength.
RoundingMode resolve_mode(ModeSetting setting, const DiGraph& g);

struct RunConfig {
  int k = 3;
  ModeSetting mode = ModeSetting::kAuto;
  std::optional<double> alpha_override;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  std::size_t jobs = 1;
  Caps caps;
  bool run_oracle = false;
  bool require_feasible = false;
  std::string source;  // input file or generator spec, for the report
};

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  std::size_t rounded_edges = 0;
  std::size_t tree_roots = 0;
  std::size_t tree_edges = 0;
  std::size_t e_h = 0;
  bool feasible = false;
  std::optional<SpannerViolation> violation;
};

struct RunAggregate {
  double feasible_fraction = 0.0;
  double mean_e_h = 0.0;
  std::size_t max_e_h = 0;
  double mean_rounded_edges = 0.0;
  double ratio_vs_lp = 0.0;                // mean |E_H| / lp_value
  std::optional<double> ratio_vs_opt;      // mean |E_H| / OPT
  std::optional<double> max_ratio_vs_opt;  // max |E_H| / OPT
};

struct RunReport {
  std::string source;
  std::size_t n = 0;
  std::size_t m = 0;
  int k = 1;
  RoundingMode mode = RoundingMode::kGeneral;
  double lp_value = 0.0;
  std::size_t lp_path_vars = 0;
  std::optional<std::size_t> opt;
  double expected_rounded_edges = 0.0;  // sum_e min(alpha x_e sqrt(n), 1)
  double rounded_edges_variance = 0.0;  // sum_e p (1 - p)
  std::vector<TrialRecord> trials;
  RunAggregate aggregate;
  double lp_seconds = 0.0;
  double oracle_seconds = 0.0;
  double trials_seconds = 0.0;
};

/// LP once, optional exact oracle, then `trials` rounding runs seeded with
/// trial_seed(config.seed, i), up to config.jobs at a time.
RunReport run_solve(const DiGraph& g, const RunConfig& config);

/// Rounding trials only, from a given LP solution.
RunReport run_round(const DiGraph& g, const LpSolution& lp, const RunConfig& config);

std::vector<TrialRecord> run_trials(const DiGraph& g, const LpSolution& lp, const RunConfig& config);

RunAggregate aggregate_trials(const std::vector<TrialRecord>& trials, double lp_value,
                              std::optional<std::size_t> opt);

/// Exit status of a finished run: 4 when require_feasible is set and a trial
/// was infeasible, else 0.
int run_exit_status(const RunReport& report, const RunConfig& config);

std::string to_json(const RunReport& report);

/// Only the per-trial array, serialized exactly as inside to_json.
std::string trials_to_json(const std::vector<TrialRecord>& trials);

struct LpReport {
  std::size_t n = 0;
  std::size_t m = 0;
  int k = 1;
  LpModel model;
  LpSolution solution;
  double seconds = 0.0;
};

LpReport run_lp(const DiGraph& g, const RunConfig& config);

std::string to_json(const LpReport& report);

/// Reads the per-edge x values and objective back from to_json(LpReport).
LpSolution parse_lp_dump(std::string_view json_text, const DiGraph& g);

struct OracleReport {
  std::size_t n = 0;
  std::size_t m = 0;
  int k = 1;
  OptResult result;
  double lp_value = 0.0;
  double seconds = 0.0;
};

OracleReport run_oracle(const DiGraph& g, const RunConfig& config);

std::string to_json(const OracleReport& report);

struct VerifyReport {
  std::size_t n = 0;
  std::size_t m = 0;
  int k = 1;
  std::size_t h_edges = 0;
  SpannerCheck check;
  bool all_pairs_ok = false;
};

/// `h` is matched to g's edges by (tail, head); throws InvalidArgument for an
/// edge of h missing from g.
VerifyReport run_verify(const DiGraph& g, const DiGraph& h, int k);

std::string to_json(const VerifyReport& report);

struct ClaimsConfig {
  std::size_t lp_instances = 100;    // solved instances for the cut-mass check
  std::size_t claim1_triples = 500;  // random (G', H', K) triples
  std::size_t max_n = 7;
  std::size_t max_covered = 7;       // demands with larger covered sets are skipped
  int k = 3;
  std::uint64_t seed = 1;
  double tolerance = 1e-6;
  Caps caps;
};

struct ClaimsReport {
  std::size_t lp_instances = 0;
  std::size_t claim2_demands = 0;
  std::size_t claim2_skipped = 0;
  std::size_t claim2_long_arborescences = 0;
  std::size_t claim2_violations = 0;
  Length min_claim2_mass = kUnreachable;
  std::size_t claim1_triples = 0;
  std::size_t claim1_long_arborescences = 0;
  std::size_t claim1_disagreements = 0;
  std::size_t spt_cut_checks = 0;
  std::size_t spt_cut_violations = 0;
  std::size_t arborescences = 0;

  std::size_t violations() const {
    return claim2_violations + claim1_disagreements + spt_cut_violations;
  }
  void merge(const ClaimsReport& other);
};

/// Random batch: claim1_triples path/cut equivalence checks plus cut-mass
/// checks on every small-enough demand of lp_instances solved instances.
ClaimsReport run_claims(const ClaimsConfig& config);

/// Cut-mass checks on every demand of g with |covered| <= max_covered, plus
/// one path/cut equivalence check per such demand against a random subgraph.
ClaimsReport run_claims_on_graph(const DiGraph& g, const ClaimsConfig& config);

std::string to_json(const ClaimsReport& report);

/// Random small instance over all families (Erdos-Renyi twice as likely as
/// each of the others), lengths unit or in [1, 4].
InstanceSpec random_small_spec(std::mt19937_64& rng, std::size_t min_n, std::size_t max_n);

struct Claim1Instance {
  DiGraph graph;
  EdgeSet h;
  VertexId u = 0;
  VertexId v = 1;
  Length bound = 0.0;
};

/// Graph on 2..max_vertices vertices with every vertex reachable from u = 0,
/// small integer lengths, a random edge subset and a bound near dist(u, v).
Claim1Instance random_claim1_instance(std::mt19937_64& rng, std::size_t max_vertices);

}  // namespace dspanner
