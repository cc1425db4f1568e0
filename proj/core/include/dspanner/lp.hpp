#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "dspanner/graph.hpp"
#include "dspanner/paths.hpp"

namespace dspanner {

/*
  Path-flow LP relaxation of Directed k-Spanner.

    minimize    sum_e x_e
    subject to  sum_{P in P(u,v), e in P} f_P <= x_e   for every demand (u,v) and edge e
                sum_{P in P(u,v)} f_P >= 1             for every demand (u,v)
                x, f >= 0

  Every edge is a demand. P(u,v) is the simple-path family from
  enumerate_demand_paths. Capacity rows whose path sum is empty are omitted.
*/

struct LpPath {
  EdgeId demand = 0;
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
};

struct DemandBlock {
  EdgeId demand = 0;
  Length budget = 0.0;
  std::vector<std::size_t> paths;  // indices into LpModel::paths
  /// The edge itself is the only budget-feasible path; x_e >= 1 in any
  /// feasible solution.
  bool mandatory = false;
};

struct CapacityRow {
  EdgeId demand = 0;
  EdgeId edge = 0;
  std::vector<std::size_t> paths;
};

struct LpModel {
  std::size_t num_vertices = 0;
  std::size_t num_edges = 0;
  int k = 1;
  std::vector<LpPath> paths;
  std::vector<DemandBlock> demands;  // one per edge, in edge order
  std::vector<CapacityRow> capacity_rows;

  std::size_t num_edge_vars() const { return num_edges; }
  std::size_t num_path_vars() const { return paths.size(); }
};

/// Throws PathExplosion when any demand exceeds the path caps (including an
/// enumeration cut short by the hop cap).
LpModel build_lp(const DiGraph& g, int k, const PathCaps& caps = {});

enum class LpStatus { kOptimal, kInfeasible, kCapExceeded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;  // per edge
  std::vector<double> f;  // per LpModel::paths entry
  double objective_value = 0.0;
  std::size_t iterations = 0;
};

struct LpSolveOptions {
  double tolerance = 1e-9;
  std::size_t max_iterations = 1'000'000;
  /// Fix mandatory demands (x_e >= 1, own path flow 1) instead of emitting
  /// their rows.
  bool presolve_mandatory = true;
};

/// Exact solve of the explicit model. The returned solution is re-checked
/// with check_lp_solution; a violation beyond the tolerance throws
/// NumericalFailure.
LpSolution solve_lp(const LpModel& model, const LpSolveOptions& options = {});

struct LpFeasibility {
  bool feasible = true;
  double worst_demand_shortfall = 0.0;  // max(0, 1 - sum f) over demands
  double worst_capacity_excess = 0.0;   // max(0, flow through e - x_e) over (demand, e)
  double most_negative = 0.0;           // min(0, min value)
};

/// Recomputes every constraint from the path lists alone.
LpFeasibility check_lp_solution(const LpModel& model, const LpSolution& sol, double tolerance);

/// objective_value <= opt + tolerance
bool lp_lower_bound_check(const LpSolution& sol, std::size_t opt, double tolerance = 1e-7);

/*
  Layered edge-flow formulation for unit lengths.

  For demand (u,v) the layered graph has vertex copies (w, i), i = 0..k, and an
  arc (w,i) -> (w',i+1) for every edge (w,w'). One unit of flow must leave
  (u,0) and reach the copies of v, which are sinks. The per-demand capacity of
  edge e bounds the flow summed over all of its copies by x_e. Arcs that
  cannot lie on a (u,0) -> v flow path are pruned.
*/

struct LayeredArc {
  EdgeId edge = 0;
  int layer = 0;  // arc leaves layer `layer`
};

struct LayeredDemand {
  EdgeId demand = 0;
  std::vector<LayeredArc> arcs;
};

struct LayeredLpModel {
  std::size_t num_vertices = 0;
  std::size_t num_edges = 0;
  int k = 1;
  std::vector<Edge> edges;
  std::vector<LayeredDemand> demands;
};

/// Throws NotUnitLength unless every length equals 1.
LayeredLpModel build_layered_lp_unit(const DiGraph& g, int k);

struct LayeredLpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  std::vector<std::vector<double>> arc_flow;  // per demand, per arc
  double objective_value = 0.0;
};

LayeredLpSolution solve_layered_lp(const LayeredLpModel& model, const LpSolveOptions& options = {});

/// CPLEX LP text format; variables x<e> and f<p>.
void write_cplex_lp(const LpModel& model, std::ostream& out);

}  // namespace dspanner
