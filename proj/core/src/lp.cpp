#include "dspanner/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>

#include "dspanner/error.hpp"
#include "dspanner/simplex.hpp"

namespace dspanner {

namespace {

double clean(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

LpStatus to_lp_status(SimplexStatus s) {
  switch (s) {
    case SimplexStatus::kOptimal: return LpStatus::kOptimal;
    case SimplexStatus::kInfeasible: return LpStatus::kInfeasible;
    case SimplexStatus::kUnbounded: break;
  }
  throw Error(ErrorCode::kNumericalFailure, "LP reported unbounded with nonnegative costs");
}

}  // namespace

LpModel build_lp(const DiGraph& g, int k, const PathCaps& caps) {
  LpModel model;
  model.num_vertices = g.num_vertices();
  model.num_edges = g.num_edges();
  model.k = k;
  model.demands.reserve(g.num_edges());

  for (EdgeId d = 0; d < g.num_edges(); ++d) {
    DemandPaths dp = enumerate_demand_paths(g, k, d, caps);
    if (!dp.complete) {
      throw Error(ErrorCode::kPathExplosion,
                  "demand " + std::to_string(d) + ": enumeration cut short by the hop cap");
    }
    DemandBlock block;
    block.demand = d;
    block.budget = dp.budget;
    block.mandatory = dp.path_edges.size() == 1 && dp.path_edges[0].size() == 1 &&
                      dp.path_edges[0][0] == d;

    std::map<EdgeId, std::vector<std::size_t>> usage;
    for (std::size_t i = 0; i < dp.paths.size(); ++i) {
      const std::size_t idx = model.paths.size();
      for (EdgeId e : dp.path_edges[i]) {
        auto& list = usage[e];
        if (list.empty() || list.back() != idx) list.push_back(idx);
      }
      model.paths.push_back({d, std::move(dp.paths[i]), std::move(dp.path_edges[i])});
      block.paths.push_back(idx);
    }
    for (auto& [e, list] : usage) {
      model.capacity_rows.push_back({d, e, std::move(list)});
    }
    model.demands.push_back(std::move(block));
  }
  return model;
}

LpSolution solve_lp(const LpModel& model, const LpSolveOptions& options) {
  LinearProgram lp;
  std::vector<double> x_lower(model.num_edges, 0.0);
  if (options.presolve_mandatory) {
    for (const auto& block : model.demands) {
      if (block.mandatory) x_lower[block.demand] = 1.0;
    }
  }
  for (std::size_t e = 0; e < model.num_edges; ++e) lp.add_variable(1.0, x_lower[e]);

  constexpr std::size_t kFixed = static_cast<std::size_t>(-1);
  std::vector<std::size_t> column(model.paths.size(), kFixed);
  for (const auto& block : model.demands) {
    if (options.presolve_mandatory && block.mandatory) continue;
    for (std::size_t p : block.paths) column[p] = lp.add_variable(0.0);
  }
  for (const auto& row : model.capacity_rows) {
    if (column[row.paths.front()] == kFixed) continue;
    std::vector<std::pair<std::size_t, double>> terms;
    terms.reserve(row.paths.size() + 1);
    for (std::size_t p : row.paths) terms.emplace_back(column[p], 1.0);
    terms.emplace_back(row.edge, -1.0);
    lp.add_row(std::move(terms), RowSense::kLessEqual, 0.0);
  }
  for (const auto& block : model.demands) {
    if (options.presolve_mandatory && block.mandatory) continue;
    std::vector<std::pair<std::size_t, double>> terms;
    for (std::size_t p : block.paths) terms.emplace_back(column[p], 1.0);
    lp.add_row(std::move(terms), RowSense::kGreaterEqual, 1.0);
  }

  SimplexOptions sopt;
  sopt.feasibility_tolerance = options.tolerance;
  sopt.max_iterations = options.max_iterations;
  const SimplexResult res = solve_simplex(lp, sopt);

  LpSolution sol;
  sol.status = to_lp_status(res.status);
  sol.iterations = res.iterations;
  if (sol.status != LpStatus::kOptimal) return sol;

  sol.x.resize(model.num_edges);
  for (std::size_t e = 0; e < model.num_edges; ++e) sol.x[e] = clean(res.values[e]);
  sol.f.assign(model.paths.size(), 0.0);
  for (std::size_t p = 0; p < model.paths.size(); ++p) {
    sol.f[p] = column[p] == kFixed ? 1.0 : clean(res.values[column[p]]);
  }
  for (double v : sol.x) sol.objective_value += v;

  const LpFeasibility check = check_lp_solution(model, sol, options.tolerance);
  if (!check.feasible) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "LP solution fails re-check: shortfall %.3g, capacity excess %.3g, most negative %.3g",
                  check.worst_demand_shortfall, check.worst_capacity_excess, check.most_negative);
    throw Error(ErrorCode::kNumericalFailure, msg);
  }
  return sol;
}

LpFeasibility check_lp_solution(const LpModel& model, const LpSolution& sol, double tolerance) {
  LpFeasibility out;
  if (sol.x.size() != model.num_edges || sol.f.size() != model.paths.size()) {
    out.feasible = false;
    out.worst_demand_shortfall = 1.0;
    return out;
  }
  for (double v : sol.x) out.most_negative = std::min(out.most_negative, v);
  for (double v : sol.f) out.most_negative = std::min(out.most_negative, v);

  std::vector<double> demand_flow(model.num_edges, 0.0);
  for (std::size_t p = 0; p < model.paths.size(); ++p) demand_flow[model.paths[p].demand] += sol.f[p];
  for (double s : demand_flow) out.worst_demand_shortfall = std::max(out.worst_demand_shortfall, 1.0 - s);

  // Per demand, accumulate flow on each edge by walking its paths.
  std::vector<double> load(model.num_edges, 0.0);
  std::vector<EdgeId> touched;
  std::size_t p = 0;
  while (p < model.paths.size()) {
    const EdgeId d = model.paths[p].demand;
    touched.clear();
    for (; p < model.paths.size() && model.paths[p].demand == d; ++p) {
      std::vector<EdgeId> unique_edges = model.paths[p].edges;
      std::sort(unique_edges.begin(), unique_edges.end());
      unique_edges.erase(std::unique(unique_edges.begin(), unique_edges.end()), unique_edges.end());
      for (EdgeId e : unique_edges) {
        if (load[e] == 0.0) touched.push_back(e);
        load[e] += sol.f[p];
      }
    }
    for (EdgeId e : touched) {
      out.worst_capacity_excess = std::max(out.worst_capacity_excess, load[e] - sol.x[e]);
      load[e] = 0.0;
    }
  }
  out.feasible = out.worst_demand_shortfall <= tolerance && out.worst_capacity_excess <= tolerance &&
                 out.most_negative >= -tolerance;
  return out;
}

bool lp_lower_bound_check(const LpSolution& sol, std::size_t opt, double tolerance) {
  return sol.objective_value <= static_cast<double>(opt) + tolerance;
}

LayeredLpModel build_layered_lp_unit(const DiGraph& g, int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "stretch k must be >= 1");
  if (!g.all_unit_lengths()) {
    throw Error(ErrorCode::kNotUnitLength, "layered formulation requires unit edge lengths");
  }
  LayeredLpModel model;
  model.num_vertices = g.num_vertices();
  model.num_edges = g.num_edges();
  model.k = k;
  model.edges.assign(g.edges().begin(), g.edges().end());

  const std::size_t n = g.num_vertices();
  const auto layers = static_cast<std::size_t>(k) + 1;
  for (EdgeId d = 0; d < g.num_edges(); ++d) {
    const VertexId u = g.edge(d).tail;
    const VertexId v = g.edge(d).head;
    // reach[i][w]: (w,i) is the endpoint of a layered walk from (u,0) that has
    // not yet entered a copy of v.
    std::vector<std::vector<bool>> reach(layers, std::vector<bool>(n, false));
    reach[0][u] = true;
    for (std::size_t i = 0; i + 1 < layers; ++i) {
      for (VertexId w = 0; w < n; ++w) {
        if (!reach[i][w] || (i > 0 && w == v)) continue;
        for (EdgeId e : g.out_edges(w)) reach[i + 1][g.edge(e).head] = true;
      }
    }
    // sink[i][w]: from (w,i) some copy of v is reachable within the layers.
    std::vector<std::vector<bool>> sink(layers, std::vector<bool>(n, false));
    for (std::size_t i = layers; i-- > 1;) {
      sink[i][v] = true;
      if (i + 1 == layers) continue;
      for (VertexId w = 0; w < n; ++w) {
        if (w == v) continue;
        for (EdgeId e : g.out_edges(w)) {
          if (sink[i + 1][g.edge(e).head]) {
            sink[i][w] = true;
            break;
          }
        }
      }
    }
    LayeredDemand demand;
    demand.demand = d;
    for (std::size_t i = 0; i + 1 < layers; ++i) {
      for (VertexId w = 0; w < n; ++w) {
        if (!reach[i][w] || (i > 0 && w == v)) continue;
        for (EdgeId e : g.out_edges(w)) {
          if (sink[i + 1][g.edge(e).head]) demand.arcs.push_back({e, static_cast<int>(i)});
        }
      }
    }
    model.demands.push_back(std::move(demand));
  }
  return model;
}

LayeredLpSolution solve_layered_lp(const LayeredLpModel& model, const LpSolveOptions& options) {
  LinearProgram lp;
  for (std::size_t e = 0; e < model.num_edges; ++e) lp.add_variable(1.0);
  const auto layers = static_cast<std::size_t>(model.k) + 1;
  std::vector<std::vector<std::size_t>> columns(model.demands.size());

  for (std::size_t di = 0; di < model.demands.size(); ++di) {
    const LayeredDemand& demand = model.demands[di];
    const VertexId v = model.edges[demand.demand].head;
    for (std::size_t a = 0; a < demand.arcs.size(); ++a) columns[di].push_back(lp.add_variable(0.0));

    // Flow balance at every interior copy (w,i), i >= 1, w != v.
    std::map<std::pair<std::size_t, VertexId>, std::vector<std::pair<std::size_t, double>>> balance;
    std::vector<std::pair<std::size_t, double>> source_out;
    std::map<EdgeId, std::vector<std::pair<std::size_t, double>>> capacity;
    for (std::size_t a = 0; a < demand.arcs.size(); ++a) {
      const LayeredArc& arc = demand.arcs[a];
      const Edge& e = model.edges[arc.edge];
      const std::size_t col = columns[di][a];
      const auto from_layer = static_cast<std::size_t>(arc.layer);
      if (from_layer == 0) {
        source_out.emplace_back(col, 1.0);
      } else {
        balance[{from_layer, e.tail}].emplace_back(col, -1.0);
      }
      if (e.head != v && from_layer + 1 < layers) balance[{from_layer + 1, e.head}].emplace_back(col, 1.0);
      capacity[arc.edge].emplace_back(col, 1.0);
    }
    for (auto& [node, terms] : balance) lp.add_row(std::move(terms), RowSense::kEqual, 0.0);
    for (auto& [e, terms] : capacity) {
      terms.emplace_back(e, -1.0);
      lp.add_row(std::move(terms), RowSense::kLessEqual, 0.0);
    }
    lp.add_row(std::move(source_out), RowSense::kGreaterEqual, 1.0);
  }

  SimplexOptions sopt;
  sopt.feasibility_tolerance = options.tolerance;
  sopt.max_iterations = options.max_iterations;
  const SimplexResult res = solve_simplex(lp, sopt);

  LayeredLpSolution sol;
  sol.status = to_lp_status(res.status);
  if (sol.status != LpStatus::kOptimal) return sol;
  sol.x.resize(model.num_edges);
  for (std::size_t e = 0; e < model.num_edges; ++e) {
    sol.x[e] = clean(res.values[e]);
    sol.objective_value += sol.x[e];
  }
  sol.arc_flow.resize(model.demands.size());
  for (std::size_t di = 0; di < model.demands.size(); ++di) {
    for (std::size_t col : columns[di]) sol.arc_flow[di].push_back(clean(res.values[col]));
  }
  return sol;
}

void write_cplex_lp(const LpModel& model, std::ostream& out) {
  out << "\\ Directed k-spanner path LP, k = " << model.k << ", n = " << model.num_vertices
      << ", m = " << model.num_edges << "\n";
  out << "Minimize\n obj:";
  for (std::size_t e = 0; e < model.num_edges; ++e) out << (e == 0 ? " " : " + ") << "x" << e;
  if (model.num_edges == 0) out << " 0";
  out << "\nSubject To\n";
  for (const auto& row : model.capacity_rows) {
    out << " cap_d" << row.demand << "_e" << row.edge << ":";
    for (std::size_t p : row.paths) out << " + f" << p;
    out << " - x" << row.edge << " <= 0\n";
  }
  for (const auto& block : model.demands) {
    out << " dem_d" << block.demand << ":";
    for (std::size_t p : block.paths) out << " + f" << p;
    out << " >= 1\n";
  }
  out << "End\n";
}

}  // namespace dspanner
