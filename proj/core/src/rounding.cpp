#include "dspanner/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dspanner/error.hpp"

namespace dspanner {

double select_alpha(RoundingMode mode, std::size_t n, int k) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "select_alpha needs n >= 2");
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "stretch k must be >= 1");
  const double log_n = std::log(static_cast<double>(n));
  switch (mode) {
    case RoundingMode::kUnit: return 10.0 * std::sqrt(static_cast<double>(k)) * log_n;
    case RoundingMode::kGeneral: return 5.0 * log_n;
  }
  return 5.0 * log_n;
}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) { return mix_seed(seed + index); }

std::mt19937_64 phase_stream(std::uint64_t seed, RngPhase phase) {
  return std::mt19937_64(mix_seed(seed ^ static_cast<std::uint64_t>(phase)));
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double edge_inclusion_probability(double alpha, double x, std::size_t n) {
  return std::min(alpha * x * std::sqrt(static_cast<double>(n)), 1.0);
}

double root_sampling_probability(double alpha, std::size_t n) {
  return std::min(alpha / std::sqrt(static_cast<double>(n)), 1.0);
}

EdgeSet round_edges(std::span<const double> probabilities, std::mt19937_64& rng) {
  EdgeSet out(probabilities.size());
  for (EdgeId e = 0; e < probabilities.size(); ++e) {
    if (uniform01(rng) < probabilities[e]) out.insert(e);
  }
  return out;
}

EdgeSet round_edges(const DiGraph& g, std::span<const double> x, double alpha, std::mt19937_64& rng) {
  if (x.size() != g.num_edges()) throw Error(ErrorCode::kInvalidArgument, "x has the wrong size");
  std::vector<double> p(x.size());
  for (std::size_t e = 0; e < x.size(); ++e) {
    if (x[e] < 0.0) throw Error(ErrorCode::kInvalidArgument, "LP values must be >= 0");
    p[e] = edge_inclusion_probability(alpha, x[e], g.num_vertices());
  }
  return round_edges(p, rng);
}

std::vector<VertexId> sample_tree_roots(std::size_t n, double alpha, std::mt19937_64& rng) {
  const double p = root_sampling_probability(alpha, n);
  std::vector<VertexId> out;
  for (VertexId v = 0; v < n; ++v) {
    if (uniform01(rng) < p) out.push_back(v);
  }
  return out;
}

namespace {

void validate(const DiGraph& g, const RoundingParams& params) {
  if (params.k < 1) throw Error(ErrorCode::kInvalidArgument, "stretch k must be >= 1");
  if (params.alpha && !(*params.alpha > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must be > 0");
  }
  if (params.mode == RoundingMode::kUnit && !g.all_unit_lengths()) {
    throw Error(ErrorCode::kNotUnitLength, "unit mode requires all edge lengths = 1");
  }
}

// component index per vertex; -1 for singletons
std::vector<int> component_of(const DiGraph& g, const std::vector<ComponentPlan>& plans) {
  std::vector<int> out(g.num_vertices(), -1);
  for (std::size_t c = 0; c < plans.size(); ++c) {
    for (VertexId v : plans[c].vertices) out[v] = static_cast<int>(c);
  }
  return out;
}

}  // namespace

std::vector<ComponentPlan> plan_components(const DiGraph& g, const RoundingParams& params) {
  validate(g, params);
  std::vector<ComponentPlan> out;
  for (auto& vs : weakly_connected_components(g)) {
    if (vs.size() < 2) continue;
    ComponentPlan plan;
    plan.alpha = params.alpha ? *params.alpha : select_alpha(params.mode, vs.size(), params.k);
    plan.vertices = std::move(vs);
    out.push_back(std::move(plan));
  }
  return out;
}

std::vector<double> edge_inclusion_probabilities(const DiGraph& g, std::span<const double> x,
                                                 const RoundingParams& params) {
  if (x.size() != g.num_edges()) throw Error(ErrorCode::kInvalidArgument, "x has the wrong size");
  const auto plans = plan_components(g, params);
  const auto comp = component_of(g, plans);
  std::vector<double> p(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (x[e] < 0.0) throw Error(ErrorCode::kInvalidArgument, "LP values must be >= 0");
    const ComponentPlan& plan = plans[comp[g.edge(e).tail]];
    p[e] = edge_inclusion_probability(plan.alpha, x[e], plan.vertices.size());
  }
  return p;
}

EdgeSet tree_edges_for_roots(const DiGraph& g, std::span<const VertexId> roots) {
  EdgeSet out(g.num_edges());
  for (VertexId r : roots) {
    for (Direction d : {Direction::kOutward, Direction::kInward}) {
      for (EdgeId e : shortest_path_tree(g, r, d).tree_edges) out.insert(e);
    }
  }
  return out;
}

SpannerResult build_spanner(const DiGraph& g, const LpSolution& lp, const RoundingParams& params,
                            const RoundingOverrides& overrides) {
  if (lp.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kInvalidArgument, "build_spanner needs an optimal LP solution");
  }
  SpannerResult out;
  out.seed = params.seed;
  out.lp_value = lp.objective_value;
  out.components = plan_components(g, params);
  std::size_t largest = 0;
  for (const auto& c : out.components) {
    if (c.vertices.size() > largest) {
      largest = c.vertices.size();
      out.alpha = c.alpha;
    }
  }

  if (overrides.rounded_edges) {
    if (overrides.rounded_edges->universe() != g.num_edges()) {
      throw Error(ErrorCode::kInvalidArgument, "rounded-edge override has the wrong universe");
    }
    out.rounded_edges = *overrides.rounded_edges;
  } else {
    auto rng = phase_stream(params.seed, RngPhase::kEdgeRounding);
    out.rounded_edges = round_edges(edge_inclusion_probabilities(g, lp.x, params), rng);
  }

  if (overrides.tree_roots) {
    out.tree_roots = *overrides.tree_roots;
    for (VertexId v : out.tree_roots) {
      if (v >= g.num_vertices()) throw Error(ErrorCode::kIndexOutOfRange, "tree root out of range");
    }
    std::sort(out.tree_roots.begin(), out.tree_roots.end());
    out.tree_roots.erase(std::unique(out.tree_roots.begin(), out.tree_roots.end()), out.tree_roots.end());
  } else {
    // One draw per vertex in vertex order, each with its component's parameter.
    auto rng = phase_stream(params.seed, RngPhase::kRootSampling);
    const auto comp = component_of(g, out.components);
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      const double u = uniform01(rng);
      if (comp[v] < 0) continue;
      const ComponentPlan& plan = out.components[comp[v]];
      if (u < root_sampling_probability(plan.alpha, plan.vertices.size())) out.tree_roots.push_back(v);
    }
  }

  out.tree_edges = tree_edges_for_roots(g, out.tree_roots);
  out.e_h = out.rounded_edges;
  out.e_h.merge(out.tree_edges);

  const SpannerCheck check = is_k_spanner(g, out.e_h, params.k);
  out.feasible = check.ok;
  out.violation = check.violation;
  return out;
}

CostReport expected_cost_report(const DiGraph& g, std::span<const double> x,
                                const SpannerResult& result) {
  CostReport out;
  out.rounded_edges = result.rounded_edges.size();
  out.tree_edges = result.tree_edges.size();
  out.e_h = result.e_h.size();
  out.tree_roots = result.tree_roots.size();
  if (x.size() != g.num_edges()) throw Error(ErrorCode::kInvalidArgument, "x has the wrong size");

  std::vector<int> comp(g.num_vertices(), -1);
  for (std::size_t c = 0; c < result.components.size(); ++c) {
    const ComponentPlan& plan = result.components[c];
    for (VertexId v : plan.vertices) comp[v] = static_cast<int>(c);
    const double n = static_cast<double>(plan.vertices.size());
    out.tree_edge_bound += 2.0 * plan.alpha * std::sqrt(n) * (n - 1.0);
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const ComponentPlan& plan = result.components[comp[g.edge(e).tail]];
    const double scale = plan.alpha * std::sqrt(static_cast<double>(plan.vertices.size()));
    const double p = edge_inclusion_probability(plan.alpha, x[e], plan.vertices.size());
    out.expected_rounded_unclamped += scale * x[e];
    out.expected_rounded += p;
    out.rounded_variance += p * (1.0 - p);
  }
  return out;
}

}  // namespace dspanner
