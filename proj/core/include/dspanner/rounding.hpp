#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "dspanner/graph.hpp"
#include "dspanner/lp.hpp"
#include "dspanner/verify.hpp"

namespace dspanner {

enum class RoundingMode { kUnit, kGeneral };

/// unit: 10 * sqrt(k) * ln n;  general: 5 * ln n.
double select_alpha(RoundingMode mode, std::size_t n, int k);

/// splitmix64 finalizer; the one mixing function behind every derived seed.
std::uint64_t mix_seed(std::uint64_t x);

/// Seed of trial `index` under master seed `seed`: mix_seed(seed + index).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

enum class RngPhase : std::uint64_t {
  kEdgeRounding = 0x45444745'524f554eULL,  // "EDGEROUN"
  kRootSampling = 0x524f4f54'53414d50ULL,  // "ROOTSAMP"
};

/// Independent stream for one phase: mt19937_64(mix_seed(seed ^ label)).
std::mt19937_64 phase_stream(std::uint64_t seed, RngPhase phase);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64& rng);

/// min(alpha * x * sqrt(n), 1)
double edge_inclusion_probability(double alpha, double x, std::size_t n);

/// min(alpha / sqrt(n), 1)
double root_sampling_probability(double alpha, std::size_t n);

/// Independent Bernoulli per edge: one uniform draw per edge in edge order,
/// edge kept iff draw < probabilities[e].
EdgeSet round_edges(std::span<const double> probabilities, std::mt19937_64& rng);

/// Whole-graph form with n = g.num_vertices().
EdgeSet round_edges(const DiGraph& g, std::span<const double> x, double alpha, std::mt19937_64& rng);

/// Independent Bernoulli per vertex with parameter min(alpha / sqrt(n), 1).
std::vector<VertexId> sample_tree_roots(std::size_t n, double alpha, std::mt19937_64& rng);

struct RoundingParams {
  RoundingMode mode = RoundingMode::kGeneral;
  int k = 3;
  std::uint64_t seed = 0;
  /// Replaces the per-component select_alpha value when set; must be > 0.
  std::optional<double> alpha;
};

/// Test hooks that bypass a sampling phase.
struct RoundingOverrides {
  std::optional<EdgeSet> rounded_edges;
  std::optional<std::vector<VertexId>> tree_roots;
};

/// Sampling parameters resolved for one weakly-connected component.
struct ComponentPlan {
  std::vector<VertexId> vertices;
  double alpha = 0.0;
};

struct SpannerResult {
  EdgeSet rounded_edges;
  std::vector<VertexId> tree_roots;  // ascending
  EdgeSet tree_edges;
  EdgeSet e_h;
  bool feasible = false;
  std::optional<SpannerViolation> violation;
  double lp_value = 0.0;
  std::optional<std::size_t> opt;
  std::uint64_t seed = 0;
  double alpha = 0.0;  // alpha of the largest component
  std::vector<ComponentPlan> components;
};

/// Components with at least two vertices and their alpha. Singletons carry
/// no edges and are never roots.
std::vector<ComponentPlan> plan_components(const DiGraph& g, const RoundingParams& params);

/// Per-edge inclusion probability actually used by build_spanner.
std::vector<double> edge_inclusion_probabilities(const DiGraph& g, std::span<const double> x,
                                                 const RoundingParams& params);

/// Union over roots of their outward and inward shortest-path tree edges.
EdgeSet tree_edges_for_roots(const DiGraph& g, std::span<const VertexId> roots);

/// Rounds the LP, samples tree roots, unions the trees, and checks the result
/// with is_k_spanner. Each weakly-connected component uses its own n and alpha.
SpannerResult build_spanner(const DiGraph& g, const LpSolution& lp, const RoundingParams& params,
                            const RoundingOverrides& overrides = {});

struct CostReport {
  std::size_t rounded_edges = 0;
  std::size_t tree_edges = 0;
  std::size_t e_h = 0;
  std::size_t tree_roots = 0;
  double expected_rounded_unclamped = 0.0;  // sum alpha sqrt(n) x_e
  double expected_rounded = 0.0;            // sum min(alpha sqrt(n) x_e, 1)
  double rounded_variance = 0.0;            // sum p (1 - p)
  double tree_edge_bound = 0.0;             // sum 2 alpha sqrt(n) (n - 1)
};

CostReport expected_cost_report(const DiGraph& g, std::span<const double> x,
                                const SpannerResult& result);

}  // namespace dspanner
