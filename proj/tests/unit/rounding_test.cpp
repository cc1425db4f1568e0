#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dspanner/error.hpp"
#include "dspanner/generate.hpp"
#include "dspanner/lp.hpp"
#include "dspanner/rounding.hpp"

namespace dspanner {
namespace {

DiGraph triangle() { return DiGraph::build(3, {{0, 1, 1}, {0, 2, 1}, {2, 1, 1}}); }

DiGraph cycle(std::size_t n) { return generate_instance({.family = Family::kCycle, .n = n}); }

TEST(SelectAlpha, Regimes) {
  EXPECT_NEAR(select_alpha(RoundingMode::kGeneral, 55, 3), 20.036, 1e-3);
  EXPECT_NEAR(select_alpha(RoundingMode::kGeneral, 55, 3), 5 * std::log(55.0), 1e-12);
  EXPECT_NEAR(select_alpha(RoundingMode::kUnit, 100, 4), 20 * std::log(100.0), 1e-12);
  // n = 3 is the closest integer to e; the unit regime is 10 sqrt(k) ln n.
  EXPECT_NEAR(select_alpha(RoundingMode::kUnit, 3, 1), 10 * std::log(3.0), 1e-12);
}

TEST(SelectAlpha, RejectsTinyInstances) {
  EXPECT_THROW(select_alpha(RoundingMode::kGeneral, 1, 3), Error);
  EXPECT_THROW(select_alpha(RoundingMode::kUnit, 5, 0), Error);
}

TEST(Seeds, MixingIsFixed) {
  // splitmix64 reference values.
  EXPECT_EQ(mix_seed(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(trial_seed(7, 3), mix_seed(10));
  EXPECT_NE(trial_seed(7, 0), trial_seed(7, 1));
  auto a = phase_stream(5, RngPhase::kEdgeRounding);
  auto b = phase_stream(5, RngPhase::kRootSampling);
  EXPECT_NE(a(), b());
}

TEST(Seeds, Uniform01Range) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform01(rng);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Probabilities, Clamp) {
  EXPECT_EQ(edge_inclusion_probability(2, 0.5, 4), 1.0);
  EXPECT_EQ(edge_inclusion_probability(1, 0.25, 4), 0.5);
  EXPECT_EQ(edge_inclusion_probability(1, 0.0, 4), 0.0);
  EXPECT_EQ(root_sampling_probability(4, 16), 1.0);
  EXPECT_EQ(root_sampling_probability(1, 16), 0.25);
}

TEST(RoundEdges, ZeroAndClampedValues) {
  const DiGraph g = cycle(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    const std::vector<double> zero(5, 0.0);
    EXPECT_TRUE(round_edges(g, zero, 3.0, rng).empty());
    const std::vector<double> one(5, 1.0);
    EXPECT_EQ(round_edges(g, one, 1.0, rng).size(), 5u);
  }
}

TEST(RoundEdges, MonteCarloMatchesBernoulli) {
  // x = 0.5 and alpha sqrt(n) = 1 gives p = 0.5.
  const DiGraph g = DiGraph::build(4, {{0, 1, 1}});
  const std::vector<double> x{0.5};
  std::size_t hits = 0;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    auto rng = phase_stream(trial_seed(99, t), RngPhase::kEdgeRounding);
    hits += round_edges(g, x, 0.5, rng).size();
  }
  const double freq = hits / 10000.0;
  EXPECT_GE(freq, 0.48);
  EXPECT_LE(freq, 0.52);
}

TEST(SampleRoots, Examples) {
  std::mt19937_64 rng(3);
  EXPECT_EQ(sample_tree_roots(9, 3.0, rng).size(), 9u);
  for (int t = 0; t < 100; ++t) EXPECT_TRUE(sample_tree_roots(16, 4e-9, rng).empty());
  double total = 0;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    auto r = phase_stream(trial_seed(17, t), RngPhase::kRootSampling);
    total += static_cast<double>(sample_tree_roots(4, 1.0, r).size());
  }
  EXPECT_GE(total / 10000, 1.94);
  EXPECT_LE(total / 10000, 2.06);
}

TEST(BuildSpanner, CycleKeepsEverything) {
  const DiGraph g = cycle(6);
  const LpSolution lp = solve_lp(build_lp(g, 3));
  RoundingParams p;
  p.alpha = 10.0;
  const SpannerResult r = build_spanner(g, lp, p);
  EXPECT_EQ(r.e_h.size(), 6u);
  EXPECT_TRUE(r.feasible);
}

TEST(BuildSpanner, AllRootsGiveAllShortestPathTrees) {
  const DiGraph g = generate_instance(parse_instance_spec("er:n=9,p=0.3,maxlen=3,seed=4"));
  const LpSolution lp = solve_lp(build_lp(g, 3));
  RoundingParams p;
  p.alpha = 100.0;
  RoundingOverrides o;
  o.rounded_edges = EdgeSet(g.num_edges());
  const SpannerResult r = build_spanner(g, lp, p, o);
  for (VertexId v = 0; v < 9; ++v) {
    for (Direction d : {Direction::kOutward, Direction::kInward}) {
      for (EdgeId e : shortest_path_tree(g, v, d).tree_edges) EXPECT_TRUE(r.e_h.contains(e));
    }
  }
  EXPECT_EQ(r.feasible, is_k_spanner(g, r.e_h, 3).ok);
  EXPECT_TRUE(r.feasible);
}

TEST(BuildSpanner, TriangleWithoutTrees) {
  const DiGraph g = triangle();
  const LpSolution lp = solve_lp(build_lp(g, 3));
  RoundingParams p;
  p.alpha = 1.0;
  RoundingOverrides o;
  o.tree_roots = std::vector<VertexId>{};
  const SpannerResult r = build_spanner(g, lp, p, o);
  EXPECT_EQ(r.e_h.ids(), (std::vector<EdgeId>{1, 2}));
  EXPECT_TRUE(r.tree_edges.empty());
  EXPECT_TRUE(r.feasible);
}

TEST(BuildSpanner, ReportsViolation) {
  const DiGraph g = cycle(5);
  const LpSolution lp = solve_lp(build_lp(g, 3));
  RoundingParams p;
  RoundingOverrides o;
  o.rounded_edges = EdgeSet(5, true);
  o.rounded_edges->erase(2);
  o.tree_roots = std::vector<VertexId>{};
  const SpannerResult r = build_spanner(g, lp, p, o);
  EXPECT_FALSE(r.feasible);
  ASSERT_TRUE(r.violation);
  EXPECT_EQ(r.violation->demand, 2u);
}

TEST(BuildSpanner, RejectsBadParameters) {
  const DiGraph g = cycle(4);
  const LpSolution lp = solve_lp(build_lp(g, 3));
  RoundingParams p;
  p.alpha = 0.0;
  EXPECT_THROW(build_spanner(g, lp, p), Error);
  p.alpha.reset();
  p.mode = RoundingMode::kUnit;
  const DiGraph weighted = DiGraph::build(2, {{0, 1, 2}});
  EXPECT_THROW(build_spanner(weighted, solve_lp(build_lp(weighted, 3)), p), Error);
}

TEST(BuildSpanner, ComponentsUseTheirOwnSize) {
  // A 3-cycle, a 5-cycle and an isolated vertex.
  std::vector<Edge> edges{{0, 1, 1}, {1, 2, 1}, {2, 0, 1}};
  for (VertexId v = 3; v < 8; ++v) edges.push_back({v, v == 7 ? 3u : v + 1, 1});
  const DiGraph g = DiGraph::build(9, edges);
  RoundingParams p;
  const auto plans = plan_components(g, p);
  ASSERT_EQ(plans.size(), 2u);
  EXPECT_EQ(plans[0].vertices.size(), 3u);
  EXPECT_EQ(plans[0].alpha, select_alpha(RoundingMode::kGeneral, 3, 3));
  EXPECT_EQ(plans[1].alpha, select_alpha(RoundingMode::kGeneral, 5, 3));

  std::vector<double> x(g.num_edges(), 0.01);
  const auto probs = edge_inclusion_probabilities(g, x, p);
  EXPECT_EQ(probs[0], edge_inclusion_probability(plans[0].alpha, 0.01, 3));
  EXPECT_EQ(probs[5], edge_inclusion_probability(plans[1].alpha, 0.01, 5));
}

class RandomSpanner : public ::testing::TestWithParam<int> {};

TEST_P(RandomSpanner, Invariants) {
  const InstanceSpec spec{.family = Family::kErdosRenyi,
                          .n = 8 + static_cast<std::size_t>(GetParam() % 10),
                          .p = 0.25,
                          .max_length = GetParam() % 2 ? 1 : 4,
                          .seed = static_cast<std::uint64_t>(GetParam())};
  const DiGraph g = generate_instance(spec);
  const LpSolution lp = solve_lp(build_lp(g, 3));
  RoundingParams p;
  p.seed = 1234 + GetParam();
  // Small alpha so both phases are genuinely random.
  p.alpha = 0.3;
  const SpannerResult a = build_spanner(g, lp, p);
  const SpannerResult b = build_spanner(g, lp, p);
  EXPECT_EQ(a.e_h, b.e_h);
  EXPECT_EQ(a.tree_roots, b.tree_roots);
  EXPECT_EQ(a.rounded_edges, b.rounded_edges);

  EXPECT_EQ(a.e_h.universe(), g.num_edges());
  EdgeSet uni = a.rounded_edges;
  uni.merge(a.tree_edges);
  EXPECT_EQ(uni, a.e_h);
  EXPECT_EQ(a.tree_edges, tree_edges_for_roots(g, a.tree_roots));
  EXPECT_LE(a.tree_edges.size(), 2 * a.tree_roots.size() * (g.num_vertices() - 1));
  EXPECT_EQ(a.feasible, is_k_spanner(g, a.e_h, 3).ok);

  const auto probs = edge_inclusion_probabilities(g, lp.x, p);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    EXPECT_EQ(probs[e], std::min(0.3 * lp.x[e] * std::sqrt(static_cast<double>(g.num_vertices())), 1.0));
    if (probs[e] == 0.0) EXPECT_FALSE(a.rounded_edges.contains(e));
    if (probs[e] == 1.0) EXPECT_TRUE(a.rounded_edges.contains(e));
  }
}

TEST(CostReport, Examples) {
  const DiGraph empty = DiGraph::build(3, {});
  const SpannerResult r0 = build_spanner(empty, solve_lp(build_lp(empty, 3)), {});
  const CostReport c0 = expected_cost_report(empty, {}, r0);
  EXPECT_EQ(c0.e_h, 0u);
  EXPECT_EQ(c0.expected_rounded, 0.0);
  EXPECT_EQ(c0.tree_edge_bound, 0.0);

  const DiGraph g = cycle(7);
  const LpSolution lp = solve_lp(build_lp(g, 3));
  RoundingParams p;
  p.alpha = 1.0;
  const CostReport c = expected_cost_report(g, lp.x, build_spanner(g, lp, p));
  EXPECT_NEAR(c.expected_rounded, 7, 1e-9);
  EXPECT_NEAR(c.expected_rounded_unclamped, 7 * std::sqrt(7.0), 1e-9);
  EXPECT_NEAR(c.rounded_variance, 0, 1e-9);
  EXPECT_NEAR(c.tree_edge_bound, 2 * std::sqrt(7.0) * 6, 1e-9);
}

TEST(CostReport, MonteCarloMeanWithinFiveSigma) {
  const DiGraph g = generate_instance(parse_instance_spec("er:n=30,p=0.1,seed=5"));
  const LpSolution lp = solve_lp(build_lp(g, 3));
  RoundingParams p;
  p.alpha = 0.05;
  double sum = 0;
  CostReport first;
  for (std::uint64_t t = 0; t < 200; ++t) {
    p.seed = trial_seed(8, t);
    const SpannerResult r = build_spanner(g, lp, p);
    const CostReport c = expected_cost_report(g, lp.x, r);
    if (t == 0) first = c;
    sum += static_cast<double>(c.rounded_edges);
  }
  ASSERT_GT(first.rounded_variance, 0.0);
  const double sd_of_mean = std::sqrt(first.rounded_variance / 200);
  EXPECT_LE(std::abs(sum / 200 - first.expected_rounded), 5 * sd_of_mean);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomSpanner, ::testing::Range(0, 30));

}  // namespace
}  // namespace dspanner
