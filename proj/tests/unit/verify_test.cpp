#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dspanner/error.hpp"
#include "dspanner/generate.hpp"
#include "dspanner/lp.hpp"
#include "dspanner/pipeline.hpp"
#include "dspanner/verify.hpp"
#include "oracles.hpp"

namespace dspanner {
namespace {

DiGraph triangle() { return DiGraph::build(3, {{0, 1, 1}, {0, 2, 1}, {2, 1, 1}}); }

DiGraph cycle(std::size_t n) { return generate_instance({.family = Family::kCycle, .n = n}); }

std::vector<bool> to_bits(const EdgeSet& s) {
  std::vector<bool> out(s.universe());
  for (EdgeId e : s.ids()) out[e] = true;
  return out;
}

EdgeSet from_bits(const std::vector<bool>& bits) {
  EdgeSet out(bits.size());
  for (EdgeId e = 0; e < bits.size(); ++e) {
    if (bits[e]) out.insert(e);
  }
  return out;
}

TEST(IsKSpanner, Examples) {
  const DiGraph c = cycle(6);
  EXPECT_TRUE(is_k_spanner(c, EdgeSet(6, true), 3).ok);
  EdgeSet missing(6, true);
  missing.erase(4);
  const SpannerCheck bad = is_k_spanner(c, missing, 3);
  EXPECT_FALSE(bad.ok);
  ASSERT_TRUE(bad.violation);
  EXPECT_EQ(bad.violation->demand, 4u);
  EXPECT_EQ(bad.violation->dist_g, 1);
  EXPECT_EQ(bad.violation->dist_h, kUnreachable);

  EdgeSet detour(3);
  detour.insert(1);
  detour.insert(2);
  EXPECT_TRUE(is_k_spanner(triangle(), detour, 3).ok);
  EXPECT_FALSE(is_k_spanner(triangle(), detour, 1).ok);
}

TEST(IsKSpanner, RejectsForeignSets) {
  EXPECT_THROW(is_k_spanner(triangle(), EdgeSet(2), 3), Error);
  EXPECT_THROW(is_k_spanner(triangle(), EdgeSet(3), 0), Error);
}

TEST(EdgeCheckReduction, Examples) {
  const DiGraph g = generate_instance(parse_instance_spec("er:n=8,p=0.3,seed=2"));
  EXPECT_TRUE(is_k_spanner_all_pairs(g, EdgeSet(g.num_edges(), true), 2));
  EXPECT_FALSE(is_k_spanner(g, EdgeSet(g.num_edges()), 5).ok);
  EXPECT_FALSE(is_k_spanner_all_pairs(g, EdgeSet(g.num_edges()), 5));
  EXPECT_TRUE(edge_check_equals_allpairs_check(g, EdgeSet(g.num_edges()), 5));
}

TEST(MandatoryEdges, CycleAndTriangle) {
  EXPECT_EQ(mandatory_edges(cycle(5), 3).size(), 5u);
  EXPECT_EQ(mandatory_edges(triangle(), 3).ids(), (std::vector<EdgeId>{1, 2}));
  EXPECT_EQ(mandatory_edges(triangle(), 1).ids(), (std::vector<EdgeId>{0, 1, 2}));
}

TEST(BruteForceOpt, Examples) {
  EXPECT_EQ(brute_force_opt(cycle(6), 3).opt, 6u);
  const OptResult tri = brute_force_opt(triangle(), 3);
  EXPECT_EQ(tri.opt, 2u);
  EXPECT_EQ(tri.witness.ids(), (std::vector<EdgeId>{1, 2}));
  EXPECT_EQ(brute_force_opt(DiGraph::build(2, {{0, 1, 1}}), 3).opt, 1u);
}

TEST(BruteForceOpt, FreeEdgeCap) {
  OracleCaps caps;
  caps.max_free_edges = 0;
  try {
    brute_force_opt(triangle(), 3, caps);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
  EXPECT_EQ(brute_force_opt(cycle(4), 3, caps).opt, 4u);
}

TEST(Arborescences, SpanningCounts) {
  const DiGraph path = DiGraph::build(3, {{0, 2, 1}, {2, 1, 1}});
  EXPECT_EQ(enumerate_arborescences(path, 0).size(), 1u);
  EXPECT_EQ(enumerate_arborescences(triangle(), 0).size(), 2u);
  // Diamond: two length-2 routes u->a->v and u->b->v.
  const DiGraph diamond = DiGraph::build(4, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}});
  EXPECT_EQ(enumerate_arborescences(diamond, 0).size(),
            testing::count_arborescences_by_parent_vectors(diamond, 0, true));
  EXPECT_EQ(enumerate_arborescences(diamond, 0).size(), 2u);
}

TEST(Arborescences, RootedSubtreeCounts) {
  // Rooted subtrees of the triangle at u: {u}, {u,w}, {u,v} via u->v,
  // {u,w,v} via u->v or via w->v.
  EXPECT_EQ(enumerate_arborescences(triangle(), 0, {}, ArborescenceScope::kRootedSubtree).size(), 5u);
}

TEST(Arborescences, PotentialsAndCutSet) {
  const auto trees = enumerate_arborescences(triangle(), 0);
  for (const Arborescence& t : trees) {
    EXPECT_EQ(t.tree_distance(0), 0);
    EXPECT_EQ(t.tree_distance(2), 1);
    if (*t.parent_edge[1] == 0) {
      EXPECT_EQ(t.tree_distance(1), 1);
      EXPECT_TRUE(t.cut_set.empty());
    } else {
      EXPECT_EQ(t.tree_distance(1), 2);
      EXPECT_EQ(t.cut_set, (std::vector<EdgeId>{0}));
    }
  }
}

TEST(Arborescences, AbsentVerticesHaveInfinitePotential) {
  const auto trees = enumerate_arborescences(triangle(), 0, {}, ArborescenceScope::kRootedSubtree);
  const auto only_root = std::find_if(trees.begin(), trees.end(), [](const Arborescence& t) {
    return !t.contains(1) && !t.contains(2);
  });
  ASSERT_NE(only_root, trees.end());
  EXPECT_EQ(only_root->cut_set, (std::vector<EdgeId>{0, 1}));
}

TEST(Arborescences, Errors) {
  const DiGraph g = DiGraph::build(3, {{0, 1, 1}});
  try {
    enumerate_arborescences(g, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotReachable);
  }
  EXPECT_EQ(enumerate_arborescences(g, 0, {}, ArborescenceScope::kRootedSubtree).size(), 2u);
  ArborescenceCaps caps;
  caps.max_arborescences = 1;
  try {
    enumerate_arborescences(triangle(), 0, caps);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kExplosionCap);
  }
  EXPECT_THROW(enumerate_arborescences(g, 3), Error);
}

TEST(Arborescences, VisitorCanStop) {
  std::size_t seen = 0;
  for_each_arborescence(triangle(), 0, [&](const Arborescence&) { return ++seen < 1; });
  EXPECT_EQ(seen, 1u);
}

// u=0, a=1, v=2; edges u->a (1), a->v (1), u->v (3); H' = {a->v}; K = 2.
TEST(PathCutEquivalence, SpanningReadingFailsOnThisInstance) {
  const DiGraph g = DiGraph::build(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 3}});
  EdgeSet h(3);
  h.insert(1);
  const Claim1Report spanning = check_claim1(g, h, 0, 2, 2.0, {}, ArborescenceScope::kSpanning);
  EXPECT_FALSE(spanning.path_side);
  EXPECT_TRUE(spanning.cut_side);
  EXPECT_FALSE(spanning.agree());

  const Claim1Report rooted = check_claim1(g, h, 0, 2, 2.0);
  EXPECT_FALSE(rooted.path_side);
  EXPECT_FALSE(rooted.cut_side);
  EXPECT_TRUE(rooted.agree());
}

TEST(PathCutEquivalence, FullAndEmptySubgraphs) {
  const DiGraph g = triangle();
  const Claim1Report full = check_claim1(g, EdgeSet(3, true), 0, 1, 1.0);
  EXPECT_TRUE(full.path_side);
  EXPECT_TRUE(full.cut_side);
  const Claim1Report empty = check_claim1(g, EdgeSet(3), 0, 1, 3.0);
  EXPECT_FALSE(empty.path_side);
  EXPECT_FALSE(empty.cut_side);
}

TEST(CutMass, CycleAndTriangle) {
  const DiGraph c = cycle(6);
  const std::vector<double> ones(6, 1.0);
  const Claim2Report rc = check_claim2(ones, c, 0, 1, 3.0);
  EXPECT_TRUE(rc.holds);
  EXPECT_GT(rc.long_arborescences, 0u);
  EXPECT_GE(rc.min_cut_mass, 1.0);

  // Demand u->v at K = 3 * 1: no spanning arborescence is long. The subtrees
  // {u} and {u,w} leave v out and are cut by {u->v, u->w} and {u->v, w->v}.
  const std::vector<double> x{0, 1, 1};
  const Claim2Report spanning = check_claim2(x, triangle(), 0, 1, 3.0, 1e-6, {}, ArborescenceScope::kSpanning);
  EXPECT_TRUE(spanning.holds);
  EXPECT_EQ(spanning.long_arborescences, 0u);
  const Claim2Report rooted = check_claim2(x, triangle(), 0, 1, 3.0);
  EXPECT_TRUE(rooted.holds);
  EXPECT_EQ(rooted.long_arborescences, 2u);
  EXPECT_EQ(rooted.min_cut_mass, 1.0);
}

TEST(CutMass, DetectsAnInfeasibleVector) {
  // With k = 1 every triangle edge is mandatory; x_uv = 0.5 is infeasible and
  // the tree through w has S_T = {u->v}.
  const std::vector<double> x{0.5, 1, 1};
  for (ArborescenceScope scope : {ArborescenceScope::kSpanning, ArborescenceScope::kRootedSubtree}) {
    const Claim2Report r = check_claim2(x, triangle(), 0, 1, 1.0, 1e-6, {}, scope);
    EXPECT_FALSE(r.holds);
    EXPECT_EQ(r.min_cut_mass, 0.5);
  }
  EXPECT_THROW(check_claim2(std::vector<double>{1.0}, triangle(), 0, 1, 1.0), Error);
}

class RandomOracle : public ::testing::TestWithParam<int> {};

TEST_P(RandomOracle, EdgeCheckMatchesDefinitionAndAllPairs) {
  std::mt19937_64 rng(21000 + GetParam());
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 2 + rng() % 14;
    const DiGraph g = testing::random_graph(rng, n, 0.25, rep % 2 ? 1 : 5);
    const auto bits = testing::random_subset(rng, g.num_edges(), 0.7);
    const int k = 1 + static_cast<int>(rng() % 4);
    const EdgeSet h = from_bits(bits);
    const bool edge = is_k_spanner(g, h, k).ok;
    EXPECT_EQ(edge, is_k_spanner_all_pairs(g, h, k));
    EXPECT_EQ(edge, testing::spanner_by_definition(g, bits, k));
    EXPECT_TRUE(edge_check_equals_allpairs_check(g, h, k));
  }
}

TEST_P(RandomOracle, OptWitnessIsMinimal) {
  std::mt19937_64 rng(22000 + GetParam());
  const std::size_t n = 3 + GetParam() % 6;
  const DiGraph g = testing::random_graph(rng, n, 0.35, GetParam() % 2 ? 1 : 3);
  const int k = 2 + GetParam() % 3;
  const LpSolution lp = solve_lp(build_lp(g, k));
  const OptResult r = brute_force_opt(g, k, {}, lp.x);
  EXPECT_EQ(r.opt, brute_force_opt(g, k).opt);
  EXPECT_EQ(r.witness.size(), r.opt);
  EXPECT_TRUE(is_k_spanner(g, r.witness, k).ok);
  EXPECT_TRUE(mandatory_edges(g, k).is_subset_of(r.witness));
  for (EdgeId e : r.witness.ids()) {
    EdgeSet smaller = r.witness;
    smaller.erase(e);
    EXPECT_FALSE(is_k_spanner(g, smaller, k).ok);
  }
  if (g.num_edges() <= 14) EXPECT_EQ(r.opt, testing::subset_opt(g, k));
  EXPECT_LE(lp.objective_value, r.opt + 1e-7);
}

TEST_P(RandomOracle, ArborescenceCountsMatchParentVectors) {
  std::mt19937_64 rng(23000 + GetParam());
  const std::size_t n = 2 + GetParam() % 5;
  const DiGraph g = testing::random_graph(rng, n, 0.5, 2);
  for (VertexId r = 0; r < n; ++r) {
    const std::size_t rooted =
        enumerate_arborescences(g, r, {}, ArborescenceScope::kRootedSubtree).size();
    EXPECT_EQ(rooted, testing::count_arborescences_by_parent_vectors(g, r, false));
    EXPECT_LE(static_cast<double>(rooted), std::pow(static_cast<double>(n), static_cast<double>(n)));
    bool all_reachable = true;
    for (double d : shortest_paths(g, r, Direction::kOutward).dist) all_reachable &= d != kUnreachable;
    if (!all_reachable) continue;
    const auto trees = enumerate_arborescences(g, r);
    EXPECT_EQ(trees.size(), testing::count_arborescences_by_parent_vectors(g, r, true));
    for (const Arborescence& t : trees) {
      EXPECT_EQ(t.tree_distance(r), 0);
      for (VertexId w = 0; w < n; ++w) {
        if (w == r) continue;
        ASSERT_TRUE(t.parent_edge[w]);
        const Edge& pe = g.edge(*t.parent_edge[w]);
        EXPECT_EQ(t.tree_distance(w), t.tree_distance(pe.tail) + pe.length);
      }
      for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(e);
        const bool in_cut = std::binary_search(t.cut_set.begin(), t.cut_set.end(), e);
        EXPECT_EQ(in_cut, t.tree_distance(ed.head) > t.tree_distance(ed.tail) + ed.length);
      }
    }
  }
}

TEST_P(RandomOracle, ClaimsHoldOnRandomInstances) {
  std::mt19937_64 rng(24000 + GetParam());
  for (int rep = 0; rep < 10; ++rep) {
    const Claim1Instance inst = random_claim1_instance(rng, 6);
    const Claim1Report c = check_claim1(inst.graph, inst.h, inst.u, inst.v, inst.bound);
    EXPECT_TRUE(c.agree());
    // Shortest-path tree of H is never cut by H.
    const DistanceMap dh = shortest_paths(inst.graph, inst.u, Direction::kOutward, &inst.h);
    for (EdgeId e : inst.h.ids()) {
      const Edge& ed = inst.graph.edge(e);
      EXPECT_FALSE(dh.dist[ed.head] > dh.dist[ed.tail] + ed.length);
    }
  }
}

TEST_P(RandomOracle, CutMassAtTheBudget) {
  std::mt19937_64 rng(25000 + GetParam());
  const DiGraph g = testing::random_graph(rng, 3 + GetParam() % 5, 0.4, GetParam() % 2 ? 1 : 3);
  const int k = 2 + GetParam() % 2;
  const LpModel m = build_lp(g, k);
  const LpSolution lp = solve_lp(m);
  for (EdgeId d = 0; d < g.num_edges(); ++d) {
    const DemandPaths dp = enumerate_demand_paths(g, k, d);
    const InducedSubgraph sub = induced_subgraph(g, covered_vertices(dp));
    std::vector<double> x(sub.graph.num_edges());
    for (EdgeId e = 0; e < x.size(); ++e) x[e] = lp.x[sub.to_parent_edge[e]];
    const VertexId u = *sub.from_parent_vertex[g.edge(d).tail];
    const VertexId v = *sub.from_parent_vertex[g.edge(d).head];
    EXPECT_TRUE(check_claim2(x, sub.graph, u, v, dp.budget).holds);
    EXPECT_TRUE(check_claim2(x, sub.graph, u, v, dp.budget, 1e-6, {}, ArborescenceScope::kSpanning).holds);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomOracle, ::testing::Range(0, 30));

}  // namespace
}  // namespace dspanner
