#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dspanner/graph.hpp"

namespace dspanner {

struct SpannerViolation {
  EdgeId demand = 0;
  Length dist_h = kUnreachable;
  Length dist_g = 0.0;
};

struct SpannerCheck {
  bool ok = true;
  std::optional<SpannerViolation> violation;  // lowest violating demand edge
};

/// For every edge (u,v) of g: dist_H(u,v) <= k * dist_G(u,v).
SpannerCheck is_k_spanner(const DiGraph& g, const EdgeSet& h, int k);

/// The same condition over all ordered vertex pairs.
bool is_k_spanner_all_pairs(const DiGraph& g, const EdgeSet& h, int k);

/// Whether the per-edge and all-pairs checks agree (expected always).
bool edge_check_equals_allpairs_check(const DiGraph& g, const EdgeSet& h, int k);

/// Edges whose demand has no other path within budget, i.e. the edge is in
/// every k-spanner.
EdgeSet mandatory_edges(const DiGraph& g, int k);

struct OracleCaps {
  std::size_t max_free_edges = 30;
};

struct OptResult {
  std::size_t opt = 0;
  EdgeSet witness;
  std::size_t mandatory = 0;
  std::size_t free_edges = 0;
  std::size_t nodes = 0;  // branch-and-bound nodes visited
};

/// Exact minimum k-spanner by branch-and-bound over non-mandatory edges.
/// `lp_hint` (per-edge LP values, optional) orders branching: highest value
/// first, include-branch first. Throws TooLarge above caps.max_free_edges.
OptResult brute_force_opt(const DiGraph& g, int k, const OracleCaps& caps = {},
                          std::span<const double> lp_hint = {});

/*
  Arborescence T of a graph rooted at `root`, with its tree metric potentials
  L_T(w) = d_T(root, w) and the shortcut set
  S_T = {(a,b) : L_T(b) > L_T(a) + len(a,b)}, compared exactly.

  A rooted subtree need not contain every vertex; vertices outside it have
  L_T = infinity, so every edge leaving the tree is in S_T and no edge out of
  an absent vertex is.
*/
enum class ArborescenceScope {
  kSpanning,       // every vertex is in the tree
  kRootedSubtree,  // any out-tree containing the root
};

struct Arborescence {
  VertexId root = 0;
  std::vector<std::optional<EdgeId>> parent_edge;
  std::vector<Length> potentials;
  std::vector<EdgeId> cut_set;  // ascending

  Length tree_distance(VertexId w) const { return potentials[w]; }
  bool contains(VertexId w) const { return potentials[w] != kUnreachable; }
};

/// Fills potentials and cut_set from root and parent_edge.
void materialize_arborescence(const DiGraph& g, Arborescence& t);

struct ArborescenceCaps {
  std::size_t max_arborescences = 1'000'000;
};

/// Visits every arborescence of g rooted at `root` in the given scope exactly
/// once. The visitor may return false to stop early. Returns the number
/// visited. Throws NotReachable when scope is kSpanning and some vertex is
/// unreachable from root, and ExplosionCap once the count would pass the cap.
std::size_t for_each_arborescence(const DiGraph& g, VertexId root,
                                  const std::function<bool(const Arborescence&)>& visit,
                                  const ArborescenceCaps& caps = {},
                                  ArborescenceScope scope = ArborescenceScope::kSpanning);

std::vector<Arborescence> enumerate_arborescences(const DiGraph& g, VertexId root,
                                                  const ArborescenceCaps& caps = {},
                                                  ArborescenceScope scope = ArborescenceScope::kSpanning);

struct Claim1Report {
  bool path_side = false;  // H contains a u -> v path of length <= K
  bool cut_side = false;   // every arborescence with d_T(u,v) > K has S_T meeting H
  std::size_t arborescences = 0;
  std::size_t long_arborescences = 0;

  bool agree() const { return path_side == cut_side; }
};

/// Evaluates both sides of the path / arborescence-cut equivalence on g with
/// subgraph h. The path side uses Dijkstra on h; the cut side enumerates all
/// arborescences rooted at u in `scope`. The equivalence holds for rooted
/// subtrees; restricted to spanning trees it can fail when h does not reach
/// every vertex.
Claim1Report check_claim1(const DiGraph& g, const EdgeSet& h, VertexId u, VertexId v, Length bound,
                          const ArborescenceCaps& caps = {},
                          ArborescenceScope scope = ArborescenceScope::kRootedSubtree);

struct Claim2Report {
  bool holds = true;
  Length min_cut_mass = kUnreachable;  // over arborescences with d_T(u,v) > bound
  std::size_t arborescences = 0;
  std::size_t long_arborescences = 0;
};

/// For every arborescence rooted at u in `scope` with d_T(u,v) > bound checks
/// sum_{e in S_T} x_e >= 1 - tolerance. `x` is indexed by the edges of g.
Claim2Report check_claim2(std::span<const double> x, const DiGraph& g, VertexId u, VertexId v,
                          Length bound, double tolerance = 1e-6, const ArborescenceCaps& caps = {},
                          ArborescenceScope scope = ArborescenceScope::kRootedSubtree);

}  // namespace dspanner
