#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dspanner/graph.hpp"

namespace dspanner {

struct PathCaps {
  std::size_t max_paths = 100'000;
  /// Defaults to n - 1 (every simple path fits).
  std::optional<std::size_t> max_hops;
  /// Test-only relaxation: enumerate hop-bounded walks instead of simple
  /// paths. Requires max_hops.
  bool simple_only = true;
};

/// The stretch-bounded path family of one demand edge (u, v): every directed
/// u -> v path of total length at most k * dist(u, v).
struct DemandPaths {
  EdgeId demand = 0;
  VertexId source = 0;
  VertexId target = 0;
  Length budget = 0.0;
  std::vector<std::vector<VertexId>> paths;     // vertex sequences
  std::vector<std::vector<EdgeId>> path_edges;  // same paths as edge sequences
  std::vector<VertexId> covered;                // ascending
  bool complete = true;  // false when the hop cap cut off a budget-feasible extension
};

/// k * dist(u, v) for demand (u, v).
Length stretch_budget(const DiGraph& g, int k, EdgeId demand);

/// Depth-first enumeration pruned by the distance-to-target lower bound.
/// Paths are emitted in lexicographic order of their edge-id sequences.
/// Throws PathExplosion once more than caps.max_paths paths qualify.
DemandPaths enumerate_demand_paths(const DiGraph& g, int k, EdgeId demand,
                                   const PathCaps& caps = {});

/// Union of vertices over the enumerated paths. Throws IncompleteEnumeration
/// when a cap was hit and ContractViolation for an empty family.
std::vector<VertexId> covered_vertices(const DemandPaths& dp);

}  // namespace dspanner
