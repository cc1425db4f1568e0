#include "dspanner/paths.hpp"

#include <algorithm>
#include <string>

#include "dspanner/error.hpp"

namespace dspanner {

namespace {

void check_demand(const DiGraph& g, int k, EdgeId demand) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "stretch k must be >= 1");
  if (demand >= g.num_edges()) {
    throw Error(ErrorCode::kIndexOutOfRange, "demand edge " + std::to_string(demand) + " out of range");
  }
}

class PathEnumerator {
 public:
  PathEnumerator(const DiGraph& g, const DistanceMap& to_target, DemandPaths& out,
                 std::size_t max_paths, std::size_t max_hops, bool simple_only)
      : g_(g),
        to_target_(to_target),
        out_(out),
        max_paths_(max_paths),
        max_hops_(max_hops),
        simple_only_(simple_only),
        on_path_(g.num_vertices(), false) {}

  void run() {
    vertices_.push_back(out_.source);
    on_path_[out_.source] = true;
    extend(out_.source, 0.0);
  }

 private:
  void extend(VertexId at, Length length) {
    if (at == out_.target) {
      emit();
      // Continuing past the target is only meaningful for walks.
      if (simple_only_) return;
    }
    for (EdgeId e : g_.out_edges(at)) {
      const Edge& edge = g_.edge(e);
      const VertexId w = edge.head;
      if (simple_only_ && on_path_[w]) continue;
      const Length next = length + edge.length;
      if (next > out_.budget) continue;
      if (to_target_.dist[w] == kUnreachable || next + to_target_.dist[w] > out_.budget) continue;
      if (edges_.size() == max_hops_) {
        out_.complete = false;
        continue;
      }
      edges_.push_back(e);
      vertices_.push_back(w);
      const bool was_on = on_path_[w];
      on_path_[w] = true;
      extend(w, next);
      on_path_[w] = was_on;
      vertices_.pop_back();
      edges_.pop_back();
    }
  }

  void emit() {
    if (out_.paths.size() == max_paths_) {
      throw Error(ErrorCode::kPathExplosion,
                  "demand " + std::to_string(out_.demand) + " has more than " +
                      std::to_string(max_paths_) + " budget-feasible paths");
    }
    out_.paths.push_back(vertices_);
    out_.path_edges.push_back(edges_);
  }

  const DiGraph& g_;
  const DistanceMap& to_target_;
  DemandPaths& out_;
  std::size_t max_paths_;
  std::size_t max_hops_;
  bool simple_only_;
  std::vector<bool> on_path_;
  std::vector<VertexId> vertices_;
  std::vector<EdgeId> edges_;
};

}  // namespace

Length stretch_budget(const DiGraph& g, int k, EdgeId demand) {
  check_demand(g, k, demand);
  const Edge& e = g.edge(demand);
  const DistanceMap dm = shortest_paths(g, e.tail, Direction::kOutward);
  return static_cast<Length>(k) * dm.dist[e.head];
}

DemandPaths enumerate_demand_paths(const DiGraph& g, int k, EdgeId demand, const PathCaps& caps) {
  check_demand(g, k, demand);
  if (caps.max_paths == 0 || (caps.max_hops && *caps.max_hops == 0)) {
    throw Error(ErrorCode::kInvalidArgument, "path caps must be positive");
  }
  if (!caps.simple_only && !caps.max_hops) {
    throw Error(ErrorCode::kInvalidArgument, "walk enumeration requires an explicit max_hops");
  }
  const Edge& e = g.edge(demand);
  DemandPaths out;
  out.demand = demand;
  out.source = e.tail;
  out.target = e.head;
  out.budget = stretch_budget(g, k, demand);

  const std::size_t max_hops = caps.max_hops.value_or(g.num_vertices() - 1);
  const DistanceMap to_target = shortest_paths(g, e.head, Direction::kInward);
  PathEnumerator(g, to_target, out, caps.max_paths, max_hops, caps.simple_only).run();

  std::vector<bool> seen(g.num_vertices(), false);
  for (const auto& p : out.paths) {
    for (VertexId v : p) seen[v] = true;
  }
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (seen[v]) out.covered.push_back(v);
  }
  return out;
}

std::vector<VertexId> covered_vertices(const DemandPaths& dp) {
  if (!dp.complete) {
    throw Error(ErrorCode::kIncompleteEnumeration,
                "demand " + std::to_string(dp.demand) + ": path enumeration hit the hop cap");
  }
  if (dp.paths.empty()) {
    throw Error(ErrorCode::kContractViolation,
                "demand " + std::to_string(dp.demand) + ": empty path family");
  }
  std::vector<VertexId> out;
  for (const auto& p : dp.paths) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace dspanner
