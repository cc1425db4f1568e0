#include "dspanner/verify.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "dspanner/error.hpp"

namespace dspanner {

namespace {

void check_k(int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "stretch k must be >= 1");
}

void check_universe(const DiGraph& g, const EdgeSet& h) {
  if (h.universe() != g.num_edges()) {
    throw Error(ErrorCode::kInvalidArgument, "edge set does not belong to this graph");
  }
}

// Demands grouped by tail so each source needs one Dijkstra per graph.
std::vector<std::vector<EdgeId>> demands_by_tail(const DiGraph& g) {
  std::vector<std::vector<EdgeId>> out(g.num_vertices());
  for (EdgeId e = 0; e < g.num_edges(); ++e) out[g.edge(e).tail].push_back(e);
  return out;
}

// Spanner check with G's distances precomputed per tail.
class SpannerChecker {
 public:
  SpannerChecker(const DiGraph& g, int k) : g_(g), k_(k), by_tail_(demands_by_tail(g)) {
    budget_.resize(g.num_edges());
    for (VertexId a = 0; a < g.num_vertices(); ++a) {
      if (by_tail_[a].empty()) continue;
      const DistanceMap dm = shortest_paths(g, a, Direction::kOutward);
      for (EdgeId e : by_tail_[a]) budget_[e] = dm.dist[g.edge(e).head];
    }
  }

  Length dist_g(EdgeId e) const { return budget_[e]; }

  SpannerCheck check(const EdgeSet& h) const {
    SpannerCheck out;
    for (VertexId a = 0; a < g_.num_vertices(); ++a) {
      if (by_tail_[a].empty()) continue;
      const DistanceMap dm = shortest_paths(g_, a, Direction::kOutward, &h);
      for (EdgeId e : by_tail_[a]) {
        const Length dh = dm.dist[g_.edge(e).head];
        if (!(dh <= static_cast<Length>(k_) * budget_[e])) {
          if (!out.violation || e < out.violation->demand) out.violation = SpannerViolation{e, dh, budget_[e]};
          out.ok = false;
        }
      }
    }
    return out;
  }

  bool feasible(const EdgeSet& h) const {
    for (VertexId a = 0; a < g_.num_vertices(); ++a) {
      if (by_tail_[a].empty()) continue;
      const DistanceMap dm = shortest_paths(g_, a, Direction::kOutward, &h);
      for (EdgeId e : by_tail_[a]) {
        if (!(dm.dist[g_.edge(e).head] <= static_cast<Length>(k_) * budget_[e])) return false;
      }
    }
    return true;
  }

 private:
  const DiGraph& g_;
  int k_;
  std::vector<std::vector<EdgeId>> by_tail_;
  std::vector<Length> budget_;
};

class BranchAndBound {
 public:
  BranchAndBound(const DiGraph& g, const SpannerChecker& checker, std::vector<EdgeId> order,
                 EdgeSet mandatory)
      : checker_(checker), order_(std::move(order)), current_(std::move(mandatory)) {
    best_ = EdgeSet(g.num_edges(), true);
    upper_ = current_;
    for (EdgeId e : order_) upper_.insert(e);
  }

  void run() { branch(0); }

  const EdgeSet& best() const { return best_; }
  std::size_t nodes() const { return nodes_; }

 private:
  void branch(std::size_t pos) {
    ++nodes_;
    if (checker_.feasible(current_)) {
      if (current_.size() < best_.size()) best_ = current_;
      return;
    }
    // Infeasible now, so at least one more edge is needed.
    if (current_.size() + 1 >= best_.size() || pos == order_.size()) return;
    if (!checker_.feasible(upper_)) return;

    const EdgeId e = order_[pos];
    current_.insert(e);
    branch(pos + 1);
    current_.erase(e);

    upper_.erase(e);
    branch(pos + 1);
    upper_.insert(e);
  }

  const SpannerChecker& checker_;
  std::vector<EdgeId> order_;
  EdgeSet current_;
  EdgeSet upper_;
  EdgeSet best_;
  std::size_t nodes_ = 0;
};

}  // namespace

SpannerCheck is_k_spanner(const DiGraph& g, const EdgeSet& h, int k) {
  check_k(k);
  check_universe(g, h);
  return SpannerChecker(g, k).check(h);
}

bool is_k_spanner_all_pairs(const DiGraph& g, const EdgeSet& h, int k) {
  check_k(k);
  check_universe(g, h);
  const DistanceMatrix dg = distance_matrix(g);
  const DistanceMatrix dh = distance_matrix(g, &h);
  for (VertexId a = 0; a < g.num_vertices(); ++a) {
    for (VertexId b = 0; b < g.num_vertices(); ++b) {
      if (dg.at(a, b) == kUnreachable) continue;
      if (!(dh.at(a, b) <= static_cast<Length>(k) * dg.at(a, b))) return false;
    }
  }
  return true;
}

bool edge_check_equals_allpairs_check(const DiGraph& g, const EdgeSet& h, int k) {
  return is_k_spanner(g, h, k).ok == is_k_spanner_all_pairs(g, h, k);
}

EdgeSet mandatory_edges(const DiGraph& g, int k) {
  check_k(k);
  const SpannerChecker checker(g, k);
  EdgeSet out(g.num_edges());
  EdgeSet without(g.num_edges(), true);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    const Length budget = static_cast<Length>(k) * checker.dist_g(e);
    if (!(edge.length <= budget)) continue;
    without.erase(e);
    const DistanceMap dm = shortest_paths(g, edge.tail, Direction::kOutward, &without);
    without.insert(e);
    if (!(dm.dist[edge.head] <= budget)) out.insert(e);
  }
  return out;
}

OptResult brute_force_opt(const DiGraph& g, int k, const OracleCaps& caps,
                          std::span<const double> lp_hint) {
  check_k(k);
  if (!lp_hint.empty() && lp_hint.size() != g.num_edges()) {
    throw Error(ErrorCode::kInvalidArgument, "lp_hint size differs from edge count");
  }
  const EdgeSet mandatory = mandatory_edges(g, k);
  std::vector<EdgeId> free;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!mandatory.contains(e)) free.push_back(e);
  }
  if (free.size() > caps.max_free_edges) {
    throw Error(ErrorCode::kTooLarge, std::to_string(free.size()) + " free edges exceed the cap of " +
                                          std::to_string(caps.max_free_edges));
  }
  if (!lp_hint.empty()) {
    std::stable_sort(free.begin(), free.end(),
                     [&](EdgeId a, EdgeId b) { return lp_hint[a] > lp_hint[b]; });
  }

  const SpannerChecker checker(g, k);
  BranchAndBound search(g, checker, free, mandatory);
  search.run();

  OptResult out;
  out.witness = search.best();
  out.opt = out.witness.size();
  out.mandatory = mandatory.size();
  out.free_edges = free.size();
  out.nodes = search.nodes();
  return out;
}

void materialize_arborescence(const DiGraph& g, Arborescence& t) {
  const std::size_t n = g.num_vertices();
  t.potentials.assign(n, kUnreachable);
  t.potentials[t.root] = 0.0;
  // Resolve potentials along parent chains; the chains are acyclic.
  std::vector<VertexId> chain;
  for (VertexId w = 0; w < n; ++w) {
    VertexId cur = w;
    chain.clear();
    while (t.potentials[cur] == kUnreachable) {
      if (!t.parent_edge[cur]) break;
      chain.push_back(cur);
      cur = g.edge(*t.parent_edge[cur]).tail;
      if (chain.size() > n) throw Error(ErrorCode::kContractViolation, "parent pointers contain a cycle");
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const Edge& pe = g.edge(*t.parent_edge[*it]);
      t.potentials[*it] = t.potentials[pe.tail] + pe.length;
    }
  }
  t.cut_set.clear();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    if (t.potentials[edge.head] > t.potentials[edge.tail] + edge.length) t.cut_set.push_back(e);
  }
}

std::size_t for_each_arborescence(const DiGraph& g, VertexId root,
                                  const std::function<bool(const Arborescence&)>& visit,
                                  const ArborescenceCaps& caps, ArborescenceScope scope) {
  const std::size_t n = g.num_vertices();
  if (root >= n) throw Error(ErrorCode::kIndexOutOfRange, "arborescence root out of range");
  const bool spanning = scope == ArborescenceScope::kSpanning;
  const DistanceMap reach = shortest_paths(g, root, Direction::kOutward);
  if (spanning) {
    for (VertexId w = 0; w < n; ++w) {
      if (!reach.reachable(w)) {
        throw Error(ErrorCode::kNotReachable,
                    "vertex " + std::to_string(w) + " is not reachable from root " + std::to_string(root));
      }
    }
  }

  // Decide vertices in order of distance from the root so that parents are
  // usually decided first. Unreachable vertices can only be absent.
  std::vector<VertexId> order;
  for (VertexId w = 0; w < n; ++w) {
    if (w != root && reach.reachable(w)) order.push_back(w);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](VertexId a, VertexId b) { return reach.dist[a] < reach.dist[b]; });

  enum : char { kUndecided, kPresent, kAbsent };
  std::vector<char> state(n, kAbsent);
  for (VertexId w : order) state[w] = kUndecided;
  state[root] = kPresent;

  Arborescence t;
  t.root = root;
  t.parent_edge.assign(n, std::nullopt);
  std::size_t count = 0;
  bool stopped = false;

  auto creates_cycle = [&](VertexId w, VertexId parent) {
    VertexId cur = parent;
    while (cur != root) {
      if (cur == w) return true;
      if (!t.parent_edge[cur]) return false;
      cur = g.edge(*t.parent_edge[cur]).tail;
    }
    return false;
  };
  // Every present vertex must hang off the root through present vertices.
  auto rooted = [&] {
    for (VertexId w : order) {
      if (state[w] != kPresent) continue;
      VertexId cur = g.edge(*t.parent_edge[w]).tail;
      while (cur != root) {
        if (state[cur] != kPresent) return false;
        cur = g.edge(*t.parent_edge[cur]).tail;
      }
    }
    return true;
  };

  std::function<void(std::size_t)> assign = [&](std::size_t i) {
    if (stopped) return;
    if (i == order.size()) {
      if (!spanning && !rooted()) return;
      if (++count > caps.max_arborescences) {
        throw Error(ErrorCode::kExplosionCap, "more than " + std::to_string(caps.max_arborescences) +
                                                  " arborescences");
      }
      materialize_arborescence(g, t);
      if (!visit(t)) stopped = true;
      return;
    }
    const VertexId w = order[i];
    for (EdgeId e : g.in_edges(w)) {
      const VertexId parent = g.edge(e).tail;
      if (state[parent] == kAbsent || creates_cycle(w, parent)) continue;
      t.parent_edge[w] = e;
      state[w] = kPresent;
      assign(i + 1);
      t.parent_edge[w] = std::nullopt;
      state[w] = kUndecided;
      if (stopped) return;
    }
    if (!spanning) {
      state[w] = kAbsent;
      assign(i + 1);
      state[w] = kUndecided;
    }
  };
  assign(0);
  return count;
}

std::vector<Arborescence> enumerate_arborescences(const DiGraph& g, VertexId root,
                                                  const ArborescenceCaps& caps, ArborescenceScope scope) {
  std::vector<Arborescence> out;
  for_each_arborescence(
      g, root,
      [&](const Arborescence& t) {
        out.push_back(t);
        return true;
      },
      caps, scope);
  return out;
}

Claim1Report check_claim1(const DiGraph& g, const EdgeSet& h, VertexId u, VertexId v, Length bound,
                          const ArborescenceCaps& caps, ArborescenceScope scope) {
  check_universe(g, h);
  Claim1Report out;
  const DistanceMap dh = shortest_paths(g, u, Direction::kOutward, &h);
  out.path_side = dh.dist[v] <= bound;

  out.cut_side = true;
  out.arborescences = for_each_arborescence(
      g, u,
      [&](const Arborescence& t) {
        if (!(t.tree_distance(v) > bound)) return true;
        ++out.long_arborescences;
        const bool hit = std::any_of(t.cut_set.begin(), t.cut_set.end(),
                                     [&](EdgeId e) { return h.contains(e); });
        if (!hit) out.cut_side = false;
        return true;
      },
      caps, scope);
  return out;
}

Claim2Report check_claim2(std::span<const double> x, const DiGraph& g, VertexId u, VertexId v,
                          Length bound, double tolerance, const ArborescenceCaps& caps,
                          ArborescenceScope scope) {
  if (x.size() != g.num_edges()) {
    throw Error(ErrorCode::kInvalidArgument, "x has the wrong number of entries");
  }
  Claim2Report out;
  out.arborescences = for_each_arborescence(
      g, u,
      [&](const Arborescence& t) {
        if (!(t.tree_distance(v) > bound)) return true;
        ++out.long_arborescences;
        double mass = 0.0;
        for (EdgeId e : t.cut_set) mass += x[e];
        out.min_cut_mass = std::min(out.min_cut_mass, mass);
        if (mass < 1.0 - tolerance) out.holds = false;
        return true;
      },
      caps, scope);
  return out;
}

}  // namespace dspanner
