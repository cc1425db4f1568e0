#include "dspanner/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_set>

#include "dspanner/error.hpp"

namespace dspanner {

namespace {

void build_csr(std::size_t n, std::span<const Edge> edges, bool by_tail,
               std::vector<std::size_t>& offsets, std::vector<EdgeId>& ids) {
  offsets.assign(n + 1, 0);
  for (const Edge& e : edges) ++offsets[(by_tail ? e.tail : e.head) + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  ids.assign(edges.size(), 0);
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (EdgeId i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    ids[cursor[by_tail ? e.tail : e.head]++] = i;
  }
}

}  // namespace

DiGraph DiGraph::build(std::size_t num_vertices, std::vector<Edge> edges) {
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges.size() * 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    const std::string where = "edge " + std::to_string(i) + " (" + std::to_string(e.tail) +
                              " -> " + std::to_string(e.head) + ")";
    if (e.tail >= num_vertices || e.head >= num_vertices) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  where + ": vertex index out of range for n = " + std::to_string(num_vertices));
    }
    if (!(e.length >= 0.0)) {
      throw Error(ErrorCode::kNegativeLength, where + ": length must be >= 0");
    }
    if (e.tail == e.head) {
      throw Error(ErrorCode::kSelfLoop, where + ": self-loops are not allowed");
    }
    const std::uint64_t key = (std::uint64_t{e.tail} << 32) | e.head;
    if (!seen.insert(key).second) {
      throw Error(ErrorCode::kDuplicateEdge, where + ": duplicate (tail, head) pair");
    }
  }

  DiGraph g;
  g.num_vertices_ = num_vertices;
  g.edges_ = std::move(edges);
  build_csr(num_vertices, g.edges_, true, g.out_offsets_, g.out_ids_);
  build_csr(num_vertices, g.edges_, false, g.in_offsets_, g.in_ids_);
  return g;
}

std::optional<EdgeId> DiGraph::find_edge(VertexId tail, VertexId head) const {
  if (tail >= num_vertices_ || head >= num_vertices_) return std::nullopt;
  for (EdgeId e : out_edges(tail)) {
    if (edges_[e].head == head) return e;
  }
  return std::nullopt;
}

bool DiGraph::all_unit_lengths() const noexcept {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.length == 1.0; });
}

EdgeSet EdgeSet::from_ids(std::size_t num_edges, std::span<const EdgeId> ids) {
  EdgeSet s(num_edges);
  for (EdgeId e : ids) {
    if (e >= num_edges) {
      throw Error(ErrorCode::kIndexOutOfRange, "edge id " + std::to_string(e) + " out of range");
    }
    s.insert(e);
  }
  return s;
}

void EdgeSet::merge(const EdgeSet& other) {
  for (EdgeId e = 0; e < other.bits_.size(); ++e) {
    if (other.bits_[e]) insert(e);
  }
}

bool EdgeSet::is_subset_of(const EdgeSet& other) const {
  for (EdgeId e = 0; e < bits_.size(); ++e) {
    if (bits_[e] && (e >= other.bits_.size() || !other.bits_[e])) return false;
  }
  return true;
}

std::vector<EdgeId> EdgeSet::ids() const {
  std::vector<EdgeId> out;
  out.reserve(count_);
  for (EdgeId e = 0; e < bits_.size(); ++e) {
    if (bits_[e]) out.push_back(e);
  }
  return out;
}

DistanceMap shortest_paths(const DiGraph& g, VertexId source, Direction direction,
                           const EdgeSet* allowed) {
  const std::size_t n = g.num_vertices();
  if (source >= n) {
    throw Error(ErrorCode::kIndexOutOfRange, "source vertex out of range");
  }
  DistanceMap out;
  out.source = source;
  out.direction = direction;
  out.dist.assign(n, kUnreachable);
  out.parent_edge.assign(n, std::nullopt);

  const bool outward = direction == Direction::kOutward;
  std::vector<bool> settled(n, false);
  using Item = std::pair<Length, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  out.dist[source] = 0.0;
  heap.emplace(0.0, source);

  while (!heap.empty()) {
    const auto [d, a] = heap.top();
    heap.pop();
    if (settled[a] || d != out.dist[a]) continue;
    settled[a] = true;
    for (EdgeId e : outward ? g.out_edges(a) : g.in_edges(a)) {
      if (allowed != nullptr && !allowed->contains(e)) continue;
      const Edge& edge = g.edge(e);
      const VertexId w = outward ? edge.head : edge.tail;
      if (settled[w]) continue;
      const Length nd = d + edge.length;
      if (nd < out.dist[w]) {
        out.dist[w] = nd;
        out.parent_edge[w] = e;
        heap.emplace(nd, w);
      } else if (nd == out.dist[w] && e < *out.parent_edge[w]) {
        out.parent_edge[w] = e;
      }
    }
  }
  return out;
}

SpTree shortest_path_tree(const DiGraph& g, VertexId root, Direction orientation) {
  const DistanceMap dm = shortest_paths(g, root, orientation);
  SpTree tree;
  tree.root = root;
  tree.orientation = orientation;
  for (const auto& parent : dm.parent_edge) {
    if (parent) tree.tree_edges.push_back(*parent);
  }
  std::sort(tree.tree_edges.begin(), tree.tree_edges.end());
  return tree;
}

InducedSubgraph induced_subgraph(const DiGraph& g, std::span<const VertexId> vertices) {
  InducedSubgraph out;
  out.from_parent_vertex.assign(g.num_vertices(), std::nullopt);
  std::vector<VertexId> sorted(vertices.begin(), vertices.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (VertexId v : sorted) {
    if (v >= g.num_vertices()) {
      throw Error(ErrorCode::kIndexOutOfRange, "induced_subgraph: vertex out of range");
    }
    out.from_parent_vertex[v] = static_cast<VertexId>(out.to_parent_vertex.size());
    out.to_parent_vertex.push_back(v);
  }
  std::vector<Edge> edges;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    const auto t = out.from_parent_vertex[edge.tail];
    const auto h = out.from_parent_vertex[edge.head];
    if (t && h) {
      edges.push_back({*t, *h, edge.length});
      out.to_parent_edge.push_back(e);
    }
  }
  out.graph = DiGraph::build(sorted.size(), std::move(edges));
  return out;
}

DistanceMatrix distance_matrix(const DiGraph& g, const EdgeSet* allowed) {
  const std::size_t n = g.num_vertices();
  DistanceMatrix m(n);
  for (VertexId a = 0; a < n; ++a) {
    const DistanceMap dm = shortest_paths(g, a, Direction::kOutward, allowed);
    for (VertexId b = 0; b < n; ++b) m.at(a, b) = dm.dist[b];
  }
  return m;
}

std::vector<std::vector<VertexId>> weakly_connected_components(const DiGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<int> label(n, -1);
  std::vector<std::vector<VertexId>> components;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    const int id = static_cast<int>(components.size());
    components.emplace_back();
    label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const VertexId a = stack.back();
      stack.pop_back();
      components.back().push_back(a);
      auto visit = [&](VertexId w) {
        if (label[w] < 0) {
          label[w] = id;
          stack.push_back(w);
        }
      };
      for (EdgeId e : g.out_edges(a)) visit(g.edge(e).head);
      for (EdgeId e : g.in_edges(a)) visit(g.edge(e).tail);
    }
    std::sort(components.back().begin(), components.back().end());
  }
  return components;
}

}  // namespace dspanner
