#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace dspanner {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using Length = double;

inline constexpr Length kUnreachable = std::numeric_limits<Length>::infinity();

struct Edge {
  VertexId tail = 0;
  VertexId head = 0;
  Length length = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class Direction { kOutward, kInward };

/*
  DiGraph: immutable directed graph with nonnegative edge lengths.

  Vertices are 0..n-1. Edges keep the order they were given in; an edge's
  position is its EdgeId everywhere in the library. Self-loops and parallel
  (tail, head) pairs are rejected at construction.
*/
class DiGraph {
 public:
  DiGraph() = default;

  /// Validates and builds. Throws Error with IndexOutOfRange, NegativeLength,
  /// SelfLoop or DuplicateEdge.
  static DiGraph build(std::size_t num_vertices, std::vector<Edge> edges);

  std::size_t num_vertices() const noexcept { return num_vertices_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const EdgeId> out_edges(VertexId v) const {
    return {out_ids_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
  }
  std::span<const EdgeId> in_edges(VertexId v) const {
    return {in_ids_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
  }

  std::optional<EdgeId> find_edge(VertexId tail, VertexId head) const;

  bool all_unit_lengths() const noexcept;

  friend bool operator==(const DiGraph& a, const DiGraph& b) {
    return a.num_vertices_ == b.num_vertices_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t num_vertices_ = 0;
  std::vector<Edge> edges_;
  // CSR adjacency, edge ids sorted ascending within each vertex.
  std::vector<std::size_t> out_offsets_{0};
  std::vector<EdgeId> out_ids_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<EdgeId> in_ids_;
};

/// Dense membership set over the edge ids of one graph.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::size_t num_edges, bool filled = false)
      : bits_(num_edges, filled), count_(filled ? num_edges : 0) {}

  static EdgeSet from_ids(std::size_t num_edges, std::span<const EdgeId> ids);

  std::size_t universe() const noexcept { return bits_.size(); }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }
  bool contains(EdgeId e) const { return bits_[e]; }

  void insert(EdgeId e) {
    if (!bits_[e]) {
      bits_[e] = true;
      ++count_;
    }
  }
  void erase(EdgeId e) {
    if (bits_[e]) {
      bits_[e] = false;
      --count_;
    }
  }
  void merge(const EdgeSet& other);

  bool is_subset_of(const EdgeSet& other) const;

  /// Ascending edge ids.
  std::vector<EdgeId> ids() const;

  friend bool operator==(const EdgeSet& a, const EdgeSet& b) { return a.bits_ == b.bits_; }

 private:
  std::vector<bool> bits_;
  std::size_t count_ = 0;
};

struct DistanceMap {
  VertexId source = 0;
  Direction direction = Direction::kOutward;
  std::vector<Length> dist;
  std::vector<std::optional<EdgeId>> parent_edge;

  bool reachable(VertexId v) const { return dist[v] != kUnreachable; }
};

struct SpTree {
  VertexId root = 0;
  Direction orientation = Direction::kOutward;
  std::vector<EdgeId> tree_edges;  // ascending
};

/// Label-setting single-source distances. Outward gives dist(source, w);
/// inward gives dist(w, source). When `allowed` is given, only its edges are
/// traversed.
///
/// Among predecessors that realize a vertex's distance, the parent is the
/// lowest edge id whose other endpoint was settled earlier. With zero-length
/// edges this restriction keeps the parent pointers acyclic.
DistanceMap shortest_paths(const DiGraph& g, VertexId source, Direction direction,
                           const EdgeSet* allowed = nullptr);

SpTree shortest_path_tree(const DiGraph& g, VertexId root, Direction orientation);

struct InducedSubgraph {
  DiGraph graph;
  std::vector<VertexId> to_parent_vertex;  // local vertex -> vertex of the parent graph
  std::vector<EdgeId> to_parent_edge;      // local edge -> edge of the parent graph
  std::vector<std::optional<VertexId>> from_parent_vertex;
};

/// Keeps exactly the edges with both endpoints in `vertices`. Local vertex ids
/// follow the ascending order of `vertices`; local edge ids follow parent edge
/// order.
InducedSubgraph induced_subgraph(const DiGraph& g, std::span<const VertexId> vertices);

/// Row-major all-pairs distances; at(a, b) = dist(a, b).
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), data_(n * n, kUnreachable) {}

  std::size_t size() const noexcept { return n_; }
  Length at(VertexId a, VertexId b) const { return data_[a * n_ + b]; }
  Length& at(VertexId a, VertexId b) { return data_[a * n_ + b]; }

 private:
  std::size_t n_ = 0;
  std::vector<Length> data_;
};

DistanceMatrix distance_matrix(const DiGraph& g, const EdgeSet* allowed = nullptr);

/// Weakly-connected components, each listed in ascending vertex order;
/// components ordered by their smallest vertex.
std::vector<std::vector<VertexId>> weakly_connected_components(const DiGraph& g);

}  // namespace dspanner
