#pragma once

// Triangulated Laman graphs (TLGs): minimally rigid planar graphs grown from
// a single edge by repeatedly attaching a new vertex to both endpoints of an
// existing edge.
//
// Vertex ids are 0-based and dense in [0, n). File formats and the CLI use
// 1-based ids and translate at the boundary.

#include <compare>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace trilaman {

using VertexId = int;

/// Undirected edge, always stored with u < v.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;

  Edge() = default;
  Edge(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {}

  bool contains(VertexId x) const { return x == u || x == v; }
  VertexId other(VertexId x) const { return x == u ? v : u; }

  auto operator<=>(const Edge&) const = default;
};

struct HennebergStep {
  VertexId vertex = 0;
  std::pair<VertexId, VertexId> parents{0, 0};

  auto operator<=>(const HennebergStep&) const = default;
};

class TLGraph {
 public:
  /// Number of vertices.
  int n() const { return n_; }
  const Edge& base_edge() const { return base_; }
  const std::vector<HennebergStep>& steps() const { return steps_; }

  /// Sorted edge set.
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_edge(VertexId a, VertexId b) const;
  /// Position of the edge in edges(), if present.
  std::optional<std::size_t> edge_index(Edge e) const;

  /// Neighbours of every vertex, each list sorted.
  const std::vector<std::vector<VertexId>>& adjacency() const { return adjacency_; }

  /// Vertices in construction order: base edge first, then step vertices.
  std::vector<VertexId> construction_order() const;

  bool operator==(const TLGraph& other) const {
    return n_ == other.n_ && base_ == other.base_ && steps_ == other.steps_;
  }

 private:
  friend TLGraph build_tlg(Edge base, const std::vector<HennebergStep>& steps);

  int n_ = 0;
  Edge base_;
  std::vector<HennebergStep> steps_;
  std::vector<Edge> edges_;
  std::vector<std::vector<VertexId>> adjacency_;
};

/// Builds and validates a TLG from a base edge and an ordered step list.
/// Vertex ids must be dense in [0, 2 + steps.size()).
/// Throws Error with NonAdjacentParents, DuplicateVertex or DanglingReference.
TLGraph build_tlg(Edge base, const std::vector<HennebergStep>& steps);

/// Finds a Henneberg construction for an edge set by reverse deletion of
/// degree-2 vertices with adjacent neighbours, always deleting the smallest
/// eligible id. Vertex ids must be dense in [0, n). Throws NotTLG.
TLGraph recognize_tlg(const std::vector<Edge>& edges);

/// Non-throwing variant of recognize_tlg.
std::optional<TLGraph> try_recognize_tlg(const std::vector<Edge>& edges);

/// Up to `limit` distinct Henneberg constructions of the same edge set.
std::vector<TLGraph> alternative_henneberg_orders(const TLGraph& graph, std::size_t limit);

/// A subgraph relabelled to dense local ids. `vertices[local] == parent id`,
/// in increasing parent-id order.
struct InducedSubgraph {
  TLGraph graph;
  std::vector<VertexId> vertices;

  std::optional<VertexId> local_id(VertexId parent) const;
};

/// Restricts the graph to an edge subset. Throws NotTLG when the subset is
/// not a triangulated Laman subgraph, DanglingReference when an edge is not
/// in the graph.
InducedSubgraph induced_subsystem(const TLGraph& graph, const std::vector<Edge>& edge_subset);

/// Drops the vertex added by the last Henneberg step, keeping the remaining
/// step order. Requires at least one step.
InducedSubgraph remove_last_vertex(const TLGraph& graph);

/// Every edge subset that forms a TLG (including single edges), each sorted,
/// listed in increasing size then lexicographic order.
std::vector<std::vector<Edge>> tlg_subgraphs(const TLGraph& graph);

}  // namespace trilaman
