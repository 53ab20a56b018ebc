#pragma once

// Decomposition of the edge set of a configuration into maximal collinear
// TLG subgraphs, following the Henneberg construction order.

#include <Eigen/Dense>
#include <vector>

#include "trilaman/dynamics.hpp"
#include "trilaman/graph.hpp"
#include "trilaman/inertia.hpp"

namespace trilaman {

struct PartitionPart {
  std::vector<Edge> edges;          // in order of insertion
  InducedSubgraph subgraph;         // the part as a TLG, relabelled
  Eigen::Vector2d direction;        // unit vector along the part's line
};

struct CanonicalPartition {
  std::vector<PartitionPart> parts;  // ordered by first appearance

  std::size_t size() const { return parts.size(); }
  /// Index of the part holding `e`, or -1.
  int part_of(Edge e) const;
  /// Sorted edge sets, sorted; for order-independent comparison.
  std::vector<std::vector<Edge>> as_sets() const;
};

/// |(x_j - x_i) x (x_n - x_i)| / (|x_j - x_i| |x_n - x_i|).
double collinearity(const Eigen::Vector2d& xi, const Eigen::Vector2d& xj,
                    const Eigen::Vector2d& xn);

/// Walks the construction: the base edge opens a part; a new vertex joins
/// its parents' part when it is collinear with them (within `col_tol`) and
/// otherwise contributes two single-edge parts.
CanonicalPartition canonical_partition(const TLGraph& graph, const Configuration& config,
                                       double col_tol = kDefaultCollinearTol);

/// Rigid image with x_u at the origin and x_w on the positive a-axis.
Configuration canonical_orbit_form(const Configuration& config, VertexId u, VertexId w);
inline Configuration canonical_orbit_form(const TLGraph& graph, const Configuration& config) {
  return canonical_orbit_form(config, graph.base_edge().u, graph.base_edge().v);
}

/// All points within `col_tol` (relative to the configuration's extent) of
/// one line.
bool is_line_configuration(const Configuration& config, double col_tol = kDefaultCollinearTol);

}  // namespace trilaman
