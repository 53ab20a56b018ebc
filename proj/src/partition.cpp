#include "trilaman/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "trilaman/error.hpp"

namespace trilaman {

int CanonicalPartition::part_of(Edge e) const {
  for (std::size_t k = 0; k < parts.size(); ++k)
    if (std::find(parts[k].edges.begin(), parts[k].edges.end(), e) != parts[k].edges.end())
      return static_cast<int>(k);
  return -1;
}

std::vector<std::vector<Edge>> CanonicalPartition::as_sets() const {
  std::vector<std::vector<Edge>> out;
  for (const auto& p : parts) {
    auto s = p.edges;
    std::sort(s.begin(), s.end());
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double collinearity(const Eigen::Vector2d& xi, const Eigen::Vector2d& xj,
                    const Eigen::Vector2d& xn) {
  const Eigen::Vector2d p = xj - xi;
  const Eigen::Vector2d q = xn - xi;
  const double denom = p.norm() * q.norm();
  if (!(denom > 0.0)) return 0.0;
  return std::abs(p.x() * q.y() - p.y() * q.x()) / denom;
}

CanonicalPartition canonical_partition(const TLGraph& graph, const Configuration& config,
                                       double col_tol) {
  require_in_configuration_space(graph, config);
  struct Work {
    std::vector<Edge> edges;
    Eigen::Vector2d direction;
  };
  std::vector<Work> work;
  std::map<Edge, std::size_t> owner;

  auto open_part = [&](Edge e) {
    const Eigen::Vector2d d = config.point(e.v) - config.point(e.u);
    work.push_back({{e}, d.normalized()});
    owner[e] = work.size() - 1;
  };

  open_part(graph.base_edge());
  for (const auto& step : graph.steps()) {
    const auto [p, q] = step.parents;
    const Edge ep(step.vertex, p), eq(step.vertex, q);
    const std::size_t k = owner.at(Edge(p, q));
    if (collinearity(config.point(p), config.point(q), config.point(step.vertex)) < col_tol) {
      work[k].edges.push_back(ep);
      work[k].edges.push_back(eq);
      owner[ep] = owner[eq] = k;
    } else {
      open_part(ep);
      open_part(eq);
    }
  }

  CanonicalPartition out;
  for (auto& w : work) {
    PartitionPart part;
    part.subgraph = induced_subsystem(graph, w.edges);
    part.edges = std::move(w.edges);
    part.direction = w.direction;
    out.parts.push_back(std::move(part));
  }
  return out;
}

Configuration canonical_orbit_form(const Configuration& config, VertexId u, VertexId w) {
  Configuration out = apply_rigid_motion(config, canonical_motion(config, u, w));
  // Exact zeros for the anchor coordinates.
  out.set_point(u, Eigen::Vector2d::Zero());
  out.set_point(w, {out.a(w), 0.0});
  return out;
}

bool is_line_configuration(const Configuration& config, double col_tol) {
  const int n = config.size();
  if (n <= 2) return true;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (int k = 0; k < n; ++k) mean += config.point(k);
  mean /= n;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (int k = 0; k < n; ++k) {
    const Eigen::Vector2d d = config.point(k) - mean;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
  const double big = es.eigenvalues()[1];
  if (!(big > 0.0)) return true;
  return std::sqrt(std::max(0.0, es.eigenvalues()[0]) / big) <= col_tol;
}

}  // namespace trilaman
