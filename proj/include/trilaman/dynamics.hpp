#pragma once

// Planar configurations, the gradient dynamics
//   x_i' = sum_{j ~ i} f_ij(d_ij) (x_j - x_i),
// its potential, its linearization, and equilibrium solvers.

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <vector>

#include "trilaman/graph.hpp"
#include "trilaman/law.hpp"

namespace trilaman {

/// N planar points stored as (a_1..a_N, b_1..b_N).
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(int n) : coords_(Eigen::VectorXd::Zero(2 * n)) {}
  explicit Configuration(Eigen::VectorXd ab);
  static Configuration from_points(const std::vector<Eigen::Vector2d>& points);

  int size() const { return static_cast<int>(coords_.size() / 2); }

  double a(int k) const { return coords_[k]; }
  double b(int k) const { return coords_[size() + k]; }
  Eigen::Vector2d point(int k) const { return {a(k), b(k)}; }
  void set_point(int k, const Eigen::Vector2d& p) {
    coords_[k] = p.x();
    coords_[size() + k] = p.y();
  }
  std::vector<Eigen::Vector2d> points() const;

  const Eigen::VectorXd& coordinates() const { return coords_; }
  Eigen::VectorXd& coordinates() { return coords_; }

  double distance(int i, int j) const { return (point(i) - point(j)).norm(); }

 private:
  Eigen::VectorXd coords_;
};

/// A TLG with one interaction law per edge.
class RMASystem {
 public:
  /// `laws[k]` belongs to `graph.edges()[k]`.
  RMASystem(TLGraph graph, std::vector<Law> laws);
  RMASystem(TLGraph graph, const std::map<Edge, Law>& ensemble);
  static RMASystem uniform(TLGraph graph, const Law& law);

  const TLGraph& graph() const { return graph_; }
  int n() const { return graph_.n(); }
  const std::vector<Law>& laws() const { return laws_; }
  const Law& law(Edge e) const;
  RMASystem with_law(Edge e, Law law) const;

  /// True when every law is class F.
  bool admissible() const;

 private:
  TLGraph graph_;
  std::vector<Law> laws_;
};

/// Subsystem on an edge subset, relabelled; laws are inherited.
struct Subsystem {
  RMASystem system;
  std::vector<VertexId> vertices;  // local -> parent
};
Subsystem make_subsystem(const RMASystem& system, const std::vector<Edge>& edges);

/// Points of `config` at `vertices`, in that order.
Configuration restrict_configuration(const Configuration& config,
                                     const std::vector<VertexId>& vertices);

/// Throws EdgeCollision if an edge of the graph has zero length.
void require_in_configuration_space(const TLGraph& graph, const Configuration& config);

double potential(const RMASystem& system, const Configuration& config);
Eigen::VectorXd vector_field(const RMASystem& system, const Configuration& config);
/// Infinity norm of the vector field.
double residual(const RMASystem& system, const Configuration& config);

/// Jacobian of the vector field (the negative of the Hessian of the
/// potential), in (a, b) ordering. Per edge with unit vector u along
/// x_j - x_i the cross block is f (I - u u^T) + f~' u u^T; diagonal blocks are
/// minus the sum of incident cross blocks. For configurations on the a-axis
/// this is exactly block-diag(dF~, F).
Eigen::MatrixXd paper_hessian(const RMASystem& system, const Configuration& config);

struct NullVectors {
  Eigen::VectorXd t_a;  // translation along a
  Eigen::VectorXd t_b;  // translation along b
  Eigen::VectorXd r_p;  // rotation generator (-b, a); equals (0, a) on the a-axis
};
NullVectors null_vectors(const Configuration& config);

/// Element (theta, v) of SE(2) acting by x -> R(theta) x + v.
struct RigidMotion {
  double theta = 0.0;
  Eigen::Vector2d v = Eigen::Vector2d::Zero();

  Eigen::Vector2d apply(const Eigen::Vector2d& x) const;
  RigidMotion inverse() const;
};
/// (second * first): apply `first`, then `second`.
RigidMotion compose(const RigidMotion& second, const RigidMotion& first);

Configuration apply_rigid_motion(const Configuration& config, const RigidMotion& g);
inline Configuration apply_rigid_motion(const Configuration& config, double theta,
                                        const Eigen::Vector2d& v) {
  return apply_rigid_motion(config, RigidMotion{theta, v});
}

/// Motion taking x_u to the origin and x_w onto the positive a-axis.
/// Throws DegenerateBase if x_u == x_w.
RigidMotion canonical_motion(const Configuration& config, VertexId u, VertexId w);

enum class FlowStatus { Converged, Stalled, CollisionApproach };
const char* to_string(FlowStatus s);

struct FlowOptions {
  double tol = 1e-10;  // stop once the field's infinity norm is below this
  double t_max = 1e5;
  double atol = 1e-12;
  double rtol = 1e-10;
  double collision_floor = 1e-8;
  long max_steps = 5'000'000;
  int record_every = 0;  // keep every k-th accepted state; 0 disables
};

struct FlowResult {
  Configuration final_config;
  FlowStatus status = FlowStatus::Converged;
  double residual = 0.0;
  double time = 0.0;
  long accepted_steps = 0;
  long rejected_steps = 0;
  double min_edge_distance = 0.0;
  double potential_start = 0.0;
  double potential_end = 0.0;
  bool potential_monotone = true;
  double max_potential_increase = 0.0;
  std::vector<std::pair<double, Configuration>> trajectory;

  bool converged() const { return status == FlowStatus::Converged; }
  /// Throws Stalled or CollisionApproach unless converged.
  const FlowResult& require_converged() const;
};

/// Dormand-Prince 5(4) with PI step control.
FlowResult flow(const RMASystem& system, const Configuration& start,
                const FlowOptions& options = {});

struct NewtonOptions {
  double tol = 1e-12;
  int max_iterations = 60;
  bool flow_fallback = true;
};

struct NewtonResult {
  Configuration config;
  double residual = 0.0;
  int iterations = 0;
  bool used_flow = false;
  bool converged = false;
};

/// Newton's method on the equilibrium equations with x_u = 0 and b_w = 0 for
/// the base edge (u, w). The result is mapped back into the input frame.
/// Throws SingularGaugeJacobian at degenerate orbits.
NewtonResult newton_refine(const RMASystem& system, const Configuration& approx,
                           const NewtonOptions& options = {});

struct SettleResult {
  FlowResult flow;
  std::optional<Configuration> equilibrium;  // set when flow and refinement succeed
  bool gauge_singular = false;               // Newton skipped at a degenerate orbit
};

/// Flow until the residual drops below `flow_tol`, then Newton-refine.
SettleResult settle_equilibrium(const RMASystem& system, const Configuration& start,
                                double flow_tol = 1e-8, double residual_tol = 1e-10);

}  // namespace trilaman
