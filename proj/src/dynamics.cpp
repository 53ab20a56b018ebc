#include "trilaman/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "trilaman/error.hpp"

namespace trilaman {

Configuration::Configuration(Eigen::VectorXd ab) : coords_(std::move(ab)) {
  if (coords_.size() % 2 != 0)
    throw Error(ErrorCode::SpecError, "coordinate vector must have even length");
}

Configuration Configuration::from_points(const std::vector<Eigen::Vector2d>& points) {
  Configuration c(static_cast<int>(points.size()));
  for (int k = 0; k < c.size(); ++k) c.set_point(k, points[k]);
  return c;
}

std::vector<Eigen::Vector2d> Configuration::points() const {
  std::vector<Eigen::Vector2d> out(size());
  for (int k = 0; k < size(); ++k) out[k] = point(k);
  return out;
}

// ---------------------------------------------------------------- systems

RMASystem::RMASystem(TLGraph graph, std::vector<Law> laws)
    : graph_(std::move(graph)), laws_(std::move(laws)) {
  if (laws_.size() != graph_.edge_count())
    throw Error(ErrorCode::SpecError, "ensemble must provide exactly one law per edge");
}

RMASystem::RMASystem(TLGraph graph, const std::map<Edge, Law>& ensemble) : graph_(std::move(graph)) {
  if (ensemble.size() != graph_.edge_count())
    throw Error(ErrorCode::SpecError, "ensemble must provide exactly one law per edge");
  for (const auto& e : graph_.edges()) {
    auto it = ensemble.find(e);
    if (it == ensemble.end())
      throw Error(ErrorCode::SpecError, "ensemble is missing a law for an edge");
    laws_.push_back(it->second);
  }
}

RMASystem RMASystem::uniform(TLGraph graph, const Law& law) {
  std::vector<Law> laws(graph.edge_count(), law);
  return RMASystem(std::move(graph), std::move(laws));
}

const Law& RMASystem::law(Edge e) const {
  auto idx = graph_.edge_index(e);
  if (!idx) throw Error(ErrorCode::DanglingReference, "edge is not part of the graph");
  return laws_[*idx];
}

RMASystem RMASystem::with_law(Edge e, Law law) const {
  auto idx = graph_.edge_index(e);
  if (!idx) throw Error(ErrorCode::DanglingReference, "edge is not part of the graph");
  RMASystem copy = *this;
  copy.laws_[*idx] = std::move(law);
  return copy;
}

bool RMASystem::admissible() const {
  return std::all_of(laws_.begin(), laws_.end(), [](const Law& l) { return l.class_f(); });
}

Subsystem make_subsystem(const RMASystem& system, const std::vector<Edge>& edges) {
  InducedSubgraph sub = induced_subsystem(system.graph(), edges);
  std::vector<Law> laws;
  for (const auto& e : sub.graph.edges())
    laws.push_back(system.law(Edge(sub.vertices[e.u], sub.vertices[e.v])));
  return {RMASystem(std::move(sub.graph), std::move(laws)), std::move(sub.vertices)};
}

Configuration restrict_configuration(const Configuration& config,
                                     const std::vector<VertexId>& vertices) {
  Configuration out(static_cast<int>(vertices.size()));
  for (std::size_t k = 0; k < vertices.size(); ++k)
    out.set_point(static_cast<int>(k), config.point(vertices[k]));
  return out;
}

void require_in_configuration_space(const TLGraph& graph, const Configuration& config) {
  if (config.size() != graph.n())
    throw Error(ErrorCode::SpecError, "configuration size does not match the graph");
  for (const auto& e : graph.edges())
    if (!(config.distance(e.u, e.v) > 0.0))
      throw Error(ErrorCode::EdgeCollision, "adjacent agents " + std::to_string(e.u) + " and " +
                                                std::to_string(e.v) + " coincide");
}

// ---------------------------------------------------------------- potential and field

double potential(const RMASystem& system, const Configuration& config) {
  require_in_configuration_space(system.graph(), config);
  double total = 0.0;
  const auto& edges = system.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k)
    total += system.laws()[k].potential(config.distance(edges[k].u, edges[k].v));
  return total;
}

Eigen::VectorXd vector_field(const RMASystem& system, const Configuration& config) {
  require_in_configuration_space(system.graph(), config);
  const int n = config.size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * n);
  const auto& edges = system.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto [i, j] = std::pair{edges[k].u, edges[k].v};
    const Eigen::Vector2d dx = config.point(j) - config.point(i);
    const double f = system.laws()[k].f(dx.norm());
    out[i] += f * dx.x();
    out[n + i] += f * dx.y();
    out[j] -= f * dx.x();
    out[n + j] -= f * dx.y();
  }
  return out;
}

double residual(const RMASystem& system, const Configuration& config) {
  return vector_field(system, config).lpNorm<Eigen::Infinity>();
}

Eigen::MatrixXd paper_hessian(const RMASystem& system, const Configuration& config) {
  require_in_configuration_space(system.graph(), config);
  const int n = config.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  const auto& edges = system.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto [i, j] = std::pair{edges[k].u, edges[k].v};
    const Eigen::Vector2d dx = config.point(j) - config.point(i);
    const double d = dx.norm();
    const Eigen::Vector2d u = dx / d;
    const LawValue v = system.laws()[k].eval(d);
    const Eigen::Matrix2d uu = u * u.transpose();
    const Eigen::Matrix2d block = v.f * (Eigen::Matrix2d::Identity() - uu) + v.ftp * uu;
    const int idx[2][2] = {{i, n + i}, {j, n + j}};
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        h(idx[0][r], idx[1][c]) += block(r, c);
        h(idx[1][r], idx[0][c]) += block(r, c);
        h(idx[0][r], idx[0][c]) -= block(r, c);
        h(idx[1][r], idx[1][c]) -= block(r, c);
      }
    }
  }
  return h;
}

NullVectors null_vectors(const Configuration& config) {
  const int n = config.size();
  NullVectors nv;
  nv.t_a = Eigen::VectorXd::Zero(2 * n);
  nv.t_b = Eigen::VectorXd::Zero(2 * n);
  nv.r_p = Eigen::VectorXd::Zero(2 * n);
  nv.t_a.head(n).setOnes();
  nv.t_b.tail(n).setOnes();
  for (int k = 0; k < n; ++k) {
    nv.r_p[k] = -config.b(k);
    nv.r_p[n + k] = config.a(k);
  }
  return nv;
}

// ---------------------------------------------------------------- rigid motions

Eigen::Vector2d RigidMotion::apply(const Eigen::Vector2d& x) const {
  return Eigen::Rotation2Dd(theta) * x + v;
}

RigidMotion RigidMotion::inverse() const {
  return {-theta, -(Eigen::Rotation2Dd(-theta) * v)};
}

RigidMotion compose(const RigidMotion& second, const RigidMotion& first) {
  return {second.theta + first.theta, Eigen::Rotation2Dd(second.theta) * first.v + second.v};
}

Configuration apply_rigid_motion(const Configuration& config, const RigidMotion& g) {
  Configuration out(config.size());
  const Eigen::Matrix2d r = Eigen::Rotation2Dd(g.theta).toRotationMatrix();
  for (int k = 0; k < config.size(); ++k) out.set_point(k, r * config.point(k) + g.v);
  return out;
}

RigidMotion canonical_motion(const Configuration& config, VertexId u, VertexId w) {
  const Eigen::Vector2d d = config.point(w) - config.point(u);
  if (!(d.norm() > 0.0)) throw Error(ErrorCode::DegenerateBase, "anchor points coincide");
  const double theta = -std::atan2(d.y(), d.x());
  return {theta, -(Eigen::Rotation2Dd(theta) * config.point(u))};
}

// ---------------------------------------------------------------- flow

const char* to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::Converged: return "converged";
    case FlowStatus::Stalled: return "stalled";
    case FlowStatus::CollisionApproach: return "collision_approach";
  }
  return "unknown";
}

const FlowResult& FlowResult::require_converged() const {
  if (status == FlowStatus::Stalled)
    throw Error(ErrorCode::Stalled, "flow hit t_max with residual " + std::to_string(residual));
  if (status == FlowStatus::CollisionApproach)
    throw Error(ErrorCode::CollisionApproach, "adjacent agents approached collision");
  return *this;
}

namespace {

double min_edge_distance(const TLGraph& g, const Configuration& c) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : g.edges()) m = std::min(m, c.distance(e.u, e.v));
  return m;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

FlowResult flow(const RMASystem& system, const Configuration& start, const FlowOptions& options) {
  const TLGraph& graph = system.graph();
  auto field = [&](const Eigen::VectorXd& y) { return vector_field(system, Configuration(y)); };

  FlowResult out;
  Eigen::VectorXd y = start.coordinates();
  Eigen::VectorXd k1 = field(y);
  out.min_edge_distance = min_edge_distance(graph, start);
  out.potential_start = potential(system, start);
  double phi = out.potential_start;
  double t = 0.0;
  out.residual = k1.lpNorm<Eigen::Infinity>();

  double h = std::min(0.1, 0.01 / std::max(out.residual, 1e-12));
  double err_prev = 1e-4;
  bool collision = false;

  while (out.residual > options.tol && t < options.t_max &&
         out.accepted_steps + out.rejected_steps < options.max_steps) {
    h = std::min(h, options.t_max - t);
    Eigen::VectorXd k2, k3, k4, k5, k6, k7, y5;
    bool ok = true;
    try {
      k2 = field(y + h * a21 * k1);
      k3 = field(y + h * (a31 * k1 + a32 * k2));
      k4 = field(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      k5 = field(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      k6 = field(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = field(y5);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EdgeCollision) throw;
      ok = false;
    }
    double err = std::numeric_limits<double>::infinity();
    if (ok) {
      const Eigen::VectorXd errv =
          h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double acc = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double sc =
            options.atol + options.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        acc += (errv[i] / sc) * (errv[i] / sc);
      }
      err = std::sqrt(acc / static_cast<double>(y.size()));
    }
    if (!(err <= 1.0)) {
      ++out.rejected_steps;
      const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= fac;
      if (h < 1e-300) break;
      continue;
    }

    t += h;
    y = y5;
    k1 = k7;
    ++out.accepted_steps;
    const Configuration current(y);
    const double dmin = min_edge_distance(graph, current);
    out.min_edge_distance = std::min(out.min_edge_distance, dmin);
    if (dmin < options.collision_floor) {
      collision = true;
      out.residual = k1.lpNorm<Eigen::Infinity>();
      break;
    }
    const double phi_new = potential(system, current);
    const double increase = phi_new - phi;
    if (increase > 1e-12 * (1.0 + std::abs(phi))) out.potential_monotone = false;
    out.max_potential_increase = std::max(out.max_potential_increase, increase);
    phi = phi_new;
    out.residual = k1.lpNorm<Eigen::Infinity>();
    if (options.record_every > 0 && out.accepted_steps % options.record_every == 0)
      out.trajectory.emplace_back(t, current);

    // PI controller (Gustafsson), exponents 0.7/5 and 0.4/5.
    const double e = std::max(err, 1e-10);
    const double fac = 0.9 * std::pow(e, -0.14) * std::pow(err_prev, 0.08);
    h *= std::clamp(fac, 0.2, 5.0);
    err_prev = e;
  }

  out.final_config = Configuration(y);
  out.time = t;
  out.potential_end = phi;
  if (collision)
    out.status = FlowStatus::CollisionApproach;
  else if (out.residual > options.tol)
    out.status = FlowStatus::Stalled;
  return out;
}

// ---------------------------------------------------------------- Newton

NewtonResult newton_refine(const RMASystem& system, const Configuration& approx,
                           const NewtonOptions& options) {
  NewtonResult out;
  out.residual = residual(system, approx);
  if (out.residual <= options.tol) {
    out.config = approx;
    out.converged = true;
    return out;
  }

  const int n = system.n();
  const VertexId u = system.graph().base_edge().u;
  const VertexId w = system.graph().base_edge().v;
  const RigidMotion to_canonical = canonical_motion(approx, u, w);
  Configuration y = apply_rigid_motion(approx, to_canonical);

  std::vector<int> free;
  for (int i = 0; i < 2 * n; ++i)
    if (i != u && i != n + u && i != n + w) free.push_back(i);
  const int m = static_cast<int>(free.size());

  auto iterate = [&]() -> bool {
    for (; out.iterations < options.max_iterations; ++out.iterations) {
      const Eigen::VectorXd field = vector_field(system, y);
      const double r = field.lpNorm<Eigen::Infinity>();
      out.residual = r;
      if (r <= options.tol) return true;
      const Eigen::MatrixXd hess = paper_hessian(system, y);
      Eigen::MatrixXd jac(m, m);
      Eigen::VectorXd rhs(m);
      for (int a = 0; a < m; ++a) {
        rhs[a] = -field[free[a]];
        for (int b = 0; b < m; ++b) jac(a, b) = hess(free[a], free[b]);
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const auto& sv = svd.singularValues();
      if (sv[m - 1] <= 1e-12 * sv[0])
        throw Error(ErrorCode::SingularGaugeJacobian,
                    "gauge-fixed Jacobian is singular; the orbit is degenerate");
      const Eigen::VectorXd delta = svd.solve(rhs);

      double lambda = 1.0;
      bool improved = false;
      for (int bt = 0; bt < 40; ++bt, lambda *= 0.5) {
        Configuration trial = y;
        for (int a = 0; a < m; ++a) trial.coordinates()[free[a]] += lambda * delta[a];
        try {
          const double rt = residual(system, trial);
          if (rt < r) {
            y = trial;
            improved = true;
            break;
          }
        } catch (const Error& e) {
          if (e.code() != ErrorCode::EdgeCollision) throw;
        }
      }
      if (!improved) {
        // Stagnation at round-off level counts as converged.
        out.residual = r;
        return r <= 100.0 * options.tol;
      }
    }
    out.residual = residual(system, y);
    return out.residual <= options.tol;
  };

  out.converged = iterate();
  if (!out.converged && options.flow_fallback) {
    FlowOptions fo;
    fo.tol = 1e-9;
    const FlowResult fr = flow(system, y, fo);
    y = apply_rigid_motion(fr.final_config, canonical_motion(fr.final_config, u, w));
    out.used_flow = true;
    out.iterations = 0;
    out.converged = iterate();
  }
  out.config = apply_rigid_motion(y, to_canonical.inverse());
  out.residual = residual(system, out.config);
  return out;
}

SettleResult settle_equilibrium(const RMASystem& system, const Configuration& start,
                                double flow_tol, double residual_tol) {
  SettleResult out;
  FlowOptions fo;
  fo.tol = flow_tol;
  out.flow = flow(system, start, fo);
  if (!out.flow.converged()) return out;
  Configuration eq = out.flow.final_config;
  try {
    const NewtonResult nr = newton_refine(system, eq);
    if (nr.converged) eq = nr.config;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularGaugeJacobian) throw;
    out.gauge_singular = true;
    FlowOptions tight;
    tight.tol = residual_tol;
    eq = flow(system, eq, tight).final_config;
  }
  if (residual(system, eq) <= residual_tol) out.equilibrium = eq;
  return out;
}

}  // namespace trilaman
