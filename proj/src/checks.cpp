#include "trilaman/checks.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>

#include "trilaman/error.hpp"

namespace trilaman {

namespace {

void require_equilibrium(const RMASystem& system, const Configuration& config, double tol) {
  const double r = residual(system, config);
  if (!(r <= tol))
    throw Error(ErrorCode::NotEquilibrium,
                "configuration is not an equilibrium (residual " + std::to_string(r) + ")");
}

double max_offdiag(const Eigen::MatrixXd& m) {
  double out = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) out = std::max(out, std::abs(m(i, j)));
  return out;
}

}  // namespace

IndexFormulaReport check_index_formula(const RMASystem& system, const Configuration& config,
                                       const CheckOptions& options) {
  require_equilibrium(system, config, options.residual_tol);
  IndexFormulaReport rep;
  rep.partition = canonical_partition(system.graph(), config, options.col_tol);
  rep.full = inertia(paper_hessian(system, config), options.zero_tol);

  rep.parts_nondegenerate = true;
  for (const auto& part : rep.partition.parts) {
    const Subsystem sub = make_subsystem(system, part.edges);
    const Configuration local = restrict_configuration(config, sub.vertices);
    PartReport pr;
    pr.edges = part.edges;
    pr.vertices = sub.vertices;
    pr.inertia = inertia(paper_hessian(sub.system, local), options.zero_tol);
    pr.residual = residual(sub.system, local);
    pr.on_line = is_line_configuration(local, options.col_tol);
    rep.sum_plus += pr.inertia.n_plus;
    rep.sum_minus += pr.inertia.n_minus;
    if (pr.inertia.n_zero != 3) rep.parts_nondegenerate = false;
    rep.parts.push_back(std::move(pr));
  }
  rep.implied_n_zero = 2 * system.n() - rep.sum_plus - rep.sum_minus;
  rep.plus_matches = rep.sum_plus == rep.full.n_plus;
  rep.minus_matches = rep.sum_minus == rep.full.n_minus;
  rep.implication_holds = !rep.parts_nondegenerate || rep.full.n_zero == 3;
  return rep;
}

InertiaFormulaReport check_inertia_formula(const RMASystem& system, const Configuration& config,
                                           const CheckOptions& options) {
  const TLGraph& g = system.graph();
  if (g.steps().empty())
    throw Error(ErrorCode::NotTLG, "the inertia jump needs at least one Henneberg step");
  require_equilibrium(system, config, options.residual_tol);

  Configuration line = canonical_orbit_form(g, config);
  double extent = 0.0;
  for (int k = 0; k < line.size(); ++k) extent = std::max(extent, line.point(k).norm());
  for (int k = 0; k < line.size(); ++k) {
    if (std::abs(line.b(k)) > options.col_tol * std::max(1.0, extent))
      throw Error(ErrorCode::NotCollinear, "configuration is not a line configuration");
    line.set_point(k, {line.a(k), 0.0});
  }

  const HennebergStep& last = g.steps().back();
  const VertexId v = last.vertex, p = last.parents.first, q = last.parents.second;
  InertiaFormulaReport rep;
  rep.removed = v;
  rep.parent_first = p;
  rep.parent_second = q;
  const auto rc = realized_case(line.a(v), line.a(p), line.a(q));
  if (!rc) throw Error(ErrorCode::EdgeCollision, "removed vertex coincides with a parent");
  rep.realized = *rc;

  std::vector<VertexId> kept;
  const RMASystem reduced = reduce_last_vertex(system, rep.realized, &kept);
  const Configuration reduced_config = restrict_configuration(line, kept);

  const Eigen::MatrixXd h = paper_hessian(system, line);
  const Eigen::MatrixXd hr = paper_hessian(reduced, reduced_config);
  rep.full = inertia(h, options.zero_tol);
  rep.reduced = inertia(hr, options.zero_tol);
  rep.difference = rep.full - rep.reduced;

  const LawValue lp = system.law(Edge(v, p)).eval(line.distance(v, p));
  const LawValue lq = system.law(Edge(v, q)).eval(line.distance(v, q));
  rep.f_sum = lp.f + lq.f;
  rep.ftp_sum = lp.ftp + lq.ftp;
  rep.predicted =
      sgn(-rep.f_sum, options.zero_tol * std::max(1.0, std::abs(lp.f) + std::abs(lq.f))) +
      sgn(-rep.ftp_sum, options.zero_tol * std::max(1.0, std::abs(lp.ftp) + std::abs(lq.ftp)));
  rep.holds = rep.difference == rep.predicted;

  // Congruences.
  const int n = g.n();
  const int nr = n - 1;
  const Eigen::MatrixXd fb = h.bottomRightCorner(n, n);
  const Eigen::MatrixXd dfb = h.topLeftCorner(n, n);
  const Eigen::MatrixXd fbr = hr.bottomRightCorner(nr, nr);
  const Eigen::MatrixXd dfbr = hr.topLeftCorner(nr, nr);
  const auto local = [&](VertexId x) {
    return static_cast<int>(std::lower_bound(kept.begin(), kept.end(), x) - kept.begin());
  };
  const int lp_idx = local(p), lq_idx = local(q);
  const double av = line.a(v), ap = line.a(p), aq = line.a(q);

  auto congruence = [&](const Eigen::MatrixXd& full_block, const Eigen::MatrixXd& red_block,
                        double corner, auto&& extension, InertiaTriple& direct,
                        InertiaTriple& congruent, double& offdiag, double& diag_error) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(red_block);
    const Eigen::MatrixXd& vecs = es.eigenvectors();
    Eigen::MatrixXd qm = Eigen::MatrixXd::Zero(n, n);
    qm(v, 0) = 1.0;
    for (int i = 0; i < nr; ++i) {
      for (int k = 0; k < nr; ++k) qm(kept[k], i + 1) = vecs(k, i);
      qm(v, i + 1) = extension(vecs(lp_idx, i), vecs(lq_idx, i));
    }
    const Eigen::MatrixXd lam = qm.transpose() * full_block * qm;
    Eigen::VectorXd expected(n);
    expected[0] = corner;
    expected.tail(nr) = es.eigenvalues();
    const double scale = std::max(1.0, full_block.cwiseAbs().maxCoeff());
    offdiag = max_offdiag(lam) / scale;
    diag_error = (lam.diagonal() - expected).cwiseAbs().maxCoeff() / scale;
    direct = inertia(full_block, options.zero_tol);
    congruent = inertia_from_eigenvalues(expected, options.zero_tol);
  };

  congruence(
      fb, fbr, -(lp.f + lq.f),
      [&](double xp, double xq) { return ((aq - av) * xp + (av - ap) * xq) / (aq - ap); },
      rep.f_block_direct, rep.f_block_congruent, rep.f_offdiag, rep.f_diag_error);
  congruence(
      dfb, dfbr, -(lp.ftp + lq.ftp),
      [&](double xp, double xq) { return (lp.ftp * xp + lq.ftp * xq) / (lp.ftp + lq.ftp); },
      rep.df_block_direct, rep.df_block_congruent, rep.df_offdiag, rep.df_diag_error);
  rep.congruence_holds = rep.f_offdiag <= 1e-8 && rep.df_offdiag <= 1e-8 &&
                         rep.f_diag_error <= 1e-8 && rep.df_diag_error <= 1e-8 &&
                         rep.f_block_direct == rep.f_block_congruent &&
                         rep.df_block_direct == rep.df_block_congruent;
  return rep;
}

RepairResult repair_degenerate(const RMASystem& system, const CriticalOrbitRecord& orbit,
                               const RepairOptions& options) {
  std::vector<const ReductionStepRecord*> bad;
  for (const auto& s : orbit.steps)
    if (s.degenerate(options.zero_tol)) bad.push_back(&s);
  if (bad.empty())
    throw Error(ErrorCode::NotRepairable, "orbit has no degenerate Henneberg step");

  // Signs of the bump heights on (v,first), (v,second), (first,second).
  auto signs = [](ReductionCase c) -> std::array<double, 3> {
    switch (c) {
      case ReductionCase::Between: return {1.0, 1.0, -1.0};
      case ReductionCase::LeftOutside: return {1.0, -1.0, 1.0};
      case ReductionCase::RightOutside: return {-1.0, 1.0, 1.0};
    }
    return {0.0, 0.0, 0.0};
  };

  struct Slot {
    Edge edge;
    double center;
    double sign;
  };
  std::vector<Slot> slots;
  for (const auto* s : bad) {
    const auto sg = signs(s->reduction_case);
    slots.push_back({Edge(s->vertex, s->parent_first), s->d_first, sg[0]});
    slots.push_back({Edge(s->vertex, s->parent_second), s->d_second, sg[1]});
    slots.push_back({Edge(s->parent_first, s->parent_second), s->d_parents, sg[2]});
  }

  // Height bounded so the bump's slope stays below half the smallest f~'
  // of the original law on the support.
  double eta = options.eta;
  if (!(eta > 0.0)) {
    eta = 0.05;
    for (const auto& sl : slots) {
      const double w = options.width_fraction * sl.center;
      double min_ftp = std::numeric_limits<double>::infinity();
      for (int k = 0; k <= 64; ++k) {
        const double d = sl.center - w + 2.0 * w * k / 64.0;
        min_ftp = std::min(min_ftp, system.law(sl.edge).ftp(d));
      }
      eta = std::min(eta, w * min_ftp / 6.0);
    }
  }
  if (!(eta > 0.0))
    throw Error(ErrorCode::NotRepairable, "no admissible bump height");

  for (int attempt = 0; attempt < 12; ++attempt, eta *= 0.5) {
    RMASystem repaired = system;
    std::vector<AppliedBump> bumps;
    bool admissible = true;
    for (const auto& sl : slots) {
      const PerturbationBump b =
          make_bump(sl.center, sl.sign * eta, 0.0, options.width_fraction * sl.center);
      const Law summed = sum_laws(repaired.law(sl.edge), b);
      if (!summed.class_f()) {
        admissible = false;
        break;
      }
      repaired = repaired.with_law(sl.edge, summed);
      bumps.push_back({sl.edge, b});
    }
    if (!admissible) continue;
    const double r = residual(repaired, orbit.config);
    const InertiaTriple after = inertia(paper_hessian(repaired, orbit.config), options.zero_tol);
    if (r <= options.residual_tol && after.n_zero == 3)
      return {std::move(repaired), std::move(bumps), eta, r, after};
  }
  throw Error(ErrorCode::NotRepairable, "perturbation did not remove the degeneracy");
}

std::vector<SubgraphAudit> audit_subgraphs(const RMASystem& system,
                                           const EnumerationOptions& options) {
  std::vector<SubgraphAudit> out;
  for (const auto& edges : tlg_subgraphs(system.graph())) {
    const Subsystem sub = make_subsystem(system, edges);
    const EnumerationResult res = enumerate_line_equilibria(sub.system, options);
    SubgraphAudit a;
    a.edges = edges;
    a.orbits = res.orbits.size();
    a.degenerate = static_cast<std::size_t>(
        std::count_if(res.orbits.begin(), res.orbits.end(),
                      [](const CriticalOrbitRecord& o) { return !o.nondegenerate; }));
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace trilaman
