#include "trilaman/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "trilaman/error.hpp"

namespace trilaman {

namespace {

double zero_band(double tol, double a, double b) {
  return tol * std::max(1.0, std::abs(a) + std::abs(b));
}

}  // namespace

InertiaTriple ReductionStepRecord::predicted_jump(double zero_tol) const {
  return sgn(-f_sum(), zero_band(zero_tol, f_first, f_second)) +
         sgn(-ftp_sum(), zero_band(zero_tol, ftp_first, ftp_second));
}

bool ReductionStepRecord::degenerate(double zero_tol) const {
  return std::abs(f_sum()) <= zero_band(zero_tol, f_first, f_second);
}

std::string CriticalOrbitRecord::case_string() const {
  std::string out;
  for (std::size_t k = 0; k < case_vector.size(); ++k) {
    if (k) out += ',';
    out += to_string(case_vector[k]);
  }
  return out;
}

std::optional<ReductionCase> realized_case(double a_v, double a_p, double a_q, double margin) {
  auto strictly_between = [margin](double lo, double mid, double hi) {
    return (mid - lo) * (hi - mid) > 0.0 && std::abs(mid - lo) > margin &&
           std::abs(hi - mid) > margin;
  };
  if (strictly_between(a_p, a_v, a_q)) return ReductionCase::Between;
  if (strictly_between(a_v, a_p, a_q)) return ReductionCase::LeftOutside;
  if (strictly_between(a_p, a_q, a_v)) return ReductionCase::RightOutside;
  return std::nullopt;
}

RMASystem reduce_last_vertex(const RMASystem& system, ReductionCase c,
                             std::vector<VertexId>* vertices) {
  const TLGraph& g = system.graph();
  const InducedSubgraph sub = remove_last_vertex(g);
  const HennebergStep& last = g.steps().back();
  const Edge parent_edge(last.parents.first, last.parents.second);
  std::vector<Law> laws;
  for (const auto& e : sub.graph.edges()) {
    const Edge pe(sub.vertices[e.u], sub.vertices[e.v]);
    if (pe == parent_edge)
      laws.push_back(reduced_law(system.law(pe), system.law(Edge(last.vertex, last.parents.first)),
                                 system.law(Edge(last.vertex, last.parents.second)), c));
    else
      laws.push_back(system.law(pe));
  }
  if (vertices) *vertices = sub.vertices;
  return RMASystem(sub.graph, std::move(laws));
}

namespace {

// Newton on the a-coordinates only, with a at the base vertex pinned.
void polish_on_line(const RMASystem& system, Configuration& config) {
  const int n = system.n();
  const VertexId pin = system.graph().base_edge().u;
  std::vector<int> free;
  for (int i = 0; i < n; ++i)
    if (i != pin) free.push_back(i);
  const int m = static_cast<int>(free.size());
  double r = residual(system, config);
  for (int it = 0; it < 4 && r > 0.0; ++it) {
    const Eigen::VectorXd field = vector_field(system, config);
    const Eigen::MatrixXd h = paper_hessian(system, config);
    Eigen::MatrixXd j(m, m);
    Eigen::VectorXd rhs(m);
    for (int a = 0; a < m; ++a) {
      rhs[a] = -field[free[a]];
      for (int b = 0; b < m; ++b) j(a, b) = h(free[a], free[b]);
    }
    const Eigen::VectorXd delta = j.colPivHouseholderQr().solve(rhs);
    if (!delta.allFinite()) return;
    Configuration trial = config;
    for (int a = 0; a < m; ++a) trial.coordinates()[free[a]] += delta[a];
    double rt;
    try {
      rt = residual(system, trial);
    } catch (const Error&) {
      return;
    }
    if (!(rt < r)) return;
    config = trial;
    r = rt;
  }
}

}  // namespace

EnumerationResult enumerate_line_equilibria(const RMASystem& system,
                                            const EnumerationOptions& options) {
  const TLGraph& g = system.graph();
  const auto& steps = g.steps();
  const std::size_t m = steps.size();
  const int n = g.n();

  EnumerationResult result;
  std::size_t total = 1;
  for (std::size_t k = 0; k < m; ++k) total *= 3;

  std::vector<ReductionCase> cases(m, ReductionCase::Between);
  for (std::size_t idx = 0; idx < total; ++idx) {
    // idx in base 3 with the first step most significant.
    std::size_t rem = idx;
    for (std::size_t k = m; k-- > 0;) {
      cases[k] = kAllReductionCases[rem % 3];
      rem /= 3;
    }
    ++result.branches;

    // Laws at every level: level s holds the edges present after steps < s
    // plus step s itself. Reduce from the last step down.
    std::map<Edge, Law> laws;
    for (std::size_t k = 0; k < g.edges().size(); ++k) laws.emplace(g.edges()[k], system.laws()[k]);
    std::vector<std::pair<Law, Law>> level(m, {Law::zero(), Law::zero()});
    bool ok = true;
    std::string failure;
    for (std::size_t s = m; s-- > 0;) {
      const auto& st = steps[s];
      const Edge ep(st.vertex, st.parents.first), eq(st.vertex, st.parents.second);
      const Edge epq(st.parents.first, st.parents.second);
      level[s] = {laws.at(ep), laws.at(eq)};
      laws.at(epq) = reduced_law(laws.at(epq), level[s].first, level[s].second, cases[s]);
      laws.erase(ep);
      laws.erase(eq);
    }

    Configuration config(n);
    std::vector<ReductionStepRecord> records(m);
    try {
      const Edge base = g.base_edge();
      const double d0 = rest_length(laws.at(base));
      std::vector<double> a(n, 0.0);
      a[base.u] = 0.0;
      a[base.v] = d0;
      for (std::size_t s = 0; s < m && ok; ++s) {
        const auto& st = steps[s];
        const VertexId p = st.parents.first, q = st.parents.second, v = st.vertex;
        const double dpq = std::abs(a[q] - a[p]);
        const double dir = a[q] >= a[p] ? 1.0 : -1.0;
        const VirtualInteraction vi =
            virtual_interaction(level[s].first, level[s].second, cases[s], dpq);
        switch (cases[s]) {
          case ReductionCase::Between: a[v] = a[p] + dir * vi.d12; break;
          case ReductionCase::LeftOutside: a[v] = a[p] - dir * vi.d12; break;
          case ReductionCase::RightOutside: a[v] = a[q] + dir * vi.d13; break;
        }
      }
      for (int k = 0; k < n; ++k) config.set_point(k, {a[k], 0.0});
      require_in_configuration_space(g, config);
    } catch (const Error& e) {
      ok = false;
      failure = e.what();
    }
    if (!ok) {
      result.warnings.push_back("branch " + std::to_string(idx) + " discarded: " + failure);
      continue;
    }

    if (options.polish) polish_on_line(system, config);
    config = canonical_orbit_form(g, config);
    const double r = residual(system, config);
    if (!(r <= options.residual_tol)) {
      result.warnings.push_back("branch " + std::to_string(idx) +
                                " discarded: residual " + std::to_string(r));
      continue;
    }

    double lo = config.a(0), hi = config.a(0);
    for (int k = 0; k < n; ++k) {
      lo = std::min(lo, config.a(k));
      hi = std::max(hi, config.a(k));
    }
    const double margin = 1e-12 * (hi - lo);
    for (std::size_t s = 0; s < m && ok; ++s) {
      const auto& st = steps[s];
      const VertexId p = st.parents.first, q = st.parents.second, v = st.vertex;
      const auto rc = realized_case(config.a(v), config.a(p), config.a(q), margin);
      if (!rc || *rc != cases[s]) {
        ok = false;
        break;
      }
      ReductionStepRecord& rec = records[s];
      rec.vertex = v;
      rec.parent_first = p;
      rec.parent_second = q;
      rec.reduction_case = cases[s];
      rec.d_first = config.distance(v, p);
      rec.d_second = config.distance(v, q);
      rec.d_parents = config.distance(p, q);
      const LawValue l1 = level[s].first.eval(rec.d_first);
      const LawValue l2 = level[s].second.eval(rec.d_second);
      rec.f_first = l1.f;
      rec.f_second = l2.f;
      rec.ftp_first = l1.ftp;
      rec.ftp_second = l2.ftp;
    }
    if (!ok) {
      result.warnings.push_back("branch " + std::to_string(idx) +
                                " discarded: placement does not match its case");
      continue;
    }

    const bool duplicate = std::any_of(
        result.orbits.begin(), result.orbits.end(), [&](const CriticalOrbitRecord& o) {
          return (o.config.coordinates() - config.coordinates()).lpNorm<Eigen::Infinity>() <=
                 1e-9 * std::max(1.0, hi - lo);
        });
    if (duplicate) {
      result.warnings.push_back("branch " + std::to_string(idx) + " duplicates an earlier orbit");
      continue;
    }

    CriticalOrbitRecord orbit;
    orbit.config = config;
    orbit.case_vector = cases;
    orbit.steps = std::move(records);
    orbit.residual = r;
    orbit.inertia = inertia(paper_hessian(system, config), options.zero_tol);
    orbit.nondegenerate = orbit.inertia.n_zero == 3;
    orbit.partition = canonical_partition(g, config, options.col_tol);
    orbit.edges = g.edges();
    for (const auto& e : g.edges()) orbit.distances.push_back(config.distance(e.u, e.v));
    for (const auto& part : orbit.partition.parts) {
      const Subsystem sub = make_subsystem(system, part.edges);
      orbit.part_inertia.push_back(inertia(
          paper_hessian(sub.system, restrict_configuration(config, sub.vertices)),
          options.zero_tol));
    }
    result.orbits.push_back(std::move(orbit));
  }
  return result;
}

}  // namespace trilaman
