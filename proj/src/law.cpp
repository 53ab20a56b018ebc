#include "trilaman/law.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "trilaman/error.hpp"

namespace trilaman {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

class StretchNode final : public detail::LawNode {
 public:
  StretchNode(double k, double c) : k_(k), c_(c) {}
  std::pair<double, double> eval_tilde(double d) const override {
    return {k_ * (d - c_ / d), k_ * (1.0 + c_ / (d * d))};
  }
  std::optional<double> closed_potential(double d) const override {
    return k_ * (0.5 * (d * d - 1.0) - c_ * std::log(d));
  }
  bool class_f() const override { return k_ > 0.0 && c_ > 0.0; }
  std::string describe() const override { return "S(k=" + fmt(k_) + ",c=" + fmt(c_) + ")"; }

 private:
  double k_, c_;
};

class PowerNode final : public detail::LawNode {
 public:
  PowerNode(double k, double alpha, double c) : k_(k), alpha_(alpha), c_(c) {}
  std::pair<double, double> eval_tilde(double d) const override {
    const double da = std::pow(d, alpha_);
    return {k_ * (da - c_ / d), k_ * (alpha_ * da / d + c_ / (d * d))};
  }
  std::optional<double> closed_potential(double d) const override {
    return k_ * ((std::pow(d, alpha_ + 1.0) - 1.0) / (alpha_ + 1.0) - c_ * std::log(d));
  }
  bool class_f() const override { return k_ > 0.0 && alpha_ > 0.0 && c_ > 0.0; }
  std::string describe() const override {
    return "power(k=" + fmt(k_) + ",alpha=" + fmt(alpha_) + ",c=" + fmt(c_) + ")";
  }

 private:
  double k_, alpha_, c_;
};

class CustomNode final : public detail::LawNode {
 public:
  CustomNode(std::string name, std::function<double(double)> ft, std::function<double(double)> ftp,
             std::function<double(double)> potential, bool class_f)
      : name_(std::move(name)),
        ft_(std::move(ft)),
        ftp_(std::move(ftp)),
        potential_(std::move(potential)),
        class_f_(class_f) {}
  std::pair<double, double> eval_tilde(double d) const override { return {ft_(d), ftp_(d)}; }
  std::optional<double> closed_potential(double d) const override {
    if (!potential_) return std::nullopt;
    return potential_(d);
  }
  bool class_f() const override { return class_f_; }
  std::string describe() const override { return name_; }

 private:
  std::string name_;
  std::function<double(double)> ft_, ftp_, potential_;
  bool class_f_;
};

class BumpNode final : public detail::LawNode {
 public:
  explicit BumpNode(PerturbationBump bump) : bump_(bump) {}
  std::pair<double, double> eval_tilde(double d) const override { return bump_.eval(d); }
  std::optional<double> closed_potential(double d) const override {
    return bump_.antiderivative(d) - bump_.antiderivative(1.0);
  }
  bool class_f() const override { return false; }
  std::string describe() const override {
    return "bump(d0=" + fmt(bump_.center) + ",w=" + fmt(bump_.half_width) +
           ",value=" + fmt(bump_.value) + ",slope=" + fmt(bump_.slope) + ")";
  }

 private:
  PerturbationBump bump_;
};

class SumNode final : public detail::LawNode {
 public:
  SumNode(Law a, Law b, bool class_f) : a_(std::move(a)), b_(std::move(b)), class_f_(class_f) {}
  std::pair<double, double> eval_tilde(double d) const override {
    const auto [fa, fpa] = a_.node().eval_tilde(d);
    const auto [fb, fpb] = b_.node().eval_tilde(d);
    return {fa + fb, fpa + fpb};
  }
  std::optional<double> closed_potential(double d) const override {
    auto pa = a_.node().closed_potential(d);
    auto pb = b_.node().closed_potential(d);
    if (!pa || !pb) return std::nullopt;
    return *pa + *pb;
  }
  bool class_f() const override { return class_f_; }
  std::string describe() const override { return a_.describe() + " + " + b_.describe(); }

 private:
  Law a_, b_;
  bool class_f_;
};

class ScaledNode final : public detail::LawNode {
 public:
  ScaledNode(Law inner, double outer, double scale)
      : inner_(std::move(inner)), outer_(outer), scale_(scale) {}
  std::pair<double, double> eval_tilde(double d) const override {
    const auto [ft, ftp] = inner_.node().eval_tilde(scale_ * d);
    return {outer_ * ft, outer_ * scale_ * ftp};
  }
  std::optional<double> closed_potential(double d) const override {
    // integral_1^d outer * F(scale x) dx = (outer / scale) [Phi(scale d) - Phi(scale)]
    auto hi = inner_.node().closed_potential(scale_ * d);
    auto lo = inner_.node().closed_potential(scale_);
    if (!hi || !lo) return std::nullopt;
    return outer_ / scale_ * (*hi - *lo);
  }
  bool class_f() const override { return inner_.class_f() && outer_ > 0.0 && scale_ > 0.0; }
  std::string describe() const override {
    return fmt(outer_) + "*[" + inner_.describe() + "](" + fmt(scale_) + "d)";
  }

 private:
  Law inner_;
  double outer_, scale_;
};

class ReducedNode final : public detail::LawNode {
 public:
  ReducedNode(Law f23, Law f12, Law f13, ReductionCase c)
      : f23_(std::move(f23)), f12_(std::move(f12)), f13_(std::move(f13)), case_(c) {}
  std::pair<double, double> eval_tilde(double d) const override {
    const auto vi = virtual_interaction(f12_, f13_, case_, d);
    const auto [ft, ftp] = f23_.node().eval_tilde(d);
    return {ft + vi.g, ftp + vi.gprime};
  }
  std::optional<double> closed_potential(double) const override { return std::nullopt; }
  bool class_f() const override { return true; }
  std::string describe() const override {
    return std::string("reduced[") + to_string(case_) + "](" + f23_.describe() + "; " +
           f12_.describe() + ", " + f13_.describe() + ")";
  }

 private:
  Law f23_, f12_, f13_;
  ReductionCase case_;
};

// Smallest x = start * 2^-k with fn(x) < 0, found by halving.
std::optional<double> shrink_until_negative(const std::function<double(double)>& fn, double start) {
  double x = start;
  for (int i = 0; i < 1100 && x > 0.0; ++i, x *= 0.5)
    if (fn(x) < 0.0) return x;
  return std::nullopt;
}

std::optional<double> grow_until_positive(const std::function<double(double)>& fn, double start) {
  double x = start;
  for (int i = 0; i < 1100 && std::isfinite(x); ++i, x *= 2.0)
    if (fn(x) > 0.0) return x;
  return std::nullopt;
}

}  // namespace

const char* to_string(ReductionCase c) {
  switch (c) {
    case ReductionCase::Between: return "between";
    case ReductionCase::LeftOutside: return "left_outside";
    case ReductionCase::RightOutside: return "right_outside";
  }
  return "unknown";
}

ReductionCase reduction_case_from_string(const std::string& s) {
  for (auto c : kAllReductionCases)
    if (s == to_string(c)) return c;
  throw Error(ErrorCode::SpecError, "unknown reduction case '" + s + "'");
}

// ---------------------------------------------------------------- bumps

std::pair<double, double> PerturbationBump::eval(double d) const {
  const double w = half_width;
  if (d <= center - w || d >= center + w) return {0.0, 0.0};
  if (d <= center) {
    const double t = (d - (center - w)) / w;
    const double h01 = t * t * (3.0 - 2.0 * t), h11 = t * t * (t - 1.0);
    const double dh01 = 6.0 * t * (1.0 - t), dh11 = t * (3.0 * t - 2.0);
    return {value * h01 + w * slope * h11, (value * dh01 + w * slope * dh11) / w};
  }
  const double t = (d - center) / w;
  const double h00 = 1.0 + t * t * (2.0 * t - 3.0), h10 = t * (t - 1.0) * (t - 1.0);
  const double dh00 = 6.0 * t * (t - 1.0), dh10 = (t - 1.0) * (3.0 * t - 1.0);
  return {value * h00 + w * slope * h10, (value * dh00 + w * slope * dh10) / w};
}

double PerturbationBump::antiderivative(double d) const {
  const double w = half_width;
  if (d <= center - w) return 0.0;
  const double left_total = w * (0.5 * value - w * slope / 12.0);
  if (d <= center) {
    const double t = (d - (center - w)) / w;
    const double t3 = t * t * t, t4 = t3 * t;
    return w * (value * (t3 - 0.5 * t4) + w * slope * (0.25 * t4 - t3 / 3.0));
  }
  if (d >= center + w) return w * value;
  const double t = (d - center) / w;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  return left_total + w * (value * (0.5 * t4 - t3 + t) +
                           w * slope * (0.25 * t4 - 2.0 * t3 / 3.0 + 0.5 * t2));
}

double PerturbationBump::max_abs_slope() const {
  // The derivative of each Hermite piece is quadratic in t; check the ends
  // and the interior vertex of both pieces.
  double best = std::abs(slope);
  const double w = half_width;
  for (int piece = 0; piece < 2; ++piece) {
    for (int i = 0; i <= 200; ++i) {
      const double d = center + (piece == 0 ? -1.0 : 1.0) * w * (i / 200.0);
      best = std::max(best, std::abs(eval(d).second));
    }
  }
  return best;
}

PerturbationBump make_bump(double d0, double value, double slope, double width) {
  if (!(width > 0.0) || !(d0 - width > 0.0))
    throw Error(ErrorCode::InvalidSupport, "bump support must lie in (0, inf)");
  return PerturbationBump{d0, width, value, slope};
}

// ---------------------------------------------------------------- Law

Law Law::stretch(double k, double c) { return Law(std::make_shared<StretchNode>(k, c)); }

Law Law::power(double k, double alpha, double c) {
  return Law(std::make_shared<PowerNode>(k, alpha, c));
}

Law Law::custom(std::string name, std::function<double(double)> ft,
                std::function<double(double)> ftp, std::function<double(double)> potential) {
  Law probe(std::make_shared<CustomNode>(name, ft, ftp, potential, false));
  const bool ok = validate_class_f(probe).passed();
  return Law(std::make_shared<CustomNode>(std::move(name), std::move(ft), std::move(ftp),
                                          std::move(potential), ok));
}

Law Law::zero() {
  return Law(std::make_shared<CustomNode>(
      "zero", [](double) { return 0.0; }, [](double) { return 0.0; },
      [](double) { return 0.0; }, false));
}

Law Law::from_bump(const PerturbationBump& bump) {
  return Law(std::make_shared<BumpNode>(bump));
}

Law Law::scaled(const Law& inner, double outer, double inner_scale) {
  return Law(std::make_shared<ScaledNode>(inner, outer, inner_scale));
}

LawValue Law::eval(double d) const {
  if (!(d > 0.0)) throw Error(ErrorCode::NonPositiveDistance, "distance must be positive");
  const auto [ft, ftp] = node_->eval_tilde(d);
  return {ft / d, ft, ftp};
}

double Law::potential(double d) const {
  if (!(d > 0.0)) throw Error(ErrorCode::NonPositiveDistance, "distance must be positive");
  if (auto closed = node_->closed_potential(d)) return *closed;
  if (d == 1.0) return 0.0;
  auto integrand = [this](double x) { return node_->eval_tilde(x).first; };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 1.0, d, 20,
                                                                       1e-12);
}

bool Law::has_closed_potential() const { return node_->closed_potential(1.0).has_value(); }
bool Law::class_f() const { return node_->class_f(); }
std::string Law::describe() const { return node_->describe(); }

// ---------------------------------------------------------------- root solving

namespace detail {

double solve_increasing(const std::function<std::pair<double, double>(double)>& fn, double lo,
                        double hi) {
  double x = 0.5 * (lo + hi);
  double step_old = hi - lo;
  auto [v, dv] = fn(x);
  for (int it = 0; it < 500; ++it) {
    if (v == 0.0) return x;
    if (v < 0.0)
      lo = x;
    else
      hi = x;
    const double newton = x - v / dv;
    const bool use_newton = dv > 0.0 && std::isfinite(newton) && newton > lo && newton < hi &&
                            std::abs(2.0 * v) <= std::abs(step_old * dv);
    const double next = use_newton ? newton : 0.5 * (lo + hi);
    step_old = std::abs(next - x);
    if (step_old <= 2.0 * kEps * std::abs(x) || next <= lo || next >= hi) {
      // Converged to machine precision: keep whichever endpoint is closer.
      return next;
    }
    x = next;
    std::tie(v, dv) = fn(x);
  }
  return x;
}

}  // namespace detail

double rest_length(const Law& law) {
  if (!law.class_f()) throw Error(ErrorCode::NotClassF, "rest length needs a class-F law");
  const auto& node = law.node();
  auto value = [&](double d) { return node.eval_tilde(d).first; };
  if (value(1.0) == 0.0) return 1.0;
  auto lo = shrink_until_negative(value, 1.0);
  auto hi = grow_until_positive(value, 1.0);
  if (!lo || !hi) throw Error(ErrorCode::NoRoot, "cannot bracket the zero of " + law.describe());
  return detail::solve_increasing([&](double d) { return node.eval_tilde(d); }, *lo, *hi);
}

// ---------------------------------------------------------------- class F probe

std::vector<double> default_probe_grid(int points) {
  std::vector<double> grid(points);
  const double lo = std::log(1e-4), hi = std::log(1e3);
  for (int i = 0; i < points; ++i) grid[i] = std::exp(lo + (hi - lo) * i / (points - 1));
  return grid;
}

ClassFReport validate_class_f(const Law& law, const std::vector<double>& grid) {
  ClassFReport report;
  int last_sign = 0, first_sign = 0;
  for (double d : grid) {
    const LawValue v = law.eval(d);
    if (!(v.ftp > 0.0)) {
      if (report.c1_monotone) report.monotonicity_witness = d;
      report.c1_monotone = false;
    }
    if (std::abs(v.ft - d * v.f) > 1e-12 * std::max(1.0, std::abs(v.ft))) report.consistency = false;
    const int sign = (v.ft > 0.0) - (v.ft < 0.0);
    if (sign == 0) continue;
    if (first_sign == 0) first_sign = sign;
    if (last_sign != 0 && sign != last_sign) ++report.sign_changes;
    last_sign = sign;
  }
  report.c1_unique_zero = report.sign_changes == 1 && first_sign < 0 && last_sign > 0;

  // Collision barrier surrogate: the potential diverges at 0+ iff f~ blows up
  // at least like -1/d, i.e. d * f~(d) stays bounded away from zero.
  const double probes[] = {1e-4, 1e-6, 1e-8};
  bool negative = true;
  double m[3];
  for (int i = 0; i < 3; ++i) {
    const double ft = law.eval(probes[i]).ft;
    negative = negative && ft < 0.0;
    m[i] = probes[i] * ft;
  }
  report.small_d_probe = m[2];
  report.c2_collision_barrier = negative && std::abs(m[2]) >= 0.5 * std::abs(m[0]);
  return report;
}

// ---------------------------------------------------------------- virtual interactions

VirtualInteraction virtual_interaction(const Law& f12, const Law& f13, ReductionCase c,
                                       double d23) {
  if (!(d23 > 0.0)) throw Error(ErrorCode::NonPositiveDistance, "d23 must be positive");
  const auto& n12 = f12.node();
  const auto& n13 = f13.node();
  VirtualInteraction out;

  if (c == ReductionCase::Between) {
    // x = d12 in (0, d23); h(x) = f~12(x) - f~13(d23 - x) is increasing.
    auto h = [&](double x) { return n12.eval_tilde(x).first - n13.eval_tilde(d23 - x).first; };
    double lo = 0.5 * d23, hi = 0.5 * d23;
    const double hm = h(lo);
    if (hm < 0.0) {
      double gap = 0.25 * d23;
      for (;;) {
        hi = d23 - gap;
        if (!(hi < d23) || gap <= 0.0)
          throw Error(ErrorCode::NoRoot, "cannot bracket the balance position");
        if (h(hi) > 0.0) break;
        gap *= 0.5;
      }
    } else if (hm > 0.0) {
      auto found = shrink_until_negative(h, 0.25 * d23);
      if (!found) throw Error(ErrorCode::NoRoot, "cannot bracket the balance position");
      lo = *found;
    }
    double x = lo;
    if (hm != 0.0) {
      x = detail::solve_increasing(
          [&](double t) {
            const auto [a, da] = n12.eval_tilde(t);
            const auto [b, db] = n13.eval_tilde(d23 - t);
            return std::pair{a - b, da + db};
          },
          lo, hi);
    }
    out.d12 = x;
    out.d13 = d23 - x;
  } else {
    // x = distance to the inner parent; the outer parent sits at x + d23.
    const bool left = c == ReductionCase::LeftOutside;
    const auto& inner = left ? n12 : n13;
    const auto& outer = left ? n13 : n12;
    auto h = [&](double x) { return inner.eval_tilde(x).first + outer.eval_tilde(x + d23).first; };
    auto lo = shrink_until_negative(h, 1.0);
    auto hi = grow_until_positive(h, 1.0);
    if (!lo || !hi) throw Error(ErrorCode::NoRoot, "cannot bracket the balance position");
    const double x = detail::solve_increasing(
        [&](double t) {
          const auto [a, da] = inner.eval_tilde(t);
          const auto [b, db] = outer.eval_tilde(t + d23);
          return std::pair{a + b, da + db};
        },
        *lo, *hi);
    out.d12 = left ? x : x + d23;
    out.d13 = left ? x + d23 : x;
  }

  const auto [ft12, ftp12] = n12.eval_tilde(out.d12);
  const auto [ft13, ftp13] = n13.eval_tilde(out.d13);
  switch (c) {
    case ReductionCase::Between:
      out.g = ft12;
      out.residual = std::abs(ft12 - ft13);
      break;
    case ReductionCase::LeftOutside:
      out.g = -ft12;
      out.residual = std::abs(ft12 + ft13);
      break;
    case ReductionCase::RightOutside:
      out.g = -ft13;
      out.residual = std::abs(ft12 + ft13);
      break;
  }
  out.gprime = ftp12 * ftp13 / (ftp12 + ftp13);
  return out;
}

Law reduced_law(const Law& f23, const Law& f12, const Law& f13, ReductionCase c) {
  if (!f23.class_f() || !f12.class_f() || !f13.class_f())
    throw Error(ErrorCode::NotClassF, "reduced laws need class-F inputs");
  return Law::from_node(std::make_shared<ReducedNode>(f23, f12, f13, c));
}

LiftedLaws lift_reduced_law(const Law& fstar) {
  if (!fstar.class_f()) throw Error(ErrorCode::NotClassF, "lift needs a class-F law");
  // In f~ terms: f~23(d) = f~*(d) / 2 and f~12(d) = f~13(d) = f~*(2d) / 2.
  Law side = Law::scaled(fstar, 0.5, 2.0);
  return {side, side, Law::scaled(fstar, 0.5, 1.0)};
}

Law sum_laws(const Law& a, const Law& b) {
  if (a.class_f() && b.class_f())
    return Law::from_node(std::make_shared<SumNode>(a, b, true));
  Law probe = Law::from_node(std::make_shared<SumNode>(a, b, false));
  const bool ok = validate_class_f(probe).passed();
  return Law::from_node(std::make_shared<SumNode>(a, b, ok));
}

Law sum_laws(const Law& a, const PerturbationBump& b) { return sum_laws(a, Law::from_bump(b)); }

}  // namespace trilaman
