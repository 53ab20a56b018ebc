#pragma once

// Interaction laws and the virtual-interaction calculus.
//
// A law is described by f(d); most of the machinery works with
// f~(d) = d * f(d), the signed magnitude of the pairwise force (positive means
// attraction). Laws are immutable values backed by a shared expression tree,
// so sums, rescalings and reduced laws compose without copying.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace trilaman {

/// (f, f~, f~') at one distance.
struct LawValue {
  double f = 0.0;
  double ft = 0.0;
  double ftp = 0.0;
};

/// Where the removed agent sits relative to its two parents on their line.
/// LeftOutside: the first parent lies between the removed agent and the
/// second parent. RightOutside: the second parent lies in between.
enum class ReductionCase { Between = 0, LeftOutside = 1, RightOutside = 2 };

inline constexpr ReductionCase kAllReductionCases[] = {
    ReductionCase::Between, ReductionCase::LeftOutside, ReductionCase::RightOutside};

const char* to_string(ReductionCase c);
ReductionCase reduction_case_from_string(const std::string& s);

/// Compactly supported C1 bump in f~, built from cubic Hermite pieces on
/// [center - half_width, center] and [center, center + half_width].
struct PerturbationBump {
  double center = 1.0;
  double half_width = 0.5;
  double value = 0.0;  // bump f~ at the centre
  double slope = 0.0;  // bump f~' at the centre

  /// (f~, f~') of the bump at d.
  std::pair<double, double> eval(double d) const;
  /// Integral of the bump's f~ from 0 to d.
  double antiderivative(double d) const;
  /// Largest |f~'| of the bump over its support.
  double max_abs_slope() const;
};

namespace detail {
class LawNode;
}

class Law {
 public:
  /// S(k, c): f(d) = k (1 - c / d^2), f~(d) = k (d - c / d).
  static Law stretch(double k, double c);
  /// f~(d) = k (d^alpha - c / d).
  static Law power(double k, double alpha, double c);
  /// User-supplied f~ and f~'. Class membership is probed numerically.
  /// `potential`, when given, must return the integral of f~ from 1 to d.
  static Law custom(std::string name, std::function<double(double)> ft,
                    std::function<double(double)> ftp,
                    std::function<double(double)> potential = {});
  static Law zero();
  static Law from_bump(const PerturbationBump& bump);
  /// f~(d) = outer * inner~(inner_scale * d).
  static Law scaled(const Law& inner, double outer, double inner_scale);

  /// Throws NonPositiveDistance for d <= 0.
  LawValue eval(double d) const;
  double f(double d) const { return eval(d).f; }
  double ft(double d) const { return eval(d).ft; }
  double ftp(double d) const { return eval(d).ftp; }

  /// Pairwise potential: integral of f~ from 1 to d. Closed form where the
  /// law provides one, adaptive Gauss-Kronrod quadrature otherwise.
  double potential(double d) const;
  bool has_closed_potential() const;

  bool class_f() const;
  std::string describe() const;

  static Law from_node(std::shared_ptr<const detail::LawNode> node) { return Law(std::move(node)); }
  const detail::LawNode& node() const { return *node_; }

 private:
  explicit Law(std::shared_ptr<const detail::LawNode> node) : node_(std::move(node)) {}

  std::shared_ptr<const detail::LawNode> node_;
};

inline LawValue eval_law(const Law& law, double d) { return law.eval(d); }

/// Zero of f~. Throws NotClassF for laws outside the class.
double rest_length(const Law& law);

struct ClassFReport {
  bool c1_monotone = true;           // f~' > 0 on every grid point
  int sign_changes = 0;              // of f~ over the grid
  bool c1_unique_zero = false;       // exactly one sign change, - to +
  bool c2_collision_barrier = false; // f~ -> -inf as d -> 0+
  std::optional<double> monotonicity_witness;  // first grid point with f~' <= 0
  double small_d_probe = 0.0;        // d * f~(d) at the smallest probe distance
  bool consistency = true;           // f~ == d * f to 1e-12 relative

  bool c1() const { return c1_monotone && c1_unique_zero; }
  bool passed() const { return c1() && c2_collision_barrier && consistency; }
};

/// Log-spaced probe grid on [1e-4, 1e3].
std::vector<double> default_probe_grid(int points = 240);

ClassFReport validate_class_f(const Law& law, const std::vector<double>& grid);
inline ClassFReport validate_class_f(const Law& law) {
  return validate_class_f(law, default_probe_grid());
}

struct VirtualInteraction {
  double g = 0.0;       // g~23(d23)
  double gprime = 0.0;  // g~23'(d23)
  double d12 = 0.0;
  double d13 = 0.0;
  double residual = 0.0;  // balance residual in f~ units
};

/// Balance of the removed agent 1 against parents 2 and 3 at distance d23:
///   Between:      d12 + d13 = d23, f~12(d12) = f~13(d13), g~ =  f~12(d12)
///   LeftOutside:  d13 = d12 + d23, f~12(d12) + f~13(d13) = 0, g~ = -f~12(d12)
///   RightOutside: d12 = d13 + d23, f~12(d12) + f~13(d13) = 0, g~ = -f~13(d13)
/// and g~' = f~12' f~13' / (f~12' + f~13') in every case.
VirtualInteraction virtual_interaction(const Law& f12, const Law& f13, ReductionCase c,
                                       double d23);

/// f*23 = f23 + g23, evaluated lazily.
Law reduced_law(const Law& f23, const Law& f12, const Law& f13, ReductionCase c);

struct LiftedLaws {
  Law f12;
  Law f13;
  Law f23;
};

/// Three class-F laws whose Between-reduction reproduces `fstar`:
/// f23(d) = f*(d) / 2 and f12(d) = f13(d) = f*(2d).
LiftedLaws lift_reduced_law(const Law& fstar);

/// Pointwise sum. The sum of two class-F laws is class F; any other
/// combination is re-probed on the default grid.
Law sum_laws(const Law& a, const Law& b);
Law sum_laws(const Law& a, const PerturbationBump& b);

/// Throws InvalidSupport unless 0 < width < d0.
PerturbationBump make_bump(double d0, double value, double slope, double width);

namespace detail {

class LawNode {
 public:
  virtual ~LawNode() = default;
  /// (f~, f~') at d > 0.
  virtual std::pair<double, double> eval_tilde(double d) const = 0;
  /// Integral of f~ from 1 to d when available in closed form.
  virtual std::optional<double> closed_potential(double d) const = 0;
  virtual bool class_f() const = 0;
  virtual std::string describe() const = 0;
};

/// Root of a strictly increasing function on (lo, hi), given
/// value(lo) < 0 < value(hi). `fn` returns (value, derivative). Safeguarded
/// Newton: Newton steps inside the bracket, bisection otherwise.
double solve_increasing(const std::function<std::pair<double, double>(double)>& fn, double lo,
                        double hi);

}  // namespace detail

}  // namespace trilaman
