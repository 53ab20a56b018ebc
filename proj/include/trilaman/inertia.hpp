#pragma once

#include <Eigen/Dense>
#include <string>

namespace trilaman {

inline constexpr double kDefaultZeroEigTol = 1e-8;
inline constexpr double kDefaultCollinearTol = 1e-9;
inline constexpr double kDefaultResidualTol = 1e-10;

/// Counts of positive, zero and negative eigenvalues. Arithmetic and
/// comparison act on the counts only.
struct InertiaTriple {
  int n_plus = 0;
  int n_zero = 0;
  int n_minus = 0;
  double zero_tol = kDefaultZeroEigTol;

  int dimension() const { return n_plus + n_zero + n_minus; }

  InertiaTriple operator+(const InertiaTriple& o) const {
    return {n_plus + o.n_plus, n_zero + o.n_zero, n_minus + o.n_minus, zero_tol};
  }
  InertiaTriple operator-(const InertiaTriple& o) const {
    return {n_plus - o.n_plus, n_zero - o.n_zero, n_minus - o.n_minus, zero_tol};
  }
  bool operator==(const InertiaTriple& o) const {
    return n_plus == o.n_plus && n_zero == o.n_zero && n_minus == o.n_minus;
  }

  std::string str() const;
};

/// (1,0,0), (0,1,0) or (0,0,1) by the sign of x; |x| <= zero_band counts as 0.
InertiaTriple sgn(double x, double zero_band = 0.0);

/// Eigenvalues of a symmetric matrix, ascending. Throws NotSymmetric when
/// asymmetric beyond 1e-10 relative.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m);

/// An eigenvalue counts as zero iff |lambda| <= zero_tol * max(1, spectral radius).
InertiaTriple inertia_from_eigenvalues(const Eigen::VectorXd& eigenvalues,
                                       double zero_tol = kDefaultZeroEigTol);
InertiaTriple inertia(const Eigen::MatrixXd& m, double zero_tol = kDefaultZeroEigTol);

}  // namespace trilaman
