#include "trilaman/inertia.hpp"

#include <algorithm>
#include <cmath>

#include "trilaman/error.hpp"

namespace trilaman {

std::string InertiaTriple::str() const {
  return "(" + std::to_string(n_plus) + "," + std::to_string(n_zero) + "," +
         std::to_string(n_minus) + ")";
}

InertiaTriple sgn(double x, double zero_band) {
  if (std::abs(x) <= zero_band) return {0, 1, 0};
  return x > 0.0 ? InertiaTriple{1, 0, 0} : InertiaTriple{0, 0, 1};
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NotSymmetric, "matrix is not square");
  if (m.size() == 0) return Eigen::VectorXd();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

InertiaTriple inertia_from_eigenvalues(const Eigen::VectorXd& eigenvalues, double zero_tol) {
  InertiaTriple out;
  out.zero_tol = zero_tol;
  const double radius = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  const double band = zero_tol * std::max(1.0, radius);
  for (double lambda : eigenvalues) {
    if (std::abs(lambda) <= band)
      ++out.n_zero;
    else if (lambda > 0.0)
      ++out.n_plus;
    else
      ++out.n_minus;
  }
  return out;
}

InertiaTriple inertia(const Eigen::MatrixXd& m, double zero_tol) {
  return inertia_from_eigenvalues(symmetric_eigenvalues(m), zero_tol);
}

}  // namespace trilaman
