#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include <Eigen/Eigenvalues>

#include "cvreal/error.hpp"
#include "cvreal/types.hpp"

namespace cvreal {

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-9;

template <typename Scalar>
struct Spectrum {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  Eigen::Matrix<Real, Eigen::Dynamic, 1> eigenvalues;  // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;
};

// Largest entry of |M - M^dagger|, relative to max(1, max|M|).
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix is not square");
  if (m.size() == 0) return 0.0;
  const double scale = std::max(1.0, static_cast<double>(m.cwiseAbs().maxCoeff()));
  return static_cast<double>((m - m.adjoint()).cwiseAbs().maxCoeff()) / scale;
}

template <typename Derived>
Spectrum<typename Derived::Scalar> eig_hermitian(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const double defect = hermiticity_defect(m);
  if (defect > kHermitianTol) {
    throw StateError("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.eval());
  if (solver.info() != Eigen::Success) throw ConvergenceError("Hermitian eigensolver failed", defect);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace detail {

// Validates a density-matrix spectrum and returns it with the small negative
// eigenvalues allowed by kPsdTol clamped to zero.
template <typename Vector>
Vector clamped_density_spectrum(Vector eigenvalues) {
  const double trace = eigenvalues.sum();
  if (std::abs(trace - 1.0) > kTraceTol) {
    throw StateError("density matrix trace " + std::to_string(trace) + " differs from 1");
  }
  if (eigenvalues.size() > 0 && eigenvalues.minCoeff() < -kPsdTol) {
    throw StateError("density matrix has eigenvalue " + std::to_string(eigenvalues.minCoeff()));
  }
  return eigenvalues.cwiseMax(0.0);
}

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace detail

// Shannon entropy in nats of a probability vector; 0 ln 0 = 0.
inline double shannon_entropy(std::span<const double> probabilities) {
  double s = 0.0;
  for (double p : probabilities) s -= detail::xlogx(p);
  return s;
}

template <typename Derived>
double von_neumann_entropy(const Eigen::MatrixBase<Derived>& rho) {
  auto lambda = detail::clamped_density_spectrum(eig_hermitian(rho).eigenvalues);
  double s = 0.0;
  for (Index i = 0; i < lambda.size(); ++i) s -= detail::xlogx(lambda(i));
  return s;
}

// S(rho || sigma) = Tr[rho (ln rho - ln sigma)]. Returns +infinity when rho has
// weight outside the support of sigma.
template <typename DerivedA, typename DerivedB>
double relative_entropy(const Eigen::MatrixBase<DerivedA>& rho, const Eigen::MatrixBase<DerivedB>& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw DimensionError("relative entropy operands differ in size");
  }
  const auto rho_spec = eig_hermitian(rho);
  const auto rho_eval = detail::clamped_density_spectrum(rho_spec.eigenvalues);
  const auto sigma_spec = eig_hermitian(sigma);
  const auto sigma_eval = detail::clamped_density_spectrum(sigma_spec.eigenvalues);

  double tr_rho_log_rho = 0.0;
  for (Index i = 0; i < rho_eval.size(); ++i) tr_rho_log_rho += detail::xlogx(rho_eval(i));

  double tr_rho_log_sigma = 0.0;
  for (Index j = 0; j < sigma_eval.size(); ++j) {
    const auto v = sigma_spec.eigenvectors.col(j);
    const double weight = std::real(v.dot(rho * v));
    if (sigma_eval(j) <= kPsdTol) {
      if (weight > kPsdTol) return std::numeric_limits<double>::infinity();
      continue;
    }
    tr_rho_log_sigma += weight * std::log(sigma_eval(j));
  }
  return tr_rho_log_rho - tr_rho_log_sigma;
}

template <typename Derived>
double purity(const Eigen::MatrixBase<Derived>& rho) {
  if (hermiticity_defect(rho) > kHermitianTol) throw StateError("matrix is not Hermitian");
  return static_cast<double>(rho.squaredNorm());
}

template <typename Derived>
double linear_entropy(const Eigen::MatrixBase<Derived>& rho) {
  return 1.0 - purity(rho);
}

// Validates Hermiticity, unit trace and positivity of rho.
template <typename Derived>
void require_density_matrix(const Eigen::MatrixBase<Derived>& rho) {
  detail::clamped_density_spectrum(eig_hermitian(rho).eigenvalues);
}

// Jacobi theta sum  sum_k exp(-k^2 / (2 width^2))  over all integers. Direct
// summation to a 1e-15 relative tail below width 2, Poisson-dual series above.
double theta3_gaussian_norm(double width);

// sum over integers k of k^2 exp(-k^2 / (2 w^2)).
double theta3_second_moment(double width);

// Piecewise closed-form approximation of theta3_gaussian_norm.
double n_approx(double width);

// Ordinary least-squares slope of ys against xs.
double least_squares_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace cvreal
