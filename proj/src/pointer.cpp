#include "cvreal/pointer.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <string>

#include "cvreal/error.hpp"
#include "cvreal/states.hpp"

namespace cvreal {

PointerParams::PointerParams(double m, double m_p, double sigma_cm, CKParams relative)
    : m_(m), m_p_(m_p), sigma_cm_(sigma_cm), relative_(relative) {
  if (!(m > 0.0) || !(m_p > 0.0)) throw DomainError("masses must be positive");
  if (!(sigma_cm > 0.0)) throw DomainError("center-of-mass width must be positive");
}

PointerParams PointerParams::from_masses(double m, double m_p, double sigma_cm, double lambda, double spring,
                                         double sigma0, double hbar) {
  if (!(m > 0.0) || !(m_p > 0.0)) throw DomainError("masses must be positive");
  const double mu = m * m_p / (m + m_p);
  return PointerParams(m, m_p, sigma_cm, CKParams::physical(lambda, mu, spring, sigma0, hbar));
}

PointerParams PointerParams::from_relative(const CKParams& relative, double mass_ratio, double sigma_cm) {
  if (!(mass_ratio > 0.0)) throw DomainError("mass ratio must be positive");
  const double mu = relative.mass();
  const double m_p = mu * (1.0 + mass_ratio) / mass_ratio;
  return PointerParams(mass_ratio * m_p, m_p, sigma_cm, relative);
}

double product_state_sigma_cm(const CKParams& relative, double mass_ratio) {
  if (!(mass_ratio > 0.0)) throw DomainError("mass ratio must be positive");
  const double fm = mass_ratio / (1.0 + mass_ratio);
  return relative.sigma0() * std::sqrt(fm * (1.0 - fm));
}

double cm_width(const PointerParams& params, double t) {
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  const double r = t / params.t_e_cm();
  return params.sigma_cm() * std::sqrt(1.0 + r * r);
}

double gamma(const PointerParams& params, double t) {
  return widths(params.relative(), t).delta_q / cm_width(params, t);
}

double purity_from_gamma(double gamma, double frac_m, double frac_mp) {
  const double g2 = gamma * gamma;
  return std::sqrt(g2 / ((1.0 + frac_m * frac_m * g2) * (1.0 + frac_mp * frac_mp * g2)));
}

double reduced_purity(const PointerParams& params, double t) {
  return purity_from_gamma(gamma(params, t), params.frac_m(), params.frac_mp());
}

double entanglement(const PointerParams& params, double t) { return 1.0 - reduced_purity(params, t); }

namespace {

double purity_on_grid(double d, double s, double fm, double fmp, double h, double range_x, double range_y,
                      Index& points) {
  const Index nx = 2 * static_cast<Index>(std::ceil(range_x / h)) + 1;
  const Index ny = 2 * static_cast<Index>(std::ceil(range_y / h)) + 1;
  points = std::max(nx, ny);
  const double x0 = -h * static_cast<double>(nx / 2);
  const double y0 = -h * static_cast<double>(ny / 2);
  RMatrix psi(nx, ny);
  for (Index i = 0; i < nx; ++i) {
    const double x = x0 + h * static_cast<double>(i);
    for (Index j = 0; j < ny; ++j) {
      const double y = y0 + h * static_cast<double>(j);
      const double c = fm * x + fmp * y;
      const double r = x - y;
      psi(i, j) = std::exp(-c * c / (4.0 * s * s) - r * r / (4.0 * d * d));
    }
  }
  // rho_x is proportional to psi psi^T; the cell size cancels in the ratio.
  RMatrix rho;
  rho.noalias() = psi * psi.transpose();
  const double tr = rho.trace();
  return rho.squaredNorm() / (tr * tr);
}

}  // namespace

QuadratureResult envelope_purity_quadrature(double d, double s, double frac_m, double frac_mp, double tol,
                                            Index max_points) {
  if (!(d > 0.0) || !(s > 0.0)) throw DomainError("widths must be positive");
  // |Psi|^2 = exp(-z^T A z) with A = a a^T / (2 s^2) + b b^T / (2 d^2).
  Eigen::Matrix2d a_mat;
  const Eigen::Vector2d a(frac_m, frac_mp);
  const Eigen::Vector2d b(1.0, -1.0);
  a_mat = a * a.transpose() / (2.0 * s * s) + b * b.transpose() / (2.0 * d * d);
  const Eigen::Matrix2d cov = (2.0 * a_mat).inverse();
  const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(2.0 * a_mat).eigenvalues().maxCoeff();
  const double min_sd = 1.0 / std::sqrt(lmax);
  const double range_x = 12.0 * std::sqrt(cov(0, 0));
  const double range_y = 12.0 * std::sqrt(cov(1, 1));

  double h = min_sd / 1.5;
  if (2 * static_cast<Index>(std::ceil(std::max(range_x, range_y) / h)) + 1 > max_points) {
    throw ConvergenceError("purity quadrature needs more than " + std::to_string(max_points) + " points per axis",
                           std::numeric_limits<double>::infinity());
  }
  Index points = 0;
  double previous = purity_on_grid(d, s, frac_m, frac_mp, h, range_x, range_y, points);
  double change = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 8; ++level) {
    h /= 1.5;
    if (2 * static_cast<Index>(std::ceil(std::max(range_x, range_y) / h)) + 1 > max_points) break;
    const double current = purity_on_grid(d, s, frac_m, frac_mp, h, range_x, range_y, points);
    change = std::abs(current - previous);
    previous = current;
    if (change <= tol) return {current, change, points};
  }
  throw ConvergenceError("purity quadrature did not converge to " + std::to_string(tol), change);
}

double purity_oracle(const PointerParams& params, double t) {
  const double d = widths(params.relative(), t).delta_q;
  const double s = cm_width(params, t);
  return envelope_purity_quadrature(d, s, params.frac_m(), params.frac_mp()).purity;
}

CMatrix asymptotic_pointer_state(const PointerParams& params, const GridSpec& grid) {
  static_cast<void>(params);
  const double width = grid.half_width() / 8.0;
  if (!(width > 0.0) || gaussian_leakage(grid, {0, 0, width}) >= kLeakageBound) {
    throw LeakageError("grid too small for the asymptotic pointer envelope");
  }
  RVector weights(grid.dim());
  for (Index s = 0; s < grid.dim(); ++s) {
    const double k = grid.index(s);
    weights(s) = std::exp(-k * k / (2.0 * width * width));
  }
  weights /= weights.sum();
  return CMatrix(weights.cast<Complex>().asDiagonal());
}

}  // namespace cvreal
