#pragma once

#include "cvreal/ck.hpp"
#include "cvreal/grid.hpp"
#include "cvreal/types.hpp"

namespace cvreal {

// Particle of mass m and pointer of mass m_p. The relative coordinate
// q = x - x_p follows CK dynamics with the reduced mass; the center of mass is
// a free Gaussian of initial width sigma_cm.
class PointerParams {
 public:
  static PointerParams from_masses(double m, double m_p, double sigma_cm, double lambda, double spring,
                                   double sigma0, double hbar = 1.0);
  // Keeps the relative dynamics fixed (its mass is taken as the reduced mass)
  // and splits it into bodies with m / m_p = mass_ratio.
  static PointerParams from_relative(const CKParams& relative, double mass_ratio, double sigma_cm);

  double m() const { return m_; }
  double m_p() const { return m_p_; }
  double total_mass() const { return m_ + m_p_; }
  double reduced_mass() const { return m_ * m_p_ / (m_ + m_p_); }
  double frac_m() const { return m_ / (m_ + m_p_); }
  double frac_mp() const { return m_p_ / (m_ + m_p_); }
  double sigma_cm() const { return sigma_cm_; }
  double t_e_cm() const { return 2.0 * total_mass() * sigma_cm_ * sigma_cm_ / relative_.hbar(); }
  const CKParams& relative() const { return relative_; }

 private:
  PointerParams(double m, double m_p, double sigma_cm, CKParams relative);

  double m_;
  double m_p_;
  double sigma_cm_;
  CKParams relative_;
};

// sigma_cm that makes the initial state a product in lab coordinates,
// gamma_0^2 = 1 / (frac_m frac_mp).
double product_state_sigma_cm(const CKParams& relative, double mass_ratio);

double cm_width(const PointerParams& params, double t);
double gamma(const PointerParams& params, double t);

// Tr(rho_x^2) = [g^2 / ((1 + fm^2 g^2)(1 + fmp^2 g^2))]^(1/2).
double purity_from_gamma(double gamma, double frac_m, double frac_mp);
double reduced_purity(const PointerParams& params, double t);
double entanglement(const PointerParams& params, double t);

struct QuadratureResult {
  double purity;
  double error_estimate;  // change under the last grid refinement
  Index points;           // per axis at the accepted level
};

// Tr(rho_x^2) of Psi(x, y) = exp(-(fm x + fmp y)^2 / (4 s^2) - (x - y)^2 / (4 d^2))
// by rectangle-rule quadrature on a refined 2D grid. d and s are the position
// standard deviations of the relative and center-of-mass packets. The
// packets' chirps are left out; see README. Throws ConvergenceError when the
// grid would exceed max_points per axis before tol is met.
QuadratureResult envelope_purity_quadrature(double d, double s, double frac_m, double frac_mp, double tol = 1e-10,
                                            Index max_points = 2400);

double purity_oracle(const PointerParams& params, double t);

// Diagonal pointer state with Gaussian weights of width L/8 slots: the
// asymptotic envelope rescaled to the grid window.
CMatrix asymptotic_pointer_state(const PointerParams& params, const GridSpec& grid);

}  // namespace cvreal
