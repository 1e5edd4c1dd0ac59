#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvreal/grid.hpp"
#include "cvreal/states.hpp"

namespace cvreal {

enum class Regime { underdamped, critical, overdamped };

std::string_view to_string(Regime regime);

// Caldirola-Kanai oscillator h_t = p^2 e^{-2 tau} / 2m + k q^2 e^{2 tau} / 2,
// tau = lambda t. The damping discriminant zeta^2 = 1 - omega^2 / lambda^2 is
// stored signed: negative in the underdamped regime.
class CKParams {
 public:
  static CKParams physical(double lambda, double mass, double spring, double sigma0, double hbar = 1.0);

  // Dimensionless groups epsilon = k sigma0^2 / (hbar lambda) and
  // tau_E = lambda t_E, in units hbar = sigma0 = lambda = 1.
  static CKParams dimensionless(double epsilon, double tau_e);

  // Overdamped or critical parameters with the given zeta in [0, 1).
  static CKParams from_zeta(double zeta, double tau_e);

  double lambda() const { return lambda_; }
  double mass() const { return mass_; }
  double spring() const { return spring_; }
  double sigma0() const { return sigma0_; }
  double hbar() const { return hbar_; }

  double omega() const;
  double zeta_squared() const { return zeta_sq_; }
  // |zeta|; the oscillation frequency ratio in the underdamped regime.
  double zeta() const;
  double t_e() const { return 2.0 * mass_ * sigma0_ * sigma0_ / hbar_; }
  double epsilon() const { return spring_ * sigma0_ * sigma0_ / (hbar_ * lambda_); }
  double tau_e() const { return lambda_ * t_e(); }
  double tau(double t) const { return lambda_ * t; }
  Regime regime() const;

 private:
  CKParams(double lambda, double mass, double spring, double sigma0, double hbar);

  double lambda_;
  double mass_;
  double spring_;
  double sigma0_;
  double hbar_;
  double zeta_sq_;
};

struct ClassicalState {
  double q;
  double p;  // canonical momentum
  double v;  // velocity p e^{-2 tau} / m
  double h;  // value of the time-dependent Hamiltonian
};

ClassicalState classical_trajectory(const CKParams& params, double q0, double p0, double t);

// Asymptotic growth rates in tau of |q_t|, |p_t|, |v_t|. The critical regime
// carries an extra tau^polynomial_power prefactor.
struct RegimeExponents {
  Regime regime;
  double q_exponent;
  double p_exponent;
  double v_exponent;
  int polynomial_power;
  std::string h_behavior;
};

RegimeExponents regime_exponents(const CKParams& params);

struct CKCoefficients {
  double u;        // classical solution with u_0 = 1, du/dt(0) = 0
  double c_plus;
  double c_zero;
  double c_minus;
  double T;        // free-evolution time of the factorized propagator
  bool regular;    // false past a zero of u_t (underdamped only)
};

CKCoefficients ck_coefficients(const CKParams& params, double t);

struct Widths {
  double delta_q;
  double delta_p;
  double delta_v;
  double alpha;
  double beta;
  double f;
  double chi;
};

// Position and momentum widths of the evolved minimum-uncertainty packet from
// the factorized-propagator coefficients.
Widths widths(const CKParams& params, double t);

// Same widths propagated through the classical linear phase-space flow,
// valid in every regime.
struct PhaseSpaceWidths {
  double delta_q;
  double delta_p;
};
PhaseSpaceWidths phase_space_widths(const CKParams& params, double t);

struct Centroid {
  double mean_q;
  double mean_v;
};

Centroid centroid(const CKParams& params, double q0, double p0, double t);

double density_q(const CKParams& params, double q0, double p0, double q, double t);
double density_p(const CKParams& params, double q0, double p0, double p, double t);

struct InitialConditions {
  double q0 = 0.0;
  double p0 = 0.0;
};

struct Resolutions {
  double delta_q;
  double delta_p;
};

struct CKSnapshot {
  double t;
  double tau;
  CKCoefficients coefficients;
  Widths widths;
  double mean_q;
  double mean_v;
  // Continuum Gaussian irrealities ln(sqrt(2 pi e) width / resolution).
  double irreality_q;
  double irreality_p;
  double irreality_v;
  // Exact irrealities of the discretized Gaussian, meaningful below one cell.
  double irreality_q_discrete;
  double irreality_p_discrete;
  double irreality_v_discrete;
  // Changes since t = 0; independent of the resolutions.
  double delta_irreality_q;
  double delta_irreality_p;
  double uncertainty_ratio;  // delta_q delta_p / (hbar / 2)
  bool valid_q;
  bool valid_p;
  bool valid_v;
};

CKSnapshot snapshot(const CKParams& params, const InitialConditions& initial, const Resolutions& res, double t);

// Snapshots at ascending times.
std::vector<CKSnapshot> irreality_series(const CKParams& params, const InitialConditions& initial,
                                         const Resolutions& res, std::span<const double> times);

// Strang split-step integration of i hbar d/dt psi = H_t psi on the grid,
// kinetic factor diagonal in momentum, potential factor diagonal in position,
// tau taken at each step midpoint. Throws WindowError if more than 1e-6 of the
// mass reaches the outer 5% of either representation.
PureState tdse_propagate(const GridSpec& grid, const CKParams& params, const PureState& psi0, double t_final,
                         double dt);
PureState tdse_propagate(const GridSpec& grid, const CKParams& params, const PureState& psi0, double t_start,
                         double t_final, double dt);

}  // namespace cvreal
