#pragma once

#include <iosfwd>

#include "cvreal/grid.hpp"
#include "cvreal/types.hpp"

namespace cvreal {

inline constexpr double kNormTol = 1e-10;
inline constexpr double kLeakageBound = 1e-8;

// Pure state on a grid in the dimensionless convention c_k = sqrt(delta_q) psi(q_k).
class PureState {
 public:
  // Throws DimensionError on size mismatch and DomainError when the
  // coefficients are not normalized to kNormTol.
  PureState(GridSpec grid, CVector coeffs);

  const GridSpec& grid() const { return grid_; }
  const CVector& coeffs() const { return coeffs_; }
  Complex operator[](int k) const { return coeffs_(grid_.slot(k)); }

 private:
  GridSpec grid_;
  CVector coeffs_;
};

// Centers are integer slot indices; width is the dimensionless width
// Delta_q = Delta q / delta_q.
struct GaussianSpec {
  int k_bar = 0;
  int l_bar = 0;
  double width = 1.0;
};

// Probability mass a Gaussian of this spec would place outside [-L, L].
double gaussian_leakage(const GridSpec& grid, const GaussianSpec& spec);

PureState gaussian_state(const GridSpec& grid, const GaussianSpec& spec);

// Minimum-uncertainty packet psi(q) ~ exp(-(q - q0)^2 / (4 sigma^2) + i p0 q / hbar)
// sampled at the grid points, for centers off the lattice. Leakage is checked
// as for gaussian_state.
PureState coherent_packet(const GridSpec& grid, double q0, double p0, double sigma);

// Flat superposition over the |k| <= (width - 1)/2 slots; width must be odd.
PureState uniform_state(const GridSpec& grid, int width);

struct Moments {
  double mean_q;
  double mean_p;
  double sd_q;
  double sd_p;
};

// Means and standard deviations of the exact spectral Q and P.
Moments moments(const PureState& state);

// <psi| P_fd |psi> for the forward-difference momentum. Its imaginary part is
// the discretization residual; the spectral <P> is always real.
Complex forward_difference_mean_p(const PureState& state);

// Probability of finding the particle in (center - width/2, center + width/2)
// when each slot's weight is spread uniformly over its cell of size delta_q.
double window_probability(const PureState& state, double center, double width);

CMatrix density_matrix(const PureState& state);

// Discrete uncertainty product eta = 2 dQ dP / hbar of the minimum-uncertainty
// Gaussian of dimensionless width Delta_q, by direct theta-weighted summation.
double eta(double width);

// Same quantity with the piecewise normalization approximation.
double eta_approx(double width);

// Columnar text "k re im" per line, physical index k.
void write_state(std::ostream& os, const PureState& state);
PureState read_state(std::istream& is, const GridSpec& grid);

}  // namespace cvreal
