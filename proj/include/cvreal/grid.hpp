#pragma once

#include <memory>

#include "cvreal/types.hpp"

namespace cvreal {

// Finite discretized phase space. Positions q_k = k*delta_q and momenta
// p_l = l*delta_p with k, l in [-L, L]; the dimension xi = 2L + 1 satisfies
// xi * delta_q * delta_p = 2*pi*hbar. Storage slot of index k is k + L.
class GridSpec {
 public:
  double hbar() const { return hbar_; }
  double delta_q() const { return delta_q_; }
  double delta_p() const { return delta_p_; }
  int xi() const { return xi_; }
  int half_width() const { return half_width_; }
  Index dim() const { return xi_; }

  double q(int k) const { return k * delta_q_; }
  double p(int l) const { return l * delta_p_; }

  bool contains(int k) const { return k >= -half_width_ && k <= half_width_; }
  // Throws IndexError when k is outside [-L, L].
  Index slot(int k) const;
  int index(Index slot) const { return static_cast<int>(slot) - half_width_; }

  friend GridSpec make_grid(double delta_q, int xi, double hbar);

 private:
  GridSpec(double hbar, double delta_q, int xi);

  double hbar_;
  double delta_q_;
  int xi_;
  double delta_p_;
  int half_width_;
};

GridSpec make_grid(double delta_q, int xi, double hbar = 1.0);

// Unitary kernel F(l, k) = exp(i 2 pi k l / xi) / sqrt(xi). Column l holds the
// position coefficients of the momentum eigenvector |p_l>, so momentum
// coefficients of a state c are F^dagger c.
CMatrix fourier_matrix(const GridSpec& grid);

RMatrix projector_q(const GridSpec& grid, int k);
CMatrix projector_p(const GridSpec& grid, int l);

// Cyclic shift by n position slots, F diag(exp(-i 2 pi n l / xi)) F^dagger.
CMatrix translation_op(const GridSpec& grid, int n);

RMatrix position_operator(const GridSpec& grid);
CMatrix momentum_operator(const GridSpec& grid);

// First-order forward difference (hbar/i)(psi_{k+1} - psi_k)/delta_q with
// cyclic wrap. Only used to compare against the spectral momentum.
CVector momentum_forward_diff(const GridSpec& grid, const CVector& psi);

// FFT-backed change of basis between position and momentum coefficients.
// Equivalent to multiplying by F^dagger / F, in O(xi log xi).
class SpectralTransform {
 public:
  explicit SpectralTransform(const GridSpec& grid);
  ~SpectralTransform();
  SpectralTransform(SpectralTransform&&) noexcept;
  SpectralTransform& operator=(SpectralTransform&&) noexcept;

  CVector to_momentum(const CVector& position_coeffs) const;
  CVector to_position(const CVector& momentum_coeffs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

CVector to_momentum(const GridSpec& grid, const CVector& position_coeffs);
CVector to_position(const GridSpec& grid, const CVector& momentum_coeffs);

}  // namespace cvreal
