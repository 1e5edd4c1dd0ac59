#include "cvreal/grid.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/FFT>

#include "cvreal/error.hpp"

namespace cvreal {

namespace {

// exp(i 2 pi a / n) with the integer numerator reduced first, so large
// products k*l do not lose phase accuracy.
Complex root_of_unity(long long a, long long n) {
  long long r = a % n;
  if (r < 0) r += n;
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / static_cast<double>(n));
}

}  // namespace

GridSpec::GridSpec(double hbar, double delta_q, int xi)
    : hbar_(hbar),
      delta_q_(delta_q),
      xi_(xi),
      delta_p_(2.0 * kPi * hbar / (xi * delta_q)),
      half_width_((xi - 1) / 2) {}

Index GridSpec::slot(int k) const {
  if (!contains(k)) {
    throw IndexError("grid index " + std::to_string(k) + " outside [-" +
                     std::to_string(half_width_) + ", " + std::to_string(half_width_) + "]");
  }
  return static_cast<Index>(k + half_width_);
}

GridSpec make_grid(double delta_q, int xi, double hbar) {
  if (xi < 3 || xi % 2 == 0) {
    throw DimensionError("grid dimension must be an odd integer >= 3, got " + std::to_string(xi));
  }
  if (!(delta_q > 0.0) || !std::isfinite(delta_q)) {
    throw DomainError("position resolution must be positive");
  }
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw DomainError("hbar must be positive");
  }
  return GridSpec(hbar, delta_q, xi);
}

CMatrix fourier_matrix(const GridSpec& grid) {
  const Index n = grid.dim();
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  CMatrix f(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      const long long l = grid.index(a);
      const long long k = grid.index(b);
      f(a, b) = norm * root_of_unity(k * l, n);
    }
  }
  return f;
}

RMatrix projector_q(const GridSpec& grid, int k) {
  RMatrix p = RMatrix::Zero(grid.dim(), grid.dim());
  const Index s = grid.slot(k);
  p(s, s) = 1.0;
  return p;
}

CMatrix projector_p(const GridSpec& grid, int l) {
  const Index s = grid.slot(l);
  const CVector column = fourier_matrix(grid).col(s);
  return column * column.adjoint();
}

CMatrix translation_op(const GridSpec& grid, int n) {
  const Index dim = grid.dim();
  CVector phases(dim);
  for (Index s = 0; s < dim; ++s) {
    phases(s) = root_of_unity(-static_cast<long long>(n) * grid.index(s), dim);
  }
  const CMatrix f = fourier_matrix(grid);
  return f * phases.asDiagonal() * f.adjoint();
}

RMatrix position_operator(const GridSpec& grid) {
  RVector diag(grid.dim());
  for (Index s = 0; s < grid.dim(); ++s) diag(s) = grid.q(grid.index(s));
  return diag.asDiagonal();
}

CMatrix momentum_operator(const GridSpec& grid) {
  RVector diag(grid.dim());
  for (Index s = 0; s < grid.dim(); ++s) diag(s) = grid.p(grid.index(s));
  const CMatrix f = fourier_matrix(grid);
  CMatrix p = f * diag.cast<Complex>().asDiagonal() * f.adjoint();
  // Restore exact Hermiticity lost to rounding in the triple product.
  return 0.5 * (p + p.adjoint());
}

CVector momentum_forward_diff(const GridSpec& grid, const CVector& psi) {
  if (psi.size() != grid.dim()) throw DimensionError("coefficient vector does not match grid");
  const Index n = grid.dim();
  const Complex factor = -kI * grid.hbar() / grid.delta_q();
  CVector out(n);
  for (Index s = 0; s < n; ++s) {
    out(s) = factor * (psi((s + 1) % n) - psi(s));
  }
  return out;
}

struct SpectralTransform::Impl {
  Index n;
  double scale;
  CVector pre;   // exp(i 2 pi n L / N) on slot n
  CVector post;  // exp(i 2 pi L j / N) exp(-i 2 pi L^2 / N) on slot j
  mutable Eigen::FFT<double> fft;
};

SpectralTransform::SpectralTransform(const GridSpec& grid) : impl_(std::make_unique<Impl>()) {
  const Index n = grid.dim();
  const long long half = grid.half_width();
  impl_->n = n;
  impl_->scale = 1.0 / std::sqrt(static_cast<double>(n));
  impl_->pre.resize(n);
  impl_->post.resize(n);
  const Complex global = root_of_unity(-half * half, n);
  for (Index s = 0; s < n; ++s) {
    impl_->pre(s) = root_of_unity(static_cast<long long>(s) * half, n);
    impl_->post(s) = root_of_unity(static_cast<long long>(s) * half, n) * global;
  }
}

SpectralTransform::~SpectralTransform() = default;
SpectralTransform::SpectralTransform(SpectralTransform&&) noexcept = default;
SpectralTransform& SpectralTransform::operator=(SpectralTransform&&) noexcept = default;

CVector SpectralTransform::to_momentum(const CVector& position_coeffs) const {
  if (position_coeffs.size() != impl_->n) throw DimensionError("coefficient vector does not match grid");
  CVector in = position_coeffs.cwiseProduct(impl_->pre);
  CVector out(impl_->n);
  impl_->fft.fwd(out, in);
  return impl_->scale * out.cwiseProduct(impl_->post);
}

CVector SpectralTransform::to_position(const CVector& momentum_coeffs) const {
  if (momentum_coeffs.size() != impl_->n) throw DimensionError("coefficient vector does not match grid");
  CVector in = momentum_coeffs.cwiseProduct(impl_->post.conjugate());
  CVector out(impl_->n);
  impl_->fft.inv(out, in);  // includes the 1/N factor
  const double rescale = static_cast<double>(impl_->n) * impl_->scale;
  return rescale * out.cwiseProduct(impl_->pre.conjugate());
}

CVector to_momentum(const GridSpec& grid, const CVector& position_coeffs) {
  return SpectralTransform(grid).to_momentum(position_coeffs);
}

CVector to_position(const GridSpec& grid, const CVector& momentum_coeffs) {
  return SpectralTransform(grid).to_position(momentum_coeffs);
}

}  // namespace cvreal
