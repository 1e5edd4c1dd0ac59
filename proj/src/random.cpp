#include "cvreal/random.hpp"

#include <cmath>

#include <Eigen/QR>

namespace cvreal {

namespace {

CMatrix ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

}  // namespace

CVector haar_state(Index dim, Rng& rng) {
  CVector v = ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

CMatrix haar_unitary(Index dim, Rng& rng) {
  const CMatrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

CMatrix random_density_matrix(Index dim, Rng& rng) {
  std::uniform_int_distribution<Index> rank_dist(1, dim);
  std::exponential_distribution<double> gamma1(1.0);  // Gamma(1) draws give flat Dirichlet weights
  const Index rank = rank_dist(rng);
  CMatrix rho = CMatrix::Zero(dim, dim);
  double total = 0.0;
  for (Index r = 0; r < rank; ++r) {
    const double w = gamma1(rng);
    const CVector psi = haar_state(dim, rng);
    rho += w * psi * psi.adjoint();
    total += w;
  }
  rho /= total;
  return 0.5 * (rho + rho.adjoint());
}

CMatrix dft_unitary(Index dim) {
  CMatrix f(dim, dim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Index j = 0; j < dim; ++j) {
    for (Index k = 0; k < dim; ++k) {
      const double angle = 2.0 * kPi * static_cast<double>((j * k) % dim) / static_cast<double>(dim);
      f(j, k) = std::polar(norm, angle);
    }
  }
  return f;
}

}  // namespace cvreal
