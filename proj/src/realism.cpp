#include "cvreal/realism.hpp"

#include <cmath>
#include <string>

#include "cvreal/error.hpp"
#include "cvreal/numerics.hpp"
#include "cvreal/states.hpp"

namespace cvreal {

namespace {

constexpr double kUnitaryTol = 1e-10;

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

ObservableBasis ObservableBasis::from_unitary(CMatrix u) {
  if (u.rows() != u.cols() || u.rows() == 0) throw DimensionError("basis matrix must be square");
  const Index n = u.rows();
  const double defect = (u.adjoint() * u - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > kUnitaryTol) {
    throw DomainError("basis matrix is not unitary (defect " + std::to_string(defect) + ")");
  }
  return ObservableBasis(n, std::move(u), false);
}

ObservableBasis ObservableBasis::computational(Index dim) {
  if (dim < 1) throw DimensionError("basis dimension must be positive");
  return ObservableBasis(dim, CMatrix(), true);
}

ObservableBasis ObservableBasis::position(const GridSpec& grid) { return computational(grid.dim()); }

ObservableBasis ObservableBasis::momentum(const GridSpec& grid) {
  return from_unitary(fourier_matrix(grid));
}

CMatrix ObservableBasis::vectors() const {
  return computational_ ? CMatrix::Identity(dim_, dim_) : vectors_;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix partial_trace_b(const CMatrix& rho, Index dim_a, Index dim_b) {
  if (rho.rows() != dim_a * dim_b || rho.cols() != rho.rows()) throw DimensionError("bad bipartite dimensions");
  CMatrix out = CMatrix::Zero(dim_a, dim_a);
  for (Index a = 0; a < dim_a; ++a) {
    for (Index a2 = 0; a2 < dim_a; ++a2) {
      out(a, a2) = rho.block(a * dim_b, a2 * dim_b, dim_b, dim_b).trace();
    }
  }
  return out;
}

CMatrix partial_trace_a(const CMatrix& rho, Index dim_a, Index dim_b) {
  if (rho.rows() != dim_a * dim_b || rho.cols() != rho.rows()) throw DimensionError("bad bipartite dimensions");
  CMatrix out = CMatrix::Zero(dim_b, dim_b);
  for (Index a = 0; a < dim_a; ++a) out += rho.block(a * dim_b, a * dim_b, dim_b, dim_b);
  return out;
}

BipartiteState::BipartiteState(CMatrix rho, Index dim_a, Index dim_b)
    : rho_(std::move(rho)), dim_a_(dim_a), dim_b_(dim_b) {
  if (dim_a < 1 || dim_b < 1 || rho_.rows() != dim_a * dim_b || rho_.cols() != rho_.rows()) {
    throw DimensionError("bipartite matrix does not match local dimensions");
  }
  require_density_matrix(rho_);
}

CMatrix BipartiteState::reduced_a() const { return partial_trace_b(rho_, dim_a_, dim_b_); }
CMatrix BipartiteState::reduced_b() const { return partial_trace_a(rho_, dim_a_, dim_b_); }

CMatrix dephase(const CMatrix& rho, const ObservableBasis& basis) {
  if (rho.rows() != basis.dim() || rho.cols() != basis.dim()) throw DimensionError("state and basis differ in dimension");
  if (basis.is_computational()) return CMatrix(rho.diagonal().real().cast<Complex>().asDiagonal());
  const CMatrix u = basis.vectors();
  const RVector weights = (u.adjoint() * rho * u).diagonal().real();
  return hermitian_part(u * weights.cast<Complex>().asDiagonal() * u.adjoint());
}

BipartiteState dephase_local(const BipartiteState& rho, const ObservableBasis& basis_a) {
  const Index da = rho.dim_a();
  const Index db = rho.dim_b();
  if (basis_a.dim() != da) throw DimensionError("basis does not act on subsystem A");
  const auto keep_diagonal_blocks = [&](const CMatrix& m) {
    CMatrix out = CMatrix::Zero(m.rows(), m.cols());
    for (Index a = 0; a < da; ++a) out.block(a * db, a * db, db, db) = m.block(a * db, a * db, db, db);
    return out;
  };
  if (basis_a.is_computational()) {
    return BipartiteState(keep_diagonal_blocks(rho.matrix()), da, db, true);
  }
  const CMatrix w = kron(basis_a.vectors(), CMatrix::Identity(db, db));
  const CMatrix rotated = keep_diagonal_blocks(w.adjoint() * rho.matrix() * w);
  return BipartiteState(hermitian_part(w * rotated * w.adjoint()), da, db, true);
}

double irreality(const CMatrix& rho, const ObservableBasis& basis) {
  return von_neumann_entropy(dephase(rho, basis)) - von_neumann_entropy(rho);
}

double irreality(const BipartiteState& rho, const ObservableBasis& basis_a) {
  return von_neumann_entropy(dephase_local(rho, basis_a).matrix()) - von_neumann_entropy(rho.matrix());
}

double mutual_information(const BipartiteState& rho) {
  return von_neumann_entropy(rho.reduced_a()) + von_neumann_entropy(rho.reduced_b()) -
         von_neumann_entropy(rho.matrix());
}

IrrealityParts irreality_decomposition(const BipartiteState& rho, const ObservableBasis& basis_a) {
  const double coherence = irreality(rho.reduced_a(), basis_a);
  const double discord = mutual_information(rho) - mutual_information(dephase_local(rho, basis_a));
  return {coherence, discord};
}

double info_lower_bound(const BipartiteState& rho) {
  return std::log(static_cast<double>(rho.dim_a())) - von_neumann_entropy(rho.matrix()) +
         von_neumann_entropy(rho.reduced_b());
}

double uncertainty_slack(const BipartiteState& rho, const ObservableBasis& basis_a,
                         const ObservableBasis& basis_a_prime) {
  return irreality(rho, basis_a) + irreality(rho, basis_a_prime) - info_lower_bound(rho);
}

double max_overlap(const ObservableBasis& a, const ObservableBasis& b) {
  if (a.dim() != b.dim()) throw DimensionError("bases differ in dimension");
  return (a.vectors().adjoint() * b.vectors()).cwiseAbs2().maxCoeff();
}

QPIrrealitySum qp_irreality_sum(double width_q, double width_p) {
  if (!(width_q >= 1.0) || !(width_p >= 1.0)) {
    throw ValidityError("Gaussian irreality closed form requires widths >= 1 resolution cell");
  }
  const double value = std::log(2.0 * kPi * std::exp(1.0) * width_q * width_p);
  return {value, value >= std::log(2.0 * kPi * std::exp(1.0))};
}

double discrete_gaussian_irreality(double width) {
  const double e = eta(width);
  return std::log(theta3_gaussian_norm(width)) + 0.5 * e * e;
}

double gaussian_irreality_closed_form(double width) {
  return std::log(std::sqrt(2.0 * kPi * std::exp(1.0)) * width);
}

}  // namespace cvreal
