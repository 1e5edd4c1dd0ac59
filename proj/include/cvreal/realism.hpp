#pragma once

#include "cvreal/grid.hpp"
#include "cvreal/types.hpp"

namespace cvreal {

// Eigenbasis of an observable: column a of vectors() is the eigenvector |a>.
class ObservableBasis {
 public:
  // Throws DomainError when u is not unitary to 1e-10.
  static ObservableBasis from_unitary(CMatrix u);
  static ObservableBasis computational(Index dim);
  static ObservableBasis position(const GridSpec& grid);
  static ObservableBasis momentum(const GridSpec& grid);

  Index dim() const { return dim_; }
  // Identity matrix for the computational basis (built on request).
  CMatrix vectors() const;
  bool is_computational() const { return computational_; }

 private:
  ObservableBasis(Index dim, CMatrix u, bool computational)
      : dim_(dim), vectors_(std::move(u)), computational_(computational) {}

  Index dim_;
  CMatrix vectors_;
  bool computational_;
};

// Density matrix on H_A (x) H_B, composite index a * dim_b + b.
class BipartiteState {
 public:
  // Validates dimensions and that rho is a density matrix.
  BipartiteState(CMatrix rho, Index dim_a, Index dim_b);

  const CMatrix& matrix() const { return rho_; }
  Index dim_a() const { return dim_a_; }
  Index dim_b() const { return dim_b_; }

  CMatrix reduced_a() const;
  CMatrix reduced_b() const;

 private:
  BipartiteState(CMatrix rho, Index dim_a, Index dim_b, bool /*unchecked*/)
      : rho_(std::move(rho)), dim_a_(dim_a), dim_b_(dim_b) {}
  friend BipartiteState dephase_local(const BipartiteState&, const ObservableBasis&);

  CMatrix rho_;
  Index dim_a_;
  Index dim_b_;
};

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix partial_trace_b(const CMatrix& rho, Index dim_a, Index dim_b);
CMatrix partial_trace_a(const CMatrix& rho, Index dim_a, Index dim_b);

// Unrevealed measurement of the observable: sum_a |a><a| rho |a><a|.
CMatrix dephase(const CMatrix& rho, const ObservableBasis& basis);

// Unrevealed measurement on subsystem A only.
BipartiteState dephase_local(const BipartiteState& rho, const ObservableBasis& basis_a);

// S(Phi(rho)) - S(rho) in nats.
double irreality(const CMatrix& rho, const ObservableBasis& basis);
double irreality(const BipartiteState& rho, const ObservableBasis& basis_a);

double mutual_information(const BipartiteState& rho);

struct IrrealityParts {
  double local_coherence;  // irreality of the reduced state rho_A
  double discord;          // I(rho) - I(Phi_A(rho))
  double total() const { return local_coherence + discord; }
};

IrrealityParts irreality_decomposition(const BipartiteState& rho, const ObservableBasis& basis_a);

// ln d_A - S(rho) + S(rho_B): information about A available from B.
double info_lower_bound(const BipartiteState& rho);

// irreality(A) + irreality(A') - info_lower_bound. Nonnegative whenever the
// two bases are mutually unbiased, |<a|a'>|^2 = 1/d_A.
double uncertainty_slack(const BipartiteState& rho, const ObservableBasis& basis_a,
                         const ObservableBasis& basis_a_prime);

// max_{a,a'} |<a|a'>|^2 between two bases of the same space.
double max_overlap(const ObservableBasis& a, const ObservableBasis& b);

struct QPIrrealitySum {
  double value;           // ln(2 pi e width_q width_p)
  bool satisfies_bound;   // value >= ln(2 pi e)
};

// Closed-form position plus momentum irreality of a minimum-uncertainty
// Gaussian. Throws ValidityError for widths below one resolution cell.
QPIrrealitySum qp_irreality_sum(double width_q, double width_p);

// Exact irreality of the discrete Gaussian in its own representation,
// ln N + eta^2 / 2; tends to ln(sqrt(2 pi e) width) for width >= 1 and to 0
// as width -> 0.
double discrete_gaussian_irreality(double width);

// ln(sqrt(2 pi e) width), the continuum Gaussian irreality.
double gaussian_irreality_closed_form(double width);

}  // namespace cvreal
