#include "cvreal/states.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cvreal/error.hpp"
#include "cvreal/numerics.hpp"

namespace cvreal {

PureState::PureState(GridSpec grid, CVector coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.dim()) throw DimensionError("coefficient vector does not match grid");
  const double norm = coeffs_.squaredNorm();
  if (std::abs(norm - 1.0) > kNormTol) {
    throw DomainError("state is not normalized (norm^2 = " + std::to_string(norm) + ")");
  }
}

double gaussian_leakage(const GridSpec& grid, const GaussianSpec& spec) {
  if (!(spec.width > 0.0)) throw DomainError("Gaussian width must be positive");
  const double a = 1.0 / (2.0 * spec.width * spec.width);
  const auto weight = [&](long k) {
    const double d = static_cast<double>(k - spec.k_bar);
    return std::exp(-a * d * d);
  };
  // Tails beyond the window, summed until negligible.
  double outside = 0.0;
  const long half = grid.half_width();
  for (long k = half + 1;; ++k) {
    const double w = weight(k);
    outside += w;
    if (k - spec.k_bar > 0 && w < 1e-18 * (outside + 1e-300)) break;
    if (w == 0.0 && k - spec.k_bar > 0) break;
  }
  for (long k = -half - 1;; --k) {
    const double w = weight(k);
    outside += w;
    if (k - spec.k_bar < 0 && w < 1e-18 * (outside + 1e-300)) break;
    if (w == 0.0 && k - spec.k_bar < 0) break;
  }
  return outside / theta3_gaussian_norm(spec.width);
}

PureState gaussian_state(const GridSpec& grid, const GaussianSpec& spec) {
  if (!grid.contains(spec.k_bar) || !grid.contains(spec.l_bar)) {
    throw IndexError("Gaussian center outside the grid");
  }
  const double leak = gaussian_leakage(grid, spec);
  if (leak >= kLeakageBound) {
    throw LeakageError("Gaussian of width " + std::to_string(spec.width) + " leaks " +
                       std::to_string(leak) + " of its mass outside the grid");
  }
  const Index n = grid.dim();
  CVector c(n);
  for (Index s = 0; s < n; ++s) {
    const long k = grid.index(s);
    const long d = k - spec.k_bar;
    const double envelope = std::exp(-static_cast<double>(d * d) / (4.0 * spec.width * spec.width));
    long long phase_num = (static_cast<long long>(spec.l_bar) * d) % grid.xi();
    c(s) = std::polar(envelope, 2.0 * kPi * static_cast<double>(phase_num) / grid.xi());
  }
  c /= c.norm();
  return PureState(grid, std::move(c));
}

PureState coherent_packet(const GridSpec& grid, double q0, double p0, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("packet width must be positive");
  const double width = sigma / grid.delta_q();
  const double shift = q0 / grid.delta_q();
  const long k_bar = std::lround(shift);
  if (!grid.contains(static_cast<int>(k_bar))) throw IndexError("packet center outside the grid");
  // Off-lattice center moves the tail by less than one slot; pad by one.
  const double leak = gaussian_leakage(grid, {static_cast<int>(k_bar), 0, width}) +
                      gaussian_leakage(grid, {static_cast<int>(k_bar + (shift > k_bar ? 1 : -1)), 0, width});
  if (leak >= kLeakageBound) throw LeakageError("packet leaks " + std::to_string(leak) + " of its mass");
  const Index n = grid.dim();
  CVector c(n);
  for (Index s = 0; s < n; ++s) {
    const double q = grid.q(grid.index(s));
    const double d = q - q0;
    c(s) = std::polar(std::exp(-d * d / (4.0 * sigma * sigma)), p0 * q / grid.hbar());
  }
  c /= c.norm();
  return PureState(grid, std::move(c));
}

PureState uniform_state(const GridSpec& grid, int width) {
  if (width < 1 || width % 2 == 0) throw DomainError("uniform width must be a positive odd integer");
  if (width > grid.xi()) throw DomainError("uniform width exceeds the grid dimension");
  const int half = (width - 1) / 2;
  CVector c = CVector::Zero(grid.dim());
  const double amp = 1.0 / std::sqrt(static_cast<double>(width));
  for (int k = -half; k <= half; ++k) c(grid.slot(k)) = amp;
  return PureState(grid, std::move(c));
}

Moments moments(const PureState& state) {
  const GridSpec& g = state.grid();
  const RVector prob_q = state.coeffs().cwiseAbs2();
  const RVector prob_p = to_momentum(g, state.coeffs()).cwiseAbs2();
  double mq = 0.0, mq2 = 0.0, mp = 0.0, mp2 = 0.0;
  for (Index s = 0; s < g.dim(); ++s) {
    const double q = g.q(g.index(s));
    const double p = g.p(g.index(s));
    mq += q * prob_q(s);
    mq2 += q * q * prob_q(s);
    mp += p * prob_p(s);
    mp2 += p * p * prob_p(s);
  }
  return {mq, mp, std::sqrt(std::max(0.0, mq2 - mq * mq)), std::sqrt(std::max(0.0, mp2 - mp * mp))};
}

Complex forward_difference_mean_p(const PureState& state) {
  return state.coeffs().dot(momentum_forward_diff(state.grid(), state.coeffs()));
}

double window_probability(const PureState& state, double center, double width) {
  const GridSpec& g = state.grid();
  const double lo = center - 0.5 * width;
  const double hi = center + 0.5 * width;
  double mass = 0.0;
  for (Index s = 0; s < g.dim(); ++s) {
    const double q = g.q(g.index(s));
    const double cell_lo = q - 0.5 * g.delta_q();
    const double cell_hi = q + 0.5 * g.delta_q();
    const double overlap = std::min(hi, cell_hi) - std::max(lo, cell_lo);
    if (overlap > 0.0) mass += std::norm(state.coeffs()(s)) * overlap / g.delta_q();
  }
  return mass;
}

CMatrix density_matrix(const PureState& state) {
  return state.coeffs() * state.coeffs().adjoint();
}

double eta(double width) {
  if (width < 0.0 || std::isnan(width)) throw DomainError("width must be nonnegative");
  if (width == 0.0) return 0.0;
  const double norm = theta3_gaussian_norm(width);
  const double second = theta3_second_moment(width);
  return std::sqrt(second / norm) / width;
}

double eta_approx(double width) {
  if (width < 0.0 || std::isnan(width)) throw DomainError("width must be nonnegative");
  if (width == 0.0) return 0.0;
  const double a = 1.0 / (2.0 * width * width);
  double norm = 1.0;
  double second = 0.0;
  for (int j = 1; j <= 3; ++j) {
    norm += 2.0 * std::exp(-a * j * j);
    second += 2.0 * j * j * std::exp(-a * j * j);
  }
  // The sqrt(2 pi) width branch scales as lambda^(-1/2) under width ->
  // width / sqrt(lambda), which gives eta = 1 exactly.
  const bool gaussian_branch = width > 1.0 || (width == 1.0 && std::sqrt(2.0 * kPi) >= norm);
  if (gaussian_branch) return 1.0;
  return std::sqrt(second / norm) / width;
}

void write_state(std::ostream& os, const PureState& state) {
  const GridSpec& g = state.grid();
  char buf[96];
  for (Index s = 0; s < g.dim(); ++s) {
    const Complex c = state.coeffs()(s);
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g\n", g.index(s), c.real(), c.imag());
    os << buf;
  }
}

PureState read_state(std::istream& is, const GridSpec& grid) {
  CVector c = CVector::Zero(grid.dim());
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    int k;
    double re, im;
    if (!(row >> k >> re >> im)) throw DomainError("malformed state line: " + line);
    c(grid.slot(k)) = Complex(re, im);
  }
  return PureState(grid, std::move(c));
}

}  // namespace cvreal
