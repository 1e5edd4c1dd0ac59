#include "cvreal/ck.hpp"

#include <cmath>
#include <string>

#include "cvreal/error.hpp"
#include "cvreal/realism.hpp"

namespace cvreal {

namespace {

constexpr double kCriticalTol = 1e-12;
constexpr double kEdgeFraction = 0.05;
constexpr double kEdgeMassBound = 1e-6;

// cosh(zeta tau) and sinh(zeta tau) / zeta for signed zeta^2, continued to
// cos and sin / nu when zeta^2 = -nu^2.
struct Hyperbolic {
  double c;
  double s;
};

Hyperbolic hyperbolic(double zeta_sq, double tau) {
  const double x2 = zeta_sq * tau * tau;
  if (std::abs(x2) < 1e-8) {
    return {1.0 + x2 / 2.0 + x2 * x2 / 24.0, tau * (1.0 + x2 / 6.0 + x2 * x2 / 120.0)};
  }
  if (zeta_sq > 0.0) {
    const double z = std::sqrt(zeta_sq);
    return {std::cosh(z * tau), std::sinh(z * tau) / z};
  }
  const double nu = std::sqrt(-zeta_sq);
  return {std::cos(nu * tau), std::sin(nu * tau) / nu};
}

void require_time(double t) {
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
}

double gaussian_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi * sd * sd);
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::underdamped: return "underdamped";
    case Regime::critical: return "critical";
    case Regime::overdamped: return "overdamped";
  }
  return "unknown";
}

CKParams::CKParams(double lambda, double mass, double spring, double sigma0, double hbar)
    : lambda_(lambda), mass_(mass), spring_(spring), sigma0_(sigma0), hbar_(hbar) {
  if (!(lambda > 0.0)) throw DomainError("damping rate lambda must be positive");
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
  if (!(spring >= 0.0)) throw DomainError("spring constant must be nonnegative");
  if (!(sigma0 > 0.0)) throw DomainError("initial width must be positive");
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  zeta_sq_ = 1.0 - spring / (mass * lambda * lambda);
}

CKParams CKParams::physical(double lambda, double mass, double spring, double sigma0, double hbar) {
  return CKParams(lambda, mass, spring, sigma0, hbar);
}

CKParams CKParams::dimensionless(double epsilon, double tau_e) {
  if (!(tau_e > 0.0)) throw DomainError("tau_E must be positive");
  return CKParams(1.0, tau_e / 2.0, epsilon, 1.0, 1.0);
}

CKParams CKParams::from_zeta(double zeta, double tau_e) {
  if (!(zeta >= 0.0 && zeta < 1.0)) throw DomainError("zeta must lie in [0, 1)");
  return dimensionless(0.5 * tau_e * (1.0 - zeta * zeta), tau_e);
}

double CKParams::omega() const { return std::sqrt(spring_ / mass_); }

double CKParams::zeta() const { return std::sqrt(std::abs(zeta_sq_)); }

Regime CKParams::regime() const {
  if (std::abs(zeta_sq_) <= kCriticalTol) return Regime::critical;
  return zeta_sq_ > 0.0 ? Regime::overdamped : Regime::underdamped;
}

ClassicalState classical_trajectory(const CKParams& params, double q0, double p0, double t) {
  const double tau = params.tau(t);
  const auto [c, s] = hyperbolic(params.zeta_squared(), tau);
  const double m = params.mass();
  const double lambda = params.lambda();
  const double q = std::exp(-tau) * (q0 * c + (q0 + p0 / (m * lambda)) * s);
  const double p = std::exp(tau) * (p0 * c - (p0 + params.spring() * q0 / lambda) * s);
  const double v = p * std::exp(-2.0 * tau) / m;
  const double h = p * p * std::exp(-2.0 * tau) / (2.0 * m) + params.spring() * q * q * std::exp(2.0 * tau) / 2.0;
  return {q, p, v, h};
}

RegimeExponents regime_exponents(const CKParams& params) {
  switch (params.regime()) {
    case Regime::underdamped:
      return {Regime::underdamped, -1.0, 1.0, -1.0, 0, "oscillates"};
    case Regime::critical:
      return {Regime::critical, -1.0, 1.0, -1.0, 1, "tau^2"};
    case Regime::overdamped: {
      const double z = params.zeta();
      return {Regime::overdamped, -(1.0 - z), 1.0 + z, -(1.0 - z), 0, "exp(2 zeta tau)"};
    }
  }
  throw DomainError("unknown regime");
}

CKCoefficients ck_coefficients(const CKParams& params, double t) {
  require_time(t);
  const double tau = params.tau(t);
  const auto [c, s] = hyperbolic(params.zeta_squared(), tau);
  const double sum = c + s;
  const double ratio = s / sum;  // lambda T_t = 1 / (1 + zeta coth(zeta tau))
  CKCoefficients out;
  out.u = std::exp(-tau) * sum;
  out.T = ratio / params.lambda();
  out.c_plus = -(params.spring() / params.lambda()) * std::exp(2.0 * tau) * ratio;
  out.c_zero = 2.0 * tau - 2.0 * std::log(std::abs(sum));
  out.c_minus = -out.T / params.mass();
  out.regular = sum > 0.0;
  return out;
}

PhaseSpaceWidths phase_space_widths(const CKParams& params, double t) {
  require_time(t);
  const double tau = params.tau(t);
  const auto [c, s] = hyperbolic(params.zeta_squared(), tau);
  const double m = params.mass();
  const double lambda = params.lambda();
  const double sq = params.sigma0();
  const double sp = params.hbar() / (2.0 * params.sigma0());
  const double m11 = std::exp(-tau) * (c + s);
  const double m12 = std::exp(-tau) * s / (m * lambda);
  const double m21 = -std::exp(tau) * (params.spring() / lambda) * s;
  const double m22 = std::exp(tau) * (c - s);
  return {std::hypot(m11 * sq, m12 * sp), std::hypot(m21 * sq, m22 * sp)};
}

Widths widths(const CKParams& params, double t) {
  const CKCoefficients co = ck_coefficients(params, t);
  const double tau = params.tau(t);
  const double sigma0 = params.sigma0();
  const double hbar = params.hbar();
  const double t_e = params.t_e();
  Widths w;
  w.alpha = std::sqrt(1.0 + (co.T / t_e) * (co.T / t_e));
  w.chi = co.c_plus * sigma0 * sigma0 / hbar;
  if (co.regular && co.u > 1e-6) {
    const double shrink = std::exp(-co.c_zero / 2.0);  // equals u_t
    const double width_ratio = w.alpha * shrink;       // delta_q_t / sigma0
    w.f = w.chi * (co.T / t_e + w.chi * width_ratio * width_ratio);
    w.beta = std::sqrt(std::max(0.0, 1.0 + 4.0 * std::exp(-co.c_zero) * w.f));
    w.delta_q = sigma0 * width_ratio;
    w.delta_p = hbar / (2.0 * sigma0) * w.beta * std::exp(co.c_zero / 2.0);
  } else {
    // Near a zero of u_t the factorization is singular; the phase-space flow
    // is not.
    const PhaseSpaceWidths ps = phase_space_widths(params, t);
    w.delta_q = ps.delta_q;
    w.delta_p = ps.delta_p;
    w.beta = 2.0 * sigma0 * ps.delta_p * std::exp(-co.c_zero / 2.0) / hbar;
    w.f = (w.beta * w.beta - 1.0) * std::exp(co.c_zero) / 4.0;
  }
  w.delta_v = w.delta_p * std::exp(-2.0 * tau) / params.mass();
  return w;
}

Centroid centroid(const CKParams& params, double q0, double p0, double t) {
  const CKCoefficients co = ck_coefficients(params, t);
  const double tau = params.tau(t);
  const auto [c, s] = hyperbolic(params.zeta_squared(), tau);
  const double m = params.mass();
  const double lambda = params.lambda();
  double mean_q;
  if (co.regular) {
    mean_q = std::exp(-co.c_zero / 2.0) * (q0 + p0 * co.T / m);
  } else {
    mean_q = co.u * q0 + std::exp(-tau) * s / lambda * p0 / m;
  }
  const double du_dt = -lambda * (1.0 - params.zeta_squared()) * std::exp(-tau) * s;
  const double dw_dt = std::exp(-tau) * (c - s);  // w = u T
  return {mean_q, du_dt * q0 + dw_dt * p0 / m};
}

double density_q(const CKParams& params, double q0, double p0, double q, double t) {
  return gaussian_pdf(q, centroid(params, q0, p0, t).mean_q, widths(params, t).delta_q);
}

double density_p(const CKParams& params, double q0, double p0, double p, double t) {
  const double mean_p = params.mass() * std::exp(2.0 * params.tau(t)) * centroid(params, q0, p0, t).mean_v;
  return gaussian_pdf(p, mean_p, widths(params, t).delta_p);
}

CKSnapshot snapshot(const CKParams& params, const InitialConditions& initial, const Resolutions& res, double t) {
  if (!(res.delta_q > 0.0) || !(res.delta_p > 0.0)) throw DomainError("resolutions must be positive");
  CKSnapshot snap;
  snap.t = t;
  snap.tau = params.tau(t);
  snap.coefficients = ck_coefficients(params, t);
  snap.widths = widths(params, t);
  const Centroid cen = centroid(params, initial.q0, initial.p0, t);
  snap.mean_q = cen.mean_q;
  snap.mean_v = cen.mean_v;

  const double delta_v_res = res.delta_p / params.mass();
  const double width_q = snap.widths.delta_q / res.delta_q;
  const double width_p = snap.widths.delta_p / res.delta_p;
  const double width_v = snap.widths.delta_v / delta_v_res;
  snap.irreality_q = gaussian_irreality_closed_form(width_q);
  snap.irreality_p = gaussian_irreality_closed_form(width_p);
  snap.irreality_v = gaussian_irreality_closed_form(width_v);
  snap.irreality_q_discrete = discrete_gaussian_irreality(width_q);
  snap.irreality_p_discrete = discrete_gaussian_irreality(width_p);
  snap.irreality_v_discrete = discrete_gaussian_irreality(width_v);
  snap.delta_irreality_q = std::log(snap.widths.delta_q / params.sigma0());
  snap.delta_irreality_p = std::log(2.0 * params.sigma0() * snap.widths.delta_p / params.hbar());
  snap.uncertainty_ratio = snap.widths.delta_q * snap.widths.delta_p / (params.hbar() / 2.0);
  snap.valid_q = width_q >= 1.0;
  snap.valid_p = width_p >= 1.0;
  snap.valid_v = width_v >= 1.0;
  return snap;
}

std::vector<CKSnapshot> irreality_series(const CKParams& params, const InitialConditions& initial,
                                         const Resolutions& res, std::span<const double> times) {
  if (times.empty()) throw DomainError("time sequence is empty");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw DomainError("times must be strictly ascending");
  }
  std::vector<CKSnapshot> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(snapshot(params, initial, res, t));
  return out;
}

namespace {

double edge_mass(const RVector& prob) {
  const Index n = prob.size();
  const Index edge = std::max<Index>(1, static_cast<Index>(kEdgeFraction * static_cast<double>(n)));
  return prob.head(edge).sum() + prob.tail(edge).sum();
}

void check_window(const CVector& position, const CVector& momentum, double t) {
  const double mq = edge_mass(position.cwiseAbs2());
  const double mp = edge_mass(momentum.cwiseAbs2());
  if (mq > kEdgeMassBound || mp > kEdgeMassBound) {
    throw WindowError("wave packet reached the grid edge at t = " + std::to_string(t) + " (position edge mass " +
                      std::to_string(mq) + ", momentum edge mass " + std::to_string(mp) + ")");
  }
}

}  // namespace

PureState tdse_propagate(const GridSpec& grid, const CKParams& params, const PureState& psi0, double t_final,
                         double dt) {
  return tdse_propagate(grid, params, psi0, 0.0, t_final, dt);
}

PureState tdse_propagate(const GridSpec& grid, const CKParams& params, const PureState& psi0, double t_start,
                         double t_final, double dt) {
  if (psi0.grid().dim() != grid.dim()) throw DimensionError("state does not live on this grid");
  if (std::abs(grid.hbar() - params.hbar()) > 1e-12 * params.hbar()) throw DomainError("grid and model hbar differ");
  if (!(dt > 0.0) || !(t_final >= t_start) || !(t_start >= 0.0)) throw DomainError("bad propagation interval");

  const SpectralTransform fft(grid);
  const Index n = grid.dim();
  RVector q2(n), p2(n);
  for (Index s = 0; s < n; ++s) {
    q2(s) = grid.q(grid.index(s)) * grid.q(grid.index(s));
    p2(s) = grid.p(grid.index(s)) * grid.p(grid.index(s));
  }
  const double hbar = params.hbar();
  const double m = params.mass();
  const double k = params.spring();

  CVector psi = psi0.coeffs();
  CVector phi = fft.to_momentum(psi);
  check_window(psi, phi, t_start);

  const double span = t_final - t_start;
  const long steps = span == 0.0 ? 0 : std::max(1L, static_cast<long>(std::ceil(span / dt - 1e-9)));
  const double h = steps == 0 ? 0.0 : span / static_cast<double>(steps);
  CVector half_potential(n), kinetic(n);
  for (long j = 0; j < steps; ++j) {
    const double t_mid = t_start + (static_cast<double>(j) + 0.5) * h;
    const double tau = params.tau(t_mid);
    const double pot_rate = k * std::exp(2.0 * tau) / (2.0 * hbar);
    const double kin_rate = std::exp(-2.0 * tau) / (2.0 * m * hbar);
    for (Index s = 0; s < n; ++s) {
      half_potential(s) = std::polar(1.0, -pot_rate * q2(s) * 0.5 * h);
      kinetic(s) = std::polar(1.0, -kin_rate * p2(s) * h);
    }
    psi = psi.cwiseProduct(half_potential);
    phi = fft.to_momentum(psi).cwiseProduct(kinetic);
    psi = fft.to_position(phi).cwiseProduct(half_potential);
    if ((j + 1) % 32 == 0 || j + 1 == steps) check_window(psi, phi, t_mid);
  }
  return PureState(grid, std::move(psi));
}

}  // namespace cvreal
