// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cvreal/ck.hpp"
#include "cvreal/grid.hpp"
#include "cvreal/numerics.hpp"
#include "cvreal/pointer.hpp"
#include "cvreal/random.hpp"
#include "cvreal/realism.hpp"
#include "cvreal/states.hpp"

using namespace cvreal;

namespace {

struct Verdict {
  bool passed;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v{false, ""};
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < budget_s;
  const bool ok = v.passed && in_time;
  if (!ok) ++failures;
  std::printf("%s %2d %s: %s; %.3f s (budget %.0f s)%s\n", ok ? "PASS" : "FAIL", id, name.c_str(), v.detail.c_str(),
              secs, budget_s, in_time ? "" : " OVER BUDGET");
  std::fflush(stdout);
}

template <typename F>
double fitted_slope(F f, double a, double b, int n = 201) {
  std::vector<double> x, y;
  for (int i = 0; i < n; ++i) {
    const double tau = a + (b - a) * i / (n - 1);
    x.push_back(tau);
    y.push_back(f(tau));
  }
  return least_squares_slope(x, y);
}

// u'' + 2 lambda u' + omega^2 u = 0, u(0) = 1, u'(0) = 0, by classical RK4.
double rk4_u(const CKParams& p, double t_end, int steps) {
  const double lam = p.lambda(), w2 = p.spring() / p.mass();
  double u = 1.0, v = 0.0;
  const double h = t_end / steps;
  auto acc = [&](double uu, double vv) { return -2 * lam * vv - w2 * uu; };
  for (int i = 0; i < steps; ++i) {
    const double k1u = v, k1v = acc(u, v);
    const double k2u = v + 0.5 * h * k1v, k2v = acc(u + 0.5 * h * k1u, v + 0.5 * h * k1v);
    const double k3u = v + 0.5 * h * k2v, k3v = acc(u + 0.5 * h * k2u, v + 0.5 * h * k2v);
    const double k4u = v + h * k3v, k4v = acc(u + h * k3u, v + h * k3v);
    u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  return u;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string run_cli(const std::string& args, const std::string& tag) {
  const auto path = std::filesystem::temp_directory_path() / ("cvreal_acceptance_" + tag);
  const std::string cmd = std::string(CVREAL_CLI_PATH) + " " + args + " --out " + path.string() + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  std::string text = slurp(path);
  std::filesystem::remove(path);
  if (rc != 0) throw std::runtime_error("cli exited with " + std::to_string(rc) + ": " + args);
  return text;
}

const CKParams kDefault = CKParams::dimensionless(1.0, 3.0);

}  // namespace

int main() {
  criterion(1, "eta accuracy", 1, [] {
    const double at = eta(1.0 / std::sqrt(2.0));
    double worst = 0.0;
    for (int i = 10; i <= 50; ++i) worst = std::max(worst, std::abs(eta(0.1 * i) - 1.0));
    return Verdict{std::abs(at - 0.9989) <= 5e-4 && worst <= 1e-3,
                   "eta(1/sqrt2) = " + fmt("%.6f", at) + ", max |eta-1| on [1,5] = " + fmt("%.3e", worst)};
  });

  criterion(2, "theta approximation", 1, [] {
    double worst = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double w = 0.05 * i;
      long double direct = 0.0L;
      const long kmax = static_cast<long>(40 * w) + 40;
      for (long k = -kmax; k <= kmax; ++k) direct += std::exp(-static_cast<long double>(k * k) / (2.0L * w * w));
      worst = std::max(worst, std::abs(n_approx(w) - static_cast<double>(direct)) / static_cast<double>(direct));
    }
    // The supremum sits just below width 1, between grid points.
    double fine = 0.0;
    for (int i = 1; i <= 5000; ++i) {
      const double w = 0.001 * i;
      fine = std::max(fine, std::abs(n_approx(w) - theta3_gaussian_norm(w)) / theta3_gaussian_norm(w));
    }
    return Verdict{worst <= 2.71e-4 && fine <= 2.71e-4,
                   "max relative error " + fmt("%.5e", worst) + " on the 0.05 grid, " + fmt("%.5e", fine) +
                       " on a 0.001 grid (tol 2.71e-4)"};
  });

  criterion(3, "uniform-state irreality", 1, [] {
    const GridSpec g = make_grid(1.0, 51);
    double worst = 0.0;
    for (int w : {1, 3, 5, 7}) {
      const double v = irreality(density_matrix(uniform_state(g, w)), ObservableBasis::position(g));
      worst = std::max(worst, std::abs(v - std::log(double(w))));
    }
    return Verdict{worst <= 1e-10, "max |i - ln w| = " + fmt("%.3e", worst)};
  });

  criterion(4, "Gaussian irreality", 30, [] {
    const GridSpec g = make_grid(1.0, 401);
    double worst = 0.0;
    for (double w : {2.0, 4.0, 8.0}) {
      const double v = irreality(density_matrix(gaussian_state(g, {0, 0, w})), ObservableBasis::position(g));
      worst = std::max(worst, std::abs(v - gaussian_irreality_closed_form(w)));
    }
    return Verdict{worst <= 1e-3, "max |i - ln(sqrt(2 pi e) w)| = " + fmt("%.3e", worst)};
  });

  criterion(5, "window probabilities", 5, [] {
    const GridSpec g = make_grid(0.05, 401);
    const PureState s = gaussian_state(g, {0, 0, 20.0});
    const double dq = 20.0 * g.delta_q();
    const double narrow = window_probability(s, 0.0, dq);
    const double wide = window_probability(s, 0.0, std::sqrt(2 * kPi * std::exp(1.0)) * dq);
    return Verdict{std::abs(narrow - 0.383) <= 2e-3 && std::abs(wide - 0.961) <= 2e-3,
                   "P(dq) = " + fmt("%.5f", narrow) + ", P(sqrt(2 pi e) dq) = " + fmt("%.5f", wide)};
  });

  criterion(6, "irreality uncertainty relation", 60, [] {
    // The relation needs complementary bases: A random, A' = A followed by the DFT.
    Rng rng(20260101);
    const Index dims[][2] = {{2, 2}, {2, 3}, {3, 3}};
    double worst = 1e300;
    for (int i = 0; i < 500; ++i) {
      const Index da = dims[i % 3][0], db = dims[i % 3][1];
      const BipartiteState rho(random_density_matrix(da * db, rng), da, db);
      const CMatrix u = haar_unitary(da, rng);
      const double slack = uncertainty_slack(rho, ObservableBasis::from_unitary(u),
                                             ObservableBasis::from_unitary(u * dft_unitary(da)));
      worst = std::min(worst, slack);
    }
    return Verdict{worst >= -1e-9, "min slack over 500 states = " + fmt("%.3e", worst)};
  });

  criterion(7, "maximally entangled bound", 1, [] {
    double worst = 0.0;
    for (Index d = 2; d <= 4; ++d) {
      CVector psi = CVector::Zero(d * d);
      for (Index a = 0; a < d; ++a) psi(a * d + a) = 1.0 / std::sqrt(double(d));
      const BipartiteState rho(psi * psi.adjoint(), d, d);
      worst = std::max(worst, std::abs(info_lower_bound(rho) - 2 * std::log(double(d))));
    }
    return Verdict{worst <= 1e-9, "max |I - 2 ln d| = " + fmt("%.3e", worst)};
  });

  criterion(8, "CK classical/quantum consistency", 5, [] {
    const std::vector<CKParams> models = {kDefault, CKParams::dimensionless(1.5, 3.0), CKParams::dimensionless(6.0, 3.0)};
    const double q0 = -2.0, p0 = 10.0;
    double ehrenfest = 0.0, residual = 0.0;
    for (const CKParams& p : models) {
      for (double tau = 0.0; tau <= 10.0 + 1e-12; tau += 0.1) {
        ehrenfest = std::max(ehrenfest, std::abs(centroid(p, q0, p0, tau).mean_q -
                                                 classical_trajectory(p, q0, p0, tau).q));
        if (tau > 0) residual = std::max(residual, std::abs(ck_coefficients(p, tau).u - rk4_u(p, tau, 4000)));
      }
    }
    // Regime exponents: overdamped and critical from |q|, underdamped from its envelope.
    auto q_of = [](const CKParams& p, double tau) { return classical_trajectory(p, 1.0, 0.0, tau); };
    double worst_rel = 0.0;
    const double so = fitted_slope([&](double t) { return std::log(std::abs(q_of(kDefault, t).q)); }, 20, 40);
    const double sop = fitted_slope([&](double t) { return std::log(std::abs(q_of(kDefault, t).p)); }, 20, 40);
    const RegimeExponents eo = regime_exponents(kDefault);
    worst_rel = std::max({worst_rel, std::abs(so / eo.q_exponent - 1), std::abs(sop / eo.p_exponent - 1)});
    const CKParams crit = models[1];
    const double sc = fitted_slope([&](double t) { return std::log(std::abs(q_of(crit, t).q) / t); }, 20, 40);
    worst_rel = std::max(worst_rel, std::abs(sc / regime_exponents(crit).q_exponent - 1));
    const CKParams under = models[2];
    const double nu = under.zeta();
    const double su = fitted_slope(
        [&](double t) {
          const ClassicalState s = q_of(under, t);
          return std::log(std::hypot(s.q, (s.v + s.q) / nu));
        },
        20, 40);
    worst_rel = std::max(worst_rel, std::abs(su / regime_exponents(under).q_exponent - 1));
    return Verdict{ehrenfest <= 1e-6 * std::abs(q0) && residual <= 1e-6 && worst_rel <= 1e-2,
                   "Ehrenfest " + fmt("%.2e", ehrenfest) + ", u vs RK4 " + fmt("%.2e", residual) +
                       ", worst exponent error " + fmt("%.2e", worst_rel)};
  });

  criterion(9, "oracle equivalence", 120, [] {
    const GridSpec g = make_grid(26.0 / 2187, 2187);
    PureState psi = coherent_packet(g, -2.0, 10.0, 1.0);
    double t = 0.0, worst = 0.0, drift = 0.0;
    std::string detail;
    for (double target : {0.5, 1.0, 2.0}) {
      psi = tdse_propagate(g, kDefault, psi, t, target, 1e-3);
      t = target;
      const double rel = std::abs(moments(psi).sd_q / widths(kDefault, t).delta_q - 1);
      worst = std::max(worst, rel);
      drift = std::max(drift, std::abs(psi.coeffs().norm() - 1));
    }
    return Verdict{worst <= 5e-3 && drift <= 1e-10,
                   "max width error " + fmt("%.3e", worst) + ", norm drift " + fmt("%.2e", drift)};
  });

  criterion(10, "irreality production rate", 1, [] {
    double worst = 0.0;
    std::string detail;
    for (double z : {0.2, 1.0 / std::sqrt(3.0), 0.9}) {
      const CKParams p = CKParams::from_zeta(z, 3.0);
      const double slope = fitted_slope(
          [&](double tau) {
            const CKSnapshot s = snapshot(p, {}, {0.1, 0.1}, tau);
            return s.delta_irreality_q + s.delta_irreality_p;
          },
          10, 20);
      worst = std::max(worst, std::abs(slope / (2 * z) - 1));
      detail += fmt("%.6f", slope) + "/" + fmt("%.6f", 2 * z) + " ";
    }
    return Verdict{worst <= 1e-2, "slope/2 zeta " + detail + "worst " + fmt("%.2e", worst)};
  });

  criterion(11, "quantum rest", 1, [] {
    const double q0 = -2.0, p0 = 10.0;
    const GridSpec g = make_grid(0.1, 201);
    const Resolutions res{g.delta_q(), g.delta_p()};
    const CKSnapshot s0 = snapshot(kDefault, {q0, p0}, res, 0.0);
    const CKSnapshot s = snapshot(kDefault, {q0, p0}, res, 40.0);
    const double rq = std::abs(s.mean_q) / std::abs(q0);
    const double rv = std::abs(s.mean_v) / std::abs(s0.mean_v);
    // Below one cell the continuum formula is invalid; the discretized value is used.
    const double iq = (s.valid_q ? s.irreality_q : s.irreality_q_discrete) / s0.irreality_q;
    const double iv = (s.valid_v ? s.irreality_v : s.irreality_v_discrete) / s0.irreality_v;
    const double worst = std::max({rq, rv, iq, iv});
    return Verdict{worst < 1e-3, "|<Q>| " + fmt("%.2e", rq) + ", |<V>| " + fmt("%.2e", rv) + ", i(Q) " +
                                     fmt("%.2e", iq) + ", i(V) " + fmt("%.2e", iv) + " (relative to t = 0)"};
  });

  criterion(12, "pointer model", 60, [] {
    double worst = 0.0;
    for (double r : {0.1, 0.5, 1.0, 3.0}) {
      for (double tau : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const PointerParams p = PointerParams::from_relative(kDefault, r, 1.0);
        worst = std::max(worst, std::abs(reduced_purity(p, tau) - purity_oracle(p, tau)));
      }
    }
    const double e40 = entanglement(PointerParams::from_relative(kDefault, 1.0, 1.0), 40.0);
    double e0 = 0.0;
    for (double r : {0.1, 0.5, 1.0, 3.0}) {
      const PointerParams p = PointerParams::from_relative(kDefault, r, product_state_sigma_cm(kDefault, r));
      e0 = std::max(e0, std::abs(entanglement(p, 0.0)));
    }
    return Verdict{worst <= 1e-6 && e40 > 0.999 && e0 <= 1e-9, "oracle gap " + fmt("%.2e", worst) + ", E(40) = " +
                                                                    fmt("%.8f", e40) + ", E(product) = " +
                                                                    fmt("%.2e", e0)};
  });

  criterion(13, "determinism", 10, [] {
    int mismatches = 0, runs = 0;
    const std::vector<std::string> configs = {
        "check --samples 100 --seed 7", "sweep --zeta 0.2,0.5,0.9 --tau-e 2,3 --format json",
        "ck --tau-max 4.5 --steps 90 --format json", "pointer --steps 40"};
    for (const std::string& c : configs) {
      const std::string base = run_cli(c + " --workers 1", "a");
      for (const char* w : {"1", "4"}) {
        ++runs;
        if (run_cli(c + " --workers " + w, "b") != base) ++mismatches;
      }
    }
    return Verdict{mismatches == 0, std::to_string(runs - mismatches) + "/" + std::to_string(runs) +
                                        " repeated runs byte-identical (workers 1 and 4)"};
  });

  return failures == 0 ? 0 : 1;
}
