#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <thread>
#include <vector>

#include "cvreal/ck.hpp"
#include "cvreal/error.hpp"
#include "cvreal/grid.hpp"
#include "cvreal/numerics.hpp"
#include "cvreal/pointer.hpp"
#include "cvreal/random.hpp"
#include "cvreal/realism.hpp"
#include "cvreal/states.hpp"

namespace cvreal::cli {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct CheckSink {
  nlohmann::ordered_json& records;
  bool& failed;
  double scale;

  void add(const std::string& name, double measured, double tolerance) {
    const double tol = tolerance * scale;
    const bool passed = std::isfinite(measured) && measured <= tol;
    nlohmann::ordered_json r;
    r["name"] = name;
    r["measured"] = cell_to_json(measured);
    r["tolerance"] = tol;
    r["passed"] = passed;
    records.push_back(std::move(r));
    if (!passed) failed = true;
  }
};

std::vector<double> linspace(double lo, double hi, int intervals) {
  std::vector<double> out(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / intervals;
  return out;
}

void require_steps(int steps) {
  if (steps < 1 || steps > 1000000) throw UsageError("--steps must lie in [1, 1e6]");
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double fit_production_rate(const CKParams& model, double tau_lo, double tau_hi, int intervals) {
  const Resolutions res{1.0, 1.0};
  std::vector<double> xs, ys;
  for (double tau : linspace(tau_lo, tau_hi, intervals)) {
    const CKSnapshot s = snapshot(model, {}, res, tau / model.lambda());
    xs.push_back(tau);
    ys.push_back(s.delta_irreality_q + s.delta_irreality_p);
  }
  return least_squares_slope(xs, ys);
}

Rng sample_rng(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  return Rng(seq);
}

}  // namespace

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(std::max(1, workers), std::max<std::size_t>(1, n));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

CommandResult cmd_fig1(const RunConfig& cfg) {
  if (!(cfg.from > 0.0) || !(cfg.to >= cfg.from) || !(cfg.step > 0.0)) {
    throw UsageError("fig1 needs 0 < --from <= --to and --step > 0");
  }
  const double count = std::floor((cfg.to - cfg.from) / cfg.step + 1e-9) + 1.0;
  if (count > 1e6) throw UsageError("fig1 range has too many rows");
  CommandResult r{Table({"Delta_q", "eta_exact", "eta_approx"})};
  for (long i = 0; i < static_cast<long>(count); ++i) {
    const double w = cfg.from + static_cast<double>(i) * cfg.step;
    r.table.add_row({w, eta(w), eta_approx(w)});
  }
  return r;
}

CommandResult cmd_fig2(const RunConfig& cfg) {
  if (cfg.panel != "a" && cfg.panel != "b") throw UsageError("--panel must be a or b");
  if (cfg.points < 2) throw UsageError("--points must be at least 2");
  require_steps(cfg.steps);
  const CKParams model = resolve_model(cfg);
  const bool position = cfg.panel == "a";
  const double q0 = cfg.q0.value_or(position ? -2.0 : 0.0);
  const double p0 = 0.5 * cfg.p0.value_or(position ? 20.0 : 0.0);
  const double tau_max = cfg.tau_max.value_or(position ? 1.5 * model.tau_e() : model.tau_e() / 3.0);
  if (!(tau_max >= 0.0)) throw UsageError("--tau-max must be nonnegative");
  const double extent = position ? 5.0 : 13.0;

  CommandResult r{Table({"coordinate", "tau", "density"})};
  bool failed = false;
  CheckSink sink{r.checks, failed, 1.0};
  double worst_norm = 0.0;
  const std::vector<double> coords = linspace(-extent, extent, cfg.points - 1);
  for (double tau : linspace(0.0, tau_max, cfg.steps)) {
    const double t = tau / model.lambda();
    const auto scaled = [&](double x) {
      return position ? density_q(model, q0, p0, x, t) : 0.5 * density_p(model, q0, p0, 0.5 * x, t);
    };
    for (double x : coords) r.table.add_row({x, tau, scaled(x)});

    // Normalization of the full slice, independent of the plotted window.
    const Widths w = widths(model, t);
    const Centroid c = centroid(model, q0, p0, t);
    const double mean = position ? c.mean_q : 2.0 * model.mass() * std::exp(2.0 * tau) * c.mean_v;
    const double sd = position ? w.delta_q : 2.0 * w.delta_p;
    const int n = 4000;
    const double h = 20.0 * sd / n;
    double integral = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double x = mean - 10.0 * sd + h * i;
      integral += (i == 0 || i == n ? 0.5 : 1.0) * scaled(x);
    }
    worst_norm = std::max(worst_norm, std::abs(integral * h - 1.0));
  }
  sink.add("slice_normalization", worst_norm, 1e-6);
  r.failed = failed;
  return r;
}

CommandResult cmd_irreality(const RunConfig& cfg) {
  if (cfg.state != "uniform" && cfg.state != "gaussian") throw UsageError("--state must be uniform or gaussian");
  if (cfg.basis != "position" && cfg.basis != "momentum") throw UsageError("--basis must be position or momentum");
  const GridSpec grid = make_grid(cfg.delta_q, cfg.xi);
  const bool uniform = cfg.state == "uniform";
  const bool in_position = cfg.basis == "position";
  PureState psi = [&] {
    if (uniform) {
      if (std::abs(cfg.width - std::round(cfg.width)) > 1e-12) throw UsageError("uniform width must be an odd integer");
      return uniform_state(grid, static_cast<int>(std::lround(cfg.width)));
    }
    return gaussian_state(grid, {0, 0, cfg.width});
  }();
  const ObservableBasis basis = in_position ? ObservableBasis::position(grid) : ObservableBasis::momentum(grid);
  const double numeric = irreality(density_matrix(psi), basis);

  double closed = kNan;
  bool valid = false;
  if (uniform && in_position) {
    closed = std::log(cfg.width);
    valid = true;
  } else if (!uniform) {
    const double w = in_position ? cfg.width : grid.xi() / (4.0 * kPi * cfg.width);
    closed = gaussian_irreality_closed_form(w);
    valid = w >= 1.0;
  }
  CommandResult r{Table({"state", "basis", "xi", "width", "irreality", "closed_form", "difference", "valid"})};
  r.single_row = true;
  r.table.add_row({cfg.state, cfg.basis, static_cast<std::int64_t>(cfg.xi), cfg.width, numeric, closed,
                   numeric - closed, valid});
  bool failed = false;
  CheckSink sink{r.checks, failed, 1.0};
  if (valid) sink.add("closed_form_agreement", std::abs(numeric - closed), uniform ? 1e-10 : 1e-3);
  r.failed = failed;
  return r;
}

CommandResult cmd_ck(const RunConfig& cfg) {
  require_steps(cfg.steps);
  const CKParams model = resolve_model(cfg);
  const double q0 = cfg.q0.value_or(0.0);
  const double p0 = 0.5 * cfg.p0.value_or(0.0);
  const double tau_max = cfg.tau_max.value_or(20.0);
  if (!(tau_max >= 0.0)) throw UsageError("--tau-max must be nonnegative");
  if (!(cfg.delta_q > 0.0)) throw UsageError("--delta-q must be positive");
  const double delta_p = 2.0 * kPi / (cfg.xi * cfg.delta_q);
  const Resolutions res{cfg.delta_q, delta_p};

  std::vector<std::string> columns = {
      "t",          "tau",        "u",          "c_plus",     "c_zero",     "c_minus",    "T",
      "regular",    "alpha",      "beta",       "f",          "chi",        "delta_q",    "delta_p",
      "delta_v",    "mean_q",     "mean_v",     "irreality_q", "irreality_p", "irreality_v",
      "irreality_q_discrete",     "irreality_p_discrete",     "irreality_v_discrete",
      "delta_irreality_q",        "delta_irreality_p",        "irreality_sum_change",
      "uncertainty_ratio",        "valid_q",    "valid_p",    "valid_v"};
  if (cfg.with_oracle) columns.push_back("oracle_delta_q");
  CommandResult r{Table(columns)};

  std::optional<GridSpec> grid;
  std::optional<PureState> psi;
  double psi_time = 0.0;
  if (cfg.with_oracle) {
    grid = make_grid(cfg.delta_q, cfg.xi);
    psi = coherent_packet(*grid, q0, p0, 1.0);
  }

  double min_ratio = std::numeric_limits<double>::infinity();
  double worst_oracle = 0.0;
  std::vector<double> fit_x, fit_y;
  for (double tau : linspace(0.0, tau_max, cfg.steps)) {
    const double t = tau / model.lambda();
    const CKSnapshot s = snapshot(model, {q0, p0}, res, t);
    const CKCoefficients& c = s.coefficients;
    const Widths& w = s.widths;
    const double sum_change = s.delta_irreality_q + s.delta_irreality_p;
    std::vector<Cell> row = {t,
                             s.tau,
                             c.u,
                             c.c_plus,
                             c.c_zero,
                             c.c_minus,
                             c.T,
                             c.regular,
                             w.alpha,
                             w.beta,
                             w.f,
                             w.chi,
                             w.delta_q,
                             w.delta_p,
                             w.delta_v,
                             s.mean_q,
                             s.mean_v,
                             s.irreality_q,
                             s.irreality_p,
                             s.irreality_v,
                             s.irreality_q_discrete,
                             s.irreality_p_discrete,
                             s.irreality_v_discrete,
                             s.delta_irreality_q,
                             s.delta_irreality_p,
                             sum_change,
                             s.uncertainty_ratio,
                             s.valid_q,
                             s.valid_p,
                             s.valid_v};
    if (cfg.with_oracle) {
      double oracle = kNan;
      if (psi) {
        try {
          psi = tdse_propagate(*grid, model, *psi, psi_time, t, cfg.dt / model.lambda());
          psi_time = t;
          oracle = moments(*psi).sd_q;
          worst_oracle = std::max(worst_oracle, std::abs(oracle - w.delta_q) / w.delta_q);
        } catch (const WindowError&) {
          psi.reset();
        }
      }
      row.push_back(oracle);
    }
    r.table.add_row(std::move(row));
    min_ratio = std::min(min_ratio, s.uncertainty_ratio);
    if (tau >= 0.5 * tau_max) {
      fit_x.push_back(tau);
      fit_y.push_back(sum_change);
    }
  }

  bool failed = false;
  CheckSink sink{r.checks, failed, 1.0};
  sink.add("heisenberg", std::max(0.0, 1.0 - min_ratio), 1e-12);
  if (model.regime() == Regime::overdamped && tau_max >= 10.0 && fit_x.size() >= 2) {
    const double expected = 2.0 * model.zeta();
    sink.add("production_rate", std::abs(least_squares_slope(fit_x, fit_y) - expected) / expected, 1e-2);
  }
  if (cfg.with_oracle) sink.add("oracle_width", worst_oracle, 5e-3);
  r.failed = failed;
  return r;
}

CommandResult cmd_pointer(const RunConfig& cfg) {
  require_steps(cfg.steps);
  const CKParams model = resolve_model(cfg);
  if (!(cfg.mass_ratio > 0.0)) throw UsageError("--mass-ratio must be positive");
  const double sigma_cm = cfg.sigma_cm.value_or(1.0);
  if (!(sigma_cm > 0.0)) throw UsageError("--sigma-cm must be positive");
  const PointerParams params = PointerParams::from_relative(model, cfg.mass_ratio, sigma_cm * model.sigma0());
  const double tau_max = cfg.tau_max.value_or(40.0);
  if (!(tau_max >= 0.0)) throw UsageError("--tau-max must be nonnegative");

  std::vector<std::string> columns = {"t", "tau", "gamma", "purity", "entanglement"};
  if (cfg.with_oracle) {
    columns.push_back("purity_oracle");
    columns.push_back("oracle_error");
  }
  CommandResult r{Table(columns)};
  double worst_oracle = 0.0;
  double final_e = kNan;
  for (double tau : linspace(0.0, tau_max, cfg.steps)) {
    const double t = tau / model.lambda();
    const double g = gamma(params, t);
    const double purity = purity_from_gamma(g, params.frac_m(), params.frac_mp());
    std::vector<Cell> row = {t, tau, g, purity, 1.0 - purity};
    if (cfg.with_oracle) {
      double oracle = kNan, err = kNan;
      try {
        const QuadratureResult q =
            envelope_purity_quadrature(widths(model, t).delta_q, cm_width(params, t), params.frac_m(), params.frac_mp());
        oracle = q.purity;
        err = q.error_estimate;
        worst_oracle = std::max(worst_oracle, std::abs(oracle - purity));
      } catch (const ConvergenceError& e) {
        err = e.achieved_error();
      }
      row.push_back(oracle);
      row.push_back(err);
    }
    r.table.add_row(std::move(row));
    final_e = 1.0 - purity;
  }
  bool failed = false;
  CheckSink sink{r.checks, failed, 1.0};
  if (tau_max >= 40.0 && model.regime() == Regime::overdamped) sink.add("final_entanglement_deficit", 1.0 - final_e, 1e-3);
  if (cfg.with_oracle) sink.add("oracle_purity", worst_oracle, 1e-6);
  r.failed = failed;
  return r;
}

CommandResult cmd_check(const RunConfig& cfg) {
  if (!(cfg.tolerance_scale >= 0.0)) throw UsageError("--tolerance-scale must be nonnegative");
  if (cfg.samples < 1) throw UsageError("--samples must be positive");
  CommandResult r{Table({"name", "measured", "tolerance", "passed"})};
  bool failed = false;
  CheckSink sink{r.checks, failed, cfg.tolerance_scale};

  // Grid algebra.
  {
    const GridSpec g = make_grid(0.3, 21);
    const Index n = g.dim();
    const CMatrix id = CMatrix::Identity(n, n);
    CMatrix sum_q = CMatrix::Zero(n, n), sum_p = CMatrix::Zero(n, n);
    double idem = 0.0, ortho = 0.0;
    std::vector<CMatrix> pp;
    for (int k = -g.half_width(); k <= g.half_width(); ++k) {
      sum_q += projector_q(g, k).cast<Complex>();
      pp.push_back(projector_p(g, k));
      sum_p += pp.back();
      idem = std::max(idem, max_abs(pp.back() * pp.back() - pp.back()));
    }
    for (std::size_t a = 0; a < pp.size(); ++a) {
      for (std::size_t b = a + 1; b < pp.size(); ++b) ortho = std::max(ortho, max_abs(pp[a] * pp[b]));
    }
    sink.add("projector_completeness_q", max_abs(sum_q - id), 1e-12);
    sink.add("projector_completeness_p", max_abs(sum_p - id), 1e-12);
    sink.add("projector_idempotency_p", idem, 1e-12);
    sink.add("projector_orthogonality_p", ortho, 1e-12);
    const CMatrix f = fourier_matrix(g);
    sink.add("fourier_unitarity", max_abs(f.adjoint() * f - id), 1e-12);
    Rng rng = sample_rng(cfg.seed, 0);
    const CVector c = haar_state(n, rng);
    sink.add("fft_matches_dense", (to_momentum(g, c) - f.adjoint() * c).cwiseAbs().maxCoeff(), 1e-12);
    const CMatrix t3 = translation_op(g, 3);
    double shift = 0.0;
    for (int k = -g.half_width(); k <= g.half_width(); ++k) {
      const int target = (k + 3 + g.half_width()) % g.xi() - g.half_width();
      CVector e = CVector::Zero(n);
      e(g.slot(k)) = 1.0;
      CVector want = CVector::Zero(n);
      want(g.slot(target)) = 1.0;
      shift = std::max(shift, (t3 * e - want).cwiseAbs().maxCoeff());
    }
    sink.add("translation_shift", shift, 1e-12);
  }

  // Dephasing and irreality.
  {
    Rng rng = sample_rng(cfg.seed, 1);
    const CMatrix rho = random_density_matrix(6, rng);
    const ObservableBasis basis = ObservableBasis::from_unitary(haar_unitary(6, rng));
    const CMatrix once = dephase(rho, basis);
    sink.add("dephase_idempotency", max_abs(dephase(once, basis) - once), 1e-12);
    sink.add("irreality_nonnegative", std::max(0.0, -irreality(rho, basis)), 1e-12);
  }

  // Uncertainty slack on mutually unbiased pairs, one engine per sample.
  {
    const std::size_t n = static_cast<std::size_t>(cfg.samples);
    std::vector<double> slack(n);
    const Index dims[3][2] = {{2, 2}, {2, 3}, {3, 3}};
    parallel_for(n, cfg.workers, [&](std::size_t i) {
      Rng rng = sample_rng(cfg.seed, 1000 + i);
      const Index da = dims[i % 3][0], db = dims[i % 3][1];
      const BipartiteState rho(random_density_matrix(da * db, rng), da, db);
      const CMatrix u = haar_unitary(da, rng);
      slack[i] = uncertainty_slack(rho, ObservableBasis::from_unitary(u),
                                   ObservableBasis::from_unitary(u * dft_unitary(da)));
    });
    const double worst = *std::min_element(slack.begin(), slack.end());
    sink.add("uncertainty_slack_sweep", std::max(0.0, -worst), 1e-9);
    r.checks.back()["min_slack"] = worst;
  }
  {
    double worst = 0.0;
    for (Index d = 2; d <= 4; ++d) {
      CVector psi = CVector::Zero(d * d);
      for (Index a = 0; a < d; ++a) psi(a * d + a) = 1.0 / std::sqrt(static_cast<double>(d));
      const BipartiteState rho(psi * psi.adjoint(), d, d);
      worst = std::max(worst, std::abs(info_lower_bound(rho) - 2.0 * std::log(static_cast<double>(d))));
    }
    sink.add("maximally_entangled_bound", worst, 1e-9);
  }
  {
    const GridSpec g = make_grid(1.0, 51);
    const PureState u = uniform_state(g, 5);
    sink.add("uniform_irreality", std::abs(irreality(density_matrix(u), ObservableBasis::position(g)) - std::log(5.0)),
             1e-10);
    const GridSpec g2 = make_grid(1.0, 201);
    const PureState gs = gaussian_state(g2, {0, 0, 4.0});
    sink.add("gaussian_irreality",
             std::abs(irreality(density_matrix(gs), ObservableBasis::position(g2)) - gaussian_irreality_closed_form(4.0)),
             1e-3);
  }

  // Theta sums.
  {
    sink.add("eta_inverse_sqrt2", std::abs(eta(1.0 / std::sqrt(2.0)) - 0.9989), 5e-4);
    double worst = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double w = 0.05 * i;
      const double exact = theta3_gaussian_norm(w);
      worst = std::max(worst, std::abs(n_approx(w) - exact) / exact);
    }
    sink.add("theta_approximation", worst, 2.71e-4);
  }

  // Caldirola-Kanai identities in three regimes.
  {
    const CKParams regimes[3] = {CKParams::dimensionless(3.0, 3.0), CKParams::dimensionless(1.5, 3.0),
                                 CKParams::dimensionless(1.0, 3.0)};
    double ode = 0.0, ehrenfest = 0.0, routes = 0.0, heisenberg = std::numeric_limits<double>::infinity();
    const double h = 1e-3;
    for (const CKParams& m : regimes) {
      const double w2 = m.omega() * m.omega();
      const double lambda = m.lambda();
      for (double tau : linspace(0.1, 10.0, 99)) {
        const double t = tau / lambda;
        const double um = ck_coefficients(m, t - h).u, u0 = ck_coefficients(m, t).u, up = ck_coefficients(m, t + h).u;
        const double acc = (up - 2.0 * u0 + um) / (h * h);
        const double vel = (up - um) / (2.0 * h);
        const double scale = std::abs(acc) + std::abs(2.0 * lambda * vel) + std::abs(w2 * u0) + 1e-300;
        ode = std::max(ode, std::abs(acc + 2.0 * lambda * vel + w2 * u0) / scale);

        const double q0 = 1.0, p0 = 0.7;
        const double classical = classical_trajectory(m, q0, p0, t).q;
        ehrenfest = std::max(ehrenfest, std::abs(centroid(m, q0, p0, t).mean_q - classical) /
                                            std::max(std::abs(q0), std::abs(p0 / (m.mass() * lambda))));
        const Widths wd = widths(m, t);
        const PhaseSpaceWidths ps = phase_space_widths(m, t);
        routes = std::max({routes, std::abs(wd.delta_q - ps.delta_q) / ps.delta_q,
                           std::abs(wd.delta_p - ps.delta_p) / ps.delta_p});
        heisenberg = std::min(heisenberg, wd.delta_q * wd.delta_p / (m.hbar() / 2.0));
      }
    }
    sink.add("u_ode_residual", ode, 1e-6);
    sink.add("ehrenfest_centroid", ehrenfest, 1e-9);
    sink.add("width_routes", routes, 1e-9);
    sink.add("heisenberg", std::max(0.0, 1.0 - heisenberg), 1e-12);
    const double zeta = 1.0 / std::sqrt(3.0);
    sink.add("production_rate",
             std::abs(fit_production_rate(CKParams::from_zeta(zeta, 3.0), 10.0, 20.0, 100) - 2.0 * zeta) / (2.0 * zeta),
             1e-2);
  }

  // Pointer model.
  {
    const CKParams rel = CKParams::from_zeta(1.0 / std::sqrt(3.0), 3.0);
    const PointerParams product = PointerParams::from_relative(rel, 2.0, product_state_sigma_cm(rel, 2.0));
    sink.add("pointer_product_root", std::abs(entanglement(product, 0.0)), 1e-9);
    double worst = 0.0;
    for (double ratio : {1.0, 3.0}) {
      const PointerParams p = PointerParams::from_relative(rel, ratio, 1.0);
      for (double t : {0.0, 1.0}) worst = std::max(worst, std::abs(purity_oracle(p, t) - reduced_purity(p, t)));
    }
    sink.add("pointer_oracle", worst, 1e-6);
  }

  // Split-step propagation against the analytic width.
  {
    const CKParams m = CKParams::from_zeta(1.0 / std::sqrt(3.0), 3.0);
    const GridSpec g = make_grid(0.05, 729);
    const PureState psi0 = gaussian_state(g, {0, 0, 1.0 / 0.05});
    const PureState psi = tdse_propagate(g, m, psi0, 0.5, 1e-3);
    const double analytic = widths(m, 0.5).delta_q;
    sink.add("split_step_width", std::abs(moments(psi).sd_q - analytic) / analytic, 5e-3);
    sink.add("split_step_norm", std::abs(psi.coeffs().squaredNorm() - 1.0), 1e-10);
  }

  for (const auto& c : r.checks) {
    r.table.add_row({c["name"].get<std::string>(), c["measured"].is_null() ? kNan : c["measured"].get<double>(),
                     c["tolerance"].get<double>(), c["passed"].get<bool>()});
  }
  r.failed = failed;
  return r;
}

CommandResult cmd_sweep(const RunConfig& cfg) {
  if (!cfg.zeta.empty() && !cfg.epsilon.empty()) throw UsageError("sweep axes conflict: give --zeta or --epsilon");
  if (cfg.lambda || cfg.mass || cfg.spring || cfg.sigma0 || cfg.hbar) {
    throw UsageError("sweep takes dimensionless axes only");
  }
  require_steps(cfg.steps);
  const bool by_zeta = !cfg.zeta.empty();
  const std::vector<double> first = by_zeta ? cfg.zeta : (cfg.epsilon.empty() ? std::vector<double>{1.0} : cfg.epsilon);
  const std::vector<double> tau_es = cfg.tau_e.empty() ? std::vector<double>{3.0} : cfg.tau_e;
  const double tau_max = cfg.tau_max.value_or(20.0);
  if (!(tau_max > 0.0)) throw UsageError("--tau-max must be positive");

  std::vector<CKParams> models;
  for (double a : first) {
    for (double te : tau_es) {
      models.push_back(by_zeta ? resolve_model(std::nullopt, te, a, cfg) : resolve_model(a, te, std::nullopt, cfg));
    }
  }
  std::vector<std::vector<Cell>> rows(models.size());
  parallel_for(models.size(), cfg.workers, [&](std::size_t i) {
    const CKParams& m = models[i];
    const double slope = fit_production_rate(m, 0.5 * tau_max, tau_max, cfg.steps);
    const bool over = m.regime() == Regime::overdamped;
    const double expected = over ? 2.0 * m.zeta() : kNan;
    const Widths w = widths(m, tau_max / m.lambda());
    rows[i] = {static_cast<std::int64_t>(i), m.epsilon(), m.tau_e(), m.zeta_squared(),
               std::string(to_string(m.regime())), slope, expected,
               over ? std::abs(slope - expected) / expected : kNan, w.delta_q, w.delta_p};
  });
  CommandResult r{Table({"index", "epsilon", "tau_e", "zeta_squared", "regime", "slope", "expected_slope",
                         "relative_error", "delta_q_final", "delta_p_final"})};
  bool failed = false;
  CheckSink sink{r.checks, failed, 1.0};
  for (auto& row : rows) {
    const double rel = std::get<double>(row[7]);
    if (!std::isnan(rel)) sink.add("production_rate_" + std::to_string(std::get<std::int64_t>(row[0])), rel, 1e-2);
    r.table.add_row(std::move(row));
  }
  r.failed = failed;
  return r;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  const std::optional<RunConfig> parsed = parse_args(argc, argv, out, err, code);
  if (!parsed) return code;
  const RunConfig& cfg = *parsed;

  CommandResult result{Table({})};
  try {
    if (cfg.subcommand == "fig1") result = cmd_fig1(cfg);
    else if (cfg.subcommand == "fig2") result = cmd_fig2(cfg);
    else if (cfg.subcommand == "irreality") result = cmd_irreality(cfg);
    else if (cfg.subcommand == "ck") result = cmd_ck(cfg);
    else if (cfg.subcommand == "pointer") result = cmd_pointer(cfg);
    else if (cfg.subcommand == "check") result = cmd_check(cfg);
    else if (cfg.subcommand == "sweep") result = cmd_sweep(cfg);
    else throw UsageError("unknown subcommand " + cfg.subcommand);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IndexError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const LeakageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }

  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot open " << cfg.out << '\n';
      return kExitUsage;
    }
  }
  std::ostream& sink = cfg.out.empty() ? out : file;
  if (cfg.format == "json") {
    nlohmann::ordered_json doc;
    doc["config"] = config_json(cfg);
    const nlohmann::ordered_json rows = result.table.to_json();
    doc["results"] = result.single_row && rows.size() == 1 ? rows[0] : rows;
    doc["checks"] = result.checks;
    sink << doc.dump(2) << '\n';
  } else {
    result.table.write_csv(sink);
  }
  sink.flush();

  if (result.failed) {
    for (const auto& c : result.checks) {
      if (!c["passed"].get<bool>()) err << "check failed: " << c.dump() << '\n';
    }
  }
  if (cfg.subcommand == "check" && result.failed) return kExitCheckFailed;
  return kExitOk;
}

}  // namespace cvreal::cli
