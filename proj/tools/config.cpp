#include "config.hpp"

#include <cmath>
#include <ostream>

#include <CLI11.hpp>

namespace cvreal::cli {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::max(std::abs(a), std::abs(b))); }

std::optional<double> single(const std::vector<double>& v, const char* name) {
  if (v.empty()) return std::nullopt;
  if (v.size() > 1) throw UsageError(std::string("--") + name + " takes a single value outside sweep");
  return v.front();
}

template <class T>
nlohmann::ordered_json opt(const std::optional<T>& v) {
  if (v) return *v;
  return nullptr;
}

}  // namespace

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                    int& exit_code) {
  RunConfig cfg;
  CLI::App app{"Discretized continuous-variable realism and Caldirola-Kanai dynamics", "cvreal"};
  app.set_config("--config", "", "Flat key = value file mirroring the long flags");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);

  app.add_option("--xi", cfg.xi, "Grid dimension (odd)");
  app.add_option("--delta-q", cfg.delta_q, "Position resolution in units of sigma0");
  app.add_option("--epsilon", cfg.epsilon, "k sigma0^2 / (hbar lambda)")->delimiter(',');
  app.add_option("--tau-e", cfg.tau_e, "lambda t_E")->delimiter(',');
  app.add_option("--zeta", cfg.zeta, "Damping discriminant in [0, 1)")->delimiter(',');
  app.add_option("--lambda", cfg.lambda, "Physical damping rate");
  app.add_option("--mass", cfg.mass, "Physical mass");
  app.add_option("--spring", cfg.spring, "Physical spring constant");
  app.add_option("--sigma0", cfg.sigma0, "Physical initial width");
  app.add_option("--hbar", cfg.hbar, "Physical hbar");
  app.add_option("--q0", cfg.q0, "Initial centroid q0 / sigma0");
  app.add_option("--p0", cfg.p0, "Initial momentum 2 sigma0 p0 / hbar");
  app.add_option("--tau-max", cfg.tau_max, "Final dimensionless time");
  app.add_option("--steps", cfg.steps, "Number of time intervals");
  app.add_option("--dt", cfg.dt, "Split-step oracle step in units of 1/lambda");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.out, "Output path (default stdout)");
  app.add_option("--seed", cfg.seed, "Seed for randomized checks");
  app.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--with-oracle", cfg.with_oracle, "Add the split-step or quadrature oracle column");
  app.add_option("--from", cfg.from, "fig1: first width");
  app.add_option("--to", cfg.to, "fig1: last width");
  app.add_option("--step", cfg.step, "fig1: width step");
  app.add_option("--panel", cfg.panel, "fig2: a (position) or b (momentum)");
  app.add_option("--points", cfg.points, "fig2: samples along the coordinate axis");
  app.add_option("--state", cfg.state, "irreality: uniform or gaussian");
  app.add_option("--width", cfg.width, "irreality: dimensionless width");
  app.add_option("--basis", cfg.basis, "irreality: position or momentum");
  app.add_option("--mass-ratio", cfg.mass_ratio, "pointer: m / m_p");
  app.add_option("--sigma-cm", cfg.sigma_cm, "pointer: center-of-mass width / sigma0");
  app.add_option("--tolerance-scale", cfg.tolerance_scale, "check: multiply every tolerance");
  app.add_option("--samples", cfg.samples, "check: random states in the slack sweep");

  const char* names[][2] = {{"fig1", "Discrete uncertainty product eta versus width"},
                            {"fig2", "Scaled probability density grid"},
                            {"irreality", "Numeric irreality of a grid state against its closed form"},
                            {"ck", "Caldirola-Kanai time series"},
                            {"pointer", "Two-body pointer purity and entanglement"},
                            {"check", "Invariant suite"},
                            {"sweep", "Irreality production rate over a parameter grid"}};
  for (const auto& n : names) {
    app.add_subcommand(n[0], n[1])->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    exit_code = kExitOk;
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    exit_code = kExitOk;
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    exit_code = kExitUsage;
    return std::nullopt;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return cfg;
}

CKParams resolve_model(const RunConfig& cfg) {
  return resolve_model(single(cfg.epsilon, "epsilon"), single(cfg.tau_e, "tau-e"), single(cfg.zeta, "zeta"), cfg);
}

CKParams resolve_model(std::optional<double> epsilon, std::optional<double> tau_e, std::optional<double> zeta,
                       const RunConfig& cfg) {
  const bool physical = cfg.lambda || cfg.mass || cfg.spring || cfg.sigma0 || cfg.hbar;
  if (physical) {
    if (!cfg.lambda || !cfg.mass || !cfg.sigma0) {
      throw UsageError("physical parameters need --lambda, --mass and --sigma0");
    }
    if (!(*cfg.lambda > 0.0)) throw UsageError("lambda must be positive: no factorized solution without damping");
    const CKParams phys =
        CKParams::physical(*cfg.lambda, *cfg.mass, cfg.spring.value_or(0.0), *cfg.sigma0, cfg.hbar.value_or(1.0));
    const CKParams model = CKParams::dimensionless(phys.epsilon(), phys.tau_e());
    if (epsilon && !close(*epsilon, model.epsilon())) throw UsageError("--epsilon conflicts with physical values");
    if (tau_e && !close(*tau_e, model.tau_e())) throw UsageError("--tau-e conflicts with physical values");
    if (zeta && !(model.zeta_squared() >= 0.0 && close(*zeta, model.zeta()))) {
      throw UsageError("--zeta conflicts with physical values");
    }
    return model;
  }
  const double te = tau_e.value_or(3.0);
  if (!(te > 0.0)) throw UsageError("tau_E must be positive");
  if (zeta) {
    if (!(*zeta >= 0.0 && *zeta < 1.0)) throw UsageError("zeta must lie in [0, 1)");
    const CKParams model = CKParams::from_zeta(*zeta, te);
    if (epsilon && !close(*epsilon, model.epsilon())) throw UsageError("--epsilon conflicts with --zeta and --tau-e");
    return model;
  }
  const double eps = epsilon.value_or(1.0);
  if (!(eps >= 0.0)) throw UsageError("epsilon must be nonnegative");
  return CKParams::dimensionless(eps, te);
}

nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["subcommand"] = cfg.subcommand;
  j["xi"] = cfg.xi;
  j["delta_q"] = cfg.delta_q;
  j["epsilon"] = cfg.epsilon;
  j["tau_e"] = cfg.tau_e;
  j["zeta"] = cfg.zeta;
  j["lambda"] = opt(cfg.lambda);
  j["mass"] = opt(cfg.mass);
  j["spring"] = opt(cfg.spring);
  j["sigma0"] = opt(cfg.sigma0);
  j["hbar"] = opt(cfg.hbar);
  j["q0"] = opt(cfg.q0);
  j["p0"] = opt(cfg.p0);
  j["tau_max"] = opt(cfg.tau_max);
  j["steps"] = cfg.steps;
  j["dt"] = cfg.dt;
  j["seed"] = cfg.seed;
  j["with_oracle"] = cfg.with_oracle;
  if (cfg.subcommand == "fig1") {
    j["from"] = cfg.from;
    j["to"] = cfg.to;
    j["step"] = cfg.step;
  } else if (cfg.subcommand == "fig2") {
    j["panel"] = cfg.panel;
    j["points"] = cfg.points;
  } else if (cfg.subcommand == "irreality") {
    j["state"] = cfg.state;
    j["width"] = cfg.width;
    j["basis"] = cfg.basis;
  } else if (cfg.subcommand == "pointer") {
    j["mass_ratio"] = cfg.mass_ratio;
    j["sigma_cm"] = opt(cfg.sigma_cm);
  } else if (cfg.subcommand == "check") {
    j["tolerance_scale"] = cfg.tolerance_scale;
    j["samples"] = cfg.samples;
  }
  return j;
}

}  // namespace cvreal::cli
