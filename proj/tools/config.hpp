#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvreal/ck.hpp"

namespace cvreal::cli {

// Bad flags, bad ranges and conflicting parameters; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string subcommand;

  int xi = 201;
  double delta_q = 0.1;  // in units of sigma0

  // Dimensionless model; sweep accepts comma lists.
  std::vector<double> epsilon;
  std::vector<double> tau_e;
  std::vector<double> zeta;
  // Physical model, normalized to hbar = sigma0 = lambda = 1 internally.
  std::optional<double> lambda;
  std::optional<double> mass;
  std::optional<double> spring;
  std::optional<double> sigma0;
  std::optional<double> hbar;

  // Q0 = q0 / sigma0 and P0 = 2 sigma0 p0 / hbar.
  std::optional<double> q0;
  std::optional<double> p0;
  std::optional<double> tau_max;
  int steps = 200;
  double dt = 1e-3;  // oracle step in units of 1 / lambda

  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 20260101;
  int workers = 1;
  bool with_oracle = false;

  double from = 0.05;
  double to = 2.0;
  double step = 0.01;

  std::string panel = "a";
  int points = 201;

  std::string state = "gaussian";
  double width = 4.0;
  std::string basis = "position";

  double mass_ratio = 1.0;
  std::optional<double> sigma_cm;  // in units of sigma0

  double tolerance_scale = 1.0;
  int samples = 200;
};

// Fills cfg from argv. Returns nullopt with the exit code set when parsing
// ended early (help, parse error).
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                    int& exit_code);

// The model in units hbar = sigma0 = lambda = 1. Uses the single epsilon,
// tau_E, zeta values, or the physical values, with tau_E = 3 and epsilon = 1
// when unspecified. Conflicts beyond 1e-9 raise UsageError.
CKParams resolve_model(const RunConfig& cfg);
CKParams resolve_model(std::optional<double> epsilon, std::optional<double> tau_e, std::optional<double> zeta,
                       const RunConfig& cfg);

// Echo of the run parameters for JSON output. Output path and worker count
// are left out so they never change the bytes written.
nlohmann::ordered_json config_json(const RunConfig& cfg);

}  // namespace cvreal::cli
