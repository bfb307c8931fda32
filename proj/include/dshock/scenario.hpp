#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dshock/core.hpp"
#include "json.hpp"

namespace dshock {

enum class ScenarioKind { Riemann, FrontOde, Spherical, Particles, Verify, Audit };

const char* to_string(ScenarioKind k);

struct StateSpec {
  double rho = 1.0;
  double u = 0.0;
  double H = 0.0;
  bool operator==(const StateSpec&) const = default;
};

/// Smooth compression field parameters (front_ode with field = "compression").
struct CompressionSpec {
  double a = 1.0;
  double b = 1.0;
  double t0 = 1.0;
  bool operator==(const CompressionSpec&) const = default;
};

/// Explicit initial front for front_ode; by default the front starts empty at
/// x = 0 with the admissible speed of the traces there.
struct FrontSeed {
  double x = 0.0;
  double u = 0.0;
  double e = 0.0;
  double h = 0.0;
  bool operator==(const FrontSeed&) const = default;
};

struct SphereSpec {
  int n = 3;
  double rho0 = 1.0;
  double inflow_speed = 1.0;
  double H0 = 0.0;
  double outer_radius = 4.0;
  double R0 = 1.0;
  double G0 = -0.5;
  double e0 = 1.0;
  double h0 = 0.0;
  bool operator==(const SphereSpec&) const = default;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::Riemann;
  std::string name = "scenario";

  StateSpec left{1.0, 1.0, 1.0};
  StateSpec right{1.0, -1.0, 1.0};
  double half_length = 10.0;

  double t_end = 1.0;
  double dt = 1e-3;
  int stride = 100;  ///< samples are written every `stride` steps of dt

  int N = 10000;
  double weak_tol = 1e-7;
  double conservation_tol = 1e-12;
  double momentum_tol = 1e-8;
  double monotone_tol = 1e-7;
  double entropy_tau = kEntropyTolerance;

  std::string field = "riemann";  ///< front_ode: riemann | compression
  CompressionSpec compression;
  std::optional<FrontSeed> front;
  SphereSpec sphere;
  std::string audit_source = "riemann";  ///< riemann | front_ode | particles | spherical

  std::string out_dir = "out";

  RiemannData riemann_data() const;
  bool operator==(const Scenario&) const = default;
};

/// Parses and validates a JSON scenario. Missing fields take their defaults.
/// Throws Parse (malformed JSON with line and column, wrong field types,
/// unknown keys) and Validation (violated preconditions).
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Throws Validation naming the first violated precondition.
void validate(const Scenario& s);

nlohmann::json to_json(const Scenario& s);

struct RunOptions {
  std::optional<std::string> out_dir;  ///< overrides the scenario's output directory
  std::optional<double> tol;           ///< overrides the scenario's main check tolerance
  bool quiet = false;
};

struct RunResult {
  int exit_code = 0;
  std::string message;
  std::string report_text;  ///< human-readable table for the terminal
  std::vector<std::string> artifacts;
  nlohmann::json summary;
};

/// Exit codes: 0 pass, 2 validation, 3 entropy violation, 4 quadrature
/// failure, 5 check failure.
int exit_code_for(ErrorKind k);

/// Runs the scenario, writes CSV/JSON/SVG under the output directory and
/// reports whether every check passed. Module errors are caught and mapped to
/// exit codes.
RunResult run_scenario(const Scenario& s, const RunOptions& opts = {});

/// Repeats the scenario over values of one parameter ("N" for particles,
/// "dt" for front_ode), measures the error against the exact front and fits
/// a convergence order by least squares on log(error).
RunResult run_sweep(const Scenario& s, const std::string& param, const std::vector<double>& values,
                    const RunOptions& opts = {});

}  // namespace dshock
