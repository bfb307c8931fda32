#pragma once

#include <array>
#include <string>
#include <vector>

#include "dshock/core.hpp"
#include "dshock/quadrature.hpp"
#include "json.hpp"

namespace dshock::weak {

/// Product mollifier A psi((x - x0)/rx) psi((t - t0)/rt) with
/// psi(s) = exp(1 - 1/(1 - s^2)) on |s| < 1, so psi(0) = 1.
struct BumpTestFunction {
  double x0 = 0.0;
  double t0 = 0.0;
  double rx = 1.0;
  double rt = 1.0;
  double amplitude = 1.0;
};

struct BumpValue {
  double value = 0.0;
  double d_dt = 0.0;
  double d_dx = 0.0;
};

BumpValue bump_eval(const BumpTestFunction& phi, double x, double t);

enum class Identity { Mass, Momentum, Energy };
inline constexpr std::array<Identity, 3> kIdentities{Identity::Mass, Identity::Momentum,
                                                     Identity::Energy};
const char* to_string(Identity id);

struct Settings {
  double rel_tol = 1e-10;  ///< outer (time) quadrature tolerance
  double inner_rel_tol = 1e-13;
  double pass_threshold = 1e-7;
};

/// Left-hand side of one integral identity for test function phi:
///   int int q (phi_t + U phi_x) dx dt + int f (phi_t + u_delta phi_x)|_front dt
///   + int q0 phi(x, 0) dx + f0 phi(x_front(0), 0),
/// with (q, f) = (rho, e), (rho U, e u_delta) or (rho U^2/2 + H, e u_delta^2/2 + h).
/// The space integral is split at every piece boundary, so no panel crosses
/// the front. Zero for an exact solution, up to quadrature error.
double residual(const SolutionHistory& solution, const BumpTestFunction& phi, Identity which,
                const Settings& s = {});

/// Integral of |phi| over t >= 0, used to normalise residuals.
double l1_norm(const BumpTestFunction& phi);

/// Deterministic 20-bump family on [0, t_max]: ten bumps riding the front,
/// four in each smooth region and two straddling t = 0.
std::vector<BumpTestFunction> default_family(const SolutionHistory& solution, double t_max);

struct BumpResult {
  BumpTestFunction phi;
  std::array<double, 3> residual{};    ///< raw, per identity
  std::array<double, 3> normalized{};  ///< residual / ||phi||_1
};

struct Report {
  std::vector<BumpResult> bumps;
  std::array<double, 3> max_normalized{};
  Settings settings;
  bool passed = false;

  nlohmann::json to_json() const;
};

Report verify(const SolutionHistory& solution, const std::vector<BumpTestFunction>& family,
              const Settings& s = {});

/// Integration by parts along the front:
///   int e (phi_t + u_delta phi_x) dt + e(0) phi(x(0), 0) + int (de/dt) phi dt,
/// with de/dt from a fourth-order difference of the history. Zero up to
/// quadrature and differencing error.
double integration_by_parts_gap(const SolutionHistory& solution, const BumpTestFunction& phi,
                                const Settings& s = {});

}  // namespace dshock::weak
