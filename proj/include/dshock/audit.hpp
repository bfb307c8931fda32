#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dshock/core.hpp"
#include "dshock/quadrature.hpp"
#include "dshock/rh_ode.hpp"
#include "dshock/sticky.hpp"
#include "dshock/surface_front.hpp"
#include "json.hpp"

namespace dshock::audit {

/// Volume (capital) and front (lower case) masses, momenta and energies at
/// one time.
struct BalanceRecord {
  double t = 0.0;
  double M = 0.0;
  double m = 0.0;
  double P = 0.0;
  double p = 0.0;
  double W_kin = 0.0;
  double w_kin = 0.0;
  double W_int = 0.0;
  double w_int = 0.0;
  /// Integral of rho |U| plus e |U_delta|; scale for the momentum check.
  double momentum_magnitude = 0.0;

  double total_mass() const { return M + m; }
  double total_momentum() const { return P + p; }
  double total_energy() const { return W_kin + w_kin + W_int + w_int; }
};

/// Closed-form snapshot. Regions are integrated with adaptive Gauss-Legendre
/// (exact for constant pieces).
BalanceRecord totals(const Solution1D& snapshot, const quad::Options& q = {});

/// ODE front riding on a prescribed outer field.
BalanceRecord totals(const rh_ode::OuterField1D& field, const DeltaFront1D& front, double t,
                     const quad::Options& q = {});

/// Spherical front record with a radial outer field.
BalanceRecord totals(const surface::RadialField& field, const surface::SphericalRecord& rec,
                     const quad::Options& q = {});

/// Particle snapshot: the heaviest cluster (mass >= 2 M(0)/N) is the front,
/// everything else is volume.
BalanceRecord totals(const sticky::ParticleSystem& system);

struct Tolerances {
  double conservation = 1e-12;  ///< relative drift of M+m and of the total energy
  double momentum = 1e-8;       ///< relative drift of P+p
  double monotone = 1e-7;       ///< finite-difference slack, relative to scale/time span
};

struct RelationCheck {
  std::string name;
  bool passed = true;
  /// Distance to the violation threshold; negative means violated.
  double margin = 0.0;
  double worst_value = 0.0;
  double worst_time = 0.0;
};

struct BalanceVerdict {
  std::vector<RelationCheck> checks;

  bool passed() const;
  const RelationCheck& get(const std::string& name) const;
  std::vector<std::string> violated() const;
};

/// Checks, over a time series: M+m, P+p and total energy constant; dm/dt >= 0,
/// dW_kin/dt <= 0, dW_int/dt <= 0, d(w_kin + w_int)/dt >= 0,
/// d(W_int + w_int)/dt >= 0 and dW_kin/dt + dw_kin/dt = -(dW_int/dt + dw_int/dt),
/// using central differences on the sample grid.
BalanceVerdict check_balance(std::span<const BalanceRecord> records, const Tolerances& tol = {});

nlohmann::json to_json(const BalanceRecord& r);
nlohmann::json to_json(const BalanceVerdict& v);
nlohmann::json report_json(std::span<const BalanceRecord> records, const BalanceVerdict& v);
void print_table(std::ostream& os, std::span<const BalanceRecord> records);

/// Volume transport consistency for the outer mass of an ODE front: central
/// difference of the quadrature M(t) against
///   sum over regions of rho(b)(b' - U(b)) - rho(a)(a' - U(a)),
/// returned as |difference| / max(|M'|, |dm/dt|, tiny).
double volume_transport_gap(const rh_ode::OuterField1D& field,
                            const rh_ode::FrontTrajectory& trajectory, double t, double delta,
                            const quad::Options& q = {});

}  // namespace dshock::audit
