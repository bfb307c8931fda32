#pragma once

#include "dshock/core.hpp"

namespace dshock::riemann {

/// Outer (W_kin, W_int) and front (w_kin, w_int) energies at one time.
struct EnergyBudget {
  double w_kin_outer = 0.0;
  double w_int_outer = 0.0;
  double w_kin_front = 0.0;
  double w_int_front = 0.0;

  double total() const noexcept {
    return w_kin_outer + w_int_outer + w_kin_front + w_int_front;
  }
};

/// Velocity of the delta-shock for compressive data ([U] > 0). This is the
/// entropy-admissible root of
///   [rho] u^2 - 2 [rho U] u + [rho U^2] = 0,
/// which is the momentum balance of a front fed by constant outer states.
/// For [rho] = 0 it degenerates to (U- + U+)/2.
///
/// Throws NoOverlap when [U] <= 0 and DegenerateData when rho- = rho+ = 0.
double front_speed(const RiemannData& data);

/// Exact solution of the compactly supported two-state problem.
///
/// Compressive data produce a single front x(t) = u t between two shrinking
/// slabs; the slabs are exhausted at `validity_window()`, after which the
/// closed forms no longer apply and queries throw OutOfRange. Expansive data
/// open a vacuum fan and never expire.
class RiemannSolution {
 public:
  explicit RiemannSolution(RiemannData data);

  const RiemannData& data() const noexcept { return data_; }
  bool has_front() const noexcept { return has_front_; }
  double speed() const noexcept { return speed_; }
  double validity_window() const noexcept { return window_; }

  /// Front amplitudes at t: e = [U rho] t - [rho] x(t) and h from the energy
  /// relation, h = t([E U] - [E] u) - e u^2 / 2 with E = rho U^2/2 + H.
  DeltaFront1D front_at(double t) const;

  /// Rates (de/dt, d(e u)/dt, d(e u^2/2 + h)/dt); constant in time.
  Deficits front_rates() const;

  Solution1D at(double t) const;
  SolutionHistory history() const;

 private:
  void check_time(double t) const;

  RiemannData data_;
  bool has_front_ = false;
  double speed_ = 0.0;
  double window_ = 0.0;
};

RiemannSolution solve_riemann(const RiemannData& data);

/// Energies from exact integration of the piecewise-constant snapshot.
EnergyBudget budget_of(const Solution1D& snapshot);

/// Energy budget at t for compressive data. For [rho] = 0 this uses the
/// closed forms
///   W_int = W_int(0) - (H+ + H-)/2 [U] t
///   W_kin = W_kin(0) - rho [U] ((U-)^2 + (U+)^2)/4 t
///   w_kin = [U] rho ((U- + U+)/2)^2 t / 2
///   w_int = [U]/2 (rho [U]^2/4 + H- + H+) t
/// and otherwise integrates the snapshot. Throws OutOfRange past the window.
EnergyBudget energy_budget(const RiemannData& data, double t);

/// Energies of the initial data (no front).
EnergyBudget initial_budget(const RiemannData& data);

}  // namespace dshock::riemann
