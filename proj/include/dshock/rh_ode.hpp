#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "dshock/core.hpp"

namespace dshock::rh_ode {

using TraceFn = std::function<OuterState(double x, double t)>;

/// One-sided smooth states on either side of the front.
struct OuterTraces {
  TraceFn left;
  TraceFn right;
};

/// A compactly supported outer solution: the left state lives on
/// [left_edge(t), front] and the right state on [front, right_edge(t)].
/// Both edges are material (they move with the local gas velocity).
struct OuterField1D {
  OuterTraces traces;
  std::function<double(double)> left_edge;
  std::function<double(double)> right_edge;
};

/// Constant states of a two-slab problem, edges at -L + U- t and L + U+ t.
OuterField1D riemann_field(const RiemannData& data);

/// Smooth converging flow with linear velocity profiles,
///   rho = rho0 t0 / (t + t0),  U = (x - x_c) / (t + t0),  H = H0 t0 / (t + t0),
/// on each side (x_c = -a on the left, +b on the right). It solves the
/// pressureless system exactly and keeps the front fed with a decaying flux.
struct CompressionField {
  double rho_left = 1.0;
  double rho_right = 1.0;
  double h_left = 0.0;
  double h_right = 0.0;
  double a = 1.0;
  double b = 1.0;
  double t0 = 1.0;
  double half_length = 10.0;

  OuterField1D field() const;
  /// Exact front amplitudes for the symmetric case (a = b, equal densities
  /// and internal energies): x = 0, u = 0, e(t), h(t) in closed form.
  DeltaFront1D symmetric_front(double t) const;
};

struct TrajectoryOptions {
  double tau_entropy = kEntropyTolerance;
  /// Halving depth used when the entropy margin drops below 10 tau.
  int max_halvings = 6;
  double mass_floor = 1e-14;
};

/// RH deficits at the front position, after checking the (tolerant) entropy
/// condition. Returns (de/dt, d(e u)/dt, d(e u^2/2 + h)/dt).
Deficits rh_rhs(const DeltaFront1D& front, const OuterTraces& traces, double t,
                double tau_entropy = kEntropyTolerance);

class FrontTrajectory {
 public:
  std::vector<double> times;
  std::vector<DeltaFront1D> states;
  std::vector<Deficits> deficits;

  std::size_t size() const noexcept { return times.size(); }
  /// Cubic Hermite interpolation of (x, e, e u, e u^2/2 + h), then u and h
  /// recovered from the conserved values.
  DeltaFront1D at(double t) const;
  /// Columns t,x,u_delta,e,h,deficit_mass,deficit_momentum,deficit_energy.
  void write_csv(std::ostream& os) const;
};

/// Classical RK4 on the conserved front variables (x, e, e u, e u^2/2 + h).
/// `front0.u_delta` is the initial front velocity; it is the only source of
/// u while e = 0. Throws EntropyViolation and MassCollapse.
FrontTrajectory integrate(const DeltaFront1D& front0, const OuterTraces& traces,
                          double t_end, double dt, const TrajectoryOptions& opts = {});

}  // namespace dshock::rh_ode
