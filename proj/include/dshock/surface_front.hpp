#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "dshock/core.hpp"

namespace dshock::surface {

inline constexpr double kCollapseRadius = 1e-10;

/// Area of the unit sphere S^{n-1} in R^n (2 for n = 1, 2 pi for n = 2, ...).
double unit_sphere_area(int n);

/// Mean curvature K = -(1/2) div(nu) of the sphere |x| = R with outward
/// normal, i.e. -(n-1)/(2R).
double mean_curvature(double radius, int n);

/// Surface divergence of a U_delta for a front moving along its normal with
/// speed G: -2 K G a.
double tangential_divergence(double a, double speed, double curvature);

/// Radially symmetric front |x| = R(t). `e` and `h` are surface densities.
struct SphericalFront {
  double radius = 1.0;
  double speed = 0.0;  ///< G = dR/dt
  double e = 0.0;
  double h = 0.0;
  int n = 3;

  double area() const;
  double mass() const { return e * area(); }
  double radial_momentum() const { return e * speed * area(); }
  double energy() const { return (0.5 * e * speed * speed + h) * area(); }
};

/// Radial one-sided states (u is the radial component) as functions of (r, t).
struct RadialTraces {
  std::function<OuterState(double r, double t)> inner;
  std::function<OuterState(double r, double t)> outer;
};

/// Interior region [0, R(t)) and exterior shell (R(t), outer_edge(t)).
struct RadialField {
  RadialTraces traces;
  std::function<double(double)> outer_edge;
  int n = 3;
};

/// Cold dust falling onto the origin with constant speed v through an empty
/// interior: u_r = -v and, by mass conservation along characteristics,
///   rho = rho0 ((r + v t)/r)^(n-1),  H = H0 ((r + v t)/r)^(n-1).
/// The shell initially occupies r < outer_radius.
struct AccretionField {
  int n = 3;
  double rho0 = 1.0;
  double inflow_speed = 1.0;
  double h0 = 0.0;
  double outer_radius = 4.0;

  RadialField field() const;
};

/// d/dt of (R, e, e G, e G^2/2 + h) from the curvature form of the front
/// relations:
///   de/dt - 2 K G e = [rho u] - [rho] G, and likewise for e G and the energy.
struct SphericalRates {
  double d_radius = 0.0;
  double d_e = 0.0;
  double d_eG = 0.0;
  double d_energy = 0.0;
};

/// Throws EntropyViolation when U+ < G < U- fails (tolerantly) and
/// RadiusCollapse when R <= kCollapseRadius.
SphericalRates spherical_rhs(const SphericalFront& front, const RadialTraces& traces, double t,
                             double tau_entropy = kEntropyTolerance);

struct SphericalRecord {
  double t = 0.0;
  double radius = 0.0;
  double speed = 0.0;
  double e = 0.0;
  double h = 0.0;
  double m = 0.0;             ///< front mass, area-weighted e
  double p_r = 0.0;           ///< front radial momentum
  double front_energy = 0.0;  ///< area-weighted e G^2/2 + h
  double entropy_margin = 0.0;
};

enum class Termination { ReachedEnd, Collapsed };

struct SphericalTrajectory {
  std::vector<SphericalRecord> records;
  Termination termination = Termination::ReachedEnd;
  int n = 3;

  bool collapsed() const { return termination == Termination::Collapsed; }
  SphericalFront front(std::size_t i) const;
  /// Columns t,R,G,e,h,m,p_r,front_energy.
  void write_csv(std::ostream& os) const;
};

struct SphericalOptions {
  double tau_entropy = kEntropyTolerance;
  double collapse_radius = kCollapseRadius;
};

/// RK4 on the area-weighted variables (R, m, p_r, front energy), which turns
/// the curvature terms into plain surface-transport derivatives. Integration
/// stops early (termination = Collapsed) once R reaches the collapse radius;
/// the last record then carries the concentrated mass and energy.
SphericalTrajectory integrate_spherical(const SphericalFront& front0, const RadialTraces& traces,
                                        double t_end, double dt,
                                        const SphericalOptions& opts = {});

}  // namespace dshock::surface
