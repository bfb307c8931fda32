#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dshock/errors.hpp"

namespace dshock {

/// Default tolerance for the non-strict entropy test, relative to
/// max(|U-|, |U+|, 1).
inline constexpr double kEntropyTolerance = 1e-9;

/// Smooth one-sided state (rho, U, H) next to a front. In 1D `rho` and
/// `h_density` are line densities; in radial problems `u` is the radial
/// component U.nu.
class OuterState {
 public:
  OuterState() = default;
  OuterState(double rho, double u, double h_density);

  static OuterState vacuum(double u = 0.0) { return OuterState(0.0, u, 0.0); }

  double rho() const noexcept { return rho_; }
  double u() const noexcept { return u_; }
  double h_density() const noexcept { return h_density_; }

  double momentum() const noexcept { return rho_ * u_; }
  double momentum_flux() const noexcept { return rho_ * u_ * u_; }
  double kinetic_density() const noexcept { return 0.5 * rho_ * u_ * u_; }
  /// rho|U|^2/2 + H
  double energy_density() const noexcept { return kinetic_density() + h_density_; }
  double energy_flux() const noexcept { return energy_density() * u_; }

  bool operator==(const OuterState&) const = default;

 private:
  double rho_ = 0.0;
  double u_ = 0.0;
  double h_density_ = 0.0;
};

/// Two constant states on [-L, 0) and [0, L], zero outside.
class RiemannData {
 public:
  RiemannData(OuterState left, OuterState right, double half_length);

  const OuterState& left() const noexcept { return left_; }
  const OuterState& right() const noexcept { return right_; }
  double half_length() const noexcept { return half_length_; }

  bool operator==(const RiemannData&) const = default;

 private:
  OuterState left_;
  OuterState right_;
  double half_length_ = 1.0;
};

/// Singular part of (rho, H) concentrated at a point of the line.
struct DeltaFront1D {
  double x = 0.0;
  double u_delta = 0.0;
  double e = 0.0;
  double h = 0.0;

  double momentum() const noexcept { return e * u_delta; }
  double kinetic() const noexcept { return 0.5 * e * u_delta * u_delta; }
  double energy() const noexcept { return kinetic() + h; }
};

/// One interval of a piecewise description. A vacuum fan carries rho = H = 0
/// and a velocity interpolated linearly between its end values.
struct Piece {
  double a = 0.0;
  double b = 0.0;
  OuterState state;
  bool vacuum_fan = false;
  double fan_u_a = 0.0;
  double fan_u_b = 0.0;

  static Piece constant(double a, double b, OuterState s);
  static Piece fan(double a, double b, double u_a, double u_b);

  OuterState at(double x) const;
};

/// Snapshot of a 1D solution at time `t`.
struct Solution1D {
  double t = 0.0;
  std::vector<Piece> pieces;
  std::optional<DeltaFront1D> front;

  /// Regular part at x; zero state outside every piece.
  OuterState at(double x) const;
  /// Sorted piece end points (support boundaries and the front).
  std::vector<double> breakpoints() const;
  void validate() const;
};

/// Time-dependent solution, queried as snapshots.
using SolutionHistory = std::function<Solution1D(double t)>;

/// Bracket [f] = f- - f+.
inline double jump(double left_value, double right_value) noexcept {
  return left_value - right_value;
}

/// Right-hand sides of the three delta-shock Rankine-Hugoniot relations
/// projected on the normal.
struct Deficits {
  double mass = 0.0;
  double momentum = 0.0;
  double energy = 0.0;
};

Deficits rh_deficits(const OuterState& left, const OuterState& right, double u_delta,
                     double normal = 1.0);

/// Strict overlap test U+.nu < U_delta.nu < U-.nu.
bool entropy_ok(const OuterState& left, const OuterState& right, double u_delta,
                double normal = 1.0);

/// min(U-.nu - U_delta.nu, U_delta.nu - U+.nu); positive iff strictly admissible.
double entropy_margin(const OuterState& left, const OuterState& right, double u_delta,
                      double normal = 1.0);

/// Non-strict variant for numerical trajectories: margin >= -tol * scale with
/// scale = max(|U-|, |U+|, 1).
bool entropy_ok_tol(const OuterState& left, const OuterState& right, double u_delta,
                    double normal = 1.0, double tol = kEntropyTolerance);

double entropy_scale(const OuterState& left, const OuterState& right) noexcept;

}  // namespace dshock
