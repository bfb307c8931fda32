#include "dshock/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dshock {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::NoOverlap: return "NoOverlap";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::EntropyViolation: return "EntropyViolation";
    case ErrorKind::MassCollapse: return "MassCollapse";
    case ErrorKind::RadiusCollapse: return "RadiusCollapse";
    case ErrorKind::EmptySupport: return "EmptySupport";
    case ErrorKind::NoCluster: return "NoCluster";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
  }
  return "Error";
}

OuterState::OuterState(double rho, double u, double h_density)
    : rho_(rho), u_(u), h_density_(h_density) {
  if (!std::isfinite(rho) || !std::isfinite(u) || !std::isfinite(h_density)) {
    throw Error(ErrorKind::Validation, "state components must be finite");
  }
  if (rho < 0.0) throw Error(ErrorKind::Validation, "rho must be nonnegative");
  if (h_density < 0.0) {
    throw Error(ErrorKind::Validation, "internal energy density H must be nonnegative");
  }
}

RiemannData::RiemannData(OuterState left, OuterState right, double half_length)
    : left_(left), right_(right), half_length_(half_length) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw Error(ErrorKind::Validation, "half_length must be positive");
  }
}

Piece Piece::constant(double a, double b, OuterState s) {
  Piece p;
  p.a = a;
  p.b = b;
  p.state = s;
  return p;
}

Piece Piece::fan(double a, double b, double u_a, double u_b) {
  Piece p;
  p.a = a;
  p.b = b;
  p.vacuum_fan = true;
  p.fan_u_a = u_a;
  p.fan_u_b = u_b;
  p.state = OuterState::vacuum(0.5 * (u_a + u_b));
  return p;
}

OuterState Piece::at(double x) const {
  if (!vacuum_fan) return state;
  if (b <= a) return OuterState::vacuum(fan_u_a);
  const double s = std::clamp((x - a) / (b - a), 0.0, 1.0);
  return OuterState::vacuum(fan_u_a + s * (fan_u_b - fan_u_a));
}

OuterState Solution1D::at(double x) const {
  for (const auto& p : pieces) {
    if (x >= p.a && x < p.b) return p.at(x);
  }
  return {};
}

std::vector<double> Solution1D::breakpoints() const {
  std::vector<double> pts;
  pts.reserve(2 * pieces.size() + 1);
  for (const auto& p : pieces) {
    pts.push_back(p.a);
    pts.push_back(p.b);
  }
  if (front) pts.push_back(front->x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

void Solution1D::validate() const {
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    if (!(p.b >= p.a)) {
      std::ostringstream os;
      os << "piece " << i << " has reversed interval [" << p.a << ", " << p.b << "]";
      throw Error(ErrorKind::Validation, os.str());
    }
    if (i > 0 && pieces[i - 1].b > p.a) {
      throw Error(ErrorKind::Validation, "pieces must be ordered and non-overlapping");
    }
    if (p.vacuum_fan && (p.state.rho() != 0.0 || p.state.h_density() != 0.0)) {
      throw Error(ErrorKind::Validation, "vacuum fan must carry rho = H = 0");
    }
  }
  if (front && (front->e < 0.0 || front->h < 0.0)) {
    throw Error(ErrorKind::Validation, "front amplitudes must be nonnegative");
  }
}

Deficits rh_deficits(const OuterState& left, const OuterState& right, double u_delta,
                     double normal) {
  // Brackets of normal fluxes; with nu = -1 the flux components flip sign.
  const double g = u_delta * normal;
  Deficits d;
  d.mass = jump(left.momentum(), right.momentum()) * normal - jump(left.rho(), right.rho()) * g;
  d.momentum =
      jump(left.momentum_flux(), right.momentum_flux()) * normal -
      jump(left.momentum(), right.momentum()) * g;
  d.energy = jump(left.energy_flux(), right.energy_flux()) * normal -
             jump(left.energy_density(), right.energy_density()) * g;
  return d;
}

double entropy_margin(const OuterState& left, const OuterState& right, double u_delta,
                      double normal) {
  const double g = u_delta * normal;
  return std::min(left.u() * normal - g, g - right.u() * normal);
}

bool entropy_ok(const OuterState& left, const OuterState& right, double u_delta,
                double normal) {
  return entropy_margin(left, right, u_delta, normal) > 0.0;
}

double entropy_scale(const OuterState& left, const OuterState& right) noexcept {
  return std::max({std::abs(left.u()), std::abs(right.u()), 1.0});
}

bool entropy_ok_tol(const OuterState& left, const OuterState& right, double u_delta,
                    double normal, double tol) {
  return entropy_margin(left, right, u_delta, normal) >= -tol * entropy_scale(left, right);
}

}  // namespace dshock
