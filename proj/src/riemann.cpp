#include "dshock/riemann.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dshock::riemann {

double front_speed(const RiemannData& data) {
  const OuterState& l = data.left();
  const OuterState& r = data.right();
  if (!(jump(l.u(), r.u()) > 0.0)) {
    throw Error(ErrorKind::NoOverlap, "front_speed requires [U] > 0 (use the vacuum branch)");
  }
  if (l.rho() == 0.0 && r.rho() == 0.0) {
    throw Error(ErrorKind::DegenerateData, "front_speed: both densities vanish");
  }
  const double d_rho = jump(l.rho(), r.rho());
  if (d_rho == 0.0) return 0.5 * (l.u() + r.u());

  const double d_mom = jump(l.momentum(), r.momentum());
  const double d_flux = jump(l.momentum_flux(), r.momentum_flux());
  // Discriminant [rho U]^2 - [rho][rho U^2] = rho- rho+ [U]^2, written in
  // factored form so it cannot go negative through rounding.
  const double disc = std::sqrt(l.rho() * r.rho()) * jump(l.u(), r.u());
  // Entropy-admissible root ([rho U] - sqrt(disc)) / [rho], evaluated without
  // cancellation.
  if (d_mom >= 0.0) return d_flux / (d_mom + disc);
  return (d_mom - disc) / d_rho;
}

RiemannSolution::RiemannSolution(RiemannData data) : data_(data) {
  const double du = jump(data_.left().u(), data_.right().u());
  has_front_ = du > 0.0;
  window_ = std::numeric_limits<double>::infinity();
  if (!has_front_) return;
  speed_ = front_speed(data_);
  const double L = data_.half_length();
  const double left_rate = data_.left().u() - speed_;
  const double right_rate = speed_ - data_.right().u();
  if (left_rate > 0.0) window_ = std::min(window_, L / left_rate);
  if (right_rate > 0.0) window_ = std::min(window_, L / right_rate);
}

void RiemannSolution::check_time(double t) const {
  if (!(t >= 0.0)) throw Error(ErrorKind::OutOfRange, "time must be nonnegative");
  if (t > window_) {
    std::ostringstream os;
    os << "t = " << t << " exceeds the validity window " << window_
       << " (an outer slab has been absorbed by the front)";
    throw Error(ErrorKind::OutOfRange, os.str());
  }
}

Deficits RiemannSolution::front_rates() const {
  if (!has_front_) return {};
  return rh_deficits(data_.left(), data_.right(), speed_);
}

DeltaFront1D RiemannSolution::front_at(double t) const {
  check_time(t);
  if (!has_front_) throw Error(ErrorKind::NoOverlap, "expansive data carry no front");
  const OuterState& l = data_.left();
  const OuterState& r = data_.right();
  DeltaFront1D f;
  f.x = speed_ * t;
  f.u_delta = speed_;
  f.e = jump(l.momentum(), r.momentum()) * t - jump(l.rho(), r.rho()) * f.x;
  const double energy_rate =
      jump(l.energy_flux(), r.energy_flux()) - jump(l.energy_density(), r.energy_density()) * speed_;
  f.h = t * energy_rate - f.kinetic();
  // Rounding can leave -1e-17 at t = 0 or for tiny rates.
  if (f.e < 0.0 && f.e > -1e-14 * (1.0 + t)) f.e = 0.0;
  if (f.h < 0.0 && f.h > -1e-14 * (1.0 + t)) f.h = 0.0;
  return f;
}

Solution1D RiemannSolution::at(double t) const {
  check_time(t);
  const OuterState& l = data_.left();
  const OuterState& r = data_.right();
  const double L = data_.half_length();
  Solution1D s;
  s.t = t;
  const double left_end = -L + l.u() * t;
  const double right_end = L + r.u() * t;
  if (has_front_) {
    const DeltaFront1D f = front_at(t);
    // At the window edge an exhausted slab is clamped to zero length.
    s.pieces.push_back(Piece::constant(left_end, std::max(f.x, left_end), l));
    s.pieces.push_back(Piece::constant(std::min(f.x, right_end), right_end, r));
    s.front = f;
  } else {
    const double fan_a = l.u() * t;
    const double fan_b = r.u() * t;
    s.pieces.push_back(Piece::constant(left_end, fan_a, l));
    if (fan_b > fan_a) s.pieces.push_back(Piece::fan(fan_a, fan_b, l.u(), r.u()));
    s.pieces.push_back(Piece::constant(fan_b, right_end, r));
  }
  return s;
}

SolutionHistory RiemannSolution::history() const {
  return [self = *this](double t) { return self.at(t); };
}

RiemannSolution solve_riemann(const RiemannData& data) { return RiemannSolution(data); }

EnergyBudget budget_of(const Solution1D& snapshot) {
  EnergyBudget b;
  for (const auto& p : snapshot.pieces) {
    if (p.vacuum_fan) continue;
    const double len = p.b - p.a;
    b.w_kin_outer += p.state.kinetic_density() * len;
    b.w_int_outer += p.state.h_density() * len;
  }
  if (snapshot.front) {
    b.w_kin_front = snapshot.front->kinetic();
    b.w_int_front = snapshot.front->h;
  }
  return b;
}

EnergyBudget initial_budget(const RiemannData& data) {
  const double L = data.half_length();
  EnergyBudget b;
  b.w_kin_outer = (data.left().kinetic_density() + data.right().kinetic_density()) * L;
  b.w_int_outer = (data.left().h_density() + data.right().h_density()) * L;
  return b;
}

EnergyBudget energy_budget(const RiemannData& data, double t) {
  const RiemannSolution sol(data);
  if (!sol.has_front()) {
    throw Error(ErrorKind::NoOverlap, "energy_budget requires [U] > 0");
  }
  const Solution1D snap = sol.at(t);  // validates t against the window
  if (jump(data.left().rho(), data.right().rho()) != 0.0) return budget_of(snap);

  const double rho = data.left().rho();
  const double um = data.left().u();
  const double up = data.right().u();
  const double hm = data.left().h_density();
  const double hp = data.right().h_density();
  const double du = um - up;
  const EnergyBudget b0 = initial_budget(data);
  EnergyBudget b;
  b.w_int_outer = b0.w_int_outer - 0.5 * (hp + hm) * du * t;
  b.w_kin_outer = b0.w_kin_outer - rho * du * (um * um + up * up) / 4.0 * t;
  const double mean = 0.5 * (um + up);
  b.w_kin_front = 0.5 * du * rho * mean * mean * t;
  b.w_int_front = 0.5 * du * (rho * du * du / 4.0 + hm + hp) * t;
  return b;
}

}  // namespace dshock::riemann
