#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls the library routine it is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "dshock/core.hpp"
#include "dshock/sticky.hpp"

namespace oracle {

/// Root of the front momentum balance ([rho U] - [rho] u) u = [rho U^2] - [rho U] u
/// inside the characteristic fan (U+, U-), by bisection.
inline double bisect_front_speed(const dshock::RiemannData& d) {
  const auto& l = d.left();
  const auto& r = d.right();
  auto f = [&](double u) {
    const double mass_rate = (l.rho() * l.u() - r.rho() * r.u()) - (l.rho() - r.rho()) * u;
    const double mom_rate = (l.rho() * l.u() * l.u() - r.rho() * r.u() * r.u()) -
                            (l.rho() * l.u() - r.rho() * r.u()) * u;
    return mass_rate * u - mom_rate;
  };
  double lo = r.u();
  double hi = l.u();
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Front internal energy from global energy conservation: initial total
/// energy minus outer energies minus the front's kinetic energy.
inline double front_internal_by_conservation(const dshock::RiemannData& d, double speed, double t) {
  const auto& l = d.left();
  const auto& r = d.right();
  const double L = d.half_length();
  const double len_l = L + (speed - l.u()) * t;
  const double len_r = L + (r.u() - speed) * t;
  const double e0 = (0.5 * l.rho() * l.u() * l.u() + l.h_density() + 0.5 * r.rho() * r.u() * r.u() +
                     r.h_density()) * L;
  const double outer = (0.5 * l.rho() * l.u() * l.u() + l.h_density()) * len_l +
                       (0.5 * r.rho() * r.u() * r.u() + r.h_density()) * len_r;
  const double e_front = l.rho() * L + r.rho() * L - l.rho() * len_l - r.rho() * len_r;
  return e0 - outer - 0.5 * e_front * speed * speed;
}

/// Quadratic-time sticky-particle reference: repeatedly scan all adjacent
/// pairs for the earliest collision and advance everybody to it.
inline std::vector<dshock::sticky::Particle> naive_sticky(std::vector<dshock::sticky::Particle> ps,
                                                          double t_end) {
  double t = 0.0;
  while (true) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t at = 0;
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
      const double closing = ps[i].v - ps[i + 1].v;
      if (closing <= 0) continue;
      const double tc = t + std::max(0.0, ps[i + 1].x - ps[i].x) / closing;
      if (tc < best) {
        best = tc;
        at = i;
      }
    }
    if (!(best <= t_end)) break;
    for (auto& p : ps) p.x += p.v * (best - t);
    t = best;
    auto& a = ps[at];
    const auto& b = ps[at + 1];
    const double m = a.m + b.m;
    const double v = (a.m * a.v + b.m * b.v) / m;
    const double h = a.h + b.h + 0.5 * a.m * a.v * a.v + 0.5 * b.m * b.v * b.v - 0.5 * m * v * v;
    a = {m, (a.m * a.x + b.m * b.x) / m, v, h};
    ps.erase(ps.begin() + static_cast<long>(at) + 1);
  }
  for (auto& p : ps) p.x += p.v * (t_end - t);
  return ps;
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace oracle
