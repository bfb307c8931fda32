#include "dshock/surface_front.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dshock/format.hpp"

namespace dshock::surface {

double unit_sphere_area(int n) {
  if (n < 1) throw Error(ErrorKind::Validation, "dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double mean_curvature(double radius, int n) {
  if (!(radius > 0.0)) throw Error(ErrorKind::Validation, "radius must be positive");
  return -0.5 * (n - 1) / radius;
}

double tangential_divergence(double a, double speed, double curvature) {
  return -2.0 * curvature * speed * a;
}

double SphericalFront::area() const {
  return unit_sphere_area(n) * std::pow(radius, n - 1);
}

RadialField AccretionField::field() const {
  const AccretionField p = *this;
  RadialField f;
  f.n = n;
  f.traces.inner = [](double, double) { return OuterState::vacuum(); };
  f.traces.outer = [p](double r, double t) {
    const double c = std::pow((r + p.inflow_speed * t) / r, p.n - 1);
    return OuterState(p.rho0 * c, -p.inflow_speed, p.h0 * c);
  };
  f.outer_edge = [p](double t) { return p.outer_radius - p.inflow_speed * t; };
  return f;
}

SphericalRates spherical_rhs(const SphericalFront& front, const RadialTraces& traces, double t,
                             double tau_entropy) {
  if (front.radius <= kCollapseRadius) {
    std::ostringstream os;
    os << "front radius " << front.radius << " reached the collapse radius at t = " << t;
    throw Error(ErrorKind::RadiusCollapse, os.str());
  }
  const OuterState in = traces.inner(front.radius, t);
  const OuterState out = traces.outer(front.radius, t);
  if (!entropy_ok_tol(in, out, front.speed, 1.0, tau_entropy)) {
    std::ostringstream os;
    os << "radial entropy condition fails at t = " << t << ": u_in = " << in.u()
       << ", G = " << front.speed << ", u_out = " << out.u();
    throw Error(ErrorKind::EntropyViolation, os.str());
  }
  const Deficits d = rh_deficits(in, out, front.speed);
  const double K = mean_curvature(front.radius, front.n);
  const double G = front.speed;
  const double eG = front.e * G;
  const double energy = 0.5 * front.e * G * G + front.h;
  SphericalRates r;
  r.d_radius = G;
  r.d_e = d.mass - tangential_divergence(front.e, G, K);
  r.d_eG = d.momentum - tangential_divergence(eG, G, K);
  r.d_energy = d.energy - tangential_divergence(energy, G, K);
  return r;
}

namespace {

// (R, m, p_r, front energy), all surface integrals over the sphere.
using State = std::array<double, 4>;

struct Model {
  const RadialTraces& traces;
  int n;
  double omega;
  double g_fallback;

  double speed(const State& y) const { return y[1] > 1e-300 ? y[2] / y[1] : g_fallback; }

  State derivative(const State& y, double t) const {
    const double R = y[0];
    const double G = speed(y);
    const double area = omega * std::pow(std::max(R, 0.0), n - 1);
    const Deficits d =
        rh_deficits(traces.inner(R, t), traces.outer(R, t), G);
    return {G, area * d.mass, area * d.momentum, area * d.energy};
  }

  State rk4(const State& y, double t, double h) const {
    auto axpy = [](const State& a, double s, const State& k) {
      return State{a[0] + s * k[0], a[1] + s * k[1], a[2] + s * k[2], a[3] + s * k[3]};
    };
    const State k1 = derivative(y, t);
    const State k2 = derivative(axpy(y, 0.5 * h, k1), t + 0.5 * h);
    const State k3 = derivative(axpy(y, 0.5 * h, k2), t + 0.5 * h);
    const State k4 = derivative(axpy(y, h, k3), t + h);
    State out;
    for (int i = 0; i < 4; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return out;
  }

  SphericalRecord record(const State& y, double t) const {
    SphericalRecord rec;
    rec.t = t;
    rec.radius = y[0];
    rec.speed = speed(y);
    rec.m = y[1];
    rec.p_r = y[2];
    rec.front_energy = y[3];
    const double area = omega * std::pow(y[0], n - 1);
    rec.e = y[1] / area;
    rec.h = (y[3] - 0.5 * y[1] * rec.speed * rec.speed) / area;
    const OuterState in = traces.inner(y[0], t);
    const OuterState out = traces.outer(y[0], t);
    rec.entropy_margin = entropy_margin(in, out, rec.speed);
    return rec;
  }
};

void check_entropy(const Model& model, const SphericalRecord& rec, double tau) {
  const OuterState in = model.traces.inner(rec.radius, rec.t);
  const OuterState out = model.traces.outer(rec.radius, rec.t);
  if (!entropy_ok_tol(in, out, rec.speed, 1.0, tau)) {
    std::ostringstream os;
    os << "radial entropy condition lost at t = " << rec.t << " (margin " << rec.entropy_margin
       << ")";
    throw Error(ErrorKind::EntropyViolation, os.str());
  }
}

}  // namespace

SphericalTrajectory integrate_spherical(const SphericalFront& front0, const RadialTraces& traces,
                                        double t_end, double dt, const SphericalOptions& opts) {
  if (!(dt > 0.0)) throw Error(ErrorKind::Validation, "dt must be positive");
  if (!(front0.radius > opts.collapse_radius)) {
    throw Error(ErrorKind::Validation, "initial radius must exceed the collapse radius");
  }
  if (front0.e < 0.0 || front0.h < 0.0) {
    throw Error(ErrorKind::Validation, "surface densities must be nonnegative");
  }
  // Validates the entropy condition at t = 0.
  const SphericalRates r0 = spherical_rhs(front0, traces, 0.0, opts.tau_entropy);
  if (!(front0.e > 0.0) && !(r0.d_e > 0.0)) {
    throw Error(ErrorKind::Validation, "front needs e > 0 or a positive mass deficit at t = 0");
  }

  const Model model{traces, front0.n, unit_sphere_area(front0.n), front0.speed};
  SphericalTrajectory traj;
  traj.n = front0.n;
  State y{front0.radius, front0.mass(), front0.radial_momentum(), front0.energy()};
  traj.records.push_back(model.record(y, 0.0));

  const auto steps = static_cast<long>(std::max(1.0, std::ceil(t_end / dt - 1e-9)));
  const double h = t_end / static_cast<double>(steps);
  for (long i = 0; i < steps; ++i) {
    const double t = h * static_cast<double>(i);
    const State y1 = model.rk4(y, t, h);
    if (!(y1[0] > opts.collapse_radius)) {
      // Land on the collapse radius with steps sized by the current speed;
      // R is nearly linear over one step, so this converges in a few passes.
      double tc = t;
      for (int pass = 0; pass < 64 && y[0] > opts.collapse_radius * (1.0 + 1e-9); ++pass) {
        const double G = model.speed(y);
        if (!(G < 0.0)) break;
        double step = (y[0] - opts.collapse_radius) / -G;
        State y2 = model.rk4(y, tc, step);
        while (!(y2[0] > 0.0) && step > 0.0) {
          step *= 0.5;
          y2 = model.rk4(y, tc, step);
        }
        y = y2;
        tc += step;
        auto rec = model.record(y, tc);
        check_entropy(model, rec, opts.tau_entropy);
        traj.records.push_back(rec);
      }
      traj.termination = Termination::Collapsed;
      return traj;
    }
    y = y1;
    const double t1 = (i + 1 == steps) ? t_end : h * static_cast<double>(i + 1);
    auto rec = model.record(y, t1);
    check_entropy(model, rec, opts.tau_entropy);
    traj.records.push_back(rec);
  }
  return traj;
}

SphericalFront SphericalTrajectory::front(std::size_t i) const {
  const auto& r = records.at(i);
  return SphericalFront{r.radius, r.speed, r.e, r.h, n};
}

void SphericalTrajectory::write_csv(std::ostream& os) const {
  os << "t,R,G,e,h,m,p_r,front_energy\n";
  for (const auto& r : records) {
    write_csv_row(os, {r.t, r.radius, r.speed, r.e, r.h, r.m, r.p_r, r.front_energy});
  }
}

}  // namespace dshock::surface
