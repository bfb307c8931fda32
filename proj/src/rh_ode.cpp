#include "dshock/rh_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <sstream>

#include "dshock/format.hpp"

namespace dshock::rh_ode {

OuterField1D riemann_field(const RiemannData& data) {
  const OuterState l = data.left();
  const OuterState r = data.right();
  const double L = data.half_length();
  OuterField1D f;
  f.traces.left = [l](double, double) { return l; };
  f.traces.right = [r](double, double) { return r; };
  f.left_edge = [L, u = l.u()](double t) { return -L + u * t; };
  f.right_edge = [L, u = r.u()](double t) { return L + u * t; };
  return f;
}

OuterField1D CompressionField::field() const {
  const CompressionField p = *this;
  OuterField1D f;
  f.traces.left = [p](double x, double t) {
    const double s = t + p.t0;
    return OuterState(p.rho_left * p.t0 / s, (x + p.a) / s, p.h_left * p.t0 / s);
  };
  f.traces.right = [p](double x, double t) {
    const double s = t + p.t0;
    return OuterState(p.rho_right * p.t0 / s, (x - p.b) / s, p.h_right * p.t0 / s);
  };
  // Characteristics of U = (x - c)/(t + t0) are straight lines through x = c
  // at t = -t0.
  f.left_edge = [p](double t) { return -p.a + (-p.half_length + p.a) * (t + p.t0) / p.t0; };
  f.right_edge = [p](double t) { return p.b + (p.half_length - p.b) * (t + p.t0) / p.t0; };
  return f;
}

DeltaFront1D CompressionField::symmetric_front(double t) const {
  const double s = t + t0;
  DeltaFront1D f;
  f.e = 2.0 * rho_left * a * t / s;
  f.h = rho_left * t0 * a * a * a * (1.0 / (3.0 * t0 * t0 * t0) - 1.0 / (3.0 * s * s * s)) +
        2.0 * h_left * t0 * a * (1.0 / t0 - 1.0 / s);
  return f;
}

Deficits rh_rhs(const DeltaFront1D& front, const OuterTraces& traces, double t,
                double tau_entropy) {
  const OuterState l = traces.left(front.x, t);
  const OuterState r = traces.right(front.x, t);
  if (!entropy_ok_tol(l, r, front.u_delta, 1.0, tau_entropy)) {
    std::ostringstream os;
    os << "entropy condition U+ < U_delta < U- fails at t = " << t << ", x = " << front.x
       << ": U- = " << l.u() << ", U_delta = " << front.u_delta << ", U+ = " << r.u();
    throw Error(ErrorKind::EntropyViolation, os.str());
  }
  return rh_deficits(l, r, front.u_delta);
}

namespace {

// Conserved front variables (x, e, e u, e u^2/2 + h).
using State = std::array<double, 4>;

State to_state(const DeltaFront1D& f) { return {f.x, f.e, f.momentum(), f.energy()}; }

struct Recovery {
  double u_fallback;
  double mass_floor;
};

DeltaFront1D to_front(const State& y, const Recovery& rec) {
  DeltaFront1D f;
  f.x = y[0];
  f.e = y[1];
  if (y[1] > rec.mass_floor) {
    f.u_delta = y[2] / y[1];
    f.h = y[3] - 0.5 * y[2] * f.u_delta;
  } else {
    f.u_delta = rec.u_fallback;
    f.h = y[3] - 0.5 * y[1] * f.u_delta * f.u_delta;
  }
  return f;
}

State derivative(const State& y, double t, const OuterTraces& traces, const Recovery& rec) {
  const DeltaFront1D f = to_front(y, rec);
  const OuterState l = traces.left(f.x, t);
  const OuterState r = traces.right(f.x, t);
  const Deficits d = rh_deficits(l, r, f.u_delta);
  return {f.u_delta, d.mass, d.momentum, d.energy};
}

State axpy(const State& y, double h, const State& k) {
  return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
}

State rk4(const State& y, double t, double h, const OuterTraces& traces, const Recovery& rec) {
  const State k1 = derivative(y, t, traces, rec);
  const State k2 = derivative(axpy(y, 0.5 * h, k1), t + 0.5 * h, traces, rec);
  const State k3 = derivative(axpy(y, 0.5 * h, k2), t + 0.5 * h, traces, rec);
  const State k4 = derivative(axpy(y, h, k3), t + h, traces, rec);
  State out;
  for (int i = 0; i < 4; ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

class Stepper {
 public:
  Stepper(const OuterTraces& traces, const TrajectoryOptions& opts, double u0)
      : traces_(traces), opts_(opts), rec_{u0, opts.mass_floor} {}

  State advance(const State& y, double t, double h, int depth) {
    const State y1 = rk4(y, t, h, traces_, rec_);
    const DeltaFront1D f = to_front(y1, rec_);
    const OuterState l = traces_.left(f.x, t + h);
    const OuterState r = traces_.right(f.x, t + h);
    const double scale = entropy_scale(l, r);
    const double margin = entropy_margin(l, r, f.u_delta);
    if (margin < 10.0 * opts_.tau_entropy * scale && depth < opts_.max_halvings) {
      const State mid = advance(y, t, 0.5 * h, depth + 1);
      return advance(mid, t + 0.5 * h, 0.5 * h, depth + 1);
    }
    if (margin < -opts_.tau_entropy * scale) {
      std::ostringstream os;
      os << "entropy condition lost at t = " << t + h << " (margin " << margin << ")";
      throw Error(ErrorKind::EntropyViolation, os.str());
    }
    return y1;
  }

  void note_mass(double e, double t) {
    if (e > opts_.mass_floor) {
      had_mass_ = true;
    } else if (had_mass_) {
      std::ostringstream os;
      os << "front mass fell to " << e << " at t = " << t;
      throw Error(ErrorKind::MassCollapse, os.str());
    }
  }

  const Recovery& recovery() const { return rec_; }

 private:
  const OuterTraces& traces_;
  TrajectoryOptions opts_;
  Recovery rec_;
  bool had_mass_ = false;
};

}  // namespace

FrontTrajectory integrate(const DeltaFront1D& front0, const OuterTraces& traces, double t_end,
                          double dt, const TrajectoryOptions& opts) {
  if (!(dt > 0.0)) throw Error(ErrorKind::Validation, "dt must be positive");
  if (!(t_end >= 0.0)) throw Error(ErrorKind::Validation, "t_end must be nonnegative");

  FrontTrajectory traj;
  const Deficits d0 = rh_rhs(front0, traces, 0.0, opts.tau_entropy);
  if (!(front0.e > 0.0) && !(d0.mass > 0.0)) {
    throw Error(ErrorKind::Validation,
                "front needs e > 0 or a positive mass deficit at t = 0");
  }

  const auto steps = static_cast<long>(std::max(1.0, std::ceil(t_end / dt - 1e-9)));
  const double h = t_end / static_cast<double>(steps);
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.deficits.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(front0);
  traj.deficits.push_back(d0);

  Stepper stepper(traces, opts, front0.u_delta);
  stepper.note_mass(front0.e, 0.0);
  State y = to_state(front0);
  for (long i = 0; i < steps; ++i) {
    const double t = h * static_cast<double>(i);
    y = stepper.advance(y, t, h, 0);
    const double t1 = (i + 1 == steps) ? t_end : h * static_cast<double>(i + 1);
    stepper.note_mass(y[1], t1);
    const DeltaFront1D f = to_front(y, stepper.recovery());
    traj.times.push_back(t1);
    traj.states.push_back(f);
    traj.deficits.push_back(rh_rhs(f, traces, t1, opts.tau_entropy));
  }
  return traj;
}

DeltaFront1D FrontTrajectory::at(double t) const {
  if (times.empty()) throw Error(ErrorKind::OutOfRange, "empty trajectory");
  if (t < times.front() || t > times.back()) {
    throw Error(ErrorKind::OutOfRange, "time outside the trajectory");
  }
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t i = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
  if (i + 1 >= times.size()) return states.back();
  if (t == times[i]) return states[i];

  const double t0 = times[i];
  const double t1 = times[i + 1];
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);

  const auto& f0 = states[i];
  const auto& f1 = states[i + 1];
  const auto& d0 = deficits[i];
  const auto& d1 = deficits[i + 1];
  const State y0 = to_state(f0);
  const State y1 = to_state(f1);
  const State k0{f0.u_delta, d0.mass, d0.momentum, d0.energy};
  const State k1{f1.u_delta, d1.mass, d1.momentum, d1.energy};
  State y;
  for (int j = 0; j < 4; ++j) {
    y[j] = h00 * y0[j] + h10 * h * k0[j] + h01 * y1[j] + h11 * h * k1[j];
  }
  return to_front(y, Recovery{f0.u_delta, 1e-300});
}

void FrontTrajectory::write_csv(std::ostream& os) const {
  os << "t,x,u_delta,e,h,deficit_mass,deficit_momentum,deficit_energy\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto& f = states[i];
    const auto& d = deficits[i];
    write_csv_row(os, {times[i], f.x, f.u_delta, f.e, f.h, d.mass, d.momentum, d.energy});
  }
}

}  // namespace dshock::rh_ode
