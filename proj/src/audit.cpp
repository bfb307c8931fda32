#include "dshock/audit.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace dshock::audit {
namespace {

struct Moments {
  double mass = 0.0;
  double momentum = 0.0;
  double momentum_abs = 0.0;
  double kinetic = 0.0;
  double internal = 0.0;
};

// Integrals over [a, b] of rho, rho U, rho|U|, rho U^2/2 and H for a state
// given pointwise, weighted by `weight(x)` (r^{n-1} in radial problems).
template <class StateAt, class Weight>
Moments integrate_region(double a, double b, StateAt state_at, Weight weight,
                         const quad::Options& q) {
  Moments out;
  if (!(b > a)) return out;
  auto run = [&](auto g) { return quad::integrate(
      [&](double x) { return g(state_at(x)) * weight(x); }, a, b, q).value; };
  out.mass = run([](const OuterState& s) { return s.rho(); });
  out.momentum = run([](const OuterState& s) { return s.momentum(); });
  out.momentum_abs = run([](const OuterState& s) { return std::abs(s.momentum()); });
  out.kinetic = run([](const OuterState& s) { return s.kinetic_density(); });
  out.internal = run([](const OuterState& s) { return s.h_density(); });
  return out;
}

void add(BalanceRecord& r, const Moments& m) {
  r.M += m.mass;
  r.P += m.momentum;
  r.momentum_magnitude += m.momentum_abs;
  r.W_kin += m.kinetic;
  r.W_int += m.internal;
}

void add_front(BalanceRecord& r, const DeltaFront1D& f) {
  r.m = f.e;
  r.p = f.momentum();
  r.w_kin = f.kinetic();
  r.w_int = f.h;
  r.momentum_magnitude += std::abs(f.momentum());
}

}  // namespace

BalanceRecord totals(const Solution1D& snapshot, const quad::Options& q) {
  BalanceRecord r;
  r.t = snapshot.t;
  auto unit = [](double) { return 1.0; };
  for (const auto& piece : snapshot.pieces) {
    if (piece.vacuum_fan) continue;  // rho = H = 0
    add(r, integrate_region(piece.a, piece.b, [&](double x) { return piece.at(x); }, unit, q));
  }
  if (snapshot.front) add_front(r, *snapshot.front);
  return r;
}

BalanceRecord totals(const rh_ode::OuterField1D& field, const DeltaFront1D& front, double t,
                     const quad::Options& q) {
  BalanceRecord r;
  r.t = t;
  auto unit = [](double) { return 1.0; };
  add(r, integrate_region(field.left_edge(t), front.x,
                          [&](double x) { return field.traces.left(x, t); }, unit, q));
  add(r, integrate_region(front.x, field.right_edge(t),
                          [&](double x) { return field.traces.right(x, t); }, unit, q));
  add_front(r, front);
  return r;
}

BalanceRecord totals(const surface::RadialField& field, const surface::SphericalRecord& rec,
                     const quad::Options& q) {
  BalanceRecord r;
  r.t = rec.t;
  const double omega = surface::unit_sphere_area(field.n);
  const int n = field.n;
  auto weight = [omega, n](double x) { return omega * std::pow(x, n - 1); };
  const double t = rec.t;
  add(r, integrate_region(0.0, rec.radius, [&](double x) { return field.traces.inner(x, t); },
                          weight, q));
  add(r, integrate_region(rec.radius, field.outer_edge(t),
                          [&](double x) { return field.traces.outer(x, t); }, weight, q));
  r.m = rec.m;
  r.p = rec.p_r;
  r.w_kin = 0.5 * rec.m * rec.speed * rec.speed;
  r.w_int = rec.front_energy - r.w_kin;
  r.momentum_magnitude += std::abs(rec.p_r);
  return r;
}

BalanceRecord totals(const sticky::ParticleSystem& system) {
  BalanceRecord r;
  r.t = system.time();
  const auto ps = system.particles();
  if (ps.empty()) return r;
  const double threshold =
      2.0 * system.initial_mass() / static_cast<double>(system.initial_count());
  auto heaviest = std::max_element(ps.begin(), ps.end(),
                                   [](const auto& a, const auto& b) { return a.m < b.m; });
  const bool has_front = heaviest->m >= threshold * (1.0 - 1e-12);
  for (auto it = ps.begin(); it != ps.end(); ++it) {
    r.momentum_magnitude += std::abs(it->momentum());
    if (has_front && it == heaviest) {
      r.m = it->m;
      r.p = it->momentum();
      r.w_kin = it->kinetic();
      r.w_int = it->h;
      continue;
    }
    r.M += it->m;
    r.P += it->momentum();
    r.W_kin += it->kinetic();
    r.W_int += it->h;
  }
  return r;
}

bool BalanceVerdict::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const RelationCheck& BalanceVerdict::get(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw Error(ErrorKind::Validation, "unknown balance relation: " + name);
}

std::vector<std::string> BalanceVerdict::violated() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name);
  }
  return out;
}

BalanceVerdict check_balance(std::span<const BalanceRecord> records, const Tolerances& tol) {
  if (records.size() < 2) throw Error(ErrorKind::Validation, "check_balance needs >= 2 samples");
  BalanceVerdict v;
  const BalanceRecord& r0 = records.front();

  double mass_scale = 0.0;
  double mom_scale = 0.0;
  double energy_scale = 0.0;
  for (const auto& r : records) {
    mass_scale = std::max(mass_scale, std::abs(r.M) + std::abs(r.m));
    mom_scale = std::max(mom_scale, r.momentum_magnitude);
    energy_scale = std::max(energy_scale, std::abs(r.W_kin) + std::abs(r.w_kin) +
                                              std::abs(r.W_int) + std::abs(r.w_int));
  }

  auto constancy = [&](const std::string& name, auto total, double scale, double rel) {
    RelationCheck c;
    c.name = name;
    double worst = 0.0;
    for (const auto& r : records) {
      const double d = std::abs(total(r) - total(r0));
      if (d > worst) {
        worst = d;
        c.worst_time = r.t;
      }
    }
    c.worst_value = scale > 0.0 ? worst / scale : worst;
    c.margin = rel * scale - worst;
    c.passed = c.margin >= 0.0;
    v.checks.push_back(c);
  };
  constancy("mass_total_constant", [](const BalanceRecord& r) { return r.total_mass(); },
            mass_scale, tol.conservation);
  constancy("momentum_total_constant", [](const BalanceRecord& r) { return r.total_momentum(); },
            mom_scale, tol.momentum);
  constancy("energy_total_constant", [](const BalanceRecord& r) { return r.total_energy(); },
            energy_scale, tol.conservation);

  const double span = std::max(records.back().t - records.front().t,
                               std::numeric_limits<double>::min());
  // Derivative of a series at sample i: central inside, one-sided at the ends.
  auto derivative = [&](auto f, std::size_t i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == records.size() ? i : i + 1;
    return (f(records[hi]) - f(records[lo])) / (records[hi].t - records[lo].t);
  };
  // sign = +1 for ">= 0", -1 for "<= 0", 0 for "== 0".
  auto rate = [&](const std::string& name, auto f, int sign, double scale) {
    RelationCheck c;
    c.name = name;
    const double slack = tol.monotone * scale / span;
    c.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < records.size(); ++i) {
      const double d = derivative(f, i);
      const double m = sign == 0 ? slack - std::abs(d) : slack + sign * d;
      if (m < c.margin) {
        c.margin = m;
        c.worst_value = d;
        c.worst_time = records[i].t;
      }
    }
    c.passed = c.margin >= 0.0;
    v.checks.push_back(c);
  };
  rate("front_mass_nondecreasing", [](const BalanceRecord& r) { return r.m; }, +1, mass_scale);
  rate("volume_kinetic_nonincreasing", [](const BalanceRecord& r) { return r.W_kin; }, -1,
       energy_scale);
  rate("volume_internal_nonincreasing", [](const BalanceRecord& r) { return r.W_int; }, -1,
       energy_scale);
  rate("front_energy_nondecreasing", [](const BalanceRecord& r) { return r.w_kin + r.w_int; },
       +1, energy_scale);
  rate("total_internal_nondecreasing", [](const BalanceRecord& r) { return r.W_int + r.w_int; },
       +1, energy_scale);
  rate("kinetic_to_internal_transfer", [](const BalanceRecord& r) { return r.total_energy(); }, 0,
       energy_scale);
  return v;
}

nlohmann::json to_json(const BalanceRecord& r) {
  return {{"t", r.t},         {"M", r.M},         {"m", r.m},         {"P", r.P},
          {"p", r.p},         {"W_kin", r.W_kin}, {"w_kin", r.w_kin}, {"W_int", r.W_int},
          {"w_int", r.w_int}, {"total_mass", r.total_mass()},
          {"total_momentum", r.total_momentum()}, {"total_energy", r.total_energy()}};
}

nlohmann::json to_json(const BalanceVerdict& v) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : v.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"margin", c.margin},
                      {"worst_value", c.worst_value},
                      {"worst_time", c.worst_time}});
  }
  return {{"passed", v.passed()}, {"checks", checks}};
}

nlohmann::json report_json(std::span<const BalanceRecord> records, const BalanceVerdict& v) {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records) recs.push_back(to_json(r));
  return {{"records", recs}, {"verdict", to_json(v)}};
}

void print_table(std::ostream& os, std::span<const BalanceRecord> records) {
  const auto flags = os.flags();
  os << std::setw(10) << "t" << std::setw(14) << "M" << std::setw(14) << "m" << std::setw(14)
     << "P" << std::setw(14) << "p" << std::setw(14) << "W_kin" << std::setw(14) << "w_kin"
     << std::setw(14) << "W_int" << std::setw(14) << "w_int" << std::setw(16) << "total E"
     << '\n';
  os << std::setprecision(8);
  for (const auto& r : records) {
    os << std::setw(10) << r.t << std::setw(14) << r.M << std::setw(14) << r.m << std::setw(14)
       << r.P << std::setw(14) << r.p << std::setw(14) << r.W_kin << std::setw(14) << r.w_kin
       << std::setw(14) << r.W_int << std::setw(14) << r.w_int << std::setw(16)
       << r.total_energy() << '\n';
  }
  os.flags(flags);
}

double volume_transport_gap(const rh_ode::OuterField1D& field,
                            const rh_ode::FrontTrajectory& trajectory, double t, double delta,
                            const quad::Options& q) {
  auto outer_mass = [&](double s) { return totals(field, trajectory.at(s), s, q).M; };
  const double fd = (outer_mass(t + delta) - outer_mass(t - delta)) / (2.0 * delta);

  const DeltaFront1D f = trajectory.at(t);
  const double a = field.left_edge(t);
  const double b = field.right_edge(t);
  const double a_dot = (field.left_edge(t + delta) - field.left_edge(t - delta)) / (2.0 * delta);
  const double b_dot = (field.right_edge(t + delta) - field.right_edge(t - delta)) / (2.0 * delta);
  const OuterState la = field.traces.left(a, t);
  const OuterState lf = field.traces.left(f.x, t);
  const OuterState rf = field.traces.right(f.x, t);
  const OuterState rb = field.traces.right(b, t);
  // Left region [a, x]: interior term -(rho U)|_a^x from the continuity equation.
  const double left = lf.rho() * (f.u_delta - lf.u()) - la.rho() * (a_dot - la.u());
  const double right = rb.rho() * (b_dot - rb.u()) - rf.rho() * (f.u_delta - rf.u());
  const double flux = left + right;
  const double scale = std::max({std::abs(fd), std::abs(flux), 1e-300});
  return std::abs(fd - flux) / scale;
}

}  // namespace dshock::audit
