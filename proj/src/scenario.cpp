#include "dshock/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "dshock/audit.hpp"
#include "dshock/format.hpp"
#include "dshock/riemann.hpp"
#include "dshock/rh_ode.hpp"
#include "dshock/sticky.hpp"
#include "dshock/surface_front.hpp"
#include "dshock/svg_plot.hpp"
#include "dshock/weak_verify.hpp"

namespace dshock {

using nlohmann::json;

namespace {

constexpr const char* kKindNames[] = {"riemann", "front_ode", "spherical",
                                      "particles", "verify", "audit"};

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorKind::Parse, msg); }
[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::Validation, msg); }

// Typed access to one JSON object; remembers which keys were read so that
// unknown keys (usually typos) are reported instead of silently ignored.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) parse_fail(where("") + ": expected an object");
  }

  void number(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) parse_fail(where(key) + ": expected a number");
      out = v->get<double>();
    }
  }

  void integer(const char* key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) parse_fail(where(key) + ": expected an integer");
      const double d = v->get<double>();
      if (d != std::floor(d) || std::abs(d) > 2e9) parse_fail(where(key) + ": expected an integer");
      out = static_cast<int>(d);
    }
  }

  void string(const char* key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) parse_fail(where(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }

  std::optional<Reader> object(const char* key) {
    if (const json* v = find(key)) return Reader(*v, where(key));
    return std::nullopt;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) parse_fail(where(it.key()) + ": unknown field");
    }
  }

 private:
  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  std::string where(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "document" : "field '" + path_ + "'";
    return "field '" + (path_.empty() ? key : path_ + "." + key) + "'";
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_state(Reader& r, const char* key, StateSpec& s) {
  if (auto o = r.object(key)) {
    o->number("rho", s.rho);
    o->number("u", s.u);
    o->number("H", s.H);
    o->finish();
  }
}

json state_json(const StateSpec& s) { return {{"rho", s.rho}, {"u", s.u}, {"H", s.H}}; }

// ---------------------------------------------------------------------------
// Output helpers

class Output {
 public:
  Output(const std::string& dir, const std::string& name) : dir_(dir), name_(name) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) invalid("cannot create output directory " + dir_ + ": " + ec.message());
  }

  std::string path(const std::string& suffix) const {
    return (std::filesystem::path(dir_) / (name_ + suffix)).string();
  }

  std::ofstream open(const std::string& suffix) {
    const std::string p = path(suffix);
    std::ofstream out(p);
    if (!out) invalid("cannot write " + p);
    artifacts.push_back(p);
    return out;
  }

  void write_json(const std::string& suffix, const json& j) { open(suffix) << j.dump(2) << '\n'; }

  void plot(const std::string& suffix, LinePlot p) {
    const std::string path_str = path(suffix);
    p.save(path_str);
    artifacts.push_back(path_str);
  }

  std::vector<std::string> artifacts;

 private:
  std::string dir_;
  std::string name_;
};

std::vector<double> sample_times(const Scenario& s) {
  const double step = s.dt * s.stride;
  std::vector<double> ts;
  for (long k = 0;; ++k) {
    const double t = step * static_cast<double>(k);
    if (t >= s.t_end * (1.0 - 1e-12)) break;
    ts.push_back(t);
  }
  ts.push_back(s.t_end);
  return ts;
}

struct FrontRow {
  double t, x, u, e, h;
};

void plot_front(Output& out, const std::string& name, const std::vector<FrontRow>& rows,
                const char* x_label = "x") {
  Series x{x_label, {}, {}}, e{"e", {}, {}}, h{"h", {}, {}};
  for (const auto& r : rows) {
    x.x.push_back(r.t);
    x.y.push_back(r.x);
    e.x.push_back(r.t);
    e.y.push_back(r.e);
    h.x.push_back(r.t);
    h.y.push_back(r.h);
  }
  out.plot("_front_position.svg", {name + ": front position", "t", x_label, {x}});
  out.plot("_e.svg", {name + ": front mass e(t)", "t", "e", {e}});
  out.plot("_h.svg", {name + ": front internal energy h(t)", "t", "h", {h}});
}

void plot_energy(Output& out, const std::string& name,
                 const std::vector<audit::BalanceRecord>& recs) {
  Series a{"W_kin", {}, {}}, b{"+ w_kin", {}, {}}, c{"+ W_int", {}, {}}, d{"total", {}, {}};
  for (const auto& r : recs) {
    for (Series* s : {&a, &b, &c, &d}) s->x.push_back(r.t);
    a.y.push_back(r.W_kin);
    b.y.push_back(r.W_kin + r.w_kin);
    c.y.push_back(r.W_kin + r.w_kin + r.W_int);
    d.y.push_back(r.total_energy());
  }
  out.plot("_energy.svg", {name + ": energy budget (stacked)", "t", "energy", {a, b, c, d}});
}

void write_budget_csv(Output& out, const std::vector<audit::BalanceRecord>& recs) {
  auto os = out.open("_budget.csv");
  os << "t,M,m,P,p,W_kin,w_kin,W_int,w_int,total_energy\n";
  for (const auto& r : recs) {
    write_csv_row(os, {r.t, r.M, r.m, r.P, r.p, r.W_kin, r.w_kin, r.W_int, r.w_int,
                       r.total_energy()});
  }
}

json front_json(double x, double u, double e, double h) {
  return {{"x", x}, {"u_delta", u}, {"e", e}, {"h", h}};
}

// What every kind hands back before the shared balance check.
struct Outcome {
  std::vector<audit::BalanceRecord> records;
  json summary = json::object();
  bool checks_ok = true;
  std::vector<std::string> failed;
};

audit::Tolerances tolerances(const Scenario& s) {
  return {s.conservation_tol, s.momentum_tol, s.monotone_tol};
}

// ---------------------------------------------------------------------------
// Kinds

Outcome run_riemann(const Scenario& s, Output& out) {
  const RiemannData d = s.riemann_data();
  const riemann::RiemannSolution sol = riemann::solve_riemann(d);
  Outcome o;
  std::vector<FrontRow> rows;
  auto front_csv = out.open("_front.csv");
  front_csv << "t,x,u_delta,e,h,deficit_mass,deficit_momentum,deficit_energy\n";
  for (double t : sample_times(s)) {
    const Solution1D snap = sol.at(t);
    o.records.push_back(audit::totals(snap));
    if (snap.front) {
      const auto& f = *snap.front;
      const Deficits r = sol.front_rates();
      write_csv_row(front_csv, {t, f.x, f.u_delta, f.e, f.h, r.mass, r.momentum, r.energy});
      rows.push_back({t, f.x, f.u_delta, f.e, f.h});
    }
  }
  {
    auto prof = out.open("_profile.csv");
    prof << "x,rho,u,H\n";
    const Solution1D snap = sol.at(s.t_end);
    for (const auto& p : snap.pieces) {
      for (int k = 0; k <= 4; ++k) {
        const double x = p.a + (p.b - p.a) * k / 4.0;
        const OuterState st = p.at(std::min(x, std::nextafter(p.b, p.a)));
        write_csv_row(prof, {x, st.rho(), st.u(), st.h_density()});
      }
    }
  }
  write_budget_csv(out, o.records);
  if (!rows.empty()) plot_front(out, s.name, rows);
  plot_energy(out, s.name, o.records);

  o.summary["has_front"] = sol.has_front();
  if (sol.has_front()) {
    const DeltaFront1D f = sol.front_at(s.t_end);
    o.summary["front_speed"] = sol.speed();
    o.summary["validity_window"] = sol.validity_window();
    o.summary["front"] = front_json(f.x, f.u_delta, f.e, f.h);
  }
  const riemann::EnergyBudget b0 = riemann::initial_budget(d);
  const riemann::EnergyBudget b1 = riemann::budget_of(sol.at(s.t_end));
  auto budget = [](const riemann::EnergyBudget& b) {
    return json{{"W_kin", b.w_kin_outer}, {"w_kin", b.w_kin_front}, {"W_int", b.w_int_outer},
                {"w_int", b.w_int_front}, {"total", b.total()}};
  };
  o.summary["energy_initial"] = budget(b0);
  o.summary["energy_final"] = budget(b1);
  return o;
}

struct OdeSetup {
  rh_ode::OuterField1D field;
  DeltaFront1D seed;
  std::function<std::optional<DeltaFront1D>(double)> exact;
};

OdeSetup ode_setup(const Scenario& s) {
  OdeSetup st;
  if (s.field == "riemann") {
    const RiemannData d = s.riemann_data();
    st.field = rh_ode::riemann_field(d);
    const auto sol = std::make_shared<riemann::RiemannSolution>(d);
    st.seed.u_delta = riemann::front_speed(d);
    if (!s.front) st.exact = [sol](double t) { return std::optional(sol->front_at(t)); };
  } else {
    const rh_ode::CompressionField c{s.left.rho,    s.right.rho,     s.left.H,
                                     s.right.H,     s.compression.a, s.compression.b,
                                     s.compression.t0, s.half_length};
    st.field = c.field();
    const RiemannData at0(st.field.traces.left(0, 0), st.field.traces.right(0, 0), 1.0);
    st.seed.u_delta = riemann::front_speed(at0);
    const bool symmetric = c.rho_left == c.rho_right && c.h_left == c.h_right && c.a == c.b;
    if (symmetric && !s.front) {
      st.exact = [c](double t) { return std::optional(c.symmetric_front(t)); };
    }
  }
  if (s.front) st.seed = DeltaFront1D{s.front->x, s.front->u, s.front->e, s.front->h};
  if (!st.exact) st.exact = [](double) { return std::optional<DeltaFront1D>(); };
  return st;
}

rh_ode::FrontTrajectory integrate_ode(const Scenario& s, const OdeSetup& st, double dt) {
  rh_ode::TrajectoryOptions opts;
  opts.tau_entropy = s.entropy_tau;
  return rh_ode::integrate(st.seed, st.field.traces, s.t_end, dt, opts);
}

double front_error(const DeltaFront1D& a, const DeltaFront1D& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.e - b.e), std::abs(a.h - b.h)});
}

Outcome run_front_ode(const Scenario& s, Output& out) {
  const OdeSetup st = ode_setup(s);
  const rh_ode::FrontTrajectory traj = integrate_ode(s, st, s.dt);
  Outcome o;
  rh_ode::FrontTrajectory sampled;
  std::vector<FrontRow> rows;
  double max_err = 0.0;
  bool have_exact = false;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    const auto& f = traj.states[i];
    if (auto ex = st.exact(t)) {
      have_exact = true;
      max_err = std::max(max_err, front_error(f, *ex));
    }
    if (i % static_cast<std::size_t>(s.stride) != 0 && i + 1 != traj.size()) continue;
    sampled.times.push_back(t);
    sampled.states.push_back(f);
    sampled.deficits.push_back(traj.deficits[i]);
    rows.push_back({t, f.x, f.u_delta, f.e, f.h});
    o.records.push_back(audit::totals(st.field, f, t));
  }
  auto csv = out.open("_front.csv");
  sampled.write_csv(csv);
  write_budget_csv(out, o.records);
  plot_front(out, s.name, rows);
  plot_energy(out, s.name, o.records);
  const auto& f = traj.states.back();
  o.summary["field"] = s.field;
  o.summary["steps"] = traj.size() - 1;
  o.summary["front"] = front_json(f.x, f.u_delta, f.e, f.h);
  o.summary["max_error_vs_exact"] = have_exact ? json(max_err) : json(nullptr);
  return o;
}

Outcome run_spherical(const Scenario& s, Output& out) {
  const surface::AccretionField acc{s.sphere.n, s.sphere.rho0, s.sphere.inflow_speed, s.sphere.H0,
                                    s.sphere.outer_radius};
  const surface::RadialField field = acc.field();
  const surface::SphericalFront f0{s.sphere.R0, s.sphere.G0, s.sphere.e0, s.sphere.h0, s.sphere.n};
  surface::SphericalOptions opts;
  opts.tau_entropy = s.entropy_tau;
  const surface::SphericalTrajectory traj =
      surface::integrate_spherical(f0, field.traces, s.t_end, s.dt, opts);

  Outcome o;
  surface::SphericalTrajectory sampled;
  sampled.n = traj.n;
  sampled.termination = traj.termination;
  std::vector<FrontRow> rows;
  double min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    const auto& r = traj.records[i];
    min_margin = std::min(min_margin, r.entropy_margin);
    if (i % static_cast<std::size_t>(s.stride) != 0 && i + 1 != traj.records.size()) continue;
    sampled.records.push_back(r);
    rows.push_back({r.t, r.radius, r.speed, r.e, r.h});
    o.records.push_back(audit::totals(field, r));
  }
  auto csv = out.open("_front.csv");
  sampled.write_csv(csv);
  write_budget_csv(out, o.records);
  plot_front(out, s.name, rows, "R");
  plot_energy(out, s.name, o.records);
  const auto& last = traj.records.back();
  o.summary["collapsed"] = traj.collapsed();
  o.summary["final"] = {{"t", last.t},           {"R", last.radius}, {"G", last.speed},
                        {"e", last.e},           {"h", last.h},      {"m", last.m},
                        {"front_energy", last.front_energy}};
  o.summary["min_entropy_margin"] = min_margin;
  return o;
}

Outcome run_particles(const Scenario& s, Output& out) {
  const RiemannData d = s.riemann_data();
  sticky::ParticleSystem sys = sticky::sample(d, s.N);
  const double m0 = sys.total_mass();
  const double p0 = sys.total_momentum();
  const double e0 = sys.total_energy();
  double mom_scale = 0.0;
  for (const auto& p : sys.particles()) mom_scale += std::abs(p.momentum());

  std::optional<riemann::RiemannSolution> exact;
  if (d.left().u() > d.right().u()) exact.emplace(d);

  Outcome o;
  std::vector<FrontRow> rows;
  auto csv = out.open("_front.csv");
  csv << "t,x,u_delta,e,h,x_exact,u_exact,e_exact,h_exact\n";
  std::optional<sticky::FrontEstimate> last_est;
  for (double t : sample_times(s)) {
    sys.advance(t);
    o.records.push_back(audit::totals(sys));
    if (sys.merge_count() == 0) continue;
    try {
      const sticky::FrontEstimate est = sticky::empirical_front(sys);
      last_est = est;
      rows.push_back({t, est.x, est.u, est.e, est.h});
      if (exact) {
        const DeltaFront1D f = exact->front_at(std::min(t, exact->validity_window()));
        write_csv_row(csv, {t, est.x, est.u, est.e, est.h, f.x, f.u_delta, f.e, f.h});
      } else {
        const double nan = std::nan("");
        write_csv_row(csv, {t, est.x, est.u, est.e, est.h, nan, nan, nan, nan});
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoCluster) throw;
    }
  }
  {
    auto ps = out.open("_particles.csv");
    sys.write_csv(ps);
  }
  write_budget_csv(out, o.records);
  if (!rows.empty()) plot_front(out, s.name, rows);
  plot_energy(out, s.name, o.records);

  const double drift_mass = std::abs(sys.total_mass() - m0) / m0;
  const double drift_mom = std::abs(sys.total_momentum() - p0) / std::max(mom_scale, 1e-300);
  const double drift_energy = std::abs(sys.total_energy() - e0) / std::max(e0, 1e-300);
  o.summary["N"] = s.N;
  o.summary["merges"] = sys.merge_count();
  o.summary["remaining"] = sys.size();
  o.summary["drift"] = {{"mass", drift_mass}, {"momentum", drift_mom}, {"energy", drift_energy}};
  o.summary["min_relative_increment"] = sys.min_relative_increment();
  if (last_est) {
    o.summary["front"] = front_json(last_est->x, last_est->u, last_est->e, last_est->h);
    if (exact && s.t_end <= exact->validity_window()) {
      const DeltaFront1D f = exact->front_at(s.t_end);
      o.summary["front_exact"] = front_json(f.x, f.u_delta, f.e, f.h);
    }
  }
  auto require = [&](bool ok, const char* what) {
    if (!ok) {
      o.checks_ok = false;
      o.failed.push_back(what);
    }
  };
  require(drift_mass <= s.conservation_tol, "particle_mass_drift");
  require(drift_mom <= s.momentum_tol, "particle_momentum_drift");
  require(drift_energy <= s.conservation_tol, "particle_energy_drift");
  require(sys.min_relative_increment() >= -1e-15, "merge_internal_energy_increment");
  return o;
}

Outcome run_verify(const Scenario& s, Output& out) {
  const riemann::RiemannSolution sol = riemann::solve_riemann(s.riemann_data());
  const SolutionHistory hist = sol.history();
  weak::Settings settings;
  settings.pass_threshold = s.weak_tol;
  const weak::Report rep = weak::verify(hist, weak::default_family(hist, s.t_end), settings);
  out.write_json("_weak.json", rep.to_json());
  {
    auto csv = out.open("_weak.csv");
    csv << "x0,t0,rx,rt,mass,momentum,energy\n";
    for (const auto& b : rep.bumps) {
      write_csv_row(csv, {b.phi.x0, b.phi.t0, b.phi.rx, b.phi.rt, b.normalized[0],
                          b.normalized[1], b.normalized[2]});
    }
  }
  LinePlot p{s.name + ": normalised weak residuals", "bump", "log10 residual", {}};
  for (std::size_t k = 0; k < weak::kIdentities.size(); ++k) {
    Series ser{weak::to_string(weak::kIdentities[k]), {}, {}};
    for (std::size_t i = 0; i < rep.bumps.size(); ++i) {
      ser.x.push_back(static_cast<double>(i));
      ser.y.push_back(std::log10(std::max(rep.bumps[i].normalized[k], 1e-300)));
    }
    p.series.push_back(ser);
  }
  out.plot("_weak.svg", p);

  Outcome o;
  o.summary["weak"] = {{"passed", rep.passed},
                       {"bumps", rep.bumps.size()},
                       {"max_normalized",
                        {{"mass", rep.max_normalized[0]},
                         {"momentum", rep.max_normalized[1]},
                         {"energy", rep.max_normalized[2]}}},
                       {"threshold", s.weak_tol}};
  if (!rep.passed) {
    o.checks_ok = false;
    o.failed.push_back("weak_identities");
  }
  return o;
}

Outcome dispatch(const Scenario& s, ScenarioKind kind, Output& out) {
  switch (kind) {
    case ScenarioKind::Riemann: return run_riemann(s, out);
    case ScenarioKind::FrontOde: return run_front_ode(s, out);
    case ScenarioKind::Spherical: return run_spherical(s, out);
    case ScenarioKind::Particles: return run_particles(s, out);
    case ScenarioKind::Verify: return run_verify(s, out);
    case ScenarioKind::Audit: break;
  }
  invalid("audit cannot audit itself");
}

ScenarioKind kind_from(const std::string& name, const char* field) {
  for (std::size_t i = 0; i < std::size(kKindNames); ++i) {
    if (name == kKindNames[i]) return static_cast<ScenarioKind>(i);
  }
  invalid(std::string(field) + " must be one of riemann, front_ode, spherical, particles, verify, audit");
}

Scenario with_overrides(Scenario s, const RunOptions& opts) {
  if (opts.out_dir) s.out_dir = *opts.out_dir;
  if (opts.tol) {
    if (s.kind == ScenarioKind::Verify) {
      s.weak_tol = *opts.tol;
    } else {
      s.conservation_tol = *opts.tol;
    }
  }
  validate(s);
  return s;
}

RunResult failure(const Error& e) {
  RunResult r;
  r.exit_code = exit_code_for(e.kind());
  r.message = std::string(to_string(e.kind())) + ": " + e.what();
  r.summary = {{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
  return r;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

const char* to_string(ScenarioKind k) { return kKindNames[static_cast<int>(k)]; }

RiemannData Scenario::riemann_data() const {
  return RiemannData(OuterState(left.rho, left.u, left.H), OuterState(right.rho, right.u, right.H),
                     half_length);
}

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "malformed JSON at line " << line << ", column " << col << ": " << e.what();
    parse_fail(os.str());
  }

  Scenario s;
  Reader r(j, "");
  std::string kind;
  r.string("kind", kind);
  if (kind.empty()) parse_fail("field 'kind' is required");
  s.kind = kind_from(kind, "kind");
  r.string("name", s.name);
  read_state(r, "left", s.left);
  read_state(r, "right", s.right);
  r.number("half_length", s.half_length);
  if (auto t = r.object("time")) {
    t->number("t_end", s.t_end);
    t->number("dt", s.dt);
    t->integer("stride", s.stride);
    t->finish();
  }
  if (auto n = r.object("numerics")) {
    n->integer("N", s.N);
    n->number("weak_tol", s.weak_tol);
    n->number("conservation_tol", s.conservation_tol);
    n->number("momentum_tol", s.momentum_tol);
    n->number("monotone_tol", s.monotone_tol);
    n->number("entropy_tau", s.entropy_tau);
    n->finish();
  }
  r.string("field", s.field);
  if (auto c = r.object("compression")) {
    c->number("a", s.compression.a);
    c->number("b", s.compression.b);
    c->number("t0", s.compression.t0);
    c->finish();
  }
  if (auto f = r.object("front")) {
    FrontSeed seed;
    f->number("x", seed.x);
    f->number("u", seed.u);
    f->number("e", seed.e);
    f->number("h", seed.h);
    f->finish();
    s.front = seed;
  }
  if (auto sp = r.object("sphere")) {
    sp->integer("n", s.sphere.n);
    sp->number("rho0", s.sphere.rho0);
    sp->number("inflow_speed", s.sphere.inflow_speed);
    sp->number("H0", s.sphere.H0);
    sp->number("outer_radius", s.sphere.outer_radius);
    sp->number("R0", s.sphere.R0);
    sp->number("G0", s.sphere.G0);
    sp->number("e0", s.sphere.e0);
    sp->number("h0", s.sphere.h0);
    sp->finish();
  }
  if (auto a = r.object("audit")) {
    a->string("source", s.audit_source);
    a->finish();
  }
  if (auto o = r.object("output")) {
    o->string("dir", s.out_dir);
    o->finish();
  }
  r.finish();
  validate(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open scenario file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

void validate(const Scenario& s) {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) invalid(std::string(what) + " must be positive");
  };
  if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos) {
    invalid("name must be a nonempty file stem");
  }
  positive(s.t_end, "t_end");
  positive(s.dt, "dt");
  if (s.stride < 1) invalid("stride must be >= 1");
  positive(s.weak_tol, "weak_tol");
  positive(s.conservation_tol, "conservation_tol");
  positive(s.momentum_tol, "momentum_tol");
  positive(s.monotone_tol, "monotone_tol");
  if (!(s.entropy_tau >= 0.0)) invalid("entropy_tau must be nonnegative");

  ScenarioKind kind = s.kind;
  if (kind == ScenarioKind::Audit) {
    kind = kind_from(s.audit_source, "audit.source");
    if (kind == ScenarioKind::Audit || kind == ScenarioKind::Verify) {
      invalid("audit.source must be riemann, front_ode, particles or spherical");
    }
  }

  if (kind == ScenarioKind::Spherical) {
    const SphereSpec& p = s.sphere;
    if (p.n < 1) invalid("sphere.n must be >= 1");
    positive(p.rho0, "sphere.rho0");
    positive(p.inflow_speed, "sphere.inflow_speed");
    if (!(p.H0 >= 0.0)) invalid("internal energy density H must be nonnegative");
    positive(p.R0, "sphere.R0");
    if (!(p.outer_radius > p.R0)) invalid("sphere.outer_radius must exceed R0");
    // A massless front is swept along at the inflow speed at once, which
    // leaves the entropy condition only in the limit.
    if (!(p.e0 > 0.0)) invalid("sphere.e0 must be positive");
    if (!(p.h0 >= 0.0)) invalid("sphere.h0 must be nonnegative");
    if (!(p.G0 > -p.inflow_speed && p.G0 < 0.0)) {
      invalid("entropy condition requires -inflow_speed < G0 < 0");
    }
    if (!(s.t_end * p.inflow_speed < p.outer_radius)) {
      invalid("t_end must end before the outer shell edge reaches the origin");
    }
    return;
  }

  const RiemannData d = s.riemann_data();  // validates rho, H and L
  if (kind == ScenarioKind::Particles && s.N < 2) invalid("N must be >= 2");
  if (kind == ScenarioKind::FrontOde) {
    if (s.field != "riemann" && s.field != "compression") {
      invalid("field must be riemann or compression");
    }
    if (s.field == "compression") {
      positive(s.compression.t0, "compression.t0");
      if (!(s.compression.a > 0.0) || !(s.compression.b > 0.0)) {
        invalid("compression.a and compression.b must be positive");
      }
      if (!(s.half_length > std::max(s.compression.a, s.compression.b))) {
        invalid("half_length must exceed compression.a and compression.b");
      }
    } else if (!(d.left().u() > d.right().u())) {
      invalid("front_ode needs overlapping characteristics (U- > U+)");
    }
    if (s.front && (s.front->e < 0.0 || s.front->h < 0.0)) {
      invalid("front.e and front.h must be nonnegative");
    }
  }
  const bool closed_form = kind == ScenarioKind::Riemann || kind == ScenarioKind::Verify ||
                           (kind == ScenarioKind::FrontOde && s.field == "riemann");
  if (closed_form && d.left().u() > d.right().u() &&
      (d.left().rho() > 0.0 || d.right().rho() > 0.0)) {
    const double window = riemann::solve_riemann(d).validity_window();
    if (s.t_end > window) {
      std::ostringstream os;
      os << "t_end = " << s.t_end << " exceeds the validity window " << window;
      invalid(os.str());
    }
  }
}

json to_json(const Scenario& s) {
  json j = {{"kind", to_string(s.kind)},
            {"name", s.name},
            {"left", state_json(s.left)},
            {"right", state_json(s.right)},
            {"half_length", s.half_length},
            {"time", {{"t_end", s.t_end}, {"dt", s.dt}, {"stride", s.stride}}},
            {"numerics",
             {{"N", s.N},
              {"weak_tol", s.weak_tol},
              {"conservation_tol", s.conservation_tol},
              {"momentum_tol", s.momentum_tol},
              {"monotone_tol", s.monotone_tol},
              {"entropy_tau", s.entropy_tau}}},
            {"field", s.field},
            {"compression", {{"a", s.compression.a}, {"b", s.compression.b}, {"t0", s.compression.t0}}},
            {"sphere",
             {{"n", s.sphere.n},
              {"rho0", s.sphere.rho0},
              {"inflow_speed", s.sphere.inflow_speed},
              {"H0", s.sphere.H0},
              {"outer_radius", s.sphere.outer_radius},
              {"R0", s.sphere.R0},
              {"G0", s.sphere.G0},
              {"e0", s.sphere.e0},
              {"h0", s.sphere.h0}}},
            {"audit", {{"source", s.audit_source}}},
            {"output", {{"dir", s.out_dir}}}};
  if (s.front) {
    j["front"] = {{"x", s.front->x}, {"u", s.front->u}, {"e", s.front->e}, {"h", s.front->h}};
  }
  return j;
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::EntropyViolation:
    case ErrorKind::MassCollapse: return 3;
    case ErrorKind::QuadratureFailure: return 4;
    default: return 2;
  }
}

RunResult run_scenario(const Scenario& scenario, const RunOptions& opts) {
  try {
    const Scenario s = with_overrides(scenario, opts);
    Output out(s.out_dir, s.name);
    const bool auditing = s.kind == ScenarioKind::Audit;
    const ScenarioKind kind = auditing ? kind_from(s.audit_source, "audit.source") : s.kind;
    Outcome o = dispatch(s, kind, out);

    RunResult res;
    json summary = {{"name", s.name}, {"kind", to_string(s.kind)}};
    if (auditing) summary["source"] = s.audit_source;
    summary.update(o.summary);
    if (!o.records.empty()) {
      const audit::BalanceVerdict v = audit::check_balance(o.records, tolerances(s));
      summary["balance"] = audit::to_json(v);
      if (auditing) out.write_json("_audit.json", audit::report_json(o.records, v));
      for (const auto& name : v.violated()) o.failed.push_back(name);
      if (!v.passed()) o.checks_ok = false;
      std::ostringstream table;
      audit::print_table(table, o.records);
      if (auditing) res.report_text = table.str();
    }
    summary["passed"] = o.checks_ok;
    summary["failed_checks"] = o.failed;
    out.write_json("_summary.json", summary);

    res.exit_code = o.checks_ok ? 0 : 5;
    res.artifacts = out.artifacts;
    res.summary = summary;
    std::ostringstream msg;
    msg << s.name << " (" << to_string(s.kind) << "): " << (o.checks_ok ? "PASS" : "FAIL");
    for (const auto& f : o.failed) msg << ' ' << f;
    res.message = msg.str();
    return res;
  } catch (const Error& e) {
    return failure(e);
  }
}

RunResult run_sweep(const Scenario& scenario, const std::string& param,
                    const std::vector<double>& values, const RunOptions& opts) {
  try {
    const Scenario s = with_overrides(scenario, opts);
    if (values.size() < 2) invalid("a sweep needs at least two values");
    std::vector<double> errors;
    if (param == "N" && s.kind == ScenarioKind::Particles) {
      const RiemannData d = s.riemann_data();
      const riemann::RiemannSolution sol = riemann::solve_riemann(d);
      if (!sol.has_front()) invalid("particle sweep needs a front (U- > U+)");
      if (s.t_end > sol.validity_window()) invalid("t_end exceeds the validity window");
      const DeltaFront1D exact = sol.front_at(s.t_end);
      for (double v : values) {
        if (!(v >= 2.0) || v != std::floor(v)) invalid("N values must be integers >= 2");
        const sticky::ParticleSystem sys = sticky::run(sticky::sample(d, static_cast<int>(v)), s.t_end);
        const sticky::FrontEstimate est = sticky::empirical_front(sys);
        errors.push_back(std::max({std::abs(est.x - exact.x), std::abs(est.u - exact.u_delta),
                                   std::abs(est.e - exact.e) / exact.e}));
      }
    } else if (param == "dt" && s.kind == ScenarioKind::FrontOde) {
      const OdeSetup st = ode_setup(s);
      std::optional<DeltaFront1D> ref = st.exact(s.t_end);
      if (!ref) {
        const double finest = *std::min_element(values.begin(), values.end());
        ref = integrate_ode(s, st, finest / 8.0).states.back();
      }
      for (double v : values) {
        if (!(v > 0.0)) invalid("dt values must be positive");
        errors.push_back(front_error(integrate_ode(s, st, v).states.back(), *ref));
      }
    } else {
      invalid("sweep supports --param N for particles and --param dt for front_ode");
    }

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (errors[i] > 0.0) {
        lx.push_back(std::log(values[i]));
        ly.push_back(std::log(errors[i]));
      }
    }
    json order = nullptr;
    if (lx.size() >= 2) {
      const double slope = fit_slope(lx, ly);
      order = param == "N" ? -slope : slope;
    }

    Output out(s.out_dir, s.name);
    {
      auto csv = out.open("_sweep.csv");
      csv << param << ",error\n";
      for (std::size_t i = 0; i < values.size(); ++i) write_csv_row(csv, {values[i], errors[i]});
    }
    Series ser{"error", {}, {}};
    for (std::size_t i = 0; i < lx.size(); ++i) {
      ser.x.push_back(lx[i] / std::log(10.0));
      ser.y.push_back(ly[i] / std::log(10.0));
    }
    out.plot("_sweep.svg", {s.name + ": convergence", "log10 " + param, "log10 error", {ser}});
    json summary = {{"name", s.name},
                    {"kind", to_string(s.kind)},
                    {"param", param},
                    {"values", values},
                    {"errors", errors},
                    {"convergence_order", order}};
    out.write_json("_sweep.json", summary);

    RunResult res;
    res.summary = summary;
    res.artifacts = out.artifacts;
    std::ostringstream msg;
    msg << s.name << " sweep over " << param << ": order ";
    if (order.is_null()) {
      msg << "undetermined";
    } else {
      msg << order.get<double>();
    }
    res.message = msg.str();
    return res;
  } catch (const Error& e) {
    return failure(e);
  }
}

}  // namespace dshock
