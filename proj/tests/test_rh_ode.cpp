#include <cmath>
#include <sstream>

#include "doctest.h"
#include "dshock/rh_ode.hpp"
#include "dshock/riemann.hpp"
#include "oracles.hpp"

using namespace dshock;
using namespace dshock::rh_ode;

namespace {

DeltaFront1D seed(double u) {
  DeltaFront1D f;
  f.u_delta = u;
  return f;
}

}  // namespace

TEST_CASE("RK4 reproduces the constant-state Riemann front") {
  for (const RiemannData& d :
       {RiemannData(OuterState(1, 1, 1), OuterState(1, -1, 1), 10.0),
        RiemannData(OuterState(4, 1, 0), OuterState(1, 0, 0), 10.0),
        RiemannData(OuterState(0.5, 2.0, 0.3), OuterState(2.5, -0.4, 1.1), 10.0)}) {
    const auto exact = riemann::solve_riemann(d);
    const FrontTrajectory traj = integrate(seed(exact.speed()), riemann_field(d).traces, 1.0, 1e-3);
    const DeltaFront1D f = traj.states.back();
    const DeltaFront1D g = exact.front_at(1.0);
    CHECK(std::abs(f.x - g.x) <= 1e-12);
    CHECK(std::abs(f.e - g.e) <= 1e-12);
    CHECK(std::abs(f.u_delta - g.u_delta) <= 1e-12);
    CHECK(std::abs(f.h - g.h) <= 1e-12);
  }
}

TEST_CASE("symmetric compression closed form matches a Simpson integral of the deficits") {
  const CompressionField c{1.3, 1.3, 0.7, 0.7, 2.0, 2.0, 1.5, 10.0};
  const double rho0 = 1.3, h0 = 0.7, a = 2.0, t0 = 1.5;
  auto mass_rate = [&](double t) {
    const double s = t + t0;
    return 2.0 * rho0 * t0 / s * a / s;
  };
  auto energy_rate = [&](double t) {
    const double s = t + t0;
    const double rho = rho0 * t0 / s, U = a / s;
    return 2.0 * (0.5 * rho * U * U + h0 * t0 / s) * U;
  };
  for (double t : {0.25, 1.0, 3.0}) {
    const DeltaFront1D f = c.symmetric_front(t);
    CHECK(f.e == doctest::Approx(oracle::simpson(mass_rate, 0, t, 2000)).epsilon(1e-12));
    CHECK(f.h == doctest::Approx(oracle::simpson(energy_rate, 0, t, 2000)).epsilon(1e-12));
  }
}

TEST_CASE("RK4 on the compression field converges at fourth order") {
  const CompressionField c{1.0, 1.0, 0.5, 0.5, 1.0, 1.0, 0.5, 10.0};
  const auto traces = c.field().traces;
  double prev = 0.0;
  for (double dt : {0.1, 0.05, 0.025}) {
    const FrontTrajectory tr = integrate(seed(0.0), traces, 1.0, dt);
    const DeltaFront1D ex = c.symmetric_front(1.0);
    const double err = std::max(std::abs(tr.states.back().e - ex.e), std::abs(tr.states.back().h - ex.h));
    if (prev > 0.0) CHECK(prev / err > 12.0);
    prev = err;
  }
  const FrontTrajectory fine = integrate(seed(0.0), traces, 1.0, 1e-3);
  CHECK(std::abs(fine.states.back().e - c.symmetric_front(1.0).e) <= 1e-9);
  CHECK(std::abs(fine.states.back().h - c.symmetric_front(1.0).h) <= 1e-9);
}

TEST_CASE("asymmetric compression keeps the conserved totals") {
  const CompressionField c{3.0, 1.0, 0.2, 0.6, 1.0, 2.0, 1.0, 10.0};
  const OuterField1D f = c.field();
  // Admissible start: the weighted-mean speed of the two traces at x = 0.
  const RiemannData at0(f.traces.left(0, 0), f.traces.right(0, 0), 1.0);
  const FrontTrajectory tr = integrate(seed(riemann::front_speed(at0)), f.traces, 2.0, 1e-3);
  // The mass-weighted velocity of the front stays between the traces.
  for (std::size_t i = 0; i < tr.size(); i += 100) {
    const auto& s = tr.states[i];
    CHECK(entropy_ok_tol(f.traces.left(s.x, tr.times[i]), f.traces.right(s.x, tr.times[i]), s.u_delta));
    if (i > 0) CHECK(s.e >= tr.states[i - 100].e);
  }
  // Total mass by Simpson on both slabs plus the front.
  auto total_mass = [&](double t, const DeltaFront1D& s) {
    auto rl = [&](double x) { return f.traces.left(x, t).rho(); };
    auto rr = [&](double x) { return f.traces.right(x, t).rho(); };
    return oracle::simpson(rl, f.left_edge(t), s.x, 200) +
           oracle::simpson(rr, s.x, f.right_edge(t), 200) + s.e;
  };
  const double m0 = total_mass(0.0, tr.states.front());
  CHECK(total_mass(2.0, tr.states.back()) == doctest::Approx(m0).epsilon(1e-11));
}

TEST_CASE("Hermite interpolation between steps") {
  const CompressionField c{1.0, 1.0, 0.5, 0.5, 1.0, 1.0, 0.5, 10.0};
  const FrontTrajectory tr = integrate(seed(0.0), c.field().traces, 1.0, 1e-2);
  for (double t : {0.0, 0.0137, 0.5055, 1.0}) {
    CHECK(tr.at(t).e == doctest::Approx(c.symmetric_front(t).e).epsilon(1e-6));
    CHECK(tr.at(t).h == doctest::Approx(c.symmetric_front(t).h).epsilon(1e-6));
  }
  CHECK_THROWS_AS(tr.at(1.5), Error);
}

TEST_CASE("entropy violation and bad inputs") {
  const RiemannData d(OuterState(1, 1, 1), OuterState(1, -1, 1), 10.0);
  const auto tr = riemann_field(d).traces;
  try {
    integrate(seed(1.5), tr, 1.0, 1e-3);
    FAIL("expected EntropyViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EntropyViolation);
  }
  CHECK_THROWS_AS(integrate(seed(0.0), tr, 1.0, 0.0), Error);
  CHECK_THROWS_AS(integrate(seed(0.0), tr, -1.0, 1e-3), Error);
  // Empty neighbours: no inflow and no initial mass.
  const RiemannData empty(OuterState(0, 1, 0), OuterState(0, -1, 0), 10.0);
  try {
    integrate(seed(0.0), riemann_field(empty).traces, 1.0, 1e-3);
    FAIL("expected Validation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
  }
}

TEST_CASE("trajectory CSV layout") {
  const RiemannData d(OuterState(1, 1, 1), OuterState(1, -1, 1), 10.0);
  const FrontTrajectory tr = integrate(seed(0.0), riemann_field(d).traces, 0.01, 1e-3);
  std::ostringstream os;
  tr.write_csv(os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,x,u_delta,e,h,deficit_mass,deficit_momentum,deficit_energy");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 11);
}
