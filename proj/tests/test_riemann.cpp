#include <cmath>
#include <random>

#include "doctest.h"
#include "dshock/riemann.hpp"
#include "oracles.hpp"

using namespace dshock;
using namespace dshock::riemann;

namespace {

RiemannData symmetric() { return {OuterState(1, 1, 1), OuterState(1, -1, 1), 10.0}; }
RiemannData asymmetric() { return {OuterState(4, 1, 0), OuterState(1, 0, 0), 10.0}; }

RiemannData random_admissible(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> rho(0.2, 5.0), u(-2.0, 2.0), h(0.0, 3.0);
  double ul = u(rng), ur = u(rng);
  if (ul < ur) std::swap(ul, ur);
  if (ul - ur < 0.05) ul += 0.1;
  return {OuterState(rho(rng), ul, h(rng)), OuterState(rho(rng), ur, h(rng)), 10.0};
}

}  // namespace

TEST_CASE("front_speed examples") {
  CHECK(front_speed(symmetric()) == 0.0);
  CHECK(front_speed(asymmetric()) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  for (double rho : {0.1, 1.0, 7.5}) {
    CHECK(front_speed({OuterState(rho, 0.7, 0), OuterState(rho, -0.7, 0), 1.0}) == 0.0);
  }
  // Oracle: bisection on the momentum balance picks the same root.
  CHECK(oracle::bisect_front_speed(asymmetric()) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("front_speed errors") {
  CHECK_THROWS_AS(front_speed({OuterState(1, -1, 0), OuterState(1, 1, 0), 1.0}), Error);
  try {
    front_speed({OuterState(1, 0, 0), OuterState(1, 0, 0), 1.0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoOverlap);
  }
  try {
    front_speed({OuterState(0, 1, 0), OuterState(0, 0, 0), 1.0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateData);
  }
}

TEST_CASE("front_speed matches oracle, weighted mean and entropy on random data") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 500; ++i) {
    const RiemannData d = random_admissible(rng);
    const double u = front_speed(d);
    const double a = std::sqrt(d.left().rho()), b = std::sqrt(d.right().rho());
    const double weighted = (a * d.left().u() + b * d.right().u()) / (a + b);
    CHECK(u == doctest::Approx(weighted).epsilon(1e-12).scale(1.0));
    CHECK(u == doctest::Approx(oracle::bisect_front_speed(d)).epsilon(1e-12).scale(1.0));
    CHECK(entropy_ok(d.left(), d.right(), u));
  }
}

TEST_CASE("solve_riemann symmetric benchmark at t = 1") {
  const auto sol = solve_riemann(symmetric());
  const Solution1D s = sol.at(1.0);
  REQUIRE(s.front);
  CHECK(s.front->x == 0.0);
  CHECK(s.front->e == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s.front->h == doctest::Approx(3.0).epsilon(1e-15));
  REQUIRE(s.pieces.size() == 2);
  CHECK(s.pieces[0].a == -9.0);
  CHECK(s.pieces[1].b == 9.0);
  CHECK(s.at(20.0).rho() == 0.0);
  CHECK(sol.validity_window() == doctest::Approx(10.0));
}

TEST_CASE("solve_riemann asymmetric benchmark at t = 1") {
  const auto sol = solve_riemann(asymmetric());
  const DeltaFront1D f = sol.front_at(1.0);
  CHECK(f.x == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(f.e == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.h == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
  // Energy conservation gives the same h without the RH formula.
  CHECK(f.h == doctest::Approx(oracle::front_internal_by_conservation(asymmetric(), 2.0 / 3.0, 1.0))
                   .epsilon(1e-13));
}

TEST_CASE("vacuum branch opens a fan with rho = H = 0") {
  const RiemannData d{OuterState(1, -1, 2), OuterState(3, 1, 1), 5.0};
  const auto sol = solve_riemann(d);
  CHECK_FALSE(sol.has_front());
  const Solution1D s = sol.at(1.0);
  s.validate();
  CHECK_FALSE(s.front);
  REQUIRE(s.pieces.size() == 3);
  CHECK(s.pieces[1].vacuum_fan);
  CHECK(s.pieces[1].a == -1.0);
  CHECK(s.pieces[1].b == 1.0);
  CHECK(s.at(0.0).rho() == 0.0);
  CHECK(s.at(0.0).h_density() == 0.0);
  CHECK(s.at(0.5).u() == doctest::Approx(0.5));
  // Energy never moves for diverging data.
  const EnergyBudget b0 = budget_of(sol.at(0.0)), b3 = budget_of(sol.at(3.0));
  CHECK(b3.total() == doctest::Approx(b0.total()).epsilon(1e-15));
  CHECK_THROWS_AS(energy_budget(d, 1.0), Error);
}

TEST_CASE("validity window is enforced") {
  const auto sol = solve_riemann(symmetric());
  CHECK_NOTHROW(sol.at(10.0));
  try {
    sol.at(10.5);
    FAIL("expected OutOfRange");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfRange);
  }
  CHECK_THROWS_AS(energy_budget(symmetric(), 11.0), Error);
}

TEST_CASE("energy budget of the symmetric benchmark") {
  const EnergyBudget b0 = initial_budget(symmetric());
  CHECK(b0.w_kin_outer == 10.0);
  CHECK(b0.w_int_outer == 20.0);
  const EnergyBudget b = energy_budget(symmetric(), 1.0);
  CHECK(b.w_kin_outer == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(b.w_int_outer == doctest::Approx(18.0).epsilon(1e-15));
  CHECK(b.w_kin_front == doctest::Approx(0.0));
  CHECK(b.w_int_front == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(b.total() == doctest::Approx(30.0).epsilon(1e-15));

  const EnergyBudget z = energy_budget(asymmetric(), 0.0);
  CHECK(z.w_kin_front == 0.0);
  CHECK(z.w_int_front == 0.0);
  CHECK(z.w_kin_outer == initial_budget(asymmetric()).w_kin_outer);

  CHECK(energy_budget(asymmetric(), 1.0).w_int_front == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("equal-density closed forms agree with piecewise integration") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2), h(0, 2), rho(0.1, 4), t(0, 2);
  for (int i = 0; i < 200; ++i) {
    double ul = u(rng), ur = u(rng);
    if (ul < ur) std::swap(ul, ur);
    const double r = rho(rng);
    const RiemannData d{OuterState(r, ul + 0.01, h(rng)), OuterState(r, ur, h(rng)), 10.0};
    const double tt = t(rng);
    const EnergyBudget closed = energy_budget(d, tt);
    const EnergyBudget direct = budget_of(solve_riemann(d).at(tt));
    CHECK(closed.w_kin_outer == doctest::Approx(direct.w_kin_outer).epsilon(1e-12));
    CHECK(closed.w_int_outer == doctest::Approx(direct.w_int_outer).epsilon(1e-12));
    CHECK(closed.w_kin_front == doctest::Approx(direct.w_kin_front).epsilon(1e-12).scale(1.0));
    CHECK(closed.w_int_front == doctest::Approx(direct.w_int_front).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("balance invariants of the closed forms on random data") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    const RiemannData d = random_admissible(rng);
    const auto sol = solve_riemann(d);
    const double T = std::min(2.0, sol.validity_window());
    const EnergyBudget b0 = initial_budget(d);
    const double mass0 = (d.left().rho() + d.right().rho()) * d.half_length();
    const double mom0 = (d.left().momentum() + d.right().momentum()) * d.half_length();
    double prev_e = 0.0, prev_wk = b0.w_kin_outer, prev_wi = b0.w_int_outer;
    for (int k = 0; k <= 20; ++k) {
      const double t = T * k / 20.0;
      const Solution1D s = sol.at(t);
      double mass = s.front->e, mom = s.front->momentum();
      for (const auto& p : s.pieces) {
        mass += p.state.rho() * (p.b - p.a);
        mom += p.state.momentum() * (p.b - p.a);
      }
      const EnergyBudget b = energy_budget(d, t);
      CHECK(mass == doctest::Approx(mass0).epsilon(1e-12));
      CHECK(std::abs(mom - mom0) <= 1e-12 * (mass0 * 2.0 + std::abs(mom0)));
      CHECK(b.total() == doctest::Approx(b0.total()).epsilon(1e-12));
      CHECK(s.front->e >= prev_e);
      CHECK(b.w_kin_outer <= prev_wk + 1e-12 * b0.total());
      CHECK(b.w_int_outer <= prev_wi + 1e-12 * b0.total());
      prev_e = s.front->e;
      prev_wk = b.w_kin_outer;
      prev_wi = b.w_int_outer;
    }
  }
}

TEST_CASE("front rates equal the RH deficits at the closed-form speed") {
  const Deficits r = solve_riemann(asymmetric()).front_rates();
  CHECK(r.mass == doctest::Approx(2.0));
  CHECK(r.momentum == doctest::Approx(4.0 / 3.0));
  CHECK(r.energy == doctest::Approx(2.0 / 3.0));
}
