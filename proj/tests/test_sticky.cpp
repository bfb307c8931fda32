#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "dshock/riemann.hpp"
#include "dshock/sticky.hpp"
#include "oracles.hpp"

using namespace dshock;
using namespace dshock::sticky;

TEST_CASE("merge of two particles") {
  const Particle p = merge({4, 0.0, 1, 0}, {1, 0.0, 0, 0});
  CHECK(p.m == 5.0);
  CHECK(p.v == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(p.h == doctest::Approx(0.4).epsilon(1e-15));
  // Same as the kinetic-energy difference.
  const Particle q = merge({2, 1.0, 3, 0.5}, {0.5, 1.0, -1, 0.25});
  const double lost = 0.5 * 2 * 9 + 0.5 * 0.5 * 1 - 0.5 * q.m * q.v * q.v;
  CHECK(q.h - 0.75 == doctest::Approx(lost).epsilon(1e-14));
}

TEST_CASE("event queue matches the quadratic-time scan") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> m(0.5, 2.0), v(-1.0, 1.0), gap(0.01, 0.2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Particle> ps;
    double x = 0.0;
    for (int i = 0; i < 150; ++i) {
      x += gap(rng);
      ps.push_back({m(rng), x, v(rng), 0.0});
    }
    const auto ref = oracle::naive_sticky(ps, 3.0);
    ParticleSystem sys(ps);
    sys.advance(3.0);
    const auto got = sys.particles();
    REQUIRE(got.size() == ref.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].m == doctest::Approx(ref[i].m).epsilon(1e-12));
      CHECK(got[i].x == doctest::Approx(ref[i].x).epsilon(1e-10).scale(1.0));
      CHECK(got[i].v == doctest::Approx(ref[i].v).epsilon(1e-10).scale(1.0));
      CHECK(got[i].h == doctest::Approx(ref[i].h).epsilon(1e-9).scale(1.0));
    }
    CHECK(sys.merge_count() == static_cast<long>(ps.size() - got.size()));
  }
}

TEST_CASE("conservation and dissipation on random data") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> m(0.1, 3.0), v(-2.0, 2.0), gap(0.001, 0.05), h(0, 1);
  std::vector<Particle> ps;
  double x = 0.0;
  for (int i = 0; i < 5000; ++i) {
    x += gap(rng);
    ps.push_back({m(rng), x, v(rng), h(rng)});
  }
  ParticleSystem sys(ps);
  const double m0 = sys.total_mass(), p0 = sys.total_momentum(), e0 = sys.total_energy();
  const double k0 = sys.kinetic_energy(), i0 = sys.internal_energy();
  sys.advance(10.0);
  CHECK(sys.merge_count() > 1000);
  CHECK(std::abs(sys.total_mass() - m0) <= 1e-12 * m0);
  CHECK(std::abs(sys.total_momentum() - p0) <= 1e-12 * (std::abs(p0) + m0));
  CHECK(std::abs(sys.total_energy() - e0) <= 1e-12 * e0);
  CHECK(sys.kinetic_energy() <= k0);
  CHECK(sys.internal_energy() >= i0);
  CHECK(sys.min_relative_increment() >= -1e-15);
  // Order is preserved.
  const auto out = sys.particles();
  for (std::size_t i = 1; i < out.size(); ++i) CHECK(out[i].x >= out[i - 1].x - 1e-12);
}

TEST_CASE("simultaneous collisions and coincident input") {
  // Three particles meeting at x = 0, t = 1.
  ParticleSystem sys({{1, -1, 1, 0}, {1, 0, 0, 0}, {1, 1, -1, 0}});
  sys.advance(2.0);
  REQUIRE(sys.size() == 1);
  const Particle p = sys.particles().front();
  CHECK(p.m == 3.0);
  CHECK(p.v == doctest::Approx(0.0).scale(1.0));
  CHECK(p.x == doctest::Approx(0.0).scale(1.0));
  CHECK(p.h == doctest::Approx(1.0));

  ParticleSystem c({{1, 0, 1, 0}, {1, 0, -1, 0}, {1, 2, 0, 0}});
  CHECK(c.size() == 2);
  CHECK(c.merge_count() == 1);
  CHECK(c.internal_energy() == doctest::Approx(1.0));

  CHECK_THROWS_AS(ParticleSystem({{1, 1, 0, 0}, {1, 0, 0, 0}}), Error);
  CHECK_THROWS_AS(ParticleSystem({{0, 1, 0, 0}}), Error);
}

TEST_CASE("equal-mass sampling") {
  const RiemannData d(OuterState(4, 1, 0.5), OuterState(1, 0, 2), 10.0);
  const ParticleSystem s = sample(d, 1000);
  const auto ps = s.particles();
  REQUIRE(ps.size() == 1000);
  CHECK(s.total_mass() == doctest::Approx(50.0).epsilon(1e-14));
  CHECK(s.internal_energy() == doctest::Approx(25.0).epsilon(1e-12));
  for (const auto& p : ps) CHECK(p.m == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(ps.front().x == doctest::Approx(-10 + 0.05 / 8));
  CHECK(ps.back().x == doctest::Approx(10 - 0.05 / 2));
  CHECK_THROWS_AS(sample(RiemannData(OuterState(0, 1, 0), OuterState(0, -1, 0), 1.0), 10), Error);
  try {
    sample(RiemannData(OuterState(0, 1, 0), OuterState(0, -1, 0), 1.0), 10);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptySupport);
  }
}

TEST_CASE("sticky particles converge to the Riemann front") {
  for (const RiemannData& d : {RiemannData(OuterState(1, 1, 1), OuterState(1, -1, 1), 10.0),
                               RiemannData(OuterState(4, 1, 0), OuterState(1, 0, 0), 10.0)}) {
    const auto exact = riemann::solve_riemann(d).front_at(1.0);
    const ParticleSystem s = run(sample(d, 4000), 1.0);
    const FrontEstimate f = empirical_front(s);
    CHECK(std::abs(f.x - exact.x) <= 5e-3);
    CHECK(std::abs(f.u - exact.u_delta) <= 5e-3);
    CHECK(std::abs(f.e - exact.e) <= 5e-3 * exact.e);
  }
  CHECK_THROWS_AS(empirical_front(sample(RiemannData(OuterState(1, 1, 0), OuterState(1, -1, 0), 1.0), 10)),
                  Error);
}

TEST_CASE("particle CSV layout") {
  ParticleSystem s({{1, 0, 0, 0}, {2, 1, 0, 0.5}});
  std::ostringstream os;
  s.write_csv(os);
  CHECK(os.str() == "m,x,v,h\n1,0,0,0\n2,1,0,0.5\n");
}
