#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "dshock/errors.hpp"
#include "dshock/quadrature.hpp"
#include "oracles.hpp"

using namespace dshock;

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int n : {2, 5, 10}) {
    const auto& r = quad::gauss_legendre(n);
    double w = 0.0;
    for (double x : r.weights) w += x;
    CHECK(w == doctest::Approx(2.0).epsilon(1e-15));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-14).scale(1.0));
    }
  }
}

TEST_CASE("adaptive integration of smooth and peaked functions") {
  CHECK(quad::integrate([](double x) { return std::sin(x); }, 0, std::numbers::pi).value ==
        doctest::Approx(2.0).epsilon(1e-12));
  auto peak = [](double x) { return 1.0 / (1e-4 + x * x); };
  CHECK(quad::integrate(peak, -1, 1).value ==
        doctest::Approx(2.0 * std::atan(100.0) / 1e-2).epsilon(1e-11));
  auto sq = [](double x) { return std::sqrt(x); };
  CHECK(quad::integrate(sq, 0, 1).value == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
  auto cosx = [](double x) { return std::exp(-x) * std::cos(3 * x); };
  CHECK(quad::integrate(cosx, 0, 4).value ==
        doctest::Approx(oracle::simpson(cosx, 0, 4, 20000)).epsilon(1e-11));
  // Reversed limits flip the sign.
  CHECK(quad::integrate(sq, 1, 0).value == doctest::Approx(-2.0 / 3.0).epsilon(1e-11));
  CHECK(quad::integrate(sq, 1, 1).value == 0.0);
}

TEST_CASE("breakpoints make step functions exact") {
  auto step = [](double x) { return x < 0.3 ? 1.0 : (x < 0.7 ? 5.0 : -2.0); };
  const std::vector<double> cuts{0.3, 0.7};
  const auto r = quad::integrate_piecewise(step, 0, 1, cuts);
  CHECK(r.value == doctest::Approx(0.3 + 2.0 - 0.6).epsilon(1e-15));
  CHECK(r.intervals == 3);
}

TEST_CASE("exhausted budget raises QuadratureFailure") {
  auto wild = [](double x) { return std::sin(1.0 / (x + 1e-300)); };
  try {
    quad::integrate(wild, 0, 1, {1e-14, 0.0, 50});
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::QuadratureFailure);
  }
}
