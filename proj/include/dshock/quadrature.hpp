#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dshock::quad {

struct Options {
  double rel_tol = 1e-12;  ///< relative to the integral of |f|
  double abs_tol = 0.0;
  int max_intervals = 20000;
};

struct Result {
  double value = 0.0;
  double abs_value = 0.0;  ///< estimate of the integral of |f|
  double error = 0.0;
  int evaluations = 0;
  int intervals = 0;
};

/// Fixed n-point Gauss-Legendre nodes and weights on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const Rule& gauss_legendre(int n);

/// Globally adaptive Gauss-Legendre quadrature. Each interval is estimated with
/// a 10-point rule on the whole interval and on both halves; the interval
/// with the largest discrepancy is bisected until the summed discrepancy is
/// below max(abs_tol, rel_tol * integral |f|). Throws QuadratureFailure when
/// the interval budget runs out first.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = {});

/// Same, with the domain pre-split at `breakpoints` (sorted, within [a, b]),
/// so no panel straddles a known discontinuity.
Result integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, const Options& opts = {});

}  // namespace dshock::quad
