#include "dshock/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <sstream>

#include "dshock/errors.hpp"

namespace dshock::quad {
namespace {

constexpr int kOrder = 10;

Rule make_rule(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

struct Panel {
  double a;
  double b;
  double value;
  double abs_value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

struct Estimate {
  double value;
  double abs_value;
};

Estimate apply(const Rule& rule, const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  double s = 0.0;
  double sa = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = f(c + r * rule.nodes[i]);
    s += rule.weights[i] * v;
    sa += rule.weights[i] * std::abs(v);
  }
  return {s * r, sa * std::abs(r)};
}

Panel evaluate(const std::function<double(double)>& f, double a, double b, int& evals) {
  static const Rule& rule = gauss_legendre(kOrder);
  const double m = 0.5 * (a + b);
  const Estimate whole = apply(rule, f, a, b);
  const Estimate left = apply(rule, f, a, m);
  const Estimate right = apply(rule, f, m, b);
  evals += 3 * kOrder;
  const double fine = left.value + right.value;
  return {a, b, fine, left.abs_value + right.abs_value, std::abs(fine - whole.value)};
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
  return it->second;
}

Result integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, const Options& opts) {
  Result res;
  if (b == a) return res;
  const double sign = b > a ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);

  std::vector<double> cuts{lo};
  for (double p : breakpoints) {
    if (p > lo && p < hi) cuts.push_back(p);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());

  std::priority_queue<Panel> heap;
  double total = 0.0;
  double total_abs = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    Panel p = evaluate(f, cuts[i], cuts[i + 1], res.evaluations);
    total += p.value;
    total_abs += p.abs_value;
    total_err += p.error;
    heap.push(p);
  }

  while (!heap.empty() && total_err > std::max(opts.abs_tol, opts.rel_tol * total_abs)) {
    if (static_cast<int>(heap.size()) >= opts.max_intervals) {
      std::ostringstream os;
      os << "adaptive quadrature on [" << lo << ", " << hi << "] did not reach rel_tol "
         << opts.rel_tol << " (error estimate " << total_err << " after " << heap.size()
         << " intervals)";
      throw Error(ErrorKind::QuadratureFailure, os.str());
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      throw Error(ErrorKind::QuadratureFailure, "adaptive quadrature exhausted bisection");
    }
    Panel l = evaluate(f, worst.a, mid, res.evaluations);
    Panel r = evaluate(f, mid, worst.b, res.evaluations);
    total += l.value + r.value - worst.value;
    total_abs += l.abs_value + r.abs_value - worst.abs_value;
    total_err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
  }

  // Re-sum to drop the drift accumulated by incremental updates.
  total = 0.0;
  total_abs = 0.0;
  total_err = 0.0;
  res.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    total += heap.top().value;
    total_abs += heap.top().abs_value;
    total_err += heap.top().error;
    heap.pop();
  }
  res.value = sign * total;
  res.abs_value = total_abs;
  res.error = total_err;
  return res;
}

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts) {
  return integrate_piecewise(f, a, b, {}, opts);
}

}  // namespace dshock::quad
