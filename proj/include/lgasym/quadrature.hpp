#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration on finite intervals,
// improper integrals to +infinity through x = a + t/(1-t), and L1 tail norms.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "lgasym/errors.hpp"

namespace lgasym {

using RealFn = std::function<double(double)>;

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;  // absolute
  std::size_t evaluations = 0;
};

enum class Endpoint { Regular, Singular };

struct QuadOptions {
  std::size_t max_evaluations = std::size_t{1} << 20;
  // Integrable endpoint singularities are removed by x = a + (b-a) u^2.
  Endpoint left = Endpoint::Regular;
  Endpoint right = Endpoint::Regular;
};

namespace detail {

struct GK15 {
  static constexpr std::array<double, 8> xgk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wgk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

struct Segment {
  double a, b;
  double value, error, abs_value;
  bool operator<(const Segment& o) const { return error < o.error; }
};

// Error estimate is |K15 - G7|: a conservative bound on the Kronrod error.
template <typename F>
Segment gk15(F&& fn, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = fn(center);
  double kronrod = fc * GK15::wgk[7];
  double gauss = fc * GK15::wg[3];
  double abs_sum = std::fabs(fc) * GK15::wgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * GK15::xgk[j];
    const double f1 = fn(center - dx);
    const double f2 = fn(center + dx);
    kronrod += GK15::wgk[j] * (f1 + f2);
    abs_sum += GK15::wgk[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) gauss += GK15::wg[j / 2] * (f1 + f2);
  }
  const double value = kronrod * half;
  const double error = std::fabs((kronrod - gauss) * half);
  return {a, b, value, error, std::fabs(abs_sum * half)};
}

// Optional observer for refinements of the segment touching `watch_right`.
struct TailWatch {
  double watch_right;
  double tol;
  std::vector<double> increments;
};

template <typename F>
QuadResult adaptive(F&& raw, double a, double b, double tol, std::size_t budget, TailWatch* watch) {
  std::size_t evaluations = 0;
  auto fn = [&](double x) {
    const double v = raw(x);
    if (!std::isfinite(v)) {
      throw QuadratureError("non-finite integrand sample at x=" + std::to_string(x));
    }
    return v;
  };
  std::priority_queue<Segment> queue;
  Segment first = gk15(fn, a, b);
  evaluations += 15;
  double value = first.value;
  double error = first.error;
  double abs_value = first.abs_value;
  queue.push(first);
  double frozen_error = 0.0;  // error of segments too small to split
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (;;) {
    const double target = std::max(tol, 50.0 * eps * abs_value);
    if (error <= target) break;
    if (queue.empty()) {
      throw QuadratureError("requested tolerance not reachable in double precision (error estimate " +
                            std::to_string(error) + ")");
    }
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 1e3 * eps * std::max(std::fabs(worst.a), std::fabs(worst.b))) {
      frozen_error += worst.error;
      continue;
    }
    if (evaluations + 30 > budget) {
      throw QuadratureError("evaluation budget of " + std::to_string(budget) + " exhausted");
    }
    Segment left = gk15(fn, worst.a, mid);
    Segment right = gk15(fn, mid, worst.b);
    evaluations += 30;
    const double delta = left.value + right.value - worst.value;
    value += delta;
    error += left.error + right.error - worst.error;
    abs_value += left.abs_value + right.abs_value - worst.abs_value;
    queue.push(left);
    queue.push(right);

    if (watch && worst.b == watch->watch_right) {
      watch->increments.push_back(std::fabs(delta));
      const auto& inc = watch->increments;
      const std::size_t n = inc.size();
      // Divergent tails add comparable amounts on every refinement. The
      // net shrinkage over a window is used so that noisy (oscillatory)
      // increments of a convergent tail are not mistaken for divergence.
      constexpr std::size_t window = 8;
      if (n >= window) {
        bool stalled = inc[n - 1] >= 0.6 * inc[n - window];
        for (std::size_t k = n - window; k < n; ++k) {
          if (inc[k] <= 10.0 * watch->tol) stalled = false;
        }
        if (stalled) throw DivergenceError("integral diverges: tail contributions are not shrinking");
      }
    }
  }
  (void)frozen_error;
  return {value, error, evaluations};
}

}  // namespace detail

// Adaptive integral over [a, b].
inline QuadResult integrate_finite(const RealFn& fn, double a, double b, double tol,
                                   const QuadOptions& options = {}) {
  if (!(a <= b)) throw QuadratureError("integrate_finite requires a <= b");
  if (!(tol > 0)) throw QuadratureError("tolerance must be positive");
  if (a == b) return {0.0, 0.0, 0};
  const double width = b - a;
  const bool left = options.left == Endpoint::Singular;
  const bool right = options.right == Endpoint::Singular;
  if (left && right) {
    const double mid = a + 0.5 * width;
    QuadOptions lo = options, hi = options;
    lo.right = Endpoint::Regular;
    hi.left = Endpoint::Regular;
    QuadResult r1 = integrate_finite(fn, a, mid, 0.5 * tol, lo);
    QuadResult r2 = integrate_finite(fn, mid, b, 0.5 * tol, hi);
    return {r1.value + r2.value, r1.error_estimate + r2.error_estimate, r1.evaluations + r2.evaluations};
  }
  if (left) {
    auto mapped = [&](double u) { return 2.0 * width * u * fn(a + width * u * u); };
    return detail::adaptive(mapped, 0.0, 1.0, tol, options.max_evaluations, nullptr);
  }
  if (right) {
    auto mapped = [&](double u) { return 2.0 * width * u * fn(b - width * u * u); };
    return detail::adaptive(mapped, 0.0, 1.0, tol, options.max_evaluations, nullptr);
  }
  return detail::adaptive(fn, a, b, tol, options.max_evaluations, nullptr);
}

// Integral over [a, inf) through x = a + t/(1-t). A tail whose successive
// refinements keep adding comparable amounts is reported as divergent.
// When the budget runs out on a convergent-looking tail the integral is
// retried through x = a + (t/(1-t))^3, which turns a slow x^{-p} decay
// (p > 4/3) into a bounded integrand at t = 1.
inline QuadResult integrate_to_infinity(const RealFn& fn, double a, double tol, const QuadOptions& options = {}) {
  if (!(tol > 0)) throw QuadratureError("tolerance must be positive");
  auto mapped = [&](double t) {
    const double s = 1.0 - t;
    const double v = fn(a + t / s);
    if (v == 0.0) return 0.0;
    return v / (s * s);
  };
  detail::TailWatch watch{1.0, tol, {}};
  try {
    return detail::adaptive(mapped, 0.0, 1.0, tol, options.max_evaluations, &watch);
  } catch (const DivergenceError&) {
    throw;
  } catch (const QuadratureError& e) {
    // A stalled tail that never settled is divergence, not a convergence failure.
    const auto& inc = watch.increments;
    if (inc.size() >= 8 && inc.back() > 10.0 * tol && inc.back() >= 0.5 * inc[inc.size() - 8]) {
      throw DivergenceError(std::string("integral diverges: ") + e.what());
    }
  }
  auto cubic = [&](double t) {
    const double s = 1.0 - t;
    const double r = t / s;
    const double v = fn(a + r * r * r);
    if (v == 0.0) return 0.0;
    return v * 3 * r * r / (s * s);
  };
  detail::TailWatch second{1.0, tol, {}};
  QuadResult r = detail::adaptive(cubic, 0.0, 1.0, tol, options.max_evaluations, &second);
  r.evaluations += options.max_evaluations;
  return r;
}

// Integral over (0, b] through x = 1/y, for integrands singular at 0.
inline QuadResult integrate_near_zero(const RealFn& fn, double b, double tol, const QuadOptions& options = {}) {
  if (!(b > 0)) throw QuadratureError("integrate_near_zero requires b > 0");
  return integrate_to_infinity([&](double y) { return fn(1.0 / y) / (y * y); }, 1.0 / b, tol, options);
}

// ||fn||_{L1(a, inf)}.
inline double l1_tail_norm(const RealFn& fn, double a, double tol) {
  return integrate_to_infinity([&](double x) { return std::fabs(fn(x)); }, a, tol).value;
}

}  // namespace lgasym
