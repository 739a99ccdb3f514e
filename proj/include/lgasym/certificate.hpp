#pragma once

// Cutoff selection and the Gronwall certificate:
//   ||g||_{L1(a,inf)} < log 2,  |z(x)| <= exp(int_a^x |g|),
//   int_a^inf |g z| <= e^{||g||} - 1 < 1,  hence z_inf lies in a disk about 1 missing 0.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lgasym/errors.hpp"
#include "lgasym/quadrature.hpp"
#include "lgasym/transform.hpp"
#include "lgasym/volterra.hpp"

namespace lgasym {

inline const double kLog2 = std::log(2.0);

namespace detail {

// Tail norm, or NaN when the tail cannot be evaluated (divergent, undefined).
inline double try_tail(const RealFn& g, double a, double tol) {
  try {
    return l1_tail_norm(g, a, tol);
  } catch (const std::exception&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

// Smallest value on the 3-significant-digit lattice that is >= v.
inline double ceil_3_digits(double v) {
  if (!(v > 0)) return v;
  const double unit = std::pow(10.0, std::floor(std::log10(v)) - 2);
  double r = std::ceil(v / unit - 1e-9) * unit;
  if (r < v) r += unit;
  return r;
}

}  // namespace detail

// Smallest a >= left, up to 3 significant digits, with ||g||_{L1(a,inf)} <= target.
inline double find_cutoff(const RealFn& g, double left, double target = 0.9 * std::log(2.0), double tol = 1e-10) {
  auto ok = [&](double a) {
    const double t = detail::try_tail(g, a, tol);
    return std::isfinite(t) && t <= target;
  };
  if (ok(left)) return left;
  double lo = left, hi = left;
  bool found = false;
  for (int k = 0; k <= 60; ++k) {
    hi = left + std::ldexp(1.0, k);
    if (ok(hi)) {
      found = true;
      break;
    }
    lo = hi;
  }
  if (!found) {
    throw NotIntegrable("||g||_{L1(a,inf)} never drops below " + format_number(target) +
                        " for a up to left + 2^60: g is not integrable at infinity");
  }
  while (hi - lo > 1e-10 * std::max(1.0, std::fabs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  double a = detail::ceil_3_digits(hi);
  // The lattice point can only be further out; tails shrink with a.
  if (!ok(a)) a = hi;
  return std::max(a, left);
}

struct Certificate {
  double cutoff_a = 0.0;
  double g_l1_tail = 0.0;
  double g_l1_error = 0.0;
  double zg_l1_bound = 0.0;
  std::vector<HypothesisCheck> checks;

  double radius() const { return zg_l1_bound; }
  bool valid() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

// Pointwise envelope exp(int_a^x |g|).
inline double gronwall_envelope(const RealFn& g, double a, double x, double tol = 1e-12) {
  if (x <= a) return 1.0;
  return std::exp(integrate_finite([&](double s) { return std::fabs(g(s)); }, a, x, tol).value);
}

inline Certificate gronwall_certificate(const RealFn& g, double a, double tol = 1e-10) {
  Certificate c;
  c.cutoff_a = a;
  const QuadResult r = integrate_to_infinity([&](double s) { return std::fabs(g(s)); }, a, tol);
  c.g_l1_tail = r.value;
  c.g_l1_error = r.error_estimate;
  c.zg_l1_bound = std::expm1(c.g_l1_tail);
  const double margin = std::max(r.error_estimate, 4 * std::numeric_limits<double>::epsilon() * r.value);
  c.checks.push_back({"g_l1_tail < log 2", c.g_l1_tail + margin, kLog2, c.g_l1_tail + margin < kLog2});
  c.checks.push_back({"radius < 1", c.zg_l1_bound, 1.0, std::expm1(c.g_l1_tail + margin) < 1.0});
  return c;
}

struct VerificationReport {
  std::vector<HypothesisCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

// Replays the certificate inequalities on a computed solution.
inline VerificationReport verify_certificate(const Certificate& cert, const VolterraSolution& sol) {
  VerificationReport rep;
  double worst = 0.0;
  for (std::size_t k = 0; k < sol.size(); ++k) {
    worst = std::max(worst, std::abs(sol.z[k]) / std::exp(sol.envelope_log[k]));
  }
  rep.checks.push_back({"pointwise envelope |z| <= exp(int|g|)", worst, 1.0, worst <= 1.0 + 1e-14});

  // Bound on int_a^inf |g z| including the part beyond the grid.
  const double tail_zg = std::exp(sol.g_l1()) * sol.tail.l1;
  const double zg = sol.running_l1_zg() + tail_zg;
  const double slack = 1e-10 * (1 + cert.zg_l1_bound) + 4 * sol.step * sol.step * sol.g_l1();
  rep.checks.push_back({"int|g z| <= e^{||g||} - 1", zg, cert.zg_l1_bound, zg <= cert.zg_l1_bound + slack});

  const double dist = std::abs(sol.main - Complex(1.0)) + sol.main_error;
  rep.checks.push_back({"|z_inf - 1| < radius", dist, cert.radius(), dist < cert.radius() || dist == 0.0});
  rep.checks.push_back({"radius < 1", cert.radius(), 1.0, cert.radius() < 1.0});
  return rep;
}

}  // namespace lgasym
