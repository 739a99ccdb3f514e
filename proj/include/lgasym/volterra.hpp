#pragma once

// Marching solvers for
//   z(t) = 1 + (1/2 zeta) int_a^t (1 - e^{-2 zeta (t-s)}) g(s) z(s) ds,  zeta in {1, i, -i}
//   z(t) = 1 + int_a^t s (1 - s/t) g(s) z(s) ds                         (algebraic form)
// by product trapezoid integration, with connection constants and the
// recessive solution obtained by reduction of order.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lgasym/errors.hpp"
#include "lgasym/quadrature.hpp"
#include "lgasym/transform.hpp"

namespace lgasym {

enum class Zeta { PlusOne, PlusI, MinusI };

inline Complex zeta_value(Zeta z) {
  switch (z) {
    case Zeta::PlusOne: return {1.0, 0.0};
    case Zeta::PlusI: return {0.0, 1.0};
    case Zeta::MinusI: return {0.0, -1.0};
  }
  return {1.0, 0.0};
}

inline const char* to_string(Zeta z) {
  switch (z) {
    case Zeta::PlusOne: return "1";
    case Zeta::PlusI: return "i";
    case Zeta::MinusI: return "-i";
  }
  return "";
}

// Summary of the coefficient beyond the end of the grid X:
// l1 = int_X^inf |g|, integral = int_X^inf g,
// oscillation = (|g(X)| + int_X^inf |g'|) / 2, which bounds |int_X^inf g e^{+-2is}|.
struct TailData {
  double l1 = 0.0;
  double integral = 0.0;
  double oscillation = 0.0;
};

// Supplies the coefficient on the uniform grid t_k = a + k h.
class VolterraSource {
public:
  virtual ~VolterraSource() = default;
  // Called before every (re)start of a march with the step in use.
  virtual void begin(double a, double h) = 0;
  // Nodes are requested in increasing k.
  virtual double coefficient(std::size_t k, double t) = 0;
  // int |g| (or int s|g| for the algebraic form) over [t0, t1].
  virtual double cell_l1(std::size_t k, double t0, double t1) = 0;
  virtual TailData tail(double t) = 0;
};

// A source built from plain functions of the marching variable.
class FunctionSource final : public VolterraSource {
public:
  // `weight_by_t` selects the algebraic measures int s|g| and int s g.
  FunctionSource(RealFn g, RealFn dg = {}, bool weight_by_t = false, double tol = 1e-13)
      : g_(std::move(g)), dg_(std::move(dg)), weighted_(weight_by_t), tol_(tol) {}

  void begin(double, double) override {}
  double coefficient(std::size_t, double t) override { return g_(t); }
  double cell_l1(std::size_t, double t0, double t1) override {
    const auto r = detail::gk15([&](double s) { return std::fabs(weight(s) * g_(s)); }, t0, t1);
    if (r.error > 1e-3 * std::max(r.value, 1e-300) && r.error > tol_ * (t1 - t0)) {
      return integrate_finite([&](double s) { return std::fabs(weight(s) * g_(s)); }, t0, t1, tol_ * (t1 - t0))
          .value;
    }
    return r.value;
  }
  TailData tail(double t) override {
    TailData d;
    const double tol = 1e-15;
    d.l1 = safe_integral([&](double s) { return std::fabs(weight(s) * g_(s)); }, t, tol);
    d.integral = safe_integral([&](double s) { return weight(s) * g_(s); }, t, tol);
    const RealFn deriv = dg_ ? dg_ : RealFn([this](double s) {
      const double e = 1e-5 * std::max(1.0, std::fabs(s));
      return (g_(s + e) - g_(s - e)) / (2 * e);
    });
    d.oscillation = 0.5 * (std::fabs(g_(t)) + safe_integral([&](double s) { return std::fabs(deriv(s)); }, t, tol));
    return d;
  }

private:
  double weight(double s) const { return weighted_ ? s : 1.0; }
  static double safe_integral(const RealFn& fn, double t, double tol) {
    try {
      return integrate_to_infinity(fn, t, tol).value;
    } catch (const DivergenceError&) {
      throw;
    } catch (const QuadratureError&) {
      // Requested accuracy below roundoff: accept a looser estimate.
      return integrate_to_infinity(fn, t, 1e-10).value;
    }
  }

  RealFn g_, dg_;
  bool weighted_;
  double tol_;
};

struct VolterraOptions {
  double step = 0.005;
  // End of the grid; NaN selects the smallest doubling span whose tail
  // correction bound is below 0.1 * tail_tol.
  double x_max = std::numeric_limits<double>::quiet_NaN();
  double tail_tol = 1e-6;
  int max_refinements = 3;
  std::size_t max_points = std::size_t{1} << 21;
  double initial_span = 16.0;
  // Repeat the march at step/2 on the same grid end and combine the two
  // runs as (4 fine - coarse) / 3.
  bool extrapolate = false;
};

enum class VolterraKind { Exponential, Oscillatory, Algebraic };

struct VolterraSolution {
  VolterraKind kind = VolterraKind::Exponential;
  Zeta zeta = Zeta::PlusOne;
  double a = 0.0;
  double step = 0.0;
  std::vector<Complex> z;
  std::vector<Complex> dz;
  std::vector<double> g;
  std::vector<double> envelope_log;  // int_a^{t_k} |g| (weighted by s for the algebraic form)
  std::vector<double> zg_l1;         // running int_a^{t_k} |g z| (same weighting)
  Complex main_partial{1.0, 0.0};    // connection integral over [a, X]
  Complex secondary_partial{0.0, 0.0};
  Complex moment_partial{0.0, 0.0};  // algebraic form: int_a^X s^2 g z
  TailData tail;
  Complex main{1.0, 0.0};            // with the tail correction
  Complex secondary{0.0, 0.0};
  double main_error = 0.0;           // bound on the tail correction error
  double secondary_error = 0.0;
  int refinements = 0;
  bool extrapolated = false;
  // |fine - coarse| / 3 for extrapolated runs: the discretization error
  // estimate of the step-h/2 result. NaN when no second run was made.
  double main_discretization = std::numeric_limits<double>::quiet_NaN();
  double secondary_discretization = std::numeric_limits<double>::quiet_NaN();

  std::size_t size() const noexcept { return z.size(); }
  double t(std::size_t k) const noexcept { return a + static_cast<double>(k) * step; }
  double x_max() const noexcept { return t(z.size() - 1); }
  Complex z_infinity() const noexcept { return main; }
  double running_l1_zg() const noexcept { return zg_l1.empty() ? 0.0 : zg_l1.back(); }
  double g_l1() const noexcept { return (envelope_log.empty() ? 0.0 : envelope_log.back()) + tail.l1; }

  // Cubic Hermite interpolation on the grid; beyond X the asymptotic form
  // of z is used.
  Complex z_at(double t) const { return eval(t, false); }
  Complex dz_at(double t) const { return eval(t, true); }

private:
  Complex eval(double t, bool derivative) const {
    if (t >= x_max()) {
      switch (kind) {
        case VolterraKind::Exponential: return derivative ? Complex{} : main;
        case VolterraKind::Oscillatory: {
          const Complex c = 2.0 * zeta_value(zeta);
          const Complex e = std::exp(-c * t);
          return derivative ? -c * secondary * e : main + secondary * e;
        }
        case VolterraKind::Algebraic:
          return derivative ? moment_partial / (t * t) : main - moment_partial / t;
      }
    }
    if (t <= a) return derivative ? dz.front() : z.front();
    const double pos = (t - a) / step;
    std::size_t k = static_cast<std::size_t>(pos);
    if (k + 1 >= z.size()) k = z.size() - 2;
    const double s = pos - static_cast<double>(k);
    const double h = step;
    const Complex p0 = z[k], p1 = z[k + 1], m0 = dz[k] * h, m1 = dz[k + 1] * h;
    if (!derivative) {
      const double s2 = s * s, s3 = s2 * s;
      return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * p1 + (s3 - s2) * m1;
    }
    const double s2 = s * s;
    return ((6 * s2 - 6 * s) * p0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * p1 + (3 * s2 - 2 * s) * m1) / h;
  }
};

struct OscillatoryCoeffs {
  Complex xi1, xi2, eta1, eta2;
  Complex determinant() const { return xi1 * eta2 - xi2 * eta1; }
};

namespace detail {

// (1 - e^{-u}(1 + u)) / u^2, with the Taylor series near 0.
template <typename T>
T phi2(T u) {
  if (std::abs(u) < 0.1) {
    // sum_{k>=2} (-1)^k (k-1)/k! u^{k-2}
    T sum = 0, power = 1;
    double fact = 2.0;
    for (int k = 2; k < 16; ++k) {
      if (k > 2) fact *= k;
      sum += ((k % 2 == 0) ? 1.0 : -1.0) * (k - 1) / fact * power;
      power *= u;
    }
    return sum;
  }
  return (T(1) - std::exp(-u) * (T(1) + u)) / (u * u);
}

// -expm1(-u)/u
template <typename T>
T phi1(T u) {
  if constexpr (std::is_same_v<T, double>) {
    return std::fabs(u) < 1e-300 ? 1.0 : -std::expm1(-u) / u;
  } else {
    if (std::abs(u) < 0.1) {
      T sum = 0, power = 1;
      double fact = 1.0;
      for (int k = 1; k < 16; ++k) {
        fact *= k;
        sum += ((k % 2 == 1) ? 1.0 : -1.0) / fact * power;
        power *= u;
      }
      return sum;
    }
    return (T(1) - std::exp(-u)) / u;
  }
}

inline double tail_bound(const VolterraSolution& s, bool secondary) {
  const double eL = std::exp(s.g_l1());
  const double T = s.tail.l1;
  const double dzX = std::abs(s.dz.back());
  switch (s.kind) {
    case VolterraKind::Exponential:
      return 0.5 * T * (0.5 * dzX + 0.5 * eL * T);
    case VolterraKind::Oscillatory:
      if (secondary) return 0.5 * (std::abs(s.main_partial) * s.tail.oscillation + eL * T * T);
      return 0.5 * (dzX * s.tail.oscillation + eL * T * T);
    case VolterraKind::Algebraic:
      return eL * T * (dzX * s.x_max() + eL * T);
  }
  return 0.0;
}

inline void complete_tail(VolterraSolution& s, VolterraSource& source) {
  s.tail = source.tail(s.x_max());
  const Complex zeta = zeta_value(s.zeta);
  const Complex zX = s.z.back();
  switch (s.kind) {
    case VolterraKind::Exponential:
      s.main = s.main_partial + zX * s.tail.integral / (2.0 * zeta);
      break;
    case VolterraKind::Oscillatory:
      s.main = s.main_partial + s.main_partial * s.tail.integral / (2.0 * zeta);
      s.secondary = s.secondary_partial - s.secondary_partial * s.tail.integral / (2.0 * zeta);
      break;
    case VolterraKind::Algebraic:
      s.main = s.main_partial + zX * s.tail.integral;
      break;
  }
  s.main_error = tail_bound(s, false);
  s.secondary_error = s.kind == VolterraKind::Oscillatory ? tail_bound(s, true) : 0.0;
}

// Marching state for the exponential kernel.
template <typename T>
class KernelMarch {
public:
  KernelMarch(Zeta zeta, double h) : zeta_(to_scalar(zeta_value(zeta))), h_(h) {
    const T c = T(2) * zeta_;
    decay_ = std::exp(-c * h);
    const T E0 = h * phi1<T>(c * h);
    beta_ = h * phi2<T>(c * h);
    alpha_ = E0 - beta_;
    half_inv_zeta_ = T(1) / (T(2) * zeta_);
  }

  // Advance from (z_{n-1}, phi_{n-1}) to node n with coefficient g_n.
  T step(T phi_prev, double g_n) {
    const T i1_known = I1_ + 0.5 * h_ * phi_prev;
    const T i2_known = decay_ * I2_ + beta_ * phi_prev;
    const T coeff = half_inv_zeta_ * (0.5 * h_ - alpha_) * g_n;
    const T z = (T(1) + half_inv_zeta_ * (i1_known - i2_known)) / (T(1) - coeff);
    const T phi = g_n * z;
    I1_ = i1_known + 0.5 * h_ * phi;
    I2_ = i2_known + alpha_ * phi;
    return z;
  }

  T I1() const { return I1_; }
  T I2() const { return I2_; }
  T half_inv_zeta() const { return half_inv_zeta_; }

private:
  static T to_scalar(Complex c) {
    if constexpr (std::is_same_v<T, double>) {
      return c.real();
    } else {
      return c;
    }
  }
  T zeta_;
  double h_;
  T decay_, alpha_, beta_, half_inv_zeta_;
  T I1_ = 0, I2_ = 0;
};

// Run one march with fixed step; returns false on a Gronwall violation.
template <typename T>
bool march_kernel(VolterraSolution& s, VolterraSource& source, const VolterraOptions& opt, std::string& why) {
  const double h = s.step;
  source.begin(s.a, h);
  KernelMarch<T> m(s.zeta, h);
  s.z.assign(1, Complex(1.0));
  s.dz.assign(1, Complex(0.0));
  s.g.assign(1, source.coefficient(0, s.a));
  s.envelope_log.assign(1, 0.0);
  s.zg_l1.assign(1, 0.0);
  T phi_prev = T(s.g[0]);
  const bool auto_end = std::isnan(opt.x_max);
  double target = auto_end ? s.a + opt.initial_span : opt.x_max;
  if (!auto_end && !(opt.x_max > s.a)) throw Error("x_max must exceed the cutoff");
  for (std::size_t k = 1;; ++k) {
    const double t = s.t(k);
    const double gk = source.coefficient(k, t);
    if (!std::isfinite(gk)) throw QuadratureError("non-finite coefficient at t=" + format_number(t));
    const T z = m.step(phi_prev, gk);
    const T phi = gk * z;
    const double L = s.envelope_log.back() + source.cell_l1(k, s.t(k - 1), t);
    s.z.push_back(Complex(z));
    s.dz.push_back(Complex(m.I2()));
    s.g.push_back(gk);
    s.envelope_log.push_back(L);
    s.zg_l1.push_back(s.zg_l1.back() + 0.5 * h * (std::abs(phi_prev) + std::abs(phi)));
    if (!(std::abs(z) <= std::exp(L) * (1.0 + 1e-14))) {
      why = "|z| = " + format_number(std::abs(z)) + " exceeds exp(int|g|) = " + format_number(std::exp(L)) +
            " at t=" + format_number(t);
      return false;
    }
    phi_prev = phi;
    if (t >= target - 0.5 * h) {
      const T hz = m.half_inv_zeta();
      s.main_partial = Complex(T(1) + hz * m.I1());
      s.secondary_partial = Complex(0.0);
      if (s.kind == VolterraKind::Oscillatory) {
        const Complex zeta = zeta_value(s.zeta);
        s.secondary_partial = -Complex(hz) * std::exp(2.0 * zeta * t) * Complex(m.I2());
      }
      complete_tail(s, source);
      if (!auto_end) return true;
      const double bound = std::max(s.main_error, s.secondary_error);
      if (bound <= 0.1 * opt.tail_tol) return true;
      if (s.z.size() * 2 > opt.max_points) return true;  // best effort; caller checks tail_tol
      target = s.a + 2 * (target - s.a);
    }
    if (s.z.size() > opt.max_points) throw Error("Volterra grid exceeds the point budget");
  }
}

inline bool march_algebraic(VolterraSolution& s, VolterraSource& source, const VolterraOptions& opt,
                            std::string& why) {
  const double h = s.step;
  source.begin(s.a, h);
  s.z.assign(1, Complex(1.0));
  s.dz.assign(1, Complex(0.0));
  s.g.assign(1, source.coefficient(0, s.a));
  s.envelope_log.assign(1, 0.0);
  s.zg_l1.assign(1, 0.0);
  double A = 0, B = 0;
  double phi_prev = s.g[0];
  const bool auto_end = std::isnan(opt.x_max);
  double target = auto_end ? s.a + opt.initial_span : opt.x_max;
  if (!auto_end && !(opt.x_max > s.a)) throw Error("x_max must exceed the cutoff");
  for (std::size_t k = 1;; ++k) {
    const double p = s.t(k - 1);
    const double x = s.t(k);
    const double gk = source.coefficient(k, x);
    if (!std::isfinite(gk)) throw QuadratureError("non-finite coefficient at t=" + format_number(x));
    const double w0A = p * h / 2 + h * h / 6, w1A = p * h / 2 + h * h / 3;
    const double w0B = p * p * h / 2 + p * h * h / 3 + h * h * h / 12;
    const double w1B = p * p * h / 2 + 2 * p * h * h / 3 + h * h * h / 4;
    const double Ak = A + w0A * phi_prev, Bk = B + w0B * phi_prev;
    const double z = (1 + Ak - Bk / x) / (1 - gk * (w1A - w1B / x));
    const double phi = gk * z;
    A = Ak + w1A * phi;
    B = Bk + w1B * phi;
    const double L = s.envelope_log.back() + source.cell_l1(k, p, x);
    s.z.push_back(z);
    s.dz.push_back(B / (x * x));
    s.g.push_back(gk);
    s.envelope_log.push_back(L);
    s.zg_l1.push_back(s.zg_l1.back() + 0.5 * h * (std::fabs(p * phi_prev) + std::fabs(x * phi)));
    if (!(std::fabs(z) <= std::exp(L) * (1.0 + 1e-14))) {
      why = "|z| = " + format_number(std::fabs(z)) + " exceeds exp(int s|g|) = " + format_number(std::exp(L)) +
            " at t=" + format_number(x);
      return false;
    }
    phi_prev = phi;
    if (x >= target - 0.5 * h) {
      s.main_partial = 1 + A;
      s.moment_partial = B;
      complete_tail(s, source);
      if (!auto_end) return true;
      if (s.main_error <= 0.1 * opt.tail_tol) return true;
      if (s.z.size() * 2 > opt.max_points) return true;
      target = s.a + 2 * (target - s.a);
    }
    if (s.z.size() > opt.max_points) throw Error("Volterra grid exceeds the point budget");
  }
}

inline VolterraSolution run_solver(VolterraKind kind, Zeta zeta, VolterraSource& source, double a,
                                   const VolterraOptions& opt);

inline VolterraSolution extrapolate(VolterraSolution coarse, VolterraSource& source, const VolterraOptions& opt) {
  VolterraOptions fine_opt = opt;
  fine_opt.extrapolate = false;
  fine_opt.step = 0.5 * coarse.step;
  fine_opt.x_max = coarse.x_max();
  fine_opt.max_refinements = 0;
  fine_opt.max_points = std::max(opt.max_points, 2 * coarse.size() + 2);
  VolterraSolution fine = run_solver(coarse.kind, coarse.zeta, source, coarse.a, fine_opt);
  if (fine.size() != 2 * coarse.size() - 1) return fine;
  auto mix = [](Complex f, Complex c) { return (4.0 * f - c) / 3.0; };
  VolterraSolution out = coarse;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.z[k] = mix(fine.z[2 * k], coarse.z[k]);
    out.dz[k] = mix(fine.dz[2 * k], coarse.dz[k]);
    out.zg_l1[k] = fine.zg_l1[2 * k];
    if (!(std::abs(out.z[k]) <= std::exp(out.envelope_log[k]) * (1.0 + 1e-14))) return fine;
  }
  out.main_partial = mix(fine.main_partial, coarse.main_partial);
  out.secondary_partial = mix(fine.secondary_partial, coarse.secondary_partial);
  out.moment_partial = mix(fine.moment_partial, coarse.moment_partial);
  out.main = mix(fine.main, coarse.main);
  out.secondary = mix(fine.secondary, coarse.secondary);
  out.main_discretization = std::abs(fine.main - coarse.main) / 3.0;
  out.secondary_discretization = std::abs(fine.secondary - coarse.secondary) / 3.0;
  out.main_error = std::max(fine.main_error, coarse.main_error);
  out.secondary_error = std::max(fine.secondary_error, coarse.secondary_error);
  out.extrapolated = true;
  return out;
}

inline VolterraSolution run_solver(VolterraKind kind, Zeta zeta, VolterraSource& source, double a,
                                   const VolterraOptions& opt) {
  if (!(opt.step > 0)) throw Error("Volterra step must be positive");
  VolterraSolution s;
  s.kind = kind;
  s.zeta = zeta;
  s.a = a;
  s.step = opt.step;
  std::string why;
  for (int attempt = 0; attempt <= opt.max_refinements; ++attempt) {
    s.refinements = attempt;
    bool ok = false;
    if (kind == VolterraKind::Algebraic) {
      ok = march_algebraic(s, source, opt, why);
    } else if (kind == VolterraKind::Exponential) {
      ok = march_kernel<double>(s, source, opt, why);
    } else {
      ok = march_kernel<Complex>(s, source, opt, why);
    }
    if (ok) {
      const double bound = std::max(s.main_error, s.secondary_error);
      if (bound > opt.tail_tol) {
        throw TailToleranceError("tail correction bound " + format_number(bound) + " exceeds tail tolerance " +
                                 format_number(opt.tail_tol) + " at X=" + format_number(s.x_max()));
      }
      if (opt.extrapolate) return extrapolate(std::move(s), source, opt);
      return s;
    }
    s.step *= 0.5;
  }
  throw GronwallViolation("Gronwall envelope violated after " + std::to_string(opt.max_refinements) +
                          " refinements: " + why);
}

}  // namespace detail

inline VolterraSolution solve_exponential(VolterraSource& source, double a, const VolterraOptions& opt = {}) {
  return detail::run_solver(VolterraKind::Exponential, Zeta::PlusOne, source, a, opt);
}

inline VolterraSolution solve_exponential(const RealFn& g, double a, double x_max, double h) {
  FunctionSource src(g);
  VolterraOptions opt;
  opt.step = h;
  opt.x_max = x_max;
  return solve_exponential(src, a, opt);
}

struct OscillatoryPair {
  VolterraSolution plus;   // zeta = i
  VolterraSolution minus;  // zeta = -i
  OscillatoryCoeffs coeffs;
};

inline VolterraSolution solve_oscillatory(VolterraSource& source, double a, Zeta zeta,
                                          const VolterraOptions& opt = {}) {
  if (zeta == Zeta::PlusOne) throw Error("oscillatory solver needs zeta = +i or -i");
  return detail::run_solver(VolterraKind::Oscillatory, zeta, source, a, opt);
}

// Both runs and the coefficients
//   e^{it} z_plus  ~ xi1 e^{it} + xi2 e^{-it},  e^{-it} z_minus ~ eta1 e^{it} + eta2 e^{-it}.
inline OscillatoryPair solve_oscillatory(VolterraSource& source, double a, const VolterraOptions& opt = {}) {
  OscillatoryPair out;
  out.plus = solve_oscillatory(source, a, Zeta::PlusI, opt);
  VolterraOptions second = opt;
  second.x_max = out.plus.x_max();
  second.step = out.plus.step;
  out.minus = solve_oscillatory(source, a, Zeta::MinusI, second);
  out.coeffs = {out.plus.main, out.plus.secondary, out.minus.secondary, out.minus.main};
  return out;
}

inline OscillatoryPair solve_oscillatory(const RealFn& g, double a, double x_max, double h) {
  FunctionSource src(g);
  VolterraOptions opt;
  opt.step = h;
  opt.x_max = x_max;
  return solve_oscillatory(src, a, opt);
}

// z = u / x for u'' = g u with u(a) = a, u'(a) = 1.
inline VolterraSolution solve_algebraic(VolterraSource& source, double a, const VolterraOptions& opt = {}) {
  return detail::run_solver(VolterraKind::Algebraic, Zeta::PlusOne, source, a, opt);
}

inline VolterraSolution solve_algebraic(const RealFn& g, double a, double x_max, double h) {
  FunctionSource src(g, {}, true);
  VolterraOptions opt;
  opt.step = h;
  opt.x_max = x_max;
  return solve_algebraic(src, a, opt);
}

// The tail-completed connection constant; throws when its error bound
// exceeds tail_tol.
inline Complex connection_constant(const VolterraSolution& sol, double tail_tol) {
  if (sol.main_error > tail_tol) {
    throw TailToleranceError("tail bound " + format_number(sol.main_error) + " exceeds " + format_number(tail_tol));
  }
  return sol.main;
}

// ---------------------------------------------------------------------------
// Second solutions
// ---------------------------------------------------------------------------

struct ValueDerivative {
  double value = 0.0;
  double derivative = 0.0;
};

using SolutionFn = std::function<ValueDerivative(double)>;

// u2 = c u1 int_x^inf u1^{-2}, with c = 1 for the algebraic regime and 2
// otherwise. The integral is evaluated in the scaled form
// int_x^inf (u1(x)/u1(s))^2 ds.
inline ValueDerivative second_solution(const SolutionFn& u1, double x, Regime regime, double tol = 1e-13) {
  const double factor = regime == Regime::AlgebraicInfinity ? 1.0 : 2.0;
  const ValueDerivative at = u1(x);
  if (at.value == 0.0) throw DomainError("u1 vanishes at x=" + format_number(x));
  // Slowly varying solutions change on the scale of x itself, so the tail
  // is integrated in sigma with s = x + L sigma.
  const double L = std::max(1.0, std::fabs(x));
  const double scaled = L * integrate_to_infinity(
                            [&](double sigma) {
                              const double s = x + L * sigma;
                              const double v = u1(s).value;
                              if (v == 0.0) throw DomainError("u1 vanishes on the tail at s=" + format_number(s));
                              const double r = at.value / v;
                              return r * r;
                            },
                            0.0, tol)
                            .value;
  return {factor * scaled / at.value, factor * (at.derivative * scaled / (at.value * at.value) - 1.0 / at.value)};
}

// Recessive partner of the dominant Volterra solution w1 = e^t z:
//   w2 = 2 z_inf z e^{-t} J,  J(t) = e^{2t} int_t^inf e^{-2r} z^{-2} dr,
// normalized so that e^{t} w2 -> 1 and W(w1 / z_inf, w2) = -2.
class RecessiveSolution {
public:
  explicit RecessiveSolution(const VolterraSolution& sol) : sol_(&sol) {
    if (sol.kind != VolterraKind::Exponential) throw Error("recessive solution needs the exponential kernel");
    const std::size_t n = sol.size();
    zinf_ = sol.main.real();
    J_.assign(n, 0.0);
    J_[n - 1] = 0.5 / (zinf_ * zinf_);
    const double h = sol.step;
    const double decay = std::exp(-2 * h);
    for (std::size_t k = n - 1; k-- > 0;) J_[k] = decay * J_[k + 1] + cell(sol.t(k), h);
  }

  double z_infinity() const { return zinf_; }

  // (w2, dw2/dt)
  std::pair<double, double> eval(double t) const {
    const auto [w, dw] = eval_scaled(t);
    const double e = std::exp(-t);
    return {w * e, dw * e};
  }

  // e^{t} (w2, dw2/dt), finite for large t.
  std::pair<double, double> eval_scaled(double t) const {
    const VolterraSolution& s = *sol_;
    double J;
    if (t >= s.x_max()) {
      J = 0.5 / (zinf_ * zinf_);
    } else {
      if (t < s.a) throw Error("recessive solution requested before the cutoff");
      const double tt = t;
      std::size_t k = static_cast<std::size_t>((tt - s.a) / s.step);
      if (k + 1 >= J_.size()) k = J_.size() - 2;
      const double right = s.t(k + 1);
      J = std::exp(-2 * (right - tt)) * J_[k + 1] + cell(tt, right - tt);
    }
    const double z = s.z_at(t).real();
    const double dz = s.dz_at(t).real();
    return {2 * zinf_ * z * J, 2 * zinf_ * ((z + dz) * J - 1.0 / z)};
  }

private:
  // int_0^w e^{-2u} z(t0 + u)^{-2} du by 5-point Gauss-Legendre.
  double cell(double t0, double w) const {
    static constexpr std::array<double, 5> nodes = {-0.906179845938663992797626878299392,
                                                    -0.538469310105683091036314420700208, 0.0,
                                                    0.538469310105683091036314420700208,
                                                    0.906179845938663992797626878299392};
    static constexpr std::array<double, 5> weights = {0.236926885056189087514264040719917,
                                                      0.478628670499366468041291514835638,
                                                      0.568888888888888888888888888888889,
                                                      0.478628670499366468041291514835638,
                                                      0.236926885056189087514264040719917};
    if (w <= 0) return 0.0;
    double sum = 0;
    for (int j = 0; j < 5; ++j) {
      const double u = 0.5 * w * (nodes[j] + 1);
      const double z = sol_->z_at(t0 + u).real();
      sum += weights[j] * std::exp(-2 * u) / (z * z);
    }
    return 0.5 * w * sum;
  }

  const VolterraSolution* sol_;
  double zinf_ = 1.0;
  std::vector<double> J_;
};

}  // namespace lgasym
