#pragma once

// Independent reference values: an adaptive Dormand-Prince 5(4) integrator
// for u'' = V u with dense output, Bessel closed forms and ascending series,
// the heat-kernel representation of the resolvent kernel of lambda - Laplacian,
// and fitters for asymptotic constants.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "lgasym/errors.hpp"
#include "lgasym/expr.hpp"
#include "lgasym/quadrature.hpp"
#include "lgasym/transform.hpp"

namespace lgasym {

// ---------------------------------------------------------------------------
// Initial value problems
// ---------------------------------------------------------------------------

struct OdeTrajectory {
  std::vector<double> x, u, du;
  int order = 5;
  double tolerance = 0.0;
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

struct IvpOptions {
  std::size_t max_steps = 5'000'000;
  double initial_step = 0.0;  // 0 picks a step from the data
};

namespace detail {

struct DP5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
};

using State = std::array<double, 2>;

}  // namespace detail

// Integrates u'' = V(x) u from x0 to x1 (either direction) with local error
// per step <= tol (mixed absolute/relative), and returns dense-output samples
// at `samples` (which must lie between x0 and x1) plus the end point.
inline OdeTrajectory integrate_ivp(const RealFn& V, double x0, double u0, double du0, double x1, double tol,
                                   std::vector<double> samples = {}, const IvpOptions& options = {}) {
  using detail::DP5;
  using detail::State;
  if (!(tol > 0)) throw OracleError("tolerance must be positive");
  OdeTrajectory out;
  out.tolerance = tol;
  const double dir = x1 >= x0 ? 1.0 : -1.0;
  std::sort(samples.begin(), samples.end(), [dir](double a, double b) { return dir * a < dir * b; });
  for (double s : samples) {
    if (dir * (s - x0) < 0 || dir * (s - x1) > 0) throw OracleError("sample outside the integration range");
  }
  auto rhs = [&](double x, const State& y) {
    const double v = V(x);
    if (!std::isfinite(v)) throw OracleError("non-finite coefficient at x=" + format_number(x));
    return State{y[1], v * y[0]};
  };
  auto emit = [&](double x, const State& y) {
    if (!out.x.empty() && dir * (x - out.x.back()) <= 0) return;
    out.x.push_back(x);
    out.u.push_back(y[0]);
    out.du.push_back(y[1]);
  };
  std::size_t next = 0;
  State y{u0, du0};
  double x = x0;
  while (next < samples.size() && samples[next] == x0) {
    emit(x0, y);
    ++next;
  }
  if (x0 == x1) {
    emit(x0, y);
    return out;
  }
  // The equation is linear, so the absolute floor follows the size of the data.
  const double floor = std::max(std::fabs(u0), std::fabs(du0)) > 0 ? std::max(std::fabs(u0), std::fabs(du0)) : 1.0;
  State k1 = rhs(x, y);
  double h = options.initial_step > 0 ? options.initial_step : std::min(std::fabs(x1 - x0), 1e-2);
  h *= dir;
  const double safety = 0.9, fac_min = 0.2, fac_max = 10.0, beta = 0.04;
  double err_old = 1e-4;
  bool last_rejected = false;
  while (dir * (x1 - x) > 0) {
    if (out.steps + out.rejected > options.max_steps) throw OracleError("step budget exceeded");
    if (std::fabs(h) < 1e-14 * std::max(1.0, std::fabs(x))) {
      throw OracleError("step size underflow near x=" + format_number(x));
    }
    if (dir * (x + h - x1) > 0) h = x1 - x;
    State y2{y[0] + h * DP5::a21 * k1[0], y[1] + h * DP5::a21 * k1[1]};
    State k2 = rhs(x + DP5::c2 * h, y2);
    State y3;
    for (int i = 0; i < 2; ++i) y3[i] = y[i] + h * (DP5::a31 * k1[i] + DP5::a32 * k2[i]);
    State k3 = rhs(x + DP5::c3 * h, y3);
    State y4;
    for (int i = 0; i < 2; ++i) y4[i] = y[i] + h * (DP5::a41 * k1[i] + DP5::a42 * k2[i] + DP5::a43 * k3[i]);
    State k4 = rhs(x + DP5::c4 * h, y4);
    State y5;
    for (int i = 0; i < 2; ++i)
      y5[i] = y[i] + h * (DP5::a51 * k1[i] + DP5::a52 * k2[i] + DP5::a53 * k3[i] + DP5::a54 * k4[i]);
    State k5 = rhs(x + DP5::c5 * h, y5);
    State y6;
    for (int i = 0; i < 2; ++i)
      y6[i] = y[i] + h * (DP5::a61 * k1[i] + DP5::a62 * k2[i] + DP5::a63 * k3[i] + DP5::a64 * k4[i] +
                          DP5::a65 * k5[i]);
    State k6 = rhs(x + h, y6);
    State ynew;
    for (int i = 0; i < 2; ++i)
      ynew[i] = y[i] + h * (DP5::a71 * k1[i] + DP5::a73 * k3[i] + DP5::a74 * k4[i] + DP5::a75 * k5[i] +
                            DP5::a76 * k6[i]);
    State k7 = rhs(x + h, ynew);
    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double e = h * (DP5::e1 * k1[i] + DP5::e3 * k3[i] + DP5::e4 * k4[i] + DP5::e5 * k5[i] +
                            DP5::e6 * k6[i] + DP5::e7 * k7[i]);
      const double sc = tol * (floor + std::max(std::fabs(y[i]), std::fabs(ynew[i])));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / 2);
    if (err <= 1.0) {
      // Dense output on [x, x+h].
      while (next < samples.size() && dir * (samples[next] - (x + h)) <= 0) {
        const double theta = (samples[next] - x) / h;
        const double th1 = 1 - theta;
        State ys;
        for (int i = 0; i < 2; ++i) {
          const double r1 = y[i];
          const double ydiff = ynew[i] - y[i];
          const double bspl = h * k1[i] - ydiff;
          const double r4 = ydiff - h * k7[i] - bspl;
          const double r5 = h * (DP5::d1 * k1[i] + DP5::d3 * k3[i] + DP5::d4 * k4[i] + DP5::d5 * k5[i] +
                                 DP5::d6 * k6[i] + DP5::d7 * k7[i]);
          ys[i] = r1 + theta * (ydiff + th1 * (bspl + theta * (r4 + th1 * r5)));
        }
        emit(samples[next], ys);
        ++next;
      }
      x += h;
      y = ynew;
      k1 = k7;
      ++out.steps;
      const double e = std::max(err, 1e-10);
      double fac = safety * std::pow(e, -0.2 + 0.75 * beta) * std::pow(err_old, beta);
      fac = std::clamp(fac, fac_min, fac_max);
      if (last_rejected) fac = std::min(fac, 1.0);
      err_old = e;
      last_rejected = false;
      h *= fac;
    } else {
      ++out.rejected;
      last_rejected = true;
      h *= std::max(fac_min, safety * std::pow(err, -0.2));
    }
  }
  emit(x1, y);
  return out;
}

// ---------------------------------------------------------------------------
// Bessel functions
// ---------------------------------------------------------------------------

enum class BesselKind { I, K, J, Y, Resolvent };

inline const char* to_string(BesselKind k) {
  switch (k) {
    case BesselKind::I: return "I";
    case BesselKind::K: return "K";
    case BesselKind::J: return "J";
    case BesselKind::Y: return "Y";
    case BesselKind::Resolvent: return "resolvent";
  }
  return "";
}

// I_{1/2} and K_{1/2}; `scaled` returns e^{-r} I or e^{r} K.
inline double closed_form_half(BesselKind kind, double r, bool scaled = false) {
  if (!(r > 0)) throw DomainError("closed_form_half needs r > 0");
  constexpr double pi = std::numbers::pi;
  switch (kind) {
    case BesselKind::I:
      if (scaled) return std::sqrt(2 / (pi * r)) * 0.5 * (-std::expm1(-2 * r));
      return std::sqrt(2 / (pi * r)) * std::sinh(r);
    case BesselKind::K:
      return std::sqrt(pi / (2 * r)) * (scaled ? 1.0 : std::exp(-r));
    default:
      throw DomainError("closed form exists for I and K only");
  }
}

struct SeriesValue {
  double value = 0.0;
  double derivative = 0.0;
  double bound = 0.0;  // bound on the truncation error of `value`
  double leading = 0.0;  // (1/2)^nu / Gamma(nu + 1)
};

// Ascending series sum_k s^k (r/2)^{2k+nu} / (k! Gamma(k+nu+1)), with s = +1
// for I and -1 for J. Terms decrease geometrically once k > r^2/4, and the
// remainder is bounded by the first omitted term over (1 - ratio).
inline SeriesValue bessel_series(BesselKind kind, double nu, double r, int terms = 60) {
  if (kind != BesselKind::I && kind != BesselKind::J) throw DomainError("ascending series is for I and J");
  if (!(r > 0)) throw DomainError("series needs r > 0");
  const double sign = kind == BesselKind::I ? 1.0 : -1.0;
  const double q = 0.25 * r * r;
  double term = std::exp(nu * std::log(0.5 * r) - std::lgamma(nu + 1));
  SeriesValue out;
  out.leading = std::exp(-nu * std::log(2.0) - std::lgamma(nu + 1));
  double sum = 0, dsum = 0;
  int k = 0;
  for (; k < terms; ++k) {
    sum += term;
    dsum += term * (2 * k + nu) / r;
    term *= sign * q / ((k + 1) * (k + 1 + nu));
  }
  const double ratio = q / ((k + 1) * (k + 1 + nu));
  out.value = sum;
  out.derivative = dsum;
  out.bound = ratio < 1 ? std::fabs(term) / (1 - ratio) : kInfinity;
  return out;
}

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Y_0 and K_0 through their logarithmic ascending series.
inline SeriesValue bessel_log_series(BesselKind kind, double r, int terms = 60) {
  if (kind != BesselKind::Y && kind != BesselKind::K) throw DomainError("log series is for Y_0 and K_0");
  if (!(r > 0)) throw DomainError("series needs r > 0");
  const double sign = kind == BesselKind::K ? 1.0 : -1.0;
  const double q = 0.25 * r * r;
  const SeriesValue base = bessel_series(kind == BesselKind::K ? BesselKind::I : BesselKind::J, 0.0, r, terms);
  const double lg = std::log(0.5 * r) + kEulerGamma;
  double term = 1.0, H = 0.0, sum = 0.0, dsum = 0.0;
  int k = 1;
  for (; k < terms; ++k) {
    term *= sign * q / (static_cast<double>(k) * k);
    H += 1.0 / k;
    sum += H * term;
    dsum += H * term * 2 * k / r;
  }
  SeriesValue out;
  constexpr double pi = std::numbers::pi;
  if (kind == BesselKind::K) {
    out.value = -lg * base.value + sum;
    out.derivative = -base.value / r - lg * base.derivative + dsum;
  } else {
    out.value = (2 / pi) * (lg * base.value - sum);
    out.derivative = (2 / pi) * (base.value / r + lg * base.derivative - dsum);
  }
  const double ratio = q / ((double)k * k);
  out.bound = base.bound * (std::fabs(lg) + 2) + (ratio < 1 ? std::fabs(term) * (H + 1) / (1 - ratio) : kInfinity);
  out.leading = 1.0;
  return out;
}

// Resolvent kernel of (lambda - Laplacian) in R^n through the heat kernel,
//   v(r) = int_0^inf (4 pi t)^{-n/2} e^{-r^2/(4t) - lambda t} dt
//        = pi^{-n/2} r^{2-n} (1/4) int_0^inf 2 s^{n-3} e^{-s^2 - lambda r^2/(4 s^2)} ds.
inline double resolvent_kernel(int n, double lambda, double r, double tol = 1e-14) {
  if (n < 3 && lambda == 0) throw DomainError("resolvent at lambda = 0 needs n >= 3");
  if (!(r > 0)) throw DomainError("resolvent needs r > 0");
  const double c = lambda * r * r / 4;
  const double rc = std::sqrt(std::max(c, 0.0));
  // s^2 + c/s^2 = (s - sqrt(c)/s)^2 + 2 sqrt(c); the constant factor is applied at the end.
  auto integrand = [&](double s) {
    if (s == 0) return 0.0;
    const double d = s - rc / s;
    return 2 * std::pow(s, n - 3) * std::exp(-d * d);
  };
  const double peak = std::max(1.0, std::pow(std::max(c, 0.0), 0.25));
  double integral = 0.0;
  if (c > 0) {
    // Split at the peak so the scale of the Gaussian-like bump is resolved.
    integral = integrate_finite(integrand, 0.0, peak, tol).value + integrate_to_infinity(integrand, peak, tol).value;
  } else {
    integral = integrate_to_infinity(integrand, 0.0, tol).value;
  }
  return std::pow(std::numbers::pi, -0.5 * n) * std::pow(r, 2.0 - n) * 0.25 * integral * std::exp(-2 * rc);
}

struct BesselFixture {
  std::string name;
  BesselKind kind = BesselKind::I;
  double nu = 0.0;
  int n = 3;
  double lambda = 0.0;

  bool has_closed_form() const { return (kind == BesselKind::I || kind == BesselKind::K) && nu == 0.5; }

  // Split of the normal form u'' = (f + g) u for sqrt(r) Z_nu(r) (or the
  // radial resolvent equation in normal form).
  std::pair<std::string, std::string> split_text() const {
    const std::string c = format_number(4 * nu * nu - 1);
    switch (kind) {
      case BesselKind::I:
      case BesselKind::K:
        return {"1", "(" + c + ")/(4*x^2)"};
      case BesselKind::J:
      case BesselKind::Y:
        return {"0-1", "(" + c + ")/(4*x^2)"};
      case BesselKind::Resolvent:
        return {format_number(lambda), "(" + format_number((n - 1.0) * (n - 3.0)) + ")/(4*x^2)"};
    }
    return {};
  }

  // Reference value of the underlying special function at r.
  double reference(double r) const {
    switch (kind) {
      case BesselKind::I:
        if (has_closed_form()) return closed_form_half(kind, r);
        return bessel_series(kind, nu, r).value;
      case BesselKind::J:
        return bessel_series(kind, nu, r).value;
      case BesselKind::K:
        if (has_closed_form()) return closed_form_half(kind, r);
        if (nu == 0) return bessel_log_series(kind, r).value;
        break;
      case BesselKind::Y:
        if (nu == 0) return bessel_log_series(kind, r).value;
        break;
      case BesselKind::Resolvent:
        return resolvent_kernel(n, lambda, r);
    }
    throw OracleError("no reference evaluator for fixture " + name);
  }
};

// Fixtures addressable by name, e.g. "modified_bessel:nu=1", "bessel:nu=0",
// "resolvent:n=3,lambda=2".
inline BesselFixture find_fixture(const std::string& name) {
  auto param = [&](const std::string& key) -> std::optional<double> {
    const auto colon = name.find(':');
    if (colon == std::string::npos) return std::nullopt;
    std::size_t pos = colon + 1;
    while (pos < name.size()) {
      std::size_t end = name.find(',', pos);
      if (end == std::string::npos) end = name.size();
      const std::string item = name.substr(pos, end - pos);
      const auto eq = item.find('=');
      if (eq != std::string::npos && item.substr(0, eq) == key) {
        try {
          std::size_t used = 0;
          const std::string v = item.substr(eq + 1);
          const double d = std::stod(v, &used);
          if (used == v.size()) return d;
        } catch (const std::exception&) {
        }
        throw OracleError("malformed fixture parameter in " + name);
      }
      pos = end + 1;
    }
    return std::nullopt;
  };
  const std::string family = name.substr(0, name.find(':'));
  BesselFixture f;
  f.name = name;
  if (family == "modified_bessel" || family == "modified_bessel_k") {
    f.kind = family == "modified_bessel" ? BesselKind::I : BesselKind::K;
    f.nu = param("nu").value_or(0.0);
  } else if (family == "bessel" || family == "bessel_y") {
    f.kind = family == "bessel" ? BesselKind::J : BesselKind::Y;
    f.nu = param("nu").value_or(0.0);
  } else if (family == "resolvent") {
    f.kind = BesselKind::Resolvent;
    f.n = static_cast<int>(param("n").value_or(3.0));
    f.lambda = param("lambda").value_or(0.0);
  } else {
    throw OracleError("unknown fixture " + name);
  }
  if (f.nu < 0) throw OracleError("fixture order must be nonnegative");
  return f;
}

inline std::vector<std::string> fixture_names() {
  return {"modified_bessel:nu=0.5", "modified_bessel_k:nu=0.5", "modified_bessel:nu=1", "bessel:nu=0",
          "bessel_y:nu=0", "resolvent:n=3,lambda=0", "resolvent:n=3,lambda=2"};
}

// ---------------------------------------------------------------------------
// Fits
// ---------------------------------------------------------------------------

enum class FitModel { Ratio, Oscillatory };

struct AsymptoticFit {
  FitModel model = FitModel::Ratio;
  std::string regime;
  Complex c{0.0, 0.0};  // ratio fits: mean of u / model
  double amplitude = 0.0;  // oscillatory fits: u ~ amplitude * A cos(Phi + theta)
  double theta = 0.0;      // in [0, pi)
  double residual = 0.0;   // max relative deviation of the fitted model over the window
  double drift = 0.0;      // relative change of the ratio across the window
  double x_lo = 0.0, x_hi = 0.0;
  std::size_t samples = 0;
};

// c = mean(u / model) over the samples.
inline AsymptoticFit fit_ratio(const std::vector<double>& x, const std::vector<double>& u,
                               const std::vector<double>& model, double drift_tol = kInfinity) {
  if (x.empty() || x.size() != u.size() || u.size() != model.size()) throw FitError("fit needs matching samples");
  AsymptoticFit fit;
  fit.model = FitModel::Ratio;
  fit.x_lo = x.front();
  fit.x_hi = x.back();
  fit.samples = x.size();
  double sum = 0;
  std::vector<double> ratio(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (model[k] == 0 || !std::isfinite(model[k]) || !std::isfinite(u[k])) {
      throw FitError("model vanishes or overflows at x=" + format_number(x[k]));
    }
    ratio[k] = u[k] / model[k];
    sum += ratio[k];
  }
  const double c = sum / static_cast<double>(x.size());
  fit.c = c;
  if (c == 0) throw FitError("fitted constant is zero");
  for (double r : ratio) fit.residual = std::max(fit.residual, std::fabs(r / c - 1));
  fit.drift = std::fabs(ratio.back() - ratio.front()) / std::fabs(c);
  if (fit.drift > drift_tol) {
    throw FitError("ratio drifts by " + format_number(fit.drift) + " across [" + format_number(fit.x_lo) + ", " +
                   format_number(fit.x_hi) + "]: asymptotic regime not reached, use a later window");
  }
  return fit;
}

// u ~ p C + q S by least squares for basis functions C ~ A cos Phi and
// S ~ A sin Phi, reported as amplitude * A cos(Phi + theta) with theta in [0, pi).
inline AsymptoticFit fit_oscillatory_basis(const std::vector<double>& x, const std::vector<double>& u,
                                           const std::vector<double>& cos_basis,
                                           const std::vector<double>& sin_basis) {
  const std::size_t n = x.size();
  if (n < 3 || u.size() != n || cos_basis.size() != n || sin_basis.size() != n) {
    throw FitError("oscillatory fit needs at least 3 matching samples");
  }
  double scc = 0, sss = 0, scs = 0, suc = 0, sus = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double c = cos_basis[k], s = sin_basis[k];
    scc += c * c;
    sss += s * s;
    scs += c * s;
    suc += u[k] * c;
    sus += u[k] * s;
  }
  const double det = scc * sss - scs * scs;
  if (!(std::fabs(det) > 1e-300)) throw FitError("degenerate oscillatory fit window");
  const double p = (suc * sss - sus * scs) / det;
  const double q = (sus * scc - suc * scs) / det;
  // p cos + q sin = R cos(Phi - phi0), phi0 = atan2(q, p).
  double R = std::hypot(p, q);
  double theta = -std::atan2(q, p);
  constexpr double pi = std::numbers::pi;
  while (theta < 0) {
    theta += pi;
    R = -R;
  }
  while (theta >= pi) {
    theta -= pi;
    R = -R;
  }
  AsymptoticFit fit;
  fit.model = FitModel::Oscillatory;
  fit.amplitude = R;
  fit.theta = theta;
  fit.c = Complex(p, q);
  fit.x_lo = x.front();
  fit.x_hi = x.back();
  fit.samples = n;
  double scale = 0;
  for (std::size_t k = 0; k < n; ++k) scale = std::max(scale, std::fabs(R) * std::hypot(cos_basis[k], sin_basis[k]));
  for (std::size_t k = 0; k < n; ++k) {
    const double model = p * cos_basis[k] + q * sin_basis[k];
    fit.residual = std::max(fit.residual, std::fabs(u[k] - model) / scale);
  }
  return fit;
}

// The same fit against the bare model A cos Phi, A sin Phi.
inline AsymptoticFit fit_oscillatory(const std::vector<double>& x, const std::vector<double>& u,
                                     const std::vector<double>& phase, const std::vector<double>& amplitude) {
  if (phase.size() != x.size() || amplitude.size() != x.size()) {
    throw FitError("oscillatory fit needs at least 3 matching samples");
  }
  std::vector<double> c(x.size()), s(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    c[k] = amplitude[k] * std::cos(phase[k]);
    s[k] = amplitude[k] * std::sin(phase[k]);
  }
  return fit_oscillatory_basis(x, u, c, s);
}

// Fits a trajectory against the first approximant of a pair: ratio fits
// for exponential regimes, amplitude/phase fits for oscillatory ones.
inline AsymptoticFit fit_asymptotic_constants(const OdeTrajectory& traj, const ApproximantPair& pair, double x_lo,
                                              double x_hi, double drift_tol = kInfinity) {
  std::vector<double> x, u, model, phase, amp;
  for (std::size_t k = 0; k < traj.x.size(); ++k) {
    if (traj.x[k] < x_lo || traj.x[k] > x_hi) continue;
    x.push_back(traj.x[k]);
    u.push_back(traj.u[k]);
  }
  if (x.size() < 3) throw FitError("trajectory does not cover the fit window");
  const bool oscillatory = pair.first.zeta().imag() != 0;
  for (double xi : x) {
    if (oscillatory) {
      phase.push_back(pair.first.phase()(xi));
      amp.push_back(pair.first.amplitude(xi));
    } else {
      model.push_back(pair.first.value(xi).real());
    }
  }
  AsymptoticFit fit = oscillatory ? fit_oscillatory(x, u, phase, amp) : fit_ratio(x, u, model, drift_tol);
  fit.regime = oscillatory ? "oscillatory" : "exponential";
  return fit;
}

// Samples r_k spaced linearly (or logarithmically) on [lo, hi].
inline std::vector<double> sample_points(double lo, double hi, std::size_t count, bool logarithmic) {
  std::vector<double> pts;
  if (count == 0) return pts;
  if (count == 1) return {lo};
  for (std::size_t k = 0; k < count; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(count - 1);
    pts.push_back(logarithmic ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
  }
  pts.front() = lo;
  pts.back() = hi;
  return pts;
}

}  // namespace lgasym
