#pragma once

// Coefficient splits V = f + g, the perturbation density
//   psi = |f|^{-1/4} (-d^2/dx^2 + g) |f|^{-1/4},
// the Liouville phase, regime classification at 0 or infinity, the
// inversion s = 1/x, and closed-form leading approximants.

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lgasym/errors.hpp"
#include "lgasym/expr.hpp"
#include "lgasym/quadrature.hpp"

namespace lgasym {

using Complex = std::complex<double>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class FSign { Positive, Negative, IdenticallyZero };

inline const char* to_string(FSign s) {
  switch (s) {
    case FSign::Positive: return "positive";
    case FSign::Negative: return "negative";
    case FSign::IdenticallyZero: return "identically_zero";
  }
  return "";
}

struct Interval {
  double left = 0.0;  // 0 means the open endpoint 0+
  double right = kInfinity;
};

enum class EndpointKind { Infinity, Zero };

inline const char* to_string(EndpointKind e) { return e == EndpointKind::Infinity ? "infinity" : "zero"; }

namespace detail {

// 64 log-spaced interior points plus finite positive endpoints.
inline std::vector<double> sign_probe_points(const Interval& iv) {
  const double lo = iv.left > 0 ? iv.left : 1e-6 * (std::isfinite(iv.right) ? std::min(iv.right, 1.0) : 1.0);
  const double hi = std::isfinite(iv.right) ? iv.right : std::max(lo, 1.0) * 1e6;
  std::vector<double> pts;
  constexpr int n = 64;
  const double ratio = std::log(hi / lo);
  for (int k = 0; k < n; ++k) pts.push_back(lo * std::exp(ratio * (k + 0.5) / n));
  pts.push_back(lo);
  pts.push_back(hi);
  return pts;
}

}  // namespace detail

// The pair (f, g) on an interval, with the sign of f verified on a probe grid.
class CoefficientSplit {
public:
  static CoefficientSplit make(Expr f, Expr g, Interval interval) {
    if (!(interval.left >= 0) || !(interval.left < interval.right)) {
      throw Error("interval must satisfy 0 <= left < right");
    }
    CoefficientSplit s;
    s.f_ = std::move(f);
    s.g_ = std::move(g);
    s.interval_ = interval;
    s.sign_ = detect_sign(s.f_, interval);
    return s;
  }

  const Expr& f() const noexcept { return f_; }
  const Expr& g() const noexcept { return g_; }
  Expr potential() const { return f_ + g_; }
  const Interval& interval() const noexcept { return interval_; }
  FSign sign_of_f() const noexcept { return sign_; }
  std::optional<double> constant_f() const { return constant_value(f_); }

private:
  static FSign detect_sign(const Expr& f, const Interval& iv) {
    if (auto c = constant_value(f)) {
      if (*c > 0) return FSign::Positive;
      if (*c < 0) return FSign::Negative;
      return FSign::IdenticallyZero;
    }
    const CompiledExpr fn(f);
    int pos = 0, neg = 0, zero = 0;
    double first_pos = 0, first_neg = 0;
    for (double x : detail::sign_probe_points(iv)) {
      const double v = fn(x);
      if (v > 0) {
        if (pos++ == 0) first_pos = x;
      } else if (v < 0) {
        if (neg++ == 0) first_neg = x;
      } else {
        ++zero;
      }
    }
    if (pos > 0 && neg > 0) {
      throw AmbiguousSign("f changes sign on the interval (f>0 at x=" + format_number(first_pos) +
                          ", f<0 at x=" + format_number(first_neg) + "); turning points are unsupported");
    }
    if (zero > 0 && (pos > 0 || neg > 0)) throw AmbiguousSign("f vanishes inside the interval (turning point)");
    if (pos > 0) return FSign::Positive;
    if (neg > 0) return FSign::Negative;
    return FSign::IdenticallyZero;
  }

  Expr f_, g_;
  Interval interval_;
  FSign sign_ = FSign::Positive;
};

namespace detail {

struct Monomial {
  double coeff;
  double power;
};

// c x^p when e is a product/quotient of constants and powers of x.
inline std::optional<Monomial> as_monomial(const Expr& e) {
  if (auto c = constant_value(e)) return Monomial{*c, 0.0};
  switch (e.op()) {
    case Op::Variable: return Monomial{1.0, 1.0};
    case Op::Pow:
      if (e.lhs().op() == Op::Variable) return Monomial{1.0, e.value()};
      if (auto m = as_monomial(e.lhs())) {
        if (m->coeff > 0) return Monomial{std::pow(m->coeff, e.value()), m->power * e.value()};
      }
      return std::nullopt;
    case Op::Neg:
      if (auto m = as_monomial(e.lhs())) return Monomial{-m->coeff, m->power};
      return std::nullopt;
    case Op::Mul:
    case Op::Div: {
      auto a = as_monomial(e.lhs());
      auto b = as_monomial(e.rhs());
      if (!a || !b) return std::nullopt;
      if (e.op() == Op::Mul) return Monomial{a->coeff * b->coeff, a->power + b->power};
      if (b->coeff == 0) return std::nullopt;
      return Monomial{a->coeff / b->coeff, a->power - b->power};
    }
    default:
      return std::nullopt;
  }
}

inline Expr monomial_expr(double c, double p) {
  if (p == 0) return constant(c);
  return c * pow(variable(), p);
}

// x^p e with powers of x merged into monomial terms.
inline Expr scale_by_power(const Expr& e, double p) {
  if (auto m = as_monomial(e)) return monomial_expr(m->coeff, m->power + p);
  switch (e.op()) {
    case Op::Add: return scale_by_power(e.lhs(), p) + scale_by_power(e.rhs(), p);
    case Op::Sub: return scale_by_power(e.lhs(), p) - scale_by_power(e.rhs(), p);
    case Op::Neg: return -scale_by_power(e.lhs(), p);
    case Op::Mul:
      if (!contains_variable(e.rhs())) return scale_by_power(e.lhs(), p) * e.rhs();
      return e.lhs() * scale_by_power(e.rhs(), p);
    case Op::Div:
      if (auto m = as_monomial(e.rhs())) {
        if (m->coeff != 0) return scale_by_power(e.lhs(), p - m->power) / constant(m->coeff);
      }
      return scale_by_power(e.lhs(), p) / e.rhs();
    default:
      return p == 0 ? e : pow(variable(), p) * e;
  }
}

// Replaces every power x^q (including x itself) by power(q).
template <typename PowerMap>
Expr substitute_powers(const Expr& e, const PowerMap& power) {
  switch (e.op()) {
    case Op::Constant: return e;
    case Op::Variable: return power(1.0);
    case Op::Pow:
      if (e.lhs().op() == Op::Variable) return power(e.value());
      return pow(substitute_powers(e.lhs(), power), e.value());
    default:
      break;
  }
  if (e.op() == Op::Add || e.op() == Op::Sub || e.op() == Op::Mul || e.op() == Op::Div) {
    return binary(e.op(), substitute_powers(e.lhs(), power), substitute_powers(e.rhs(), power));
  }
  return unary(e.op(), substitute_powers(e.lhs(), power));
}

inline void flatten_sum(const Expr& e, double sign, std::vector<std::pair<double, Expr>>& terms) {
  switch (e.op()) {
    case Op::Add:
      flatten_sum(e.lhs(), sign, terms);
      flatten_sum(e.rhs(), sign, terms);
      return;
    case Op::Sub:
      flatten_sum(e.lhs(), sign, terms);
      flatten_sum(e.rhs(), -sign, terms);
      return;
    case Op::Neg:
      flatten_sum(e.lhs(), -sign, terms);
      return;
    default:
      terms.emplace_back(sign, e);
  }
}

// Sums the constant terms of an additive expression into one (dropped when 0).
inline Expr collect_constants(const Expr& e) {
  std::vector<std::pair<double, Expr>> terms;
  flatten_sum(e, 1.0, terms);
  double c = 0.0;
  Expr out = constant(0);
  for (const auto& [sign, t] : terms) {
    if (auto v = constant_value(t)) {
      c += sign * *v;
    } else {
      out = sign > 0 ? out + t : out - t;
    }
  }
  return c == 0 ? out : out + constant(c);
}


using Polynomial = std::map<double, std::pair<double, double>>;  // power -> (coefficient, sum of |contributions|)

// Expands sums and products of monomials c x^p into a generalized
// polynomial; nullopt when a non-monomial factor is present.
inline std::optional<Polynomial> expand_monomials(const Expr& e) {
  if (auto m = as_monomial(e)) return Polynomial{{m->power, {m->coeff, std::fabs(m->coeff)}}};
  auto merge = [](Polynomial a, const Polynomial& b, double sign) {
    for (const auto& [p, cv] : b) {
      auto& slot = a[p];
      slot.first += sign * cv.first;
      slot.second += cv.second;
    }
    return a;
  };
  switch (e.op()) {
    case Op::Add:
    case Op::Sub: {
      auto a = expand_monomials(e.lhs());
      if (!a) return std::nullopt;
      auto b = expand_monomials(e.rhs());
      if (!b) return std::nullopt;
      return merge(std::move(*a), *b, e.op() == Op::Add ? 1.0 : -1.0);
    }
    case Op::Neg: {
      auto a = expand_monomials(e.lhs());
      if (!a) return std::nullopt;
      for (auto& [p, cv] : *a) cv.first = -cv.first;
      return a;
    }
    case Op::Mul: {
      auto a = expand_monomials(e.lhs());
      if (!a) return std::nullopt;
      auto b = expand_monomials(e.rhs());
      if (!b) return std::nullopt;
      Polynomial out;
      for (const auto& [p, cp] : *a) {
        for (const auto& [q, cq] : *b) {
          auto& slot = out[p + q];
          slot.first += cp.first * cq.first;
          slot.second += cp.second * cq.second;
        }
      }
      return out;
    }
    case Op::Div: {
      auto d = as_monomial(e.rhs());
      if (!d || d->coeff == 0) return std::nullopt;
      auto a = expand_monomials(e.lhs());
      if (!a) return std::nullopt;
      Polynomial out;
      for (const auto& [p, cp] : *a) out[p - d->power] = {cp.first / d->coeff, cp.second / std::fabs(d->coeff)};
      return out;
    }
    default:
      return std::nullopt;
  }
}

// Rewrites e as a sum of monomials when possible, so that cancelling
// terms cancel exactly; coefficients at the rounding level of their
// contributions are dropped.
inline Expr simplify_monomials(const Expr& e) {
  const auto poly = expand_monomials(e);
  if (!poly) return e;
  Expr out = constant(0);
  bool first = true;
  for (auto it = poly->rbegin(); it != poly->rend(); ++it) {
    const double p = it->first;
    const auto [c, mass] = it->second;
    if (std::fabs(c) <= 64 * std::numeric_limits<double>::epsilon() * mass) continue;
    const Expr term = p == 0 ? constant(std::fabs(c)) : (std::fabs(c) == 1 ? (p == 1 ? variable() : pow(variable(), p))
                                                                             : constant(std::fabs(c)) * (p == 1 ? variable() : pow(variable(), p)));
    if (first) {
      out = c < 0 ? -term : term;
      first = false;
    } else {
      out = c < 0 ? out - term : out + term;
    }
  }
  return out;
}

}  // namespace detail

// |f| as an expression, using the verified sign instead of abs().
inline Expr abs_f_expr(const CoefficientSplit& split) {
  return split.sign_of_f() == FSign::Negative ? -split.f() : split.f();
}

// psi together with the derived forms used by the Volterra pipeline.
struct PsiForms {
  Expr psi;        // psi_{f,g}
  Expr amplitude;  // |f|^{-1/4}
  Expr y_perturbation;     // psi |f|^{-1/2}: the perturbation after the Liouville change
  Expr d_y_perturbation;   // d/dx of the above
};

inline PsiForms psi_forms(const CoefficientSplit& split) {
  if (split.sign_of_f() == FSign::IdenticallyZero) throw DomainError("psi is undefined for f identically zero");
  const Expr af = abs_f_expr(split);
  const Expr amp = pow(af, -0.25);
  const Expr psi = detail::simplify_monomials(split.g() * pow(af, -0.5) - amp * differentiate(amp, 2));
  const Expr pert = detail::simplify_monomials(psi * pow(af, -0.5));
  return {psi, amp, pert, detail::simplify_monomials(differentiate(pert))};
}

struct PsiFunction {
  Expr expr;
  CompiledExpr fn;
  double operator()(double x) const { return fn(x); }
};

// psi_{f,g} built by exact differentiation of |f|^{-1/4}.
inline PsiFunction compute_psi(const CoefficientSplit& split) {
  Expr psi = psi_forms(split).psi;
  return {psi, CompiledExpr(psi)};
}

// Integral of |f|^{1/2} from a to x (negative if x < a).
inline double liouville_phase(const CoefficientSplit& split, double a, double x, double tol = 1e-12) {
  if (split.sign_of_f() == FSign::IdenticallyZero) throw DomainError("Liouville phase needs f nonvanishing");
  if (auto c = split.constant_f()) return std::sqrt(std::fabs(*c)) * (x - a);
  const CompiledExpr root(sqrt(abs_f_expr(split)));
  const RealFn fn = [&](double r) { return root(r); };
  if (x >= a) return integrate_finite(fn, a, x, tol).value;
  return -integrate_finite(fn, x, a, tol).value;
}

// Phase y = Phi(x) with precomputed checkpoints and a monotone inverse.
// orientation +1: Phi(x) = int_base^x |f|^{1/2}, for x >= base.
// orientation -1: Phi(x) = int_x^base |f|^{1/2}, for 0 < x <= base.
class PhaseMap {
public:
  PhaseMap(const CoefficientSplit& split, double base, int orientation = +1, double tol = 1e-13)
      : root_(sqrt(abs_f_expr(split))), base_(base), orientation_(orientation), tol_(tol) {
    if (split.sign_of_f() == FSign::IdenticallyZero) throw DomainError("Liouville phase needs f nonvanishing");
    if (auto c = split.constant_f()) constant_root_ = std::sqrt(std::fabs(*c));
    if (orientation_ < 0 && !(base_ > 0)) throw Error("inward phase needs a positive base point");
    checkpoints_.push_back({base_, 0.0});
    if (constant_root_) return;
    const double delta = 0.25 * std::max(1.0, std::fabs(base_));
    for (int j = 1; j < 200; ++j) {
      const double x = orientation_ > 0 ? base_ + delta * (std::ldexp(1.0, j - 1)) : base_ * std::ldexp(1.0, -j);
      if (orientation_ > 0 && x > 1e15) break;
      if (orientation_ < 0 && x < 1e-250) break;
      const auto& prev = checkpoints_.back();
      const double y = prev.y + segment(prev.x, x);
      checkpoints_.push_back({x, y});
      if (y > 1e7) break;
    }
  }

  int orientation() const noexcept { return orientation_; }
  double base() const noexcept { return base_; }

  double root_abs_f(double x) const { return constant_root_ ? *constant_root_ : root_(x); }

  double operator()(double x) const {
    if (constant_root_) return *constant_root_ * orientation_ * (x - base_);
    const Checkpoint& c = nearest(x);
    return c.y + segment(c.x, x);
  }

  // x with Phi(x) = y, y >= 0.
  double inverse(double y) const {
    if (!(y >= 0)) throw Error("phase inverse needs y >= 0");
    if (constant_root_) return base_ + orientation_ * y / *constant_root_;
    std::size_t j = 0;
    while (j + 1 < checkpoints_.size() && checkpoints_[j + 1].y <= y) ++j;
    double lo = checkpoints_[j].x;
    double ylo = checkpoints_[j].y;
    double hi = j + 1 < checkpoints_.size() ? checkpoints_[j + 1].x : step_beyond(lo, y - ylo);
    return solve_increment(lo, hi, y - ylo);
  }

  // x beyond `from` (in the direction of the orientation) with
  // Phi(x) - Phi(from) = dy.
  double advance(double from, double dy) const {
    if (constant_root_) return from + orientation_ * dy / *constant_root_;
    return solve_increment(from, step_beyond(from, dy), dy);
  }

private:
  // A point beyond `from` whose phase increment exceeds dy.
  double step_beyond(double from, double dy) const {
    const double r = root_(from);
    double width = r > 0 ? 1.5 * dy / r : 1.0;
    for (int it = 0; it < 2000; ++it) {
      double hi = orientation_ > 0 ? from + width : from * std::exp(-width / std::max(from, 1e-300));
      if (orientation_ < 0 && !(hi > 0)) hi = from * 0.5;
      if (!std::isfinite(hi)) break;
      if (segment(from, hi) >= dy) return hi;
      width *= 2;
    }
    throw Error("phase step out of range");
  }

  struct Checkpoint {
    double x, y;
  };

  const Checkpoint& nearest(double x) const {
    std::size_t j = 0;
    if (orientation_ > 0) {
      while (j + 1 < checkpoints_.size() && checkpoints_[j + 1].x <= x) ++j;
    } else {
      while (j + 1 < checkpoints_.size() && checkpoints_[j + 1].x >= x) ++j;
    }
    return checkpoints_[j];
  }

  // Phase accumulated between two points, signed by orientation.
  double segment(double from, double to) const {
    if (from == to) return 0.0;
    const RealFn fn = [this](double r) { return root_(r); };
    const double lo = std::min(from, to), hi = std::max(from, to);
    const auto panel = detail::gk15([this](double r) { return root_(r); }, lo, hi);
    double v = panel.value;
    const double tol = std::max(tol_ * 1e-3, 1e-15 * std::fabs(v));
    if (!(panel.error <= tol)) v = integrate_finite(fn, lo, hi, tol).value;
    const bool forward = orientation_ > 0 ? to > from : to < from;
    return forward ? v : -v;
  }

  // Point p between `from` and `hi` with segment(from, p) = dy
  // (safeguarded Newton).
  double solve_increment(double from, double hi, double dy) const {
    double a = from, b = hi;
    double x = from + (hi - from) * 0.5;
    const double r0 = root_(from);
    if (r0 > 0) {
      const double guess = from + orientation_ * dy / r0;
      if ((guess - a) * (guess - b) < 0) x = guess;
    }
    for (int it = 0; it < 200; ++it) {
      const double F = segment(from, x) - dy;
      if (std::fabs(F) <= 4e-16 * std::max(1.0, dy)) return x;
      if (F < 0) {
        a = x;
      } else {
        b = x;
      }
      const double slope = orientation_ * root_(x);
      double next = x - F / slope;
      // A Newton correction at the rounding level of x means F is noise.
      if (std::fabs(next - x) <= 4e-16 * std::fabs(x)) return x;
      if (!((next - a) * (next - b) < 0)) next = 0.5 * (a + b);
      if (std::fabs(b - a) <= 4e-16 * std::max(std::fabs(a), std::fabs(b))) return next;
      x = next;
    }
    return x;
  }

  CompiledExpr root_;
  double base_;
  int orientation_;
  double tol_;
  std::optional<double> constant_root_;
  std::vector<Checkpoint> checkpoints_;
};

// ---------------------------------------------------------------------------
// Regimes
// ---------------------------------------------------------------------------

enum class Regime {
  ExpInfinity,
  OscInfinity,
  AlgebraicInfinity,
  ExpSingular,
  OscSingular,
  ConstantF_Exp,
  ConstantF_Osc,
};

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::ExpInfinity: return "ExpInfinity";
    case Regime::OscInfinity: return "OscInfinity";
    case Regime::AlgebraicInfinity: return "AlgebraicInfinity";
    case Regime::ExpSingular: return "ExpSingular";
    case Regime::OscSingular: return "OscSingular";
    case Regime::ConstantF_Exp: return "ConstantF_Exp";
    case Regime::ConstantF_Osc: return "ConstantF_Osc";
  }
  return "";
}

inline bool is_exponential(Regime r) {
  return r == Regime::ExpInfinity || r == Regime::ExpSingular || r == Regime::ConstantF_Exp;
}
inline bool is_oscillatory(Regime r) {
  return r == Regime::OscInfinity || r == Regime::OscSingular || r == Regime::ConstantF_Osc;
}
inline bool is_singular(Regime r) { return r == Regime::ExpSingular || r == Regime::OscSingular; }

// How the analyzed endpoint was brought to infinity.
enum class Reduction { None, Inversion, Logarithmic };

inline const char* to_string(Reduction r) {
  switch (r) {
    case Reduction::None: return "none";
    case Reduction::Inversion: return "inversion";
    case Reduction::Logarithmic: return "logarithmic";
  }
  return "";
}

// One verified integral membership. `value` is NaN when the integral diverges.
struct HypothesisCheck {
  std::string name;
  double value = 0.0;
  double threshold = kInfinity;
  bool pass = false;
};

struct Classification {
  Regime regime = Regime::ExpInfinity;
  Reduction reduction = Reduction::None;
  std::vector<HypothesisCheck> checks;
};

// ---------------------------------------------------------------------------
// Changes of variable
// ---------------------------------------------------------------------------

// w(s) = s u(1/s) solves w'' = (f~ + g~) w with f~(s) = s^-4 f(1/s),
// g~(s) = s^-4 g(1/s).
struct InvertedProblem {
  Expr f_tilde;
  Expr g_tilde;
  CoefficientSplit split;  // on (1/right, 1/left)
};


inline InvertedProblem invert_at_zero(const CoefficientSplit& split) {
  const Interval& iv = split.interval();
  // s^{-4} h(1/s) computed as (x^4 h)(x -> 1/s) so that powers combine.
  auto reciprocal = [](double q) { return pow(variable(), -q); };
  Expr ft = detail::collect_constants(detail::substitute_powers(detail::scale_by_power(split.f(), 4.0), reciprocal));
  Expr gt = detail::collect_constants(detail::substitute_powers(detail::scale_by_power(split.g(), 4.0), reciprocal));
  const Interval siv{std::isfinite(iv.right) ? 1.0 / iv.right : 0.0, iv.left > 0 ? 1.0 / iv.left : kInfinity};
  CoefficientSplit inverted = CoefficientSplit::make(ft, gt, siv);
  const CompiledExpr fc(ft), gc(gt);
  for (double s : detail::sign_probe_points(siv)) {
    try {
      (void)fc(s);
      (void)gc(s);
    } catch (const DomainError& e) {
      throw DomainError(std::string("inverted coefficients undefined: ") + e.what());
    }
  }
  return {std::move(ft), std::move(gt), std::move(inverted)};
}

// W(s) = x^{-1/2} U(x), x = e^{-s}, turns U'' = (f + g) U near 0 into
// W'' = (e^{-2s} f(e^{-s}) + e^{-2s} g(e^{-s}) + 1/4) W near s = +infinity.
// Powers of x are merged before the substitution so that terms such as
// x^2 / (4 x^2) cancel exactly instead of overflowing.
inline CoefficientSplit log_substitute(const CoefficientSplit& split) {
  const Interval& iv = split.interval();
  auto exponential = [](double q) { return q == 1.0 ? exp(-variable()) : exp(constant(-q) * variable()); };
  Expr ft = detail::collect_constants(detail::substitute_powers(detail::scale_by_power(split.f(), 2.0), exponential));
  Expr gt = detail::collect_constants(
      detail::substitute_powers(detail::scale_by_power(split.g(), 2.0), exponential) + constant(0.25));
  const double left = std::isfinite(iv.right) && iv.right < 1.0 ? -std::log(iv.right) : 0.0;
  const double right = iv.left > 0 ? -std::log(iv.left) : kInfinity;
  return CoefficientSplit::make(ft, gt, Interval{left, right});
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

namespace detail {

inline HypothesisCheck integrable_check(const std::string& name, const RealFn& fn, double a, double tol) {
  try {
    const double v = integrate_to_infinity([&](double x) { return std::fabs(fn(x)); }, a, tol).value;
    return {name, v, kInfinity, true};
  } catch (const Error&) {
    return {name, std::numeric_limits<double>::quiet_NaN(), kInfinity, false};
  }
}

inline HypothesisCheck divergent_check(const std::string& name, const RealFn& fn, double a, double tol) {
  try {
    const double v = integrate_to_infinity([&](double x) { return std::fabs(fn(x)); }, a, tol).value;
    return {name, v, kInfinity, false};
  } catch (const DivergenceError&) {
    return {name, std::numeric_limits<double>::quiet_NaN(), kInfinity, true};
  } catch (const Error&) {
    // Overflow of a growing integrand is divergence as well.
    return {name, std::numeric_limits<double>::quiet_NaN(), kInfinity, true};
  }
}

inline double infinity_base(const Interval& iv) { return iv.left > 0 ? iv.left : 1.0; }

inline Classification classify_at_infinity(const CoefficientSplit& split, double tol, Reduction reduction) {
  Classification out;
  out.reduction = reduction;
  const double a0 = infinity_base(split.interval());
  if (split.sign_of_f() == FSign::IdenticallyZero) {
    const CompiledExpr g(split.g());
    auto chk = integrable_check("x*g in L1(a,inf)", [&](double x) { return x * g(x); }, a0, tol);
    out.checks.push_back(chk);
    if (!chk.pass) throw HypothesisFailed("xg not in L1: divergent");
    out.regime = Regime::AlgebraicInfinity;
    return out;
  }
  const bool positive = split.sign_of_f() == FSign::Positive;
  const PsiFunction psi = compute_psi(split);
  if (split.constant_f()) {
    auto chk = integrable_check("psi in L1(a,inf)", [&](double x) { return psi(x); }, a0, tol);
    out.checks.push_back(chk);
    if (!chk.pass) throw HypothesisFailed("g not in L1 near infinity: divergent");
    out.regime = positive ? Regime::ConstantF_Exp : Regime::ConstantF_Osc;
    return out;
  }
  const CompiledExpr root(sqrt(abs_f_expr(split)));
  auto phase = divergent_check("|f|^(1/2) not in L1(a,inf)", [&](double x) { return root(x); }, a0, tol);
  out.checks.push_back(phase);
  if (!phase.pass) throw HypothesisFailed("|f|^(1/2) in L1 near infinity: the Liouville phase is bounded");
  auto chk = integrable_check("psi in L1(a,inf)", [&](double x) { return psi(x); }, a0, tol);
  out.checks.push_back(chk);
  if (!chk.pass) throw HypothesisFailed("psi not in L1 near infinity: divergent");
  out.regime = positive ? Regime::ExpInfinity : Regime::OscInfinity;
  return out;
}

}  // namespace detail

// Near 0 the neighborhood (0, min(1, right)] is analyzed; near infinity
// [left, inf) (or [1, inf) when left = 0).
inline Classification classify_regime(const CoefficientSplit& split, EndpointKind endpoint, double tol = 1e-10) {
  if (endpoint == EndpointKind::Infinity) {
    if (std::isfinite(split.interval().right)) throw HypothesisFailed("interval does not extend to infinity");
    return detail::classify_at_infinity(split, tol, Reduction::None);
  }
  if (split.interval().left != 0.0) throw HypothesisFailed("interval does not reach the singular endpoint 0");
  const double b = std::min(1.0, split.interval().right);
  const CoefficientSplit local = CoefficientSplit::make(split.f(), split.g(), Interval{0.0, b});
  if (split.sign_of_f() == FSign::IdenticallyZero) {
    try {
      return detail::classify_at_infinity(invert_at_zero(local).split, tol, Reduction::Inversion);
    } catch (const HypothesisFailed& inversion_failure) {
      try {
        return detail::classify_at_infinity(log_substitute(local), tol, Reduction::Logarithmic);
      } catch (const HypothesisFailed&) {
        throw HypothesisFailed(std::string("f = 0 at 0: ") + inversion_failure.what() +
                               " after inversion, and the logarithmic change fails as well");
      }
    }
  }
  Classification out = detail::classify_at_infinity(invert_at_zero(local).split, tol, Reduction::Inversion);
  const bool positive = split.sign_of_f() == FSign::Positive;
  out.regime = positive ? Regime::ExpSingular : Regime::OscSingular;
  for (auto& c : out.checks) {
    if (c.name == "psi in L1(a,inf)") c.name = "psi in L1(0,b]";
    if (c.name == "|f|^(1/2) not in L1(a,inf)") c.name = "|f|^(1/2) not in L1(0,b]";
  }
  if (out.checks.size() == 1) {
    // Constant inverted f never happens for f != 0, but keep the phase check explicit.
    const CompiledExpr root(sqrt(abs_f_expr(split)));
    HypothesisCheck phase{"|f|^(1/2) not in L1(0,b]", std::numeric_limits<double>::quiet_NaN(), kInfinity, true};
    try {
      phase.value = integrate_near_zero([&](double x) { return root(x); }, b, tol).value;
      phase.pass = false;
    } catch (const Error&) {
    }
    out.checks.insert(out.checks.begin(), phase);
    if (!phase.pass) throw HypothesisFailed("|f|^(1/2) in L1 near 0: the Liouville phase is bounded");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Approximants
// ---------------------------------------------------------------------------

// |f|^{-1/4} exp(zeta Phi) and its normalization maps. For singular
// regimes Phi(x) = int_x^base |f|^{1/2}, so the derivative limit carries
// the orientation sign.
class LGApproximant {
public:
  LGApproximant(Complex zeta, std::shared_ptr<const PhaseMap> phase, const CoefficientSplit& split)
      : zeta_(zeta),
        phase_(std::move(phase)),
        abs_f_(abs_f_expr(split)),
        quarter_(pow(abs_f_expr(split), 0.25)),
        d_quarter_(differentiate(pow(abs_f_expr(split), 0.25))) {}

  Complex zeta() const noexcept { return zeta_; }
  const PhaseMap& phase() const noexcept { return *phase_; }
  int orientation() const noexcept { return phase_->orientation(); }

  double amplitude(double x) const { return 1.0 / quarter_(x); }
  Complex exponential(double x) const { return std::exp(zeta_ * (*phase_)(x)); }

  // Leading models of u and u'.
  Complex value(double x) const { return amplitude(x) * exponential(x); }
  Complex derivative(double x) const {
    return zeta_ * static_cast<double>(orientation()) * quarter_(x) * exponential(x);
  }

  // v = |f|^{1/4} u, the normalized solution.
  Complex v_value(double x) const { return exponential(x); }

  // e^{-zeta Phi} v  -> 1
  Complex normalize_value(double x, Complex u) const { return quarter_(x) * u * std::exp(-zeta_ * (*phase_)(x)); }
  // |f|^{-1/2} e^{-zeta Phi} v'  -> derivative_limit()
  Complex normalize_derivative(double x, Complex u, Complex du) const {
    const Complex dv = d_quarter_(x) * u + quarter_(x) * du;
    return dv * std::exp(-zeta_ * (*phase_)(x)) / std::sqrt(abs_f_(x));
  }
  Complex derivative_limit() const { return zeta_ * static_cast<double>(orientation()); }

private:
  Complex zeta_;
  std::shared_ptr<const PhaseMap> phase_;
  CompiledExpr abs_f_;
  CompiledExpr quarter_;
  CompiledExpr d_quarter_;
};

struct ApproximantPair {
  LGApproximant first;   // zeta = +1 or +i
  LGApproximant second;  // zeta = -1 or -i
};

// `a` is the base point of the phase: the cutoff for regimes at infinity,
// the point in (0, 1] from which the phase is measured toward 0 otherwise.
inline ApproximantPair build_approximants(Regime regime, const CoefficientSplit& split, double a) {
  const FSign s = split.sign_of_f();
  const bool constant_f = split.constant_f().has_value();
  switch (regime) {
    case Regime::AlgebraicInfinity:
      throw Error("regime/split mismatch: the algebraic regime has no Liouville-Green approximants");
    case Regime::ConstantF_Exp:
    case Regime::ConstantF_Osc:
      if (!constant_f) throw Error("regime/split mismatch: f is not constant");
      break;
    default:
      break;
  }
  if (is_exponential(regime) && s != FSign::Positive) throw Error("regime/split mismatch: f must be positive");
  if (is_oscillatory(regime) && s != FSign::Negative) throw Error("regime/split mismatch: f must be negative");
  const int orientation = is_singular(regime) ? -1 : +1;
  auto phase = std::make_shared<const PhaseMap>(split, a, orientation);
  const Complex z1 = is_exponential(regime) ? Complex(1, 0) : Complex(0, 1);
  return {LGApproximant(z1, phase, split), LGApproximant(-z1, phase, split)};
}

}  // namespace lgasym
