#pragma once

// End-to-end analysis of u'' = (f + g) u at one endpoint: classification,
// reduction of the endpoint to infinity, cutoff, Volterra solves,
// certificate, and evaluation of the normalized solution branches in the
// original variable.

#include <chrono>
#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lgasym/certificate.hpp"
#include "lgasym/errors.hpp"
#include "lgasym/expr.hpp"
#include "lgasym/log.hpp"
#include "lgasym/oracle.hpp"
#include "lgasym/quadrature.hpp"
#include "lgasym/transform.hpp"
#include "lgasym/volterra.hpp"

namespace lgasym {

struct AnalysisOptions {
  EndpointKind endpoint = EndpointKind::Infinity;
  Interval interval{0.0, kInfinity};
  double tol = 1e-10;       // quadrature tolerance for hypothesis and certificate integrals
  double step = 0.01;       // Volterra step in the marching variable
  bool extrapolate = true;  // Richardson combination of steps h and h/2
  double tail_tol = 1e-6;   // bound on the tail correction of connection constants
  std::optional<double> x_max;  // end of the Volterra grid in the marching variable
  bool oracle = true;       // run the independent ODE comparison
};

// Dominant/Recessive for exponential and algebraic regimes; Plus/Minus
// (~ e^{+i Phi}, e^{-i Phi}) for oscillatory ones.
enum class Branch { Dominant, Recessive, Plus, Minus };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::Dominant: return "dominant";
    case Branch::Recessive: return "recessive";
    case Branch::Plus: return "plus";
    case Branch::Minus: return "minus";
  }
  return "";
}

struct BranchSample {
  Complex value;
  Complex derivative;
  Complex ratio;  // value / leading model; tends to 1
  Complex model;  // leading model
};

struct OracleComparison {
  Branch branch = Branch::Dominant;
  double t0 = 0.0, t1 = 0.0;  // window in the working variable
  double max_deviation = 0.0;  // max |oracle - pipeline| / scale on the window
  AsymptoticFit fit;
  std::size_t steps = 0;
};

struct Timings {
  double classify_ms = 0, cutoff_ms = 0, solve_ms = 0, certify_ms = 0, oracle_ms = 0;
};

namespace detail {

// Marching variable y = Phi(t); the nodes t_k are generated by phase steps.
class PhaseSource final : public VolterraSource {
public:
  PhaseSource(std::shared_ptr<const PhaseMap> phase, const PsiForms& forms)
      : phase_(std::move(phase)), psi_(forms.psi), H_(forms.y_perturbation), dH_(forms.d_y_perturbation) {}

  void begin(double, double h) override {
    h_ = h;
    xs_.assign(1, phase_->base());
  }
  double coefficient(std::size_t k, double) override { return H_(node(k)); }
  double cell_l1(std::size_t k, double, double) override {
    const double x0 = node(k - 1), x1 = node(k);
    auto fn = [this](double s) { return std::fabs(psi_(s)); };
    const auto r = gk15(fn, x0, x1);
    if (r.error <= 1e-14 * std::max(r.value, 1e-300) || r.error <= 1e-17) return r.value;
    return integrate_finite(fn, x0, x1, std::max(1e-16, 1e-13 * r.value)).value;
  }
  TailData tail(double y) override {
    const std::size_t k = static_cast<std::size_t>(std::llround(y / h_));
    const double x = node(k);
    TailData d;
    d.l1 = robust_tail([this](double s) { return std::fabs(psi_(s)); }, x);
    d.integral = robust_tail([this](double s) { return psi_(s); }, x);
    d.oscillation = 0.5 * (std::fabs(H_(x)) + robust_tail([this](double s) { return std::fabs(dH_(s)); }, x));
    return d;
  }

  double node(std::size_t k) {
    while (xs_.size() <= k) xs_.push_back(phase_->advance(xs_.back(), h_));
    return xs_[k];
  }

  static double robust_tail(const RealFn& fn, double x) {
    for (double tol : {1e-16, 1e-13, 1e-10}) {
      try {
        return integrate_to_infinity(fn, x, tol).value;
      } catch (const DivergenceError&) {
        throw;
      } catch (const QuadratureError&) {
      }
    }
    return integrate_to_infinity(fn, x, 1e-8).value;
  }

private:
  std::shared_ptr<const PhaseMap> phase_;
  CompiledExpr psi_, H_, dH_;
  double h_ = 0.0;
  std::vector<double> xs_;
};

// J(t) = int_t^inf ds / (s^2 z(s)^2) for the algebraic form, by backward cells.
class AlgebraicRecessive {
public:
  explicit AlgebraicRecessive(const VolterraSolution& sol) : sol_(&sol) {
    const std::size_t n = sol.size();
    zinf_ = sol.main.real();
    J_.assign(n, kInfinity);
    const double X = sol.x_max();
    const double B = sol.moment_partial.real();
    J_[n - 1] = PhaseSource::robust_tail(
        [&](double s) {
          const double z = zinf_ - B / s;
          return 1.0 / (s * s * z * z);
        },
        X);
    for (std::size_t k = n - 1; k-- > 0;) {
      if (sol.t(k) <= 0) break;
      J_[k] = J_[k + 1] + cell(sol.t(k), sol.t(k + 1));
    }
  }

  double J(double t) const {
    const VolterraSolution& s = *sol_;
    if (!(t > 0)) throw DomainError("recessive algebraic branch is unbounded at t = 0");
    if (t >= s.x_max()) {
      const double B = s.moment_partial.real();
      return PhaseSource::robust_tail(
          [&](double r) {
            const double z = zinf_ - B / r;
            return 1.0 / (r * r * z * z);
          },
          t);
    }
    if (t < s.a) throw Error("recessive solution requested before the cutoff");
    std::size_t k = static_cast<std::size_t>((t - s.a) / s.step);
    if (k + 1 >= J_.size()) k = J_.size() - 2;
    return J_[k + 1] + cell(t, s.t(k + 1));
  }

private:
  double cell(double t0, double t1) const {
    static constexpr double nodes[5] = {-0.906179845938663992797626878299392, -0.538469310105683091036314420700208,
                                        0.0, 0.538469310105683091036314420700208,
                                        0.906179845938663992797626878299392};
    static constexpr double weights[5] = {0.236926885056189087514264040719917, 0.478628670499366468041291514835638,
                                          0.568888888888888888888888888888889, 0.478628670499366468041291514835638,
                                          0.236926885056189087514264040719917};
    if (t1 <= t0) return 0.0;
    double sum = 0;
    for (int j = 0; j < 5; ++j) {
      const double s = t0 + 0.5 * (t1 - t0) * (nodes[j] + 1);
      const double z = sol_->z_at(s).real();
      sum += weights[j] / (s * s * z * z);
    }
    return 0.5 * (t1 - t0) * sum;
  }

  const VolterraSolution* sol_;
  double zinf_ = 1.0;
  std::vector<double> J_;
};

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace detail

class Analysis {
public:
  static Analysis run(const CoefficientSplit& split, const AnalysisOptions& opt) {
    Analysis an;
    an.opt_ = opt;
    an.split_ = std::make_shared<CoefficientSplit>(split);
    auto clock = std::chrono::steady_clock::now();
    an.classification_ = classify_regime(split, opt.endpoint, opt.tol);
    an.timings_.classify_ms = detail::elapsed_ms(clock);
    diag::info(std::string("regime ") + to_string(an.classification_.regime) + " (reduction " +
              to_string(an.classification_.reduction) + ")");
    an.build_working();
    clock = std::chrono::steady_clock::now();
    an.find_cutoff_and_certify();
    an.timings_.cutoff_ms = detail::elapsed_ms(clock);
    clock = std::chrono::steady_clock::now();
    an.solve();
    an.timings_.solve_ms = detail::elapsed_ms(clock);
    clock = std::chrono::steady_clock::now();
    an.verification_ = verify_certificate(an.certificate_, *an.primary_);
    if (an.minus_) {
      for (auto c : verify_certificate(an.certificate_, *an.minus_).checks) {
        c.name += " (zeta=-i)";
        an.verification_.checks.push_back(c);
      }
    }
    an.timings_.certify_ms = detail::elapsed_ms(clock);
    if (!an.verification_.all_pass()) {
      for (const auto& c : an.verification_.checks) {
        if (!c.pass) throw GronwallViolation("certificate check failed: " + c.name);
      }
    }
    if (opt.oracle) {
      clock = std::chrono::steady_clock::now();
      an.compare_with_oracle();
      an.timings_.oracle_ms = detail::elapsed_ms(clock);
    }
    return an;
  }

  static Analysis run(std::string_view f, std::string_view g, const AnalysisOptions& opt) {
    return run(CoefficientSplit::make(parse(f), parse(g), opt.interval), opt);
  }

  const AnalysisOptions& options() const { return opt_; }
  const CoefficientSplit& split() const { return *split_; }
  const CoefficientSplit& working_split() const { return *working_; }
  const Classification& classification() const { return classification_; }
  Regime regime() const { return classification_.regime; }
  Reduction reduction() const { return classification_.reduction; }
  bool algebraic() const { return regime() == Regime::AlgebraicInfinity; }
  bool oscillatory() const { return is_oscillatory(regime()); }
  double cutoff() const { return cutoff_; }
  const Certificate& certificate() const { return certificate_; }
  const VerificationReport& verification() const { return verification_; }
  const VolterraSolution& solution() const { return *primary_; }
  const VolterraSolution* minus_solution() const { return minus_.get(); }
  std::optional<OscillatoryCoeffs> coefficients() const { return coeffs_; }
  const std::optional<OracleComparison>& oracle() const { return oracle_; }
  const Timings& timings() const { return timings_; }
  const PhaseMap* phase() const { return phase_.get(); }
  // Cutoff expressed in the original variable.
  double cutoff_original() const { return from_working(cutoff_); }

  std::vector<Branch> branches() const {
    if (oscillatory()) return {Branch::Plus, Branch::Minus};
    return {Branch::Dominant, Branch::Recessive};
  }

  double to_working(double x) const {
    switch (reduction()) {
      case Reduction::None: return x;
      case Reduction::Inversion: return 1.0 / x;
      case Reduction::Logarithmic: return -std::log(x);
    }
    return x;
  }
  double from_working(double t) const {
    switch (reduction()) {
      case Reduction::None: return t;
      case Reduction::Inversion: return 1.0 / t;
      case Reduction::Logarithmic: return std::exp(-t);
    }
    return t;
  }

  // True where the Volterra representation applies.
  bool certified(double x) const { return to_working(x) >= cutoff_; }

  // Marching variable at working point t: the phase, or t itself.
  double marching(double t) const { return algebraic() ? t : (*phase_)(t); }

  BranchSample working_branch(Branch b, double t) const {
    if (!(t >= cutoff_)) throw DomainError("point lies outside the certified region");
    if (algebraic()) return algebraic_branch(b, t);
    const double y = (*phase_)(t);
    const double A = amplitude_(t);
    const double dA = d_amplitude_(t);
    const double root = phase_->root_abs_f(t);
    // value and d/dy of the Liouville-normalized solution
    Complex w, dw, ratio, model_exp;
    if (!oscillatory()) {
      if (b == Branch::Dominant) {
        const double zinf = primary_->main.real();
        const double z = primary_->z_at(y).real(), dz = primary_->dz_at(y).real();
        const double e = std::exp(y);
        ratio = z / zinf;
        w = e * z / zinf;
        dw = e * (z + dz) / zinf;
        model_exp = e;
      } else if (b == Branch::Recessive) {
        const auto [ws, dws] = recessive_->eval_scaled(y);
        const double e = std::exp(-y);
        ratio = ws;
        w = ws * e;
        dw = dws * e;
        model_exp = e;
      } else {
        throw Error("branch does not exist in an exponential regime");
      }
    } else {
      const Complex i(0, 1);
      const OscillatoryCoeffs& c = *coeffs_;
      const Complex det = c.determinant();
      const Complex zp = primary_->z_at(y), dzp = primary_->dz_at(y);
      const Complex zm = minus_->z_at(y), dzm = minus_->dz_at(y);
      const Complex ep = std::exp(i * y), em = std::exp(-i * y);
      const Complex u1 = ep * zp, du1 = ep * (i * zp + dzp);
      const Complex u2 = em * zm, du2 = em * (-i * zm + dzm);
      if (b == Branch::Plus) {
        w = (c.eta2 * u1 - c.xi2 * u2) / det;
        dw = (c.eta2 * du1 - c.xi2 * du2) / det;
        ratio = (c.eta2 * zp - c.xi2 * zm * em * em) / det;
        model_exp = ep;
      } else if (b == Branch::Minus) {
        w = (c.xi1 * u2 - c.eta1 * u1) / det;
        dw = (c.xi1 * du2 - c.eta1 * du1) / det;
        ratio = (c.xi1 * zm - c.eta1 * zp * ep * ep) / det;
        model_exp = em;
      } else {
        throw Error("branch does not exist in an oscillatory regime");
      }
    }
    return {A * w, dA * w + A * root * dw, ratio, A * model_exp};
  }

  // Branch in the original variable.
  BranchSample branch(Branch b, double x) const {
    const double t = to_working(x);
    BranchSample s = working_branch(b, t);
    switch (reduction()) {
      case Reduction::None: return s;
      case Reduction::Inversion:
        return {x * s.value, s.value - s.derivative / x, s.ratio, x * s.model};
      case Reduction::Logarithmic: {
        const double r = std::sqrt(x);
        return {r * s.value, (0.5 * s.value - s.derivative) / r, s.ratio, r * s.model};
      }
    }
    return s;
  }

  // exp(int_a^t |density|): the Gronwall envelope of |z| at the working point t.
  double envelope_working(double t) const {
    if (t <= cutoff_) return 1.0;
    const CompiledExpr& d = density_;
    return std::exp(integrate_finite([&](double s) { return std::fabs(d(s)); }, cutoff_, t, 1e-13).value);
  }
  double envelope(double x) const { return envelope_working(to_working(x)); }

  // Printed forms of the leading models in the working variable.
  std::string amplitude_formula() const { return algebraic() ? "1" : to_string(pow(abs_f_expr(*working_), -0.25)); }
  std::string phase_density_formula() const { return algebraic() ? "" : to_string(sqrt(abs_f_expr(*working_))); }
  std::string density_formula() const { return to_string(density_expr_); }

  // Potential of the working equation w'' = V_w w.
  const CompiledExpr& working_potential() const { return potential_; }

private:
  void build_working() {
    const CoefficientSplit& s = *split_;
    if (opt_.endpoint == EndpointKind::Infinity) {
      working_ = split_;
    } else {
      const double b = std::min(1.0, s.interval().right);
      const CoefficientSplit local = CoefficientSplit::make(s.f(), s.g(), Interval{0.0, b});
      if (reduction() == Reduction::Logarithmic) {
        working_ = std::make_shared<CoefficientSplit>(log_substitute(local));
      } else {
        working_ = std::make_shared<CoefficientSplit>(invert_at_zero(local).split);
      }
    }
    potential_ = CompiledExpr(working_->potential());
    if (algebraic()) {
      density_expr_ = variable() * working_->g();
    } else {
      forms_ = psi_forms(*working_);
      density_expr_ = forms_.psi;
      amplitude_ = CompiledExpr(forms_.amplitude);
      d_amplitude_ = CompiledExpr(differentiate(forms_.amplitude));
    }
    density_ = CompiledExpr(density_expr_);
  }

  void find_cutoff_and_certify() {
    const CompiledExpr& d = density_;
    const RealFn fn = [&d](double t) { return d(t); };
    cutoff_ = find_cutoff(fn, working_->interval().left, 0.9 * kLog2, opt_.tol);
    certificate_ = gronwall_certificate(fn, cutoff_, opt_.tol);
    diag::info("cutoff a = " + format_number(cutoff_) + ", tail = " + format_number(certificate_.g_l1_tail));
    if (!certificate_.valid()) throw HypothesisFailed("certificate rejected at the selected cutoff");
  }

  void solve() {
    VolterraOptions vo;
    vo.step = opt_.step;
    vo.tail_tol = opt_.tail_tol;
    vo.extrapolate = opt_.extrapolate;
    if (opt_.x_max) vo.x_max = *opt_.x_max;
    if (algebraic()) {
      const Expr g = working_->g();
      const CompiledExpr gc(g), dg(differentiate(g));
      FunctionSource src([gc](double t) { return gc(t); }, [dg](double t) { return dg(t); }, true);
      primary_ = std::make_shared<VolterraSolution>(solve_algebraic(src, cutoff_, vo));
      algebraic_recessive_ = std::make_shared<detail::AlgebraicRecessive>(*primary_);
      return;
    }
    phase_ = std::make_shared<const PhaseMap>(*working_, cutoff_, +1);
    detail::PhaseSource src(phase_, forms_);
    if (oscillatory()) {
      OscillatoryPair pair = solve_oscillatory(src, 0.0, vo);
      primary_ = std::make_shared<VolterraSolution>(std::move(pair.plus));
      minus_ = std::make_shared<VolterraSolution>(std::move(pair.minus));
      coeffs_ = pair.coeffs;
    } else {
      primary_ = std::make_shared<VolterraSolution>(solve_exponential(src, 0.0, vo));
      recessive_ = std::make_shared<RecessiveSolution>(*primary_);
    }
    diag::info("Volterra grid: " + std::to_string(primary_->size()) + " points, step " +
              format_number(primary_->step) + ", end " + format_number(primary_->x_max()));
  }

  BranchSample algebraic_branch(Branch b, double t) const {
    const double zinf = primary_->main.real();
    const double z = primary_->z_at(t).real(), dz = primary_->dz_at(t).real();
    if (b == Branch::Dominant) return {t * z / zinf, (z + t * dz) / zinf, z / zinf, t};
    if (b == Branch::Recessive) {
      const double J = algebraic_recessive_->J(t);
      const double v = zinf * t * z * J;
      return {v, zinf * ((z + t * dz) * J - 1.0 / (t * z)), v, 1.0};
    }
    throw Error("branch does not exist in the algebraic regime");
  }

  // Integrates the working equation from the cutoff with the dominant (or
  // plus) branch data and compares with the pipeline values.
  void compare_with_oracle() {
    OracleComparison oc;
    oc.branch = oscillatory() ? Branch::Plus : Branch::Dominant;
    const double t0 = cutoff_;
    double t1;
    if (algebraic()) {
      t1 = std::min(primary_->x_max(), t0 + 50.0);
    } else {
      const double span = oscillatory() ? 40.0 : 20.0;
      t1 = phase_->inverse(std::min(span, primary_->x_max()));
    }
    if (!(t1 > t0)) return;
    oc.t0 = t0;
    oc.t1 = t1;
    const BranchSample start = working_branch(oc.branch, t0);
    const std::vector<double> pts = sample_points(t0 + 0.5 * (t1 - t0), t1, 41, false);
    const CompiledExpr& V = potential_;
    const OdeTrajectory traj = integrate_ivp([&V](double t) { return V(t); }, t0, start.value.real(),
                                             start.derivative.real(), t1, 1e-12, pts);
    oc.steps = traj.steps;
    std::vector<double> xs, us, model, phase, amp;
    for (std::size_t k = 0; k < traj.x.size(); ++k) {
      const double t = traj.x[k];
      if (t < pts.front()) continue;
      const BranchSample s = working_branch(oc.branch, t);
      const double scale = oscillatory() ? std::abs(s.model) : std::fabs(s.value.real());
      oc.max_deviation = std::max(oc.max_deviation, std::fabs(traj.u[k] - s.value.real()) / scale);
      xs.push_back(t);
      us.push_back(traj.u[k]);
      if (oscillatory()) {
        phase.push_back((*phase_)(t));
        amp.push_back(amplitude_(t));
      } else {
        model.push_back(s.model.real());
      }
    }
    oc.fit = oscillatory() ? fit_oscillatory(xs, us, phase, amp) : fit_ratio(xs, us, model);
    oc.fit.regime = to_string(regime());
    oracle_ = oc;
  }

  AnalysisOptions opt_;
  std::shared_ptr<CoefficientSplit> split_;
  std::shared_ptr<CoefficientSplit> working_;
  Classification classification_;
  PsiForms forms_;
  Expr density_expr_;
  CompiledExpr density_, amplitude_, d_amplitude_, potential_;
  double cutoff_ = 0.0;
  Certificate certificate_;
  VerificationReport verification_;
  std::shared_ptr<const PhaseMap> phase_;
  std::shared_ptr<VolterraSolution> primary_, minus_;
  std::shared_ptr<RecessiveSolution> recessive_;
  std::shared_ptr<detail::AlgebraicRecessive> algebraic_recessive_;
  std::optional<OscillatoryCoeffs> coeffs_;
  std::optional<OracleComparison> oracle_;
  Timings timings_;
};

}  // namespace lgasym
