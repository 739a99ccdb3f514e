#pragma once

// JSON and CSV serialization of an analysis. JSON floats are written with
// 17 significant digits and object keys keep insertion order, so the same
// invocation always produces the same bytes.

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lgasym/analysis.hpp"
#include "lgasym/errors.hpp"
#include "lgasym/oracle.hpp"
#include "lgasym/validation.hpp"

namespace lgasym {

using Json = nlohmann::ordered_json;

enum class ExitCode : int { Ok = 0, Internal = 1, Hypothesis = 2 };

inline ExitCode exit_code_for(const std::exception& e) {
  if (dynamic_cast<const HypothesisFailed*>(&e) != nullptr) return ExitCode::Hypothesis;
  return ExitCode::Internal;
}

inline const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const NotIntegrable*>(&e)) return "NotIntegrable";
  if (dynamic_cast<const AmbiguousSign*>(&e)) return "AmbiguousSign";
  if (dynamic_cast<const HypothesisFailed*>(&e)) return "HypothesisFailed";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const DivergenceError*>(&e)) return "DivergenceError";
  if (dynamic_cast<const QuadratureError*>(&e)) return "QuadratureError";
  if (dynamic_cast<const GronwallViolation*>(&e)) return "GronwallViolation";
  if (dynamic_cast<const TailToleranceError*>(&e)) return "TailToleranceError";
  if (dynamic_cast<const OracleError*>(&e)) return "OracleError";
  if (dynamic_cast<const FitError*>(&e)) return "FitError";
  return "InternalError";
}

// ---------------------------------------------------------------------------
// Deterministic JSON text
// ---------------------------------------------------------------------------

inline std::string format_double17(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) return std::signbit(v) ? "-0.0" : "0.0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep floats recognizable as floats after a round trip.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline void write_json(std::ostream& os, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(it.key()).dump() << ": ";
        write_json(os, it.value(), indent, depth + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) os << ",\n";
        os << pad;
        write_json(os, j[k], indent, depth + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float: os << format_double17(j.get<double>()); return;
    default: os << j.dump(); return;
  }
}

}  // namespace detail

inline std::string to_json_text(const Json& j, int indent = 2) {
  std::ostringstream os;
  detail::write_json(os, j, indent, 0);
  os << "\n";
  return os.str();
}

// Non-finite doubles become null.
inline Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json complex_json(Complex c) { return Json{{"re", number(c.real())}, {"im", number(c.imag())}}; }

inline Json checks_json(const std::vector<HypothesisCheck>& checks) {
  Json a = Json::array();
  for (const auto& c : checks) {
    a.push_back(Json{{"name", c.name}, {"value", number(c.value)}, {"threshold", number(c.threshold)}, {"pass", c.pass}});
  }
  return a;
}

// ---------------------------------------------------------------------------
// Analysis report
// ---------------------------------------------------------------------------

struct ReportInput {
  std::string f, g;
  AnalysisOptions options;
  std::optional<long long> seed;
  bool timings = false;
};

inline Json input_json(const ReportInput& in) {
  const AnalysisOptions& o = in.options;
  Json j;
  j["f"] = in.f;
  j["g"] = in.g;
  j["endpoint"] = to_string(o.endpoint);
  j["interval"] = Json{{"left", number(o.interval.left)}, {"right", number(o.interval.right)}};
  j["seed"] = in.seed ? Json(*in.seed) : Json(nullptr);
  return j;
}

inline Json tolerances_json(const AnalysisOptions& o) {
  Json j;
  j["tol"] = number(o.tol);
  j["tail_tol"] = number(o.tail_tol);
  j["step"] = number(o.step);
  j["x_max"] = o.x_max ? number(*o.x_max) : Json(nullptr);
  j["extrapolate"] = o.extrapolate;
  return j;
}

// A constant with the tolerances it was computed under. error_bound covers
// the tail beyond the grid; discretization_estimate comes from the step
// halving and is null when extrapolation is off.
inline Json constant_json(Complex value, double error_bound, double discretization, const AnalysisOptions& o) {
  Json j = complex_json(value);
  j["error_bound"] = number(error_bound);
  j["discretization_estimate"] = number(discretization);
  j["tol"] = number(o.tol);
  j["tail_tol"] = number(o.tail_tol);
  return j;
}

inline Json constants_json(const Analysis& an) {
  const AnalysisOptions& o = an.options();
  const VolterraSolution& s = an.solution();
  Json j;
  if (auto c = an.coefficients()) {
    const VolterraSolution& m = *an.minus_solution();
    const double e = std::max({s.main_error, s.secondary_error, m.main_error, m.secondary_error});
    j["xi1"] = constant_json(c->xi1, s.main_error, s.main_discretization, o);
    j["xi2"] = constant_json(c->xi2, s.secondary_error, s.secondary_discretization, o);
    j["eta1"] = constant_json(c->eta1, m.secondary_error, m.secondary_discretization, o);
    j["eta2"] = constant_json(c->eta2, m.main_error, m.main_discretization, o);
    // |d det| <= sum of products of perturbations, to first order.
    const double de = e * (std::abs(c->xi1) + std::abs(c->xi2) + std::abs(c->eta1) + std::abs(c->eta2));
    const double dd = std::max({s.main_discretization, s.secondary_discretization, m.main_discretization,
                                m.secondary_discretization});
    j["determinant"] = constant_json(c->determinant(), de,
                                     dd * (std::abs(c->xi1) + std::abs(c->xi2) + std::abs(c->eta1) + std::abs(c->eta2)), o);
  } else {
    j["z_inf"] = constant_json(s.main, s.main_error, s.main_discretization, o);
  }
  const double slack = s.main_error + (std::isfinite(s.main_discretization) ? s.main_discretization : 0.0);
  j["inside_certified_disk"] = std::abs(s.main - Complex(1.0)) + slack < an.certificate().radius() ||
                               s.main == Complex(1.0);
  return j;
}

inline Json formulas_json(const Analysis& an) {
  Json j;
  const CoefficientSplit& w = an.working_split();
  j["working_f"] = to_string(w.f());
  j["working_g"] = to_string(w.g());
  j["density"] = an.density_formula();
  j["amplitude"] = an.amplitude_formula();
  j["phase_density"] = an.phase_density_formula();
  const std::string a = format_number(an.cutoff());
  Json models;
  if (an.algebraic()) {
    models["Dominant"] = "t";
    models["Recessive"] = "1";
  } else if (an.oscillatory()) {
    models["Plus"] = "A(t) * exp(+i * int_" + a + "^t phase_density)";
    models["Minus"] = "A(t) * exp(-i * int_" + a + "^t phase_density)";
  } else {
    models["Dominant"] = "A(t) * exp(+int_" + a + "^t phase_density)";
    models["Recessive"] = "A(t) * exp(-int_" + a + "^t phase_density)";
  }
  j["models"] = models;
  switch (an.reduction()) {
    case Reduction::None: j["variable"] = "t = x, u(x) = w(t)"; break;
    case Reduction::Inversion: j["variable"] = "t = 1/x, u(x) = x * w(t)"; break;
    case Reduction::Logarithmic: j["variable"] = "t = -log(x), u(x) = sqrt(x) * w(t)"; break;
  }
  return j;
}

inline Json oracle_json(const Analysis& an) {
  if (!an.oracle()) return Json(nullptr);
  const OracleComparison& oc = *an.oracle();
  Json j;
  j["branch"] = to_string(oc.branch);
  j["window"] = Json{{"t0", number(oc.t0)}, {"t1", number(oc.t1)}};
  j["max_deviation"] = number(oc.max_deviation);
  j["steps"] = oc.steps;
  Json fit;
  fit["model"] = oc.fit.model == FitModel::Ratio ? "ratio" : "oscillatory";
  if (oc.fit.model == FitModel::Ratio) {
    fit["c"] = complex_json(oc.fit.c);
  } else {
    fit["amplitude"] = number(oc.fit.amplitude);
    fit["theta"] = number(oc.fit.theta);
  }
  fit["residual"] = number(oc.fit.residual);
  fit["drift"] = number(oc.fit.drift);
  fit["samples"] = oc.fit.samples;
  j["fit"] = fit;
  return j;
}

inline Json timings_json(const Timings& t) {
  return Json{{"classify_ms", number(t.classify_ms)}, {"cutoff_ms", number(t.cutoff_ms)}, {"solve_ms", number(t.solve_ms)},
              {"certify_ms", number(t.certify_ms)}, {"oracle_ms", number(t.oracle_ms)}};
}

inline Json analysis_json(const ReportInput& in, const Analysis& an) {
  Json j;
  j["schema"] = 1;
  j["status"] = "ok";
  j["input"] = input_json(in);
  j["tolerances"] = tolerances_json(in.options);
  j["regime"] = to_string(an.regime());
  j["reduction"] = to_string(an.reduction());
  j["hypotheses"] = checks_json(an.classification().checks);
  const Certificate& c = an.certificate();
  j["certificate"] = Json{{"cutoff_a", number(c.cutoff_a)},
                          {"cutoff_original", number(an.cutoff_original())},
                          {"g_l1_tail", number(c.g_l1_tail)},
                          {"g_l1_error", number(c.g_l1_error)},
                          {"zg_l1_bound", number(c.zg_l1_bound)},
                          {"checks", checks_json(c.checks)}};
  j["verification"] = checks_json(an.verification().checks);
  const VolterraSolution& s = an.solution();
  j["solver"] = Json{{"points", s.size()},
                     {"step", number(s.step)},
                     {"x_max", number(s.x_max())},
                     {"refinements", s.refinements},
                     {"extrapolated", s.extrapolated}};
  j["constants"] = constants_json(an);
  j["formulas"] = formulas_json(an);
  j["oracle"] = oracle_json(an);
  if (in.timings) j["timings"] = timings_json(an.timings());
  return j;
}

inline Json failure_json(const ReportInput& in, const std::exception& e) {
  Json j;
  j["schema"] = 1;
  j["status"] = exit_code_for(e) == ExitCode::Hypothesis ? "hypothesis_failed" : "error";
  j["input"] = input_json(in);
  j["tolerances"] = tolerances_json(in.options);
  j["error"] = Json{{"kind", error_kind(e)}, {"message", e.what()}};
  return j;
}

inline Json validation_json(const std::vector<CriterionResult>& results) {
  Json j;
  j["schema"] = 1;
  Json a = Json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    a.push_back(Json{{"id", r.id},
                     {"suite", r.suite},
                     {"title", r.title},
                     {"pass", r.pass},
                     {"measured", number(r.measured)},
                     {"expected", number(r.expected)},
                     {"tolerance", number(r.tolerance)},
                     {"detail", r.detail}});
  }
  j["all_pass"] = all;
  j["criteria"] = a;
  return j;
}

// ---------------------------------------------------------------------------
// CSV table
// ---------------------------------------------------------------------------

struct TableRow {
  double x = 0.0;
  double u_numeric = 0.0;
  double approximant = 0.0;
  double ratio = 0.0;
  double envelope_bound = 0.0;
};

// RFC 4180: quote fields containing separators, quotes or line breaks.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_number(double v) { return std::isfinite(v) ? format_double17(v) : std::string(); }

inline void write_csv(std::ostream& os, const std::vector<TableRow>& rows) {
  static const char* header[] = {"x", "u_numeric", "approximant", "ratio", "envelope_bound"};
  for (int k = 0; k < 5; ++k) os << (k ? "," : "") << csv_field(header[k]);
  os << "\r\n";
  for (const auto& r : rows) {
    const double v[5] = {r.x, r.u_numeric, r.approximant, r.ratio, r.envelope_bound};
    for (int k = 0; k < 5; ++k) os << (k ? "," : "") << csv_field(csv_number(v[k]));
    os << "\r\n";
  }
}

inline Branch default_branch(const Analysis& an) { return an.oscillatory() ? Branch::Plus : Branch::Dominant; }

// Samples of one branch at original-variable points. Points outside the
// certified region get u_numeric from a direct ODE solve started at the
// cutoff; their model columns are left empty.
inline std::vector<TableRow> tabulate(const Analysis& an, Branch b, const std::vector<double>& xs) {
  std::vector<TableRow> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> outside;
  for (double x : xs) {
    if (!an.certified(x)) outside.push_back(an.to_working(x));
  }
  std::optional<OdeTrajectory> traj;
  if (!outside.empty()) {
    const double a = an.cutoff();
    const BranchSample s = an.working_branch(b, a);
    const CompiledExpr& V = an.working_potential();
    const RealFn pot = [&V](double t) { return V(t); };
    double end = outside.front();
    for (double t : outside) end = std::min(end, t);
    traj = integrate_ivp(pot, a, s.value.real(), s.derivative.real(), end, 1e-12, outside);
  }
  for (double x : xs) {
    TableRow r;
    r.x = x;
    if (an.certified(x)) {
      const BranchSample s = an.branch(b, x);
      r.u_numeric = s.value.real();
      r.approximant = s.model.real();
      r.ratio = an.oscillatory() ? std::abs(s.ratio) : s.ratio.real();
      r.envelope_bound = an.envelope(x);
    } else {
      const double t = an.to_working(x);
      double w = nan;
      for (std::size_t k = 0; k < traj->x.size(); ++k) {
        if (traj->x[k] == t) w = traj->u[k];
      }
      switch (an.reduction()) {
        case Reduction::None: r.u_numeric = w; break;
        case Reduction::Inversion: r.u_numeric = x * w; break;
        case Reduction::Logarithmic: r.u_numeric = std::sqrt(x) * w; break;
      }
      r.approximant = r.ratio = r.envelope_bound = nan;
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace lgasym
