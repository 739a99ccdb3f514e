#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lgasym/transform.hpp"

using namespace lgasym;

namespace {

CoefficientSplit split(const char* f, const char* g, Interval iv = {0.0, kInfinity}) {
  return CoefficientSplit::make(parse(f), parse(g), iv);
}

// psi by central differences of |f|^{-1/4}.
double psi_fd(const CoefficientSplit& s, double x) {
  const CompiledExpr f(abs_f_expr(s)), g(s.g());
  auto A = [&](double t) { return std::pow(f(t), -0.25); };
  const double h = 1e-3 * x;
  const double d2 = (-A(x + 2 * h) + 16 * A(x + h) - 30 * A(x) + 16 * A(x - h) - A(x - 2 * h)) / (12 * h * h);
  return g(x) / std::sqrt(f(x)) - A(x) * d2;
}

}  // namespace

TEST(Split, SignDetection) {
  EXPECT_EQ(split("1", "0").sign_of_f(), FSign::Positive);
  EXPECT_EQ(split("0-1", "0").sign_of_f(), FSign::Negative);
  EXPECT_EQ(split("0", "1/x^3").sign_of_f(), FSign::IdenticallyZero);
  EXPECT_THROW(split("x-2", "0"), AmbiguousSign);
}

TEST(Psi, ModifiedBesselSingularSplit) {
  const PsiFunction psi = compute_psi(split("1/x^2", "1-1/(4*x^2)"));
  for (double x : {0.01, 0.5, 2.0, 40.0}) EXPECT_NEAR(psi(x), x, 1e-12 * (1 + x));
}

TEST(Psi, ConstantFIsG) {
  const PsiFunction psi = compute_psi(split("1", "3/(4*x^2)+exp(-x)"));
  for (double x : {0.3, 1.0, 9.0}) EXPECT_NEAR(psi(x), 0.75 / (x * x) + std::exp(-x), 1e-14);
}

TEST(Psi, QuarticF) {
  const CoefficientSplit s = split("x^4", "0", {1.0, kInfinity});
  const PsiFunction psi = compute_psi(s);
  for (int k = 0; k < 10; ++k) {
    const double x = 1.2 + 0.7 * k;
    EXPECT_NEAR(psi(x), -2 * std::pow(x, -4), 1e-12);
    EXPECT_NEAR(psi(x), psi_fd(s, x), 1e-6 * std::fabs(psi(x)));
  }
}

TEST(Psi, MatchesFiniteDifferencesOnFixtures) {
  const char* cases[][2] = {{"1", "3/(4*x^2)"}, {"0-1", "0-1/(4*x^2)"}, {"x^2", "0"}, {"x", "1/x^3"},
                            {"1+x^2", "exp(-x)"}, {"1/x^2", "1-1/(4*x^2)"}};
  for (auto& c : cases) {
    const CoefficientSplit s = split(c[0], c[1]);
    const PsiFunction psi = compute_psi(s);
    for (double x : {0.7, 1.5, 3.0, 8.0}) {
      EXPECT_NEAR(psi(x), psi_fd(s, x), 1e-6 * (std::fabs(psi(x)) + 1e-3)) << c[0] << " | " << c[1] << " x=" << x;
    }
  }
}

TEST(Phase, Examples) {
  EXPECT_DOUBLE_EQ(liouville_phase(split("1", "0"), 0.0, 5.0), 5.0);
  EXPECT_NEAR(liouville_phase(split("1/x^2", "0"), 1.0, std::numbers::e), 1.0, 1e-12);
  EXPECT_NEAR(liouville_phase(split("x^4", "0"), 1.0, 2.0), 7.0 / 3.0, 1e-12);
}

TEST(Phase, MapInverts) {
  const PhaseMap phase(split("1+x^2", "0"), 0.5, +1);
  for (double x : {0.6, 1.0, 4.0, 30.0}) EXPECT_NEAR(phase.inverse(phase(x)), x, 1e-10 * x);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify_regime(split("1", "3/(4*x^2)"), EndpointKind::Infinity).regime, Regime::ConstantF_Exp);
  EXPECT_EQ(classify_regime(split("0-1", "3/(4*x^2)"), EndpointKind::Infinity).regime, Regime::ConstantF_Osc);
  EXPECT_EQ(classify_regime(split("x^2", "0"), EndpointKind::Infinity).regime, Regime::ExpInfinity);
  EXPECT_EQ(classify_regime(split("0-x^2", "0"), EndpointKind::Infinity).regime, Regime::OscInfinity);
  EXPECT_EQ(classify_regime(split("0", "1/x^3"), EndpointKind::Infinity).regime, Regime::AlgebraicInfinity);
  const Classification sing = classify_regime(split("1/x^2", "1-1/(4*x^2)"), EndpointKind::Zero);
  EXPECT_EQ(sing.regime, Regime::ExpSingular);
  EXPECT_EQ(sing.reduction, Reduction::Inversion);
}

TEST(Classify, RejectsNonIntegrableAlgebraicPerturbation) {
  EXPECT_THROW(classify_regime(split("0", "2/x^2"), EndpointKind::Infinity), HypothesisFailed);
  // The modified-Bessel split at infinity has psi = x, which is not integrable.
  EXPECT_THROW(classify_regime(split("1/x^2", "1-1/(4*x^2)"), EndpointKind::Infinity), HypothesisFailed);
}

TEST(Classify, Deterministic) {
  const CoefficientSplit s = split("1", "3/(4*x^2)");
  const Classification a = classify_regime(s, EndpointKind::Infinity), b = classify_regime(s, EndpointKind::Infinity);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t k = 0; k < a.checks.size(); ++k) EXPECT_EQ(a.checks[k].value, b.checks[k].value);
}

TEST(Inversion, SelfDualAndConstant) {
  const InvertedProblem inv = invert_at_zero(split("1/x^2", "1-1/(4*x^2)", {0.0, 1.0}));
  for (double s : {1.5, 3.0, 10.0}) EXPECT_NEAR(evaluate(inv.f_tilde, s), 1 / (s * s), 1e-15);
  const InvertedProblem c = invert_at_zero(split("1", "0", {0.0, 1.0}));
  for (double s : {1.5, 3.0}) EXPECT_NEAR(evaluate(c.f_tilde, s), std::pow(s, -4), 1e-15);
}

TEST(Inversion, PsiIdentity) {
  const CoefficientSplit s = split("1/x^2", "1-1/(4*x^2)", {0.0, 1.0});
  const PsiFunction psi = compute_psi(s);
  const PsiFunction psi_t = compute_psi(invert_at_zero(s).split);
  for (int k = 0; k < 20; ++k) {
    const double t = std::pow(10.0, 4.0 * k / 19.0);
    const double expect = psi(1 / t) / (t * t);
    EXPECT_NEAR(psi_t(t), expect, 1e-8 * std::fabs(expect));
  }
}

TEST(Approximants, ConstantPositiveF) {
  const ApproximantPair p = build_approximants(Regime::ConstantF_Exp, split("1", "0"), 0.0);
  for (double x : {0.0, 1.0, 3.0}) {
    EXPECT_NEAR(p.first.value(x).real(), std::exp(x), 1e-12 * std::exp(x));
    EXPECT_NEAR(p.second.value(x).real(), std::exp(-x), 1e-15);
    EXPECT_NEAR(p.first.derivative(x).real(), std::exp(x), 1e-12 * std::exp(x));
    EXPECT_NEAR(p.second.derivative(x).real(), -std::exp(-x), 1e-15);
  }
}

TEST(Approximants, OscillatoryDerivativeLimits) {
  const ApproximantPair p = build_approximants(Regime::ConstantF_Osc, split("0-1", "0"), 0.0);
  EXPECT_EQ(p.first.derivative_limit(), Complex(0, 1));
  EXPECT_EQ(p.second.derivative_limit(), Complex(0, -1));
  const double x = 2.0;
  const Complex u = p.first.value(x), du = p.first.derivative(x);
  EXPECT_NEAR(std::abs(p.first.normalize_derivative(x, u, du) - Complex(0, 1)), 0.0, 1e-14);
}

TEST(Approximants, FactorizationIsConsistent) {
  const CoefficientSplit s = split("x^2", "0");
  const ApproximantPair p = build_approximants(Regime::ExpInfinity, s, 1.0);
  for (double x : {1.0, 2.0, 5.0}) {
    EXPECT_NEAR(std::abs(p.first.normalize_value(x, p.first.value(x))), 1.0, 1e-13);
    EXPECT_NEAR(std::abs(p.second.normalize_value(x, p.second.value(x))), 1.0, 1e-13);
  }
  double prev = kInfinity;
  for (double x = 1.0; x < 6; x += 0.25) {
    const double v = p.second.v_value(x).real();
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(Approximants, RegimeMismatch) {
  EXPECT_THROW(build_approximants(Regime::ConstantF_Exp, split("x^2", "0"), 1.0), Error);
  EXPECT_THROW(build_approximants(Regime::OscInfinity, split("x^2", "0"), 1.0), Error);
  EXPECT_THROW(build_approximants(Regime::AlgebraicInfinity, split("0", "1/x^3"), 1.0), Error);
}

TEST(LogSubstitute, ShiftsPerturbation) {
  const CoefficientSplit s = split("0", "0-1/(4*x^2)", {0.0, 1.0});
  const CoefficientSplit w = log_substitute(s);
  for (double t : {0.5, 2.0, 10.0}) EXPECT_NEAR(evaluate(w.g(), t), 0.0, 1e-15);
}
