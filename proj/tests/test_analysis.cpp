#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lgasym/analysis.hpp"

using namespace lgasym;

namespace {

AnalysisOptions options(EndpointKind e = EndpointKind::Infinity, bool oracle = true) {
  AnalysisOptions o;
  o.endpoint = e;
  o.oracle = oracle;
  return o;
}

}  // namespace

TEST(Pipeline, ModifiedBesselOrderOne) {
  const Analysis an = Analysis::run("1", "3/(4*x^2)", options());
  EXPECT_EQ(an.regime(), Regime::ConstantF_Exp);
  EXPECT_TRUE(an.verification().all_pass());
  const double zinf = an.solution().main.real();
  EXPECT_LT(std::fabs(zinf - 1) + an.solution().main_error, an.certificate().radius());
  ASSERT_TRUE(an.oracle().has_value());
  EXPECT_LT(an.oracle()->max_deviation, 1e-6);
}

TEST(Pipeline, BesselOscillatoryCoefficients) {
  const Analysis an = Analysis::run("0-1", "3/(4*x^2)", options());
  EXPECT_EQ(an.regime(), Regime::ConstantF_Osc);
  ASSERT_TRUE(an.coefficients().has_value());
  const OscillatoryCoeffs c = *an.coefficients();
  EXPECT_GT(std::abs(c.xi1), 0.5);
  EXPECT_LT(std::abs(c.xi2), 0.5);
  EXPECT_GT(std::abs(c.determinant()), 0.0);
}

TEST(Pipeline, SingularEndpointThroughInversion) {
  const Analysis an = Analysis::run("1/x^2", "1-1/(4*x^2)", options(EndpointKind::Zero, false));
  EXPECT_EQ(an.regime(), Regime::ExpSingular);
  EXPECT_EQ(an.reduction(), Reduction::Inversion);
  // The recessive branch at 0 behaves like x^{3/2}.
  const double a = an.branch(Branch::Recessive, 1e-3).value.real() / std::pow(1e-3, 1.5);
  const double b = an.branch(Branch::Recessive, 1e-4).value.real() / std::pow(1e-4, 1.5);
  EXPECT_NEAR(a / b, 1.0, 1e-3);
}

TEST(Pipeline, ZeroPerturbationIsExact) {
  const Analysis an = Analysis::run("1", "0", options(EndpointKind::Infinity, false));
  for (double x : {0.5, 3.0, 20.0}) {
    EXPECT_EQ(an.branch(Branch::Dominant, x).ratio, Complex(1.0));
    EXPECT_NEAR(an.branch(Branch::Dominant, x).value.real(), std::exp(x), 1e-12 * std::exp(x));
  }
}

TEST(Pipeline, PolynomialF) {
  const Analysis an = Analysis::run("x^2", "0", options());
  EXPECT_EQ(an.regime(), Regime::ExpInfinity);
  EXPECT_TRUE(an.verification().all_pass());
  EXPECT_LT(an.oracle()->max_deviation, 1e-6);
}

TEST(Pipeline, AlgebraicRegime) {
  const Analysis an = Analysis::run("0", "1/x^4", options(EndpointKind::Infinity, false));
  EXPECT_EQ(an.regime(), Regime::AlgebraicInfinity);
  // Corrections decay like 1/x here.
  const double x = 1e4;
  const BranchSample d = an.branch(Branch::Dominant, x);
  EXPECT_NEAR(d.ratio.real(), 1.0, 1e-3);
  const BranchSample r = an.branch(Branch::Recessive, x);
  EXPECT_NEAR(r.value.real(), 1.0, 1e-3);
}

TEST(Pipeline, RejectsHypothesisFailure) {
  EXPECT_THROW(Analysis::run("0", "2/x^2", options()), HypothesisFailed);
  EXPECT_THROW(Analysis::run("x-2", "0", options()), HypothesisFailed);
}

TEST(Pipeline, EnvelopeBoundsNormalizedSolution) {
  const Analysis an = Analysis::run("1", "3/(4*x^2)", options(EndpointKind::Infinity, false));
  const double zinf = an.solution().main.real();
  for (double x = an.cutoff_original(); x < 40; x += 1.7) {
    const BranchSample s = an.branch(Branch::Dominant, x);
    EXPECT_LE(std::fabs(s.ratio.real() * zinf), an.envelope(x) * (1 + 1e-10));
  }
}
