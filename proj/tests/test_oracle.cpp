#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lgasym/oracle.hpp"

using namespace lgasym;

TEST(Ivp, Exponential) {
  const OdeTrajectory t = integrate_ivp([](double) { return 1.0; }, 0.0, 1.0, 1.0, 5.0, 1e-12, {5.0});
  EXPECT_NEAR(t.u.back(), std::exp(5.0), 1e-9 * std::exp(5.0));
}

TEST(Ivp, Cosine) {
  const std::vector<double> xs = sample_points(0.0, 10.0, 21, false);
  const OdeTrajectory t = integrate_ivp([](double) { return -1.0; }, 0.0, 1.0, 0.0, 10.0, 1e-12, xs);
  ASSERT_EQ(t.x.size(), xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) EXPECT_NEAR(t.u[k], std::cos(xs[k]), 1e-9);
}

TEST(Ivp, DegenerateHalfOrderPotential) {
  const RealFn V = [](double x) { return 1 + (4 * 0.25 - 1) / (4 * x * x); };
  const OdeTrajectory t = integrate_ivp(V, 1.0, std::cosh(1.0), std::sinh(1.0), 8.0, 1e-12, {8.0});
  EXPECT_NEAR(t.u.back(), std::cosh(8.0), 1e-9 * std::cosh(8.0));
}

TEST(Ivp, BackwardAndTinyData) {
  const double u = std::exp(-40.0);
  const OdeTrajectory t = integrate_ivp([](double) { return 1.0; }, 40.0, u, -u, 30.0, 1e-12, {30.0});
  EXPECT_NEAR(t.u.back() / std::exp(-30.0), 1.0, 1e-9);
}

TEST(Ivp, ErrorShrinksWithTolerance) {
  auto err = [](double tol) {
    const OdeTrajectory t = integrate_ivp([](double) { return 1.0; }, 0.0, 1.0, 1.0, 5.0, tol, {5.0});
    return std::fabs(t.u.back() - std::exp(5.0)) / std::exp(5.0);
  };
  EXPECT_GE(err(1e-7) / err(1e-8), 8.0);
}

TEST(Ivp, WronskianConstant) {
  const RealFn V = [](double x) { return -1 + 0.75 / (x * x); };
  const std::vector<double> xs = sample_points(1.0, 20.0, 40, false);
  const OdeTrajectory a = integrate_ivp(V, 1.0, 1.0, 0.0, 20.0, 1e-13, xs);
  const OdeTrajectory b = integrate_ivp(V, 1.0, 0.0, 1.0, 20.0, 1e-13, xs);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    EXPECT_NEAR(a.u[k] * b.du[k] - a.du[k] * b.u[k], 1.0, 1e-8);
  }
}

TEST(ClosedForm, HalfOrderLimits) {
  const double r = 40.0;
  EXPECT_NEAR(std::sqrt(r) * std::exp(-r) * closed_form_half(BesselKind::I, r), 1 / std::sqrt(2 * std::numbers::pi),
              1e-12);
  EXPECT_NEAR(std::sqrt(1e-8) * closed_form_half(BesselKind::K, 1e-8), std::sqrt(std::numbers::pi / 2), 1e-7);
  EXPECT_THROW(closed_form_half(BesselKind::J, 1.0), DomainError);
}

TEST(ClosedForm, SatisfiesModifiedBesselEquation) {
  for (BesselKind kind : {BesselKind::I, BesselKind::K}) {
    for (int k = 0; k < 20; ++k) {
      const double r = 0.5 + 0.5 * k, h = 1e-3;
      auto u = [&](double t) { return closed_form_half(kind, t); };
      const double d1 = (u(r - 2 * h) - 8 * u(r - h) + 8 * u(r + h) - u(r + 2 * h)) / (12 * h);
      const double d2 = (-u(r + 2 * h) + 16 * u(r + h) - 30 * u(r) + 16 * u(r - h) - u(r - 2 * h)) / (12 * h * h);
      const double res = d2 + d1 / r - (1 + 0.25 / (r * r)) * u(r);
      EXPECT_LE(std::fabs(res), 1e-8 * std::fabs(u(r)));
    }
  }
}

TEST(Series, SmallArgumentLimits) {
  const double r = 1e-3;
  EXPECT_NEAR(bessel_series(BesselKind::I, 1.0, r).value / r, 0.5, 1e-6);
  EXPECT_NEAR(bessel_series(BesselKind::J, 1.0, r).value / r, 0.5, 1e-6);
  EXPECT_NEAR(bessel_series(BesselKind::I, 0.0, 1e-6).value, 1.0, 1e-12);
  EXPECT_NEAR(bessel_series(BesselKind::I, 1.0, r).leading, 0.5, 1e-15);
}

TEST(Series, KnownValues) {
  EXPECT_NEAR(bessel_series(BesselKind::I, 0.0, 1.0).value, 1.2660658777520082, 1e-14);
  EXPECT_NEAR(bessel_series(BesselKind::J, 0.0, 1.0).value, 0.7651976865579666, 1e-14);
  EXPECT_NEAR(bessel_log_series(BesselKind::K, 1.0).value, 0.42102443824070834, 1e-13);
  EXPECT_NEAR(bessel_log_series(BesselKind::Y, 1.0).value, 0.08825696421567696, 1e-13);
}

TEST(Resolvent, ThreeDimensionalKernels) {
  for (double r : {0.5, 1.0, 3.0}) {
    EXPECT_NEAR(resolvent_kernel(3, 0.0, r), 1 / (4 * std::numbers::pi * r), 1e-12);
    const double exact = std::exp(-std::sqrt(2.0) * r) / (4 * std::numbers::pi * r);
    EXPECT_NEAR(resolvent_kernel(3, 2.0, r), exact, 1e-10 * exact);
  }
}

TEST(Fixtures, Lookup) {
  EXPECT_TRUE(find_fixture("modified_bessel:nu=0.5").has_closed_form());
  EXPECT_FALSE(find_fixture("modified_bessel:nu=1").has_closed_form());
  EXPECT_EQ(find_fixture("bessel:nu=0").split_text().first, "0-1");
  EXPECT_THROW(find_fixture("nonsense"), OracleError);
  EXPECT_FALSE(fixture_names().empty());
}

TEST(Fit, RatioRecoversScale) {
  const std::vector<double> x = sample_points(1.0, 10.0, 50, false);
  std::vector<double> u, m;
  for (double t : x) {
    m.push_back(std::exp(t));
    u.push_back(2.5 * std::exp(t));
  }
  const AsymptoticFit f = fit_ratio(x, u, m);
  EXPECT_NEAR(f.c.real(), 2.5, 1e-10);
  EXPECT_LT(f.residual, 1e-12);
}

TEST(Fit, OscillatoryAmplitudeAndPhase) {
  std::mt19937 rng(11u);
  std::uniform_real_distribution<double> amp(0.5, 3.0), ph(0.0, std::numbers::pi);
  const std::vector<double> x = sample_points(10.0, 30.0, 400, false);
  for (int k = 0; k < 10; ++k) {
    const double c = amp(rng), theta = ph(rng);
    std::vector<double> u, phase, a;
    for (double t : x) {
      phase.push_back(t);
      a.push_back(1.0);
      u.push_back(c * std::cos(t + theta));
    }
    const AsymptoticFit f = fit_oscillatory(x, u, phase, a);
    EXPECT_NEAR(std::fabs(f.amplitude), c, 1e-10);
    EXPECT_GE(f.theta, 0.0);
    EXPECT_LT(f.theta, std::numbers::pi);
    EXPECT_NEAR(std::cos(2 * f.theta), std::cos(2 * theta), 1e-9);
  }
}

TEST(Fit, ExponentialTrajectoryAgainstApproximant) {
  const CoefficientSplit s = CoefficientSplit::make(parse("1"), parse("0"), Interval{0.0, kInfinity});
  const ApproximantPair p = build_approximants(Regime::ConstantF_Exp, s, 0.0);
  const std::vector<double> xs = sample_points(2.0, 10.0, 30, false);
  const OdeTrajectory t = integrate_ivp([](double) { return 1.0; }, 0.0, 1.0, 1.0, 10.0, 1e-13, xs);
  const AsymptoticFit f = fit_asymptotic_constants(t, p, 2.0, 10.0);
  EXPECT_NEAR(f.c.real(), 1.0, 1e-9);
  EXPECT_LT(f.residual, 1e-9);
}

TEST(Samples, Spacing) {
  const std::vector<double> lin = sample_points(2.0, 4.0, 5, false);
  EXPECT_DOUBLE_EQ(lin[1], 2.5);
  const std::vector<double> lg = sample_points(1.0, 100.0, 3, true);
  EXPECT_NEAR(lg[1], 10.0, 1e-12);
  EXPECT_EQ(lg.back(), 100.0);
}
