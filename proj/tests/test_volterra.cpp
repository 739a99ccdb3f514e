#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lgasym/oracle.hpp"
#include "lgasym/volterra.hpp"

using namespace lgasym;

namespace {
const RealFn zero = [](double) { return 0.0; };
const RealFn decaying = [](double s) { return std::exp(-s); };
}  // namespace

TEST(Exponential, ZeroPerturbation) {
  const VolterraSolution s = solve_exponential(zero, 0.0, 10.0, 0.1);
  for (const Complex& z : s.z) EXPECT_EQ(z, Complex(1.0));
  EXPECT_EQ(s.main, Complex(1.0));
  EXPECT_EQ(connection_constant(s, 1e-6), Complex(1.0));
}

TEST(Exponential, GronwallEnvelope) {
  const VolterraSolution s = solve_exponential(decaying, 0.0, 20.0, 0.05);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double x = s.t(k);
    EXPECT_LE(std::abs(s.z[k]), std::exp(1 - std::exp(-x)) * (1 + 1e-14));
    EXPECT_LE(std::abs(s.z[k]), std::numbers::e);
  }
}

TEST(Exponential, MatchesOdeOracle) {
  // w = e^t z solves w'' = (1 + g) w with w(0) = 1, w'(0) = 1.
  const VolterraSolution s = solve_exponential(decaying, 0.0, 12.0, 0.01);
  const OdeTrajectory t = integrate_ivp([](double x) { return 1 + std::exp(-x); }, 0.0, 1.0, 1.0, 12.0, 1e-12, {12.0});
  EXPECT_NEAR(s.z.back().real(), t.u.back() * std::exp(-12.0), 1e-4);
}

TEST(Exponential, StepHalvingRatio) {
  Complex z[3];
  const double h[3] = {0.1, 0.05, 0.025};
  for (int k = 0; k < 3; ++k) z[k] = solve_exponential(decaying, 0.0, 20.0, h[k]).z.back();
  const double ratio = std::abs(z[0] - z[1]) / std::abs(z[1] - z[2]);
  EXPECT_GE(ratio, 3.5);
  EXPECT_LE(ratio, 4.5);
}

TEST(Exponential, ConnectionConstantInsideDisk) {
  const VolterraSolution s = solve_exponential(decaying, 1.0, 30.0, 0.01);
  const double r = std::exp(std::exp(-1.0)) - 1;
  EXPECT_LT(std::abs(s.main - Complex(1.0)), r);
  EXPECT_LT(std::abs(s.main - Complex(1.0)), 1.0);
}

TEST(Exponential, ExtrapolationImprovesAccuracy) {
  FunctionSource src(decaying);
  VolterraOptions plain, rich;
  plain.step = rich.step = 0.05;
  plain.x_max = rich.x_max = 30.0;
  rich.extrapolate = true;
  const Complex ref = solve_exponential(decaying, 0.0, 30.0, 0.002).main;
  const Complex a = solve_exponential(src, 0.0, plain).main;
  const VolterraSolution b = solve_exponential(src, 0.0, rich);
  EXPECT_TRUE(b.extrapolated);
  EXPECT_LT(std::abs(b.main - ref), std::abs(a - ref));
}

TEST(Oscillatory, ZeroPerturbation) {
  const OscillatoryPair p = solve_oscillatory(zero, 0.0, 10.0, 0.1);
  EXPECT_EQ(p.coeffs.xi1, Complex(1.0));
  EXPECT_EQ(p.coeffs.xi2, Complex(0.0));
  EXPECT_EQ(p.coeffs.eta2, Complex(1.0));
}

TEST(Oscillatory, BesselZeroCoefficients) {
  const RealFn g = [](double s) { return -0.25 / (s * s); };
  FunctionSource src(g);
  VolterraOptions o;
  o.step = 0.01;
  o.tail_tol = 1e-5;
  const OscillatoryPair p = solve_oscillatory(src, 2.0, o);
  EXPECT_GT(std::abs(p.coeffs.xi1), 0.5);
  EXPECT_LT(std::abs(p.coeffs.xi2), 0.5);
  EXPECT_GT(std::abs(p.coeffs.determinant()), 0.0);
}

TEST(Algebraic, ZeroPerturbation) {
  const VolterraSolution s = solve_algebraic(zero, 1.0, 10.0, 0.1);
  for (const Complex& z : s.z) EXPECT_EQ(z, Complex(1.0));
}

TEST(Algebraic, QuarticDecayBound) {
  const RealFn g = [](double s) { return std::pow(s, -4); };
  FunctionSource src(g, {}, true);
  VolterraOptions o;
  o.step = 0.01;
  o.x_max = 200.0;
  o.extrapolate = true;
  const VolterraSolution s = solve_algebraic(src, 1.0, o);
  for (std::size_t k = 0; k < s.size(); ++k) {
    EXPECT_LE(std::abs(s.z[k] - Complex(1.0)), s.zg_l1[k] * (1 + 1e-12) + 1e-14);
    EXPECT_LE(std::abs(s.z[k] - Complex(1.0)), std::exp(0.5) - 1);
  }
  // z_inf is the limit of u'. Exactly, u = x (A e^{1/x} + B e^{-1/x}) and
  // u'(inf) = A + B = cosh 1 for u(1) = u'(1) = 1.
  const OdeTrajectory t =
      integrate_ivp([](double x) { return std::pow(x, -4); }, 1.0, 1.0, 1.0, 1000.0, 1e-13, {1000.0});
  EXPECT_NEAR(s.main.real(), std::cosh(1.0), 1e-6);
  EXPECT_NEAR(s.main.real(), t.du.back(), 2e-6);
  EXPECT_LT(s.main_discretization, 1e-4);
}

TEST(SecondSolution, Exponential) {
  const SolutionFn u1 = [](double x) { return ValueDerivative{std::exp(x), std::exp(x)}; };
  for (double x : {0.0, 1.0, 5.0}) {
    const ValueDerivative u2 = second_solution(u1, x, Regime::ConstantF_Exp);
    EXPECT_NEAR(u2.value, std::exp(-x), 1e-12 * std::exp(-x));
    EXPECT_NEAR(u2.derivative, -std::exp(-x), 1e-12 * std::exp(-x));
  }
}

TEST(SecondSolution, Algebraic) {
  const SolutionFn u1 = [](double x) { return ValueDerivative{x, 1.0}; };
  for (double x : {1.0, 10.0, 1e4}) {
    const ValueDerivative u2 = second_solution(u1, x, Regime::AlgebraicInfinity);
    EXPECT_NEAR(u2.value, 1.0, 1e-10);
    EXPECT_NEAR(u2.derivative, 0.0, 1e-10);
  }
}

TEST(SecondSolution, HalfOrderModifiedBessel) {
  // sqrt(2 pi) sqrt(x) I_{1/2}(x) = 2 sinh x; its second solution is 2 e^{-x}.
  const SolutionFn u1 = [](double x) { return ValueDerivative{2 * std::sinh(x), 2 * std::cosh(x)}; };
  const ValueDerivative u2 = second_solution(u1, 30.0, Regime::ConstantF_Exp);
  EXPECT_NEAR(u2.value / std::exp(-30.0), 1.0, 1e-6);
}

TEST(SecondSolution, WronskianIsMinusTwo) {
  std::mt19937 rng(5u);
  std::uniform_real_distribution<double> x(0.5, 8.0);
  const SolutionFn u1 = [](double t) { return ValueDerivative{std::cosh(2 * t), 2 * std::sinh(2 * t)}; };
  for (int k = 0; k < 10; ++k) {
    const double t = x(rng);
    const ValueDerivative a = u1(t), b = second_solution(u1, t, Regime::ExpInfinity);
    EXPECT_NEAR(a.value * b.derivative - a.derivative * b.value, -2.0, 1e-8);
  }
}

TEST(Recessive, DecaysLikeExponential) {
  const RealFn g = [](double s) { return 0.75 / ((s + 2) * (s + 2)); };
  FunctionSource src(g);
  VolterraOptions o;
  o.step = 0.01;
  const VolterraSolution s = solve_exponential(src, 0.0, o);
  const RecessiveSolution rec(s);
  const auto [w, dw] = rec.eval_scaled(s.x_max());
  EXPECT_NEAR(w, 1.0, 1e-3);
  EXPECT_NEAR(dw, -1.0, 1e-3);
}
