#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lgasym/quadrature.hpp"

using namespace lgasym;

TEST(Finite, Polynomial) {
  const QuadResult r = integrate_finite([](double x) { return x * x; }, 0.0, 1.0, 1e-13);
  EXPECT_NEAR(r.value, 1.0 / 3.0, 1e-12);
}

TEST(Finite, Reciprocal) {
  EXPECT_NEAR(integrate_finite([](double r) { return 1 / r; }, 1.0, 2.0, 1e-12).value, std::log(2.0), 1e-10);
}

TEST(Finite, EndpointSingularity) {
  QuadOptions o;
  o.left = Endpoint::Singular;
  const QuadResult r = integrate_finite([](double x) { return 1 / std::sqrt(x); }, 0.0, 1.0, 1e-10, o);
  EXPECT_NEAR(r.value, 2.0, 1e-8);
}

TEST(Finite, ReversedLimitsAndEmptyInterval) {
  EXPECT_THROW(integrate_finite([](double x) { return x; }, 2.0, 0.0, 1e-12), QuadratureError);
  EXPECT_EQ(integrate_finite([](double x) { return x; }, 1.0, 1.0, 1e-12).value, 0.0);
}

TEST(Finite, NonFiniteSampleIsAnError) {
  EXPECT_THROW(integrate_finite([](double) { return std::nan(""); }, 0.0, 1.0, 1e-10), QuadratureError);
}

TEST(Infinite, Examples) {
  EXPECT_NEAR(integrate_to_infinity([](double x) { return 1 / (x * x); }, 1.0, 1e-12).value, 1.0, 1e-10);
  EXPECT_NEAR(integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0, 1e-12).value, 1.0, 1e-10);
}

TEST(Infinite, HarmonicTailDiverges) {
  EXPECT_THROW(integrate_to_infinity([](double x) { return 1 / x; }, 1.0, 1e-10), DivergenceError);
  EXPECT_THROW(integrate_to_infinity([](double x) { return x; }, 1.0, 1e-10), DivergenceError);
}

TEST(Infinite, NearZero) {
  // int_0^1 x^{-1/2} dx through the reciprocal map.
  EXPECT_NEAR(integrate_near_zero([](double x) { return 1 / std::sqrt(x); }, 1.0, 1e-11).value, 2.0, 1e-8);
}

TEST(L1Tail, Examples) {
  EXPECT_NEAR(l1_tail_norm([](double x) { return 1 / (x * x); }, 2.0, 1e-12), 0.5, 1e-10);
  EXPECT_NEAR(l1_tail_norm([](double x) { return -std::exp(-x); }, 0.0, 1e-12), 1.0, 1e-10);
  EXPECT_THROW(l1_tail_norm([](double r) { return r; }, 1.0, 1e-10), DivergenceError);
}

TEST(Infinite, PropertyPowerTails) {
  std::mt19937 rng(3u);
  std::uniform_real_distribution<double> power(1.5, 4.0), start(0.5, 5.0);
  for (int k = 0; k < 25; ++k) {
    const double p = power(rng), a = start(rng);
    const double exact = std::pow(a, 1 - p) / (p - 1);
    const double got = integrate_to_infinity([p](double x) { return std::pow(x, -p); }, a, 1e-12).value;
    EXPECT_NEAR(got, exact, 1e-9 * (1 + exact)) << "p=" << p << " a=" << a;
  }
}

TEST(Infinite, ErrorEstimateIsReported) {
  const QuadResult r = integrate_to_infinity([](double x) { return std::exp(-x * x); }, 0.0, 1e-12);
  EXPECT_NEAR(r.value, std::sqrt(std::numbers::pi) / 2, 1e-11);
  EXPECT_GT(r.evaluations, 0u);
  EXPECT_LE(r.error_estimate, 1e-10);
}
