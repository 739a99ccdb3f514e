#include <gtest/gtest.h>

#include <cmath>

#include "lgasym/certificate.hpp"
#include "lgasym/volterra.hpp"

using namespace lgasym;

TEST(Cutoff, ZeroPerturbationKeepsLeft) {
  EXPECT_EQ(find_cutoff([](double) { return 0.0; }, 2.5), 2.5);
}

TEST(Cutoff, InverseSquare) {
  // tail = 1/a, so the target 0.9 log 2 gives a = 1 / (0.9 log 2).
  const double a = find_cutoff([](double x) { return 1 / (x * x); }, 0.1);
  const double exact = 1 / (0.9 * std::log(2.0));
  EXPECT_GE(a, exact * (1 - 1e-12));
  EXPECT_LT(a, exact * 1.01);
  EXPECT_LE(1 / a, 0.9 * std::log(2.0));
  const double plain = find_cutoff([](double x) { return 1 / (x * x); }, 0.1, std::log(2.0));
  EXPECT_NEAR(plain, 1 / std::log(2.0), 0.01);
}

TEST(Cutoff, ConstantIsNotIntegrable) {
  EXPECT_THROW(find_cutoff([](double) { return 1.0; }, 0.0), NotIntegrable);
}

TEST(Certificate, ZeroNorm) {
  const Certificate c = gronwall_certificate([](double) { return 0.0; }, 0.0);
  EXPECT_EQ(c.radius(), 0.0);
  EXPECT_TRUE(c.valid());
}

TEST(Certificate, BoundaryIsRejected) {
  // |g| = e^{-x} on [a, inf) has norm e^{-a}; choose a so that the norm is log 2.
  const double a = -std::log(std::log(2.0));
  const Certificate c = gronwall_certificate([](double x) { return std::exp(-x); }, a);
  EXPECT_NEAR(c.radius(), 1.0, 1e-9);
  EXPECT_FALSE(c.valid());
}

TEST(Certificate, ModifiedBesselTail) {
  const Certificate c = gronwall_certificate([](double x) { return 0.75 / (x * x); }, 2.0);
  EXPECT_NEAR(c.g_l1_tail, 0.375, 1e-10);
  EXPECT_NEAR(c.radius(), std::exp(0.375) - 1, 1e-9);
  EXPECT_TRUE(c.valid());
}

TEST(Verify, PassesOnSolverOutput) {
  const RealFn zero = [](double) { return 0.0; };
  EXPECT_TRUE(verify_certificate(gronwall_certificate(zero, 0.0), solve_exponential(zero, 0.0, 5.0, 0.1)).all_pass());
  const RealFn g = [](double x) { return std::exp(-x); };
  const VolterraSolution s = solve_exponential(g, 1.0, 30.0, 0.01);
  EXPECT_TRUE(verify_certificate(gronwall_certificate(g, 1.0), s).all_pass());
}

TEST(Verify, CorruptedSolutionFails) {
  const RealFn g = [](double x) { return std::exp(-x); };
  VolterraSolution s = solve_exponential(g, 1.0, 30.0, 0.01);
  for (Complex& z : s.z) z *= 3.0;
  const VerificationReport r = verify_certificate(gronwall_certificate(g, 1.0), s);
  EXPECT_FALSE(r.all_pass());
  EXPECT_FALSE(r.checks.front().pass);
}

TEST(Envelope, MatchesClosedForm) {
  const RealFn g = [](double x) { return std::exp(-x); };
  EXPECT_NEAR(gronwall_envelope(g, 0.0, 3.0), std::exp(1 - std::exp(-3.0)), 1e-12);
  EXPECT_EQ(gronwall_envelope(g, 2.0, 1.0), 1.0);
}
