#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include "lgasym/expr.hpp"

using namespace lgasym;

TEST(Parse, Literal) {
  const Expr e = parse("1");
  EXPECT_EQ(e.op(), Op::Constant);
  EXPECT_EQ(evaluate(e, 3.0), 1.0);
}

TEST(Parse, VanishingNumerator) {
  const Expr e = parse("(4*0.25-1)/(4*x^2)");
  for (double x : {0.1, 1.0, 7.5, 1e3}) EXPECT_EQ(evaluate(e, x), 0.0);
}

TEST(Parse, Arithmetic) { EXPECT_DOUBLE_EQ(evaluate(parse("1 - 1/(4*x^2)"), 1.0), 0.75); }

TEST(Parse, Precedence) {
  EXPECT_DOUBLE_EQ(evaluate(parse("-x^2"), 3.0), -9.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("2^3^2"), 0.0), 512.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("2*3+4/2-1"), 0.0), 7.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("  sqrt( x )*abs(0-x) "), 4.0), 8.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("1.5e2 + 2E-1"), 0.0), 150.2);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse("1 +"), ParseError);
  EXPECT_THROW(parse("foo(x)"), ParseError);
  EXPECT_THROW(parse("x^x"), ParseError);
  EXPECT_THROW(parse("(x"), ParseError);
  try {
    parse("x + $");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(Evaluate, Examples) {
  EXPECT_DOUBLE_EQ(evaluate(parse("x^2"), 3.0), 9.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("exp(-x)"), 0.0), 1.0);
  EXPECT_THROW(evaluate(parse("1/x"), 0.0), DomainError);
  EXPECT_THROW(evaluate(parse("log(x)"), -1.0), DomainError);
  EXPECT_THROW(evaluate(parse("sqrt(x)"), -1.0), DomainError);
}

TEST(Evaluate, CompiledMatchesTree) {
  const Expr e = parse("sin(x)*exp(-x/3) + x^(-0.25) - log(1+x^2)/(2+cos(x))");
  const CompiledExpr c(e);
  for (double x = 0.1; x < 20; x += 0.37) EXPECT_DOUBLE_EQ(c(x), evaluate(e, x));
  EXPECT_THROW(CompiledExpr(parse("1/x"))(0.0), DomainError);
}

TEST(Differentiate, Examples) {
  EXPECT_DOUBLE_EQ(evaluate(differentiate(parse("x^2")), 3.0), 6.0);
  EXPECT_DOUBLE_EQ(evaluate(differentiate(parse("exp(-x)")), 0.0), -1.0);
}

TEST(Differentiate, SecondDerivativeOfQuarterPower) {
  const Expr e = parse("x^(-1/4)");
  const double x = 2.0, h = 1e-4;
  auto f = [&](double t) { return evaluate(e, t); };
  // Five-point central stencil for the second derivative.
  const double fd = (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
  const double exact = evaluate(differentiate(e, 2), x);
  EXPECT_NEAR(exact, (-0.25) * (-1.25) * std::pow(x, -2.25), 1e-15);
  EXPECT_LT(std::fabs(fd - exact) / std::fabs(exact), 1e-6);
}

TEST(Differentiate, AbsUsesSign) {
  const Expr d = differentiate(parse("abs(x)"));
  EXPECT_EQ(evaluate(d, 2.0), 1.0);
  EXPECT_EQ(evaluate(d, -2.0), -1.0);
  EXPECT_EQ(evaluate(d, 0.0), 0.0);
}

namespace {

// Random expressions over the grammar, built to be defined on [1, 3].
class RandomExpr {
public:
  explicit RandomExpr(unsigned seed) : rng_(seed) {}

  std::string make(int depth) {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 9 : 1);
    switch (pick(rng_)) {
      case 0: return "x";
      case 1: return number();
      case 2: return "(" + make(depth - 1) + "+" + make(depth - 1) + ")";
      case 3: return "(" + make(depth - 1) + "-" + make(depth - 1) + ")";
      case 4: return "(" + make(depth - 1) + "*" + make(depth - 1) + ")";
      case 5: return "(" + make(depth - 1) + ")/(2+sin(" + make(depth - 1) + "))";
      case 6: return "exp(" + make(depth - 1) + "/8)";
      case 7: return "cos(" + make(depth - 1) + ")";
      case 8: return "sqrt(1+(" + make(depth - 1) + ")^2)";
      default: return "log(2+x)^" + number();
    }
  }

private:
  std::string number() {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    return "(" + format_number(std::round(u(rng_) * 100) / 100) + ")";
  }
  std::mt19937 rng_;
};

}  // namespace

TEST(Differentiate, PropertyMatchesFiniteDifferences) {
  RandomExpr gen(20240917u);
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> point(1.0, 3.0);
  for (int k = 0; k < 50; ++k) {
    const Expr e = parse(gen.make(4));
    const Expr d = differentiate(e);
    for (int j = 0; j < 20; ++j) {
      const double x = point(rng), h = 1e-4;
      const double fd = (evaluate(e, x + h) - evaluate(e, x - h)) / (2 * h);
      const double exact = evaluate(d, x);
      EXPECT_LE(std::fabs(exact - fd), 1e-5 * (1 + std::fabs(exact))) << to_string(e) << " at " << x;
    }
  }
}

TEST(Print, RoundTripIsIdentity) {
  RandomExpr gen(99u);
  for (int k = 0; k < 200; ++k) {
    const Expr e = parse(gen.make(5));
    const Expr again = parse(to_string(e));
    EXPECT_TRUE(structurally_equal(e, again)) << to_string(e) << " vs " << to_string(again);
  }
}

TEST(Substitute, ReplacesVariable) {
  const Expr e = substitute(parse("x^2 + 1"), parse("2*x"));
  EXPECT_DOUBLE_EQ(evaluate(e, 3.0), 37.0);
}
