#include "localmath/expression.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

namespace localmath {
namespace {

double eval(const Expr& e, std::array<double, 4> y) { return e.evaluate(y); }

TEST(Parse, Constants) {
  EXPECT_EQ(eval(parse_spacetime_expression("0"), {}), 0.0);
  EXPECT_EQ(eval(parse_spacetime_expression("2.5e-1"), {}), 0.25);
  EXPECT_EQ(eval(parse_spacetime_expression("-3"), {}), -3.0);
}

TEST(Parse, PrecedenceAndAssociativity) {
  const std::array<double, 4> y{1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(eval(parse_spacetime_expression("1 + 2*3"), y), 7.0);
  EXPECT_DOUBLE_EQ(eval(parse_spacetime_expression("8 - 4 - 2"), y), 2.0);
  EXPECT_DOUBLE_EQ(eval(parse_spacetime_expression("8 / 4 / 2"), y), 1.0);
  EXPECT_DOUBLE_EQ(eval(parse_spacetime_expression("-y1^2"), y), -4.0);
  EXPECT_DOUBLE_EQ(eval(parse_spacetime_expression("y2^-1"), y), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(eval(parse_spacetime_expression("(y0 + y1) * y3"), y), 12.0);
  EXPECT_DOUBLE_EQ(eval(parse_spacetime_expression("exp(y0) + 3"), y), std::exp(1.0) + 3.0);
  EXPECT_DOUBLE_EQ(eval(parse_spacetime_expression("sin(y1)*cos(y2)"), y), std::sin(2.0) * std::cos(3.0));
}

TEST(Parse, Gaussians) {
  const auto g3 = parse_spacetime_expression("gaussian(y1, 1, 0.5)");
  EXPECT_DOUBLE_EQ(eval(g3, {0, 1, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(eval(g3, {0, 1.5, 0, 0}), std::exp(-0.5));
  const auto g2 = parse_spacetime_expression("gaussian(0, 1)");
  EXPECT_DOUBLE_EQ(eval(g2, {7, 0, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(eval(g2, {0, 1, 1, 0}), std::exp(-1.0));
}

TEST(Parse, ErrorsCarryLocation) {
  try {
    parse_spacetime_expression("exp(y0,y1)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 1u);
    EXPECT_NE(std::string(e.what()).find("arity"), std::string::npos);
  }
  try {
    parse_spacetime_expression("1 +\n  foo");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
    EXPECT_NE(std::string(e.what()).find("unknown identifier"), std::string::npos);
  }
  EXPECT_THROW(parse_spacetime_expression("(y1 + 2"), ParseError);
  EXPECT_THROW(parse_spacetime_expression("y1 + 2)"), ParseError);
  EXPECT_THROW(parse_spacetime_expression(""), ParseError);
  EXPECT_THROW(parse_spacetime_expression("y4"), ParseError);
  EXPECT_THROW(parse_spacetime_expression("y1 ^ y2"), ParseError);
  EXPECT_THROW(parse_spacetime_expression("gaussian(1)"), ParseError);
  EXPECT_THROW(parse_expression("gaussian(0, 1)", path_variables()), ParseError);
  EXPECT_THROW(parse_expression("y1", path_variables()), ParseError);
}

TEST(Derivative, MatchesFiniteDifferences) {
  const char* exprs[] = {"0.5*y1",
                         "y0*y1",
                         "exp(0.3*y0 - y2)*sin(y1)",
                         "cos(y3)^3 / (2 + y1^2)",
                         "gaussian(y1, 0.2, 0.7) + gaussian(0.1, 1.5)",
                         "-(y0 - y3)^2 * y2"};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  const double h = 1e-4;
  for (const char* text : exprs) {
    const Expr e = parse_spacetime_expression(text);
    for (int trial = 0; trial < 20; ++trial) {
      std::array<double, 4> y{u(rng), u(rng), u(rng), u(rng)};
      for (std::size_t mu = 0; mu < 4; ++mu) {
        auto yp = y, ym = y;
        yp[mu] += h;
        ym[mu] -= h;
        const double fd = (e.evaluate(yp) - e.evaluate(ym)) / (2 * h);
        const double sym = e.derivative(mu).evaluate(y);
        EXPECT_NEAR(sym, fd, 1e-6 * std::max(1.0, std::abs(fd))) << text << " mu=" << mu;
      }
    }
  }
}

TEST(Derivative, Examples) {
  const Expr c = parse_spacetime_expression("4.2");
  for (std::size_t mu = 0; mu < 4; ++mu) EXPECT_TRUE(c.derivative(mu).is_constant(0.0));
  const Expr lin = parse_spacetime_expression("0.5*y1");
  EXPECT_TRUE(lin.derivative(1).is_constant(0.5));
  EXPECT_TRUE(lin.derivative(0).is_constant(0.0));
  const Expr prod = parse_spacetime_expression("y0*y1");
  EXPECT_DOUBLE_EQ(prod.derivative(0).evaluate(std::array<double, 4>{2, 3, 0, 0}), 3.0);
  EXPECT_DOUBLE_EQ(prod.derivative(1).evaluate(std::array<double, 4>{2, 3, 0, 0}), 2.0);
}

TEST(Substitute, ComposesExpressions) {
  const Expr s = parse_expression("s^2 + 1", path_variables());
  const Expr sigma = parse_expression("2*s", path_variables());
  const double arg[1] = {0.75};
  EXPECT_DOUBLE_EQ(s.substitute(0, sigma).evaluate(arg), 1.5 * 1.5 + 1);
}

// Random trees for the print/parse round trip.
Expr random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  std::uniform_real_distribution<double> num(-2, 2);
  std::uniform_int_distribution<std::size_t> var(0, 3);
  const auto& names = spacetime_variables();
  switch (pick(rng)) {
    case 0:
      return Expr::constant(num(rng));
    case 1: {
      const auto i = var(rng);
      return Expr::variable(i, names[i]);
    }
    case 2:
      return random_tree(rng, depth - 1) + random_tree(rng, depth - 1);
    case 3:
      return random_tree(rng, depth - 1) - random_tree(rng, depth - 1);
    case 4:
      return random_tree(rng, depth - 1) * random_tree(rng, depth - 1);
    case 5:
      return random_tree(rng, depth - 1) / (Expr::constant(3.0) + pow(random_tree(rng, depth - 1), 2.0));
    case 6:
      return pow(random_tree(rng, depth - 1), 3.0);
    case 7:
      return exp(sin(random_tree(rng, depth - 1)));
    case 8:
      return cos(random_tree(rng, depth - 1));
    default:
      return -random_tree(rng, depth - 1);
  }
}

TEST(Properties, PrintParseRoundTrip) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 200; ++t) {
    const Expr e = random_tree(rng, 4);
    const Expr back = parse_spacetime_expression(e.to_string());
    for (int k = 0; k < 100; ++k) {
      std::array<double, 4> y{u(rng), u(rng), u(rng), u(rng)};
      const double a = e.evaluate(y);
      const double b = back.evaluate(y);
      EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a))) << e.to_string();
    }
  }
}

}  // namespace
}  // namespace localmath
