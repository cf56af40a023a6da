#include "localmath/convergence.hpp"
#include "localmath/scaled_calculus.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace localmath {
namespace {

Point P(double a, double b, double c, double d) { return Point{{a, b, c, d}}; }

const auto kOne = [](const Point&) { return Complex(1.0); };

TEST(ScaledIntegral, ExponentialWeightOnUnitInterval) {
  const auto spec = parse_field("y1");
  const auto grid = Grid::along_axis(1, 0.0, 1.0, 10000);
  const auto I = scaled_integral(spec, kOne, grid, P(0, 0, 0, 0), 1);
  EXPECT_NEAR(I.value().real(), std::exp(1.0) - 1.0, 1e-4);
  EXPECT_EQ(I.value().imag(), 0.0);
  EXPECT_EQ(I.scale(), Complex(1.0));
}

TEST(ScaledIntegral, QuadratureOrderIsTwo) {
  const auto spec = parse_field("y1");
  const double exact = std::exp(1.0) - 1.0;
  std::vector<double> steps, errors;
  for (std::size_t n : {10, 20, 40, 80, 160}) {
    const auto I = scaled_integral(spec, kOne, Grid::along_axis(1, 0.0, 1.0, n), P(0, 0, 0, 0), 1);
    steps.push_back(1.0 / static_cast<double>(n));
    errors.push_back(std::abs(I.value().real() - exact));
  }
  EXPECT_NEAR(observed_order(steps, errors), 2.0, 0.2);
}

TEST(ScaledIntegral, ZeroFieldAndZeroIntegrand) {
  const auto grid = Grid::along_axis(2, -1.0, 1.0, 100);
  const auto zero = scaled_integral(parse_field("y2"), [](const Point&) { return Complex(0.0); }, grid,
                                    P(0, 0, 0.3, 0));
  EXPECT_EQ(zero.value(), Complex(0.0));
  const auto plain = scaled_integral(parse_field("0"), kOne, grid, P(0, 0, 0, 0));
  EXPECT_NEAR(plain.value().real(), 2.0, 1e-12);
}

TEST(ScaledIntegral, ConstantFieldIsOrdinaryIntegral) {
  const auto spec = parse_field("1.7");
  const auto grid = Grid({0, 0, 0, 0}, {1, 2, 0, 0}, {8, 16, 1, 1});
  const auto psi = ComplexField::parse("y0*y1 + cos(y1)", "y0^2");
  const auto scaled = scaled_integral(spec, psi, grid, P(0.5, 0.5, 0, 0));
  Complex plain{};
  for (std::size_t i = 0; i < grid.size(); ++i) plain += psi(grid.point(i)) * grid.cell_volume();
  EXPECT_LE(relative_error(scaled.value(), plain), 1e-12);
}

TEST(ScaledIntegral, ReferenceCovariance) {
  const auto spec = parse_field("0.4*y1 - 0.3*y0*y1");
  const auto grid = Grid({0, 0, 0, 0}, {1, 1, 0, 0}, {20, 20, 1, 1});
  const auto psi = ComplexField::parse("sin(y0 + y1)", "1");
  const Point x = P(0.2, 0.9, 0, 0);
  const Point xp = P(-1.0, 2.0, 0, 0);
  const auto Ix = scaled_integral(spec, psi, grid, x);
  const auto Ixp = scaled_integral(spec, psi, grid, xp);
  EXPECT_LE(relative_error(Ixp.value(), spec.g(x) / spec.g(xp) * Ix.value()), 1e-12);
  // Connecting the result from x to x' gives the same number.
  EXPECT_LE(relative_error(connect(spec, xp, x, Ix).value(), Ixp.value()), 1e-12);
}

TEST(ScaledIntegral, LinearAndThreadIndependent) {
  const auto spec = parse_field("gaussian(y1, 0.5, 0.3)");
  const auto grid = Grid({0, 0, 0, 0}, {1, 1, 1, 0}, {10, 10, 10, 1});
  const auto f = ComplexField::parse("y0 + y2", "y1");
  const auto h = ComplexField::parse("exp(-y1)", "0");
  const Complex a(0.3, -2.0);
  const Point x = P(0, 0.5, 0, 0);
  const auto combo = [&](const Point& y) { return a * f(y) + h(y); };
  const auto lhs = scaled_integral(spec, combo, grid, x, 1);
  const auto rhs = a * scaled_integral(spec, f, grid, x, 1).value() + scaled_integral(spec, h, grid, x, 1).value();
  EXPECT_LE(relative_error(lhs.value(), rhs), 1e-12);
  const auto threaded = scaled_integral(spec, combo, grid, x, 4);
  EXPECT_LE(relative_error(threaded.value(), lhs.value()), 1e-14);
}

TEST(ScaledIntegral, SampledMatchesAnalytic) {
  const auto spec = parse_field("0.5*y1");
  const auto grid = Grid::along_axis(1, 0.0, 2.0, 50);
  const auto psi = ComplexField::parse("y1", "1");
  const auto sampled = SampledField::sample(spec, psi, grid);
  const Point x = P(0, 1, 0, 0);
  EXPECT_LE(relative_error(scaled_integral(spec, sampled, x).value(), scaled_integral(spec, psi, grid, x).value()),
            1e-12);
}

TEST(ScaledIntegral, VectorComponents) {
  const auto spec = parse_field("y1");
  const auto grid = Grid::along_axis(1, 0.0, 1.0, 1000);
  const std::array<ComplexField, 2> psi{ComplexField::parse("1"), ComplexField::parse("0", "2")};
  const auto v = scaled_integral_vector(spec, psi, grid, P(0, 0, 0, 0));
  EXPECT_NEAR(v.value()[0].real(), std::exp(1.0) - 1.0, 1e-6);
  EXPECT_NEAR(v.value()[1].imag(), 2 * (std::exp(1.0) - 1.0), 1e-6);
  EXPECT_EQ(v.scale(), 1.0);
}

TEST(ScaledIntegral, NonFiniteIntegrandIsRangeError) {
  // The middle cell centre is y1 = 0.
  EXPECT_THROW(scaled_integral(parse_field("0"), ComplexField::parse("1/y1"), Grid::along_axis(1, -1.0, 1.0, 3),
                               P(0, 0, 0, 0)),
               RangeError);
}

TEST(ScaledDerivative, ConstantFieldGivesGradient) {
  for (double k : {0.0, 0.5, -2.0}) {
    const auto spec = parse_field(std::to_string(k) + "*y1");
    const auto d = scaled_derivative(spec, ComplexField::parse("1"), P(0.3, 0.1, 0, 0), 1);
    EXPECT_DOUBLE_EQ(d.real(), k);
    EXPECT_EQ(scaled_derivative(spec, ComplexField::parse("1"), P(0.3, 0.1, 0, 0), 0), Complex(0.0));
  }
}

TEST(ScaledDerivative, ZeroFieldIsOrdinaryDerivative) {
  const auto psi = ComplexField::parse("sin(y2)", "y0*y2");
  const Point y = P(0.5, 0, 1.2, 0);
  const auto d = scaled_derivative(parse_field("0"), psi, y, 2);
  EXPECT_LE(relative_error(d, Complex(std::cos(1.2), 0.5)), 1e-15);
}

TEST(ScaledDerivative, TransportedQuotientConverges) {
  const auto spec = parse_field("0.8*sin(y1) + 0.2*y0*y1");
  const auto psi = ComplexField::parse("exp(0.3*y1)*cos(y0)", "y1^2");
  const Point y = P(0.4, 0.7, 0, 0);
  for (std::size_t mu : {0u, 1u}) {
    const Complex exact = scaled_derivative(spec, psi, y, mu);
    std::vector<double> steps{1e-2, 1e-3, 1e-4}, errors;
    for (double h : steps) errors.push_back(std::abs(transported_difference_quotient(spec, psi, y, mu, h) - exact));
    EXPECT_GE(observed_order(steps, errors), 1.0) << "mu=" << mu;
  }
  EXPECT_THROW(transported_difference_quotient(spec, psi, y, 1, 0.0), DomainError);
}

TEST(ScaledDerivative, LeibnizRule) {
  // D(f psi) = (d f) psi + f D psi for an ordinary function f.
  const auto spec = parse_field("0.6*y1*y2 - y3");
  const auto f = ComplexField::parse("cos(y1)", "0");
  const auto psi = ComplexField::parse("y2", "exp(y1)");
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 100; ++t) {
    const Point y = P(u(rng), u(rng), u(rng), u(rng));
    for (std::size_t mu = 0; mu < 4; ++mu) {
      const Complex lhs = scaled_derivative(spec, f * psi, y, mu);
      const Complex rhs = f.derivative(mu)(y) * psi(y) + f(y) * scaled_derivative(spec, psi, y, mu);
      EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST(ScaledDerivative, SampledFieldFlagsBoundary) {
  const auto spec = parse_field("0.5*y1");
  const auto grid = Grid::along_axis(1, 0.0, 1.0, 101);
  const auto psi = ComplexField::parse("y1^2");
  const auto sampled = SampledField::sample(spec, psi, grid);
  const auto inner = scaled_derivative(spec, sampled, 50, 1);
  EXPECT_FALSE(inner.one_sided);
  const Point y = grid.point(50);
  EXPECT_NEAR(inner.value.real(), scaled_derivative(spec, psi, y, 1).real(), 1e-10);
  EXPECT_TRUE(scaled_derivative(spec, sampled, 0, 1).one_sided);
  EXPECT_TRUE(scaled_derivative(spec, sampled, 100, 1).one_sided);
  EXPECT_THROW(scaled_derivative(spec, sampled, 10, 0), DomainError);
}

}  // namespace
}  // namespace localmath
