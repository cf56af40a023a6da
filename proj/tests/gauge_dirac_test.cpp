#include "localmath/gauge_dirac.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

namespace localmath {
namespace {

Point P(double a, double b, double c, double d) { return Point{{a, b, c, d}}; }

SpinorField sample_spinor() {
  return SpinorField{{ComplexField::parse("cos(y0 + y1)", "0.5*y2"),
                      ComplexField::parse("y3*y1", "sin(y2)"),
                      ComplexField::parse("exp(-y0^2)", "y1 - y3"),
                      ComplexField::parse("0.2", "cos(y1*y2)")}};
}

GaugeConfig sample_gauge() {
  GaugeConfig g;
  g.B = {parse_spacetime_expression("0.1*y1"), parse_spacetime_expression("y0 - y2"),
         parse_spacetime_expression("sin(y3)"), parse_spacetime_expression("0.3")};
  g.phi = parse_spacetime_expression("0.2*y0");
  g.m = 0.7;
  return g;
}

TEST(Gamma, CliffordAlgebra) {
  const auto g = GammaSet::dirac();
  EXPECT_EQ(clifford_defect(g), 0.0);
  const auto sq = g.gamma5 * g.gamma5;
  EXPECT_EQ(sq, identity4());
}

TEST(Gamma, PerturbedSetIsDetected) {
  auto g = GammaSet::dirac();
  g.gamma[2][0][3] += 1e-3;
  EXPECT_GT(clifford_defect(g), 1e-4);
}

TEST(DiracBar, Conventions) {
  const Spinor zero{};
  EXPECT_EQ(dirac_bar(zero), zero);
  const Spinor e0{Complex(1), 0, 0, 0};
  // gamma^5 in the Dirac representation maps e0 to e2.
  const Spinor g5 = dirac_bar(e0, BarConvention::Gamma5Conjugate);
  EXPECT_EQ(g5, (Spinor{0, 0, Complex(1), 0}));
  const Spinor lower{0, 0, Complex(0, 1), 0};
  EXPECT_EQ(dirac_bar(lower, BarConvention::DiracAdjoint), (Spinor{0, 0, Complex(0, 1), 0}));
}

TEST(CombinedConnection, FirstOrderExpansion) {
  const auto spec = parse_field("0.5*y1 + 0.1*y0^2");
  GaugeConfig gauge;
  gauge.phi = parse_spacetime_expression("0.3*y1 - y0*y2");
  const Point y = P(0.3, 0.2, -0.4, 0);
  for (std::size_t mu : {0u, 1u}) {
    double prev = 0;
    for (double h : {1e-2, 5e-3, 2.5e-3}) {
      const auto c = combined_connection(spec, y, mu, h, gauge);
      const double err = std::abs(c.exact - c.first_order);
      EXPECT_LE(err, 10 * h * h);
      if (prev > 0) EXPECT_NEAR(prev / err, 4.0, 0.3);
      prev = err;
    }
  }
  const auto still = combined_connection(parse_field("0"), y, 1, 1e-3, GaugeConfig{});
  EXPECT_EQ(still.exact, Complex(1.0));
}

TEST(CovariantDerivative, ScalingFieldAloneMultipliesByK) {
  for (double k : {0.0, 0.5, -1.3}) {
    const auto spec = parse_field(std::to_string(k) + "*y1");
    SpinorField psi{{ComplexField::parse("1"), ComplexField::parse("0", "2"), ComplexField::parse("0"),
                     ComplexField::parse("-1")}};
    GaugeConfig gauge;
    const auto d = covariant_derivative(psi, spec, gauge, P(0, 0.7, 0, 0), 1);
    const Spinor expected{Complex(k), Complex(0, 2 * k), 0, Complex(-k)};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_LE(std::abs(d[i] - expected[i]), 1e-15);
  }
}

TEST(CovariantDerivative, PureGaugeVanishes) {
  // psi = e^{-i b c y1} chi with constant chi and B = c dy1: D_1 psi = 0.
  SpinorField psi;
  for (std::size_t i = 0; i < 4; ++i) psi.components[i] = ComplexField::parse("cos(0.4*y1)", "-sin(0.4*y1)");
  GaugeConfig gauge;
  gauge.b = 0.5;
  gauge.B[1] = Expr::constant(0.8);
  const auto d = covariant_derivative(psi, parse_field("0"), gauge, P(0, 0.37, 0, 0), 1);
  for (const auto& v : d) EXPECT_LE(std::abs(v), 1e-15);
}

TEST(Lagrangian, GaugeInvarianceOnLattice) {
  const auto spec = parse_field("0.3*y1 - 0.2*y0*y3 + 0.1*sin(y2)");
  const auto psi = sample_spinor();
  const Grid grid({-1, -1, -1, -1}, {1, 1, 1, 1}, {4, 4, 4, 4});
  for (auto bar : {BarConvention::Gamma5Conjugate, BarConvention::DiracAdjoint}) {
    auto gauge = sample_gauge();
    gauge.bar = bar;
    const Expr theta = parse_spacetime_expression("0.7*y1 + sin(y0*y3) - 0.4*y2^2");
    const auto transformed = gauge_transform(psi, gauge, theta);
    const auto before = lagrangian_lattice(psi, spec, gauge, grid);
    const auto after = lagrangian_lattice(transformed.psi, spec, transformed.gauge, grid);
    ASSERT_EQ(before.size(), 256u);
    for (std::size_t i = 0; i < before.size(); ++i) EXPECT_LE(std::abs(after[i] - before[i]), 1e-10) << i;
  }
}

TEST(Lagrangian, ScalingFieldUntouchedByGaugeTransform) {
  const auto spec = parse_field("0.3*y1 - 0.2*y0*y3");
  const Grid grid({-1, -1, -1, -1}, {1, 1, 1, 1}, {4, 4, 4, 4});
  std::vector<FourVector> before(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) before[i] = spec.gradient(grid.point(i));
  const auto transformed = gauge_transform(sample_spinor(), sample_gauge(), parse_spacetime_expression("y1*y2"));
  (void)transformed;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto now = spec.gradient(grid.point(i));
    EXPECT_EQ(std::memcmp(now.data(), before[i].data(), sizeof(now)), 0);
  }
}

TEST(GaugeTransform, LinearThetaShiftsB) {
  auto gauge = sample_gauge();
  gauge.b = 0.5;
  const auto t = gauge_transform(sample_spinor(), gauge, parse_spacetime_expression("3*y1"));
  const Point y = P(0.1, 0.2, 0.3, 0.4);
  const auto B0 = gauge.B_at(y);
  const auto B1 = t.gauge.B_at(y);
  EXPECT_DOUBLE_EQ(B1[1], B0[1] - 6.0);
  EXPECT_EQ(B1[0], B0[0]);
  EXPECT_EQ(B1[2], B0[2]);
  const Complex phase = std::polar(1.0, 0.6);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_LE(std::abs(t.psi(y)[i] - phase * sample_spinor()(y)[i]), 1e-15);
  }
}

TEST(GaugeTransform, ZeroCouplingRejected) {
  auto gauge = sample_gauge();
  gauge.b = 0.0;
  EXPECT_THROW(gauge_transform(sample_spinor(), gauge, parse_spacetime_expression("y0")), DomainError);
}

TEST(GaugeTransform, TwoTransformsCompose) {
  const auto spec = parse_field("0.5*y0");
  const auto gauge = sample_gauge();
  const Expr t1 = parse_spacetime_expression("sin(y1)");
  const Expr t2 = parse_spacetime_expression("y0*y2");
  const auto step = gauge_transform(sample_spinor(), gauge, t1);
  const auto twice = gauge_transform(step.psi, step.gauge, t2);
  const auto once = gauge_transform(sample_spinor(), gauge, t1 + t2);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 50; ++t) {
    const Point y = P(u(rng), u(rng), u(rng), u(rng));
    EXPECT_LE(std::abs(lagrangian_density(twice.psi, spec, twice.gauge, y) -
                       lagrangian_density(once.psi, spec, once.gauge, y)),
              1e-12);
    for (std::size_t mu = 0; mu < 4; ++mu) {
      EXPECT_NEAR(twice.gauge.B_at(y)[mu], once.gauge.B_at(y)[mu], 1e-12);
    }
  }
}

TEST(Lagrangian, FreeFieldMassTerm) {
  // Constant spinor, no fields: only the mass term survives.
  SpinorField psi{{ComplexField::parse("1"), ComplexField::parse("0"), ComplexField::parse("0"),
                   ComplexField::parse("0")}};
  GaugeConfig gauge;
  gauge.m = 2.0;
  gauge.bar = BarConvention::DiracAdjoint;
  EXPECT_EQ(lagrangian_density(psi, parse_field("0"), gauge, P(0, 0, 0, 0)), Complex(-2.0));
}

TEST(Lagrangian, ConstantAlphaMatchesReference) {
  // Hand-coded L = psibar i gamma^mu (d_mu + i b B_mu) psi - m psibar psi.
  const auto psi = sample_spinor();
  const auto gauge = sample_gauge();
  const auto g = GammaSet::dirac();
  const auto spec = parse_field("-0.9");
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 100; ++t) {
    const Point y = P(u(rng), u(rng), u(rng), u(rng));
    const Spinor v = psi(y);
    Spinor bar{};
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) bar[i] += g.gamma5[i][j] * std::conj(v[j]);
    Complex L{};
    for (std::size_t mu = 0; mu < 4; ++mu) {
      const Spinor d = psi.derivative(mu)(y);
      const double Bmu = gauge.B[mu].evaluate(y.coords);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          L += Complex(0, 1) * bar[i] * g.gamma[mu][i][j] * (d[j] + Complex(0, gauge.b * Bmu) * v[j]);
    }
    for (std::size_t i = 0; i < 4; ++i) L -= gauge.m * bar[i] * v[i];
    EXPECT_LE(relative_error(lagrangian_density(psi, spec, gauge, y), L), 1e-10);
  }
}

TEST(Lagrangian, SampledDensityConverges) {
  const auto spec = parse_field("0.2*y1");
  const auto psi = sample_spinor();
  const auto gauge = sample_gauge();
  const Grid grid({0, 0, 0, 0}, {1, 1, 1, 1}, {9, 9, 9, 9});
  const SampledSpinorField sampled(spec, psi, grid);
  const std::size_t centre = grid.flatten({4, 4, 4, 4});
  const auto est = lagrangian_density(sampled, spec, gauge, centre);
  EXPECT_FALSE(est.one_sided);
  EXPECT_LE(std::abs(est.value - lagrangian_density(psi, spec, gauge, grid.point(centre))), 5e-2);
  EXPECT_TRUE(lagrangian_density(sampled, spec, gauge, 0).one_sided);
}

}  // namespace
}  // namespace localmath
