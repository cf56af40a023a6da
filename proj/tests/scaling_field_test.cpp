#include "localmath/scaling_field.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace localmath {
namespace {

Point P(double a, double b, double c, double d) { return Point{{a, b, c, d}}; }

TEST(FieldSpec, ZeroFieldIsGlobalMathematics) {
  const auto spec = parse_field("0");
  for (const auto& y : {P(0, 0, 0, 0), P(1, -2, 3, 4)}) {
    EXPECT_EQ(eval_alpha(spec, y), 0.0);
    EXPECT_EQ(eval_g(spec, y), 1.0);
    EXPECT_EQ(grad_alpha(spec, y), (FourVector{0, 0, 0, 0}));
  }
}

TEST(FieldSpec, LinearAlpha) {
  const auto spec = parse_field("y1");
  EXPECT_EQ(eval_alpha(spec, P(0, 2, 0, 0)), 2.0);
  EXPECT_NEAR(eval_g(spec, P(0, 2, 0, 0)), 7.389056098930650, 1e-14);
  const auto half = parse_field("0.5*y1");
  EXPECT_EQ(grad_alpha(half, P(3, -1, 2, 9)), (FourVector{0, 0.5, 0, 0}));
}

TEST(FieldSpec, GaussianPeak) {
  const auto spec = parse_field("2*gaussian(0, 1)");
  EXPECT_DOUBLE_EQ(eval_alpha(spec, P(0, 0, 0, 0)), 2.0);
  EXPECT_DOUBLE_EQ(eval_g(spec, P(0, 0, 0, 0)), std::exp(2.0));
  EXPECT_EQ(grad_alpha(spec, P(0, 0, 0, 0)), (FourVector{0, 0, 0, 0}));
}

TEST(FieldSpec, ProductGradient) {
  const auto spec = parse_field("y0*y1");
  const auto a = grad_alpha(spec, P(2, 3, 0, 0));
  EXPECT_EQ(a, (FourVector{3, 2, 0, 0}));
}

TEST(FieldSpec, OverflowIsRangeError) {
  const auto spec = parse_field("1000*y1");
  EXPECT_THROW(eval_g(spec, P(0, 1, 0, 0)), RangeError);
  const auto singular = parse_field("1/y1");
  EXPECT_THROW(eval_alpha(singular, P(0, 0, 0, 0)), RangeError);
}

TEST(FieldSpec, GradientMatchesFiniteDifferencesOnRandomFields) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  const double h = 1e-4;
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    const std::string text = std::to_string(u(rng)) + "*sin(" + std::to_string(u(rng)) + "*y0 + " +
                             std::to_string(u(rng)) + "*y1) + " + std::to_string(u(rng)) +
                             "*exp(" + std::to_string(0.5 * u(rng)) + "*y2*y3) + gaussian(y1, 0.3, 0.8)";
    const auto spec = parse_field(text);
    const Point y = P(u(rng), u(rng), u(rng), u(rng));
    const auto a = grad_alpha(spec, y);
    for (std::size_t mu = 0; mu < 4; ++mu) {
      const double fd = (eval_alpha(spec, y.shifted(mu, h)) - eval_alpha(spec, y.shifted(mu, -h))) / (2 * h);
      worst = std::max(worst, std::abs(a[mu] - fd) / std::max(1.0, std::abs(fd)));
    }
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(Grid, CellCentres) {
  const Grid g = Grid::along_axis(1, 0.0, 1.0, 4);
  EXPECT_EQ(g.size(), 4u);
  EXPECT_DOUBLE_EQ(g.spacing(1), 0.25);
  EXPECT_DOUBLE_EQ(g.cell_volume(), 0.25);
  EXPECT_DOUBLE_EQ(g.point(0)[1], 0.125);
  EXPECT_DOUBLE_EQ(g.point(3)[1], 0.875);
  EXPECT_FALSE(g.integrated(0));
  const Grid box({0, 0, 0, 0}, {1, 1, 1, 1}, {2, 3, 4, 5});
  for (std::size_t i = 0; i < box.size(); ++i) EXPECT_EQ(box.flatten(box.unflatten(i)), i);
}

TEST(Grid, InvalidShapes) {
  EXPECT_THROW(Grid({0, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 1, 1}), DomainError);
  EXPECT_THROW(Grid({0, 0, 0, 0}, {0, 1, 0, 0}, {1, 0, 1, 1}), DomainError);
  EXPECT_THROW(Grid({0, 0, 0, 0}, {0, -1, 0, 0}, {1, 4, 1, 1}), DomainError);
  EXPECT_THROW(Grid({0, 0, 0, 0}, {0, 0, 0, 0}, {1, 2, 1, 1}), DomainError);
}

TEST(Connect, IdentityAtSamePoint) {
  const auto spec = parse_field("0.7*y1 - y0");
  const Point x = P(0.1, 0.4, 0, 0);
  const auto n = local_number(spec, x, 3.0);
  const auto m = connect(spec, x, x, n);
  EXPECT_EQ(m.base(), n.base());
  EXPECT_TRUE(close(m.value(), 3.0));
}

TEST(Connect, ValueScalesByRatio) {
  // g(y) = 2, g(x) = 1.
  const auto spec = parse_field("y1");
  const Point y = P(0, std::log(2.0), 0, 0);
  const Point x = P(0, 0, 0, 0);
  const auto n = local_number(spec, y, 3.0);
  const auto m = connect(spec, x, y, n);
  EXPECT_NEAR(m.value(), 6.0, 1e-14);
  EXPECT_EQ(m.base(), n.base());
  EXPECT_EQ(m.scale(), 1.0);
}

TEST(Connect, WrongStructureRejected) {
  const auto spec = parse_field("y1");
  EXPECT_THROW(connect(spec, P(0, 0, 0, 0), P(0, 1, 0, 0), make_number(1.0, 1.0)), StructureMismatch);
}

TEST(Connect, PathIndependenceAndInverse) {
  const auto spec = parse_field("sin(y0) + 0.3*y1*y2 - y3^2");
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    const Point x = P(u(rng), u(rng), u(rng), u(rng));
    const Point y = P(u(rng), u(rng), u(rng), u(rng));
    const Point z = P(u(rng), u(rng), u(rng), u(rng));
    const auto n = local_number(spec, y, Complex(u(rng), u(rng)));
    const auto two_step = connect(spec, x, z, connect(spec, z, y, n));
    const auto direct = connect(spec, x, y, n);
    EXPECT_LE(relative_error(two_step.value(), direct.value()), 1e-12);
    const auto back = connect(spec, y, x, direct);
    EXPECT_LE(relative_error(back.value(), n.value()), 1e-12);
  }
}

TEST(Fiber, ScalesAndTags) {
  const auto zero = parse_field("0");
  EXPECT_EQ(fiber_at(zero, P(1, 2, 3, 4), BundleKind::Gauge).scale, 1.0);
  const auto lin = parse_field("y1");
  const auto f = fiber_at(lin, P(0, 1, 0, 0), BundleKind::Geometry);
  EXPECT_DOUBLE_EQ(f.scale, std::exp(1.0));
  ASSERT_TRUE(f.metric.has_value());
  EXPECT_EQ(*f.metric, (Metric{1, -1, -1, -1}));
  EXPECT_EQ(f.number_structure, "R");
  const auto gauge = fiber_at(lin, P(0, 1, 0, 0), BundleKind::Gauge);
  EXPECT_EQ(gauge.number_structure, "C");
  EXPECT_EQ(gauge.space_structure, "V");
  EXPECT_FALSE(gauge.metric.has_value());
}

TEST(Restriction, ConstantFieldPasses) {
  const Grid region({0, 0, 0, 0}, {1, 1, 1, 1}, {3, 3, 3, 3});
  const auto r = check_local_restriction(parse_field("3.5"), region, 1e-15);
  EXPECT_EQ(r.max_norm, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(Restriction, LinearFieldFails) {
  const Grid region({0, 0, 0, 0}, {1, 1, 1, 1}, {3, 3, 3, 3});
  const auto r = check_local_restriction(parse_field("0.5*y1"), region, 0.1);
  EXPECT_NEAR(r.max_norm, 0.5, 1e-9);
  EXPECT_FALSE(r.pass);
}

TEST(Restriction, DistantGaussianPasses) {
  // Bump centred at (., 50, 50, 50) with width 1; on the unit box its gradient
  // is bounded by r/w^2 exp(-r^2/2) with r >= 49 sqrt(3).
  const Grid region({0, 0, 0, 0}, {1, 1, 1, 1}, {4, 4, 4, 4});
  const auto r = check_local_restriction(parse_field("gaussian(50, 1)"), region, 1e-9);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.max_norm, 1e-9);
}

TEST(Restriction, ArgmaxAndThreadsAgree) {
  const Grid region({0, -1, -1, 0}, {0, 1, 1, 0}, {1, 9, 9, 1});
  const auto spec = parse_field("y1^2 + 0.5*y2");
  const auto single = check_local_restriction(spec, region, 1.0, 1);
  const auto multi = check_local_restriction(spec, region, 1.0, 4);
  EXPECT_EQ(single.max_norm, multi.max_norm);
  EXPECT_EQ(single.argmax, multi.argmax);
  EXPECT_NEAR(std::abs(single.argmax[1]), 1.0 - 1.0 / 9.0, 1e-12);
}

TEST(Restriction, BadEpsilon) {
  const Grid region({0, 0, 0, 0}, {1, 1, 1, 1}, {2, 2, 2, 2});
  EXPECT_THROW(check_local_restriction(parse_field("0"), region, 0.0), DomainError);
}

}  // namespace
}  // namespace localmath
