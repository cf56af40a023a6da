#pragma once

// Dirac fields with the combined scaling + U(1) connection.
//
// The covariant derivative is D_mu = d_mu + a A_mu + i b B_mu with
// A = grad alpha from the scaling field and B the photon potential, and the
// Lagrangian density is
//
//     L = psibar i gamma^mu D_mu psi - m psibar psi.

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "localmath/parallel.hpp"
#include "localmath/scaled_calculus.hpp"

namespace localmath {

using Spinor = std::array<Complex, 4>;
using Matrix4 = std::array<std::array<Complex, 4>, 4>;

/// sqrt of the fine structure constant, the default U(1) coupling.
inline const double kFineStructureSqrt = std::sqrt(7.2973525693e-3);

inline Matrix4 identity4() {
  Matrix4 m{};
  for (std::size_t i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

inline Matrix4 operator*(const Matrix4& a, const Matrix4& b) {
  Matrix4 c{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t j = 0; j < 4; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Matrix4 operator+(const Matrix4& a, const Matrix4& b) {
  Matrix4 c{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) c[i][j] = a[i][j] + b[i][j];
  return c;
}

inline Spinor operator*(const Matrix4& m, const Spinor& v) {
  Spinor out{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out[i] += m[i][j] * v[j];
  return out;
}

/// gamma^0..gamma^3 and gamma^5.
struct GammaSet {
  std::array<Matrix4, 4> gamma{};
  Matrix4 gamma5{};

  /// Dirac representation: gamma^0 = diag(1, 1, -1, -1),
  /// gamma^k = [[0, sigma_k], [-sigma_k, 0]], gamma^5 = i g0 g1 g2 g3.
  static GammaSet dirac() {
    const Complex I(0.0, 1.0);
    const std::array<std::array<std::array<Complex, 2>, 2>, 3> sigma{{
        {{{0.0, 1.0}, {1.0, 0.0}}},
        {{{0.0, -I}, {I, 0.0}}},
        {{{1.0, 0.0}, {0.0, -1.0}}},
    }};
    GammaSet g;
    g.gamma[0][0][0] = 1.0;
    g.gamma[0][1][1] = 1.0;
    g.gamma[0][2][2] = -1.0;
    g.gamma[0][3][3] = -1.0;
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
          g.gamma[k + 1][i][j + 2] = sigma[k][i][j];
          g.gamma[k + 1][i + 2][j] = -sigma[k][i][j];
        }
      }
    }
    const Matrix4 product = g.gamma[0] * g.gamma[1] * g.gamma[2] * g.gamma[3];
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) g.gamma5[i][j] = I * product[i][j];
    return g;
  }
};

/// Largest entry deviation from {g^mu, g^nu} = 2 h^{mu nu} I, (g^5)^2 = I and
/// {g^5, g^mu} = 0. Zero for an exact representation.
inline double clifford_defect(const GammaSet& g) {
  double worst = 0.0;
  auto compare = [&](const Matrix4& m, const Matrix4& expected) {
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) worst = std::max(worst, std::abs(m[i][j] - expected[i][j]));
  };
  const Matrix4 id = identity4();
  for (std::size_t mu = 0; mu < 4; ++mu) {
    for (std::size_t nu = 0; nu < 4; ++nu) {
      Matrix4 expected{};
      if (mu == nu) {
        for (std::size_t i = 0; i < 4; ++i) expected[i][i] = 2.0 * kMinkowski[mu];
      }
      compare(g.gamma[mu] * g.gamma[nu] + g.gamma[nu] * g.gamma[mu], expected);
    }
    compare(g.gamma5 * g.gamma[mu] + g.gamma[mu] * g.gamma5, Matrix4{});
  }
  compare(g.gamma5 * g.gamma5, id);
  return worst;
}

enum class BarConvention {
  Gamma5Conjugate,  // psibar = gamma^5 psi*
  DiracAdjoint,     // psibar = psi^dagger gamma^0
};

/// psibar at one site. With Gamma5Conjugate the components are conjugated
/// first and gamma^5 applied; with DiracAdjoint they form the row psi^dagger
/// gamma^0.
inline Spinor dirac_bar(const Spinor& psi, BarConvention convention = BarConvention::Gamma5Conjugate,
                        const GammaSet& g = GammaSet::dirac()) {
  Spinor conj{};
  for (std::size_t i = 0; i < 4; ++i) conj[i] = std::conj(psi[i]);
  if (convention == BarConvention::Gamma5Conjugate) return g.gamma5 * conj;
  Spinor row{};
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 4; ++i) row[j] += conj[i] * g.gamma[0][i][j];
  return row;
}

/// Four analytic complex components.
struct SpinorField {
  std::array<ComplexField, 4> components;

  Spinor operator()(const Point& y) const {
    Spinor s{};
    for (std::size_t i = 0; i < 4; ++i) s[i] = components[i](y);
    return s;
  }

  SpinorField derivative(std::size_t mu) const {
    SpinorField d;
    for (std::size_t i = 0; i < 4; ++i) d.components[i] = components[i].derivative(mu);
    return d;
  }
};

struct GaugeConfig {
  std::array<Expr, 4> B{};  // photon potential B_mu(y)
  Expr phi{};               // U(1) phase entering the combined connection
  double a = 1.0;
  double b = kFineStructureSqrt;
  double m = 0.0;
  BarConvention bar = BarConvention::Gamma5Conjugate;

  FourVector B_at(const Point& y) const {
    FourVector v{};
    for (std::size_t mu = 0; mu < 4; ++mu) {
      v[mu] = B[mu].evaluate(y.coords);
      if (!std::isfinite(v[mu])) throw RangeError("B is not finite at (" + to_string(y) + ")");
    }
    return v;
  }
};

struct ConnectionFactor {
  Complex exact;        // e^{alpha(y+h) - alpha(y)} e^{i (phi(y+h) - phi(y))}
  Complex first_order;  // 1 + h (A_mu + i d_mu phi)
};

/// Connection moving a number from y + h e_mu back to y, including the U(1)
/// phase, with its first-order expansion.
inline ConnectionFactor combined_connection(const FieldSpec& spec, const Point& y, std::size_t mu,
                                            double h, const GaugeConfig& gauge) {
  const Point yh = y.shifted(mu, h);
  const double d_alpha = spec.alpha(yh) - spec.alpha(y);
  const double d_phi = gauge.phi.evaluate(yh.coords) - gauge.phi.evaluate(y.coords);
  const Complex exact = std::exp(d_alpha) * std::polar(1.0, d_phi);
  const double a_mu = spec.gradient(y)[mu];
  const double b_mu = gauge.phi.derivative(mu).evaluate(y.coords);
  return {exact, 1.0 + h * Complex(a_mu, b_mu)};
}

namespace detail {

inline Spinor covariant_terms(const Spinor& partial, const Spinor& psi, double a_mu, double b_mu,
                              const GaugeConfig& gauge) {
  const Complex coupling(gauge.a * a_mu, gauge.b * b_mu);
  Spinor out{};
  for (std::size_t i = 0; i < 4; ++i) out[i] = partial[i] + coupling * psi[i];
  return out;
}

inline Complex contract(const Spinor& row, const Spinor& column) {
  Complex sum{};
  for (std::size_t i = 0; i < 4; ++i) sum += row[i] * column[i];
  return sum;
}

inline Complex density(const Spinor& psi, const std::array<Spinor, 4>& covariant,
                       const GaugeConfig& gauge, const GammaSet& g) {
  const Spinor bar = dirac_bar(psi, gauge.bar, g);
  const Complex I(0.0, 1.0);
  Complex kinetic{};
  for (std::size_t mu = 0; mu < 4; ++mu) kinetic += contract(bar, g.gamma[mu] * covariant[mu]);
  return I * kinetic - gauge.m * contract(bar, psi);
}

}  // namespace detail

/// (d_mu + a A_mu + i b B_mu) psi at y, derivatives taken symbolically.
inline Spinor covariant_derivative(const SpinorField& psi, const FieldSpec& spec,
                                   const GaugeConfig& gauge, const Point& y, std::size_t mu) {
  return detail::covariant_terms(psi.derivative(mu)(y), psi(y), spec.gradient(y).at(mu),
                                 gauge.B_at(y).at(mu), gauge);
}

inline Complex lagrangian_density(const SpinorField& psi, const FieldSpec& spec,
                                  const GaugeConfig& gauge, const Point& y,
                                  const GammaSet& g = GammaSet::dirac()) {
  std::array<Spinor, 4> covariant{};
  for (std::size_t mu = 0; mu < 4; ++mu) covariant[mu] = covariant_derivative(psi, spec, gauge, y, mu);
  return detail::density(psi(y), covariant, gauge, g);
}

/// Density at every grid point, in grid order.
inline std::vector<Complex> lagrangian_lattice(const SpinorField& psi, const FieldSpec& spec,
                                               const GaugeConfig& gauge, const Grid& grid,
                                               const GammaSet& g = GammaSet::dirac(),
                                               unsigned threads = default_thread_count()) {
  std::vector<Complex> out(grid.size());
  parallel_for(grid.size(), threads,
               [&](std::size_t i) { out[i] = lagrangian_density(psi, spec, gauge, grid.point(i), g); });
  return out;
}

/// Spinor samples on a grid; the sample at y lives in the structure g(y).
class SampledSpinorField {
 public:
  SampledSpinorField(const FieldSpec& spec, const SpinorField& psi, const Grid& grid)
      : grid_(grid), samples_(grid.size()) {
    for (std::size_t k = 0; k < 4; ++k) {
      auto s = SampledField::sample(spec, psi.components[k], grid);
      for (std::size_t i = 0; i < grid.size(); ++i) samples_[i][k] = s.samples()[i];
      if (k == 0) scales_.assign(s.scales().begin(), s.scales().end());
    }
  }

  const Grid& grid() const { return grid_; }
  const Spinor& at(std::size_t i) const { return samples_.at(i); }
  double scale(std::size_t i) const { return scales_.at(i); }

  std::vector<Complex> component(std::size_t k) const {
    std::vector<Complex> c(samples_.size());
    for (std::size_t i = 0; i < samples_.size(); ++i) c[i] = samples_[i][k];
    return c;
  }

 private:
  Grid grid_;
  std::vector<Spinor> samples_;
  std::vector<double> scales_;
};

struct SpinorDerivativeEstimate {
  Spinor value;
  bool one_sided = false;
};

/// Covariant derivative of grid samples: central differences inside,
/// one-sided (flagged) at the boundary.
inline SpinorDerivativeEstimate covariant_derivative(const SampledSpinorField& psi,
                                                     const FieldSpec& spec,
                                                     const GaugeConfig& gauge, std::size_t i,
                                                     std::size_t mu) {
  const Point y = psi.grid().point(i);
  Spinor partial{};
  bool one_sided = false;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto comp = psi.component(k);
    const auto d = detail::grid_partial(psi.grid(), comp, i, mu);
    partial[k] = d.value;
    one_sided = one_sided || d.one_sided;
  }
  return {detail::covariant_terms(partial, psi.at(i), spec.gradient(y).at(mu), gauge.B_at(y).at(mu),
                                  gauge),
          one_sided};
}

struct SampledDensity {
  Complex value;
  bool one_sided = false;
};

/// Density from grid samples. Every axis of the grid must be integrated.
inline SampledDensity lagrangian_density(const SampledSpinorField& psi, const FieldSpec& spec,
                                         const GaugeConfig& gauge, std::size_t i,
                                         const GammaSet& g = GammaSet::dirac()) {
  std::array<Spinor, 4> covariant{};
  bool one_sided = false;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    const auto d = covariant_derivative(psi, spec, gauge, i, mu);
    covariant[mu] = d.value;
    one_sided = one_sided || d.one_sided;
  }
  return {detail::density(psi.at(i), covariant, gauge, g), one_sided};
}

struct GaugeTransformed {
  SpinorField psi;
  GaugeConfig gauge;
};

/// Local U(1) transformation by theta(y): psi' = e^{i theta} psi and
/// B'_mu = B_mu - (1/b) d_mu theta. A (the scaling field) is not touched.
inline GaugeTransformed gauge_transform(const SpinorField& psi, const GaugeConfig& gauge,
                                        const Expr& theta) {
  if (gauge.b == 0.0) throw DomainError("gauge_transform: coupling b must be nonzero");
  const Expr c = cos(theta);
  const Expr s = sin(theta);
  GaugeTransformed out{psi, gauge};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& f = psi.components[k];
    out.psi.components[k] = ComplexField{c * f.re - s * f.im, s * f.re + c * f.im};
  }
  for (std::size_t mu = 0; mu < 4; ++mu) {
    out.gauge.B[mu] = gauge.B[mu] - Expr::constant(1.0 / gauge.b) * theta.derivative(mu);
  }
  return out;
}

}  // namespace localmath
