#pragma once

// Integrals and derivatives of fields whose value at y is a number of the
// local structure at y. Integrands are transported to a reference point x
// before summation; difference quotients transport the displaced sample back
// to y before subtracting.

#include <array>
#include <cmath>
#include <concepts>
#include <span>
#include <string_view>
#include <vector>

#include "localmath/parallel.hpp"
#include "localmath/scaled_vector.hpp"
#include "localmath/scaling_field.hpp"

namespace localmath {

/// Complex scalar field given analytically, re + i im.
struct ComplexField {
  Expr re;
  Expr im = Expr::constant(0.0);

  static ComplexField parse(std::string_view re_text, std::string_view im_text = "0") {
    return {parse_spacetime_expression(re_text), parse_spacetime_expression(im_text)};
  }

  Complex operator()(const Point& y) const {
    const Complex v(re.evaluate(y.coords), im.evaluate(y.coords));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw RangeError("field value is not finite at (" + to_string(y) + ")");
    }
    return v;
  }

  ComplexField derivative(std::size_t mu) const { return {re.derivative(mu), im.derivative(mu)}; }

  friend ComplexField operator+(const ComplexField& a, const ComplexField& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexField operator*(const ComplexField& a, const ComplexField& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
};

template <class F>
concept PointFunction = std::invocable<const F&, const Point&> &&
                        std::convertible_to<std::invoke_result_t<const F&, const Point&>, Complex>;

/// Samples of a field on a grid. samples[i] is the value at grid.point(i), a
/// number of the structure scaled by scales[i] = g(grid.point(i)).
class SampledField {
 public:
  SampledField(Grid grid, std::vector<Complex> samples, std::vector<double> scales)
      : grid_(std::move(grid)), samples_(std::move(samples)), scales_(std::move(scales)) {
    if (samples_.size() != grid_.size() || scales_.size() != grid_.size()) {
      throw DomainError("sampled field: sample count does not match grid");
    }
  }

  template <PointFunction F>
  static SampledField sample(const FieldSpec& spec, const F& psi, const Grid& grid) {
    std::vector<Complex> values(grid.size());
    std::vector<double> scales(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Point y = grid.point(i);
      values[i] = psi(y);
      scales[i] = spec.g(y);
    }
    return SampledField(grid, std::move(values), std::move(scales));
  }

  const Grid& grid() const { return grid_; }
  std::span<const Complex> samples() const { return samples_; }
  std::span<const double> scales() const { return scales_; }

  ScaledNumber<Complex> number_at(std::size_t i) const {
    return make_number(samples_.at(i), Complex(scales_.at(i), 0.0));
  }

 private:
  Grid grid_;
  std::vector<Complex> samples_;
  std::vector<double> scales_;
};

namespace detail {

inline void require_finite(const Complex& v, const Point& y) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw RangeError("non-finite sample at (" + to_string(y) + ")");
  }
}

}  // namespace detail

/// I_x(psi) = (1/g(x)) sum_y g(y) psi(y) dV over the grid cells (midpoint
/// rule), returned as a number of the structure at x.
template <PointFunction F>
ScaledNumber<Complex> scaled_integral(const FieldSpec& spec, const F& psi, const Grid& grid,
                                      const Point& x, unsigned threads = default_thread_count()) {
  if (grid.size() == 0) throw DomainError("scaled_integral: empty grid");
  const double alpha_x = spec.alpha(x);
  std::vector<Complex> terms(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const Point y = grid.point(i);
    const Complex v = psi(y);
    detail::require_finite(v, y);
    terms[i] = std::exp(spec.alpha(y) - alpha_x) * v;
  });
  const Complex value = pairwise_sum<Complex>(terms) * grid.cell_volume();
  return make_number(value, Complex(spec.g(x), 0.0));
}

inline ScaledNumber<Complex> scaled_integral(const FieldSpec& spec, const SampledField& psi,
                                             const Point& x) {
  const Grid& grid = psi.grid();
  const double gx = spec.g(x);
  std::vector<Complex> terms(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    detail::require_finite(psi.samples()[i], grid.point(i));
    terms[i] = psi.scales()[i] * psi.samples()[i];
  }
  const Complex value = pairwise_sum<Complex>(terms) * grid.cell_volume() / gx;
  return make_number(value, Complex(gx, 0.0));
}

/// Componentwise scaled integral of a vector field.
template <std::size_t N, PointFunction F>
ScaledVector<N> scaled_integral_vector(const FieldSpec& spec, const std::array<F, N>& psi,
                                       const Grid& grid, const Point& x,
                                       unsigned threads = default_thread_count()) {
  typename ScaledVector<N>::Components values{};
  for (std::size_t k = 0; k < N; ++k) {
    values[k] = scaled_integral(spec, psi[k], grid, x, threads).value();
  }
  return ScaledVector<N>::from_values(values, spec.g(x));
}

/// D_mu psi = (d_mu + A_mu) psi for an analytic field.
inline Complex scaled_derivative(const FieldSpec& spec, const ComplexField& psi, const Point& y,
                                 std::size_t mu) {
  const double a = spec.gradient(y).at(mu);
  return psi.derivative(mu)(y) + a * psi(y);
}

struct DerivativeEstimate {
  Complex value;
  bool one_sided = false;  // boundary point, first order only
};

namespace detail {

/// Ordinary partial derivative of grid samples along mu at linear index i:
/// central differences inside, one-sided at the boundary.
inline DerivativeEstimate grid_partial(const Grid& grid, std::span<const Complex> samples,
                                       std::size_t i, std::size_t mu) {
  if (!grid.integrated(mu)) throw DomainError("derivative along a collapsed axis");
  auto idx = grid.unflatten(i);
  const std::size_t k = idx[mu];
  const std::size_t last = grid.cells()[mu] - 1;
  const double h = grid.spacing(mu);
  auto at = [&](std::size_t j) {
    idx[mu] = j;
    return samples[grid.flatten(idx)];
  };
  if (k == 0) return {(at(1) - at(0)) / h, true};
  if (k == last) return {(at(last) - at(last - 1)) / h, true};
  return {(at(k + 1) - at(k - 1)) / (2.0 * h), false};
}

}  // namespace detail

/// D_mu psi at grid index i for a sampled field.
inline DerivativeEstimate scaled_derivative(const FieldSpec& spec, const SampledField& psi,
                                            std::size_t i, std::size_t mu) {
  const Point y = psi.grid().point(i);
  auto partial = detail::grid_partial(psi.grid(), psi.samples(), i, mu);
  partial.value += spec.gradient(y).at(mu) * psi.samples()[i];
  return partial;
}

/// [ (g(y + h e_mu)/g(y)) psi(y + h e_mu) - psi(y) ] / h: the forward quotient
/// with the displaced sample transported back to y.
template <PointFunction F>
Complex transported_difference_quotient(const FieldSpec& spec, const F& psi, const Point& y,
                                        std::size_t mu, double h) {
  if (!(h > 0.0)) throw DomainError("transported_difference_quotient: h must be positive");
  const Point yh = y.shifted(mu, h);
  const double ratio = std::exp(spec.alpha(yh) - spec.alpha(y));
  return (ratio * Complex(psi(yh)) - Complex(psi(y))) / h;
}

}  // namespace localmath
