#pragma once

// Scaled normed vector spaces over complex scalars. Scaling factors are real.

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

#include "localmath/scaled_number.hpp"

namespace localmath {

template <std::size_t N = 4>
class ScaledVector {
  static_assert(N >= 1);

 public:
  using Components = std::array<Complex, N>;

  ScaledVector(Components base, double scale) : base_(base), scale_(scale) {
    if (scale_ == 0.0) throw DegenerateStructure{};
  }

  /// The vector whose value components are `values` in structure `scale`.
  static ScaledVector from_values(const Components& values, double scale) {
    if (scale == 0.0) throw DegenerateStructure{};
    Components base{};
    for (std::size_t i = 0; i < N; ++i) base[i] = values[i] * scale;
    return ScaledVector(base, scale);
  }

  static ScaledVector zero(double scale) { return ScaledVector(Components{}, scale); }

  const Components& base() const { return base_; }
  double scale() const { return scale_; }

  Components value() const {
    Components v{};
    for (std::size_t i = 0; i < N; ++i) v[i] = base_[i] / scale_;
    return v;
  }

  static constexpr std::size_t dimension() { return N; }

 private:
  Components base_;
  double scale_;
};

namespace detail {

template <std::size_t N>
void require_scale(double r, const ScaledVector<N>& v, const char* op) {
  if (!close(r, v.scale())) {
    throw StructureMismatch(std::string(op) + ": vector is not in structure " + std::to_string(r));
  }
}

inline void require_scalar_scale(double r, const ScaledNumber<Complex>& a, const char* op) {
  if (!close(Complex(r, 0.0), a.scale())) {
    throw StructureMismatch(std::string(op) + ": scalar is not in structure " + std::to_string(r));
  }
}

template <std::size_t N>
double euclidean_norm(const std::array<Complex, N>& v) {
  double sum = 0.0;
  for (const auto& c : v) sum += std::norm(c);
  return std::sqrt(sum);
}

}  // namespace detail

template <std::size_t N>
ScaledVector<N> vec_add_in(double r, const ScaledVector<N>& phi, const ScaledVector<N>& psi) {
  detail::require_scale(r, phi, "vec_add");
  detail::require_scale(r, psi, "vec_add");
  typename ScaledVector<N>::Components out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = phi.base()[i] + psi.base()[i];
  return ScaledVector<N>(out, r);
}

template <std::size_t N>
ScaledVector<N> vec_sub_in(double r, const ScaledVector<N>& phi, const ScaledVector<N>& psi) {
  detail::require_scale(r, phi, "vec_sub");
  detail::require_scale(r, psi, "vec_sub");
  typename ScaledVector<N>::Components out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = phi.base()[i] - psi.base()[i];
  return ScaledVector<N>(out, r);
}

/// value(a . psi) = value(a) * value(psi) componentwise.
template <std::size_t N>
ScaledVector<N> scalar_mul_in(double r, const ScaledNumber<Complex>& a, const ScaledVector<N>& psi) {
  detail::require_scalar_scale(r, a, "scalar_mul");
  detail::require_scale(r, psi, "scalar_mul");
  const Complex av = a.value();
  typename ScaledVector<N>::Components out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = av * psi.base()[i];
  return ScaledVector<N>(out, r);
}

/// Norm as a real number of structure r, value = Euclidean norm of the values.
template <std::size_t N>
ScaledNumber<double> norm_in(double r, const ScaledVector<N>& psi) {
  detail::require_scale(r, psi, "norm");
  return make_number(detail::euclidean_norm(psi.value()), r);
}

/// Hermitian product <phi|psi> of the values, as a number of structure r.
template <std::size_t N>
ScaledNumber<Complex> inner_product_in(double r, const ScaledVector<N>& phi,
                                       const ScaledVector<N>& psi) {
  detail::require_scale(r, phi, "inner_product");
  detail::require_scale(r, psi, "inner_product");
  const auto a = phi.value();
  const auto b = psi.value();
  Complex sum{};
  for (std::size_t i = 0; i < N; ++i) sum += std::conj(a[i]) * b[i];
  return make_number(sum, Complex(r, 0.0));
}

/// Value changing map to structure q = p*r. Base components are kept.
template <std::size_t N>
ScaledVector<N> Z_map_vector(double p, const ScaledVector<N>& psi) {
  if (p == 0.0) throw DegenerateStructure{};
  return ScaledVector<N>(psi.base(), psi.scale() * p);
}

/// Number changing map to structure p*r. Values are kept.
template <std::size_t N>
ScaledVector<N> W_map_vector(double p, const ScaledVector<N>& psi) {
  if (p == 0.0) throw DegenerateStructure{};
  return ScaledVector<N>::from_values(psi.value(), psi.scale() * p);
}

/// Scalar multiplication of structure r represented in structure q after a
/// Z map: (q/r .)_q. Satisfies Z(a . psi) = Z(a) (q/r .)_q Z(psi).
template <std::size_t N>
ScaledVector<N> transported_scalar_mul(double r, double q, const ScaledNumber<Complex>& a,
                                       const ScaledVector<N>& psi) {
  detail::require_scalar_scale(q, a, "transported_scalar_mul");
  detail::require_scale(q, psi, "transported_scalar_mul");
  const auto v = psi.value();
  typename ScaledVector<N>::Components out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = (q / r) * a.value() * v[i];
  return ScaledVector<N>::from_values(out, q);
}

/// The two sides of the norm transport law for psi in structure r moved to q:
/// first  = the number ((r/q)|psi|)_q, obtained by transporting the norm;
/// second = |(r/q)psi|_q, the norm of the transported vector.
/// They agree whenever r/q > 0.
template <std::size_t N>
std::pair<ScaledNumber<double>, ScaledNumber<double>> norm_transport_sides(
    double r, double q, const ScaledVector<N>& psi) {
  const double p = q / r;
  auto transported_norm = Z_map(p, norm_in(r, psi));
  auto norm_of_transported = norm_in(q, Z_map_vector(p, psi));
  return {ScaledNumber<double>(transported_norm.base(), Structure<double>(q)),
          norm_of_transported};
}

/// The two sides of the failed scalar-product transport law:
/// first  = ((r/q)<psi|psi>)_q, second = <(r/q)psi|(r/q)psi>_q.
/// second / first == r/q for psi != 0.
template <std::size_t N>
std::pair<ScaledNumber<Complex>, ScaledNumber<Complex>> inner_product_transport_gap(
    double r, double q, const ScaledVector<N>& psi) {
  const double p = q / r;
  const auto product = inner_product_in(r, psi, psi);
  auto transported_product = Z_map(Complex(p, 0.0), product);
  auto product_of_transported = inner_product_in(q, Z_map_vector(p, psi), Z_map_vector(p, psi));
  return {ScaledNumber<Complex>(transported_product.base(), Structure<Complex>(Complex(q, 0.0))),
          product_of_transported};
}

}  // namespace localmath
