#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>

#include <boost/multiprecision/cpp_int.hpp>

namespace localmath {

/// Exact rational used when scales and values are given as fractions.
using Rational = boost::multiprecision::cpp_rational;

using Complex = std::complex<double>;

inline constexpr double kDefaultRelTol = 1e-12;

/// Per-type behaviour needed by the scaled structures: exactness, zero test,
/// tolerant equality and conjugation.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr bool ordered = true;
  static bool is_zero(double x) { return x == 0.0; }
  static bool is_negative(double x) { return x < 0.0; }
  static double conj(double x) { return x; }
  static double magnitude(double x) { return std::abs(x); }
  static bool close(double a, double b, double rel = kDefaultRelTol) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
  }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static constexpr bool ordered = false;
  static bool is_zero(const Complex& x) { return x == Complex{}; }
  static bool is_negative(const Complex& x) { return x.imag() == 0.0 && x.real() < 0.0; }
  static Complex conj(const Complex& x) { return std::conj(x); }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static bool close(const Complex& a, const Complex& b, double rel = kDefaultRelTol) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
  }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr bool ordered = true;
  static bool is_zero(const Rational& x) { return x == 0; }
  static bool is_negative(const Rational& x) { return x < 0; }
  static Rational conj(const Rational& x) { return x; }
  static double magnitude(const Rational& x) { return std::abs(x.convert_to<double>()); }
  static bool close(const Rational& a, const Rational& b, double = kDefaultRelTol) {
    return a == b;
  }
};

template <class T>
concept Scalar = requires(T a, T b) {
  ScalarTraits<T>::exact;
  { a + b } -> std::convertible_to<T>;
  { a - b } -> std::convertible_to<T>;
  { a * b } -> std::convertible_to<T>;
  { a / b } -> std::convertible_to<T>;
  { -a } -> std::convertible_to<T>;
};

template <Scalar T>
bool close(const T& a, const T& b, double rel = kDefaultRelTol) {
  return ScalarTraits<T>::close(a, b, rel);
}

/// |a - b| / max(|a|, |b|), 0 when both vanish.
inline double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double relative_error(const Complex& a, const Complex& b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace localmath
