#pragma once

// Scaled real and complex number structures.
//
// Every structure shares one base set. A number is a base element; its value
// depends on the structure it is viewed in. The canonical representation used
// throughout is
//
//     base = value * scale,
//
// so a number of value v in the structure scaled by t has base v*t, the
// identity 1_t has base t, and 0 has base 0 in every structure.

#include <cstdint>
#include <ostream>
#include <vector>

#include "localmath/error.hpp"
#include "localmath/scalar.hpp"

namespace localmath {

/// Identifies one scaled structure: its scaling factor plus the orientation of
/// its order relation (real structures only). The flag flips each time a map
/// with a negative real factor produces the structure.
template <Scalar T>
struct Structure {
  T scale;
  bool order_reversed = false;

  explicit Structure(T s, bool reversed = false) : scale(std::move(s)), order_reversed(reversed) {
    if (ScalarTraits<T>::is_zero(scale)) throw DegenerateStructure{};
  }

  /// Structures agree when their scales agree (exactly for rationals, to
  /// kDefaultRelTol otherwise).
  bool same_as(const Structure& other) const { return close(scale, other.scale); }
};

template <Scalar T>
class ScaledNumber {
 public:
  ScaledNumber(T base, Structure<T> structure)
      : base_(std::move(base)), structure_(std::move(structure)) {}

  const T& base() const { return base_; }
  const Structure<T>& structure() const { return structure_; }
  const T& scale() const { return structure_.scale; }

  /// Value in the structure the number currently belongs to.
  T value() const { return base_ / structure_.scale; }

 private:
  T base_;
  Structure<T> structure_;
};

template <Scalar T>
std::ostream& operator<<(std::ostream& os, const ScaledNumber<T>& n) {
  return os << '(' << n.value() << ")_" << n.scale();
}

/// The number of value `v` in the structure scaled by `t`.
template <Scalar T>
ScaledNumber<T> make_number(const T& v, const Structure<T>& t) {
  return ScaledNumber<T>(v * t.scale, t);
}

template <Scalar T>
ScaledNumber<T> make_number(const T& v, const T& t) {
  return make_number(v, Structure<T>(t));
}

template <Scalar T>
ScaledNumber<T> zero_in(const Structure<T>& t) {
  return ScaledNumber<T>(T(0), t);
}

template <Scalar T>
ScaledNumber<T> one_in(const Structure<T>& t) {
  return ScaledNumber<T>(t.scale, t);
}

/// Value of the base number of `n` when viewed in the structure scaled by `u`.
template <Scalar T>
T value_in(const ScaledNumber<T>& n, const T& u) {
  if (ScalarTraits<T>::is_zero(u)) throw DegenerateStructure{};
  return n.base() / u;
}

namespace detail {

template <Scalar T>
void require_structure(const Structure<T>& u, const ScaledNumber<T>& x, const char* op) {
  if (!u.same_as(x.structure())) {
    throw StructureMismatch(std::string(op) +
                            ": Arithmetic operations are defined only within local structures");
  }
}

}  // namespace detail

template <Scalar T>
ScaledNumber<T> add_in(const Structure<T>& u, const ScaledNumber<T>& x, const ScaledNumber<T>& y) {
  detail::require_structure(u, x, "add");
  detail::require_structure(u, y, "add");
  return ScaledNumber<T>(x.base() + y.base(), u);
}

template <Scalar T>
ScaledNumber<T> sub_in(const Structure<T>& u, const ScaledNumber<T>& x, const ScaledNumber<T>& y) {
  detail::require_structure(u, x, "sub");
  detail::require_structure(u, y, "sub");
  return ScaledNumber<T>(x.base() - y.base(), u);
}

template <Scalar T>
ScaledNumber<T> neg_in(const Structure<T>& u, const ScaledNumber<T>& x) {
  detail::require_structure(u, x, "neg");
  return ScaledNumber<T>(-x.base(), u);
}

/// value(x*y) = value(x)*value(y), hence base = base(x)*base(y)/u.
template <Scalar T>
ScaledNumber<T> mul_in(const Structure<T>& u, const ScaledNumber<T>& x, const ScaledNumber<T>& y) {
  detail::require_structure(u, x, "mul");
  detail::require_structure(u, y, "mul");
  return ScaledNumber<T>(x.base() * y.base() / u.scale, u);
}

/// value(x/y) = value(x)/value(y), hence base = u*base(x)/base(y).
template <Scalar T>
ScaledNumber<T> div_in(const Structure<T>& u, const ScaledNumber<T>& x, const ScaledNumber<T>& y) {
  detail::require_structure(u, x, "div");
  detail::require_structure(u, y, "div");
  if (ScalarTraits<T>::is_zero(y.base())) throw DomainError("div: divisor has value 0");
  return ScaledNumber<T>(u.scale * x.base() / y.base(), u);
}

/// Conjugation inside structure `d`: value(result) = conj(value(x)).
template <Scalar T>
ScaledNumber<T> conj_in(const Structure<T>& d, const ScaledNumber<T>& x) {
  detail::require_structure(d, x, "conj");
  return ScaledNumber<T>(ScalarTraits<T>::conj(x.value()) * d.scale, d);
}

/// Order of real structures: compares values.
template <Scalar T>
  requires(ScalarTraits<T>::ordered)
bool less_in(const Structure<T>& u, const ScaledNumber<T>& x, const ScaledNumber<T>& y) {
  detail::require_structure(u, x, "less");
  detail::require_structure(u, y, "less");
  return x.value() < y.value();
}

/// Structure reached from `t` by a map with factor `s`.
template <Scalar T>
Structure<T> rescaled(const Structure<T>& t, const T& s) {
  if (ScalarTraits<T>::is_zero(s)) throw DegenerateStructure{};
  return Structure<T>(t.scale * s, t.order_reversed != ScalarTraits<T>::is_negative(s));
}

/// Number changing, value preserving: the number of value `v` in structure
/// t*s. For real s < 0 the target's order orientation is toggled.
template <Scalar T>
ScaledNumber<T> W_map(const T& s, const T& v, const Structure<T>& t) {
  return make_number(v, rescaled(t, s));
}

template <Scalar T>
ScaledNumber<T> W_map(const T& s, const ScaledNumber<T>& x) {
  return W_map(s, x.value(), x.structure());
}

/// Number preserving, value changing: keeps the base, moves to structure
/// u = t*s, so the value becomes (t/u)*value(x).
template <Scalar T>
ScaledNumber<T> Z_map(const T& s, const ScaledNumber<T>& x) {
  return ScaledNumber<T>(x.base(), rescaled(x.structure(), s));
}

/// The components of structure `t` represented in structure `u` after a Z
/// map. Multiplication picks up u/t, division t/u, the identity becomes the
/// number of value t/u and conjugation acts on the untransported value. Every
/// field axiom holds for these transported operations.
template <Scalar T>
class TransportedStructure {
 public:
  TransportedStructure(Structure<T> source, Structure<T> target)
      : source_(std::move(source)), target_(std::move(target)) {}

  const Structure<T>& source() const { return source_; }
  const Structure<T>& target() const { return target_; }

  /// Z map of a number of the source structure.
  ScaledNumber<T> transport(const ScaledNumber<T>& x) const {
    detail::require_structure(source_, x, "transport");
    return ScaledNumber<T>(x.base(), target_);
  }

  ScaledNumber<T> zero() const { return zero_in(target_); }
  ScaledNumber<T> one() const { return make_number(ratio(), target_); }

  ScaledNumber<T> add(const ScaledNumber<T>& x, const ScaledNumber<T>& y) const {
    return add_in(target_, x, y);
  }
  ScaledNumber<T> sub(const ScaledNumber<T>& x, const ScaledNumber<T>& y) const {
    return sub_in(target_, x, y);
  }
  ScaledNumber<T> mul(const ScaledNumber<T>& x, const ScaledNumber<T>& y) const {
    detail::require_structure(target_, x, "mul");
    detail::require_structure(target_, y, "mul");
    return make_number(x.value() * y.value() / ratio(), target_);
  }
  ScaledNumber<T> div(const ScaledNumber<T>& x, const ScaledNumber<T>& y) const {
    detail::require_structure(target_, x, "div");
    detail::require_structure(target_, y, "div");
    if (ScalarTraits<T>::is_zero(y.base())) throw DomainError("div: divisor has value 0");
    return make_number(ratio() * x.value() / y.value(), target_);
  }
  ScaledNumber<T> conj(const ScaledNumber<T>& x) const {
    detail::require_structure(target_, x, "conj");
    return make_number(ratio() * ScalarTraits<T>::conj(x.value() / ratio()), target_);
  }

  /// t/u, the value factor acquired by transported numbers.
  T ratio() const { return source_.scale / target_.scale; }

 private:
  Structure<T> source_;
  Structure<T> target_;
};

/// One value of a natural number: `value` in the subset N_subset containing
/// every subset-th natural number.
struct NaturalValueEntry {
  std::uint64_t value;
  std::uint64_t subset;

  friend bool operator==(const NaturalValueEntry&, const NaturalValueEntry&) = default;
};

/// All values of the natural number `n`, one per divisor d, ordered by d.
/// Zero has value 0 in every subset and has no table.
inline std::vector<NaturalValueEntry> natural_value_table(std::uint64_t n) {
  if (n == 0) throw DomainError("natural_value_table: 0 has value 0 in every structure");
  std::vector<std::uint64_t> small;
  std::vector<std::uint64_t> large;
  for (std::uint64_t d = 1; d <= n / d; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  std::vector<NaturalValueEntry> table;
  table.reserve(small.size());
  for (auto d : small) table.push_back({n / d, d});
  return table;
}

}  // namespace localmath
