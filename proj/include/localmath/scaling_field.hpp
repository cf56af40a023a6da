#pragma once

// The scaling field g(y) = exp(alpha(y)) on flat spacetime, its gradient
// A = grad alpha, value changing connections between local structures, the
// fiber accessor and the local restriction validator |A| < epsilon.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "localmath/expression.hpp"
#include "localmath/parallel.hpp"
#include "localmath/scaled_number.hpp"

namespace localmath {

inline constexpr std::size_t kSpacetimeDim = 4;

using FourVector = std::array<double, kSpacetimeDim>;

/// A point of Minkowski space: y0 is time, y1..y3 are space.
struct Point {
  FourVector coords{};

  double operator[](std::size_t mu) const { return coords[mu]; }
  double& operator[](std::size_t mu) { return coords[mu]; }

  /// This point displaced by h along axis mu.
  Point shifted(std::size_t mu, double h) const {
    Point p = *this;
    p.coords[mu] += h;
    return p;
  }

  bool finite() const {
    for (double c : coords) {
      if (!std::isfinite(c)) return false;
    }
    return true;
  }

  friend bool operator==(const Point&, const Point&) = default;
};

inline std::string to_string(const Point& p) {
  std::string out;
  char buf[40];
  for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) {
    std::snprintf(buf, sizeof buf, "%.17g", p[mu]);
    if (mu) out += ',';
    out += buf;
  }
  return out;
}

/// The scaling field. alpha is stored; g = exp(alpha) and A = grad alpha are
/// derived, A symbolically.
class FieldSpec {
 public:
  explicit FieldSpec(Expr alpha) : alpha_(std::move(alpha)) {
    for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) gradient_[mu] = alpha_.derivative(mu);
  }

  static FieldSpec parse(std::string_view text) { return FieldSpec(parse_spacetime_expression(text)); }

  const Expr& alpha_expr() const { return alpha_; }
  const Expr& gradient_expr(std::size_t mu) const { return gradient_.at(mu); }

  double alpha(const Point& y) const {
    const double a = alpha_.evaluate(y.coords);
    if (!std::isfinite(a)) throw RangeError("alpha is not finite at (" + localmath::to_string(y) + ")");
    return a;
  }

  double g(const Point& y) const {
    const double v = std::exp(alpha(y));
    if (!std::isfinite(v) || v == 0.0) {
      throw RangeError("g = exp(alpha) out of range at (" + localmath::to_string(y) + ")");
    }
    return v;
  }

  /// A_mu(y) = d alpha / d y^mu.
  FourVector gradient(const Point& y) const {
    FourVector a{};
    for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) {
      a[mu] = gradient_[mu].evaluate(y.coords);
      if (!std::isfinite(a[mu])) throw RangeError("A is not finite at (" + localmath::to_string(y) + ")");
    }
    return a;
  }

  std::string to_string() const { return alpha_.to_string(); }

 private:
  Expr alpha_;
  std::array<Expr, kSpacetimeDim> gradient_;
};

inline FieldSpec parse_field(std::string_view text) { return FieldSpec::parse(text); }
inline double eval_alpha(const FieldSpec& spec, const Point& y) { return spec.alpha(y); }
inline double eval_g(const FieldSpec& spec, const Point& y) { return spec.g(y); }
inline FourVector grad_alpha(const FieldSpec& spec, const Point& y) { return spec.gradient(y); }

/// Cell-centred uniform lattice over a box. An axis with box_min == box_max is
/// collapsed: it carries one point and contributes measure 1. Every other
/// axis needs at least two cells.
class Grid {
 public:
  using Counts = std::array<std::size_t, kSpacetimeDim>;

  Grid(FourVector box_min, FourVector box_max, Counts cells)
      : box_min_(box_min), box_max_(box_max), cells_(cells) {
    for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) {
      if (!std::isfinite(box_min_[mu]) || !std::isfinite(box_max_[mu])) {
        throw DomainError("grid: box bounds must be finite");
      }
      if (cells_[mu] == 0) throw DomainError("grid: empty region");
      if (box_max_[mu] < box_min_[mu]) throw DomainError("grid: box_max < box_min on axis " + std::to_string(mu));
      if (box_max_[mu] == box_min_[mu]) {
        if (cells_[mu] != 1) throw DomainError("grid: collapsed axis " + std::to_string(mu) + " must have 1 point");
        spacing_[mu] = 0.0;
      } else {
        if (cells_[mu] < 2) throw DomainError("grid: integrated axis " + std::to_string(mu) + " needs >= 2 points");
        spacing_[mu] = (box_max_[mu] - box_min_[mu]) / static_cast<double>(cells_[mu]);
      }
    }
  }

  /// Grid over [lo, hi] on one axis, every other axis collapsed at 0.
  static Grid along_axis(std::size_t mu, double lo, double hi, std::size_t cells) {
    FourVector bmin{}, bmax{};
    Counts counts{1, 1, 1, 1};
    bmin[mu] = lo;
    bmax[mu] = hi;
    counts[mu] = cells;
    return Grid(bmin, bmax, counts);
  }

  const FourVector& box_min() const { return box_min_; }
  const FourVector& box_max() const { return box_max_; }
  const Counts& cells() const { return cells_; }

  double spacing(std::size_t mu) const { return spacing_.at(mu); }
  bool integrated(std::size_t mu) const { return spacing_.at(mu) > 0.0; }

  std::size_t size() const {
    std::size_t n = 1;
    for (auto c : cells_) n *= c;
    return n;
  }

  /// Measure of one cell over the integrated axes.
  double cell_volume() const {
    double v = 1.0;
    for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) {
      if (integrated(mu)) v *= spacing_[mu];
    }
    return v;
  }

  /// Per-axis indices of the linear index `i` (axis 3 varies fastest).
  Counts unflatten(std::size_t i) const {
    Counts idx{};
    for (std::size_t mu = kSpacetimeDim; mu-- > 0;) {
      idx[mu] = i % cells_[mu];
      i /= cells_[mu];
    }
    return idx;
  }

  std::size_t flatten(const Counts& idx) const {
    std::size_t i = 0;
    for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) i = i * cells_[mu] + idx[mu];
    return i;
  }

  Point point(const Counts& idx) const {
    Point p;
    for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) {
      p[mu] = integrated(mu) ? box_min_[mu] + (static_cast<double>(idx[mu]) + 0.5) * spacing_[mu]
                             : box_min_[mu];
    }
    return p;
  }

  Point point(std::size_t i) const { return point(unflatten(i)); }

 private:
  FourVector box_min_;
  FourVector box_max_;
  Counts cells_;
  FourVector spacing_{};
};

/// Moves the number `n` of the structure at y (scale g(y)) into the structure
/// at x (scale g(x)). The base is kept, so the value picks up g(y)/g(x).
template <Scalar T>
ScaledNumber<T> connect(const FieldSpec& spec, const Point& x, const Point& y,
                        const ScaledNumber<T>& n) {
  const Structure<T> at_y(T(spec.g(y)));
  if (!at_y.same_as(n.structure())) {
    throw StructureMismatch("connect: number is not in the structure at (" + localmath::to_string(y) + ")");
  }
  return ScaledNumber<T>(n.base(), Structure<T>(T(spec.g(x))));
}

/// The number of value `v` in the local structure at y.
template <Scalar T>
ScaledNumber<T> local_number(const FieldSpec& spec, const Point& y, const T& v) {
  return make_number(v, T(spec.g(y)));
}

enum class BundleKind {
  Gauge,     // complex numbers x vector space
  Geometry,  // real numbers x scaled chart of M
};

using Metric = std::array<double, kSpacetimeDim>;

inline constexpr Metric kMinkowski{1.0, -1.0, -1.0, -1.0};
inline constexpr Metric kEuclidean{1.0, 1.0, 1.0, 1.0};

/// The pair of local structures sitting over one point.
struct Fiber {
  Point point;
  double scale;
  BundleKind kind;
  std::string number_structure;
  std::string space_structure;
  std::optional<Metric> metric;
};

inline Fiber fiber_at(const FieldSpec& spec, const Point& y, BundleKind kind) {
  const double scale = spec.g(y);
  if (kind == BundleKind::Gauge) return Fiber{y, scale, kind, "C", "V", std::nullopt};
  return Fiber{y, scale, kind, "R", "T", kMinkowski};
}

struct RestrictionReport {
  double max_norm = 0.0;
  Point argmax;
  bool pass = false;
};

/// Euclidean length of A(y) swept over every grid point; passes iff the
/// supremum is strictly below epsilon.
inline RestrictionReport check_local_restriction(const FieldSpec& spec, const Grid& region,
                                                 double epsilon,
                                                 unsigned threads = default_thread_count()) {
  if (!(epsilon > 0.0)) throw DomainError("restrict-check: epsilon must be positive");
  const std::size_t n = region.size();
  if (n == 0) throw DomainError("restrict-check: empty region");
  std::vector<double> norms(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const FourVector a = spec.gradient(region.point(i));
    double sum = 0.0;
    for (double c : a) sum += c * c;
    norms[i] = std::sqrt(sum);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (norms[i] > norms[best]) best = i;
  }
  return RestrictionReport{norms[best], region.point(best), norms[best] < epsilon};
}

}  // namespace localmath
