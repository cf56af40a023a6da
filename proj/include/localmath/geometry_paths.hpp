#pragma once

// Path lengths in the presence of the scaling field, transported to a
// reference point x:
//
//     L(p)_x = e^{-alpha(x)} int_0^1 e^{alpha(p(s))} [p' h p']^{1/2} ds,
//
// the geodesic equation
//
//     p''^mu = h^{mu nu} A_nu(p) - (A(p) . p') p'^mu,
//
// integrated with fixed-step RK4, a shooting solver for the two-point
// problem, and a discrete minimizer of L used as an independent check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "localmath/parallel.hpp"
#include "localmath/scaling_field.hpp"

namespace localmath {

enum class MetricKind { Minkowski, Euclidean };

inline const Metric& metric_of(MetricKind kind) {
  return kind == MetricKind::Minkowski ? kMinkowski : kEuclidean;
}

inline double quadratic_form(const FourVector& v, MetricKind kind) {
  const Metric& h = metric_of(kind);
  double sum = 0.0;
  for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) sum += h[mu] * v[mu] * v[mu];
  return sum;
}

/// A curve p(s). Analytic paths are four expressions in the variable s over
/// s in [0, 1]; polylines are straight between samples at strictly
/// increasing parameters.
class Path {
 public:
  static Path analytic(std::array<Expr, kSpacetimeDim> components) {
    Path p;
    p.analytic_ = true;
    p.components_ = std::move(components);
    for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) p.velocity_[mu] = p.components_[mu].derivative(0);
    if (!p.start().finite() || !p.end().finite()) throw DomainError("path: endpoints must be finite");
    return p;
  }

  static Path analytic(const std::array<std::string, kSpacetimeDim>& texts) {
    std::array<Expr, kSpacetimeDim> comps;
    for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) comps[mu] = parse_expression(texts[mu], path_variables());
    return analytic(std::move(comps));
  }

  static Path polyline(std::vector<double> params, std::vector<Point> points) {
    if (params.size() != points.size() || points.size() < 2) {
      throw DomainError("path: polyline needs at least two samples with one parameter each");
    }
    for (std::size_t i = 1; i < params.size(); ++i) {
      if (!(params[i] > params[i - 1])) throw DomainError("path: parameters must be strictly increasing");
    }
    for (const auto& p : points) {
      if (!p.finite()) throw DomainError("path: samples must be finite");
    }
    Path p;
    p.params_ = std::move(params);
    p.points_ = std::move(points);
    return p;
  }

  /// Polyline through `points` at uniformly spaced parameters in [0, 1].
  static Path polyline(std::vector<Point> points) {
    std::vector<double> params(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      params[i] = points.size() > 1 ? static_cast<double>(i) / static_cast<double>(points.size() - 1) : 0.0;
    }
    return polyline(std::move(params), std::move(points));
  }

  bool is_analytic() const { return analytic_; }

  double s_begin() const { return analytic_ ? 0.0 : params_.front(); }
  double s_end() const { return analytic_ ? 1.0 : params_.back(); }

  Point at(double s) const {
    if (analytic_) {
      Point p;
      const double v[1] = {s};
      for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) p[mu] = components_[mu].evaluate(v);
      return p;
    }
    const std::size_t i = segment_index(s);
    const double t = (s - params_[i]) / (params_[i + 1] - params_[i]);
    Point p;
    for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) {
      p[mu] = points_[i][mu] + t * (points_[i + 1][mu] - points_[i][mu]);
    }
    return p;
  }

  /// dp/ds.
  FourVector velocity(double s) const {
    FourVector v{};
    if (analytic_) {
      const double arg[1] = {s};
      for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) v[mu] = velocity_[mu].evaluate(arg);
      return v;
    }
    const std::size_t i = segment_index(s);
    const double ds = params_[i + 1] - params_[i];
    for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) v[mu] = (points_[i + 1][mu] - points_[i][mu]) / ds;
    return v;
  }

  Point start() const { return analytic_ ? at(0.0) : points_.front(); }
  Point end() const { return analytic_ ? at(1.0) : points_.back(); }

  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& params() const { return params_; }
  const std::array<Expr, kSpacetimeDim>& components() const { return components_; }

  /// Analytic path s -> p(sigma(s)); sigma must map [0, 1] onto [0, 1]
  /// monotonically.
  Path reparameterized(const Expr& sigma) const {
    if (!analytic_) throw DomainError("path: only analytic paths can be reparameterized symbolically");
    std::array<Expr, kSpacetimeDim> comps;
    for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) comps[mu] = components_[mu].substitute(0, sigma);
    return analytic(std::move(comps));
  }

 private:
  Path() = default;

  std::size_t segment_index(double s) const {
    const auto it = std::upper_bound(params_.begin(), params_.end(), s);
    const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - params_.begin() - 1, 0));
    return std::min(i, params_.size() - 2);
  }

  bool analytic_ = false;
  std::array<Expr, kSpacetimeDim> components_{};
  std::array<Expr, kSpacetimeDim> velocity_{};
  std::vector<double> params_;
  std::vector<Point> points_;
};

/// Speed sqrt(v h v); radicands below -kRadicandTolerance (relative to the
/// Euclidean size of v) mark spacelike motion under the Minkowski metric.
inline constexpr double kRadicandTolerance = 1e-12;

namespace detail {

inline double speed_or_throw(const FourVector& v, MetricKind metric, double s_lo, double s_hi) {
  const double rad = quadratic_form(v, metric);
  if (rad >= 0.0) return std::sqrt(rad);
  const double size = quadratic_form(v, MetricKind::Euclidean);
  if (rad < -kRadicandTolerance * std::max(1.0, size)) {
    throw DomainError("path_length: spacelike segment for s in [" + std::to_string(s_lo) + ", " +
                      std::to_string(s_hi) + "]");
  }
  return 0.0;
}

}  // namespace detail

/// L(p)_x by the composite midpoint rule. Analytic paths use `cells` cells
/// over [0, 1]; polylines split every segment into ceil(cells / segments)
/// cells.
inline ScaledNumber<double> path_length(const FieldSpec& spec, const Path& path, const Point& x,
                                        MetricKind metric, std::size_t cells = 10000) {
  if (cells == 0) throw DomainError("path_length: need at least one quadrature cell");
  const double alpha_x = spec.alpha(x);
  std::vector<double> terms;
  if (path.is_analytic()) {
    terms.resize(cells);
    const double ds = 1.0 / static_cast<double>(cells);
    for (std::size_t j = 0; j < cells; ++j) {
      const double s = (static_cast<double>(j) + 0.5) * ds;
      const double speed = detail::speed_or_throw(path.velocity(s), metric, j * ds, (j + 1) * ds);
      terms[j] = std::exp(spec.alpha(path.at(s)) - alpha_x) * speed * ds;
    }
  } else {
    const auto& pts = path.points();
    const auto& params = path.params();
    const std::size_t segments = pts.size() - 1;
    const std::size_t sub = std::max<std::size_t>(1, (cells + segments - 1) / segments);
    terms.resize(segments * sub);
    for (std::size_t i = 0; i < segments; ++i) {
      FourVector d{};
      for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) d[mu] = pts[i + 1][mu] - pts[i][mu];
      const double chord = detail::speed_or_throw(d, metric, params[i], params[i + 1]);
      for (std::size_t j = 0; j < sub; ++j) {
        const double t = (static_cast<double>(j) + 0.5) / static_cast<double>(sub);
        Point m;
        for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) m[mu] = pts[i][mu] + t * d[mu];
        terms[i * sub + j] = std::exp(spec.alpha(m) - alpha_x) * chord / static_cast<double>(sub);
      }
    }
  }
  return make_number(pairwise_sum<double>(terms), spec.g(x));
}

struct GeodesicSolution {
  std::vector<double> tau;
  std::vector<Point> position;
  std::vector<FourVector> velocity;
  bool aborted = false;  // non-finite state; samples stop at the last valid tau

  double last_tau() const { return tau.back(); }

  /// The trajectory as a polyline with parameter tau / last_tau.
  Path path() const {
    std::vector<double> params(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) params[i] = tau[i] / tau.back();
    return Path::polyline(std::move(params), position);
  }
};

namespace detail {

struct GeodesicState {
  FourVector p;
  FourVector v;
};

inline GeodesicState geodesic_rhs(const FieldSpec& spec, const GeodesicState& s, MetricKind metric) {
  const FourVector a = spec.gradient(Point{s.p});
  const Metric& h = metric_of(metric);
  double a_dot_v = 0.0;
  for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) a_dot_v += a[mu] * s.v[mu];
  GeodesicState d;
  d.p = s.v;
  for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) d.v[mu] = h[mu] * a[mu] - a_dot_v * s.v[mu];
  return d;
}

inline GeodesicState axpy(const GeodesicState& s, double k, const GeodesicState& d) {
  GeodesicState out;
  for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) {
    out.p[mu] = s.p[mu] + k * d.p[mu];
    out.v[mu] = s.v[mu] + k * d.v[mu];
  }
  return out;
}

inline bool finite_state(const GeodesicState& s) {
  for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) {
    if (!std::isfinite(s.p[mu]) || !std::isfinite(s.v[mu])) return false;
  }
  return true;
}

}  // namespace detail

/// Unit-speed version of v under the metric; null vectors are returned as is.
inline FourVector normalized_velocity(const FourVector& v, MetricKind metric) {
  const double speed2 = std::abs(quadratic_form(v, metric));
  if (quadratic_form(v, MetricKind::Euclidean) == 0.0) {
    throw DomainError("geodesic: initial velocity must be nonzero");
  }
  if (speed2 == 0.0) return v;
  FourVector out{};
  for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) out[mu] = v[mu] / std::sqrt(speed2);
  return out;
}

/// Integrates the geodesic equation from (y0, v0) over [0, tau_max] with
/// `steps` RK4 steps. v0 is first normalized to unit speed.
inline GeodesicSolution solve_geodesic(const FieldSpec& spec, const Point& y0, const FourVector& v0,
                                       double tau_max, std::size_t steps, MetricKind metric) {
  if (steps < 2) throw DomainError("geodesic: need at least 2 steps");
  if (!(tau_max > 0.0)) throw DomainError("geodesic: tau_max must be positive");
  if (!y0.finite()) throw DomainError("geodesic: start point must be finite");
  const double dt = tau_max / static_cast<double>(steps);
  detail::GeodesicState state{y0.coords, normalized_velocity(v0, metric)};

  GeodesicSolution sol;
  sol.tau.reserve(steps + 1);
  sol.position.reserve(steps + 1);
  sol.velocity.reserve(steps + 1);
  sol.tau.push_back(0.0);
  sol.position.push_back(Point{state.p});
  sol.velocity.push_back(state.v);

  for (std::size_t n = 0; n < steps; ++n) {
    detail::GeodesicState next;
    try {
      const auto k1 = detail::geodesic_rhs(spec, state, metric);
      const auto k2 = detail::geodesic_rhs(spec, detail::axpy(state, dt / 2, k1), metric);
      const auto k3 = detail::geodesic_rhs(spec, detail::axpy(state, dt / 2, k2), metric);
      const auto k4 = detail::geodesic_rhs(spec, detail::axpy(state, dt, k3), metric);
      next = state;
      for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) {
        next.p[mu] += dt / 6 * (k1.p[mu] + 2 * k2.p[mu] + 2 * k3.p[mu] + k4.p[mu]);
        next.v[mu] += dt / 6 * (k1.v[mu] + 2 * k2.v[mu] + 2 * k3.v[mu] + k4.v[mu]);
      }
    } catch (const RangeError&) {
      sol.aborted = true;
      break;
    }
    if (!detail::finite_state(next)) {
      sol.aborted = true;
      break;
    }
    state = next;
    // tau of the final step is tau_max exactly.
    sol.tau.push_back(n + 1 == steps ? tau_max : static_cast<double>(n + 1) * dt);
    sol.position.push_back(Point{state.p});
    sol.velocity.push_back(state.v);
  }
  return sol;
}

struct ShootingResult {
  GeodesicSolution solution;
  FourVector initial_velocity{};  // unit speed
  double tau = 0.0;
  double miss = 0.0;  // Euclidean distance from the endpoint to the target
  bool converged = false;
};

/// Geodesic from y to z by shooting. The unknown w in R^4 encodes both the
/// launch direction w/|w| and the parameter length |w|; Newton iterations
/// with a finite-difference Jacobian drive p(|w|) to z.
inline ShootingResult shoot_geodesic(const FieldSpec& spec, const Point& y, const Point& z,
                                     MetricKind metric, std::size_t steps = 2000,
                                     std::size_t max_iter = 50, double tolerance = 1e-12) {
  using Vec = Eigen::Vector4d;
  auto endpoint = [&](const Vec& w) -> Vec {
    FourVector v{w[0], w[1], w[2], w[3]};
    const double len = std::sqrt(std::abs(quadratic_form(v, metric)));
    if (!(len > 0.0)) throw DomainError("shoot_geodesic: null or zero launch vector");
    const auto sol = solve_geodesic(spec, y, v, len, steps, metric);
    if (sol.aborted) throw RangeError("shoot_geodesic: trajectory left the finite range");
    const Point& e = sol.position.back();
    return Vec(e[0], e[1], e[2], e[3]);
  };

  const Vec target(z[0], z[1], z[2], z[3]);
  Vec w = target - Vec(y[0], y[1], y[2], y[3]);
  Vec residual = endpoint(w) - target;
  bool converged = residual.norm() <= tolerance * std::max(1.0, target.norm());
  for (std::size_t it = 0; it < max_iter && !converged; ++it) {
    Eigen::Matrix4d jac;
    const double step = 1e-6 * std::max(1.0, w.norm());
    for (int k = 0; k < 4; ++k) {
      Vec wp = w, wm = w;
      wp[k] += step;
      wm[k] -= step;
      jac.col(k) = (endpoint(wp) - endpoint(wm)) / (2 * step);
    }
    const Vec delta = jac.fullPivLu().solve(-residual);
    double damping = 1.0;
    Vec candidate = w + delta;
    Vec cand_res = endpoint(candidate) - target;
    while (cand_res.norm() > residual.norm() && damping > 1e-4) {
      damping /= 2;
      candidate = w + damping * delta;
      cand_res = endpoint(candidate) - target;
    }
    w = candidate;
    residual = cand_res;
    converged = residual.norm() <= tolerance * std::max(1.0, target.norm());
  }

  ShootingResult out;
  FourVector v{w[0], w[1], w[2], w[3]};
  out.tau = std::sqrt(std::abs(quadratic_form(v, metric)));
  out.initial_velocity = normalized_velocity(v, metric);
  out.solution = solve_geodesic(spec, y, v, out.tau, steps, metric);
  out.miss = residual.norm();
  out.converged = converged;
  return out;
}

/// Discretized length functional of a polyline: one midpoint cell per
/// segment, sum_i e^{alpha(m_i) - alpha(x)} |p_{i+1} - p_i|_h.
/// Returns +infinity when a segment is spacelike under the metric.
inline double discrete_path_functional(const FieldSpec& spec, const std::vector<Point>& knots,
                                       MetricKind metric, double alpha_ref = 0.0) {
  std::vector<double> terms(knots.size() - 1);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    FourVector d{};
    Point m;
    for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) {
      d[mu] = knots[i + 1][mu] - knots[i][mu];
      m[mu] = 0.5 * (knots[i + 1][mu] + knots[i][mu]);
    }
    const double rad = quadratic_form(d, metric);
    if (rad < 0.0) return std::numeric_limits<double>::infinity();
    terms[i] = std::exp(spec.alpha(m) - alpha_ref) * std::sqrt(rad);
  }
  return pairwise_sum<double>(terms);
}

/// Gradient of discrete_path_functional with respect to every knot. The
/// endpoint rows are included; minimizers ignore them.
inline std::vector<FourVector> discrete_path_gradient(const FieldSpec& spec,
                                                      const std::vector<Point>& knots,
                                                      MetricKind metric, double alpha_ref = 0.0) {
  const Metric& h = metric_of(metric);
  std::vector<FourVector> grad(knots.size(), FourVector{});
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    FourVector d{};
    Point m;
    for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) {
      d[mu] = knots[i + 1][mu] - knots[i][mu];
      m[mu] = 0.5 * (knots[i + 1][mu] + knots[i][mu]);
    }
    const double len = std::sqrt(std::max(0.0, quadratic_form(d, metric)));
    if (len == 0.0) continue;
    const double w = std::exp(spec.alpha(m) - alpha_ref);
    const FourVector a = spec.gradient(m);
    for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) {
      const double along = w * h[mu] * d[mu] / len;
      const double bend = 0.5 * w * a[mu] * len;
      grad[i][mu] += bend - along;
      grad[i + 1][mu] += bend + along;
    }
  }
  return grad;
}

struct MinimizedPath {
  Path path;
  ScaledNumber<double> length;  // path_length of the polyline, reference y
  double functional = 0.0;      // final discrete functional value
  std::size_t iterations = 0;
  double gradient_norm = 0.0;  // interior knots, at the returned path
  bool converged = false;
};

struct MinimizeOptions {
  std::size_t max_iter = 200000;
  double gradient_tolerance = 1e-10;
  std::size_t quadrature_cells = 10000;
};

/// Gradient descent with Armijo backtracking on the discrete functional over
/// `knots` interior knots, seeded with the straight segment from y to z.
/// Steps that make a segment spacelike are rejected. Stops as converged when
/// the gradient norm reaches the tolerance or no step lowers the functional
/// in floating point. Deterministic.
inline MinimizedPath minimize_path(const FieldSpec& spec, const Point& y, const Point& z,
                                   MetricKind metric, std::size_t knots,
                                   const MinimizeOptions& options = {}) {
  if (knots < 3) throw DomainError("minimize_path: need at least 3 interior knots");
  const std::size_t n = knots + 2;
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) pts[i][mu] = y[mu] + t * (z[mu] - y[mu]);
  }
  const double alpha_ref = spec.alpha(y);
  double f = discrete_path_functional(spec, pts, metric, alpha_ref);
  if (!std::isfinite(f)) throw DomainError("minimize_path: straight seed is spacelike");

  double step = 1.0 / static_cast<double>(n);
  bool converged = false;
  double gradient_norm = 0.0;
  std::size_t it = 0;
  std::vector<Point> trial(n);
  for (; it < options.max_iter; ++it) {
    auto grad = discrete_path_gradient(spec, pts, metric, alpha_ref);
    grad.front() = FourVector{};
    grad.back() = FourVector{};
    double g2 = 0.0;
    for (const auto& g : grad)
      for (double c : g) g2 += c * c;
    gradient_norm = std::sqrt(g2);
    if (gradient_norm <= options.gradient_tolerance) {
      converged = true;
      break;
    }
    step *= 2.0;
    bool accepted = false;
    while (step > 1e-20) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) trial[i][mu] = pts[i][mu] - step * grad[i][mu];
      const double ft = discrete_path_functional(spec, trial, metric, alpha_ref);
      if (std::isfinite(ft) && ft < f && ft <= f - 1e-4 * step * g2) {
        pts.swap(trial);
        f = ft;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No representable decrease of the functional remains.
      converged = true;
      break;
    }
  }

  Path path = Path::polyline(pts);
  auto length = path_length(spec, path, y, metric, options.quadrature_cells);
  return MinimizedPath{std::move(path), length, f, it, gradient_norm, converged};
}

}  // namespace localmath
