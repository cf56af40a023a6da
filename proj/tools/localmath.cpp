// localmath: command-line front end.
//
// Exit codes: 0 success, 1 a check failed, 2 usage, parse or input error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "localmath/acceptance.hpp"
#include "localmath/config.hpp"
#include "localmath/localmath.hpp"

namespace {

using namespace localmath;
namespace cfg = localmath::config;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

/// A check did not hold; reported with exit code 1.
struct CheckFailed {
  std::string message;
};

std::string g17(double v) { return fmt::format("{:.17g}", v); }

std::string point_csv(const Point& p) {
  return fmt::format("{},{},{},{}", g17(p[0]), g17(p[1]), g17(p[2]), g17(p[3]));
}

/// Writes to --out when given, else stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

MetricKind parse_metric(const std::string& name) {
  if (name == "minkowski") return MetricKind::Minkowski;
  if (name == "euclidean") return MetricKind::Euclidean;
  throw ConfigError("--metric: expected 'minkowski' or 'euclidean'");
}

ComplexField scalar_field(const std::string& re, const std::string& im) {
  try {
    return ComplexField::parse(re, im);
  } catch (const ParseError& e) {
    throw ParseError("--psi", e);
  }
}

// ------------------------------------------------------------ subcommands

struct Common {
  unsigned threads = default_thread_count();
  std::uint64_t seed = 0;
};

int run_value_table(std::uint64_t n, const std::string& out_path) {
  const auto table = natural_value_table(n);
  Output out(out_path);
  out.stream() << "value,subset\n";
  for (const auto& e : table) out.stream() << e.value << ',' << e.subset << '\n';
  return kOk;
}

int run_restrict_check(const std::string& field_path, double epsilon, const Common& c) {
  const auto field = cfg::load_field_config(field_path);
  const auto report = check_local_restriction(field.spec, field.require_grid(), epsilon, c.threads);
  fmt::print("maxNorm: {}\nargmax: {}\nepsilon: {}\npass: {}\n", g17(report.max_norm), point_csv(report.argmax),
             g17(epsilon), report.pass ? "true" : "false");
  return report.pass ? kOk : kCheckFailed;
}

int run_integrate(const std::string& field_path, const std::string& psi_re, const std::string& psi_im,
                  const std::string& ref, const Common& c) {
  const auto field = cfg::load_field_config(field_path);
  const Grid& grid = field.require_grid();
  const auto psi = scalar_field(psi_re, psi_im);
  const Point x{cfg::parse_four(ref, "--ref")};
  const auto I = scaled_integral(field.spec, psi, grid, x, c.threads);
  fmt::print("value: {} {}\n", g17(I.value().real()), g17(I.value().imag()));
  fmt::print("scale: {}\n", g17(I.scale().real()));
  std::string spacing;
  for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) {
    if (!spacing.empty()) spacing += ',';
    spacing += grid.integrated(mu) ? g17(grid.spacing(mu)) : "-";
  }
  fmt::print("spacing: {}\n", spacing);
  // Richardson estimate from the grid with half the cells per integrated
  // axis: the midpoint rule is second order, so err ~ |I_h - I_2h| / 3.
  bool halvable = true;
  Grid::Counts coarse = grid.cells();
  for (std::size_t mu = 0; mu < kSpacetimeDim; ++mu) {
    if (!grid.integrated(mu)) continue;
    if (coarse[mu] % 2 != 0 || coarse[mu] < 4) halvable = false;
    coarse[mu] /= 2;
  }
  if (halvable) {
    const auto Ic = scaled_integral(field.spec, psi, Grid(grid.box_min(), grid.box_max(), coarse), x, c.threads);
    fmt::print("estimatedError: {}\n", g17(std::abs(I.value() - Ic.value()) / 3.0));
  } else {
    fmt::print("estimatedError: n/a (needs an even cell count >= 4 on every integrated axis)\n");
  }
  return kOk;
}

int run_derivative_check(const std::string& field_path, const std::string& psi_re, const std::string& psi_im,
                         const std::string& at, std::size_t mu, const std::vector<double>& steps,
                         const std::string& out_path) {
  const auto field = cfg::load_field_config(field_path);
  const auto psi = scalar_field(psi_re, psi_im);
  const Point y{cfg::parse_four(at, "--at")};
  if (mu >= kSpacetimeDim) throw ConfigError("--mu: expected 0, 1, 2 or 3");
  if (steps.size() < 2) throw ConfigError("--steps: need at least two step sizes");
  const Complex exact = scaled_derivative(field.spec, psi, y, mu);
  Output out(out_path);
  out.stream() << "h,D_re,D_im,quotient_re,quotient_im,abs_error\n";
  std::vector<double> errors;
  for (double h : steps) {
    const Complex q = transported_difference_quotient(field.spec, psi, y, mu, h);
    errors.push_back(std::abs(q - exact));
    out.stream() << fmt::format("{},{},{},{},{},{}\n", g17(h), g17(exact.real()), g17(exact.imag()), g17(q.real()),
                                g17(q.imag()), g17(errors.back()));
  }
  if (errors.front() == 0.0 && errors.back() == 0.0) {
    fmt::print(stderr, "observed order: exact at every step\n");
    return kOk;
  }
  for (double e : errors) {
    if (!(e > 0.0)) {
      fmt::print(stderr, "observed order: undefined (an error is exactly zero)\n");
      return kOk;
    }
  }
  const double order = observed_order(steps, errors);
  fmt::print(stderr, "observed order: {:.4f}\n", order);
  // First order is required; the estimate is compared at one decimal.
  return std::round(order * 10.0) / 10.0 >= 1.0 ? kOk : kCheckFailed;
}

int run_lagrangian(const std::string& field_path, const std::string& psi_path, const std::string& gauge_path,
                   const std::string& theta_path, double tolerance, const std::string& out_path, const Common& c) {
  const auto field = cfg::load_field_config(field_path);
  const Grid& grid = field.require_grid();
  const auto psi = cfg::load_spinor_config(psi_path);
  const auto gauge = cfg::load_gauge_config(gauge_path);
  const auto density = lagrangian_lattice(psi, field.spec, gauge, grid, GammaSet::dirac(), c.threads);

  if (theta_path.empty() || !out_path.empty()) {
    Output out(out_path);
    out.stream() << "y0,y1,y2,y3,re,im\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out.stream() << point_csv(grid.point(i)) << ',' << g17(density[i].real()) << ',' << g17(density[i].imag())
                   << '\n';
    }
  }
  if (theta_path.empty()) return kOk;

  const auto theta = cfg::load_theta_config(theta_path);
  const auto transformed = gauge_transform(psi, gauge, theta);
  const auto after =
      lagrangian_lattice(transformed.psi, field.spec, transformed.gauge, grid, GammaSet::dirac(), c.threads);
  double worst = 0.0;
  std::size_t worst_site = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = std::abs(after[i] - density[i]);
    if (d > worst) {
      worst = d;
      worst_site = i;
    }
  }
  const bool pass = worst <= tolerance;
  fmt::print("sites: {}\nmaxAbsDelta: {}\nat: {}\ntolerance: {}\npass: {}\n", grid.size(), g17(worst),
             point_csv(grid.point(worst_site)), g17(tolerance), pass ? "true" : "false");
  return pass ? kOk : kCheckFailed;
}

int run_geodesic(const std::string& field_path, const std::string& start, const std::string& velocity, double tau,
                 std::size_t steps, const std::string& metric, const std::string& out_path) {
  const auto field = cfg::load_field_config(field_path);
  const Point y0{cfg::parse_four(start, "--start")};
  const FourVector v0 = cfg::parse_four(velocity, "--velocity");
  const auto sol = solve_geodesic(field.spec, y0, v0, tau, steps, parse_metric(metric));
  Output out(out_path);
  out.stream() << "tau,p0,p1,p2,p3,v0,v1,v2,v3\n";
  for (std::size_t i = 0; i < sol.tau.size(); ++i) {
    const auto& v = sol.velocity[i];
    out.stream() << g17(sol.tau[i]) << ',' << point_csv(sol.position[i]) << ',' << g17(v[0]) << ',' << g17(v[1])
                 << ',' << g17(v[2]) << ',' << g17(v[3]) << '\n';
  }
  if (sol.aborted) {
    throw CheckFailed{fmt::format("geodesic: non-finite state, trajectory stops at tau = {}", g17(sol.last_tau()))};
  }
  return kOk;
}

int run_path_length(const std::string& field_path, const std::string& path_path, const std::string& ref,
                    const std::string& metric, std::size_t cells) {
  const auto field = cfg::load_field_config(field_path);
  const auto path = cfg::load_path_config(path_path);
  const Point x{cfg::parse_four(ref, "--ref")};
  const auto L = path_length(field.spec, path, x, parse_metric(metric), cells);
  fmt::print("length: {}\nscale: {}\nreference: {}\n", g17(L.value()), g17(L.scale()), point_csv(x));
  return kOk;
}

int run_selftest(bool perturb_gamma, const Common& c) {
  acceptance::Options options;
  options.seed = c.seed;
  options.threads = c.threads;
  options.perturb_gamma = perturb_gamma;
  fmt::print("seed {}\n", c.seed);
  bool all = true;
  for (const auto& r : acceptance::run_all(options)) {
    fmt::print("{}\n", acceptance::format_result(r));
    all = all && r.pass;
  }
  fmt::print("{}\n", all ? "all checks passed" : "some checks FAILED");
  return all ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scaled number structures, local calculus, gauge fields and geodesics."};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(R"txt(Examples (run from the repository root):
  localmath value-table 30
  localmath integrate --field configs/field_linear.json --psi 1 --ref 0,0,0,0
  localmath derivative-check --field configs/field_wave.json --psi "cos(y1)" --psi-im "y0" --at 0.1,0.4,0,0 --mu 1
  localmath lagrangian --field configs/field_lattice.json --psi configs/psi.json --gauge configs/gauge.json --gauge-check configs/theta.json
  localmath geodesic --field configs/field_geodesic.json --start 0,0,0,0 --velocity 0,0.2,1,0 --tau 1 --steps 1000 --metric euclidean
  localmath path-length --field configs/field_geodesic.json --path configs/path_line.json --ref 0,0,0,0 --metric euclidean
  localmath restrict-check --field configs/field_flat.json --epsilon 1e-15
  localmath selftest --seed 3

Exit codes: 0 success, 1 check failed, 2 usage, parse or input error.
LOCALMATH_THREADS sets the default for --threads.)txt");

  Common common;
  app.add_option("--threads", common.threads, "Worker threads for grid sweeps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", common.seed, "Seed for randomized checks")->capture_default_str();

  int result = kOk;

  // value-table
  std::uint64_t vt_n = 0;
  std::string vt_out;
  auto* vt = app.add_subcommand("value-table", "Values of n in every subset N_d (CSV: value,subset)");
  vt->add_option("n", vt_n, "Natural number")->required();
  vt->add_option("--out", vt_out, "Output CSV (default stdout)");
  vt->footer("Example: localmath value-table 30");
  vt->callback([&] { result = run_value_table(vt_n, vt_out); });

  // integrate
  std::string in_field, in_re, in_im = "0", in_ref;
  auto* in = app.add_subcommand("integrate", "Scaled integral of psi over the field's grid, as a number at --ref");
  in->add_option("--field", in_field, "Field config (JSON with alpha, domain, points)")->required();
  in->add_option("--psi", in_re, "Real part of psi(y0..y3)")->required();
  in->add_option("--psi-im", in_im, "Imaginary part of psi")->capture_default_str();
  in->add_option("--ref", in_ref, "Reference point x0,x1,x2,x3")->required();
  in->footer("Example: localmath integrate --field configs/field_linear.json --psi 1 --ref 0,0,0,0");
  in->callback([&] { result = run_integrate(in_field, in_re, in_im, in_ref, common); });

  // derivative-check
  std::string dc_field, dc_re, dc_im = "0", dc_at, dc_out;
  std::size_t dc_mu = 0;
  std::vector<double> dc_steps{1e-2, 1e-3, 1e-4};
  auto* dc = app.add_subcommand("derivative-check", "Scaled derivative against transported difference quotients (CSV)");
  dc->add_option("--field", dc_field, "Field config")->required();
  dc->add_option("--psi", dc_re, "Real part of psi")->required();
  dc->add_option("--psi-im", dc_im, "Imaginary part of psi")->capture_default_str();
  dc->add_option("--at", dc_at, "Point y0,y1,y2,y3")->required();
  dc->add_option("--mu", dc_mu, "Direction 0..3")->required();
  dc->add_option("--steps", dc_steps, "Step sizes h")->delimiter(',')->capture_default_str();
  dc->add_option("--out", dc_out, "Output CSV (default stdout)");
  dc->footer(
      "Example: localmath derivative-check --field configs/field_wave.json --psi \"cos(y1)\" --psi-im \"y0\" "
      "--at 0.1,0.4,0,0 --mu 1");
  dc->callback([&] { result = run_derivative_check(dc_field, dc_re, dc_im, dc_at, dc_mu, dc_steps, dc_out); });

  // lagrangian
  std::string lg_field, lg_psi, lg_gauge, lg_theta, lg_out;
  double lg_tol = 1e-10;
  auto* lg = app.add_subcommand("lagrangian", "Dirac Lagrangian density per grid site (CSV: y0..y3,re,im)");
  lg->add_option("--field", lg_field, "Field config with the lattice")->required();
  lg->add_option("--psi", lg_psi, "Spinor config")->required();
  lg->add_option("--gauge", lg_gauge, "Gauge config (a, b, m, B, phi, bar)")->required();
  lg->add_option("--gauge-check", lg_theta, "Theta config: report max |L' - L| after the gauge transformation");
  lg->add_option("--tolerance", lg_tol, "Gauge check tolerance")->capture_default_str();
  lg->add_option("--out", lg_out, "Output CSV (default stdout unless --gauge-check)");
  lg->footer(
      "Example: localmath lagrangian --field configs/field_lattice.json --psi configs/psi.json "
      "--gauge configs/gauge.json --gauge-check configs/theta.json");
  lg->callback([&] { result = run_lagrangian(lg_field, lg_psi, lg_gauge, lg_theta, lg_tol, lg_out, common); });

  // geodesic
  std::string gd_field, gd_start, gd_vel, gd_metric = "minkowski", gd_out;
  double gd_tau = 1.0;
  std::size_t gd_steps = 1000;
  auto* gd = app.add_subcommand("geodesic", "RK4 geodesic from a start point and velocity (CSV: tau,p0..p3,v0..v3)");
  gd->add_option("--field", gd_field, "Field config")->required();
  gd->add_option("--start", gd_start, "Start point y0,y1,y2,y3")->required();
  gd->add_option("--velocity", gd_vel, "Initial velocity, normalized to unit speed")->required();
  gd->add_option("--tau", gd_tau, "Parameter length")->capture_default_str();
  gd->add_option("--steps", gd_steps, "RK4 steps")->capture_default_str();
  gd->add_option("--metric", gd_metric, "minkowski or euclidean")->capture_default_str();
  gd->add_option("--out", gd_out, "Output CSV (default stdout)");
  gd->footer(
      "Example: localmath geodesic --field configs/field_geodesic.json --start 0,0,0,0 --velocity 0,0.2,1,0 "
      "--tau 1 --steps 1000 --metric euclidean");
  gd->callback([&] { result = run_geodesic(gd_field, gd_start, gd_vel, gd_tau, gd_steps, gd_metric, gd_out); });

  // path-length
  std::string pl_field, pl_path, pl_ref, pl_metric = "minkowski";
  std::size_t pl_cells = 10000;
  auto* pl = app.add_subcommand("path-length", "Scaled length of a path, as a number at --ref");
  pl->add_option("--field", pl_field, "Field config")->required();
  pl->add_option("--path", pl_path, "Path config (analytic or polyline)")->required();
  pl->add_option("--ref", pl_ref, "Reference point x0,x1,x2,x3")->required();
  pl->add_option("--metric", pl_metric, "minkowski or euclidean")->capture_default_str();
  pl->add_option("--cells", pl_cells, "Quadrature cells")->check(CLI::PositiveNumber)->capture_default_str();
  pl->footer(
      "Example: localmath path-length --field configs/field_geodesic.json --path configs/path_line.json "
      "--ref 0,0,0,0 --metric euclidean");
  pl->callback([&] { result = run_path_length(pl_field, pl_path, pl_ref, pl_metric, pl_cells); });

  // restrict-check
  std::string rc_field;
  double rc_eps = 0.0;
  auto* rc = app.add_subcommand("restrict-check", "Check max |grad alpha| < epsilon over the field's grid");
  rc->add_option("--field", rc_field, "Field config")->required();
  rc->add_option("--epsilon", rc_eps, "Threshold")->required();
  rc->footer("Example: localmath restrict-check --field configs/field_flat.json --epsilon 1e-15");
  rc->callback([&] { result = run_restrict_check(rc_field, rc_eps, common); });

  // selftest
  bool st_perturb = false;
  auto* st = app.add_subcommand("selftest", "Run every acceptance check and print a pass/fail table");
  st->add_flag("--perturb-gamma", st_perturb, "Fault injection: perturb a gamma matrix entry");
  st->footer("Example: localmath selftest --seed 3");
  st->callback([&] { result = run_selftest(st_perturb, common); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand --help lands here with a zero exit code.
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kUsage;
  } catch (const CheckFailed& e) {
    std::cerr << "localmath: " << e.message << '\n';
    return kCheckFailed;
  } catch (const localmath::Error& e) {
    std::cerr << "localmath: error: " << e.what() << '\n';
    return kUsage;
  }
  return result;
}
