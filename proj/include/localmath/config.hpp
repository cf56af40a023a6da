#pragma once

// Readers for the JSON configuration files used by the command-line tool.
//
//   field:  {"alpha": "0.5*y1",
//            "domain": {"boxMin": [0,0,0,0], "boxMax": [0,1,0,0]},
//            "points": [1, 100, 1, 1]}          (domain and points optional)
//   psi:    {"components": [{"re": "...", "im": "..."}, x4]}
//   gauge:  {"a": 1, "b": 0.0854, "m": 0.5, "B": ["0","0","0","0"],
//            "phi": "0", "bar": "gamma5-conjugate" | "dirac-adjoint"}
//   theta:  {"theta": "0.3*y1"}
//   path:   {"analytic": ["s", "0", "0", "0"]}
//        or {"polyline": {"s": [0, 0.5, 1], "points": [[...], [...], [...]]}}

#include <array>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "localmath/gauge_dirac.hpp"
#include "localmath/geometry_paths.hpp"

namespace localmath::config {

using Json = nlohmann::json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

namespace detail {

inline const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  return j.at(key);
}

inline std::string expression_text(const Json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << j.get<double>();
    return os.str();
  }
  throw ConfigError(where + ": expected an expression string");
}

inline FourVector four_reals(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) throw ConfigError(where + ": expected an array of 4 numbers");
  FourVector v{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[i].is_number()) throw ConfigError(where + ": expected an array of 4 numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

inline Expr expression(const Json& j, const std::string& where) {
  try {
    return parse_spacetime_expression(expression_text(j, where));
  } catch (const ParseError& e) {
    throw ParseError(where, e);
  }
}

}  // namespace detail

struct FieldConfig {
  FieldSpec spec;
  std::optional<Grid> grid;  // absent when the file has no domain

  const Grid& require_grid() const {
    if (!grid) throw ConfigError("field config: this command needs 'domain' and 'points'");
    return *grid;
  }
};

inline FieldConfig parse_field_config(const Json& j, const std::string& where = "field") {
  FieldSpec spec(detail::expression(detail::require(j, "alpha", where), where + ".alpha"));
  if (!j.contains("domain") && !j.contains("points")) return FieldConfig{std::move(spec), std::nullopt};
  const Json& domain = detail::require(j, "domain", where);
  const auto bmin = detail::four_reals(detail::require(domain, "boxMin", where + ".domain"), where + ".domain.boxMin");
  const auto bmax = detail::four_reals(detail::require(domain, "boxMax", where + ".domain"), where + ".domain.boxMax");
  const Json& pts = detail::require(j, "points", where);
  if (!pts.is_array() || pts.size() != 4) throw ConfigError(where + ".points: expected 4 integers");
  Grid::Counts counts{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!pts[i].is_number_integer() || pts[i].get<long long>() < 0) {
      throw ConfigError(where + ".points: expected 4 nonnegative integers");
    }
    counts[i] = pts[i].get<std::size_t>();
  }
  return FieldConfig{std::move(spec), Grid(bmin, bmax, counts)};
}

inline FieldConfig load_field_config(const std::string& path) {
  return parse_field_config(read_json_file(path), path);
}

inline SpinorField parse_spinor_config(const Json& j, const std::string& where = "psi") {
  const Json& comps = detail::require(j, "components", where);
  if (!comps.is_array() || comps.size() != 4) throw ConfigError(where + ".components: expected 4 entries");
  SpinorField psi;
  for (std::size_t k = 0; k < 4; ++k) {
    const std::string at = where + ".components[" + std::to_string(k) + "]";
    const Json& c = comps[k];
    if (c.is_string() || c.is_number()) {
      psi.components[k] = ComplexField{detail::expression(c, at), Expr::constant(0.0)};
      continue;
    }
    psi.components[k].re = detail::expression(detail::require(c, "re", at), at + ".re");
    psi.components[k].im = c.contains("im") ? detail::expression(c.at("im"), at + ".im") : Expr::constant(0.0);
  }
  return psi;
}

inline SpinorField load_spinor_config(const std::string& path) {
  return parse_spinor_config(read_json_file(path), path);
}

inline GaugeConfig parse_gauge_config(const Json& j, const std::string& where = "gauge") {
  GaugeConfig gauge;
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  auto number = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
    out = j.at(key).get<double>();
  };
  number("a", gauge.a);
  number("b", gauge.b);
  number("m", gauge.m);
  if (j.contains("B")) {
    const Json& b = j.at("B");
    if (!b.is_array() || b.size() != 4) throw ConfigError(where + ".B: expected 4 expressions");
    for (std::size_t mu = 0; mu < 4; ++mu) gauge.B[mu] = detail::expression(b[mu], where + ".B");
  }
  if (j.contains("phi")) gauge.phi = detail::expression(j.at("phi"), where + ".phi");
  if (j.contains("bar")) {
    if (!j.at("bar").is_string()) throw ConfigError(where + ".bar: expected a string");
    const auto bar = j.at("bar").get<std::string>();
    if (bar == "gamma5-conjugate") {
      gauge.bar = BarConvention::Gamma5Conjugate;
    } else if (bar == "dirac-adjoint") {
      gauge.bar = BarConvention::DiracAdjoint;
    } else {
      throw ConfigError(where + ".bar: expected 'gamma5-conjugate' or 'dirac-adjoint'");
    }
  }
  return gauge;
}

inline GaugeConfig load_gauge_config(const std::string& path) {
  return parse_gauge_config(read_json_file(path), path);
}

inline Expr load_theta_config(const std::string& path) {
  const Json j = read_json_file(path);
  return detail::expression(detail::require(j, "theta", path), path + ".theta");
}

inline Path parse_path_config(const Json& j, const std::string& where = "path") {
  if (j.is_object() && j.contains("analytic")) {
    const Json& a = j.at("analytic");
    if (!a.is_array() || a.size() != 4) throw ConfigError(where + ".analytic: expected 4 expressions");
    std::array<std::string, 4> texts;
    for (std::size_t mu = 0; mu < 4; ++mu) texts[mu] = detail::expression_text(a[mu], where + ".analytic");
    return Path::analytic(texts);
  }
  if (j.is_object() && j.contains("polyline")) {
    const Json& p = j.at("polyline");
    const Json& pts = detail::require(p, "points", where + ".polyline");
    if (!pts.is_array()) throw ConfigError(where + ".polyline.points: expected an array");
    if (p.contains("s") && !p.at("s").is_array()) throw ConfigError(where + ".polyline.s: expected an array");
    std::vector<Point> points;
    for (const auto& q : pts) points.push_back(Point{detail::four_reals(q, where + ".polyline.points")});
    if (!p.contains("s")) return Path::polyline(std::move(points));
    std::vector<double> params;
    for (const auto& s : p.at("s")) {
      if (!s.is_number()) throw ConfigError(where + ".polyline.s: expected numbers");
      params.push_back(s.get<double>());
    }
    return Path::polyline(std::move(params), std::move(points));
  }
  throw ConfigError(where + ": expected key 'analytic' or 'polyline'");
}

inline Path load_path_config(const std::string& path) {
  return parse_path_config(read_json_file(path), path);
}

/// "x0,x1,x2,x3" -> four reals.
inline FourVector parse_four(const std::string& text, const std::string& what) {
  FourVector v{};
  std::stringstream ss(text);
  std::string item;
  std::size_t n = 0;
  while (std::getline(ss, item, ',')) {
    if (n == 4) throw ConfigError(what + ": expected 4 comma-separated numbers");
    try {
      std::size_t used = 0;
      v[n] = std::stod(item, &used);
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw ConfigError(what + ": malformed number '" + item + "'");
    } catch (const std::logic_error&) {
      throw ConfigError(what + ": malformed number '" + item + "'");
    }
    ++n;
  }
  if (n != 4) throw ConfigError(what + ": expected 4 comma-separated numbers");
  return v;
}

}  // namespace localmath::config
