#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "localmath/error.hpp"

namespace localmath {

/// Least-squares slope of log(error) against log(step). For an error that
/// behaves like C h^p this is the observed order p.
inline double observed_order(std::span<const double> steps, std::span<const double> errors) {
  if (steps.size() != errors.size() || steps.size() < 2) {
    throw DomainError("observed_order: need at least two (step, error) pairs");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i] > 0.0) || !(errors[i] > 0.0)) {
      throw DomainError("observed_order: steps and errors must be positive");
    }
    const double x = std::log(steps[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace localmath
