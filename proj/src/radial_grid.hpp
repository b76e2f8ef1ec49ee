#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace logevo::detail {

// Radius where t sqrt(log(1 + r^2)) = k pi / 2.
inline double half_period_radius(double k, double t) {
  const double arg = k * std::numbers::pi / (2.0 * t);
  return std::sqrt(std::expm1(arg * arg));
}

// Inserts 2a, 4a, ... between consecutive points a < b whenever b is much larger than a.
inline std::vector<double> geometric_fill(const std::vector<double>& pts) {
  std::vector<double> out;
  out.reserve(pts.size());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    out.push_back(pts[i]);
    for (double x = 2.0 * pts[i]; pts[i] > 0.0 && x < 0.75 * pts[i + 1]; x *= 2.0) out.push_back(x);
  }
  out.push_back(pts.back());
  return out;
}

}  // namespace logevo::detail
