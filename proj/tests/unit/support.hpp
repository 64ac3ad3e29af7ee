#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "capquad/geometry.hpp"

namespace capquad::testing {

inline constexpr double kPi = std::numbers::pi;

// Uniform point of the pole-centered cap of radius alpha (area measure).
inline SpherePoint random_cap_point(std::mt19937_64& rng, int d, double alpha,
                                    double theta_min = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (d == 1) {
    const double t = theta_min + (alpha - theta_min) * u(rng);
    const double s = u(rng) < 0.5 ? -1.0 : 1.0;
    return SpherePoint(std::sin(s * t), std::cos(t));
  }
  const double c_lo = std::cos(alpha), c_hi = std::cos(theta_min);
  const double c = c_lo + (c_hi - c_lo) * u(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  const double phi = 2.0 * kPi * u(rng);
  return SpherePoint(s * std::cos(phi), s * std::sin(phi), c);
}

// Point at polar angle theta and azimuth phi from the pole.
inline SpherePoint at_polar(double theta, double phi = 0.0) {
  return SpherePoint(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                     std::cos(theta));
}

}  // namespace capquad::testing
