#pragma once

#include <functional>
#include <vector>

#include "capquad/geometry.hpp"

namespace capquad {

/// Volume of a rho-ball and the integral of a weight over it, computed on the
/// same nodes so that their ratio is exact for constant weights.
struct BallIntegral {
  double volume = 0.0;
  double integral = 0.0;
};

/// Weight given as a function of the boundary distance b_x.
using BoundaryWeight = std::function<double(double)>;

/// |B_rho(x, r)| by polar-row integration: each polar row of the ball is an
/// azimuthal arc whose half-width is known in closed form, and the rows are
/// integrated with composite Gauss-Legendre, doubling the panel count until
/// two estimates agree to 1%. `resolution` (>= 32) is the starting node count.
[[nodiscard]] double rho_ball_volume(const RhoBall& ball, int resolution = 32);

/// Volume and integral of w(b_x) over the ball; stops when both estimates
/// agree with the previous level to `rel_tol`.
[[nodiscard]] BallIntegral rho_ball_integrate(const RhoBall& ball, const BoundaryWeight& w,
                                              int resolution = 32, double rel_tol = 0.01);

/// The ball center followed by `count` deterministic low-discrepancy points
/// of the ball (Halton in base 2 along the polar extent, base 3 across it).
[[nodiscard]] std::vector<SpherePoint> rho_ball_samples(const RhoBall& ball, int count);

}  // namespace capquad
