#pragma once

#include <memory>
#include <vector>

namespace capquad {

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Computes the n-point rule by Newton iteration on P_n (converged to 1e-15).
/// Rules are cached; the returned object is immutable and shared.
[[nodiscard]] std::shared_ptr<const GaussLegendre> gauss_legendre(int n);

/// Nodes and weights of the n-point rule mapped to [a, b].
void gauss_legendre_on(int n, double a, double b, std::vector<double>& nodes,
                       std::vector<double>& weights);

/// Legendre polynomials P_0..P_n at t by the three-term recurrence.
[[nodiscard]] std::vector<double> legendre_values(int n, double t);

}  // namespace capquad
