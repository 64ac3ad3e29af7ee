#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "capquad/point_sets.hpp"

namespace capquad {

struct SolverMeta {
  int iterations = 0;
  int back_offs = 0;
  int pruned = 0;
  std::uint64_t seed = 0;
};

/// Positive cubature rule on a cap or collar, exact on Pi_degree^d up to
/// `residual`.
struct CubatureRule {
  NodeSet nodes;
  std::vector<double> weights;
  int degree = 0;
  /// max_k |sum_j w_j Y_k(x_j) - m_k| / (1 + |m_k|)
  double residual = 0.0;
  SolverMeta meta;
};

/// The node set cannot carry a positive rule of the requested degree.
struct Infeasible {
  double residual = 0.0;
  /// Indices (into the submitted node set) of nodes that ended with zero weight.
  std::vector<std::size_t> zero_weight_nodes;
  std::string reason;
};

using SolveResult = std::variant<CubatureRule, Infeasible>;

inline constexpr double kDefaultSolveTol = 1e-10;

/// Nonnegative weights matching the analytic moments of Pi_degree^d.
///
/// The moment matrix has columns Y_k(x_j) scaled by c * Delta_eps(x_j), with
/// eps the node set's separation and c normalizing the sum to the domain
/// measure. It is reduced to orthonormal row coordinates by a thin SVD, which
/// keeps the solution set of the moment equations, and solved by Lawson-Hanson
/// started from the scaled all-ones vector. Nodes that end below the
/// positivity floor 1e-14 |domain| / N are pruned and the system is solved
/// once more; the result is accepted when no weight is below the floor and
/// the residual is at most `tol`.
[[nodiscard]] SolveResult solve_weights(const NodeSet& nodes, int degree,
                                        double tol = kDefaultSolveTol);

/// Generates a maximal set at (degree, delta, seed) and solves; on failure
/// halves delta and regenerates, at most `max_back_offs` times. Returns the
/// last Infeasible when every attempt fails.
[[nodiscard]] SolveResult build_cubature(const Domain& domain, int degree, double delta,
                                         std::uint64_t seed, double tol = kDefaultSolveTol,
                                         int max_back_offs = 3);

/// Extremes over nodes of w_j / Delta_eps(x_j), eps = nodes.epsilon.
[[nodiscard]] std::pair<double, double> weight_sharpness(const CubatureRule& rule);

/// max over basis elements of degree <= probe_degree of
/// |sum_j w_j Y_k(x_j) - m_k| / (1 + |m_k|).
[[nodiscard]] double verify_exactness(const CubatureRule& rule, int probe_degree);

/// Same measure for arbitrary nodes and weights.
[[nodiscard]] double moment_residual(const Domain& domain, std::span<const SpherePoint> nodes,
                                     std::span<const double> weights, int degree);

}  // namespace capquad
