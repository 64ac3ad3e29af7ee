#pragma once

#include <Eigen/Dense>

namespace capquad {

struct NnlsOptions {
  int max_iterations = 0;  ///< 0 means 3 * columns
  /// Stop when every inactive gradient entry is below this (0 picks
  /// 1e-12 * (||A||_F ||b|| + 1)).
  double dual_tol = 0.0;
};

struct NnlsResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Lawson-Hanson active-set solver for min ||A x - b||_2 subject to x >= 0.
///
/// Starts from `x0` (clipped at zero); the columns with positive entries form
/// the initial passive set. Each passive-set least-squares step takes the
/// minimum-change solution x + pinv(A_P) (b - A_P x), computed through the
/// small Gram matrix A_P A_P^T, so wide systems with more columns than rows
/// are handled without forming column-sized factorizations.
[[nodiscard]] NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const Eigen::VectorXd& x0, const NnlsOptions& options = {});

/// nnls started from zero.
[[nodiscard]] NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const NnlsOptions& options = {});

}  // namespace capquad
