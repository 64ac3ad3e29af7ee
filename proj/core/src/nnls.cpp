#include "capquad/nnls.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace capquad {

namespace {

// Gram matrix sum_{j in P} a_j a_j^T, rebuilt from scratch.
Eigen::MatrixXd passive_gram(const Eigen::MatrixXd& a, const std::vector<char>& passive) {
  Eigen::VectorXd mask(a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) mask(j) = passive[j] ? 1.0 : 0.0;
  return a * mask.asDiagonal() * a.transpose();
}

constexpr int kRebuildEvery = 64;

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& x0,
                const NnlsOptions& options) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (b.size() != m) throw std::invalid_argument("nnls: right-hand side size mismatch");
  if (x0.size() != n) throw std::invalid_argument("nnls: start vector size mismatch");

  NnlsResult res;
  res.x = x0.cwiseMax(0.0);
  std::vector<char> passive(n);
  for (Eigen::Index j = 0; j < n; ++j) passive[j] = res.x(j) > 0.0;

  const double dual_tol =
      options.dual_tol > 0.0 ? options.dual_tol : 1e-12 * (a.norm() * b.norm() + 1.0);
  const int max_iter = options.max_iterations > 0 ? options.max_iterations
                                                  : static_cast<int>(3 * n + 10);

  Eigen::MatrixXd gram = passive_gram(a, passive);
  int changes = 0;
  auto toggle = [&](Eigen::Index j, bool on) {
    passive[j] = on;
    if (++changes % kRebuildEvery == 0) {
      gram = passive_gram(a, passive);
    } else if (on) {
      gram.noalias() += a.col(j) * a.col(j).transpose();
    } else {
      gram.noalias() -= a.col(j) * a.col(j).transpose();
    }
  };

  // Minimum-change least-squares point on the passive set.
  Eigen::VectorXd z(n);
  auto ls_step = [&](const Eigen::VectorXd& from) {
    const Eigen::VectorXd r = b - a * from;
    const Eigen::VectorXd y = gram.completeOrthogonalDecomposition().solve(r);
    const Eigen::VectorXd dx = a.transpose() * y;
    for (Eigen::Index j = 0; j < n; ++j) z(j) = passive[j] ? from(j) + dx(j) : 0.0;
  };

  std::vector<char> banned(n, 0);
  Eigen::Index just_added = -1;
  while (res.iterations < max_iter) {
    // Inner loop: move to the passive least-squares solution, dropping
    // variables that would turn negative.
    bool stalled = false;
    while (res.iterations < max_iter) {
      ++res.iterations;
      ls_step(res.x);
      if (just_added >= 0 && z(just_added) <= 0.0) {
        toggle(just_added, false);
        banned[just_added] = 1;
        just_added = -1;
        stalled = true;
        break;
      }
      just_added = -1;
      double t = std::numeric_limits<double>::infinity();
      Eigen::Index hit = -1;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z(j) <= 0.0) {
          const double tj = res.x(j) / (res.x(j) - z(j));
          if (tj < t) {
            t = tj;
            hit = j;
          }
        }
      }
      if (hit < 0) {
        res.x = z;
        // One refinement pass against rounding in the Gram solve.
        ls_step(res.x);
        if ((z.array() >= 0.0).all()) res.x = z;
        break;
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j]) res.x(j) += t * (z(j) - res.x(j));
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && (j == hit || res.x(j) <= 0.0)) {
          res.x(j) = 0.0;
          toggle(j, false);
        }
      }
    }
    if (!stalled) std::fill(banned.begin(), banned.end(), 0);

    const Eigen::VectorXd w = a.transpose() * (b - a * res.x);
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && !banned[j] && w(j) > dual_tol && (best < 0 || w(j) > w(best))) {
        best = j;
      }
    }
    if (best < 0) {
      res.converged = true;
      break;
    }
    toggle(best, true);
    just_added = best;
  }
  res.residual_norm = (a * res.x - b).norm();
  return res;
}

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const NnlsOptions& options) {
  return nnls(a, b, Eigen::VectorXd::Zero(a.cols()), options);
}

}  // namespace capquad
