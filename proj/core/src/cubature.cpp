#include "capquad/cubature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>

#include "capquad/nnls.hpp"
#include "capquad/poly_space.hpp"
#include "capquad/quadrature.hpp"

namespace capquad {

namespace {

constexpr double kPositivityFloor = 1e-14;
constexpr double kRankCutoff = 1e-13;

// Moment matrix in the canonical frame: rows are basis functions, columns nodes.
Eigen::MatrixXd moment_matrix(const Domain& domain, std::span<const SpherePoint> nodes,
                              int degree) {
  const CenterFrame& f = frame(domain);
  std::vector<SpherePoint> local;
  local.reserve(nodes.size());
  for (const SpherePoint& p : nodes) local.push_back(f.to_local(p));
  return basis_matrix(PolySpace(dim(domain), degree), local).transpose();
}

double residual_of(const Eigen::MatrixXd& a, const std::vector<double>& moments,
                   const Eigen::VectorXd& w) {
  const Eigen::VectorXd aw = a * w;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < aw.size(); ++k) {
    const double mk = moments[static_cast<std::size_t>(k)];
    worst = std::max(worst, std::abs(aw(k) - mk) / (1.0 + std::abs(mk)));
  }
  return worst;
}

struct Attempt {
  Eigen::VectorXd weights;
  double residual = 0.0;
  int iterations = 0;
};

Attempt solve_once(const Domain& domain, std::span<const SpherePoint> nodes, double epsilon,
                   int degree) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  const Eigen::MatrixXd a = moment_matrix(domain, nodes, degree);
  const std::vector<double> moments = domain_moments(domain, degree);
  const Eigen::Map<const Eigen::VectorXd> m(moments.data(),
                                            static_cast<Eigen::Index>(moments.size()));

  Eigen::VectorXd scale(n);
  for (Eigen::Index j = 0; j < n; ++j) scale(j) = delta_r(domain, nodes[j], epsilon);
  scale *= measure(domain) / scale.sum();
  const Eigen::MatrixXd as = a * scale.asDiagonal();

  const Eigen::BDCSVD<Eigen::MatrixXd> svd(as, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > kRankCutoff * s(0)) ++rank;

  Attempt out;
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  if (rank > 0) {
    const Eigen::MatrixXd vt = svd.matrixV().leftCols(rank).transpose();
    const Eigen::VectorXd c =
        (svd.matrixU().leftCols(rank).transpose() * m).cwiseQuotient(s.head(rank));
    const NnlsResult r = nnls(vt, c, x);
    x = r.x;
    out.iterations = r.iterations;
  }
  out.weights = scale.cwiseProduct(x);
  out.residual = residual_of(a, moments, out.weights);
  return out;
}

std::vector<std::size_t> below_floor(const Eigen::VectorXd& w, double floor) {
  std::vector<std::size_t> out;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    if (!(w(j) >= floor)) out.push_back(static_cast<std::size_t>(j));
  }
  return out;
}

std::string describe(double residual, double tol, std::size_t zeros) {
  std::ostringstream os;
  os.precision(3);
  os << "moment residual " << residual << " (tolerance " << tol << ")";
  if (zeros > 0) os << ", " << zeros << " node(s) with zero weight after pruning";
  return os.str();
}

}  // namespace

SolveResult solve_weights(const NodeSet& nodes, int degree, double tol) {
  if (nodes.points.empty()) throw std::invalid_argument("cannot solve on an empty node set");
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  if (!(tol >= 1e-12)) throw std::invalid_argument("solver tolerance must be >= 1e-12");
  if (!(nodes.epsilon > 0.0)) throw std::invalid_argument("node set needs epsilon > 0");
  const Domain& domain = nodes.domain;

  Attempt first = solve_once(domain, nodes.points, nodes.epsilon, degree);
  const double area = measure(domain);
  const std::vector<std::size_t> zeros =
      below_floor(first.weights, kPositivityFloor * area / nodes.points.size());

  CubatureRule rule{nodes, {}, degree, 0.0, {}};
  rule.meta.seed = nodes.seed;
  Attempt final_attempt = std::move(first);
  if (!zeros.empty()) {
    if (zeros.size() == nodes.points.size()) {
      return Infeasible{final_attempt.residual, zeros, describe(final_attempt.residual, tol, zeros.size())};
    }
    std::vector<SpherePoint> kept;
    std::vector<std::size_t> kept_index;
    std::size_t z = 0;
    for (std::size_t j = 0; j < nodes.points.size(); ++j) {
      if (z < zeros.size() && zeros[z] == j) {
        ++z;
        continue;
      }
      kept.push_back(nodes.points[j]);
      kept_index.push_back(j);
    }
    const int first_iterations = final_attempt.iterations;
    final_attempt = solve_once(domain, kept, nodes.epsilon, degree);
    final_attempt.iterations += first_iterations;
    const std::vector<std::size_t> again =
        below_floor(final_attempt.weights, kPositivityFloor * area / kept.size());
    if (!again.empty()) {
      std::vector<std::size_t> all = zeros;
      for (std::size_t k : again) all.push_back(kept_index[k]);
      std::sort(all.begin(), all.end());
      return Infeasible{final_attempt.residual, all,
                        describe(final_attempt.residual, tol, again.size())};
    }
    rule.nodes.points = std::move(kept);
    rule.meta.pruned = static_cast<int>(zeros.size());
  }
  if (!(final_attempt.residual <= tol)) {
    return Infeasible{final_attempt.residual, {}, describe(final_attempt.residual, tol, 0)};
  }
  rule.weights.assign(final_attempt.weights.data(),
                      final_attempt.weights.data() + final_attempt.weights.size());
  rule.residual = final_attempt.residual;
  rule.meta.iterations = final_attempt.iterations;
  return rule;
}

SolveResult build_cubature(const Domain& domain, int degree, double delta, std::uint64_t seed,
                           double tol, int max_back_offs) {
  if (degree < 1) throw std::invalid_argument("build_cubature needs degree >= 1");
  SolveResult last = Infeasible{};
  double d = delta;
  for (int k = 0; k <= max_back_offs; ++k, d *= 0.5) {
    last = solve_weights(maximal_node_set(domain, degree, d, seed), degree, tol);
    if (auto* rule = std::get_if<CubatureRule>(&last)) {
      rule->meta.back_offs = k;
      return last;
    }
  }
  return last;
}

std::pair<double, double> weight_sharpness(const CubatureRule& rule) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t j = 0; j < rule.weights.size(); ++j) {
    const double ratio =
        rule.weights[j] / delta_r(rule.nodes.domain, rule.nodes.points[j], rule.nodes.epsilon);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return {lo, hi};
}

double moment_residual(const Domain& domain, std::span<const SpherePoint> nodes,
                       std::span<const double> weights, int degree) {
  if (nodes.size() != weights.size()) {
    throw std::invalid_argument("node and weight counts differ");
  }
  const Eigen::MatrixXd a = moment_matrix(domain, nodes, degree);
  const Eigen::Map<const Eigen::VectorXd> w(weights.data(),
                                            static_cast<Eigen::Index>(weights.size()));
  return residual_of(a, domain_moments(domain, degree), w);
}

double verify_exactness(const CubatureRule& rule, int probe_degree) {
  if (probe_degree < 0 || probe_degree > rule.degree) {
    throw std::invalid_argument("probe degree must lie in [0, rule degree]");
  }
  return moment_residual(rule.nodes.domain, rule.nodes.points, rule.weights, probe_degree);
}

}  // namespace capquad
