#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "capquad/geometry.hpp"

namespace capquad {

/// The whole sphere S^d as an integration domain.
struct FullSphere {
  int dim = 2;
};

using RuleDomain = std::variant<Cap, Collar, FullSphere>;

[[nodiscard]] RuleDomain to_rule_domain(const Domain& domain);

/// Polar integration variable of a product rule on S^2. Gauss-Legendre in
/// t = cos(theta) is exact on polynomial restrictions; Gauss-Legendre in theta
/// converges spectrally on integrands that are smooth in the polar angle.
enum class PolarVariable { cos_theta, theta };

/// Largest polynomial degree a reference rule is built for.
inline constexpr int kMaxRuleDegree = 200;

/// Tensor rule: polar Gauss-Legendre nodes times a uniform azimuthal
/// trapezoid (d = 2), or a Gauss-Legendre / trapezoid rule on the arc (d = 1).
/// Node k = i * azimuth_count + j sits at polar angle i and azimuth 2 pi j / M.
class ProductRule {
 public:
  ProductRule(RuleDomain domain, int degree, PolarVariable variable);

  [[nodiscard]] const RuleDomain& domain() const { return domain_; }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int azimuth_count() const { return azimuth_count_; }
  /// Polar angles in the domain frame (signed arc angles for d = 1).
  [[nodiscard]] std::span<const double> polar_angles() const { return polar_angles_; }
  /// Per-node weight shared by all nodes on polar row i.
  [[nodiscard]] std::span<const double> row_weights() const { return row_weights_; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] const std::vector<SpherePoint>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  [[nodiscard]] const CenterFrame& frame() const { return frame_; }

 private:
  RuleDomain domain_;
  CenterFrame frame_;
  int dim_;
  int degree_;
  int azimuth_count_ = 1;
  std::vector<double> polar_angles_;
  std::vector<double> row_weights_;
  std::vector<SpherePoint> nodes_;
  std::vector<double> weights_;
};

/// Rule integrating restrictions of Pi_degree^d to the domain exactly.
[[nodiscard]] ProductRule build_rule(const RuleDomain& domain, int degree);

using Integrand = std::function<double(const SpherePoint&)>;

[[nodiscard]] double integrate(const ProductRule& rule, const Integrand& f);
/// Weighted sum against precomputed node values.
[[nodiscard]] double integrate_values(const ProductRule& rule, std::span<const double> values);

/// Reported by integrate_adaptive when the estimates have not settled by
/// degree kMaxRuleDegree.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(double last, double previous);
  double last;
  double previous;
};

/// Doubles the rule degree from `start_degree` until two successive estimates
/// differ by less than tol * |estimate|; uses Gauss-Legendre in the polar
/// angle. Throws NonConvergence past degree kMaxRuleDegree.
[[nodiscard]] double integrate_adaptive(const Domain& domain, const Integrand& f, double tol,
                                        int start_degree = 8);

/// Integrals over the cap of the orthonormal basis of Pi_n^d, in the basis
/// ordering of PolySpace, computed in the cap's own frame (center at the pole).
/// Entries with m != 0 (d = 2) and sine entries (d = 1) vanish identically.
[[nodiscard]] std::vector<double> cap_moments(const Cap& cap, int n);
/// cap_moments for caps, the analogous closed form for collars.
[[nodiscard]] std::vector<double> domain_moments(const Domain& domain, int n);

}  // namespace capquad
