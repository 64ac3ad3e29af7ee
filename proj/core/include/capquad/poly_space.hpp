#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "capquad/geometry.hpp"
#include "capquad/quadrature.hpp"

namespace capquad {

/// Pi_n^d with a fixed real orthonormal basis (full-sphere measure).
///
/// d = 1: [1/sqrt(2 pi), cos(theta)/sqrt(pi), sin(theta)/sqrt(pi), cos(2 theta)/sqrt(pi), ...]
/// where theta = atan2(x_0, x_1) is the angle measured from the pole (0, 1).
/// d = 2: real spherical harmonics Y_{l,m}, l = 0..n, m = -l..l, at index
/// l^2 + l + m; m > 0 carries cos(m phi), m < 0 carries sin(|m| phi), no
/// Condon-Shortley phase.
class PolySpace {
 public:
  PolySpace(int dim_sphere, int degree);

  [[nodiscard]] int dim_sphere() const { return dim_sphere_; }
  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] std::size_t size() const;

  [[nodiscard]] static std::size_t sh_index(int l, int m) {
    return static_cast<std::size_t>(l * l + l + m);
  }

  friend bool operator==(const PolySpace&, const PolySpace&) = default;

 private:
  int dim_sphere_;
  int degree_;
};

/// 2n+1 for d = 1, (n+1)^2 for d = 2.
[[nodiscard]] std::size_t dim(const PolySpace& space);

[[nodiscard]] std::vector<double> eval_basis(const PolySpace& space, const SpherePoint& x);
void eval_basis_into(const PolySpace& space, const SpherePoint& x, std::span<double> out);

/// Rows are points, columns are basis functions.
[[nodiscard]] Eigen::MatrixXd basis_matrix(const PolySpace& space,
                                           std::span<const SpherePoint> points);

class PolyCoeffs {
 public:
  PolyCoeffs(PolySpace space, std::vector<double> coeffs);

  [[nodiscard]] const PolySpace& space() const { return space_; }
  [[nodiscard]] const std::vector<double>& coeffs() const { return coeffs_; }

 private:
  PolySpace space_;
  std::vector<double> coeffs_;
};

[[nodiscard]] double eval_poly(const PolyCoeffs& p, const SpherePoint& x);

/// Values of p at every node of a rule. Uses the tensor structure when the
/// rule frame is the identity.
[[nodiscard]] std::vector<double> evaluate_on_rule(const PolyCoeffs& p, const ProductRule& rule);

/// I.i.d. N(0,1) coefficients from a seeded mt19937_64.
[[nodiscard]] PolyCoeffs random_polynomial(const PolySpace& space, std::uint64_t seed);

struct Projection {
  PolyCoeffs coeffs;
  /// ||f - P f||_2 / ||f||_2 over the sphere.
  double residual;
};

/// L2(S^d) projection of f via a full-sphere rule exact to degree 2n+2.
[[nodiscard]] Projection project_onto(const PolySpace& space, const Integrand& f);

enum class TExtent {
  /// Evaluation restricted to B(e, pi/8), the domain of the dilation map.
  cap,
  /// The polynomial extension x -> p(Tx) with T applied by formula everywhere.
  whole_sphere,
};

/// x -> p(T x) with T the polar stretch theta -> 8 theta about e.
[[nodiscard]] Integrand compose_with_T(const PolyCoeffs& p, const SpherePoint& e,
                                       TExtent extent = TExtent::cap);

}  // namespace capquad
