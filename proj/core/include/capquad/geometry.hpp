#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <variant>

namespace capquad {

/// Thrown when a point, radius or dimension lies outside the admissible range
/// of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Unit vector on S^1 (two coordinates) or S^2 (three coordinates).
/// Coordinates are renormalized on construction.
class SpherePoint {
 public:
  SpherePoint() = default;
  explicit SpherePoint(std::span<const double> coords);
  SpherePoint(double x, double y);
  SpherePoint(double x, double y, double z);

  /// The pole (0,...,0,1) of S^d.
  static SpherePoint pole(int dim);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] std::span<const double> coords() const {
    return {coords_.data(), static_cast<std::size_t>(dim_ + 1)};
  }
  [[nodiscard]] double operator[](int i) const { return coords_[i]; }
  [[nodiscard]] double dot(const SpherePoint& other) const;

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;

 private:
  std::array<double, 3> coords_{0.0, 0.0, 1.0};
  int dim_ = 2;
};

/// Geodesic distance arccos(x.y) in [0, pi], evaluated in the cancellation-free
/// form 2 atan2(|x-y|, |x+y|).
[[nodiscard]] double geodesic_distance(const SpherePoint& x, const SpherePoint& y);

/// Chordal distance |x - y|.
[[nodiscard]] double chordal_distance(const SpherePoint& x, const SpherePoint& y);

/// Polar coordinates of a point relative to a center e.
///
/// For d = 2, theta = d(x, e) in [0, pi] and phi is the azimuth in the frame
/// fixed by e. For d = 1, theta is the signed angle in (-pi, pi] and phi = 0.
struct Polar {
  double theta = 0.0;
  double phi = 0.0;
};

/// Orthogonal frame taking a center e to the pole (0,...,0,1).
///
/// The map is the Householder reflection determined by e - pole; it is an
/// involution, so the same matrix converts in both directions.
class CenterFrame {
 public:
  CenterFrame() = default;
  explicit CenterFrame(const SpherePoint& center);

  [[nodiscard]] const SpherePoint& center() const { return center_; }
  [[nodiscard]] int dim() const { return center_.dim(); }
  [[nodiscard]] bool is_identity() const { return identity_; }

  [[nodiscard]] SpherePoint to_local(const SpherePoint& x) const;
  [[nodiscard]] SpherePoint to_world(const SpherePoint& local) const;

  [[nodiscard]] Polar polar(const SpherePoint& x) const;
  [[nodiscard]] SpherePoint from_polar(double theta, double phi = 0.0) const;

 private:
  [[nodiscard]] SpherePoint reflect(const SpherePoint& x) const;

  SpherePoint center_ = SpherePoint::pole(2);
  std::array<double, 3> v_{0.0, 0.0, 0.0};
  double vv_ = 0.0;
  bool identity_ = true;
};

/// Largest admissible cap radius.
inline constexpr double kMaxCapRadius = 3.14159265358979323846 - 0.1;

/// Tolerance used for membership tests against cap and collar boundaries.
inline constexpr double kMembershipTol = 1e-10;

/// Spherical cap B(e, alpha) on S^d, d in {1, 2}.
class Cap {
 public:
  Cap(const SpherePoint& center, double alpha);

  [[nodiscard]] const SpherePoint& center() const { return frame_.center(); }
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] int dim() const { return frame_.dim(); }
  [[nodiscard]] const CenterFrame& frame() const { return frame_; }

 private:
  CenterFrame frame_;
  double alpha_;
};

/// Spherical collar B(e; alpha, beta) = {x : alpha <= d(x, e) <= beta} on S^2.
class Collar {
 public:
  Collar(const SpherePoint& center, double alpha, double beta);

  [[nodiscard]] const SpherePoint& center() const { return frame_.center(); }
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] double beta() const { return beta_; }
  [[nodiscard]] int dim() const { return frame_.dim(); }
  [[nodiscard]] const CenterFrame& frame() const { return frame_; }

 private:
  CenterFrame frame_;
  double alpha_;
  double beta_;
};

using Domain = std::variant<Cap, Collar>;

[[nodiscard]] int dim(const Domain& domain);
[[nodiscard]] const CenterFrame& frame(const Domain& domain);
/// The metric scale alpha (cap radius or collar inner radius).
[[nodiscard]] double scale(const Domain& domain);
/// Lebesgue measure of the domain.
[[nodiscard]] double measure(const Domain& domain);
/// Same domain re-centered at the pole.
[[nodiscard]] Domain canonical(const Domain& domain);
[[nodiscard]] bool contains(const Domain& domain, const SpherePoint& x,
                            double tol = kMembershipTol);

/// b_x = alpha - d(x, e); throws DomainError outside the cap.
[[nodiscard]] double boundary_distance(const Cap& cap, const SpherePoint& x);
/// b_x = min(|d(x,e) - alpha|, |d(x,e) - beta|); throws outside the collar.
[[nodiscard]] double boundary_distance(const Collar& collar, const SpherePoint& x);
[[nodiscard]] double boundary_distance(const Domain& domain, const SpherePoint& x);

/// The boundary-adapted cap metric
/// rho(x,y) = (1/alpha) sqrt(d(x,y)^2 + alpha (sqrt(b_x) - sqrt(b_y))^2).
[[nodiscard]] double rho(const Cap& cap, const SpherePoint& x, const SpherePoint& y);

/// Collar metric (1/alpha) sqrt(|x-y|^2 + alpha (sqrt(b_x) - sqrt(b_y))^2).
[[nodiscard]] double collar_rho(const Collar& collar, const SpherePoint& x,
                                const SpherePoint& y);

/// rho for caps and collar_rho for collars.
[[nodiscard]] double metric(const Domain& domain, const SpherePoint& x,
                            const SpherePoint& y);

/// Surrogate ball volume alpha^d (r^{d+1} + r^d sqrt(b_x / alpha)).
[[nodiscard]] double delta_r(const Cap& cap, const SpherePoint& x, double r);
/// Collar analogue of delta_r using the collar boundary distance.
[[nodiscard]] double delta_r(const Domain& domain, const SpherePoint& x, double r);

// Interval metrics on [-alpha, alpha].
[[nodiscard]] double rho1(double alpha, double x1, double x2);
[[nodiscard]] double rho2(double alpha, double x1, double x2);
[[nodiscard]] double rho3(double alpha, double x1, double x2);

/// max{rho1(theta, t), d(xi, eta)} from the decomposition x = e cos(theta) + xi sin(theta).
[[nodiscard]] double rho4(const Cap& cap, const SpherePoint& x, const SpherePoint& y);
[[nodiscard]] double rho5(const Cap& cap, const SpherePoint& x, const SpherePoint& y);
/// max{|xi - eta|, rho_[alpha,beta](theta, t)} on a collar.
[[nodiscard]] double rho6(const Collar& collar, const SpherePoint& x,
                          const SpherePoint& y);

/// Polar stretch theta -> 8 theta about e; requires d(x, e) <= pi/8 unless
/// `whole_sphere` is set, in which case the defining formula is applied as is.
[[nodiscard]] SpherePoint map_T(const SpherePoint& x, const SpherePoint& e,
                                bool whole_sphere = false);

/// D(cos theta) = sin^{d-1}(8 theta) / sin^{d-1}(theta), a polynomial of
/// degree 7(d-1) on [-1, 1].
[[nodiscard]] double poly_D(int d, double t);

/// Ball B_rho(center, radius) in a cap or collar metric.
class RhoBall {
 public:
  RhoBall(Domain domain, const SpherePoint& center, double radius);

  [[nodiscard]] const Domain& domain() const { return domain_; }
  [[nodiscard]] const SpherePoint& center() const { return center_; }
  [[nodiscard]] double radius() const { return radius_; }

 private:
  Domain domain_;
  SpherePoint center_;
  double radius_;
};

[[nodiscard]] bool rho_ball_contains(const RhoBall& ball, const SpherePoint& y);

}  // namespace capquad
