#include "capquad/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace capquad {

namespace {

double clamp_sqrt(double v) { return std::sqrt(std::max(v, 0.0)); }

void require_same_dim(const SpherePoint& x, const SpherePoint& y) {
  if (x.dim() != y.dim()) {
    throw std::invalid_argument("sphere points of different dimension (" +
                                std::to_string(x.dim()) + " vs " +
                                std::to_string(y.dim()) + ")");
  }
}

// Angle between two azimuths, folded into [0, pi].
double azimuth_gap(double a, double b) {
  double g = std::fmod(std::abs(a - b), 2.0 * std::numbers::pi);
  return g > std::numbers::pi ? 2.0 * std::numbers::pi - g : g;
}

// Unsigned polar angle and unit perpendicular direction xi of x relative to
// the frame center. For d = 1, xi is +1 or -1 (stored in xi[0]).
struct Decomposition {
  double theta;
  double phi;  // d = 2 only
  double sign;  // d = 1 only
};

Decomposition decompose(const CenterFrame& frame, const SpherePoint& x) {
  Polar p = frame.polar(x);
  if (frame.dim() == 1) {
    // theta = 0 picks xi = +1.
    return {std::abs(p.theta), 0.0, p.theta < 0.0 ? -1.0 : 1.0};
  }
  return {p.theta, p.theta == 0.0 ? 0.0 : p.phi, 1.0};
}

}  // namespace

// ---------------------------------------------------------------- SpherePoint

SpherePoint::SpherePoint(std::span<const double> coords) {
  if (coords.size() != 2 && coords.size() != 3) {
    throw std::invalid_argument("sphere points need 2 (d=1) or 3 (d=2) coordinates");
  }
  dim_ = static_cast<int>(coords.size()) - 1;
  double norm = 0.0;
  for (double c : coords) norm += c * c;
  norm = std::sqrt(norm);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  }
  // Vectors that are already unit to rounding are kept as given, so that
  // reading back a written point reproduces it bit for bit.
  if (std::abs(norm - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon()) norm = 1.0;
  coords_ = {0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < coords.size(); ++i) coords_[i] = coords[i] / norm;
}

SpherePoint::SpherePoint(double x, double y)
    : SpherePoint(std::array<double, 2>{x, y}) {}

SpherePoint::SpherePoint(double x, double y, double z)
    : SpherePoint(std::array<double, 3>{x, y, z}) {}

SpherePoint SpherePoint::pole(int dim) {
  if (dim == 1) return SpherePoint(0.0, 1.0);
  if (dim == 2) return SpherePoint(0.0, 0.0, 1.0);
  throw std::invalid_argument("only d = 1 and d = 2 are supported, got d = " +
                              std::to_string(dim));
}

double SpherePoint::dot(const SpherePoint& other) const {
  require_same_dim(*this, other);
  double s = 0.0;
  for (int i = 0; i <= dim_; ++i) s += coords_[i] * other.coords_[i];
  return s;
}

double geodesic_distance(const SpherePoint& x, const SpherePoint& y) {
  require_same_dim(x, y);
  double diff = 0.0, sum = 0.0;
  for (int i = 0; i <= x.dim(); ++i) {
    diff += (x[i] - y[i]) * (x[i] - y[i]);
    sum += (x[i] + y[i]) * (x[i] + y[i]);
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

double chordal_distance(const SpherePoint& x, const SpherePoint& y) {
  require_same_dim(x, y);
  double diff = 0.0;
  for (int i = 0; i <= x.dim(); ++i) diff += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(diff);
}

// ---------------------------------------------------------------- CenterFrame

CenterFrame::CenterFrame(const SpherePoint& center) : center_(center) {
  const int d = center.dim();
  vv_ = 0.0;
  for (int i = 0; i <= d; ++i) {
    v_[i] = center[i] - (i == d ? 1.0 : 0.0);
    vv_ += v_[i] * v_[i];
  }
  identity_ = vv_ == 0.0;
}

SpherePoint CenterFrame::reflect(const SpherePoint& x) const {
  if (x.dim() != dim()) {
    throw std::invalid_argument("point dimension does not match the frame");
  }
  if (identity_) return x;
  const int d = dim();
  double vx = 0.0;
  for (int i = 0; i <= d; ++i) vx += v_[i] * x[i];
  const double s = 2.0 * vx / vv_;
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (int i = 0; i <= d; ++i) out[i] = x[i] - s * v_[i];
  return SpherePoint(std::span<const double>(out.data(), d + 1));
}

SpherePoint CenterFrame::to_local(const SpherePoint& x) const { return reflect(x); }
SpherePoint CenterFrame::to_world(const SpherePoint& local) const { return reflect(local); }

Polar CenterFrame::polar(const SpherePoint& x) const {
  const SpherePoint l = to_local(x);
  if (dim() == 1) return {std::atan2(l[0], l[1]), 0.0};
  const double rho_perp = std::hypot(l[0], l[1]);
  return {std::atan2(rho_perp, l[2]), std::atan2(l[1], l[0])};
}

SpherePoint CenterFrame::from_polar(double theta, double phi) const {
  if (dim() == 1) return to_world(SpherePoint(std::sin(theta), std::cos(theta)));
  const double s = std::sin(theta);
  return to_world(SpherePoint(s * std::cos(phi), s * std::sin(phi), std::cos(theta)));
}

// ---------------------------------------------------------------- Cap, Collar

Cap::Cap(const SpherePoint& center, double alpha) : frame_(center), alpha_(alpha) {
  if (!(alpha > 0.0) || alpha > kMaxCapRadius) {
    throw DomainError("cap radius must lie in (0, pi - 0.1], got " +
                      std::to_string(alpha));
  }
}

Collar::Collar(const SpherePoint& center, double alpha, double beta)
    : frame_(center), alpha_(alpha), beta_(beta) {
  if (center.dim() != 2) throw DomainError("collars are supported on S^2 only");
  if (!(alpha > 0.0) || !(beta > alpha) || !(beta < kMaxCapRadius)) {
    throw DomainError("collar radii must satisfy 0 < alpha < beta < pi - 0.1");
  }
  const double height = beta - alpha;
  if (alpha > 4.0 * height || height > 4.0 * alpha) {
    throw DomainError("collar needs alpha and beta - alpha within a factor 4");
  }
}

int dim(const Domain& domain) {
  return std::visit([](const auto& d) { return d.dim(); }, domain);
}

const CenterFrame& frame(const Domain& domain) {
  return std::visit([](const auto& d) -> const CenterFrame& { return d.frame(); },
                    domain);
}

double scale(const Domain& domain) {
  return std::visit([](const auto& d) { return d.alpha(); }, domain);
}

double measure(const Domain& domain) {
  if (const auto* cap = std::get_if<Cap>(&domain)) {
    if (cap->dim() == 1) return 2.0 * cap->alpha();
    return 2.0 * std::numbers::pi * (1.0 - std::cos(cap->alpha()));
  }
  const auto& collar = std::get<Collar>(domain);
  return 2.0 * std::numbers::pi * (std::cos(collar.alpha()) - std::cos(collar.beta()));
}

Domain canonical(const Domain& domain) {
  const SpherePoint pole = SpherePoint::pole(dim(domain));
  if (const auto* cap = std::get_if<Cap>(&domain)) return Cap(pole, cap->alpha());
  const auto& collar = std::get<Collar>(domain);
  return Collar(pole, collar.alpha(), collar.beta());
}

bool contains(const Domain& domain, const SpherePoint& x, double tol) {
  if (x.dim() != dim(domain)) return false;
  const double t = geodesic_distance(x, frame(domain).center());
  if (const auto* cap = std::get_if<Cap>(&domain)) return t <= cap->alpha() + tol;
  const auto& collar = std::get<Collar>(domain);
  return t >= collar.alpha() - tol && t <= collar.beta() + tol;
}

double boundary_distance(const Cap& cap, const SpherePoint& x) {
  const double t = geodesic_distance(x, cap.center());
  if (t > cap.alpha() + kMembershipTol) {
    throw DomainError("point lies outside the cap (d(x,e) = " + std::to_string(t) +
                      ", alpha = " + std::to_string(cap.alpha()) + ")");
  }
  return std::max(cap.alpha() - t, 0.0);
}

double boundary_distance(const Collar& collar, const SpherePoint& x) {
  const double t = geodesic_distance(x, collar.center());
  if (t < collar.alpha() - kMembershipTol || t > collar.beta() + kMembershipTol) {
    throw DomainError("point lies outside the collar (d(x,e) = " + std::to_string(t) +
                      ")");
  }
  return std::max(std::min(std::abs(t - collar.alpha()), std::abs(t - collar.beta())),
                  0.0);
}

double boundary_distance(const Domain& domain, const SpherePoint& x) {
  return std::visit([&](const auto& d) { return boundary_distance(d, x); }, domain);
}

double rho(const Cap& cap, const SpherePoint& x, const SpherePoint& y) {
  const double a = cap.alpha();
  const double dxy = geodesic_distance(x, y);
  const double db = std::sqrt(boundary_distance(cap, x)) - std::sqrt(boundary_distance(cap, y));
  return std::sqrt(dxy * dxy + a * db * db) / a;
}

double collar_rho(const Collar& collar, const SpherePoint& x, const SpherePoint& y) {
  const double a = collar.alpha();
  const double c = chordal_distance(x, y);
  const double db =
      std::sqrt(boundary_distance(collar, x)) - std::sqrt(boundary_distance(collar, y));
  return std::sqrt(c * c + a * db * db) / a;
}

double metric(const Domain& domain, const SpherePoint& x, const SpherePoint& y) {
  if (const auto* cap = std::get_if<Cap>(&domain)) return rho(*cap, x, y);
  return collar_rho(std::get<Collar>(domain), x, y);
}

double delta_r(const Cap& cap, const SpherePoint& x, double r) {
  return delta_r(Domain(cap), x, r);
}

double delta_r(const Domain& domain, const SpherePoint& x, double r) {
  if (!(r > 0.0)) throw DomainError("delta_r needs r > 0");
  const double a = scale(domain);
  const int d = dim(domain);
  const double b = boundary_distance(domain, x);
  return std::pow(a, d) * (std::pow(r, d + 1) + std::pow(r, d) * std::sqrt(b / a));
}

// ---------------------------------------------------------------- interval metrics

namespace {

void require_in_interval(double alpha, double x) {
  if (!(alpha > 0.0)) throw DomainError("interval half-width must be positive");
  if (std::abs(x) > alpha + kMembershipTol) {
    throw DomainError("argument " + std::to_string(x) + " outside [-alpha, alpha]");
  }
}

double interval_b(double alpha, double x) {
  return std::max(std::min(std::abs(x + alpha), std::abs(x - alpha)), 0.0);
}

}  // namespace

double rho1(double alpha, double x1, double x2) {
  require_in_interval(alpha, x1);
  require_in_interval(alpha, x2);
  const double dx = x1 - x2;
  const double db = std::sqrt(interval_b(alpha, x1)) - std::sqrt(interval_b(alpha, x2));
  return std::sqrt(dx * dx + alpha * db * db) / alpha;
}

double rho2(double alpha, double x1, double x2) {
  require_in_interval(alpha, x1);
  require_in_interval(alpha, x2);
  const double dx = x1 - x2;
  const double ds = clamp_sqrt(alpha * alpha - x1 * x1) - clamp_sqrt(alpha * alpha - x2 * x2);
  return std::sqrt(dx * dx + ds * ds) / alpha;
}

double rho3(double alpha, double x1, double x2) {
  require_in_interval(alpha, x1);
  require_in_interval(alpha, x2);
  const double sa = std::sin(alpha);
  auto to_t = [sa](double x) { return std::acos(std::clamp(std::sin(x) / sa, -1.0, 1.0)); };
  return std::abs(to_t(x1) - to_t(x2));
}

double rho4(const Cap& cap, const SpherePoint& x, const SpherePoint& y) {
  (void)boundary_distance(cap, x);
  (void)boundary_distance(cap, y);
  const Decomposition dx = decompose(cap.frame(), x);
  const Decomposition dy = decompose(cap.frame(), y);
  const double a = cap.alpha();
  const double radial = rho1(a, std::min(dx.theta, a), std::min(dy.theta, a));
  double perp;
  if (cap.dim() == 1) {
    perp = dx.sign == dy.sign ? 0.0 : std::numbers::pi;
  } else {
    perp = azimuth_gap(dx.phi, dy.phi);
  }
  return std::max(radial, perp);
}

double rho5(const Cap& cap, const SpherePoint& x, const SpherePoint& y) {
  (void)boundary_distance(cap, x);
  (void)boundary_distance(cap, y);
  const SpherePoint lx = cap.frame().to_local(x);
  const SpherePoint ly = cap.frame().to_local(y);
  const int d = cap.dim();
  // xi sin(theta) are the components perpendicular to the pole.
  double perp = 0.0;
  for (int i = 0; i < d; ++i) perp += (lx[i] - ly[i]) * (lx[i] - ly[i]);
  const double sa = std::sin(cap.alpha());
  auto s2 = [](const SpherePoint& l, int dd) {
    double s = 0.0;
    for (int i = 0; i < dd; ++i) s += l[i] * l[i];
    return s;  // sin^2(theta)
  };
  const double rad = clamp_sqrt(sa * sa - s2(lx, d)) - clamp_sqrt(sa * sa - s2(ly, d));
  return std::sqrt(perp + rad * rad) / sa;
}

double rho6(const Collar& collar, const SpherePoint& x, const SpherePoint& y) {
  (void)boundary_distance(collar, x);
  (void)boundary_distance(collar, y);
  const Decomposition dx = decompose(collar.frame(), x);
  const Decomposition dy = decompose(collar.frame(), y);
  const double a = collar.alpha();
  const double b = collar.beta();
  auto bu = [a, b](double u) { return std::max(std::min(std::abs(u - a), std::abs(u - b)), 0.0); };
  const double dt = dx.theta - dy.theta;
  const double db = std::sqrt(bu(dx.theta)) - std::sqrt(bu(dy.theta));
  const double radial = std::sqrt(dt * dt + a * db * db) / a;
  const double perp = 2.0 * std::sin(0.5 * azimuth_gap(dx.phi, dy.phi));
  return std::max(perp, radial);
}

// ---------------------------------------------------------------- dilation map

SpherePoint map_T(const SpherePoint& x, const SpherePoint& e, bool whole_sphere) {
  require_same_dim(x, e);
  const CenterFrame f(e);
  const Polar p = f.polar(x);
  if (!whole_sphere && std::abs(p.theta) > std::numbers::pi / 8.0 + kMembershipTol) {
    throw DomainError("map_T needs d(x, e) <= pi/8, got " + std::to_string(std::abs(p.theta)));
  }
  return f.from_polar(8.0 * p.theta, p.phi);
}

double poly_D(int d, double t) {
  if (d == 1) return 1.0;
  if (d != 2) throw std::invalid_argument("poly_D supports d in {1, 2}");
  // sin(8 theta) / sin(theta) is the Chebyshev polynomial U_7(cos theta).
  double u_prev = 1.0, u = 2.0 * t;
  for (int k = 2; k <= 7; ++k) {
    const double next = 2.0 * t * u - u_prev;
    u_prev = u;
    u = next;
  }
  return u;
}

// ---------------------------------------------------------------- RhoBall

RhoBall::RhoBall(Domain domain, const SpherePoint& center, double radius)
    : domain_(std::move(domain)), center_(center), radius_(radius) {
  if (!(radius > 0.0)) throw DomainError("rho-ball radius must be positive");
  if (!contains(domain_, center_)) throw DomainError("rho-ball center lies outside the domain");
}

bool rho_ball_contains(const RhoBall& ball, const SpherePoint& y) {
  if (!contains(ball.domain(), y)) return false;
  return metric(ball.domain(), ball.center(), y) <= ball.radius() + 1e-12;
}

}  // namespace capquad
