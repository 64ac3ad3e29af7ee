#include "capquad/rho_ball.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "capquad/gauss_legendre.hpp"
#include "capquad/sampling.hpp"

namespace capquad {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kScanPoints = 256;
constexpr int kMaxPanels = 1 << 14;

struct Interval {
  double lo;
  double hi;
};

// The ball described by the polar coordinate u of its rows: u = theta for
// d = 2 and the signed arc angle for d = 1, both in the domain frame.
class BallRows {
 public:
  explicit BallRows(const RhoBall& ball) : dim_(capquad::dim(ball.domain())), r_(ball.radius()) {
    const Domain& dom = ball.domain();
    alpha_ = scale(dom);
    if (const auto* collar = std::get_if<Collar>(&dom)) {
      collar_ = true;
      beta_ = collar->beta();
    }
    const Polar p = capquad::frame(dom).polar(ball.center());
    u0_ = p.theta;
    phi0_ = p.phi;
    if (dim_ == 2) u0_ = std::clamp(u0_, u_min(), u_max());
    else u0_ = std::clamp(u0_, -alpha_, alpha_);
    sqrt_b0_ = std::sqrt(b_of(u0_));
    frame_ = capquad::frame(dom);
  }

  int dim() const { return dim_; }
  double u0() const { return u0_; }
  double phi0() const { return phi0_; }

  double u_min() const { return dim_ == 1 ? -alpha_ : (collar_ ? alpha_ : 0.0); }
  double u_max() const { return dim_ == 1 ? alpha_ : (collar_ ? beta_ : alpha_); }

  double b_of(double u) const {
    if (collar_) return std::max(std::min(u - alpha_, beta_ - u), 0.0);
    return std::max(alpha_ - std::abs(u), 0.0);
  }

  // Points where b_x has a kink.
  std::vector<double> kinks() const {
    if (collar_) return {0.5 * (alpha_ + beta_)};
    if (dim_ == 1) return {0.0};
    return {};
  }

  // Window of u that can meet the ball, from d(x, y) <= alpha r (caps) or
  // |x - y| <= alpha r (collars).
  Interval window() const {
    double reach = alpha_ * r_;
    if (collar_) reach = 2.0 * std::asin(std::min(0.5 * alpha_ * r_, 1.0));
    if (dim_ == 1 && (u0_ + reach > kPi || u0_ - reach < -kPi)) return {u_min(), u_max()};
    return {std::max(u_min(), u0_ - reach), std::min(u_max(), u0_ + reach)};
  }

  // Half-width of the ball's arc on row u for d = 2, or 1 when the point u
  // lies in the ball for d = 1; negative when the row misses the ball.
  double extent(double u) const {
    const double db = sqrt_b0_ - std::sqrt(b_of(u));
    const double left = alpha_ * alpha_ * r_ * r_ - alpha_ * db * db;
    if (left < 0.0) return -1.0;
    // sin^2(R/2) for the admissible geodesic radius R.
    double h;
    if (collar_) {
      h = 0.25 * left;
    } else {
      const double big_r = std::sqrt(left);
      if (big_r >= kPi) return dim_ == 2 ? kPi : 1.0;
      h = std::sin(0.5 * big_r);
      h *= h;
    }
    if (h >= 1.0) return dim_ == 2 ? kPi : 1.0;
    if (dim_ == 1) {
      double gap = std::abs(u - u0_);
      gap = std::min(gap, 2.0 * kPi - gap);
      const double s = std::sin(0.5 * gap);
      return s * s <= h ? 1.0 : -1.0;
    }
    const double s = std::sin(0.5 * (u - u0_));
    const double rest = h - s * s;
    if (rest < 0.0) return -1.0;
    const double denom = std::sin(u) * std::sin(u0_);
    if (!(denom > 0.0) || rest >= denom) return kPi;
    return 2.0 * std::asin(std::sqrt(rest / denom));
  }

  // Maximal runs of rows that meet the ball.
  std::vector<Interval> runs() const {
    const Interval w = window();
    std::vector<double> us;
    us.reserve(kScanPoints + 2);
    for (int i = 0; i <= kScanPoints; ++i) us.push_back(w.lo + (w.hi - w.lo) * i / kScanPoints);
    us.push_back(u0_);
    std::sort(us.begin(), us.end());
    std::vector<Interval> out;
    std::size_t i = 0;
    while (i < us.size()) {
      if (extent(us[i]) < 0.0) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j + 1 < us.size() && extent(us[j + 1]) >= 0.0) ++j;
      const double lo = i == 0 ? us[0] : edge(us[i - 1], us[i]);
      const double hi = j + 1 == us.size() ? us.back() : edge(us[j + 1], us[j]);
      out.push_back({lo, hi});
      i = j + 1;
    }
    return out;
  }

  SpherePoint point(double u, double phi) const {
    return dim_ == 1 ? frame_.from_polar(u) : frame_.from_polar(u, phi);
  }

 private:
  // Boundary of the ball between a row outside and a row inside.
  double edge(double outside, double inside) const {
    for (int k = 0; k < 60; ++k) {
      const double mid = 0.5 * (outside + inside);
      if (extent(mid) >= 0.0) inside = mid;
      else outside = mid;
    }
    return inside;
  }

  int dim_;
  double r_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  bool collar_ = false;
  double u0_ = 0.0;
  double phi0_ = 0.0;
  double sqrt_b0_ = 0.0;
  CenterFrame frame_;
};

BallIntegral integrate_rows(const BallRows& rows, const std::vector<Interval>& runs,
                            const BoundaryWeight& w, int panels_per_run) {
  const auto gl = gauss_legendre(8);
  const std::vector<double> kinks = rows.kinks();
  BallIntegral out;
  for (const Interval& run : runs) {
    std::vector<double> cuts{run.lo};
    for (double k : kinks) {
      if (k > run.lo && k < run.hi) cuts.push_back(k);
    }
    cuts.push_back(run.hi);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double a = cuts[c], b = cuts[c + 1];
      const double h = (b - a) / panels_per_run;
      for (int p = 0; p < panels_per_run; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t q = 0; q < gl->nodes.size(); ++q) {
          const double u = mid + 0.5 * h * gl->nodes[q];
          const double e = rows.extent(u);
          if (e < 0.0) continue;
          double row = 0.5 * h * gl->weights[q];
          if (rows.dim() == 2) row *= 2.0 * e * std::sin(u);
          out.volume += row;
          out.integral += row * w(rows.b_of(u));
        }
      }
    }
  }
  return out;
}

bool settled(double now, double before, double tol) {
  return std::abs(now - before) <= tol * std::abs(now);
}

}  // namespace

BallIntegral rho_ball_integrate(const RhoBall& ball, const BoundaryWeight& w, int resolution,
                                double rel_tol) {
  if (resolution < 32) throw std::invalid_argument("ball resolution must be >= 32");
  const BallRows rows(ball);
  const std::vector<Interval> runs = rows.runs();
  int panels = std::max(resolution / 8, 1);
  BallIntegral prev = integrate_rows(rows, runs, w, panels);
  while (panels < kMaxPanels) {
    panels *= 2;
    const BallIntegral cur = integrate_rows(rows, runs, w, panels);
    if (settled(cur.volume, prev.volume, rel_tol) &&
        settled(cur.integral, prev.integral, rel_tol)) {
      return cur;
    }
    prev = cur;
  }
  return prev;
}

double rho_ball_volume(const RhoBall& ball, int resolution) {
  return rho_ball_integrate(ball, [](double) { return 1.0; }, resolution).volume;
}

std::vector<SpherePoint> rho_ball_samples(const RhoBall& ball, int count) {
  std::vector<SpherePoint> out{ball.center()};
  if (count <= 0) return out;
  const BallRows rows(ball);
  const std::vector<Interval> runs = rows.runs();
  double total = 0.0;
  for (const Interval& r : runs) total += r.hi - r.lo;
  out.reserve(static_cast<std::size_t>(count) + 1);
  for (int i = 1; i <= count; ++i) {
    double s = radical_inverse(static_cast<std::uint64_t>(i), 2) * total;
    double u = runs.empty() ? rows.u0() : runs.back().hi;
    for (const Interval& r : runs) {
      if (s <= r.hi - r.lo) {
        u = r.lo + s;
        break;
      }
      s -= r.hi - r.lo;
    }
    const double half = std::max(rows.extent(u), 0.0);
    const double v = radical_inverse(static_cast<std::uint64_t>(i), 3);
    out.push_back(rows.point(u, rows.phi0() + (2.0 * v - 1.0) * (rows.dim() == 2 ? half : 0.0)));
  }
  return out;
}

}  // namespace capquad
