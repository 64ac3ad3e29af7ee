#include <doctest.h>

#include <cmath>
#include <random>

#include "capquad/geometry.hpp"
#include "capquad/rho_ball.hpp"
#include "support.hpp"

using namespace capquad;
using capquad::testing::at_polar;
using capquad::testing::kPi;
using capquad::testing::random_cap_point;

namespace {

// Term-by-term re-evaluation of the cap metric in extended precision, using
// arccos of the dot product and the center distance directly.
long double rho_oracle(double alpha, const SpherePoint& e, const SpherePoint& x,
                       const SpherePoint& y) {
  auto dot = [](const SpherePoint& a, const SpherePoint& b) {
    long double s = 0.0L;
    for (int i = 0; i <= a.dim(); ++i) s += static_cast<long double>(a[i]) * b[i];
    return std::clamp(s, -1.0L, 1.0L);
  };
  const long double a = alpha;
  const long double d = std::acos(dot(x, y));
  const long double bx = std::max(0.0L, a - std::acos(dot(x, e)));
  const long double by = std::max(0.0L, a - std::acos(dot(y, e)));
  const long double db = std::sqrt(bx) - std::sqrt(by);
  return std::sqrt(d * d + a * db * db) / a;
}

}  // namespace

TEST_CASE("geodesic distance special configurations") {
  const SpherePoint n = SpherePoint::pole(2);
  CHECK(geodesic_distance(n, n) == 0.0);
  CHECK(geodesic_distance(n, SpherePoint(0, 0, -1)) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(geodesic_distance(n, SpherePoint(1, 0, 0)) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK_THROWS_AS((void)geodesic_distance(n, SpherePoint(0.0, 1.0)), std::invalid_argument);
}

TEST_CASE("sphere points are renormalized") {
  const SpherePoint x(3.0, 0.0, 4.0);
  CHECK(x[0] == doctest::Approx(0.6));
  CHECK(x[2] == doctest::Approx(0.8));
  CHECK_THROWS((void)SpherePoint(0.0, 0.0, 0.0));
}

TEST_CASE("cap admissibility") {
  CHECK_NOTHROW(Cap(SpherePoint::pole(2), kMaxCapRadius));
  CHECK_THROWS(Cap(SpherePoint::pole(2), 3.1));
  CHECK_THROWS(Cap(SpherePoint::pole(2), 0.0));
  CHECK_NOTHROW(Collar(SpherePoint::pole(2), 0.5, 1.0));
  CHECK_THROWS(Collar(SpherePoint::pole(2), 1.0, 0.5));
}

TEST_CASE("boundary distance") {
  const Cap cap1(SpherePoint::pole(2), 1.0);
  CHECK(boundary_distance(cap1, SpherePoint::pole(2)) == doctest::Approx(1.0));
  CHECK(boundary_distance(cap1, at_polar(1.0, 0.3)) == doctest::Approx(0.0).epsilon(1e-14));
  const Cap cap(SpherePoint::pole(2), 0.5);
  CHECK(boundary_distance(cap, at_polar(0.2, 1.1)) == doctest::Approx(0.3));
  CHECK_THROWS_AS((void)boundary_distance(cap, at_polar(0.6)), DomainError);
}

TEST_CASE("rho closed-form cases") {
  const double alpha = 0.7;
  const Cap cap(SpherePoint::pole(2), alpha);
  const SpherePoint e = SpherePoint::pole(2);
  CHECK(rho(cap, e, e) == 0.0);
  CHECK(rho(cap, e, at_polar(alpha, 2.0)) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS((void)rho(cap, e, at_polar(0.8)), DomainError);
}

TEST_CASE("rho matches an extended-precision oracle on rotated caps") {
  std::mt19937_64 rng(5);
  const SpherePoint e(0.3, -0.4, 0.866);
  for (double alpha : {0.05, 0.5, 2.0}) {
    const Cap cap(e, alpha);
    const CenterFrame frame(e);
    for (int k = 0; k < 500; ++k) {
      const SpherePoint x = frame.to_world(random_cap_point(rng, 2, alpha));
      const SpherePoint y = frame.to_world(random_cap_point(rng, 2, alpha));
      const long double want = rho_oracle(alpha, e, x, y);
      CHECK(std::abs(rho(cap, x, y) - static_cast<double>(want)) <= 1e-7 * (1.0 + want));
    }
  }
}

TEST_CASE("delta_r substitutions") {
  const SpherePoint e2 = SpherePoint::pole(2);
  CHECK(delta_r(Cap(e2, 0.5), e2, 0.1) == doctest::Approx(0.00275).epsilon(1e-13));
  // Rounding leaves b_x near 1e-16, which sqrt lifts to ~1e-8.
  CHECK(delta_r(Cap(e2, 1.3), at_polar(1.3), 0.1) ==
        doctest::Approx(1.3 * 1.3 * 0.001).epsilon(1e-6));
  // d = 1: alpha (r^2 + r sqrt(b/alpha)) = 0.25 + 0.5.
  const SpherePoint e1 = SpherePoint::pole(1);
  CHECK(delta_r(Cap(e1, 1.0), e1, 0.5) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(delta_r(Cap(e2, 1.0), e2, 0.2) > delta_r(Cap(e2, 1.0), e2, 0.1));
  CHECK_THROWS((void)delta_r(Cap(e2, 1.0), e2, 0.0));
}

TEST_CASE("interval metrics") {
  CHECK(rho1(0.5, 0.0, 0.0) == 0.0);
  CHECK(rho1(0.5, 0.0, 0.5) == doctest::Approx(std::sqrt(2.0)));
  CHECK(rho2(0.5, 0.0, 0.0) == 0.0);
  CHECK(rho3(0.5, 0.2, 0.2) == 0.0);
  CHECK_THROWS_AS((void)rho1(0.5, 0.0, 0.6), DomainError);

  // rho1 against a long double recomputation.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double a = 0.25, x1 = a * u(rng), x2 = a * u(rng);
    const long double b1 = std::min(std::abs(x1 + 0.25L), std::abs(x1 - 0.25L));
    const long double b2 = std::min(std::abs(x2 + 0.25L), std::abs(x2 - 0.25L));
    const long double db = std::sqrt(b1) - std::sqrt(b2);
    const long double dx = static_cast<long double>(x1) - x2;
    const long double want = std::sqrt(dx * dx + 0.25L * db * db) / 0.25L;
    CHECK(rho1(a, x1, x2) == doctest::Approx(static_cast<double>(want)).epsilon(1e-12));
  }
}

TEST_CASE("metric axioms on sampled triples") {
  std::mt19937_64 rng(3);
  const Cap cap(SpherePoint::pole(2), 0.5);
  const Collar collar(SpherePoint::pole(2), 0.5, 1.0);
  auto collar_point = [&] {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double c = std::cos(1.0) + (std::cos(0.5) - std::cos(1.0)) * u(rng);
    return at_polar(std::acos(c), 2.0 * kPi * u(rng));
  };
  for (int k = 0; k < 2000; ++k) {
    const SpherePoint x = random_cap_point(rng, 2, 0.5);
    const SpherePoint y = random_cap_point(rng, 2, 0.5);
    const SpherePoint z = random_cap_point(rng, 2, 0.5);
    for (auto m : {&rho, &rho4, &rho5}) {
      CHECK(m(cap, x, y) == m(cap, y, x));
      CHECK(m(cap, x, y) >= 0.0);
      CHECK(m(cap, x, z) <= m(cap, x, y) + m(cap, y, z) + 1e-10);
    }
    const SpherePoint cx = collar_point(), cy = collar_point(), cz = collar_point();
    CHECK(collar_rho(collar, cx, cy) == collar_rho(collar, cy, cx));
    CHECK(collar_rho(collar, cx, cz) <= collar_rho(collar, cx, cy) + collar_rho(collar, cy, cz) + 1e-10);
  }
}

TEST_CASE("collar metric on a meridian") {
  const Collar collar(SpherePoint::pole(2), 0.5, 1.0);
  const double want = 2.0 * std::sin(0.25) / 0.5;
  CHECK(collar_rho(collar, at_polar(0.5, 0.7), at_polar(1.0, 0.7)) == doctest::Approx(want));
  CHECK(collar_rho(collar, at_polar(0.7), at_polar(0.7)) == 0.0);
}

TEST_CASE("rho balls sit inside geodesic balls of radius alpha r") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double alpha = 0.5;
  const Cap cap(SpherePoint::pole(2), alpha);
  int tested = 0;
  while (tested < 1000) {
    const SpherePoint x = random_cap_point(rng, 2, alpha);
    const SpherePoint y = random_cap_point(rng, 2, alpha);
    const double r = u(rng);
    if (rho(cap, x, y) > r) continue;
    CHECK(geodesic_distance(x, y) <= alpha * r + 1e-10);
    ++tested;
  }
}

TEST_CASE("rho ball membership") {
  const Cap cap(SpherePoint::pole(2), 1.0);
  const RhoBall ball(cap, at_polar(0.5), 0.2);
  CHECK(rho_ball_contains(ball, at_polar(0.5)));
  CHECK_FALSE(rho_ball_contains(ball, at_polar(1.2)));
  // Pointwise agreement with rho on a probe grid, including the r = 2 ball.
  const RhoBall big(cap, SpherePoint::pole(2), 2.0);
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j < 12; ++j) {
      const SpherePoint y = at_polar(0.05 * i, 0.5 * j);
      CHECK(rho_ball_contains(ball, y) == (rho(cap, ball.center(), y) <= 0.2 + 1e-12));
      CHECK(rho_ball_contains(big, y));
    }
  }
}

TEST_CASE("rho ball volume") {
  for (double alpha : {0.4, 1.0}) {
    const Cap cap(SpherePoint::pole(2), alpha);
    const double area = 2.0 * kPi * (1.0 - std::cos(alpha));
    CHECK(rho_ball_volume(RhoBall(cap, SpherePoint::pole(2), 2.0)) ==
          doctest::Approx(area).epsilon(1e-9));
  }
  const Cap cap(SpherePoint::pole(2), 1.0);
  double last = 1.0;
  for (double r : {0.4, 0.2, 0.1, 0.05, 0.025}) {
    const double v = rho_ball_volume(RhoBall(cap, SpherePoint::pole(2), r));
    CHECK(v < last);
    last = v;
  }
}

TEST_CASE("rho ball volume agrees with Monte Carlo") {
  // Uniform samples of the cap; the hit fraction times the area estimates
  // the ball volume with relative error about sqrt((1 - q) / (q N)).
  const Cap cap(SpherePoint::pole(2), 1.0);
  const double area = 2.0 * kPi * (1.0 - std::cos(1.0));
  std::mt19937_64 rng(77);
  for (const auto& [theta, r] : {std::pair{0.0, 0.1}, std::pair{0.7, 0.15}, std::pair{0.98, 0.1}}) {
    const RhoBall ball(cap, at_polar(theta, 0.4), r);
    const int samples = 1000000;
    int hits = 0;
    for (int k = 0; k < samples; ++k) hits += rho_ball_contains(ball, random_cap_point(rng, 2, 1.0));
    const double mc = area * hits / samples;
    const double q = static_cast<double>(hits) / samples;
    const double sigma = std::sqrt((1.0 - q) / (q * samples));
    CHECK(rho_ball_volume(ball) == doctest::Approx(mc).epsilon(5.0 * sigma + 0.01));
    if (theta == 0.0) {
      const double ratio = rho_ball_volume(ball) / delta_r(cap, ball.center(), r);
      CHECK(ratio >= 1.0 / 20.0);
      CHECK(ratio <= 20.0);
    }
  }
}

TEST_CASE("dilation map and D") {
  const SpherePoint e = SpherePoint::pole(2);
  CHECK(map_T(e, e) == e);
  const SpherePoint x = at_polar(kPi / 16, 0.9);
  const SpherePoint tx = map_T(x, e);
  CHECK(geodesic_distance(tx, e) == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(std::atan2(tx[1], tx[0]) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK_THROWS_AS((void)map_T(at_polar(0.5), e), DomainError);

  std::mt19937_64 rng(4);
  const SpherePoint c(0.2, 0.5, 0.8);
  const CenterFrame frame(c);
  for (int k = 0; k < 200; ++k) {
    const SpherePoint y = frame.to_world(random_cap_point(rng, 2, kPi / 8));
    CHECK(geodesic_distance(map_T(y, c), c) ==
          doctest::Approx(8.0 * geodesic_distance(y, c)).epsilon(1e-12));
  }

  CHECK(poly_D(1, 0.3) == 1.0);
  CHECK(poly_D(2, 1.0) == doctest::Approx(8.0));
  CHECK(poly_D(2, std::cos(kPi / 16)) == doctest::Approx(1.0 / std::sin(kPi / 16)).epsilon(1e-12));
  for (double th = 0.05; th < 3.1; th += 0.1) {
    CHECK(poly_D(2, std::cos(th)) == doctest::Approx(std::sin(8 * th) / std::sin(th)).epsilon(1e-12));
  }
}
