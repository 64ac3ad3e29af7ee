#include <doctest.h>

#include <vector>

#include "capquad/point_sets.hpp"
#include "support.hpp"

using namespace capquad;
using capquad::testing::at_polar;

TEST_CASE("separability") {
  const Domain cap = Cap(SpherePoint::pole(2), 1.0);
  const std::vector<SpherePoint> one{at_polar(0.3)};
  CHECK(is_separable(cap, one, 0.5));
  CHECK(is_separable(cap, {}, 0.5));
  const std::vector<SpherePoint> dup{at_polar(0.3, 1.0), at_polar(0.3, 1.0)};
  CHECK_FALSE(is_separable(cap, dup, 1e-9));
}

TEST_CASE("maximality of the center alone") {
  const std::vector<SpherePoint> center{SpherePoint::pole(2)};
  for (double alpha : {0.3, 1.0, 2.5}) {
    CHECK(is_maximal_separable(Cap(SpherePoint::pole(2), alpha), center, 2.0));
  }
  CHECK_FALSE(is_maximal_separable(Cap(SpherePoint::pole(2), 1.0), center, 0.01));
}

TEST_CASE("greedy sets are separated, maximal and reproducible") {
  struct Case {
    Domain domain;
    double epsilon;
  };
  const std::vector<Case> cases{
      {Cap(SpherePoint::pole(2), 1.0), 0.1},
      {Cap(SpherePoint(0.6, 0.0, 0.8), 0.4), 0.08},
      {Cap(SpherePoint::pole(1), 0.5), 0.02},
      {Collar(SpherePoint::pole(2), 0.5, 1.0), 0.1},
  };
  for (const Case& c : cases) {
    const NodeSet a = greedy_maximal_set(c.domain, c.epsilon, 42);
    CHECK(a.points.size() > 1);
    CHECK(is_separable(c.domain, a.points, c.epsilon));
    CHECK(min_separation(c.domain, a.points) >= c.epsilon - 1e-12);
    CHECK(is_maximal_separable(c.domain, a.points, c.epsilon));
    for (const SpherePoint& x : a.points) CHECK(contains(c.domain, x));
    const NodeSet b = greedy_maximal_set(c.domain, c.epsilon, 42);
    CHECK(a.points == b.points);
  }
}

TEST_CASE("a separation beyond the metric diameter keeps one point") {
  CHECK(greedy_maximal_set(Cap(SpherePoint::pole(2), 1.0), 3.0, 1).points.size() == 1);
}

TEST_CASE("node count scales like the polynomial dimension") {
  const Domain cap = Cap(SpherePoint::pole(2), 1.0);
  std::vector<double> scaled;
  for (int n : {4, 8, 16}) {
    const NodeSet s = maximal_node_set(cap, n, 0.5, 42);
    CHECK(s.degree == n);
    CHECK(s.epsilon == doctest::Approx(0.5 / n));
    scaled.push_back(static_cast<double>(s.points.size()) * (0.5 / n) * (0.5 / n));
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  CHECK(*hi / *lo <= 4.0);
}

TEST_CASE("covering multiplicity and tau") {
  const Domain cap = Cap(SpherePoint::pole(2), 1.0);
  const NodeSet single{cap, {SpherePoint::pole(2)}, 0.05, 1, 0.05, 0};
  CHECK(covering_multiplicity(cap, single, 1.0) == 1);

  const NodeSet s = maximal_node_set(cap, 8, 0.5, 3);
  const int m1 = covering_multiplicity(cap, s, 1.0);
  const int m2 = covering_multiplicity(cap, s, 2.0);
  CHECK(m1 >= 1);
  CHECK(m2 >= m1);
  CHECK(m2 <= 4 * 16 * m1);

  const std::vector<SpherePoint> e{SpherePoint::pole(2)};
  CHECK(tau_statistic(cap, e, 8) == 1);
  const std::vector<SpherePoint> triple(3, at_polar(0.4, 0.2));
  CHECK(tau_statistic(cap, triple, 8) == 3);
  // A (1/n)-separated set has bounded tau.
  const NodeSet sep = greedy_maximal_set(cap, 1.0 / 8, 5);
  CHECK(tau_statistic(cap, sep.points, 8) <= covering_multiplicity(cap, sep, 1.0));
}
