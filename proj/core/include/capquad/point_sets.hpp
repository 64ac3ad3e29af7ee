#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "capquad/geometry.hpp"

namespace capquad {

/// A finite point set in a cap or collar with its separation target.
struct NodeSet {
  Domain domain;
  std::vector<SpherePoint> points;
  /// Separation target delta / n.
  double epsilon;
  int degree = 0;
  double delta = 0.0;
  std::uint64_t seed = 0;
};

/// Spatial index over points of a domain, keyed by polar coordinates in the
/// domain frame. Queries return every point whose metric distance to the
/// query point is at most the given radius.
class NeighborIndex {
 public:
  NeighborIndex(const Domain& domain, std::span<const SpherePoint> points);

  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] const Domain& domain() const { return domain_; }

  /// Indices of points within metric distance `radius` of x, ascending.
  [[nodiscard]] std::vector<std::size_t> within(const SpherePoint& x, double radius) const;
  /// Number of points within metric distance `radius` of x.
  [[nodiscard]] std::size_t count_within(const SpherePoint& x, double radius) const;
  /// Calls f(index, distance) for every point within metric distance
  /// `radius` of x, in no particular order.
  void for_each_within(const SpherePoint& x, double radius,
                       const std::function<void(std::size_t, double)>& f) const;

 private:
  // Bin entry with the point's local coordinates and sqrt(b) stored inline,
  // so that scans over a bin stay in contiguous memory.
  struct Entry {
    double phi;
    std::array<double, 3> local;
    double sqrt_b;
    std::size_t index;
  };
  template <class F>
  void visit(const SpherePoint& local, double u, double geodesic_radius, F&& f) const;
  [[nodiscard]] double reach(double radius) const;
  [[nodiscard]] double polar_u(const SpherePoint& local) const;
  [[nodiscard]] double sqrt_b(double u) const;

  Domain domain_;
  int dim_ = 2;
  bool collar_ = false;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double u_lo_ = 0.0;
  double bin_width_ = 1.0;
  std::size_t size_ = 0;
  std::vector<std::vector<Entry>> bins_;
};

/// Deterministic product grid of the domain with about `resolution` points per
/// metric length epsilon: polar rows are refined towards the boundary so that
/// neighbouring rows are at most epsilon / resolution apart in the metric.
/// A phase seed randomizes the azimuthal phase of every row (d = 2).
[[nodiscard]] std::vector<SpherePoint> probe_grid(
    const Domain& domain, double epsilon, int resolution,
    std::optional<std::uint64_t> phase_seed = std::nullopt);

/// Minimum pairwise metric distance (infinity for fewer than two points).
[[nodiscard]] double min_separation(const Domain& domain, std::span<const SpherePoint> points);

/// True iff every pairwise metric distance is at least epsilon - 1e-12.
[[nodiscard]] bool is_separable(const Domain& domain, std::span<const SpherePoint> points,
                                double epsilon);

/// Separable, and every point of the probe grid at `probe_resolution` lies
/// within metric distance epsilon of some point.
[[nodiscard]] bool is_maximal_separable(const Domain& domain,
                                        std::span<const SpherePoint> points, double epsilon,
                                        int probe_resolution = 4);

/// Farthest-point insertion over a candidate pool, starting from the first
/// pool point (the cap center for caps), until every candidate is within
/// epsilon of the set. The pool is the seeded grid at resolution 8 together
/// with the unseeded grid at resolution 4, so the result is maximal at probe
/// resolution 4 by construction. Ties go to the lowest candidate index.
[[nodiscard]] NodeSet greedy_maximal_set(const Domain& domain, double epsilon,
                                         std::uint64_t seed);

/// greedy_maximal_set with epsilon = delta / degree; records degree and delta.
[[nodiscard]] NodeSet maximal_node_set(const Domain& domain, int degree, double delta,
                                       std::uint64_t seed);

/// max over probe points of the number of balls B_rho(w, beta * epsilon)
/// containing the probe; the probe grid uses `probes` points per epsilon.
[[nodiscard]] int covering_multiplicity(const Domain& domain, const NodeSet& nodes,
                                        double beta, int probes = 4);

/// max over probe points x of #(nodes within metric distance 1/n of x). The
/// probes are a grid at scale 1/n plus the nodes themselves.
[[nodiscard]] int tau_statistic(const Domain& domain, std::span<const SpherePoint> nodes, int n,
                                int probes = 4);

}  // namespace capquad
