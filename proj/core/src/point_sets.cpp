#include "capquad/point_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "capquad/sampling.hpp"

namespace capquad {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSeparationSlack = 1e-12;



// Boundary distances of grid rows, from the boundary (b = 0) inwards to
// b_max. Steps keep neighbouring rows within metric distance s of each other:
// the polar part of the step is at most alpha s / sqrt(2) and the sqrt(b)
// part at most sqrt(alpha / 2) s.
std::vector<double> march_b(double alpha, double b_max, double s) {
  std::vector<double> bs{0.0};
  const double lin = alpha * s / std::numbers::sqrt2;
  const double root = std::sqrt(0.5 * alpha) * s;
  double b = 0.0;
  while (b < b_max) {
    const double sb = std::sqrt(b) + root;
    const double step = std::min(lin, sb * sb - b);
    b = b + step >= b_max - 1e-3 * step ? b_max : b + step;
    bs.push_back(b);
  }
  return bs;
}

// Polar rows of the grid in the canonical frame, ascending (signed angles
// for d = 1, with the center moved to the front).
std::vector<double> grid_rows(const Domain& domain, double s) {
  std::vector<double> rows;
  const double a = scale(domain);
  if (const auto* collar = std::get_if<Collar>(&domain)) {
    const double h = collar->beta() - a;
    const std::vector<double> bs = march_b(a, 0.5 * h, s);
    for (double b : bs) rows.push_back(a + b);
    for (auto it = bs.rbegin() + 1; it != bs.rend(); ++it) rows.push_back(collar->beta() - *it);
    return rows;
  }
  const std::vector<double> bs = march_b(a, a, s);
  if (dim(domain) == 2) {
    for (auto it = bs.rbegin(); it != bs.rend(); ++it) rows.push_back(a - *it);
    return rows;
  }
  rows.push_back(0.0);
  for (double b : bs) {
    if (b < a) rows.push_back(-(a - b));
  }
  for (auto it = bs.rbegin() + 1; it != bs.rend(); ++it) rows.push_back(a - *it);
  std::sort(rows.begin() + 1, rows.end());
  return rows;
}

std::vector<SpherePoint> grid_local(const Domain& domain, double epsilon, int resolution,
                                    std::optional<std::uint64_t> phase_seed) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("grid spacing needs epsilon > 0");
  if (resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");
  const double s = epsilon / resolution;
  const std::vector<double> rows = grid_rows(domain, s);
  const CenterFrame pole(SpherePoint::pole(dim(domain)));
  std::vector<SpherePoint> out;
  if (dim(domain) == 1) {
    for (double t : rows) out.push_back(pole.from_polar(t));
    return out;
  }
  const double a = scale(domain);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double theta = rows[i];
    const double st = std::sin(theta);
    const int m = st <= 0.0 ? 1 : std::max(1, static_cast<int>(std::ceil(2.0 * kPi * st / (a * s))));
    double phase = 0.0;
    if (phase_seed) {
      phase = 2.0 * kPi / m *
              (static_cast<double>(derive_seed(*phase_seed, i) >> 11) * 0x1.0p-53);
    }
    for (int j = 0; j < m; ++j) out.push_back(pole.from_polar(theta, phase + 2.0 * kPi * j / m));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- NeighborIndex

NeighborIndex::NeighborIndex(const Domain& domain, std::span<const SpherePoint> points)
    : domain_(domain), dim_(dim(domain)), alpha_(scale(domain)) {
  if (const auto* collar = std::get_if<Collar>(&domain)) {
    collar_ = true;
    beta_ = collar->beta();
  }
  const CenterFrame& f = frame(domain);
  size_ = points.size();
  const double hi = kPi;
  u_lo_ = dim_ == 1 ? -kPi : 0.0;
  const double n = static_cast<double>(std::max<std::size_t>(points.size(), 1));
  const double bins = dim_ == 1 ? std::clamp(n / 4.0, 1.0, 65536.0)
                                : std::clamp(2.0 * std::sqrt(n), 1.0, 8192.0);
  bin_width_ = (hi - u_lo_) / bins;
  bins_.resize(static_cast<std::size_t>(bins) + 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const SpherePoint l = f.to_local(points[i]);
    const double u = polar_u(l);
    const auto k = static_cast<std::size_t>(
        std::clamp((u - u_lo_) / bin_width_, 0.0, static_cast<double>(bins_.size() - 1)));
    const double key = dim_ == 1 ? u : std::atan2(l[1], l[0]);
    bins_[k].push_back({key, {l[0], l[1], dim_ == 2 ? l[2] : 0.0}, sqrt_b(u), i});
  }
  for (auto& b : bins_) {
    std::sort(b.begin(), b.end(), [](const Entry& x, const Entry& y) {
      return x.phi < y.phi || (x.phi == y.phi && x.index < y.index);
    });
  }
}

double NeighborIndex::polar_u(const SpherePoint& l) const {
  if (dim_ == 1) return std::atan2(l[0], l[1]);
  return std::atan2(std::hypot(l[0], l[1]), l[2]);
}

double NeighborIndex::sqrt_b(double u) const {
  const double theta = std::abs(u);
  double b;
  if (collar_) b = std::min(theta - alpha_, beta_ - theta);
  else b = alpha_ - theta;
  return std::sqrt(std::max(b, 0.0));
}

double NeighborIndex::reach(double radius) const {
  const double ar = alpha_ * radius;
  if (collar_) return ar >= 2.0 ? kPi : 2.0 * std::asin(0.5 * ar);
  return std::min(ar, kPi);
}

template <class F>
void NeighborIndex::visit(const SpherePoint& local, double u, double r, F&& f) const {
  const double pad = 1e-12;
  auto scan_bins = [&](double lo, double hi, auto&& per_bin) {
    const auto nb = static_cast<long>(bins_.size());
    const long k0 = std::max(0L, static_cast<long>(std::floor((lo - u_lo_) / bin_width_)));
    const long k1 = std::min(nb - 1, static_cast<long>(std::floor((hi - u_lo_) / bin_width_)));
    for (long k = k0; k <= k1; ++k) per_bin(static_cast<std::size_t>(k));
  };
  auto emit_range = [&](const std::vector<Entry>& bin, double lo, double hi) {
    auto it = std::lower_bound(bin.begin(), bin.end(), lo,
                               [](const Entry& e, double v) { return e.phi < v; });
    for (; it != bin.end() && it->phi <= hi; ++it) f(*it);
  };
  if (dim_ == 1) {
    auto window = [&](double lo, double hi) {
      scan_bins(lo, hi, [&](std::size_t k) { emit_range(bins_[k], lo, hi); });
    };
    if (r >= kPi) {
      window(-kPi - 1.0, kPi + 1.0);
      return;
    }
    window(u - r - pad, u + r + pad);
    if (u + r > kPi) window(-kPi - 1.0, u + r - 2.0 * kPi + pad);
    if (u - r < -kPi) window(u - r + 2.0 * kPi - pad, kPi + 1.0);
    return;
  }
  const double phi = std::atan2(local[1], local[0]);
  const double su = std::sin(u);
  const double h = r >= kPi ? 1.0 : std::sin(0.5 * r);
  scan_bins(u - r - pad, u + r + pad, [&](std::size_t k) {
    const std::vector<Entry>& bin = bins_[k];
    if (bin.empty()) return;
    const double lo = std::max(u_lo_ + k * bin_width_, 0.0);
    const double hi = std::min(u_lo_ + (k + 1) * bin_width_, kPi);
    const double smin = std::min(std::sin(lo), std::sin(hi));
    const double denom = smin * su;
    if (r >= kPi || !(denom > 0.0) || h * h >= denom) {
      for (const Entry& e : bin) f(e);
      return;
    }
    const double dphi = 2.0 * std::asin(std::sqrt(h * h / denom)) + pad;
    if (dphi >= kPi) {
      for (const Entry& e : bin) f(e);
      return;
    }
    const double a = phi - dphi, b = phi + dphi;
    emit_range(bin, a, b);
    if (a < -kPi) emit_range(bin, a + 2.0 * kPi, kPi + 1.0);
    if (b > kPi) emit_range(bin, -kPi - 1.0, b - 2.0 * kPi);
  });
}

void NeighborIndex::for_each_within(const SpherePoint& x, double radius,
                                    const std::function<void(std::size_t, double)>& f) const {
  const SpherePoint l = frame(domain_).to_local(x);
  const double u = polar_u(l);
  const double sb = sqrt_b(u);
  const double r = reach(radius);
  // Cheap chord test before the full metric.
  const double chord_max = r >= kPi ? 2.0 : 2.0 * std::sin(0.5 * r);
  const double chord2_max = chord_max * chord_max * (1.0 + 1e-9) + 1e-300;
  const double a2 = alpha_;
  visit(l, u, r, [&](const Entry& e) {
    double c2 = 0.0;
    for (int k = 0; k <= dim_; ++k) c2 += (l[k] - e.local[k]) * (l[k] - e.local[k]);
    if (c2 > chord2_max) return;
    double d;
    if (collar_) {
      d = std::sqrt(c2);
    } else {
      double s2 = 0.0;
      for (int k = 0; k <= dim_; ++k) s2 += (l[k] + e.local[k]) * (l[k] + e.local[k]);
      d = 2.0 * std::atan2(std::sqrt(c2), std::sqrt(s2));
    }
    const double db = sb - e.sqrt_b;
    const double m = std::sqrt(d * d + a2 * db * db) / a2;
    if (m <= radius) f(e.index, m);
  });
}

std::vector<std::size_t> NeighborIndex::within(const SpherePoint& x, double radius) const {
  std::vector<std::size_t> out;
  for_each_within(x, radius, [&](std::size_t j, double) { out.push_back(j); });
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t NeighborIndex::count_within(const SpherePoint& x, double radius) const {
  std::size_t n = 0;
  for_each_within(x, radius, [&](std::size_t, double) { ++n; });
  return n;
}

// ---------------------------------------------------------------- grids and checks

std::vector<SpherePoint> probe_grid(const Domain& domain, double epsilon, int resolution,
                                    std::optional<std::uint64_t> phase_seed) {
  std::vector<SpherePoint> pts = grid_local(canonical(domain), epsilon, resolution, phase_seed);
  const CenterFrame& f = frame(domain);
  if (!f.is_identity()) {
    for (SpherePoint& p : pts) p = f.to_world(p);
  }
  return pts;
}

double min_separation(const Domain& domain, std::span<const SpherePoint> points) {
  if (points.size() < 2) return kInf;
  const NeighborIndex index(domain, points);
  double best = kInf;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double r = std::isfinite(best) ? best : 0.01;
    for (;;) {
      bool found = false;
      index.for_each_within(points[i], r, [&](std::size_t j, double d) {
        if (j != i) {
          found = true;
          best = std::min(best, d);
        }
      });
      if (found || std::isfinite(best) || r > 1e6) break;
      r *= 2.0;
    }
  }
  return best;
}

bool is_separable(const Domain& domain, std::span<const SpherePoint> points, double epsilon) {
  for (const SpherePoint& p : points) {
    if (!contains(domain, p)) return false;
  }
  if (points.size() < 2) return true;
  const NeighborIndex index(domain, points);
  const double limit = epsilon - kSeparationSlack;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool ok = true;
    index.for_each_within(points[i], limit, [&](std::size_t j, double d) {
      if (j != i && d < limit) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

bool is_maximal_separable(const Domain& domain, std::span<const SpherePoint> points,
                          double epsilon, int probe_resolution) {
  if (probe_resolution < 4) throw std::invalid_argument("probe resolution must be >= 4");
  if (points.empty() || !is_separable(domain, points, epsilon)) return false;
  const NeighborIndex index(domain, points);
  for (const SpherePoint& probe : probe_grid(domain, epsilon, probe_resolution)) {
    if (index.count_within(probe, epsilon + kSeparationSlack) == 0) return false;
  }
  return true;
}

NodeSet greedy_maximal_set(const Domain& domain, double epsilon, std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const Domain canon = canonical(domain);
  std::vector<SpherePoint> pool = grid_local(canon, epsilon, 8, seed);
  {
    const std::vector<SpherePoint> probes = grid_local(canon, epsilon, 4, std::nullopt);
    pool.insert(pool.end(), probes.begin(), probes.end());
  }
  const NeighborIndex index(canon, pool);

  // Tournament tree over blocks of candidates: each leaf holds the best
  // candidate of its block (largest distance, then lowest index).
  std::vector<double> dist(pool.size(), kInf);
  auto better = [&](std::size_t a, std::size_t b) {
    return dist[a] > dist[b] || (dist[a] == dist[b] && a < b);
  };
  constexpr std::size_t kBlock = 64;
  const std::size_t blocks = (pool.size() + kBlock - 1) / kBlock;
  std::size_t leaves = 1;
  while (leaves < blocks) leaves *= 2;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> tree(2 * leaves, kNone);
  auto pick = [&](std::size_t a, std::size_t b) {
    if (a == kNone) return b;
    if (b == kNone) return a;
    return better(a, b) ? a : b;
  };
  auto refresh_block = [&](std::size_t blk) {
    std::size_t best = kNone;
    const std::size_t end = std::min(pool.size(), (blk + 1) * kBlock);
    for (std::size_t j = blk * kBlock; j < end; ++j) best = pick(best, j);
    std::size_t node = leaves + blk;
    tree[node] = best;
    for (node /= 2; node >= 1; node /= 2) tree[node] = pick(tree[2 * node], tree[2 * node + 1]);
  };
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    std::size_t best = kNone;
    const std::size_t end = std::min(pool.size(), (blk + 1) * kBlock);
    for (std::size_t j = blk * kBlock; j < end; ++j) best = pick(best, j);
    tree[leaves + blk] = best;
  }
  for (std::size_t node = leaves - 1; node >= 1; --node) {
    tree[node] = pick(tree[2 * node], tree[2 * node + 1]);
  }

  NodeSet out{domain, {}, epsilon, 0, epsilon, seed};
  const CenterFrame& f = frame(domain);
  std::vector<std::size_t> dirty;
  std::vector<char> is_dirty(blocks, 0);
  while (!pool.empty()) {
    const std::size_t i = tree[1];
    const double di = dist[i];
    if (!(di >= epsilon)) break;
    out.points.push_back(f.is_identity() ? pool[i] : f.to_world(pool[i]));
    dist[i] = 0.0;
    dirty.assign(1, i / kBlock);
    is_dirty[i / kBlock] = 1;
    // Only candidates closer than the current maximum can change.
    const double r = std::isfinite(di) ? di : 1e300;
    index.for_each_within(pool[i], r, [&](std::size_t j, double d) {
      if (d < dist[j]) {
        dist[j] = d;
        const std::size_t blk = j / kBlock;
        if (!is_dirty[blk]) {
          is_dirty[blk] = 1;
          dirty.push_back(blk);
        }
      }
    });
    for (std::size_t blk : dirty) {
      refresh_block(blk);
      is_dirty[blk] = 0;
    }
  }
  return out;
}

NodeSet maximal_node_set(const Domain& domain, int degree, double delta, std::uint64_t seed) {
  if (degree < 1) throw std::invalid_argument("degree must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  NodeSet set = greedy_maximal_set(domain, delta / degree, seed);
  set.degree = degree;
  set.delta = delta;
  return set;
}

int covering_multiplicity(const Domain& domain, const NodeSet& nodes, double beta, int probes) {
  if (!(beta >= 1.0)) throw std::invalid_argument("beta must be >= 1");
  if (nodes.points.empty()) return 0;
  const NeighborIndex index(domain, nodes.points);
  std::size_t best = 0;
  for (const SpherePoint& p : probe_grid(domain, nodes.epsilon, probes)) {
    best = std::max(best, index.count_within(p, beta * nodes.epsilon));
  }
  return static_cast<int>(best);
}

int tau_statistic(const Domain& domain, std::span<const SpherePoint> nodes, int n, int probes) {
  if (n < 1) throw std::invalid_argument("tau needs n >= 1");
  if (nodes.empty()) return 0;
  const NeighborIndex index(domain, nodes);
  const double r = 1.0 / n;
  std::size_t best = 0;
  for (const SpherePoint& p : probe_grid(domain, r, probes)) {
    best = std::max(best, index.count_within(p, r));
  }
  for (const SpherePoint& p : nodes) best = std::max(best, index.count_within(p, r));
  return static_cast<int>(best);
}

}  // namespace capquad
