#include "capquad/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include "capquad/gauss_legendre.hpp"
#include "capquad/quadrature.hpp"
#include "capquad/rho_ball.hpp"
#include "capquad/sampling.hpp"

namespace capquad {

void RatioStats::add(double v) {
  min = std::min(min, v);
  max = std::max(max, v);
  ++count;
  mean += (v - mean) / count;
}

double RatioStats::spread() const {
  return min > 0.0 ? max / min : std::numeric_limits<double>::infinity();
}

DoublingWeight::DoublingWeight(Kind kind, double gamma, double n_ref)
    : kind_(kind), gamma_(gamma), n_ref_(n_ref) {}

DoublingWeight DoublingWeight::constant() { return {Kind::constant, 0.0, 1.0}; }

DoublingWeight DoublingWeight::boundary_power(double gamma, double n_ref) {
  if (!(gamma >= 0.0 && gamma <= 2.0)) {
    throw std::invalid_argument("boundary power exponent must lie in [0, 2]");
  }
  if (!(n_ref > 0.0)) throw std::invalid_argument("n_ref must be positive");
  return {Kind::boundary_power, gamma, n_ref};
}

double DoublingWeight::operator()(double b) const {
  if (kind_ == Kind::constant) return 1.0;
  return std::pow(std::max(b, 0.0) + 1.0 / n_ref_, gamma_);
}

double DoublingWeight::at(const Domain& domain, const SpherePoint& x) const {
  return (*this)(boundary_distance(domain, x));
}

bool supported_exponent(double p) { return p == 1.0 || p == 2.0 || p == 4.0; }

namespace {

constexpr double kPi = std::numbers::pi;

// Fixed chunk size: Eigen's product kernels block by matrix shape, so the
// chunking must not depend on the thread count.
constexpr std::size_t kChunk = 512;
constexpr double kDegenerate = 1e-14;
constexpr double kIntegralTol = 1e-8;
// Accepted at the finest rule when the 1e-8 target is out of reach. For p = 1,
// |f| has kinks along the zero set of f and product rules converge like
// N^-2, so the last doubling only settles to a few parts in 1e5.
constexpr double kFallbackTol = 1e-4;
constexpr int kMaxRedraws = 16;
constexpr std::uint64_t kExactSalt = 0x6a09e667f3bcc909ULL;

double pow_abs(double v, double p) {
  const double a = std::abs(v);
  if (p == 2.0) return a * a;
  if (p == 1.0) return a;
  if (p == 4.0) return (a * a) * (a * a);
  return std::pow(a, p);
}

void check_exponent(double p) {
  if (!supported_exponent(p)) {
    throw std::invalid_argument("p must be one of 1, 2, 4, got " + std::to_string(p));
  }
}

void check_trials(int trials) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
}

int check_threads(const VerifyOptions& o) { return std::max(o.threads, 1); }

// Values of the polynomials (columns of c) at the points, chunk by chunk.
// body(chunk, first_point, values) runs once per chunk, possibly concurrently.
void for_value_chunks(const PolySpace& space, std::span<const SpherePoint> points,
                      const Eigen::MatrixXd& c, int threads,
                      const std::function<void(std::size_t, std::size_t,
                                               const Eigen::MatrixXd&)>& body) {
  const std::size_t chunks = (points.size() + kChunk - 1) / kChunk;
  parallel_for(chunks, threads, [&](std::size_t k) {
    const std::size_t first = k * kChunk;
    const std::size_t count = std::min(kChunk, points.size() - first);
    const Eigen::MatrixXd values = basis_matrix(space, points.subspan(first, count)) * c;
    body(k, first, values);
  });
}

Eigen::MatrixXd values_at(const PolySpace& space, std::span<const SpherePoint> points,
                          const Eigen::MatrixXd& c, int threads) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(points.size()), c.cols());
  for_value_chunks(space, points, c, threads,
                   [&](std::size_t, std::size_t first, const Eigen::MatrixXd& v) {
                     out.middleRows(static_cast<Eigen::Index>(first), v.rows()) = v;
                   });
  return out;
}

// sum_i w_i g_i |F_i|^p per column, summed in a fixed order.
std::vector<double> weighted_power_sums(const PolySpace& space,
                                        std::span<const SpherePoint> points,
                                        std::span<const double> weights,
                                        const Eigen::MatrixXd& c, double p, int threads) {
  const std::size_t chunks = (points.size() + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> partial(chunks);
  for_value_chunks(space, points, c, threads,
                   [&](std::size_t k, std::size_t first, const Eigen::MatrixXd& v) {
                     std::vector<double> s(static_cast<std::size_t>(c.cols()), 0.0);
                     for (Eigen::Index t = 0; t < v.cols(); ++t) {
                       for (Eigen::Index i = 0; i < v.rows(); ++i) {
                         s[t] += weights[first + i] * pow_abs(v(i, t), p);
                       }
                     }
                     partial[k] = std::move(s);
                   });
  std::vector<double> out(static_cast<std::size_t>(c.cols()), 0.0);
  for (const auto& s : partial) {
    for (std::size_t t = 0; t < s.size(); ++t) out[t] += s[t];
  }
  return out;
}

bool settled(double cur, double prev, double tol) {
  return std::abs(cur - prev) <= tol * std::abs(cur);
}

// int |f|^p (times an optional weight) over the domain for every column of c.
class PowerIntegrator {
 public:
  // Integrand weight as a function of the polar angle of a rule row.
  using RowWeight = std::function<std::vector<double>(const ProductRule&)>;

  PowerIntegrator(Domain domain, PolySpace space, double p, RowWeight row_weight = {})
      : domain_(std::move(domain)), space_(space), p_(p), row_weight_(std::move(row_weight)) {}

  [[nodiscard]] std::vector<double> operator()(const Eigen::MatrixXd& c, int threads) const {
    const int n = space_.degree();
    const bool even = p_ == 2.0 || p_ == 4.0;
    const int exact = static_cast<int>(p_) * n;
    if (even && exact <= kMaxRuleDegree && !row_weight_) {
      return on_rule(build_rule(to_rule_domain(domain_), exact), c, threads);
    }
    int degree = std::clamp(even ? exact : 2 * n, 8, kMaxRuleDegree / 2);
    std::vector<double> prev = on_rule(ProductRule(to_rule_domain(domain_), degree, PolarVariable::theta), c,
                                       threads);
    for (;;) {
      degree = std::min(2 * degree, kMaxRuleDegree);
      std::vector<double> cur =
          on_rule(ProductRule(to_rule_domain(domain_), degree, PolarVariable::theta), c, threads);
      const bool last = degree == kMaxRuleDegree;
      bool done = true;
      for (std::size_t t = 0; t < cur.size(); ++t) {
        if (settled(cur[t], prev[t], kIntegralTol)) continue;
        if (last && settled(cur[t], prev[t], kFallbackTol)) continue;
        if (last) throw NonConvergence(cur[t], prev[t]);
        done = false;
      }
      if (done) return cur;
      prev = std::move(cur);
    }
  }

 private:
  std::vector<double> on_rule(const ProductRule& rule, const Eigen::MatrixXd& c,
                              int threads) const {
    std::vector<double> w = rule.weights();
    if (row_weight_) {
      const std::vector<double> rw = row_weight_(rule);
      const std::size_t m = static_cast<std::size_t>(rule.azimuth_count());
      for (std::size_t k = 0; k < w.size(); ++k) w[k] *= rw[k / m];
    }
    return weighted_power_sums(space_, rule.nodes(), w, c, p_, threads);
  }

  Domain domain_;
  PolySpace space_;
  double p_;
  RowWeight row_weight_;
};

// Random polynomials of one space with their p-th power integrals.
struct Trials {
  PolySpace space;
  Eigen::MatrixXd coeffs;  // basis x trials
  std::vector<double> norms;
};

Eigen::VectorXd draw(const PolySpace& space, std::uint64_t seed, std::size_t t,
                     std::uint64_t attempt) {
  const PolyCoeffs f = random_polynomial(space, derive_seed(seed, t, attempt));
  return Eigen::Map<const Eigen::VectorXd>(f.coeffs().data(),
                                           static_cast<Eigen::Index>(f.coeffs().size()));
}

// Draws `trials` polynomials, redrawing any with int |f|^p below 1e-14.
Trials draw_trials(const PowerIntegrator& integral, const PolySpace& space, int trials,
                   std::uint64_t seed, int threads) {
  Trials out{space, Eigen::MatrixXd(static_cast<Eigen::Index>(dim(space)), trials), {}};
  for (int t = 0; t < trials; ++t) out.coeffs.col(t) = draw(space, seed, t, 0);
  out.norms = integral(out.coeffs, threads);
  for (std::uint64_t attempt = 1;; ++attempt) {
    std::vector<Eigen::Index> bad;
    for (std::size_t t = 0; t < out.norms.size(); ++t) {
      if (!(out.norms[t] >= kDegenerate)) bad.push_back(static_cast<Eigen::Index>(t));
    }
    if (bad.empty()) return out;
    if (attempt > kMaxRedraws) throw std::runtime_error("random polynomials keep degenerating");
    Eigen::MatrixXd redo(out.coeffs.rows(), static_cast<Eigen::Index>(bad.size()));
    for (std::size_t k = 0; k < bad.size(); ++k) {
      redo.col(static_cast<Eigen::Index>(k)) = draw(space, seed, bad[k], attempt);
    }
    const std::vector<double> norms = integral(redo, threads);
    for (std::size_t k = 0; k < bad.size(); ++k) {
      out.coeffs.col(bad[k]) = redo.col(static_cast<Eigen::Index>(k));
      out.norms[bad[k]] = norms[k];
    }
  }
}

Trials draw_trials(const Domain& domain, int degree, double p, int trials, std::uint64_t seed,
                   int threads) {
  const PolySpace space(dim(domain), degree);
  return draw_trials(PowerIntegrator(domain, space, p), space, trials, seed, threads);
}

// Smallest and largest value of each polynomial over the samples of
// B(w, radius), for every node w. Rows are nodes, columns polynomials.
struct BallRanges {
  Eigen::MatrixXd lo;
  Eigen::MatrixXd hi;
};

BallRanges ball_ranges(const Domain& domain, std::span<const SpherePoint> nodes, double radius,
                       const PolySpace& space, const Eigen::MatrixXd& c,
                       const VerifyOptions& opt) {
  constexpr std::size_t kBlock = 32;
  const auto rows = static_cast<Eigen::Index>(nodes.size());
  BallRanges out{Eigen::MatrixXd(rows, c.cols()), Eigen::MatrixXd(rows, c.cols())};
  const std::size_t blocks = (nodes.size() + kBlock - 1) / kBlock;
  parallel_for(blocks, check_threads(opt), [&](std::size_t b) {
    const std::size_t first = b * kBlock;
    const std::size_t last = std::min(nodes.size(), first + kBlock);
    std::vector<SpherePoint> pts;
    std::vector<std::size_t> offsets{0};
    for (std::size_t i = first; i < last; ++i) {
      const std::vector<SpherePoint> s =
          rho_ball_samples(RhoBall(domain, nodes[i], radius), opt.ball_samples);
      pts.insert(pts.end(), s.begin(), s.end());
      offsets.push_back(pts.size());
    }
    const Eigen::MatrixXd v = values_at(space, pts, c, 1);
    for (std::size_t i = first; i < last; ++i) {
      const auto o = static_cast<Eigen::Index>(offsets[i - first]);
      const auto len = static_cast<Eigen::Index>(offsets[i - first + 1]) - o;
      const auto r = static_cast<Eigen::Index>(i);
      out.lo.row(r) = v.middleRows(o, len).colwise().minCoeff();
      out.hi.row(r) = v.middleRows(o, len).colwise().maxCoeff();
    }
  });
  return out;
}

std::vector<double> per_node(std::size_t count, int threads,
                             const std::function<double(std::size_t)>& f) {
  std::vector<double> out(count);
  parallel_for(count, threads, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

double delta_of(const NodeSet& nodes, int degree) { return nodes.epsilon * degree; }

void check_nodes(const NodeSet& nodes, int degree) {
  if (nodes.points.empty()) throw std::invalid_argument("node set is empty");
  if (degree < 1) throw std::invalid_argument("degree must be >= 1");
  if (!(nodes.epsilon > 0.0)) throw std::invalid_argument("node set needs epsilon > 0");
}

// Oscillation sums sum_w (max f - min f)^p |B(w, eps)| per polynomial.
std::vector<double> osc_sums(const NodeSet& nodes, const PolySpace& space,
                             const Eigen::MatrixXd& c, double p, double beta,
                             const VerifyOptions& opt) {
  if (!(beta >= 1.0)) throw std::invalid_argument("beta must be >= 1");
  const BallRanges r =
      ball_ranges(nodes.domain, nodes.points, beta * nodes.epsilon, space, c, opt);
  const std::vector<double> vol = per_node(nodes.points.size(), check_threads(opt),
                                           [&](std::size_t i) {
                                             return rho_ball_volume(RhoBall(
                                                 nodes.domain, nodes.points[i], nodes.epsilon));
                                           });
  std::vector<double> out(static_cast<std::size_t>(c.cols()), 0.0);
  for (Eigen::Index t = 0; t < c.cols(); ++t) {
    for (std::size_t i = 0; i < vol.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      out[t] += pow_abs(r.hi(k, t) - r.lo(k, t), p) * vol[i];
    }
  }
  return out;
}

using TrigRows = std::function<void(double, std::span<double>, std::span<double>)>;

// Values of a trigonometric polynomial in the d = 1 basis and its derivative.
TrigRows circle_rows(int n) {
  return [n](double t, std::span<double> v, std::span<double> dv) {
    const double ck = 1.0 / std::sqrt(kPi);
    v[0] = 1.0 / std::sqrt(2.0 * kPi);
    dv[0] = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double c = std::cos(k * t);
      const double s = std::sin(k * t);
      v[2 * k - 1] = ck * c;
      v[2 * k] = ck * s;
      dv[2 * k - 1] = -ck * k * s;
      dv[2 * k] = ck * k * c;
    }
  };
}

// The same space on [-alpha, alpha] in a basis that stays well conditioned
// there: T_k(s) and sin(t) T_j(s) with s = cos(t) mapped affinely from
// [cos alpha, 1] onto [-1, 1]. Even trigonometric polynomials of degree n are
// the polynomials of degree n in cos(t), odd ones are sin(t) times degree n-1.
TrigRows arc_rows(int n, double alpha) {
  return [n, alpha](double t, std::span<double> v, std::span<double> dv) {
    const double ca = std::cos(alpha);
    const double st = std::sin(t), ct = std::cos(t);
    const double s = (2.0 * ct - (1.0 + ca)) / (1.0 - ca);
    const double ds = -2.0 * st / (1.0 - ca);
    // Chebyshev values and s-derivatives by the three-term recurrence.
    double t0 = 1.0, t1 = s, d0 = 0.0, d1 = 1.0;
    for (int k = 0; k <= n; ++k) {
      double tk, dk;
      if (k == 0) {
        tk = t0;
        dk = d0;
      } else if (k == 1) {
        tk = t1;
        dk = d1;
      } else {
        tk = 2.0 * s * t1 - t0;
        dk = 2.0 * t1 + 2.0 * s * d1 - d0;
        t0 = t1;
        t1 = tk;
        d0 = d1;
        d1 = dk;
      }
      v[k] = tk;
      dv[k] = dk * ds;
      if (k < n) {
        v[n + 1 + k] = st * tk;
        dv[n + 1 + k] = ct * tk + st * dk * ds;
      }
    }
  };
}

struct BernsteinSums {
  std::vector<double> lhs;
  std::vector<double> rhs;
};

// Nodes and weights of both integrals with t = alpha sin(u), split at 0 where
// b_t has its kink; `m` Gauss-Legendre points on each half.
struct BernsteinGrid {
  Eigen::MatrixXd e, de;
  std::vector<double> w_lhs, w_rhs;
};

BernsteinGrid bernstein_grid(double alpha, int n, double p, const DoublingWeight& weight,
                             const TrigRows& rows, int m) {
  std::vector<double> u, g;
  std::vector<double> us, gs;
  gauss_legendre_on(m, -kPi / 2.0, 0.0, u, g);
  gauss_legendre_on(m, 0.0, kPi / 2.0, us, gs);
  u.insert(u.end(), us.begin(), us.end());
  g.insert(g.end(), gs.begin(), gs.end());

  const auto size = static_cast<Eigen::Index>(u.size());
  const auto cols = static_cast<Eigen::Index>(2 * n + 1);
  BernsteinGrid out{Eigen::MatrixXd(size, cols), Eigen::MatrixXd(size, cols), {}, {}};
  std::vector<double> v(cols), dv(cols);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double t = alpha * std::sin(u[i]);
    const double root = alpha * std::cos(u[i]);
    rows(t, v, dv);
    for (Eigen::Index k = 0; k < cols; ++k) {
      out.e(static_cast<Eigen::Index>(i), k) = v[k];
      out.de(static_cast<Eigen::Index>(i), k) = dv[k];
    }
    const double base = g[i] * root * weight(alpha - std::abs(t));
    out.w_rhs.push_back(base);
    out.w_lhs.push_back(base * std::pow(alpha / n + root, p));
  }
  return out;
}

BernsteinSums bernstein_sums(double alpha, int n, double p, const DoublingWeight& weight,
                             const TrigRows& rows, const Eigen::MatrixXd& c, int m) {
  const BernsteinGrid grid = bernstein_grid(alpha, n, p, weight, rows, m);
  const Eigen::MatrixXd tv = grid.e * c;
  const Eigen::MatrixXd dtv = grid.de * c;
  BernsteinSums out{std::vector<double>(c.cols(), 0.0), std::vector<double>(c.cols(), 0.0)};
  const double np = std::pow(static_cast<double>(n), p);
  for (Eigen::Index t = 0; t < c.cols(); ++t) {
    for (Eigen::Index i = 0; i < tv.rows(); ++i) {
      out.lhs[t] += grid.w_lhs[i] * pow_abs(dtv(i, t), p);
      out.rhs[t] += grid.w_rhs[i] * pow_abs(tv(i, t), p);
    }
    out.rhs[t] *= np;
  }
  return out;
}

int bernstein_start(int n) { return 2 * n + 32; }
constexpr int kMaxBernsteinPoints = 1 << 14;

BernsteinSums bernstein_converged(double alpha, int n, double p, const DoublingWeight& weight,
                                  const TrigRows& rows, const Eigen::MatrixXd& c) {
  int m = bernstein_start(n);
  BernsteinSums prev = bernstein_sums(alpha, n, p, weight, rows, c, m);
  for (;;) {
    m *= 2;
    BernsteinSums cur = bernstein_sums(alpha, n, p, weight, rows, c, m);
    const bool last = m >= kMaxBernsteinPoints;
    const double tol = last ? kFallbackTol : kIntegralTol;
    bool done = true;
    for (std::size_t t = 0; t < cur.lhs.size(); ++t) {
      done = done && settled(cur.lhs[t], prev.lhs[t], tol) && settled(cur.rhs[t], prev.rhs[t], tol);
    }
    if (done) return cur;
    if (last) throw NonConvergence(cur.lhs[0], prev.lhs[0]);
    prev = std::move(cur);
  }
}

void check_bernstein_args(double alpha, int degree, double p) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw std::invalid_argument("alpha must lie in (0, 1/2]");
  if (degree < 1) throw std::invalid_argument("degree must be >= 1");
  check_exponent(p);
}

constexpr double kWnTol = 1e-6;

}  // namespace

MzResult mz_bracket(const CubatureRule& rule, double p, int trials, std::uint64_t seed,
                    const VerifyOptions& options) {
  check_exponent(p);
  check_trials(trials);
  const int threads = check_threads(options);
  const Domain& domain = rule.nodes.domain;
  const std::span<const SpherePoint> nodes = rule.nodes.points;

  auto ratios = [&](const Trials& tr) {
    const std::vector<double> sums =
        weighted_power_sums(tr.space, nodes, rule.weights, tr.coeffs, p, threads);
    std::vector<double> r(sums.size());
    for (std::size_t t = 0; t < r.size(); ++t) r[t] = sums[t] / tr.norms[t];
    return r;
  };

  MzResult out;
  for (double r : ratios(draw_trials(domain, rule.degree, p, trials, seed, threads))) {
    out.ratio.add(r);
  }
  if (p == 2.0 || p == 4.0) {
    const int low = rule.degree / static_cast<int>(p);
    out.exact_error = 0.0;
    for (double r : ratios(draw_trials(domain, low, p, trials, seed ^ kExactSalt, threads))) {
      out.exact_error = std::max(out.exact_error, std::abs(r - 1.0));
    }
  }
  return out;
}

OscResult osc_constant(const NodeSet& nodes, int degree, double p, double beta, int trials,
                       std::uint64_t seed, const VerifyOptions& options) {
  check_nodes(nodes, degree);
  check_exponent(p);
  check_trials(trials);
  const Trials tr = draw_trials(nodes.domain, degree, p, trials, seed, check_threads(options));
  const std::vector<double> lhs = osc_sums(nodes, tr.space, tr.coeffs, p, beta, options);
  OscResult out;
  const double delta = delta_of(nodes, degree);
  for (std::size_t t = 0; t < lhs.size(); ++t) {
    const double v = std::pow(lhs[t] / tr.norms[t], 1.0 / p) / delta;
    out.per_trial.add(v);
  }
  out.estimate = out.per_trial.max;
  return out;
}

double osc_ratio(const NodeSet& nodes, const PolyCoeffs& f, double p, double beta,
                 const VerifyOptions& options) {
  check_nodes(nodes, std::max(f.space().degree(), 1));
  check_exponent(p);
  if (f.space().dim_sphere() != dim(nodes.domain)) {
    throw std::invalid_argument("polynomial and domain dimensions differ");
  }
  const Eigen::MatrixXd c = Eigen::Map<const Eigen::VectorXd>(
      f.coeffs().data(), static_cast<Eigen::Index>(f.coeffs().size()));
  const double norm = PowerIntegrator(nodes.domain, f.space(), p)(c, check_threads(options))[0];
  return osc_sums(nodes, f.space(), c, p, beta, options)[0] / norm;
}

SieveResult large_sieve_constant(const Domain& domain, std::span<const SpherePoint> points,
                                 int degree, double p, int trials, std::uint64_t seed,
                                 const VerifyOptions& options) {
  if (points.empty()) throw std::invalid_argument("node set is empty");
  if (degree < 1) throw std::invalid_argument("degree must be >= 1");
  check_exponent(p);
  check_trials(trials);
  for (const SpherePoint& x : points) {
    if (!contains(domain, x)) throw DomainError("node outside the domain");
  }
  const int threads = check_threads(options);
  const Trials tr = draw_trials(domain, degree, p, trials, seed, threads);
  std::vector<double> delta(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    delta[i] = delta_r(domain, points[i], 1.0 / degree);
  }
  const std::vector<double> lhs =
      weighted_power_sums(tr.space, points, delta, tr.coeffs, p, threads);
  SieveResult out;
  out.tau = tau_statistic(domain, points, degree);
  for (std::size_t t = 0; t < lhs.size(); ++t) {
    out.per_trial.add(lhs[t] / (out.tau * tr.norms[t]));
  }
  out.estimate = out.per_trial.max;
  return out;
}

MaxMinResult maxmin_equivalence(const NodeSet& nodes, int degree, double p, double beta,
                                int trials, std::uint64_t seed, const VerifyOptions& options) {
  check_nodes(nodes, degree);
  check_exponent(p);
  check_trials(trials);
  if (!(beta >= 1.0)) throw std::invalid_argument("beta must be >= 1");
  const Trials tr = draw_trials(nodes.domain, degree, p, trials, seed, check_threads(options));
  const BallRanges r =
      ball_ranges(nodes.domain, nodes.points, beta * nodes.epsilon, tr.space, tr.coeffs, options);
  std::vector<double> vol(nodes.points.size());
  for (std::size_t i = 0; i < vol.size(); ++i) {
    vol[i] = delta_r(nodes.domain, nodes.points[i], nodes.epsilon);
  }
  MaxMinResult out;
  for (Eigen::Index t = 0; t < tr.coeffs.cols(); ++t) {
    double hi = 0.0, lo = 0.0;
    for (std::size_t i = 0; i < vol.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      const double a = r.lo(k, t), b = r.hi(k, t);
      hi += pow_abs(std::max(std::abs(a), std::abs(b)), p) * vol[i];
      const double m = a <= 0.0 && b >= 0.0 ? 0.0 : std::min(std::abs(a), std::abs(b));
      lo += pow_abs(m, p) * vol[i];
    }
    out.max_sum.add(hi / tr.norms[t]);
    out.min_sum.add(lo / tr.norms[t]);
    out.ordered = out.ordered && hi >= lo;
  }
  return out;
}

double bernstein_ratio(double alpha, const PolyCoeffs& t_poly, double p,
                       const DoublingWeight& weight) {
  const int n = t_poly.space().degree();
  check_bernstein_args(alpha, n, p);
  if (t_poly.space().dim_sphere() != 1) {
    throw std::invalid_argument("the Bernstein check is for d = 1");
  }
  const Eigen::MatrixXd c = Eigen::Map<const Eigen::VectorXd>(
      t_poly.coeffs().data(), static_cast<Eigen::Index>(t_poly.coeffs().size()));
  const BernsteinSums s = bernstein_converged(alpha, n, p, weight, circle_rows(n), c);
  return s.lhs[0] / s.rhs[0];
}

double bernstein_check_d1(double alpha, int degree, double p, const DoublingWeight& weight,
                          int trials, std::uint64_t seed, const VerifyOptions&) {
  check_bernstein_args(alpha, degree, p);
  check_trials(trials);
  const PolySpace space(1, degree);
  const TrigRows rows = arc_rows(degree, alpha);
  // All trials share one grid per refinement level.
  Eigen::MatrixXd c(static_cast<Eigen::Index>(dim(space)), trials);
  for (int t = 0; t < trials; ++t) c.col(t) = draw(space, seed, t, 0);
  BernsteinSums s = bernstein_converged(alpha, degree, p, weight, rows, c);
  for (std::uint64_t attempt = 1;; ++attempt) {
    std::vector<Eigen::Index> bad;
    for (std::size_t t = 0; t < s.rhs.size(); ++t) {
      if (!(s.rhs[t] >= kDegenerate)) bad.push_back(static_cast<Eigen::Index>(t));
    }
    if (bad.empty()) break;
    if (attempt > kMaxRedraws) throw std::runtime_error("random polynomials keep degenerating");
    Eigen::MatrixXd redo(c.rows(), static_cast<Eigen::Index>(bad.size()));
    for (std::size_t k = 0; k < bad.size(); ++k) {
      redo.col(static_cast<Eigen::Index>(k)) = draw(space, seed, bad[k], attempt);
    }
    const BernsteinSums r = bernstein_converged(alpha, degree, p, weight, rows, redo);
    for (std::size_t k = 0; k < bad.size(); ++k) {
      s.lhs[bad[k]] = r.lhs[k];
      s.rhs[bad[k]] = r.rhs[k];
    }
  }
  double worst = 0.0;
  for (std::size_t t = 0; t < s.lhs.size(); ++t) worst = std::max(worst, s.lhs[t] / s.rhs[t]);
  return worst;
}

double bernstein_sup_d1(double alpha, int degree, const DoublingWeight& weight) {
  check_bernstein_args(alpha, degree, 2.0);
  const TrigRows rows = arc_rows(degree, alpha);
  // Both quadratic forms are polynomial of bounded degree in u apart from the
  // weight, so doubling the grid once is a convergence check.
  double prev = 0.0;
  for (int m = bernstein_start(degree); m <= kMaxBernsteinPoints; m *= 2) {
    const BernsteinGrid g = bernstein_grid(alpha, degree, 2.0, weight, rows, m);
    const Eigen::Map<const Eigen::VectorXd> wl(g.w_lhs.data(),
                                               static_cast<Eigen::Index>(g.w_lhs.size()));
    const Eigen::Map<const Eigen::VectorXd> wr(g.w_rhs.data(),
                                               static_cast<Eigen::Index>(g.w_rhs.size()));
    const Eigen::MatrixXd a = g.de.transpose() * wl.asDiagonal() * g.de;
    const Eigen::MatrixXd b =
        static_cast<double>(degree) * degree * (g.e.transpose() * wr.asDiagonal() * g.e);
    const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b,
                                                                         Eigen::EigenvaluesOnly);
    const double cur = es.eigenvalues().maxCoeff();
    if (m > bernstein_start(degree) && settled(cur, prev, kIntegralTol)) return cur;
    prev = cur;
  }
  throw NonConvergence(prev, prev);
}

double compute_Wn(const Domain& domain, const DoublingWeight& weight, int n,
                  const SpherePoint& x) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const BallIntegral b = rho_ball_integrate(
      RhoBall(domain, x, 1.0 / n), [&](double bx) { return weight(bx); }, 32, kWnTol);
  return b.integral / b.volume;
}

double estimate_doubling(const Domain& domain, const DoublingWeight& weight, int radii_levels,
                         int probes) {
  if (radii_levels < 3) throw std::invalid_argument("radii_levels must be >= 3");
  if (probes < 2) throw std::invalid_argument("probes must be >= 2");
  double lo = 0.0, hi = 0.0;
  if (const auto* cap = std::get_if<Cap>(&domain)) {
    hi = cap->alpha();
  } else {
    const auto& collar = std::get<Collar>(domain);
    lo = collar.alpha();
    hi = collar.beta();
  }
  const auto w = [&](double b) { return weight(b); };
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) {
    // Quadratic spacing in b_x puts more probes near the outer boundary.
    const double s = static_cast<double>(i) / (probes - 1);
    const SpherePoint x = frame(domain).from_polar(hi - (hi - lo) * s * s);
    for (int k = 1; k <= radii_levels; ++k) {
      const double r = std::ldexp(1.0, -k);
      const double small = rho_ball_integrate(RhoBall(domain, x, r), w, 32, 1e-3).integral;
      const double big = rho_ball_integrate(RhoBall(domain, x, 2.0 * r), w, 32, 1e-3).integral;
      worst = std::max(worst, big / small);
    }
  }
  return worst;
}

WeightedMzResult weighted_mz(const Cap& cap, const DoublingWeight& weight, const NodeSet& nodes,
                             int degree, double p, int trials, std::uint64_t seed,
                             const VerifyOptions& options) {
  check_nodes(nodes, degree);
  check_exponent(p);
  check_trials(trials);
  if (!(cap.alpha() <= 0.5)) throw std::invalid_argument("weighted checks need alpha <= 1/2");
  const auto* node_cap = std::get_if<Cap>(&nodes.domain);
  if (node_cap == nullptr || node_cap->alpha() != cap.alpha() ||
      !(node_cap->center() == cap.center())) {
    throw std::invalid_argument("node set does not live on the given cap");
  }
  const int threads = check_threads(options);
  const Domain domain = cap;
  const PolySpace space(dim(domain), degree);

  // W and W_n depend on x only through its polar angle, so one value per
  // rule row suffices.
  auto row_points = [](const ProductRule& rule) {
    std::vector<SpherePoint> out;
    const std::size_t m = static_cast<std::size_t>(rule.azimuth_count());
    for (std::size_t i = 0; i < rule.polar_angles().size(); ++i) {
      out.push_back(rule.nodes()[i * m]);
    }
    return out;
  };
  const PowerIntegrator with_w(domain, space, p, [&](const ProductRule& rule) {
    std::vector<double> out;
    for (const SpherePoint& x : row_points(rule)) out.push_back(weight.at(domain, x));
    return out;
  });
  const PowerIntegrator with_wn(domain, space, p, [&](const ProductRule& rule) {
    const std::vector<SpherePoint> pts = row_points(rule);
    return per_node(pts.size(), threads, [&](std::size_t i) {
      return compute_Wn(domain, weight, degree, pts[i]);
    });
  });

  const Trials tr = draw_trials(with_w, space, trials, seed, threads);
  const std::vector<double> norm_wn = with_wn(tr.coeffs, threads);

  const BallRanges r = ball_ranges(domain, nodes.points, nodes.epsilon, space, tr.coeffs, options);
  const auto w = [&](double b) { return weight(b); };
  const std::vector<double> mass = per_node(nodes.points.size(), threads, [&](std::size_t i) {
    return rho_ball_integrate(RhoBall(domain, nodes.points[i], nodes.epsilon), w, 32, 1e-3)
        .integral;
  });

  WeightedMzResult out;
  for (Eigen::Index t = 0; t < tr.coeffs.cols(); ++t) {
    out.continuous.add(tr.norms[t] / norm_wn[t]);
    double hi = 0.0, lo = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      const double a = r.lo(k, t), b = r.hi(k, t);
      hi += pow_abs(std::max(std::abs(a), std::abs(b)), p) * mass[i];
      const double m = a <= 0.0 && b >= 0.0 ? 0.0 : std::min(std::abs(a), std::abs(b));
      lo += pow_abs(m, p) * mass[i];
    }
    out.max_sum.add(hi / tr.norms[t]);
    out.min_sum.add(lo / tr.norms[t]);
  }
  return out;
}

double change_of_variables_check(const Cap& cap, int degree, int trials, std::uint64_t seed,
                                 const VerifyOptions& options) {
  if (!(cap.alpha() >= 0.5)) throw std::invalid_argument("alpha must be >= 1/2");
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  check_trials(trials);
  const int d = cap.dim();
  const int inner_degree = 8 * degree + 7 * (d - 1);
  if (inner_degree > kMaxRuleDegree) {
    throw std::invalid_argument("degree too large for the dilated rule");
  }
  const int threads = check_threads(options);
  const PolySpace space(d, degree);
  Eigen::MatrixXd c(static_cast<Eigen::Index>(dim(space)), trials);
  for (int t = 0; t < trials; ++t) c.col(t) = draw(space, seed, t, 0);

  const ProductRule outer = build_rule(cap, degree);
  const ProductRule inner = build_rule(Cap(cap.center(), cap.alpha() / 8.0), inner_degree);
  std::vector<SpherePoint> mapped;
  std::vector<double> w;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    const SpherePoint& x = inner.nodes()[i];
    mapped.push_back(map_T(x, cap.center()));
    w.push_back(8.0 * inner.weights()[i] * poly_D(d, x.dot(cap.center())));
  }
  const Eigen::MatrixXd lv = values_at(space, outer.nodes(), c, threads);
  const Eigen::MatrixXd rv = values_at(space, mapped, c, threads);
  const Eigen::Map<const Eigen::VectorXd> lw(outer.weights().data(),
                                             static_cast<Eigen::Index>(outer.size()));
  const Eigen::Map<const Eigen::VectorXd> rw(w.data(), static_cast<Eigen::Index>(w.size()));
  const Eigen::VectorXd lhs = lv.transpose() * lw;
  const Eigen::VectorXd rhs = rv.transpose() * rw;
  double worst = 0.0;
  for (Eigen::Index t = 0; t < lhs.size(); ++t) {
    worst = std::max(worst, std::abs(lhs(t) - rhs(t)) / (1.0 + std::abs(lhs(t))));
  }
  return worst;
}

}  // namespace capquad
