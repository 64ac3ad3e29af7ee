// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "capquad/cubature.hpp"
#include "capquad/geometry.hpp"
#include "capquad/point_sets.hpp"
#include "capquad/poly_space.hpp"
#include "capquad/rho_ball.hpp"
#include "capquad/verifier.hpp"
#include "cli.hpp"

using namespace capquad;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kSeed = 42;
constexpr int kTrials = 200;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      details.push_back("violated: " + what);
    }
  }
  void note(const std::string& s) { details.push_back(s); }
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

std::string bracket(double lo, double hi) { return "[" + fmt(lo) + ", " + fmt(hi) + "]"; }

double spread_of(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

SpherePoint at_polar(double theta, double phi) {
  return SpherePoint(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                     std::cos(theta));
}

// Shared state: rules and node sets reused by later criteria.
struct Shared {
  std::map<std::pair<double, int>, CubatureRule> cap_rules;  // (alpha, n), delta 0.25
  std::map<int, CubatureRule> collar_rules;                   // n, delta 0.25
  std::map<int, NodeSet> scaling_sets;                        // n, delta 0.5, alpha 1
};

const Cap kUnitCap(SpherePoint::pole(2), 1.0);
const Collar kCollar(SpherePoint::pole(2), 0.5, 1.0);

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Generates a maximal set and solves at its own degree; the rule must be
// accepted with positive weights and residual <= 1e-9.
void exactness_grid(const Domain& domain, const std::vector<double>& alphas, Outcome& out,
                    const std::function<void(double, int, CubatureRule)>& keep) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::size_t largest = 0;
  for (double a : alphas) {
    const Domain dom = std::holds_alternative<Cap>(domain) ? Domain(Cap(SpherePoint::pole(2), a))
                                                           : domain;
    for (int n : {4, 8, 12}) {
      const NodeSet nodes = maximal_node_set(dom, n, 0.25, kSeed);
      const SolveResult r = solve_weights(nodes, n, 1e-9);
      const std::string cell = "alpha " + fmt(a) + ", n " + std::to_string(n);
      if (const auto* bad = std::get_if<Infeasible>(&r)) {
        out.require(false, cell + " infeasible, residual " + fmt(bad->residual));
        continue;
      }
      CubatureRule rule = std::get<CubatureRule>(r);
      const double floor = 1e-14 * measure(dom) / static_cast<double>(rule.weights.size());
      const double wmin = *std::min_element(rule.weights.begin(), rule.weights.end());
      out.require(wmin >= floor, cell + " has a weight below the positivity floor");
      const double res = verify_exactness(rule, n);
      out.require(res <= 1e-9, cell + " residual " + fmt(res));
      worst = std::max(worst, res);
      largest = std::max(largest, rule.weights.size());
      keep(a, n, std::move(rule));
    }
  }
  const double elapsed = seconds_since(t0);
  out.note("max residual " + fmt(worst, 3) + ", largest node set " + std::to_string(largest) +
           ", generation + solve " + fmt(elapsed, 3) + " s");
  out.require(elapsed <= 60.0, "grid took " + fmt(elapsed, 3) + " s (> 60 s)");
}

Outcome c1_exactness(Shared& s) {
  Outcome out;
  exactness_grid(kUnitCap, {0.3, 1.0, 2.0}, out, [&](double a, int n, CubatureRule r) {
    s.cap_rules.emplace(std::pair{a, n}, std::move(r));
  });
  return out;
}

Outcome c2_sharpness(Shared& s) {
  Outcome out;
  for (double a : {0.3, 1.0, 2.0}) {
    const SolveResult r = solve_weights(maximal_node_set(Cap(SpherePoint::pole(2), a), 16, 0.25, kSeed), 16);
    if (!std::holds_alternative<CubatureRule>(r)) {
      out.require(false, "alpha " + fmt(a) + ", n 16 infeasible");
      continue;
    }
    s.cap_rules.emplace(std::pair{a, 16}, std::get<CubatureRule>(r));
  }
  for (const auto& [key, rule] : s.cap_rules) {
    const auto [lo, hi] = weight_sharpness(rule);
    out.require(hi / lo <= 1e3, "alpha " + fmt(key.first) + ", n " + std::to_string(key.second) +
                                    " spread " + fmt(hi / lo));
  }
  for (double a : {0.3, 1.0, 2.0}) {
    if (!s.cap_rules.count({a, 8}) || !s.cap_rules.count({a, 16})) continue;
    const auto [lo8, hi8] = weight_sharpness(s.cap_rules.at({a, 8}));
    const auto [lo16, hi16] = weight_sharpness(s.cap_rules.at({a, 16}));
    const double move = std::max({lo8 / lo16, lo16 / lo8, hi8 / hi16, hi16 / hi8});
    out.note("alpha " + fmt(a) + ": n 8 " + bracket(lo8, hi8) + ", n 16 " + bracket(lo16, hi16));
    out.require(move < 2.0, "alpha " + fmt(a) + " bracket moved by " + fmt(move));
  }
  return out;
}

Outcome c3_node_count(Shared& s) {
  Outcome out;
  std::vector<double> scaled;
  std::string line = "#nodes (delta/n)^2:";
  for (int n : {8, 16, 32}) {
    NodeSet nodes = maximal_node_set(kUnitCap, n, 0.5, kSeed);
    const double v = static_cast<double>(nodes.points.size()) * std::pow(0.5 / n, 2);
    scaled.push_back(v);
    line += " n " + std::to_string(n) + " -> " + fmt(v);
    s.scaling_sets.emplace(n, std::move(nodes));
  }
  out.note(line);
  out.require(spread_of(scaled) <= 4.0, "spread " + fmt(spread_of(scaled)));
  return out;
}

void mz_pair(const CubatureRule& r8, const CubatureRule& r16, Outcome& out) {
  std::vector<double> spreads;
  for (const CubatureRule* rule : {&r8, &r16}) {
    const MzResult m = mz_bracket(*rule, 2.0, kTrials, kSeed);
    const std::string cell = "n " + std::to_string(rule->degree);
    out.note(cell + ": " + bracket(m.ratio.min, m.ratio.max) + ", exactness error " +
             fmt(m.exact_error, 2));
    out.require(m.ratio.spread() <= 20.0, cell + " C/c " + fmt(m.ratio.spread()));
    out.require(m.exact_error <= 1e-9, cell + " exactness error " + fmt(m.exact_error));
    spreads.push_back(m.ratio.spread());
  }
  out.require(spread_of(spreads) < 2.0, "C/c changed by " + fmt(spread_of(spreads)));
}

Outcome c4_mz(Shared& s) {
  Outcome out;
  if (!s.cap_rules.count({1.0, 8}) || !s.cap_rules.count({1.0, 16})) {
    out.require(false, "rules for alpha 1 unavailable");
    return out;
  }
  mz_pair(s.cap_rules.at({1.0, 8}), s.cap_rules.at({1.0, 16}), out);
  return out;
}

Outcome c5_osc() {
  Outcome out;
  std::vector<double> c1;
  for (double delta : {0.25, 0.5, 1.0}) {
    const NodeSet nodes = maximal_node_set(kUnitCap, 8, delta, kSeed);
    const OscResult o = osc_constant(nodes, 8, 2.0, 1.0, kTrials, kSeed);
    out.note("delta " + fmt(delta) + ": C1 " + fmt(o.estimate));
    out.require(std::isfinite(o.estimate) && o.estimate > 0.0, "C1 not finite at delta " + fmt(delta));
    c1.push_back(o.estimate);
  }
  out.require(spread_of(c1) <= 4.0, "C1 spread " + fmt(spread_of(c1)));
  return out;
}

Outcome c6_sieve() {
  Outcome out;
  const NodeSet sep = maximal_node_set(kUnitCap, 8, 0.5, kSeed);
  const std::size_t size = sep.points.size();
  // Equal-size cluster inside a small ball reaching the boundary.
  const std::vector<SpherePoint> cluster =
      rho_ball_samples(RhoBall(kUnitCap, at_polar(0.9, 0.4), 0.1), static_cast<int>(size) - 1);
  std::vector<SpherePoint> triple;
  for (int k = 0; k < 3; ++k) triple.insert(triple.end(), sep.points.begin(), sep.points.end());

  const SieveResult a = large_sieve_constant(kUnitCap, sep.points, 8, 2.0, kTrials, kSeed);
  const SieveResult b = large_sieve_constant(kUnitCap, cluster, 8, 2.0, kTrials, kSeed);
  const SieveResult c = large_sieve_constant(kUnitCap, triple, 8, 2.0, kTrials, kSeed);
  out.note("separated " + fmt(a.estimate) + " (tau " + std::to_string(a.tau) + "), clustered " +
           fmt(b.estimate) + " (tau " + std::to_string(b.tau) + "), tripled " + fmt(c.estimate) +
           " (tau " + std::to_string(c.tau) + ")");
  for (const SieveResult* r : {&a, &b, &c}) {
    out.require(std::isfinite(r->estimate) && r->estimate > 0.0, "non-finite constant");
  }
  const double rel = std::abs(c.estimate - a.estimate) / a.estimate;
  out.note("duplication change " + fmt(rel, 2));
  out.require(c.tau == 3 * a.tau, "tau did not triple");
  out.require(rel <= 1e-12, "duplication changed the constant by " + fmt(rel, 2));
  return out;
}

Outcome c7_maxmin() {
  Outcome out;
  const NodeSet nodes = maximal_node_set(kUnitCap, 8, 0.25, kSeed);
  const MaxMinResult m = maxmin_equivalence(nodes, 8, 2.0, 1.0, kTrials, kSeed);
  out.note("max-sum " + bracket(m.max_sum.min, m.max_sum.max) + ", min-sum " +
           bracket(m.min_sum.min, m.min_sum.max) + " (ball extrema sampled: lower bounds)");
  for (const RatioStats* st : {&m.max_sum, &m.min_sum}) {
    out.require(st->min >= 1.0 / 20.0 && st->max <= 20.0, "bracket outside [1/20, 20]");
  }
  out.require(m.ordered, "a min-sum exceeded its max-sum");
  return out;
}

// Tracks a ratio bracket across configurations.
struct Bracket {
  double lo = INFINITY, hi = 0.0;
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  [[nodiscard]] double spread() const { return hi / lo; }
};

SpherePoint uniform_cap_point(std::mt19937_64& rng, double alpha, double theta_min = 0.0,
                              double theta_max = -1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (theta_max < 0.0) theta_max = alpha;
  const double c = std::cos(theta_max) + (std::cos(theta_min) - std::cos(theta_max)) * u(rng);
  return at_polar(std::acos(std::clamp(c, -1.0, 1.0)), 2.0 * kPi * u(rng));
}

Outcome c8_metrics() {
  Outcome out;
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Bracket r12, r23, r5, r4;
  int axiom_failures = 0;
  for (double a : {0.05, 0.25, 0.5}) {
    const Cap cap(SpherePoint::pole(2), a);
    for (int k = 0; k < 10000; ++k) {
      const double x1 = a * u(rng), x2 = a * u(rng);
      r12.add(rho1(a, x1, x2) / rho2(a, x1, x2));
      r23.add(rho2(a, x1, x2) / rho3(a, x1, x2));
      const SpherePoint x = uniform_cap_point(rng, a), y = uniform_cap_point(rng, a);
      r5.add(rho(cap, x, y) / rho5(cap, x, y));
      const SpherePoint ox = uniform_cap_point(rng, a, a / 12), oy = uniform_cap_point(rng, a, a / 12);
      r4.add(rho(cap, ox, oy) / rho4(cap, ox, oy));

      // Axioms on triples.
      const SpherePoint z = uniform_cap_point(rng, a);
      const double x3 = a * u(rng);
      const auto tri = [&](double xy, double yz, double xz) { return xz <= xy + yz + 1e-10; };
      bool ok = tri(rho(cap, x, y), rho(cap, y, z), rho(cap, x, z)) &&
                tri(rho5(cap, x, y), rho5(cap, y, z), rho5(cap, x, z)) &&
                tri(rho1(a, x1, x2), rho1(a, x2, x3), rho1(a, x1, x3)) &&
                tri(rho2(a, x1, x2), rho2(a, x2, x3), rho2(a, x1, x3)) &&
                tri(rho3(a, x1, x2), rho3(a, x2, x3), rho3(a, x1, x3));
      ok = ok && rho(cap, x, y) == rho(cap, y, x) && rho5(cap, x, y) == rho5(cap, y, x) &&
           rho4(cap, x, y) == rho4(cap, y, x) && rho1(a, x1, x2) == rho1(a, x2, x1) &&
           rho(cap, x, x) == 0.0 && rho(cap, x, y) >= 0.0;
      axiom_failures += ok ? 0 : 1;
    }
  }
  const std::pair<const char*, const Bracket*> named[] = {
      {"rho1/rho2", &r12}, {"rho2/rho3", &r23}, {"rho/rho5", &r5}, {"rho/rho4 (outer)", &r4}};
  for (const auto& [name, b] : named) {
    out.note(std::string(name) + " " + bracket(b->lo, b->hi));
    out.require(b->spread() <= 100.0, std::string(name) + " spread " + fmt(b->spread()));
  }
  out.require(axiom_failures == 0, std::to_string(axiom_failures) + " axiom failures");
  return out;
}

Outcome c9_volume() {
  Outcome out;
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Bracket ratio;
  const double alphas[] = {0.1, 0.25, 0.5};
  for (int k = 0; k < 200; ++k) {
    const double a = alphas[k % 3];
    const Cap cap(SpherePoint::pole(2), a);
    const SpherePoint x = uniform_cap_point(rng, a);
    const double r = 0.01 + 0.98 * u(rng);
    ratio.add(rho_ball_volume(RhoBall(cap, x, r)) / delta_r(cap, x, r));
  }
  out.note("|B(x, r)| / Delta_r(x) in " + bracket(ratio.lo, ratio.hi));
  out.require(ratio.lo >= 1.0 / 20.0 && ratio.hi <= 20.0, "ratio outside [1/20, 20]");
  return out;
}

Outcome c10_covering(Shared& s) {
  Outcome out;
  std::vector<double> m1s;
  const double bound = std::pow(2.0, 2 + 2) * 4.0;
  for (const auto& [n, nodes] : s.scaling_sets) {
    const int m1 = covering_multiplicity(kUnitCap, nodes, 1.0);
    const int m2 = covering_multiplicity(kUnitCap, nodes, 2.0);
    const double growth = static_cast<double>(m2) / m1;
    out.note("n " + std::to_string(n) + ": beta 1 -> " + std::to_string(m1) + ", beta 2 -> " +
             std::to_string(m2) + " (growth " + fmt(growth) + ")");
    out.require(growth <= bound, "growth " + fmt(growth) + " above " + fmt(bound));
    m1s.push_back(m1);
  }
  // One constant across n: the beta = 1 value must not drift with n.
  out.require(m1s.size() == 3 && spread_of(m1s) <= 2.0, "beta 1 multiplicity drifts with n");
  return out;
}

Outcome c11_dilation() {
  Outcome out;
  double worst = 0.0;
  for (int d : {1, 2}) {
    for (double a : {1.0, 2.5}) {
      worst = std::max(worst, change_of_variables_check(Cap(SpherePoint::pole(d), a), 8, 20, kSeed));
    }
  }
  out.note("change-of-variables discrepancy " + fmt(worst, 2));
  out.require(worst <= 1e-9, "discrepancy " + fmt(worst, 2));
  for (int d : {1, 2}) {
    const int n = 8;
    const PolyCoeffs f = random_polynomial(PolySpace(d, n), kSeed);
    const auto g = compose_with_T(f, SpherePoint::pole(d), TExtent::whole_sphere);
    const double res = project_onto(PolySpace(d, 8 * n), g).residual;
    out.note("d " + std::to_string(d) + ": f o T onto Pi_" + std::to_string(8 * n) +
             " residual " + fmt(res, 2));
    out.require(res <= 1e-8, "projection residual " + fmt(res, 2));
  }
  return out;
}

Outcome c12_weighted() {
  Outcome out;
  const Cap cap(SpherePoint::pole(2), 0.5);
  const NodeSet nodes = maximal_node_set(cap, 8, 0.5, kSeed);
  const WeightedMzResult one = weighted_mz(cap, DoublingWeight::constant(), nodes, 8, 2.0, kTrials, kSeed);
  const double dev = std::max(std::abs(one.continuous.min - 1.0), std::abs(one.continuous.max - 1.0));
  out.note("W = 1: continuous ratio off by " + fmt(dev, 2));
  out.require(dev <= 1e-12, "constant weight ratio off by " + fmt(dev, 2));

  const DoublingWeight w = DoublingWeight::boundary_power(1.0, 8.0);
  const WeightedMzResult m = weighted_mz(cap, w, nodes, 8, 2.0, kTrials, kSeed);
  out.note("boundary power 1: W vs W_n " + bracket(m.continuous.min, m.continuous.max) +
           ", max-sum " + bracket(m.max_sum.min, m.max_sum.max) + ", min-sum " +
           bracket(m.min_sum.min, m.min_sum.max));
  for (const RatioStats* st : {&m.continuous, &m.max_sum, &m.min_sum}) {
    out.require(st->min >= 1.0 / 50.0 && st->max <= 50.0, "bracket outside [1/50, 50]");
  }
  out.note("doubling constant of the weight " + fmt(estimate_doubling(cap, w, 5, 8)));
  return out;
}

Outcome c13_bernstein() {
  Outcome out;
  for (double p : {2.0, 1.0}) {
    for (bool constant : {true, false}) {
      std::vector<double> cs, sups;
      const std::string name = std::string(constant ? "W = 1" : "boundary power 1") + ", p " + fmt(p);
      std::string line = name + ":";
      for (int n : {8, 16, 32}) {
        const DoublingWeight w =
            constant ? DoublingWeight::constant() : DoublingWeight::boundary_power(1.0, n);
        const double c = bernstein_check_d1(0.5, n, p, w, kTrials, kSeed);
        line += " n " + std::to_string(n) + " -> " + fmt(c);
        cs.push_back(c);
        if (p == 2.0) sups.push_back(bernstein_sup_d1(0.5, n, w));
      }
      line += " (spread " + fmt(spread_of(cs));
      // The exact p = 2 maximum, for comparison with the sampled one.
      if (!sups.empty()) line += "; exact maximum spread " + fmt(spread_of(sups));
      out.note(line + ")");
      out.require(spread_of(cs) <= 2.0, name + " spread " + fmt(spread_of(cs)));
    }
  }
  return out;
}

Outcome c14_collar(Shared& s) {
  Outcome out;
  exactness_grid(kCollar, {kCollar.alpha()}, out,
                 [&](double, int n, CubatureRule r) { s.collar_rules.emplace(n, std::move(r)); });
  const SolveResult r16 = solve_weights(maximal_node_set(kCollar, 16, 0.25, kSeed), 16);
  if (s.collar_rules.count(8) && std::holds_alternative<CubatureRule>(r16)) {
    mz_pair(s.collar_rules.at(8), std::get<CubatureRule>(r16), out);
  } else {
    out.require(false, "collar rules at n 8 and 16 unavailable");
  }

  // Collar metric against its product form, and the axioms.
  std::mt19937_64 rng(kSeed);
  Bracket r6;
  int axiom_failures = 0;
  for (int k = 0; k < 10000; ++k) {
    const SpherePoint x = uniform_cap_point(rng, 1.0, 0.5), y = uniform_cap_point(rng, 1.0, 0.5),
                      z = uniform_cap_point(rng, 1.0, 0.5);
    r6.add(collar_rho(kCollar, x, y) / rho6(kCollar, x, y));
    const double xy = collar_rho(kCollar, x, y), yz = collar_rho(kCollar, y, z),
                 xz = collar_rho(kCollar, x, z);
    const bool ok = xz <= xy + yz + 1e-10 && xy == collar_rho(kCollar, y, x) && xy >= 0.0 &&
                    collar_rho(kCollar, x, x) == 0.0 && rho6(kCollar, x, y) == rho6(kCollar, y, x);
    axiom_failures += ok ? 0 : 1;
  }
  out.note("collar rho/rho6 " + bracket(r6.lo, r6.hi));
  out.require(r6.spread() <= 100.0, "collar rho/rho6 spread " + fmt(r6.spread()));
  out.require(axiom_failures == 0, std::to_string(axiom_failures) + " collar axiom failures");
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome c15_reproducibility() {
  Outcome out;
  const fs::path dir = fs::temp_directory_path() / ("capquad_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto p = [&](const std::string& name) { return (dir / name).string(); };

  // Every artifact is produced twice per thread count; all copies must agree.
  const std::vector<std::pair<std::string, std::vector<std::string>>> steps{
      {"pts.json", {"points", "--alpha", "1", "--degree", "8", "--delta", "0.5", "--seed", "7"}},
      {"wpts.json", {"points", "--alpha", "0.5", "--degree", "6", "--delta", "0.5", "--seed", "7"}},
      {"rule.json", {"solve", "--points", "@pts.json"}},
      {"mz.json", {"verify", "mz", "--rule", "@rule.json", "--trials", "40", "--seed", "9"}},
      {"osc.json", {"verify", "osc", "--points", "@pts.json", "--trials", "20", "--seed", "9"}},
      {"sieve.json", {"verify", "sieve", "--points", "@pts.json", "--trials", "20", "--seed", "9"}},
      {"maxmin.json", {"verify", "maxmin", "--points", "@pts.json", "--trials", "20", "--seed", "9"}},
      {"bern.json", {"verify", "bernstein", "--degree", "8,16", "--trials", "40", "--seed", "9"}},
      {"wmz.json", {"verify", "weighted-mz", "--points", "@wpts.json", "--trials", "10", "--seed", "9"}},
      {"cov.json", {"verify", "cov", "--points", "@pts.json"}},
      {"cv.json", {"verify", "change-of-var", "--alpha", "1,2.5", "--trials", "5", "--seed", "9"}},
  };
  std::map<std::string, std::string> reference;
  int mismatches = 0, failures = 0;
  for (const std::string threads : {"1", "1", "2", "2"}) {
    for (const auto& [file, args] : steps) {
      std::vector<std::string> argv{"--threads", threads};
      for (const std::string& a : args) argv.push_back(a[0] == '@' ? p(a.substr(1)) : a);
      const bool is_report = args[0] == "verify";
      argv.push_back(is_report ? "--report" : "--out");
      argv.push_back(p(file));
      std::ostringstream sink;
      if (capquad::cli::run(argv, sink, sink) != 0) {
        ++failures;
        out.note("command failed for " + file + ": " + sink.str());
        continue;
      }
      const std::string bytes = slurp(p(file));
      auto [it, fresh] = reference.emplace(file, bytes);
      if (!fresh && it->second != bytes) {
        ++mismatches;
        out.note(file + " differs with --threads " + threads);
      }
    }
  }
  fs::remove_all(dir);
  out.note(std::to_string(steps.size()) + " artifacts, 4 runs each (threads 1, 1, 2, 2)");
  out.require(failures == 0, std::to_string(failures) + " commands failed");
  out.require(mismatches == 0, std::to_string(mismatches) + " artifacts not byte-identical");
  return out;
}

}  // namespace

int main() {
  Shared shared;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exactness on the cap grid", [&] { return c1_exactness(shared); }},
      {"weight sharpness", [&] { return c2_sharpness(shared); }},
      {"node-count scaling", [&] { return c3_node_count(shared); }},
      {"MZ bracket", [&] { return c4_mz(shared); }},
      {"oscillation constant", [] { return c5_osc(); }},
      {"large sieve", [] { return c6_sieve(); }},
      {"max/min equivalence", [] { return c7_maxmin(); }},
      {"metric equivalences", [] { return c8_metrics(); }},
      {"ball volume formula", [] { return c9_volume(); }},
      {"covering bound", [&] { return c10_covering(shared); }},
      {"dilation identity and degree", [] { return c11_dilation(); }},
      {"doubling-weight equivalences", [] { return c12_weighted(); }},
      {"weighted Bernstein on an arc", [] { return c13_bernstein(); }},
      {"collar suite", [&] { return c14_collar(shared); }},
      {"reproducibility", [] { return c15_reproducibility(); }},
  };
  int failed = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %2zu %s  %s (%.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), seconds_since(t0));
    for (const std::string& line : o.details) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria passed in %.1f s\n", criteria.size() - failed, criteria.size(),
              seconds_since(start));
  return failed == 0 ? 0 : 1;
}
