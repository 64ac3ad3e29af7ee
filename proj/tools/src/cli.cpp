#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "capquad/cubature.hpp"
#include "capquad/io.hpp"
#include "capquad/point_sets.hpp"
#include "capquad/quadrature.hpp"
#include "capquad/verifier.hpp"

namespace capquad::cli {

namespace {

using nlohmann::json;

// Input errors that should name the offending flag.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  int threads = 1;
  std::uint64_t seed = 1;
};

struct VerifyFlags {
  std::vector<std::string> inputs;
  double p = 2.0;
  int trials = 200;
  double beta = 1.0;
  int ball_samples = 64;
  std::string report;
  std::string csv;
  bool assert_thresholds = false;
  bool wall_time = false;
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    io::write_text_file(path, text);
  }
}

Domain make_domain(int d, double alpha, std::optional<double> collar_beta,
                   const std::vector<double>& center) {
  if (d != 1 && d != 2) throw UsageError("--d must be 1 or 2");
  if (!(alpha > 0.0 && alpha <= kMaxCapRadius)) {
    throw UsageError("--alpha must lie in (0, pi - 0.1]");
  }
  SpherePoint e = SpherePoint::pole(d);
  if (!center.empty()) {
    if (center.size() != static_cast<std::size_t>(d + 1)) {
      throw UsageError("--center needs " + std::to_string(d + 1) + " coordinates");
    }
    try {
      e = SpherePoint(std::span<const double>(center));
    } catch (const std::exception& ex) {
      throw UsageError(std::string("--center: ") + ex.what());
    }
  }
  try {
    if (collar_beta) {
      if (d != 2) throw UsageError("--collar-beta requires --d 2");
      return Collar(e, alpha, *collar_beta);
    }
    return Cap(e, alpha);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& ex) {
    throw UsageError(std::string("--collar-beta: ") + ex.what());
  }
}

std::vector<std::pair<std::string, double>> domain_params(const Domain& domain) {
  std::vector<std::pair<std::string, double>> p{{"d", dim(domain)}, {"alpha", scale(domain)}};
  if (const auto* c = std::get_if<Collar>(&domain)) p.emplace_back("beta_collar", c->beta());
  return p;
}

VerifyOptions verify_options(const Common& c, const VerifyFlags& f) {
  VerifyOptions o;
  o.threads = c.threads;
  o.ball_samples = f.ball_samples;
  return o;
}

DoublingWeight make_weight(const std::string& kind, double gamma, double n_ref) {
  if (kind == "constant") return DoublingWeight::constant();
  if (kind == "boundary-power") return DoublingWeight::boundary_power(gamma, n_ref);
  throw UsageError("--weight must be constant or boundary-power");
}

double max_over_min(const std::vector<double>& v) {
  if (v.empty()) return 1.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
}

bool within(const RatioStats& s, double lo, double hi) {
  return s.min >= lo && s.max <= hi && std::isfinite(s.min) && std::isfinite(s.max);
}

const char* kSamplingNote =
    "ball maxima and minima are taken over quasi-random samples plus the ball center, "
    "so the measured constants are lower bounds";

// Shared tail of every verify subcommand: write report/CSV, check assertions.
int finish(VerificationReport report, const VerifyFlags& f,
           const std::vector<std::string>& violations,
           std::chrono::steady_clock::time_point start, std::ostream& out, std::ostream& err) {
  if (f.wall_time) {
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  const std::string text = io::dump_canonical(io::to_json(report));
  if (f.report.empty()) {
    out << text;
  } else {
    io::write_text_file(f.report, text);
  }
  if (!f.csv.empty()) emit(f.csv, io::report_to_csv(report), out);
  if (f.assert_thresholds && !violations.empty()) {
    for (const std::string& v : violations) err << "assertion failed: " << v << "\n";
    return kAssertionFailed;
  }
  return kOk;
}

void add_verify_common(CLI::App* sub, VerifyFlags& f, bool with_beta, bool with_samples) {
  sub->add_option("--p", f.p, "Exponent (1, 2 or 4)")->check(CLI::IsMember({1.0, 2.0, 4.0}));
  sub->add_option("--trials", f.trials, "Random polynomials per cell")
      ->check(CLI::PositiveNumber);
  sub->add_option("--report", f.report, "Report JSON path (default: standard output)");
  sub->add_option("--csv", f.csv, "CSV export path, one row per cell");
  sub->add_flag("--assert", f.assert_thresholds, "Exit 3 when an acceptance threshold fails");
  sub->add_flag("--wall-time", f.wall_time, "Record wall time (breaks byte reproducibility)");
  if (with_beta) {
    sub->add_option("--beta", f.beta, "Ball dilation factor (>= 1)")->check(CLI::Range(1.0, 64.0));
  }
  if (with_samples) {
    sub->add_option("--ball-samples", f.ball_samples, "Quasi-random points per ball")
        ->check(CLI::Range(1, 100000));
  }
}

VerificationReport new_report(const std::string& id, const Common& c, const VerifyFlags& f) {
  VerificationReport r;
  r.inequality = id;
  r.trials = f.trials;
  r.seed = c.seed;
  r.grid = {{"p", f.p}};
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Positive cubature and sampling inequalities on spherical caps", "capquad"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--threads", common.threads, "Worker threads for trial loops")
      ->envname("CAPQUAD_THREADS")
      ->check(CLI::Range(1, 1024));

  // points
  struct {
    int d = 2;
    double alpha = 0.0;
    int degree = 0;
    double delta = 0.0;
    std::optional<double> collar_beta;
    std::vector<double> center;
    std::string out;
  } pf;
  auto* points = app.add_subcommand("points", "Generate a maximal separated node set");
  points->add_option("--d", pf.d, "Sphere dimension (1 or 2)");
  points->add_option("--alpha", pf.alpha, "Cap radius or collar inner radius")->required();
  points->add_option("--degree", pf.degree, "Polynomial degree n")
      ->required()
      ->check(CLI::Range(1, 1000));
  points->add_option("--delta", pf.delta, "Separation factor; nodes are delta/n apart")
      ->required()
      ->check(CLI::PositiveNumber);
  points->add_option("--seed", common.seed, "Master seed")->envname("CAPQUAD_SEED");
  points->add_option("--collar-beta", pf.collar_beta, "Outer collar radius (d = 2)");
  points->add_option("--center", pf.center, "Cap center, d + 1 numbers")->delimiter(',');
  points->add_option("--out", pf.out, "Output path (default: standard output)");

  // solve
  struct {
    std::string points;
    std::optional<int> degree;
    double tol = kDefaultSolveTol;
    std::string out;
  } sf;
  auto* solve = app.add_subcommand("solve", "Solve for positive cubature weights");
  solve->add_option("--points", sf.points, "Node file")->required();
  solve->add_option("--degree", sf.degree, "Exactness degree (default: from the file)")
      ->check(CLI::Range(0, kMaxRuleDegree));
  solve->add_option("--tol", sf.tol, "Accepted moment residual")->check(CLI::Range(1e-12, 1.0));
  solve->add_option("--out", sf.out, "Output path (default: standard output)");

  // moments
  struct {
    int d = 2;
    double alpha = 0.0;
    int degree = 0;
    std::optional<double> collar_beta;
  } mf;
  auto* moments = app.add_subcommand("moments", "Print the moments of the orthonormal basis");
  moments->add_option("--d", mf.d, "Sphere dimension (1 or 2)");
  moments->add_option("--alpha", mf.alpha, "Cap radius")->required();
  moments->add_option("--degree", mf.degree, "Polynomial degree")
      ->required()
      ->check(CLI::Range(0, kMaxRuleDegree));
  moments->add_option("--collar-beta", mf.collar_beta, "Outer collar radius (d = 2)");

  // verify
  auto* verify = app.add_subcommand("verify", "Measure inequality constants");
  verify->require_subcommand(1);
  verify->add_option("--seed", common.seed, "Master seed")->envname("CAPQUAD_SEED");

  VerifyFlags vf;
  auto* v_mz = verify->add_subcommand("mz", "Two-sided sampling bracket of a rule");
  v_mz->add_option("--rule", vf.inputs, "Rule file(s), one cell each")->required();
  add_verify_common(v_mz, vf, false, false);

  auto* v_osc = verify->add_subcommand("osc", "Oscillation constant of a separated set");
  v_osc->add_option("--points", vf.inputs, "Node or rule file(s), one cell each")->required();
  add_verify_common(v_osc, vf, true, true);

  std::optional<int> sieve_degree;
  auto* v_sieve = verify->add_subcommand("sieve", "Large sieve constant of any finite set");
  v_sieve->add_option("--points", vf.inputs, "Node or rule file(s), one cell each")->required();
  v_sieve->add_option("--degree", sieve_degree, "Degree n (default: from the file)")
      ->check(CLI::Range(1, 1000));
  add_verify_common(v_sieve, vf, false, false);

  auto* v_maxmin = verify->add_subcommand("maxmin", "Max-sum and min-sum brackets");
  v_maxmin->add_option("--points", vf.inputs, "Maximal node file(s), one cell each")->required();
  add_verify_common(v_maxmin, vf, true, true);

  struct {
    double alpha = 0.5;
    std::vector<int> degrees{8, 16, 32};
    std::string weight = "constant";
    double gamma = 1.0;
    std::optional<double> n_ref;
  } bf;
  auto* v_bern = verify->add_subcommand("bernstein", "Weighted Bernstein constant on an arc");
  v_bern->add_option("--alpha", bf.alpha, "Half-length of the arc, at most 1/2");
  v_bern->add_option("--degree", bf.degrees, "Degrees, one cell each")
      ->delimiter(',')
      ->check(CLI::Range(1, 1000));
  v_bern->add_option("--weight", bf.weight, "constant or boundary-power");
  v_bern->add_option("--gamma", bf.gamma, "Boundary power exponent in [0, 2]");
  v_bern->add_option("--n-ref", bf.n_ref, "Smoothing 1/n_ref (default: the cell degree)");
  add_verify_common(v_bern, vf, false, false);

  struct {
    std::string weight = "boundary-power";
    double gamma = 1.0;
    std::optional<double> n_ref;
  } wf;
  auto* v_wmz = verify->add_subcommand("weighted-mz", "Doubling-weight equivalences");
  v_wmz->add_option("--points", vf.inputs, "Maximal node file(s) on a cap, alpha <= 1/2")
      ->required();
  v_wmz->add_option("--weight", wf.weight, "constant or boundary-power");
  v_wmz->add_option("--gamma", wf.gamma, "Boundary power exponent in [0, 2]");
  v_wmz->add_option("--n-ref", wf.n_ref, "Smoothing 1/n_ref (default: the node degree)");
  add_verify_common(v_wmz, vf, false, true);

  std::vector<double> cov_betas{1.0, 2.0};
  auto* v_cov = verify->add_subcommand("cov", "Covering multiplicity of a maximal set");
  v_cov->add_option("--points", vf.inputs, "Maximal node file(s), one cell each")->required();
  v_cov->add_option("--betas", cov_betas, "Ball dilations, first one is the base")
      ->delimiter(',');
  add_verify_common(v_cov, vf, false, false);

  struct {
    int d = 2;
    std::vector<double> alphas{1.0, 2.5};
    int degree = 8;
  } cf;
  auto* v_cv = verify->add_subcommand("change-of-var", "Dilation identity on a large cap");
  v_cv->add_option("--d", cf.d, "Sphere dimension (1 or 2)");
  v_cv->add_option("--alpha", cf.alphas, "Cap radii in [1/2, pi - 0.1], one cell each")
      ->delimiter(',');
  v_cv->add_option("--degree", cf.degree, "Polynomial degree")->check(CLI::Range(0, 24));
  add_verify_common(v_cv, vf, false, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (points->parsed()) {
      const Domain domain = make_domain(pf.d, pf.alpha, pf.collar_beta, pf.center);
      const NodeSet nodes = maximal_node_set(domain, pf.degree, pf.delta, common.seed);
      emit(pf.out, io::dump_canonical(io::to_json(nodes)), out);
      return kOk;
    }

    if (solve->parsed()) {
      NodeSet nodes = io::node_set_from_json(io::read_json_file(sf.points));
      const int degree = sf.degree.value_or(nodes.degree);
      const SolveResult res = solve_weights(nodes, degree, sf.tol);
      if (const auto* bad = std::get_if<Infeasible>(&res)) {
        err << "infeasible: " << bad->reason << "\n"
            << "achieved residual: " << io::format_double(bad->residual) << "\n";
        if (nodes.delta > 0.0) {
          err << "suggestion: regenerate the points with --delta "
              << io::format_double(nodes.delta / 2.0) << "\n";
        }
        return kInfeasible;
      }
      CubatureRule rule = std::get<CubatureRule>(res);
      rule.nodes.degree = degree;
      emit(sf.out, io::dump_canonical(io::to_json(rule)), out);
      return kOk;
    }

    if (moments->parsed()) {
      const Domain domain = make_domain(mf.d, mf.alpha, mf.collar_beta, {});
      const std::vector<double> m = domain_moments(domain, mf.degree);
      json entries = json::array();
      for (std::size_t k = 0; k < m.size(); ++k) {
        std::string label;
        if (mf.d == 2) {
          const int l = static_cast<int>(std::sqrt(static_cast<double>(k)));
          label = "Y_" + std::to_string(l) + "^" + std::to_string(static_cast<int>(k) - l * l - l);
        } else if (k == 0) {
          label = "1";
        } else {
          const std::string kk = std::to_string((k + 1) / 2);
          label = (k % 2 == 1 ? "cos(" : "sin(") + kk + "t)";
        }
        entries.push_back({{"label", label}, {"value", m[k]}});
      }
      json j = {{"d", mf.d}, {"alpha", mf.alpha}, {"degree", mf.degree}, {"moments", entries}};
      if (mf.collar_beta) j["beta"] = *mf.collar_beta;
      out << io::dump_canonical(j);
      return kOk;
    }

    const VerifyOptions opt = verify_options(common, vf);
    std::vector<std::string> violations;

    if (v_mz->parsed()) {
      VerificationReport r = new_report("mz", common, vf);
      std::vector<double> spreads;
      for (const std::string& path : vf.inputs) {
        const CubatureRule rule = io::rule_from_json(io::read_json_file(path));
        const MzResult m = mz_bracket(rule, vf.p, vf.trials, common.seed, opt);
        ReportCell cell;
        cell.params = domain_params(rule.nodes.domain);
        cell.params.emplace_back("n", rule.degree);
        cell.params.emplace_back("delta", rule.nodes.delta);
        cell.params.emplace_back("nodes", static_cast<double>(rule.weights.size()));
        cell.stats.emplace_back("ratio", m.ratio);
        cell.values.emplace_back("spread", m.ratio.spread());
        if (!std::isnan(m.exact_error)) {
          cell.values.emplace_back("exact_error", m.exact_error);
          if (!(m.exact_error <= 1e-9)) violations.push_back(path + ": exactness collapse above 1e-9");
        }
        if (!(m.ratio.spread() <= 20.0)) violations.push_back(path + ": C/c above 20");
        spreads.push_back(m.ratio.spread());
        r.cells.push_back(std::move(cell));
      }
      if (!(max_over_min(spreads) < 2.0)) violations.push_back("C/c changes by 2x or more");
      return finish(std::move(r), vf, violations, start, out, err);
    }

    if (v_osc->parsed()) {
      VerificationReport r = new_report("osc", common, vf);
      r.grid.emplace_back("beta", vf.beta);
      r.grid.emplace_back("ball_samples", vf.ball_samples);
      r.notes.push_back(kSamplingNote);
      std::vector<double> c1;
      for (const std::string& path : vf.inputs) {
        const NodeSet nodes = io::node_set_from_json(io::read_json_file(path));
        const OscResult o =
            osc_constant(nodes, nodes.degree, vf.p, vf.beta, vf.trials, common.seed, opt);
        ReportCell cell;
        cell.params = domain_params(nodes.domain);
        cell.params.emplace_back("n", nodes.degree);
        cell.params.emplace_back("delta", nodes.delta);
        cell.stats.emplace_back("scaled_ratio", o.per_trial);
        cell.values.emplace_back("C1", o.estimate);
        if (!(std::isfinite(o.estimate) && o.estimate > 0.0)) {
          violations.push_back(path + ": oscillation constant not finite and positive");
        }
        c1.push_back(o.estimate);
        r.cells.push_back(std::move(cell));
      }
      if (!(max_over_min(c1) <= 4.0)) violations.push_back("C1 varies by more than 4x");
      return finish(std::move(r), vf, violations, start, out, err);
    }

    if (v_sieve->parsed()) {
      VerificationReport r = new_report("sieve", common, vf);
      for (const std::string& path : vf.inputs) {
        const NodeSet nodes = io::node_set_from_json(io::read_json_file(path));
        const int n = sieve_degree.value_or(std::max(nodes.degree, 1));
        const SieveResult s = large_sieve_constant(nodes.domain, nodes.points, n, vf.p,
                                                   vf.trials, common.seed, opt);
        ReportCell cell;
        cell.params = domain_params(nodes.domain);
        cell.params.emplace_back("n", n);
        cell.params.emplace_back("nodes", static_cast<double>(nodes.points.size()));
        cell.stats.emplace_back("ratio", s.per_trial);
        cell.values.emplace_back("constant", s.estimate);
        cell.values.emplace_back("tau", s.tau);
        if (!std::isfinite(s.estimate)) violations.push_back(path + ": constant not finite");
        r.cells.push_back(std::move(cell));
      }
      return finish(std::move(r), vf, violations, start, out, err);
    }

    if (v_maxmin->parsed()) {
      VerificationReport r = new_report("maxmin", common, vf);
      r.grid.emplace_back("beta", vf.beta);
      r.grid.emplace_back("ball_samples", vf.ball_samples);
      r.notes.push_back(kSamplingNote);
      for (const std::string& path : vf.inputs) {
        const NodeSet nodes = io::node_set_from_json(io::read_json_file(path));
        const MaxMinResult m =
            maxmin_equivalence(nodes, nodes.degree, vf.p, vf.beta, vf.trials, common.seed, opt);
        ReportCell cell;
        cell.params = domain_params(nodes.domain);
        cell.params.emplace_back("n", nodes.degree);
        cell.params.emplace_back("delta", nodes.delta);
        cell.stats.emplace_back("max_sum", m.max_sum);
        cell.stats.emplace_back("min_sum", m.min_sum);
        cell.values.emplace_back("ordered", m.ordered ? 1.0 : 0.0);
        if (!m.ordered) violations.push_back(path + ": a min-sum exceeded its max-sum");
        if (!within(m.max_sum, 1.0 / 20.0, 20.0) || !within(m.min_sum, 1.0 / 20.0, 20.0)) {
          violations.push_back(path + ": bracket outside [1/20, 20]");
        }
        r.cells.push_back(std::move(cell));
      }
      return finish(std::move(r), vf, violations, start, out, err);
    }

    if (v_bern->parsed()) {
      VerificationReport r = new_report("bernstein", common, vf);
      r.grid.emplace_back("alpha", bf.alpha);
      r.grid.emplace_back("gamma", bf.weight == "constant" ? 0.0 : bf.gamma);
      r.notes.push_back("weight: " + bf.weight);
      std::vector<double> cs;
      for (int n : bf.degrees) {
        const DoublingWeight w = make_weight(bf.weight, bf.gamma, bf.n_ref.value_or(n));
        const double c = bernstein_check_d1(bf.alpha, n, vf.p, w, vf.trials, common.seed, opt);
        ReportCell cell;
        cell.params = {{"d", 1}, {"alpha", bf.alpha}, {"n", n}};
        if (w.kind() == DoublingWeight::Kind::boundary_power) {
          cell.params.emplace_back("n_ref", w.n_ref());
        }
        cell.values.emplace_back("C", c);
        if (vf.p == 2.0) cell.values.emplace_back("sup", bernstein_sup_d1(bf.alpha, n, w));
        cs.push_back(c);
        r.cells.push_back(std::move(cell));
      }
      if (!(max_over_min(cs) <= 2.0)) violations.push_back("C varies by more than 2x");
      return finish(std::move(r), vf, violations, start, out, err);
    }

    if (v_wmz->parsed()) {
      VerificationReport r = new_report("weighted-mz", common, vf);
      r.grid.emplace_back("gamma", wf.weight == "constant" ? 0.0 : wf.gamma);
      r.grid.emplace_back("ball_samples", vf.ball_samples);
      r.notes.push_back("weight: " + wf.weight);
      r.notes.push_back(kSamplingNote);
      for (const std::string& path : vf.inputs) {
        const NodeSet nodes = io::node_set_from_json(io::read_json_file(path));
        const auto* cap = std::get_if<Cap>(&nodes.domain);
        if (cap == nullptr) throw UsageError("--points: weighted checks need a cap");
        const DoublingWeight w = make_weight(wf.weight, wf.gamma, wf.n_ref.value_or(nodes.degree));
        const WeightedMzResult m =
            weighted_mz(*cap, w, nodes, nodes.degree, vf.p, vf.trials, common.seed, opt);
        ReportCell cell;
        cell.params = domain_params(nodes.domain);
        cell.params.emplace_back("n", nodes.degree);
        cell.params.emplace_back("delta", nodes.delta);
        cell.stats.emplace_back("continuous", m.continuous);
        cell.stats.emplace_back("max_sum", m.max_sum);
        cell.stats.emplace_back("min_sum", m.min_sum);
        if (w.kind() == DoublingWeight::Kind::constant &&
            !(std::abs(m.continuous.min - 1.0) <= 1e-12 &&
              std::abs(m.continuous.max - 1.0) <= 1e-12)) {
          violations.push_back(path + ": constant weight ratio differs from 1");
        }
        for (const auto& [name, s] : cell.stats) {
          if (!within(s, 1.0 / 50.0, 50.0)) {
            violations.push_back(path + ": " + name + " bracket outside [1/50, 50]");
          }
        }
        r.cells.push_back(std::move(cell));
      }
      return finish(std::move(r), vf, violations, start, out, err);
    }

    if (v_cov->parsed()) {
      if (cov_betas.empty()) throw UsageError("--betas needs at least one value");
      VerificationReport r = new_report("cov", common, vf);
      r.grid = {};
      for (const std::string& path : vf.inputs) {
        const NodeSet nodes = io::node_set_from_json(io::read_json_file(path));
        ReportCell cell;
        cell.params = domain_params(nodes.domain);
        cell.params.emplace_back("n", nodes.degree);
        cell.params.emplace_back("delta", nodes.delta);
        const int d = dim(nodes.domain);
        int base = 0;
        for (std::size_t k = 0; k < cov_betas.size(); ++k) {
          const int m = covering_multiplicity(nodes.domain, nodes, cov_betas[k]);
          cell.values.emplace_back("multiplicity_beta_" + io::format_double(cov_betas[k]), m);
          if (k == 0) {
            base = m;
            continue;
          }
          const double growth = static_cast<double>(m) / base;
          const double bound = std::pow(cov_betas[k] / cov_betas[0], d + 2) * 4.0;
          cell.values.emplace_back("growth_beta_" + io::format_double(cov_betas[k]), growth);
          if (!(growth <= bound)) violations.push_back(path + ": covering growth above bound");
        }
        r.cells.push_back(std::move(cell));
      }
      return finish(std::move(r), vf, violations, start, out, err);
    }

    if (v_cv->parsed()) {
      if (cf.d != 1 && cf.d != 2) throw UsageError("--d must be 1 or 2");
      VerificationReport r = new_report("change-of-var", common, vf);
      r.grid = {{"d", cf.d}, {"n", cf.degree}};
      for (double a : cf.alphas) {
        if (!(a >= 0.5 && a <= kMaxCapRadius)) {
          throw UsageError("--alpha values must lie in [1/2, pi - 0.1]");
        }
        const double disc = change_of_variables_check(Cap(SpherePoint::pole(cf.d), a), cf.degree,
                                                      vf.trials, common.seed, opt);
        ReportCell cell;
        cell.params = {{"d", cf.d}, {"alpha", a}, {"n", cf.degree}};
        cell.values.emplace_back("discrepancy", disc);
        if (!(disc <= 1e-9)) violations.push_back("discrepancy above 1e-9 at alpha " + io::format_double(a));
        r.cells.push_back(std::move(cell));
      }
      return finish(std::move(r), vf, violations, start, out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  err << "error: no command given\n";
  return kInvalidInput;
}

}  // namespace capquad::cli
