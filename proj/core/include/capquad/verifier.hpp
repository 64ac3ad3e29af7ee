#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "capquad/cubature.hpp"
#include "capquad/geometry.hpp"
#include "capquad/point_sets.hpp"
#include "capquad/poly_space.hpp"

namespace capquad {

/// Running min / max / mean of a sequence of ratios.
struct RatioStats {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  double mean = 0.0;
  int count = 0;

  void add(double v);
  /// max / min; infinity when min is 0.
  [[nodiscard]] double spread() const;
};

/// Weight on a cap as a function of the boundary distance b_x: either 1 or
/// the smoothed boundary power (b_x + 1/n_ref)^gamma, gamma in [0, 2].
class DoublingWeight {
 public:
  enum class Kind { constant, boundary_power };

  static DoublingWeight constant();
  static DoublingWeight boundary_power(double gamma, double n_ref);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double gamma() const { return gamma_; }
  [[nodiscard]] double n_ref() const { return n_ref_; }

  [[nodiscard]] double operator()(double b) const;
  [[nodiscard]] double at(const Domain& domain, const SpherePoint& x) const;

 private:
  DoublingWeight(Kind kind, double gamma, double n_ref);
  Kind kind_;
  double gamma_;
  double n_ref_;
};

struct VerifyOptions {
  int threads = 1;
  /// Quasi-random points per ball (the center is always added).
  int ball_samples = 64;
};

/// Exponents the verifier is configured for.
[[nodiscard]] bool supported_exponent(double p);

struct MzResult {
  /// sum_w lambda_w |f(w)|^p / int |f|^p over random f in Pi_n.
  RatioStats ratio;
  /// max |ratio - 1| over random f of degree floor(n / p); NaN for odd p.
  double exact_error = std::numeric_limits<double>::quiet_NaN();
};

[[nodiscard]] MzResult mz_bracket(const CubatureRule& rule, double p, int trials,
                                  std::uint64_t seed, const VerifyOptions& options = {});

struct OscResult {
  /// max over trials of (LHS / RHS)^(1/p) / delta.
  double estimate = 0.0;
  RatioStats per_trial;
};

/// Oscillation sum over balls B(w, beta * delta / n) weighted by the
/// computed volumes |B(w, delta / n)|, with delta = n * nodes.epsilon.
[[nodiscard]] OscResult osc_constant(const NodeSet& nodes, int degree, double p, double beta,
                                     int trials, std::uint64_t seed,
                                     const VerifyOptions& options = {});

/// Oscillation sum for one polynomial, relative to int |f|^p, before the
/// 1/p root and the 1/delta scaling.
[[nodiscard]] double osc_ratio(const NodeSet& nodes, const PolyCoeffs& f, double p, double beta,
                               const VerifyOptions& options = {});

struct SieveResult {
  /// max over trials of LHS / (tau * RHS).
  double estimate = 0.0;
  int tau = 0;
  RatioStats per_trial;
};

/// Large sieve check on an arbitrary finite subset of the domain.
[[nodiscard]] SieveResult large_sieve_constant(const Domain& domain,
                                               std::span<const SpherePoint> points, int degree,
                                               double p, int trials, std::uint64_t seed,
                                               const VerifyOptions& options = {});

struct MaxMinResult {
  RatioStats max_sum;
  RatioStats min_sum;
  /// Every trial had max-sum >= min-sum.
  bool ordered = true;
};

/// Sums of max and min of |f|^p over B(w, beta * delta / n) times
/// Delta_{delta/n}(w), each relative to int |f|^p.
[[nodiscard]] MaxMinResult maxmin_equivalence(const NodeSet& nodes, int degree, double p,
                                              double beta, int trials, std::uint64_t seed,
                                              const VerifyOptions& options = {});

/// max over trials of
/// int |T'|^p W (alpha/n + sqrt(alpha^2 - t^2))^p dt / (n^p int |T|^p W dt)
/// on [-alpha, alpha], T a random trigonometric polynomial of degree n.
///
/// T has i.i.d. N(0,1) coefficients in the basis T_k(s), sin(t) T_j(s),
/// k <= n, j < n, with s = cos(t) mapped from [cos alpha, 1] onto [-1, 1].
/// This spans the trigonometric polynomials of degree n, and unlike
/// cos(kt), sin(kt) it stays well conditioned on a short arc.
[[nodiscard]] double bernstein_check_d1(double alpha, int degree, double p,
                                        const DoublingWeight& weight, int trials,
                                        std::uint64_t seed, const VerifyOptions& options = {});

/// Largest value of the p = 2 ratio over all T of degree n: the top
/// generalized eigenvalue of the two quadratic forms.
[[nodiscard]] double bernstein_sup_d1(double alpha, int degree, const DoublingWeight& weight);

/// The same ratio for one trigonometric polynomial, given in the d = 1 basis
/// of PolySpace (t is the signed angle from the cap center).
[[nodiscard]] double bernstein_ratio(double alpha, const PolyCoeffs& t_poly, double p,
                                     const DoublingWeight& weight);

/// Ball average of W over B(x, 1/n).
[[nodiscard]] double compute_Wn(const Domain& domain, const DoublingWeight& weight, int n,
                                const SpherePoint& x);

/// max over probes x on a meridian and radii r = 2^-k, k < radii_levels, of
/// W(B(x, 2r)) / W(B(x, r)).
[[nodiscard]] double estimate_doubling(const Domain& domain, const DoublingWeight& weight,
                                       int radii_levels, int probes);

struct WeightedMzResult {
  /// int |f|^p W / int |f|^p W_n
  RatioStats continuous;
  /// sum max_{B(w, delta/n)} |f|^p W(B(w, delta/n)) / int |f|^p W
  RatioStats max_sum;
  /// the same with the ball minimum
  RatioStats min_sum;
};

[[nodiscard]] WeightedMzResult weighted_mz(const Cap& cap, const DoublingWeight& weight,
                                           const NodeSet& nodes, int degree, double p,
                                           int trials, std::uint64_t seed,
                                           const VerifyOptions& options = {});

/// max over random f in Pi_n of |LHS - RHS| / (1 + |LHS|) for the dilation
/// identity int_{B(e,a)} f = 8 int_{B(e,a/8)} f(Tx) D(x.e).
[[nodiscard]] double change_of_variables_check(const Cap& cap, int degree, int trials,
                                               std::uint64_t seed,
                                               const VerifyOptions& options = {});

/// Named parameters and statistics of one grid cell.
struct ReportCell {
  std::vector<std::pair<std::string, double>> params;
  std::vector<std::pair<std::string, RatioStats>> stats;
  std::vector<std::pair<std::string, double>> values;
};

/// Outcome of one verification run.
struct VerificationReport {
  std::string inequality;
  std::vector<std::pair<std::string, double>> grid;
  std::vector<ReportCell> cells;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
  /// Only recorded on request; it would break byte reproducibility.
  std::optional<double> wall_time;
};

}  // namespace capquad
