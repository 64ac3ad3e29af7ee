#include "capquad/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "capquad/gauss_legendre.hpp"
#include "capquad/poly_space.hpp"

namespace capquad {

namespace {

constexpr double kPi = std::numbers::pi;

int rule_dim(const RuleDomain& domain) {
  return std::visit(
      [](const auto& d) -> int {
        if constexpr (std::is_same_v<std::decay_t<decltype(d)>, FullSphere>) {
          return d.dim;
        } else {
          return d.dim();
        }
      },
      domain);
}

CenterFrame rule_frame(const RuleDomain& domain) {
  if (const auto* cap = std::get_if<Cap>(&domain)) return cap->frame();
  if (const auto* collar = std::get_if<Collar>(&domain)) return collar->frame();
  return CenterFrame(SpherePoint::pole(std::get<FullSphere>(domain).dim));
}

// Gauss-Legendre order per half arc for trigonometric degree n on [0, alpha].
int arc_order(int n, double alpha) {
  return n / 2 + static_cast<int>(std::ceil(0.5 * alpha * n)) + 8;
}

}  // namespace

ProductRule::ProductRule(RuleDomain domain, int degree, PolarVariable variable)
    : domain_(std::move(domain)), frame_(rule_frame(domain_)), dim_(rule_dim(domain_)),
      degree_(degree) {
  if (degree < 0 || degree > kMaxRuleDegree) {
    throw std::invalid_argument("rule degree must lie in [0, " +
                                std::to_string(kMaxRuleDegree) + "], got " +
                                std::to_string(degree));
  }
  if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("rules exist for d in {1, 2}");

  std::vector<double> x, w;
  if (dim_ == 1) {
    if (const auto* cap = std::get_if<Cap>(&domain_)) {
      // Composite rule split at the center, where b_x has its kink.
      const int k = arc_order(degree, cap->alpha());
      gauss_legendre_on(k, -cap->alpha(), 0.0, x, w);
      polar_angles_ = x;
      row_weights_ = w;
      gauss_legendre_on(k, 0.0, cap->alpha(), x, w);
      polar_angles_.insert(polar_angles_.end(), x.begin(), x.end());
      row_weights_.insert(row_weights_.end(), w.begin(), w.end());
    } else if (std::holds_alternative<FullSphere>(domain_)) {
      const int m = 2 * degree + 1;
      for (int j = 0; j < m; ++j) {
        polar_angles_.push_back(-kPi + 2.0 * kPi * j / m);
        row_weights_.push_back(2.0 * kPi / m);
      }
    } else {
      throw std::invalid_argument("collars are supported on S^2 only");
    }
    for (double th : polar_angles_) nodes_.push_back(frame_.from_polar(th));
    weights_ = row_weights_;
    return;
  }

  double theta_lo = 0.0, theta_hi = kPi;
  if (const auto* cap = std::get_if<Cap>(&domain_)) {
    theta_hi = cap->alpha();
  } else if (const auto* collar = std::get_if<Collar>(&domain_)) {
    theta_lo = collar->alpha();
    theta_hi = collar->beta();
  }
  azimuth_count_ = 2 * degree + 1;
  const int polar_order = degree + 2;
  const double az_weight = 2.0 * kPi / azimuth_count_;
  if (variable == PolarVariable::cos_theta) {
    gauss_legendre_on(polar_order, std::cos(theta_hi), std::cos(theta_lo), x, w);
    for (int i = polar_order - 1; i >= 0; --i) {
      polar_angles_.push_back(std::acos(std::clamp(x[i], -1.0, 1.0)));
      row_weights_.push_back(w[i] * az_weight);
    }
  } else {
    gauss_legendre_on(polar_order, theta_lo, theta_hi, x, w);
    for (int i = 0; i < polar_order; ++i) {
      polar_angles_.push_back(x[i]);
      row_weights_.push_back(w[i] * std::sin(x[i]) * az_weight);
    }
  }
  nodes_.reserve(polar_angles_.size() * azimuth_count_);
  weights_.reserve(polar_angles_.size() * azimuth_count_);
  for (std::size_t i = 0; i < polar_angles_.size(); ++i) {
    for (int j = 0; j < azimuth_count_; ++j) {
      nodes_.push_back(frame_.from_polar(polar_angles_[i], 2.0 * kPi * j / azimuth_count_));
      weights_.push_back(row_weights_[i]);
    }
  }
}

RuleDomain to_rule_domain(const Domain& domain) {
  return std::visit([](const auto& d) -> RuleDomain { return d; }, domain);
}

ProductRule build_rule(const RuleDomain& domain, int degree) {
  return ProductRule(domain, degree, PolarVariable::cos_theta);
}

double integrate(const ProductRule& rule, const Integrand& f) {
  double sum = 0.0;
  const auto& nodes = rule.nodes();
  const auto& weights = rule.weights();
  for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * f(nodes[k]);
  return sum;
}

double integrate_values(const ProductRule& rule, std::span<const double> values) {
  if (values.size() != rule.size()) {
    throw std::invalid_argument("value count does not match the rule size");
  }
  double sum = 0.0;
  const auto& weights = rule.weights();
  for (std::size_t k = 0; k < values.size(); ++k) sum += weights[k] * values[k];
  return sum;
}

NonConvergence::NonConvergence(double last_estimate, double previous_estimate)
    : std::runtime_error([&] {
        std::ostringstream os;
        os.precision(17);
        os << "adaptive integration did not converge by degree " << kMaxRuleDegree
           << " (last estimates " << previous_estimate << ", " << last_estimate << ")";
        return os.str();
      }()),
      last(last_estimate),
      previous(previous_estimate) {}

double integrate_adaptive(const Domain& domain, const Integrand& f, double tol,
                          int start_degree) {
  if (!(tol >= 1e-10)) throw std::invalid_argument("adaptive tolerance must be >= 1e-10");
  int degree = std::clamp(start_degree, 1, kMaxRuleDegree / 2);
  const RuleDomain rd = to_rule_domain(domain);
  double previous = integrate(ProductRule(rd, degree, PolarVariable::theta), f);
  for (;;) {
    degree = std::min(2 * degree, kMaxRuleDegree);
    const double current = integrate(ProductRule(rd, degree, PolarVariable::theta), f);
    if (std::abs(current - previous) <= tol * std::abs(current)) return current;
    if (degree == kMaxRuleDegree) throw NonConvergence(current, previous);
    previous = current;
  }
}

std::vector<double> cap_moments(const Cap& cap, int n) {
  return domain_moments(Domain(cap), n);
}

std::vector<double> domain_moments(const Domain& domain, int n) {
  if (n < 0) throw std::invalid_argument("moment degree must be >= 0");
  const PolySpace space(dim(domain), n);
  std::vector<double> m(dim(space), 0.0);
  if (dim(domain) == 1) {
    const double a = std::get<Cap>(domain).alpha();
    m[0] = 2.0 * a / std::sqrt(2.0 * kPi);
    for (int k = 1; k <= n; ++k) {
      m[2 * k - 1] = 2.0 * std::sin(k * a) / (k * std::sqrt(kPi));
    }
    return m;
  }
  // integral_x^1 P_l(t) dt = (P_{l-1}(x) - P_{l+1}(x)) / (2l + 1), l >= 1.
  auto tail = [n](double x) {
    const std::vector<double> p = legendre_values(n + 1, x);
    std::vector<double> g(n + 1);
    g[0] = 1.0 - x;
    for (int l = 1; l <= n; ++l) g[l] = (p[l - 1] - p[l + 1]) / (2.0 * l + 1.0);
    return g;
  };
  std::vector<double> g;
  if (const auto* cap = std::get_if<Cap>(&domain)) {
    g = tail(std::cos(cap->alpha()));
  } else {
    const auto& collar = std::get<Collar>(domain);
    const std::vector<double> inner = tail(std::cos(collar.alpha()));
    g = tail(std::cos(collar.beta()));
    for (int l = 0; l <= n; ++l) g[l] -= inner[l];
  }
  for (int l = 0; l <= n; ++l) {
    m[PolySpace::sh_index(l, 0)] =
        2.0 * kPi * std::sqrt((2.0 * l + 1.0) / (4.0 * kPi)) * g[l];
  }
  return m;
}

}  // namespace capquad
