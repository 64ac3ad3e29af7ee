#include "capquad/poly_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace capquad {

namespace {

constexpr double kPi = std::numbers::pi;

// Fully normalized associated Legendre functions
// Q_l^m(t) = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(t), stored at sh_index(l, m)
// for m >= 0. The normalization is folded into the recurrence so nothing
// overflows at high degree.
void normalized_legendre(int n, double t, double s, std::span<double> q) {
  q[0] = 1.0 / std::sqrt(4.0 * kPi);
  double qmm = q[0];
  for (int m = 0; m <= n; ++m) {
    if (m > 0) {
      qmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
      q[PolySpace::sh_index(m, m)] = qmm;
    }
    if (m + 1 <= n) q[PolySpace::sh_index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * t * qmm;
    for (int l = m + 2; l <= n; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - m * m));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - m * m) /
                                 (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      q[PolySpace::sh_index(l, m)] =
          a * (t * q[PolySpace::sh_index(l - 1, m)] - b * q[PolySpace::sh_index(l - 2, m)]);
    }
  }
}

void eval_circle(int n, double c, double s, std::span<double> out) {
  const double c0 = 1.0 / std::sqrt(2.0 * kPi);
  const double ck = 1.0 / std::sqrt(kPi);
  out[0] = c0;
  double cm = 1.0, sm = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double cn = cm * c - sm * s;
    const double sn = sm * c + cm * s;
    cm = cn;
    sm = sn;
    out[2 * k - 1] = ck * cm;
    out[2 * k] = ck * sm;
  }
}

void eval_sphere(int n, const SpherePoint& x, std::span<double> out) {
  const double t = x[2];
  const double s = std::hypot(x[0], x[1]);
  normalized_legendre(n, t, s, out);
  // out now holds Q_l^m at the m >= 0 slots; fill the real harmonics in place,
  // walking m downward so each Q_l^m is read before its slot is overwritten.
  double cphi = 1.0, sphi = 0.0;
  if (s > 0.0) {
    cphi = x[0] / s;
    sphi = x[1] / s;
  }
  std::vector<double> cosm(n + 1), sinm(n + 1);
  cosm[0] = 1.0;
  sinm[0] = 0.0;
  for (int m = 1; m <= n; ++m) {
    cosm[m] = cosm[m - 1] * cphi - sinm[m - 1] * sphi;
    sinm[m] = sinm[m - 1] * cphi + cosm[m - 1] * sphi;
  }
  for (int l = 0; l <= n; ++l) {
    for (int m = l; m >= 1; --m) {
      const double q = std::numbers::sqrt2 * out[PolySpace::sh_index(l, m)];
      out[PolySpace::sh_index(l, m)] = q * cosm[m];
      out[PolySpace::sh_index(l, -m)] = q * sinm[m];
    }
  }
}

}  // namespace

PolySpace::PolySpace(int dim_sphere, int degree) : dim_sphere_(dim_sphere), degree_(degree) {
  if (dim_sphere != 1 && dim_sphere != 2) {
    throw std::invalid_argument("polynomial spaces exist for d in {1, 2}, got d = " +
                                std::to_string(dim_sphere));
  }
  if (degree < 0) throw std::invalid_argument("polynomial degree must be >= 0");
}

std::size_t PolySpace::size() const {
  const auto n = static_cast<std::size_t>(degree_);
  return dim_sphere_ == 1 ? 2 * n + 1 : (n + 1) * (n + 1);
}

std::size_t dim(const PolySpace& space) { return space.size(); }

void eval_basis_into(const PolySpace& space, const SpherePoint& x, std::span<double> out) {
  if (x.dim() != space.dim_sphere()) {
    throw std::invalid_argument("point dimension does not match the polynomial space");
  }
  if (out.size() < space.size()) throw std::invalid_argument("basis output buffer too small");
  if (space.dim_sphere() == 1) {
    eval_circle(space.degree(), x[1], x[0], out);
  } else {
    eval_sphere(space.degree(), x, out);
  }
}

std::vector<double> eval_basis(const PolySpace& space, const SpherePoint& x) {
  std::vector<double> out(space.size());
  eval_basis_into(space, x, out);
  return out;
}

Eigen::MatrixXd basis_matrix(const PolySpace& space, std::span<const SpherePoint> points) {
  Eigen::MatrixXd b(static_cast<Eigen::Index>(points.size()),
                    static_cast<Eigen::Index>(space.size()));
  std::vector<double> row(space.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    eval_basis_into(space, points[i], row);
    for (std::size_t k = 0; k < row.size(); ++k) {
      b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k];
    }
  }
  return b;
}

PolyCoeffs::PolyCoeffs(PolySpace space, std::vector<double> coeffs)
    : space_(space), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != space_.size()) {
    throw std::invalid_argument("coefficient count " + std::to_string(coeffs_.size()) +
                                " does not match dim = " + std::to_string(space_.size()));
  }
}

double eval_poly(const PolyCoeffs& p, const SpherePoint& x) {
  thread_local std::vector<double> basis;
  basis.resize(p.space().size());
  eval_basis_into(p.space(), x, basis);
  double sum = 0.0;
  for (std::size_t k = 0; k < basis.size(); ++k) sum += p.coeffs()[k] * basis[k];
  return sum;
}

std::vector<double> evaluate_on_rule(const PolyCoeffs& p, const ProductRule& rule) {
  const PolySpace& space = p.space();
  if (space.dim_sphere() != rule.dim()) {
    throw std::invalid_argument("rule dimension does not match the polynomial space");
  }
  std::vector<double> values(rule.size());
  if (space.dim_sphere() == 1 || !rule.frame().is_identity()) {
    for (std::size_t k = 0; k < rule.size(); ++k) values[k] = eval_poly(p, rule.nodes()[k]);
    return values;
  }
  // Tensor synthesis: per polar row collapse the l-sums, then sum over m.
  const int n = space.degree();
  const int naz = rule.azimuth_count();
  std::vector<double> cosm(static_cast<std::size_t>(naz) * (n + 1));
  std::vector<double> sinm(cosm.size());
  for (int j = 0; j < naz; ++j) {
    const double phi = 2.0 * kPi * j / naz;
    for (int m = 0; m <= n; ++m) {
      cosm[static_cast<std::size_t>(j) * (n + 1) + m] = std::cos(m * phi);
      sinm[static_cast<std::size_t>(j) * (n + 1) + m] = std::sin(m * phi);
    }
  }
  std::vector<double> q(space.size()), a(n + 1), b(n + 1);
  const auto& c = p.coeffs();
  for (std::size_t i = 0; i < rule.polar_angles().size(); ++i) {
    const double theta = rule.polar_angles()[i];
    normalized_legendre(n, std::cos(theta), std::sin(theta), q);
    for (int m = 0; m <= n; ++m) {
      double am = 0.0, bm = 0.0;
      for (int l = m; l <= n; ++l) {
        const double qlm = q[PolySpace::sh_index(l, m)];
        am += c[PolySpace::sh_index(l, m)] * qlm;
        if (m > 0) bm += c[PolySpace::sh_index(l, -m)] * qlm;
      }
      a[m] = m == 0 ? am : std::numbers::sqrt2 * am;
      b[m] = std::numbers::sqrt2 * bm;
    }
    for (int j = 0; j < naz; ++j) {
      const double* cj = &cosm[static_cast<std::size_t>(j) * (n + 1)];
      const double* sj = &sinm[static_cast<std::size_t>(j) * (n + 1)];
      double v = a[0];
      for (int m = 1; m <= n; ++m) v += a[m] * cj[m] + b[m] * sj[m];
      values[i * naz + j] = v;
    }
  }
  return values;
}

PolyCoeffs random_polynomial(const PolySpace& space, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(space.size());
  for (double& v : c) v = normal(gen);
  return PolyCoeffs(space, std::move(c));
}

Projection project_onto(const PolySpace& space, const Integrand& f) {
  const int rule_degree = 2 * space.degree() + 2;
  if (rule_degree > kMaxRuleDegree) {
    throw std::invalid_argument("projection degree exceeds the quadrature cap");
  }
  const ProductRule rule = build_rule(FullSphere{space.dim_sphere()}, rule_degree);
  const std::span<const SpherePoint> nodes = rule.nodes();
  const std::size_t count = nodes.size();
  std::vector<double> fv(count);
  for (std::size_t k = 0; k < count; ++k) fv[k] = f(nodes[k]);

  // The basis matrix is formed in row blocks so high degrees stay within memory.
  constexpr std::size_t kBlock = 2048;
  auto block = [&](std::size_t start) {
    return basis_matrix(space, nodes.subspan(start, std::min(kBlock, count - start)));
  };
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim(space)));
  for (std::size_t start = 0; start < count; start += kBlock) {
    const Eigen::MatrixXd b = block(start);
    Eigen::VectorXd fw(b.rows());
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      const std::size_t k = start + static_cast<std::size_t>(i);
      fw(i) = fv[k] * rule.weights()[k];
    }
    coeffs.noalias() += b.transpose() * fw;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t start = 0; start < count; start += kBlock) {
    const Eigen::VectorXd approx = block(start) * coeffs;
    for (Eigen::Index i = 0; i < approx.size(); ++i) {
      const std::size_t k = start + static_cast<std::size_t>(i);
      const double diff = fv[k] - approx(i);
      num += rule.weights()[k] * diff * diff;
      den += rule.weights()[k] * fv[k] * fv[k];
    }
  }
  const double residual = den > 0.0 ? std::sqrt(num / den) : 0.0;
  return {PolyCoeffs(space, std::vector<double>(coeffs.data(), coeffs.data() + coeffs.size())),
          residual};
}

Integrand compose_with_T(const PolyCoeffs& p, const SpherePoint& e, TExtent extent) {
  if (e.dim() != p.space().dim_sphere()) {
    throw std::invalid_argument("center dimension does not match the polynomial space");
  }
  const bool whole = extent == TExtent::whole_sphere;
  return [p, e, whole](const SpherePoint& x) { return eval_poly(p, map_T(x, e, whole)); };
}

}  // namespace capquad
