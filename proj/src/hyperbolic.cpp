#include "crpg/hyperbolic.hpp"

#include <cmath>
#include <stdexcept>

namespace crpg {

namespace {

// Beyond this value of -<x,y>_M arccosh is well conditioned.
constexpr double kAcoshSwitch = 1.5;

// r / sinh(r)
double inv_sinhc(double r) {
  if (std::abs(r) < kSeriesThreshold) {
    const double r2 = r * r;
    return 1.0 - r2 / 6.0 + 7.0 * r2 * r2 / 360.0;
  }
  return r / std::sinh(r);
}

double cosh_series(double r) {
  if (std::abs(r) < kSeriesThreshold) {
    const double r2 = r * r;
    return 1.0 + r2 / 2.0 + r2 * r2 / 24.0;
  }
  return std::cosh(r);
}

// Compensated dot product (Ogita, Rump and Oishi): products and sums are
// split into value and rounding error with fma, so the result is as accurate
// as if computed in twice the working precision. Points far from the apex
// otherwise lose most digits to cancellation.
double mink(const Eigen::Ref<const Eigen::VectorXd>& x,
            const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Eigen::Index n = x.size() - 1;
  double sum = 0.0;
  double err = 0.0;
  for (Eigen::Index i = 0; i <= n; ++i) {
    const double a = i == n ? -x(i) : x(i);
    const double prod = a * y(i);
    const double prod_err = std::fma(a, y(i), -prod);
    const double t = sum + prod;
    const double z = t - sum;
    err += (sum - (t - z)) + (prod - z) + prod_err;
    sum = t;
  }
  return sum + err;
}

}  // namespace

double sinhc(double r) {
  if (std::abs(r) < kSeriesThreshold) {
    const double r2 = r * r;
    return 1.0 + r2 / 6.0 + r2 * r2 / 120.0;
  }
  return std::sinh(r) / r;
}

double minkowski_inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("minkowski_inner: dimension mismatch");
  }
  return mink(x, y);
}

HyperbolicSpace::HyperbolicSpace(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("HyperbolicSpace: dimension must be positive");
}

double HyperbolicSpace::inner(const Point& p, const Tangent& x, const Tangent& y) const {
  require_tag(p);
  require_tag(x);
  require_tag(y);
  return mink(x.vec.col(0), y.vec.col(0));
}

double HyperbolicSpace::dist(const Point& p, const Point& q) const {
  require_tag(p);
  require_tag(q);
  const auto x = p.coords.col(0);
  const auto y = q.coords.col(0);
  const double s = -mink(x, y);
  if (s > kAcoshSwitch) return std::acosh(s);
  const Eigen::VectorXd w = x - y;
  const double m = std::max(0.0, mink(w, w));
  return 2.0 * std::asinh(0.5 * std::sqrt(m));
}

Point HyperbolicSpace::exp(const Point& p, const Tangent& v) const {
  require_tag(p);
  require_tag(v);
  if (!is_tangent(p, v)) throw std::domain_error("hyperbolic exp: vector is not tangent");
  const auto x = p.coords.col(0).head(n_);
  const auto u = v.vec.col(0).head(n_);
  // Everything below uses spatial coordinates only. The tangent at x with
  // spatial part u has <u,u>_M = (|u|^2 + sum_{i<j} (x_i u_j - x_j u_i)^2) / (1 + |x|^2),
  // a sum of nonnegative terms; the direct Minkowski form cancels badly far
  // from the apex.
  double cross = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      const double c = x(i) * u(j) - x(j) * u(i);
      cross += c * c;
    }
  }
  const double r = std::sqrt((u.squaredNorm() + cross) / (1.0 + x.squaredNorm()));
  Eigen::VectorXd y(n_ + 1);
  y.head(n_) = cosh_series(r) * x + sinhc(r) * u;
  y(n_) = std::sqrt(1.0 + y.head(n_).squaredNorm());
  return {p.tag, y};
}

Tangent HyperbolicSpace::log(const Point& p, const Point& q) const {
  require_tag(p);
  require_tag(q);
  const auto x = p.coords.col(0);
  const auto y = q.coords.col(0);
  const Eigen::VectorXd w = y - x;
  const double s = -mink(x, y);
  // s - 1 evaluated without cancellation for nearby points.
  const double s_minus_one = s > kAcoshSwitch ? s - 1.0 : 0.5 * std::max(0.0, mink(w, w));
  const double d = dist(p, q);
  // Spatial part of y + <x,y>_M x == w - (s - 1) x; the time part follows
  // from tangency.
  Eigen::VectorXd u(n_ + 1);
  u.head(n_) = w.head(n_) - s_minus_one * x.head(n_);
  u(n_) = x.head(n_).dot(u.head(n_)) / x(n_);
  return {p, inv_sinhc(d) * u};
}

bool HyperbolicSpace::contains(const Point& p, double tol) const {
  if (!(p.tag == tag()) || p.coords.rows() != n_ + 1 || p.coords.cols() != 1) return false;
  const auto x = p.coords.col(0);
  if (!x.allFinite() || x(n_) <= 0.0) return false;
  return std::abs(mink(x, x) + 1.0) <= tol * std::max(1.0, x(n_) * x(n_));
}

bool HyperbolicSpace::is_tangent(const Point& p, const Tangent& v, double tol) const {
  if (!(v.base.tag == tag()) || v.vec.rows() != n_ + 1 || v.vec.cols() != 1) return false;
  const auto x = p.coords.col(0);
  const auto u = v.vec.col(0);
  return std::abs(mink(x, u)) <= tol * std::max(1.0, x.norm() * u.norm());
}

Point HyperbolicSpace::random_point(Rng& rng) const { return sample_gaussian(apex(), 1.0, rng); }

Tangent HyperbolicSpace::random_tangent(const Point& p, Rng& rng) const {
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(n_ + 1);
  for (int i = 0; i <= n_; ++i) z(i) = normal(rng);
  return project_tangent(p, z);
}

Tangent HyperbolicSpace::project_tangent(const Point& x, const Eigen::VectorXd& z) const {
  require_tag(x);
  if (z.size() != n_ + 1) throw std::invalid_argument("project_tangent: dimension mismatch");
  const auto xc = x.coords.col(0);
  return {x, z + mink(xc, z) * xc};
}

Point HyperbolicSpace::sample_gaussian(const Point& anchor, double stddev, Rng& rng) const {
  if (!(stddev > 0.0)) throw std::invalid_argument("sample_gaussian: stddev must be positive");
  std::normal_distribution<double> normal(0.0, stddev);
  Eigen::VectorXd z(n_ + 1);
  for (int i = 0; i <= n_; ++i) z(i) = normal(rng);
  return exp(anchor, project_tangent(anchor, z));
}

Point HyperbolicSpace::apex() const {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n_ + 1);
  a(n_) = 1.0;
  return {tag(), a};
}

Point HyperbolicSpace::point(const Eigen::VectorXd& coords) const {
  Point p{tag(), coords};
  if (!contains(p)) throw std::domain_error("HyperbolicSpace: coordinates are off the hyperboloid");
  return p;
}

Point HyperbolicSpace::normalize(const Eigen::VectorXd& v) const {
  if (v.size() != n_ + 1) throw std::invalid_argument("normalize: dimension mismatch");
  const double m = mink(v, v);
  if (!(m < 0.0) || !(v(n_) > 0.0)) {
    throw std::domain_error("normalize: vector is not in the future timelike cone");
  }
  return {tag(), v / std::sqrt(-m)};
}

}  // namespace crpg
