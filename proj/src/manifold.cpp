#include "crpg/manifold.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace crpg {

std::string to_string(const GeometryTag& tag) {
  const std::string n = std::to_string(tag.dim);
  switch (tag.kind) {
    case GeometryKind::kEuclidean:
      return "R^" + n;
    case GeometryKind::kHyperbolic:
      return "H^" + n;
    case GeometryKind::kSpd:
      return "P(" + n + ")";
  }
  return "unknown";
}

void require_same_geometry(const GeometryTag& a, const GeometryTag& b) {
  if (!(a == b)) {
    throw std::logic_error("geometry mismatch: " + to_string(a) + " vs " + to_string(b));
  }
}

Tangent operator*(double a, const Tangent& x) { return {x.base, a * x.vec}; }

Tangent operator+(const Tangent& x, const Tangent& y) {
  require_same_geometry(x.base.tag, y.base.tag);
  return {x.base, x.vec + y.vec};
}

Tangent operator-(const Tangent& x, const Tangent& y) {
  require_same_geometry(x.base.tag, y.base.tag);
  return {x.base, x.vec - y.vec};
}

Tangent operator-(const Tangent& x) { return {x.base, -x.vec}; }

CurvatureBounds make_curvature_bounds(double kappa_min, double kappa_max) {
  if (!(kappa_min <= kappa_max)) {
    throw std::invalid_argument("curvature bounds require kappa_min <= kappa_max");
  }
  return {kappa_min, kappa_max};
}

double Manifold::norm(const Point& p, const Tangent& x) const {
  return std::sqrt(std::max(0.0, inner(p, x, x)));
}

Tangent Manifold::zero_tangent(const Point& p) const {
  require_tag(p);
  return {p, Eigen::MatrixXd::Zero(p.coords.rows(), p.coords.cols())};
}

void Manifold::require_tag(const Point& p) const { require_same_geometry(tag(), p.tag); }

void Manifold::require_tag(const Tangent& x) const { require_same_geometry(tag(), x.base.tag); }

double s_coth_s(double s) {
  const double a = std::abs(s);
  if (a < kSeriesThreshold) {
    const double s2 = s * s;
    return 1.0 + s2 / 3.0 - s2 * s2 / 45.0;
  }
  return a / std::tanh(a);
}

double zeta1(double kappa_min, double s) {
  if (!(s >= 0.0)) throw std::domain_error("zeta1: s must be nonnegative");
  if (kappa_min >= 0.0) return 1.0;
  return s_coth_s(std::sqrt(-kappa_min) * s);
}

double zeta2(double kappa_max, double s) {
  if (!(s >= 0.0)) throw std::domain_error("zeta2: s must be nonnegative");
  if (kappa_max <= 0.0) return 1.0;
  const double x = std::sqrt(kappa_max) * s;
  if (x >= std::numbers::pi) {
    throw std::domain_error("zeta2: s must be below pi / sqrt(kappa_max)");
  }
  if (x < kSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 - x2 / 3.0 - x2 * x2 / 45.0;
  }
  return x / std::tan(x);
}

CurvatureCoefficients curvature_coefficients(double kappa_min, double kappa_max, double s) {
  make_curvature_bounds(kappa_min, kappa_max);
  CurvatureCoefficients c;
  c.zeta1 = zeta1(kappa_min, s);
  c.zeta2 = zeta2(kappa_max, s);
  c.sigma = std::max(c.zeta1, std::abs(c.zeta2));
  return c;
}

Point geodesic(const Manifold& m, const Point& p, const Point& q, double t) {
  if (t == 0.0) return p;
  return m.exp(p, t * m.log(p, q));
}

}  // namespace crpg
