#include "crpg/spd.hpp"

#include <cmath>
#include <stdexcept>

namespace crpg {

namespace {

constexpr double kConditionFloor = 1e-12;
constexpr double kMaxSampleDistance = 2.0;

bool is_symmetric(const Eigen::MatrixXd& a, double tol) {
  return (a - a.transpose()).norm() <= tol * std::max(1.0, a.norm());
}

}  // namespace

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

Eigen::MatrixXd apply_symmetric(const Eigen::MatrixXd& a,
                                const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrize(a));
  const Eigen::VectorXd fd = eig.eigenvalues().unaryExpr(f);
  return symmetrize(eig.eigenvectors() * fd.asDiagonal() * eig.eigenvectors().transpose());
}

SpdMatrices::SpdMatrices(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("SpdMatrices: dimension must be positive");
}

SpdMatrices::Roots SpdMatrices::roots(const Point& p) const {
  require_tag(p);
  if (p.coords.rows() != n_ || p.coords.cols() != n_ || !p.coords.allFinite() ||
      !is_symmetric(p.coords, kMembershipTol)) {
    throw std::domain_error("SpdMatrices: point is not a symmetric " + std::to_string(n_) +
                            "x" + std::to_string(n_) + " matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrize(p.coords));
  const Eigen::VectorXd& d = eig.eigenvalues();
  if (!(d(0) > kConditionFloor * d(n_ - 1))) {
    throw std::domain_error("SpdMatrices: point is not positive definite");
  }
  const Eigen::MatrixXd& v = eig.eigenvectors();
  const Eigen::VectorXd s = d.cwiseSqrt();
  return {symmetrize(v * s.asDiagonal() * v.transpose()),
          symmetrize(v * s.cwiseInverse().asDiagonal() * v.transpose())};
}

double SpdMatrices::inner(const Point& p, const Tangent& x, const Tangent& y) const {
  require_tag(x);
  require_tag(y);
  const Roots r = roots(p);
  const Eigen::MatrixXd a = r.inv_sqrt * x.vec * r.inv_sqrt;
  const Eigen::MatrixXd b = r.inv_sqrt * y.vec * r.inv_sqrt;
  return a.cwiseProduct(b.transpose()).sum();
}

double SpdMatrices::dist(const Point& p, const Point& q) const {
  const Roots r = roots(p);
  roots(q);
  const Eigen::MatrixXd m = symmetrize(r.inv_sqrt * q.coords * r.inv_sqrt);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().array().log().matrix().norm();
}

Point SpdMatrices::exp(const Point& p, const Tangent& x) const {
  require_tag(x);
  if (!is_tangent(p, x)) throw std::domain_error("SpdMatrices exp: tangent is not symmetric");
  const Roots r = roots(p);
  const Eigen::MatrixXd w = symmetrize(r.inv_sqrt * symmetrize(x.vec) * r.inv_sqrt);
  const Eigen::MatrixXd e = apply_symmetric(w, [](double v) { return std::exp(v); });
  return {p.tag, symmetrize(r.sqrt * e * r.sqrt)};
}

Tangent SpdMatrices::log(const Point& p, const Point& q) const {
  const Roots r = roots(p);
  roots(q);
  const Eigen::MatrixXd m = symmetrize(r.inv_sqrt * q.coords * r.inv_sqrt);
  const Eigen::MatrixXd l = apply_symmetric(m, [](double v) { return std::log(v); });
  return {p, symmetrize(r.sqrt * l * r.sqrt)};
}

bool SpdMatrices::contains(const Point& p, double tol) const {
  if (!(p.tag == tag()) || p.coords.rows() != n_ || p.coords.cols() != n_) return false;
  if (!p.coords.allFinite() || !is_symmetric(p.coords, tol)) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrize(p.coords),
                                                     Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& d = eig.eigenvalues();
  return d(0) > kConditionFloor * d(n_ - 1);
}

bool SpdMatrices::is_tangent(const Point& /*p*/, const Tangent& x, double tol) const {
  return x.base.tag == tag() && x.vec.rows() == n_ && x.vec.cols() == n_ &&
         x.vec.allFinite() && is_symmetric(x.vec, tol);
}

Point SpdMatrices::random_point(Rng& rng) const {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) g(i, j) = normal(rng);
  Eigen::MatrixXd x = symmetrize(g);
  // At the identity the metric is the Frobenius one.
  const double len = x.norm();
  if (len > kMaxSampleDistance) x *= kMaxSampleDistance / len;
  const Point eye = identity();
  return exp(eye, {eye, x});
}

Tangent SpdMatrices::random_tangent(const Point& p, Rng& rng) const {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) g(i, j) = normal(rng);
  const Roots r = roots(p);
  return {p, symmetrize(r.sqrt * symmetrize(g) * r.sqrt)};
}

Point SpdMatrices::identity() const { return {tag(), Eigen::MatrixXd::Identity(n_, n_)}; }

Point SpdMatrices::point(const Eigen::MatrixXd& a) const {
  Point p{tag(), a};
  roots(p);
  p.coords = symmetrize(a);
  return p;
}

Tangent SpdMatrices::tangent(const Point& p, const Eigen::MatrixXd& x) const {
  require_tag(p);
  Tangent t{p, x};
  if (!is_tangent(p, t)) throw std::domain_error("SpdMatrices: tangent is not symmetric");
  t.vec = symmetrize(x);
  return t;
}

}  // namespace crpg
