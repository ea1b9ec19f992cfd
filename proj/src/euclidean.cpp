#include "crpg/euclidean.hpp"

#include <stdexcept>

namespace crpg {

EuclideanSpace::EuclideanSpace(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("EuclideanSpace: dimension must be positive");
}

double EuclideanSpace::inner(const Point& p, const Tangent& x, const Tangent& y) const {
  require_tag(p);
  require_tag(x);
  require_tag(y);
  return x.vec.cwiseProduct(y.vec).sum();
}

double EuclideanSpace::dist(const Point& p, const Point& q) const {
  require_tag(p);
  require_tag(q);
  return (p.coords - q.coords).norm();
}

Point EuclideanSpace::exp(const Point& p, const Tangent& x) const {
  require_tag(p);
  require_tag(x);
  return {p.tag, p.coords + x.vec};
}

Tangent EuclideanSpace::log(const Point& p, const Point& q) const {
  require_tag(p);
  require_tag(q);
  return {p, q.coords - p.coords};
}

bool EuclideanSpace::contains(const Point& p, double /*tol*/) const {
  return p.tag == tag() && p.coords.rows() == n_ && p.coords.cols() == 1 &&
         p.coords.allFinite();
}

bool EuclideanSpace::is_tangent(const Point& p, const Tangent& x, double /*tol*/) const {
  return contains(p) && x.base.tag == tag() && x.vec.rows() == n_ && x.vec.cols() == 1;
}

Point EuclideanSpace::random_point(Rng& rng) const {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n_);
  for (int i = 0; i < n_; ++i) v(i) = normal(rng);
  return point(v);
}

Tangent EuclideanSpace::random_tangent(const Point& p, Rng& rng) const {
  require_tag(p);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n_);
  for (int i = 0; i < n_; ++i) v(i) = normal(rng);
  return {p, v};
}

Point EuclideanSpace::point(const Eigen::VectorXd& v) const {
  if (v.size() != n_) throw std::invalid_argument("EuclideanSpace: dimension mismatch");
  return {tag(), v};
}

}  // namespace crpg
