#pragma once

#include "crpg/manifold.hpp"

namespace crpg {

/// Flat R^n with the standard inner product. Used as the zero-curvature
/// reference for the inequality checks.
class EuclideanSpace final : public Manifold {
 public:
  explicit EuclideanSpace(int n);

  GeometryTag tag() const override { return {GeometryKind::kEuclidean, n_}; }
  CurvatureBounds curvature() const override { return {0.0, 0.0}; }

  double inner(const Point& p, const Tangent& x, const Tangent& y) const override;
  double dist(const Point& p, const Point& q) const override;
  Point exp(const Point& p, const Tangent& x) const override;
  Tangent log(const Point& p, const Point& q) const override;

  bool contains(const Point& p, double tol = kMembershipTol) const override;
  bool is_tangent(const Point& p, const Tangent& x, double tol = kMembershipTol) const override;

  Point random_point(Rng& rng) const override;
  Tangent random_tangent(const Point& p, Rng& rng) const override;

  Point point(const Eigen::VectorXd& v) const;

 private:
  int n_;
};

}  // namespace crpg
