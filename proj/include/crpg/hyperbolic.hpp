#pragma once

#include "crpg/manifold.hpp"

namespace crpg {

/// Minkowski pseudo inner product sum_{i<=n} x_i y_i - x_{n+1} y_{n+1}.
/// Throws std::invalid_argument on length mismatch.
double minkowski_inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// sinh(r) / r with its series near zero.
double sinhc(double r);

/// Hyperboloid model of H^n: points x in R^{n+1} with <x,x>_M = -1 and
/// x_{n+1} > 0. Constant sectional curvature -1.
///
/// Distances use arccosh(-<x,y>_M) for well separated points and the
/// equivalent 2 asinh(|x - y|_M / 2) for nearby ones; the latter keeps
/// resolution below sqrt(machine epsilon).
class HyperbolicSpace final : public Manifold {
 public:
  explicit HyperbolicSpace(int n);

  int n() const { return n_; }

  GeometryTag tag() const override { return {GeometryKind::kHyperbolic, n_}; }
  CurvatureBounds curvature() const override { return {-1.0, -1.0}; }

  double inner(const Point& p, const Tangent& x, const Tangent& y) const override;
  double dist(const Point& p, const Point& q) const override;
  Point exp(const Point& p, const Tangent& v) const override;
  Tangent log(const Point& p, const Point& q) const override;

  bool contains(const Point& p, double tol = kMembershipTol) const override;
  bool is_tangent(const Point& p, const Tangent& v, double tol = kMembershipTol) const override;

  /// Gaussian tangent of standard deviation 1 at the apex, mapped by exp.
  Point random_point(Rng& rng) const override;
  Tangent random_tangent(const Point& p, Rng& rng) const override;

  /// z + <x,z>_M x.
  Tangent project_tangent(const Point& x, const Eigen::VectorXd& z) const;

  /// Draws n+1 normal coordinates with the given standard deviation,
  /// projects them onto the tangent space at `anchor` and applies exp.
  Point sample_gaussian(const Point& anchor, double stddev, Rng& rng) const;

  /// (0, ..., 0, 1).
  Point apex() const;

  /// Wraps coordinates, throwing std::domain_error when they are off the
  /// hyperboloid.
  Point point(const Eigen::VectorXd& coords) const;

  /// Rescales v to -<v,v>_M = 1. Throws std::domain_error unless v is
  /// timelike with positive last coordinate.
  Point normalize(const Eigen::VectorXd& v) const;

 private:
  int n_;
};

}  // namespace crpg
