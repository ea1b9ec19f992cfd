#pragma once

#include <functional>

#include "crpg/manifold.hpp"

namespace crpg {

/// (A + A^T) / 2
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a);

/// V f(D) V^T for the symmetric eigendecomposition A = V D V^T. The input is
/// symmetrized first.
Eigen::MatrixXd apply_symmetric(const Eigen::MatrixXd& a, const std::function<double(double)>& f);

/// Symmetric positive definite matrices with the affine-invariant metric
/// <X, Y>_p = tr(p^{-1} X p^{-1} Y). Sectional curvature lies in [-1/2, 0].
///
/// All matrix functions go through symmetric eigendecompositions. A point
/// whose smallest eigenvalue is <= 1e-12 times its largest is rejected with
/// std::domain_error.
class SpdMatrices final : public Manifold {
 public:
  explicit SpdMatrices(int n);

  int n() const { return n_; }
  /// n (n + 1) / 2
  int manifold_dimension() const { return n_ * (n_ + 1) / 2; }

  GeometryTag tag() const override { return {GeometryKind::kSpd, n_}; }
  CurvatureBounds curvature() const override { return {-0.5, 0.0}; }

  double inner(const Point& p, const Tangent& x, const Tangent& y) const override;
  double dist(const Point& p, const Point& q) const override;
  Point exp(const Point& p, const Tangent& x) const override;
  Tangent log(const Point& p, const Point& q) const override;

  bool contains(const Point& p, double tol = kMembershipTol) const override;
  bool is_tangent(const Point& p, const Tangent& x, double tol = kMembershipTol) const override;

  /// exp at the identity of a symmetric Gaussian tangent, clipped so that
  /// dist(I, sample) <= 2.
  Point random_point(Rng& rng) const override;
  Tangent random_tangent(const Point& p, Rng& rng) const override;

  Point identity() const;
  Point point(const Eigen::MatrixXd& a) const;
  Tangent tangent(const Point& p, const Eigen::MatrixXd& x) const;

 private:
  struct Roots {
    Eigen::MatrixXd sqrt;
    Eigen::MatrixXd inv_sqrt;
  };
  // Validates membership while computing p^{1/2} and p^{-1/2}.
  Roots roots(const Point& p) const;

  int n_;
};

}  // namespace crpg
