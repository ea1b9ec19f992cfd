#pragma once

#include <Eigen/Dense>

#include <random>
#include <string>

namespace crpg {

/// Membership and tangency tolerance shared by every geometry.
inline constexpr double kMembershipTol = 1e-10;

/// Below this argument the hyperbolic coefficient functions switch to their
/// Taylor expansions.
inline constexpr double kSeriesThreshold = 1e-4;

using Rng = std::mt19937_64;

enum class GeometryKind { kEuclidean, kHyperbolic, kSpd };

/// Identifies the geometry a coordinate array belongs to. Points or tangents
/// from different geometries must never be combined.
struct GeometryTag {
  GeometryKind kind = GeometryKind::kEuclidean;
  int dim = 0;  // n for R^n, H^n and P(n)

  bool operator==(const GeometryTag&) const = default;
};

std::string to_string(const GeometryTag& tag);

/// A point on a manifold. The layout of `coords` is owned by the geometry:
/// a column vector in R^{n+1} for the hyperboloid, a symmetric n x n matrix
/// for P(n), a column vector for R^n.
struct Point {
  GeometryTag tag;
  Eigen::MatrixXd coords;
};

/// A tangent vector together with the point it is attached to.
struct Tangent {
  Point base;
  Eigen::MatrixXd vec;
};

Tangent operator*(double a, const Tangent& x);
Tangent operator+(const Tangent& x, const Tangent& y);
Tangent operator-(const Tangent& x, const Tangent& y);
Tangent operator-(const Tangent& x);

/// Throws std::logic_error when the two tags differ.
void require_same_geometry(const GeometryTag& a, const GeometryTag& b);

struct CurvatureBounds {
  double kappa_min = 0.0;
  double kappa_max = 0.0;
};

/// Validates kappa_min <= kappa_max and returns the bounds.
CurvatureBounds make_curvature_bounds(double kappa_min, double kappa_max);

/// Contract every concrete geometry provides.
class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual GeometryTag tag() const = 0;
  virtual CurvatureBounds curvature() const = 0;

  virtual double inner(const Point& p, const Tangent& x, const Tangent& y) const = 0;
  virtual double dist(const Point& p, const Point& q) const = 0;
  virtual Point exp(const Point& p, const Tangent& x) const = 0;
  virtual Tangent log(const Point& p, const Point& q) const = 0;

  virtual bool contains(const Point& p, double tol = kMembershipTol) const = 0;
  virtual bool is_tangent(const Point& p, const Tangent& x,
                          double tol = kMembershipTol) const = 0;

  virtual Point random_point(Rng& rng) const = 0;
  virtual Tangent random_tangent(const Point& p, Rng& rng) const = 0;

  double norm(const Point& p, const Tangent& x) const;
  Tangent zero_tangent(const Point& p) const;
  std::string name() const { return to_string(tag()); }

 protected:
  void require_tag(const Point& p) const;
  void require_tag(const Tangent& x) const;
};

struct CurvatureCoefficients {
  double zeta1 = 1.0;
  double zeta2 = 1.0;
  double sigma = 1.0;
};

/// s * coth(s), continuous at zero.
double s_coth_s(double s);

/// zeta_1 = 1 for kappa_min >= 0, else sqrt(-kappa_min) s coth(sqrt(-kappa_min) s).
/// Throws std::domain_error for negative s.
double zeta1(double kappa_min, double s);

/// zeta_2 = 1 for kappa_max <= 0, else sqrt(kappa_max) s cot(sqrt(kappa_max) s).
/// Throws std::domain_error for negative s or s at/after the first pole.
double zeta2(double kappa_max, double s);

CurvatureCoefficients curvature_coefficients(double kappa_min, double kappa_max, double s);

/// exp(p, t log(p, q)). Values of t outside [0, 1] extrapolate.
Point geodesic(const Manifold& m, const Point& p, const Point& q, double t);

}  // namespace crpg
