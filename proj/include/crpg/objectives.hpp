#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "crpg/euclidean.hpp"
#include "crpg/hyperbolic.hpp"
#include "crpg/manifold.hpp"
#include "crpg/prox.hpp"
#include "crpg/spd.hpp"

namespace crpg {

/// Every estimated smoothness constant is floored here so 1 / L stays finite.
inline constexpr double kLipschitzFloor = 1e-6;

/// Output of a proximal map; `converged` is false when an inner iterative
/// solver stopped at its iteration cap.
struct ProxOutcome {
  Point point;
  bool converged = true;
};

/// One instance of min_p g(p) + h(p) with g smooth and h geodesically convex
/// and possibly nonsmooth or extended-valued.
struct SplitProblem {
  std::string name;
  std::shared_ptr<const Manifold> geometry;
  std::function<double(const Point&)> g_value;
  std::function<Tangent(const Point&)> g_gradient;
  std::function<double(const Point&)> h_value;  // may return +inf
  std::function<ProxOutcome(double lambda, const Point&)> h_prox;
  double lipschitz = 1.0;         // smoothness constant of g
  // Smoothness bound of g along the geodesic between two points; empty when
  // only the global constant is known.
  std::function<double(const Point&, const Point&)> segment_lipschitz;
  double strong_convexity = 0.0;  // modulus of f, 0 when merely convex

  double cost(const Point& p) const { return g_value(p) + h_value(p); }
};

/// Nonempty set of points on one geometry, weighted uniformly.
struct DataCloud {
  std::shared_ptr<const Manifold> geometry;
  std::vector<Point> points;
};

/// Throws std::invalid_argument when empty or mixing geometries.
DataCloud make_data_cloud(std::shared_ptr<const Manifold> geometry, std::vector<Point> points);

double floor_lipschitz(double lipschitz);

// --- log-det^4 on P(n) -------------------------------------------------------

/// log det p from the eigenvalue logs.
double log_det(const SpdMatrices& spd, const Point& p);
/// (log det p)^4
double logdet4_value(const SpdMatrices& spd, const Point& p);
/// 4 (log det p)^3 p
Tangent logdet4_gradient(const SpdMatrices& spd, const Point& p);

/// 12 n max(log det(a)^2, log det(b)^2); log det is affine along geodesics,
/// so this bounds the Hessian of g on the whole segment.
double logdet4_segment_lipschitz(const SpdMatrices& spd, const Point& a, const Point& b);

/// Largest Hessian-eigenvalue bound 12 n (log det q)^2 over `samples` points
/// q drawn from the geodesic ball B(p0, radius). Samples come in antithetic
/// pairs exp(p0, +-X) with X uniform in the tangent ball, which makes the
/// estimate nondecreasing in the radius for a fixed seed. Not floored.
double logdet4_lipschitz(const SpdMatrices& spd, const Point& p0, double radius, int samples,
                         Rng& rng);

// --- Frechet mean ------------------------------------------------------------

/// (1 / 2N) sum_i dist^2(p, q_i)
double frechet_value(const DataCloud& cloud, const Point& p);
/// -(1 / N) sum_i log_p(q_i)
Tangent frechet_gradient(const DataCloud& cloud, const Point& p);
/// zeta_1(kappa_min, max_i max(dist(a, q_i), dist(b, q_i))), a bound on the
/// Hessian of the Frechet function along the geodesic from a to b.
double frechet_segment_lipschitz(const DataCloud& cloud, const Point& a, const Point& b);
/// zeta_1(kappa_min, D) for a geodesically convex set of diameter D
/// containing the data and the iterates.
double frechet_lipschitz(const DataCloud& cloud, double enclosing_diameter);

// --- experiment problems -----------------------------------------------------

/// g = (log det p)^4, h = tau dist(p, q_bar).
SplitProblem make_spd_convex_problem(std::shared_ptr<const SpdMatrices> spd, Point q_bar,
                                     double tau, double lipschitz);

/// g = Frechet function of the cloud, h = mu ||p||_1 on H^n.
SplitProblem make_sparse_mean_problem(std::shared_ptr<const HyperbolicSpace> hyp,
                                      DataCloud cloud, double mu, double lipschitz,
                                      L1ProxOptions prox_options = {});

/// g = Frechet function of the cloud, h = indicator of B(center, radius).
/// Strong convexity modulus recorded as 1.
SplitProblem make_constrained_mean_problem(DataCloud cloud, Point center, double radius,
                                           double lipschitz);

/// Flat test problem on R^n: g = (x - b)^T A (x - b) / 2 with A symmetric
/// positive semidefinite, h = mu ||x||_1. L is the largest eigenvalue of A.
SplitProblem make_flat_quadratic_l1_problem(std::shared_ptr<const EuclideanSpace> flat,
                                            Eigen::MatrixXd a, Eigen::VectorXd b, double mu);

/// g = Frechet function, h = 0.
SplitProblem make_frechet_problem(DataCloud cloud, double lipschitz);

}  // namespace crpg
