#pragma once

#include <vector>

#include "crpg/hyperbolic.hpp"
#include "crpg/manifold.hpp"

namespace crpg {

/// Proximal map of tau * dist(., q_bar) with parameter lambda: the point at
/// arclength min(lambda tau, dist(p, q_bar)) along the unit-speed geodesic
/// from p toward q_bar.
Point prox_distance(const Manifold& m, const Point& q_bar, double tau, double lambda,
                    const Point& p);

/// Proximal map of weight * dist^2(., q) / 2: geodesic(p, q, lw / (1 + lw))
/// with lw = lambda * weight.
Point prox_sq_distance(const Manifold& m, const Point& q, double weight, double lambda,
                       const Point& p);

/// Projection onto the closed geodesic ball B(center, radius).
Point project_ball(const Manifold& m, const Point& center, double radius, const Point& p);

/// Euclidean soft threshold sign(v_i) max(0, |v_i| - t) on every entry.
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double t);

// --- l1 proximal map on the hyperboloid -------------------------------------

/// Sum of absolute coordinates, including the last one.
double l1_norm(const Point& x);

/// Componentwise soft threshold of the first n coordinates by t, with the
/// last coordinate shifted up by t. Zero coordinates stay zero.
Eigen::VectorXd l1_shrink_vector(const Point& x, double t);

/// Rescales a future-timelike vector onto H^n.
Point l1_normalize(const HyperbolicSpace& h, const Eigen::VectorXd& v);

/// mu_eff * sqrt(<x,y>_M^2 - 1) / arccosh(-<x,y>_M), equal to mu_eff at y = x.
double l1_sigma(const HyperbolicSpace& h, const Point& x, const Point& y, double mu_eff);

struct L1ProxOptions {
  double tol = 1e-7;
  int max_iter = 20;
};

/// Fixed-point iterate t_k of the scalar map t -> l1_sigma(x, p_x(t)).
struct L1ProxState {
  Point x;
  double mu_eff = 0.0;
  double t = 0.0;
  int iterations = 0;
};

struct L1ProxResult {
  Point y;
  double t_star = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> t_history;  // t_0, t_1, ..., t_star
};

/// Upper end of the fixed-point bracket [0, t_max]: the value of the scalar
/// map once every free coordinate has been thresholded away.
double l1_t_max(const HyperbolicSpace& h, const Point& x, double mu_eff);

/// Advances the fixed-point iteration by one step.
void l1_fixed_point_step(const HyperbolicSpace& h, L1ProxState& state);

/// argmin_y ||y||_1 + dist^2(x, y) / (2 mu_eff) over H^n, computed as p_x(t*)
/// where t* is the fixed point of t -> l1_sigma(x, p_x(t)) started at
/// t_0 = mu_eff. Hitting max_iter is reported through `converged`.
L1ProxResult prox_l1_hyperbolic(const HyperbolicSpace& h, const Point& x, double mu_eff,
                                const L1ProxOptions& options = {});

/// ||y||_1 + dist^2(x, y) / (2 mu_eff)
double l1_prox_objective(const HyperbolicSpace& h, const Point& x, const Point& y,
                         double mu_eff);

/// Subgradient v* of the Euclidean l1 norm at y used by the optimality
/// certificate: sign(y_i) on the support, x_i / t* off it.
Eigen::VectorXd l1_certificate_subgradient(const Point& x, const L1ProxResult& result);

/// Norm of w - (-<y, w>_M) y with w = x - t* J v*. Vanishes when x - t* J v*
/// is parallel to y, the optimality condition of the prox.
double l1_stationarity_residual(const HyperbolicSpace& h, const Point& x,
                                const L1ProxResult& result);

}  // namespace crpg
