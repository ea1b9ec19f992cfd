#include "crpg/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crpg {

namespace {

// Slack allowed on the ball indicator for points produced by the projection.
constexpr double kBallFeasibilityTol = 1e-10;

}  // namespace

DataCloud make_data_cloud(std::shared_ptr<const Manifold> geometry, std::vector<Point> points) {
  if (!geometry) throw std::invalid_argument("DataCloud: missing geometry");
  if (points.empty()) throw std::invalid_argument("DataCloud: empty cloud");
  for (const Point& p : points) require_same_geometry(geometry->tag(), p.tag);
  return {std::move(geometry), std::move(points)};
}

double floor_lipschitz(double lipschitz) { return std::max(lipschitz, kLipschitzFloor); }

double log_det(const SpdMatrices& spd, const Point& p) {
  if (!spd.contains(p)) throw std::domain_error("log_det: point is not in P(n)");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p.coords, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().array().log().sum();
}

double logdet4_value(const SpdMatrices& spd, const Point& p) {
  const double l = log_det(spd, p);
  const double l2 = l * l;
  return l2 * l2;
}

Tangent logdet4_gradient(const SpdMatrices& spd, const Point& p) {
  const double l = log_det(spd, p);
  return {p, 4.0 * l * l * l * p.coords};
}

double logdet4_segment_lipschitz(const SpdMatrices& spd, const Point& a, const Point& b) {
  const double la = log_det(spd, a);
  const double lb = log_det(spd, b);
  return 12.0 * spd.n() * std::max(la * la, lb * lb);
}

double logdet4_lipschitz(const SpdMatrices& spd, const Point& p0, double radius, int samples,
                         Rng& rng) {
  if (!(radius > 0.0)) throw std::invalid_argument("logdet4_lipschitz: radius must be positive");
  if (samples < 1) throw std::invalid_argument("logdet4_lipschitz: samples must be >= 1");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double dim = spd.manifold_dimension();
  const double coeff = 12.0 * spd.n();
  double best = 0.0;
  for (int drawn = 0; drawn < samples; drawn += 2) {
    Tangent x = spd.random_tangent(p0, rng);
    const double len = spd.norm(p0, x);
    if (len == 0.0) continue;
    const double rho = radius * std::pow(uniform(rng), 1.0 / dim);
    x = (rho / len) * x;
    for (const double sign : {1.0, -1.0}) {
      if (sign < 0.0 && drawn + 1 >= samples) break;
      const double l = log_det(spd, spd.exp(p0, sign * x));
      best = std::max(best, coeff * l * l);
    }
  }
  return best;
}

double frechet_value(const DataCloud& cloud, const Point& p) {
  if (cloud.points.empty()) throw std::invalid_argument("frechet_value: empty cloud");
  double sum = 0.0;
  for (const Point& q : cloud.points) {
    const double d = cloud.geometry->dist(p, q);
    sum += d * d;
  }
  return sum / (2.0 * static_cast<double>(cloud.points.size()));
}

Tangent frechet_gradient(const DataCloud& cloud, const Point& p) {
  if (cloud.points.empty()) throw std::invalid_argument("frechet_gradient: empty cloud");
  Tangent grad = cloud.geometry->zero_tangent(p);
  for (const Point& q : cloud.points) grad.vec += cloud.geometry->log(p, q).vec;
  grad.vec *= -1.0 / static_cast<double>(cloud.points.size());
  return grad;
}

double frechet_segment_lipschitz(const DataCloud& cloud, const Point& a, const Point& b) {
  double far = 0.0;
  for (const Point& q : cloud.points) {
    far = std::max({far, cloud.geometry->dist(a, q), cloud.geometry->dist(b, q)});
  }
  return zeta1(cloud.geometry->curvature().kappa_min, far);
}

double frechet_lipschitz(const DataCloud& cloud, double enclosing_diameter) {
  return zeta1(cloud.geometry->curvature().kappa_min, enclosing_diameter);
}

SplitProblem make_spd_convex_problem(std::shared_ptr<const SpdMatrices> spd, Point q_bar,
                                     double tau, double lipschitz) {
  if (!(tau > 0.0)) throw std::invalid_argument("spd problem: tau must be positive");
  SplitProblem problem;
  problem.name = "spd-convex";
  problem.geometry = spd;
  problem.lipschitz = floor_lipschitz(lipschitz);
  problem.g_value = [spd](const Point& p) { return logdet4_value(*spd, p); };
  problem.g_gradient = [spd](const Point& p) { return logdet4_gradient(*spd, p); };
  problem.segment_lipschitz = [spd](const Point& a, const Point& b) {
    return logdet4_segment_lipschitz(*spd, a, b);
  };
  problem.h_value = [spd, q_bar, tau](const Point& p) { return tau * spd->dist(p, q_bar); };
  problem.h_prox = [spd, q_bar, tau](double lambda, const Point& p) {
    return ProxOutcome{prox_distance(*spd, q_bar, tau, lambda, p), true};
  };
  return problem;
}

SplitProblem make_sparse_mean_problem(std::shared_ptr<const HyperbolicSpace> hyp,
                                      DataCloud cloud, double mu, double lipschitz,
                                      L1ProxOptions prox_options) {
  if (!(mu >= 0.0)) throw std::invalid_argument("sparse mean: mu must be nonnegative");
  require_same_geometry(hyp->tag(), cloud.geometry->tag());
  auto data = std::make_shared<const DataCloud>(std::move(cloud));
  SplitProblem problem;
  problem.name = "sparse-mean";
  problem.geometry = hyp;
  problem.lipschitz = floor_lipschitz(lipschitz);
  problem.strong_convexity = 1.0;
  problem.g_value = [data](const Point& p) { return frechet_value(*data, p); };
  problem.g_gradient = [data](const Point& p) { return frechet_gradient(*data, p); };
  problem.segment_lipschitz = [data](const Point& a, const Point& b) {
    return frechet_segment_lipschitz(*data, a, b);
  };
  problem.h_value = [mu](const Point& p) { return mu * l1_norm(p); };
  problem.h_prox = [hyp, mu, prox_options](double lambda, const Point& p) {
    const L1ProxResult r = prox_l1_hyperbolic(*hyp, p, lambda * mu, prox_options);
    return ProxOutcome{r.y, r.converged};
  };
  return problem;
}

SplitProblem make_constrained_mean_problem(DataCloud cloud, Point center, double radius,
                                           double lipschitz) {
  if (!(radius > 0.0)) throw std::invalid_argument("constrained mean: radius must be positive");
  require_same_geometry(cloud.geometry->tag(), center.tag);
  auto geometry = cloud.geometry;
  auto data = std::make_shared<const DataCloud>(std::move(cloud));
  SplitProblem problem;
  problem.name = "constrained-mean";
  problem.geometry = geometry;
  problem.lipschitz = floor_lipschitz(lipschitz);
  problem.strong_convexity = 1.0;
  problem.g_value = [data](const Point& p) { return frechet_value(*data, p); };
  problem.g_gradient = [data](const Point& p) { return frechet_gradient(*data, p); };
  problem.segment_lipschitz = [data](const Point& a, const Point& b) {
    return frechet_segment_lipschitz(*data, a, b);
  };
  problem.h_value = [geometry, center, radius](const Point& p) {
    return geometry->dist(p, center) <= radius * (1.0 + kBallFeasibilityTol)
               ? 0.0
               : std::numeric_limits<double>::infinity();
  };
  problem.h_prox = [geometry, center, radius](double /*lambda*/, const Point& p) {
    return ProxOutcome{project_ball(*geometry, center, radius, p), true};
  };
  return problem;
}

SplitProblem make_flat_quadratic_l1_problem(std::shared_ptr<const EuclideanSpace> flat,
                                            Eigen::MatrixXd a, Eigen::VectorXd b, double mu) {
  if (a.rows() != flat->tag().dim || a.cols() != a.rows() || b.size() != a.rows()) {
    throw std::invalid_argument("flat problem: dimension mismatch");
  }
  if (!(mu >= 0.0)) throw std::invalid_argument("flat problem: mu must be nonnegative");
  const GeometryTag tag = flat->tag();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  SplitProblem problem;
  problem.name = "flat-quadratic-l1";
  problem.geometry = flat;
  problem.lipschitz = floor_lipschitz(eig.eigenvalues().maxCoeff());
  const double flat_l = problem.lipschitz;
  problem.segment_lipschitz = [flat_l](const Point&, const Point&) { return flat_l; };
  problem.g_value = [a, b](const Point& p) {
    const Eigen::VectorXd r = p.coords.col(0) - b;
    return 0.5 * r.dot(a * r);
  };
  problem.g_gradient = [a, b](const Point& p) {
    return Tangent{p, a * (p.coords.col(0) - b)};
  };
  problem.h_value = [mu](const Point& p) { return mu * p.coords.col(0).lpNorm<1>(); };
  problem.h_prox = [mu, tag](double lambda, const Point& p) {
    return ProxOutcome{Point{tag, soft_threshold(p.coords.col(0), lambda * mu)}, true};
  };
  return problem;
}

SplitProblem make_frechet_problem(DataCloud cloud, double lipschitz) {
  auto geometry = cloud.geometry;
  auto data = std::make_shared<const DataCloud>(std::move(cloud));
  SplitProblem problem;
  problem.name = "frechet-mean";
  problem.geometry = geometry;
  problem.lipschitz = floor_lipschitz(lipschitz);
  problem.strong_convexity = 1.0;
  problem.g_value = [data](const Point& p) { return frechet_value(*data, p); };
  problem.g_gradient = [data](const Point& p) { return frechet_gradient(*data, p); };
  problem.segment_lipschitz = [data](const Point& a, const Point& b) {
    return frechet_segment_lipschitz(*data, a, b);
  };
  problem.h_value = [](const Point&) { return 0.0; };
  problem.h_prox = [](double, const Point& p) { return ProxOutcome{p, true}; };
  return problem;
}

}  // namespace crpg
