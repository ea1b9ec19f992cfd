#include "crpg/prox.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include <gtest/gtest.h>

#include "crpg/spd.hpp"
#include "oracles.hpp"

namespace crpg {
namespace {

Eigen::VectorXd vec3(double a, double b, double c) { return Eigen::Vector3d(a, b, c); }

// Point on H^2 at distance r from the apex in direction angle phi.
Point polar(const HyperbolicSpace& h, double r, double phi) {
  return h.point(vec3(std::sinh(r) * std::cos(phi), std::sinh(r) * std::sin(phi), std::cosh(r)));
}

TEST(ProxDistance, Examples) {
  HyperbolicSpace h(2);
  const Point q = polar(h, 1.0, 0.3);
  EXPECT_TRUE((prox_distance(h, q, 0.5, 1.0, q).coords - q.coords).isZero(0.0));
  const Point near = polar(h, 1.2, 0.35);
  EXPECT_TRUE((prox_distance(h, q, 1.0, 10.0, near).coords - q.coords).isZero(0.0));
}

TEST(ProxDistance, MatchesGridAlongGeodesic) {
  HyperbolicSpace h(2);
  const Point p = polar(h, 0.5, 0.0);
  const Point q_bar = h.exp(p, 2.0 * (1.0 / h.dist(p, polar(h, 1.5, 2.0))) *
                                   h.log(p, polar(h, 1.5, 2.0)));
  ASSERT_NEAR(h.dist(p, q_bar), 2.0, 1e-12);
  const double tau = 0.5;
  const double lambda = 1.0;
  const Point r = prox_distance(h, q_bar, tau, lambda, p);
  EXPECT_NEAR(h.dist(p, r), 0.5, 1e-12);
  EXPECT_NEAR(h.dist(r, q_bar), 1.5, 1e-12);
  auto objective = [&](const Point& y) {
    const double d = h.dist(p, y);
    return tau * h.dist(y, q_bar) + d * d / (2.0 * lambda);
  };
  const double grid = oracle::grid_minimum_1d(
      [&](double t) { return objective(geodesic(h, p, q_bar, t)); }, 0.0, 1.0, 20001);
  EXPECT_LE(objective(r), grid + 1e-6);
}

TEST(ProxDistance, OnSpd) {
  SpdMatrices spd(2);
  Rng rng(1);
  const Point q_bar = spd.random_point(rng);
  const Point p = spd.random_point(rng);
  const double d = spd.dist(p, q_bar);
  const Point r = prox_distance(spd, q_bar, 0.5, 0.5 * d, p);
  EXPECT_NEAR(spd.dist(p, r), 0.25 * d, 1e-10 * (1.0 + d));
  EXPECT_NEAR(spd.dist(r, q_bar), 0.75 * d, 1e-10 * (1.0 + d));
}

TEST(ProxSqDistance, LimitsAndMidpoint) {
  HyperbolicSpace h(2);
  const Point p = polar(h, 0.7, 1.0);
  const Point q = polar(h, 1.3, -2.0);
  EXPECT_LE(h.dist(prox_sq_distance(h, q, 1.0, 1e-12, p), p), 1e-10);
  EXPECT_LE(h.dist(prox_sq_distance(h, q, 1.0, 1e12, p), q), 1e-10);
  EXPECT_LE(h.dist(prox_sq_distance(h, q, 1.0, INFINITY, p), q), 0.0);
  const Point mid = prox_sq_distance(h, q, 2.0, 0.5, p);
  EXPECT_LE(h.dist(mid, geodesic(h, p, q, 0.5)), 1e-12);
  auto objective = [&](const Point& y) {
    const double a = h.dist(y, q);
    const double b = h.dist(p, y);
    return a * a / 2.0 + b * b / 2.0;
  };
  const double grid = oracle::grid_minimum_1d(
      [&](double t) { return objective(geodesic(h, p, q, t)); }, 0.0, 1.0, 20001);
  EXPECT_LE(objective(mid), grid + 1e-6);
}

TEST(ProjectBall, Examples) {
  HyperbolicSpace h(3);
  Rng rng(2);
  const Point c = h.random_point(rng);
  EXPECT_TRUE((project_ball(h, c, 1.0, c).coords - c.coords).isZero(0.0));
  for (int i = 0; i < 100; ++i) {
    const Point p = h.random_point(rng);
    const double r = 0.8;
    const Point y = project_ball(h, c, r, p);
    const double d = h.dist(c, p);
    if (d <= r) {
      EXPECT_TRUE((y.coords - p.coords).isZero(0.0));
      continue;
    }
    EXPECT_NEAR(h.dist(c, y), r, 1e-9);
    // On the geodesic from c to p: dist(c, y) + dist(y, p) = dist(c, p).
    EXPECT_NEAR(h.dist(c, y) + h.dist(y, p), d, 1e-9 * (1.0 + d));
    EXPECT_LE(h.dist(project_ball(h, c, r, y), y), 1e-10);
  }
}

TEST(SoftThreshold, Examples) {
  const Eigen::VectorXd v = vec3(1.5, -0.2, -3.0);
  EXPECT_TRUE((soft_threshold(v, 0.5) - vec3(1.0, 0.0, -2.5)).isZero(0.0));
  EXPECT_TRUE((soft_threshold(v, 0.0) - v).isZero(0.0));
  EXPECT_THROW(soft_threshold(v, -1.0), std::domain_error);
}

TEST(L1Shrink, Examples) {
  HyperbolicSpace h(2);
  const Point x = polar(h, 0.9, 0.4);
  EXPECT_TRUE((l1_shrink_vector(x, 0.0) - x.coords).isZero(0.0));
  EXPECT_TRUE((l1_shrink_vector(h.apex(), 0.7) - vec3(0.0, 0.0, 1.7)).isZero(0.0));
  const double x3 = std::sqrt(1.0 + 0.09 + 0.64);
  const Point y = h.point(vec3(0.3, -0.8, x3));
  EXPECT_TRUE((l1_shrink_vector(y, 0.5) - vec3(0.0, -0.3, x3 + 0.5)).isZero(1e-15));
  EXPECT_THROW(l1_shrink_vector(y, -0.1), std::domain_error);
}

TEST(L1Normalize, Examples) {
  HyperbolicSpace h(2);
  const Point x = polar(h, 0.9, 0.4);
  EXPECT_TRUE((l1_normalize(h, x.coords).coords - x.coords).isZero(1e-15));
  EXPECT_TRUE((l1_normalize(h, vec3(0.0, 0.0, 4.0)).coords - h.apex().coords).isZero(0.0));
  Rng rng(3);
  std::uniform_real_distribution<double> t(0.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const Point p = h.random_point(rng);
    const Point y = l1_normalize(h, l1_shrink_vector(p, t(rng)));
    EXPECT_LE(std::abs(oracle::mink(y.coords, y.coords) + 1.0), 1e-12 * y.coords.squaredNorm());
  }
  EXPECT_THROW(l1_normalize(h, vec3(2.0, 0.0, 1.0)), std::domain_error);
}

TEST(L1Sigma, Examples) {
  HyperbolicSpace h(2);
  const Point x = polar(h, 0.6, 1.1);
  EXPECT_DOUBLE_EQ(l1_sigma(h, x, x, 0.3), 0.3);
  EXPECT_EQ(l1_sigma(h, x, polar(h, 1.0, 0.0), 0.0), 0.0);
  const Point a = h.apex();
  const Point y = polar(h, 1.0, 2.0);
  EXPECT_NEAR(l1_sigma(h, a, y, 0.7), 0.7 * std::sinh(1.0), 1e-14);
  EXPECT_NEAR(l1_sigma(h, a, y, 1.0), 1.1752011936, 1e-10);
  // mu sqrt(s^2 - 1) / arccosh(s) with s = -<x,y>_M
  const Point z = polar(h, 2.0, -0.5);
  const double s = -oracle::mink(x.coords, z.coords);
  EXPECT_NEAR(l1_sigma(h, x, z, 0.4), 0.4 * std::sqrt(s * s - 1.0) / std::acosh(s), 1e-13);
}

TEST(L1TMax, ClosedForm) {
  HyperbolicSpace h(3);
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const Point x = h.random_point(rng);
    const double xn = x.coords(3);
    const double ref = 0.5 * std::sqrt(xn * xn - 1.0) / std::acosh(xn);
    EXPECT_NEAR(l1_t_max(h, x, 0.5), ref, 1e-10 * ref);
  }
}

TEST(ProxL1, TrivialCases) {
  HyperbolicSpace h(2);
  const L1ProxResult apex = prox_l1_hyperbolic(h, h.apex(), 0.8);
  EXPECT_TRUE((apex.y.coords - h.apex().coords).isZero(1e-15));
  EXPECT_NEAR(apex.t_star, 0.8, 1e-12);
  EXPECT_TRUE(apex.converged);

  const Point x = polar(h, 1.0, 0.2);
  const L1ProxResult zero = prox_l1_hyperbolic(h, x, 0.0);
  EXPECT_TRUE((zero.y.coords - x.coords).isZero(0.0));
  EXPECT_EQ(zero.t_star, 0.0);

  EXPECT_THROW(prox_l1_hyperbolic(h, x, -1.0), std::invalid_argument);
  EXPECT_THROW(prox_l1_hyperbolic(h, x, 1.0, {0.0, 20}), std::invalid_argument);
  EXPECT_THROW(prox_l1_hyperbolic(h, x, 1.0, {1e-7, 0}), std::invalid_argument);
}

TEST(ProxL1, SmallCoordinateIsZeroedAndMatchesGrid) {
  HyperbolicSpace h(2);
  const double a = 1.2;
  const double b = 0.05;
  const Point x = h.point(vec3(a, b, std::sqrt(1.0 + a * a + b * b)));
  const double mu = 0.5;
  const L1ProxResult r = prox_l1_hyperbolic(h, x, mu);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.y.coords(1), 0.0);
  EXPECT_GT(r.y.coords(0), 0.0);
  const double radius = 2.0 * h.dist(x, h.apex());
  const double grid = oracle::l1_prox_grid_minimum(x.coords, mu, radius, 400);
  EXPECT_LE(oracle::l1_prox_objective(x.coords, r.y.coords, mu), grid + 1e-6);
  EXPECT_NEAR(l1_prox_objective(h, x, r.y, mu),
              oracle::l1_prox_objective(x.coords, r.y.coords, mu), 1e-12);
}

TEST(ProxL1, FixedPointProperties) {
  HyperbolicSpace h(3);
  Rng rng(5);
  std::uniform_real_distribution<double> mu(0.05, 2.0);
  for (int i = 0; i < 100; ++i) {
    const Point x = h.random_point(rng);
    const double m = mu(rng);
    const L1ProxResult r = prox_l1_hyperbolic(h, x, m, {1e-15, 500});
    const double t_max = l1_t_max(h, x, m);
    EXPECT_GE(r.t_star, 0.0);
    EXPECT_LE(r.t_star, t_max * (1.0 + 1e-12));
    for (double t : r.t_history) {
      EXPECT_GE(t, 0.0);
      EXPECT_LE(t, t_max * (1.0 + 1e-12));
    }
    // |t_k - t*| strictly decreases until the tolerance is reached.
    for (std::size_t k = 1; k + 1 < r.t_history.size(); ++k) {
      const double prev = std::abs(r.t_history[k - 1] - r.t_star);
      const double cur = std::abs(r.t_history[k] - r.t_star);
      if (prev < 1e-13) break;
      EXPECT_LT(cur, prev) << "k = " << k;
    }
    EXPECT_LE(l1_stationarity_residual(h, x, r), 1e-8 * (1.0 + x.coords.norm()));
    EXPECT_TRUE(h.contains(r.y));
    // Sparsity: a coordinate is zeroed exactly when |x_i| <= t*.
    for (int j = 0; j < 3; ++j) {
      if (std::abs(x.coords(j)) <= r.t_star * (1.0 - 1e-9)) EXPECT_EQ(r.y.coords(j), 0.0);
      if (std::abs(x.coords(j)) >= r.t_star * (1.0 + 1e-9)) EXPECT_NE(r.y.coords(j), 0.0);
    }
  }
}

TEST(ProxL1, StepAdvancesState) {
  HyperbolicSpace h(2);
  const Point x = polar(h, 1.5, 0.7);
  L1ProxState s{x, 0.3, 0.3, 0};
  l1_fixed_point_step(h, s);
  EXPECT_EQ(s.iterations, 1);
  const Point y = l1_normalize(h, l1_shrink_vector(x, 0.3));
  EXPECT_DOUBLE_EQ(s.t, l1_sigma(h, x, y, 0.3));
}

TEST(ProxL1, IterationCapIsReported) {
  HyperbolicSpace h(2);
  const Point x = polar(h, 2.0, 0.7);
  const L1ProxResult r = prox_l1_hyperbolic(h, x, 1.0, {1e-300, 2});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 2);
}

using ProxOp = std::function<Point(const Point&)>;

TEST(ProxOperators, NonexpansiveOnHadamardGeometries) {
  HyperbolicSpace h(3);
  Rng rng(6);
  const Point anchor = h.random_point(rng);
  const std::vector<std::pair<std::string, ProxOp>> ops = {
      {"distance", [&](const Point& p) { return prox_distance(h, anchor, 0.7, 0.9, p); }},
      {"sq_distance", [&](const Point& p) { return prox_sq_distance(h, anchor, 1.0, 0.6, p); }},
      {"ball", [&](const Point& p) { return project_ball(h, anchor, 0.5, p); }},
      {"l1", [&](const Point& p) { return prox_l1_hyperbolic(h, p, 0.4, {1e-15, 500}).y; }},
  };
  for (const auto& [name, op] : ops) {
    for (int i = 0; i < 200; ++i) {
      const Point a = h.random_point(rng);
      const Point b = h.random_point(rng);
      EXPECT_LE(h.dist(op(a), op(b)), h.dist(a, b) + 1e-9) << name;
    }
  }
}

}  // namespace
}  // namespace crpg
