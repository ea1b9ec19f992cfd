#include "crpg/prox.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crpg {

Point prox_distance(const Manifold& m, const Point& q_bar, double tau, double lambda,
                    const Point& p) {
  const double d = m.dist(p, q_bar);
  const double reach = lambda * tau;
  if (d <= reach) return q_bar;
  return geodesic(m, p, q_bar, reach / d);
}

Point prox_sq_distance(const Manifold& m, const Point& q, double weight, double lambda,
                       const Point& p) {
  const double lw = lambda * weight;
  if (std::isinf(lw)) return q;
  return geodesic(m, p, q, lw / (1.0 + lw));
}

Point project_ball(const Manifold& m, const Point& center, double radius, const Point& p) {
  const double d = m.dist(p, center);
  if (d <= radius) return p;
  return geodesic(m, center, p, radius / d);
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double t) {
  if (!(t >= 0.0)) throw std::domain_error("soft_threshold: t must be nonnegative");
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i)) - t;
    out(i) = a > 0.0 ? std::copysign(a, v(i)) : 0.0;
  }
  return out;
}

double l1_norm(const Point& x) { return x.coords.col(0).lpNorm<1>(); }

Eigen::VectorXd l1_shrink_vector(const Point& x, double t) {
  if (!(t >= 0.0)) throw std::domain_error("l1_shrink_vector: t must be nonnegative");
  const auto c = x.coords.col(0);
  const Eigen::Index n = c.size() - 1;
  Eigen::VectorXd out(c.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = std::abs(c(i)) - t;
    out(i) = a > 0.0 ? std::copysign(a, c(i)) : 0.0;
  }
  out(n) = c(n) + t;
  return out;
}

Point l1_normalize(const HyperbolicSpace& h, const Eigen::VectorXd& v) { return h.normalize(v); }

double l1_sigma(const HyperbolicSpace& h, const Point& x, const Point& y, double mu_eff) {
  return mu_eff * sinhc(h.dist(x, y));
}

double l1_t_max(const HyperbolicSpace& h, const Point& x, double mu_eff) {
  return l1_sigma(h, x, h.apex(), mu_eff);
}

void l1_fixed_point_step(const HyperbolicSpace& h, L1ProxState& state) {
  const Point y = l1_normalize(h, l1_shrink_vector(state.x, state.t));
  state.t = l1_sigma(h, state.x, y, state.mu_eff);
  ++state.iterations;
}

L1ProxResult prox_l1_hyperbolic(const HyperbolicSpace& h, const Point& x, double mu_eff,
                                const L1ProxOptions& options) {
  if (!(mu_eff >= 0.0)) throw std::invalid_argument("prox_l1_hyperbolic: mu_eff must be >= 0");
  if (!(options.tol > 0.0) || options.max_iter < 1) {
    throw std::invalid_argument("prox_l1_hyperbolic: tol > 0 and max_iter >= 1 required");
  }
  L1ProxResult result;
  if (mu_eff == 0.0) {
    result.y = x;
    result.converged = true;
    result.t_history = {0.0};
    return result;
  }

  L1ProxState state{x, mu_eff, mu_eff, 0};
  result.t_history.push_back(state.t);
  while (state.iterations < options.max_iter) {
    const double previous = state.t;
    l1_fixed_point_step(h, state);
    result.t_history.push_back(state.t);
    if (std::abs(state.t - previous) < options.tol) {
      result.converged = true;
      break;
    }
  }
  result.t_star = state.t;
  result.iterations = state.iterations;
  result.y = l1_normalize(h, l1_shrink_vector(x, state.t));
  return result;
}

double l1_prox_objective(const HyperbolicSpace& h, const Point& x, const Point& y,
                         double mu_eff) {
  const double d = h.dist(x, y);
  if (mu_eff == 0.0) return d == 0.0 ? l1_norm(y) : std::numeric_limits<double>::infinity();
  return l1_norm(y) + d * d / (2.0 * mu_eff);
}

Eigen::VectorXd l1_certificate_subgradient(const Point& x, const L1ProxResult& result) {
  const auto xc = x.coords.col(0);
  const auto yc = result.y.coords.col(0);
  Eigen::VectorXd v(xc.size());
  for (Eigen::Index i = 0; i < xc.size(); ++i) {
    if (yc(i) != 0.0) {
      v(i) = yc(i) > 0.0 ? 1.0 : -1.0;
    } else {
      v(i) = result.t_star > 0.0 ? xc(i) / result.t_star : 0.0;
    }
  }
  return v;
}

double l1_stationarity_residual(const HyperbolicSpace& h, const Point& x,
                                const L1ProxResult& result) {
  require_same_geometry(h.tag(), x.tag);
  Eigen::VectorXd jv = l1_certificate_subgradient(x, result);
  jv(jv.size() - 1) = -jv(jv.size() - 1);
  const Eigen::VectorXd w = x.coords.col(0) - result.t_star * jv;
  const Eigen::VectorXd y = result.y.coords.col(0);
  const Eigen::VectorXd r = w + minkowski_inner(y, w) * y;
  return r.norm();
}

}  // namespace crpg
