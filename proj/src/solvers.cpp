#include "crpg/solvers.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "crpg/prox.hpp"

namespace crpg {

namespace {

constexpr double kDescentUlps = 64.0 * std::numeric_limits<double>::epsilon();

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void validate(const StoppingCriterion& stop) {
  if (!(stop.grad_map_tol > 0.0) && !stop.cost_change_tol) {
    throw std::invalid_argument("stopping criterion: no active tolerance");
  }
  if (stop.max_iter < 1) throw std::invalid_argument("stopping criterion: max_iter must be >= 1");
}

void validate(const StepsizeRule& rule, double lipschitz) {
  if (const auto* c = std::get_if<ConstantStep>(&rule)) {
    if (!(c->lambda > 0.0)) throw std::invalid_argument("constant stepsize must be positive");
    return;
  }
  const auto& b = std::get<BacktrackingStep>(rule);
  if (!(b.s > 0.0) || !(b.s < 2.0 / lipschitz)) {
    throw std::invalid_argument("backtracking: initial guess s must lie in (0, 2/L)");
  }
  if (!(b.eta > 0.0 && b.eta < 1.0)) throw std::invalid_argument("backtracking: eta in (0, 1)");
  if (!(b.theta >= 1.0)) throw std::invalid_argument("backtracking: theta must be >= 1");
}

IterationRecord make_record(const SplitProblem& problem, int k, double lambda, const Point& p,
                            double cost, const Point& z, const ProxOutcome& next,
                            double next_cost) {
  const Manifold& m = *problem.geometry;
  IterationRecord r;
  r.k = k;
  r.lambda = lambda;
  r.cost = cost;
  r.next_cost = next_cost;
  r.step_length = m.dist(p, next.point);
  r.grad_step_length = m.dist(p, z);
  r.grad_map_norm = r.step_length / lambda;
  const double quad = (2.0 - lambda * problem.lipschitz) / (2.0 * lambda) * r.step_length *
                      r.step_length;
  r.sufficient_decrease_slack = (cost - next_cost) - quad;
  r.sufficient_decrease_scale = 1.0 + std::abs(cost);
  r.prox_converged = next.converged;
  return r;
}

}  // namespace

std::string to_string(const StepsizeRule& rule) {
  char buf[128];
  if (const auto* c = std::get_if<ConstantStep>(&rule)) {
    std::snprintf(buf, sizeof buf, "constant(lambda=%.17g)", c->lambda);
  } else {
    const auto& b = std::get<BacktrackingStep>(rule);
    std::snprintf(buf, sizeof buf, "backtracking(s=%.17g,eta=%.17g,theta=%.17g)", b.s, b.eta,
                  b.theta);
  }
  return buf;
}

ConstantStep constant_step_for(const SplitProblem& problem) {
  return {1.0 / problem.lipschitz};
}

StepsizeBounds stepsize_bounds(const StepsizeRule& rule, double lipschitz) {
  if (const auto* c = std::get_if<ConstantStep>(&rule)) {
    return {c->lambda * lipschitz, c->lambda * lipschitz};
  }
  const auto& b = std::get<BacktrackingStep>(rule);
  return {b.s * lipschitz, std::min(b.s * lipschitz, b.eta)};
}

Point gradient_step(const SplitProblem& problem, double lambda, const Point& p) {
  if (!(lambda > 0.0)) throw std::invalid_argument("gradient_step: lambda must be positive");
  return problem.geometry->exp(p, -lambda * problem.g_gradient(p));
}

ProxOutcome crpg_iterate(const SplitProblem& problem, double lambda, const Point& p) {
  return problem.h_prox(lambda, gradient_step(problem, lambda, p));
}

double gradient_mapping_norm(const SplitProblem& problem, double lambda, const Point& p,
                             const Point& p_next) {
  if (!(lambda > 0.0)) throw std::invalid_argument("gradient_mapping_norm: lambda must be > 0");
  return problem.geometry->dist(p, p_next) / lambda;
}

double sufficient_decrease_slack(const SplitProblem& problem, double lambda, const Point& p,
                                 const Point& p_next) {
  const double d = problem.geometry->dist(p, p_next);
  return (problem.cost(p) - problem.cost(p_next)) -
         (2.0 - lambda * problem.lipschitz) / (2.0 * lambda) * d * d;
}

bool descent_condition_holds(const SplitProblem& problem, double lambda, const Point& p,
                             const Tangent& grad, const Point& next) {
  const Manifold& m = *problem.geometry;
  const double gp = problem.g_value(p);
  const double gt = problem.g_value(next);
  const double lin = m.inner(p, grad, m.log(p, next));
  const double d = m.dist(p, next);
  const double rhs = gp + lin + d * d / (2.0 * lambda);
  const double roundoff = kDescentUlps * (std::abs(gp) + std::abs(gt) + std::abs(lin));
  return gt <= rhs + roundoff;
}

BacktrackResult backtrack(const SplitProblem& problem, const Point& p, double prev_lambda,
                          const BacktrackingStep& rule) {
  const Manifold& m = *problem.geometry;
  const Tangent grad = problem.g_gradient(p);
  BacktrackResult result;
  result.lambda = std::min(rule.s, rule.theta * prev_lambda);
  while (true) {
    result.gradient_point = m.exp(p, -result.lambda * grad);
    result.next = problem.h_prox(result.lambda, result.gradient_point);
    if (descent_condition_holds(problem, result.lambda, p, grad, result.next.point)) {
      return result;
    }
    if (result.contractions == kMaxContractions) {
      throw std::runtime_error("backtrack: descent condition still violated after " +
                               std::to_string(kMaxContractions) + " contractions");
    }
    result.lambda *= rule.eta;
    ++result.contractions;
  }
}

SolverTrace crpg_solve(const SplitProblem& problem, const Point& p0, const StepsizeRule& rule,
                       const StoppingCriterion& stop) {
  validate(stop);
  validate(rule, problem.lipschitz);
  if (!std::isfinite(problem.h_value(p0))) {
    throw std::invalid_argument("crpg_solve: starting point outside dom(h)");
  }
  const auto start = std::chrono::steady_clock::now();
  SolverTrace trace;
  trace.solver = "crpg";
  trace.stepsize = std::holds_alternative<ConstantStep>(rule) ? "constant" : "backtracking";
  trace.iterates.push_back(p0);
  trace.costs.push_back(problem.cost(p0));

  const auto* backtracking = std::get_if<BacktrackingStep>(&rule);
  double prev_lambda = backtracking ? backtracking->s : 0.0;
  Point p = p0;
  for (int k = 0; k < stop.max_iter; ++k) {
    double lambda;
    int contractions = 0;
    Point z;
    ProxOutcome next;
    if (backtracking) {
      BacktrackResult b = backtrack(problem, p, prev_lambda, *backtracking);
      lambda = b.lambda;
      contractions = b.contractions;
      z = std::move(b.gradient_point);
      next = std::move(b.next);
      prev_lambda = lambda;
    } else {
      lambda = std::get<ConstantStep>(rule).lambda;
      z = gradient_step(problem, lambda, p);
      next = problem.h_prox(lambda, z);
    }
    const double next_cost = problem.cost(next.point);
    IterationRecord r = make_record(problem, k, lambda, p, trace.costs.back(), z, next, next_cost);
    r.backtrack_count = contractions;
    trace.prox_always_converged = trace.prox_always_converged && next.converged;
    trace.records.push_back(r);
    trace.iterates.push_back(next.point);
    trace.costs.push_back(next_cost);
    p = std::move(next.point);
    if (r.grad_map_norm < stop.grad_map_tol) {
      trace.converged = true;
      break;
    }
    if (stop.cost_change_tol && std::abs(r.cost - next_cost) < *stop.cost_change_tol) {
      trace.converged = true;
      break;
    }
  }
  trace.wall_seconds = seconds_since(start);
  return trace;
}

SolverTrace cppa_solve(const DataCloud& cloud, const SplitProblem& problem, const Point& p0,
                       double lambda0, const StoppingCriterion& stop) {
  validate(stop);
  if (cloud.points.empty()) throw std::invalid_argument("cppa_solve: empty cloud");
  if (!(lambda0 > 0.0)) throw std::invalid_argument("cppa_solve: lambda0 must be positive");
  require_same_geometry(cloud.geometry->tag(), problem.geometry->tag());
  const Manifold& m = *cloud.geometry;
  const double weight = 1.0 / static_cast<double>(cloud.points.size());

  const auto start = std::chrono::steady_clock::now();
  SolverTrace trace;
  trace.solver = "cppa";
  trace.stepsize = "diminishing";
  trace.iterates.push_back(p0);
  trace.costs.push_back(problem.cost(p0));
  Point p = p0;
  for (int k = 0; k < stop.max_iter; ++k) {
    const double lambda = lambda0 / static_cast<double>(k + 1);
    Point x = p;
    for (const Point& q : cloud.points) x = prox_sq_distance(m, q, weight, lambda, x);
    ProxOutcome next = problem.h_prox(lambda, x);
    const double next_cost = problem.cost(next.point);

    IterationRecord r;
    r.k = k;
    r.lambda = lambda;
    r.cost = trace.costs.back();
    r.next_cost = next_cost;
    r.step_length = m.dist(p, next.point);
    r.grad_map_norm = r.step_length / lambda;
    r.prox_converged = next.converged;
    trace.prox_always_converged = trace.prox_always_converged && next.converged;
    trace.records.push_back(r);
    trace.iterates.push_back(next.point);
    trace.costs.push_back(next_cost);
    p = std::move(next.point);
    const bool done = stop.cost_change_tol
                          ? std::abs(r.cost - next_cost) < *stop.cost_change_tol
                          : r.grad_map_norm < stop.grad_map_tol;
    if (done) {
      trace.converged = true;
      break;
    }
  }
  trace.wall_seconds = seconds_since(start);
  return trace;
}

SolverTrace pga_solve(const SplitProblem& problem, const Point& center, double radius,
                      const Point& p0, double lambda, const StoppingCriterion& stop) {
  validate(stop);
  if (!(radius > 0.0)) throw std::invalid_argument("pga_solve: radius must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("pga_solve: lambda must be positive");
  const Manifold& m = *problem.geometry;

  const auto start = std::chrono::steady_clock::now();
  SolverTrace trace;
  trace.solver = "pga";
  trace.stepsize = "constant";
  trace.iterates.push_back(p0);
  trace.costs.push_back(problem.cost(p0));
  Point p = p0;
  for (int k = 0; k < stop.max_iter; ++k) {
    const Point z = m.exp(p, -lambda * problem.g_gradient(p));
    const ProxOutcome next{project_ball(m, center, radius, z), true};
    const double next_cost = problem.cost(next.point);
    const IterationRecord r =
        make_record(problem, k, lambda, p, trace.costs.back(), z, next, next_cost);
    trace.records.push_back(r);
    trace.iterates.push_back(next.point);
    trace.costs.push_back(next_cost);
    p = next.point;
    if (r.grad_map_norm < stop.grad_map_tol) {
      trace.converged = true;
      break;
    }
  }
  trace.wall_seconds = seconds_since(start);
  return trace;
}

}  // namespace crpg
