#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crpg/manifold.hpp"
#include "crpg/objectives.hpp"

namespace crpg {

struct ConstantStep {
  double lambda = 1.0;
};

/// Algorithm parameters of the backtracking line search: initial guess s,
/// contraction factor eta and warm-start factor theta.
struct BacktrackingStep {
  double s = 1.0;
  double eta = 0.9;
  double theta = 1.0;
};

using StepsizeRule = std::variant<ConstantStep, BacktrackingStep>;

std::string to_string(const StepsizeRule& rule);

/// 1 / L.
ConstantStep constant_step_for(const SplitProblem& problem);

/// Constants with beta / L <= lambda_k <= alpha / L for every accepted step.
struct StepsizeBounds {
  double alpha = 1.0;
  double beta = 1.0;
};

/// Constant lambda: alpha = beta = lambda L. Backtracking: alpha = s L and
/// beta = min(s L, eta).
StepsizeBounds stepsize_bounds(const StepsizeRule& rule, double lipschitz);

struct StoppingCriterion {
  double grad_map_tol = 1e-7;
  int max_iter = 5000;
  std::optional<double> cost_change_tol;
};

/// One transition p^k -> p^{k+1}.
struct IterationRecord {
  int k = 0;
  double lambda = 0.0;
  double cost = 0.0;       // f(p^k)
  double next_cost = 0.0;  // f(p^{k+1})
  double step_length = 0.0;
  double grad_step_length = 0.0;  // D_k = dist(p^k, z_{p^k})
  double grad_map_norm = 0.0;
  double sufficient_decrease_slack = 0.0;
  double sufficient_decrease_scale = 1.0;
  int backtrack_count = 0;
  bool prox_converged = true;
};

struct SolverTrace {
  std::string solver;
  std::string stepsize;
  std::vector<IterationRecord> records;
  std::vector<Point> iterates;  // p^0, ..., p^K
  std::vector<double> costs;    // f(p^0), ..., f(p^K)
  bool converged = false;
  bool prox_always_converged = true;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  std::string config;

  int iterations() const { return static_cast<int>(records.size()); }
  const Point& final_point() const { return iterates.back(); }
  double final_cost() const { return costs.back(); }
};

/// exp(p, -lambda grad g(p)).
Point gradient_step(const SplitProblem& problem, double lambda, const Point& p);

/// prox_{lambda h}(gradient_step(p)).
ProxOutcome crpg_iterate(const SplitProblem& problem, double lambda, const Point& p);

/// dist(p, p_next) / lambda.
double gradient_mapping_norm(const SplitProblem& problem, double lambda, const Point& p,
                             const Point& p_next);

/// Slack of f(p) - f(p_next) >= (2 - lambda L) / (2 lambda) dist^2(p, p_next).
double sufficient_decrease_slack(const SplitProblem& problem, double lambda, const Point& p,
                                 const Point& p_next);

/// True when g(T) <= g(p) + <grad g(p), log_p T> + dist^2(p, T) / (2 lambda)
/// up to a few ulps of the values involved.
bool descent_condition_holds(const SplitProblem& problem, double lambda, const Point& p,
                             const Tangent& grad, const Point& next);

struct BacktrackResult {
  double lambda = 0.0;
  int contractions = 0;
  Point gradient_point;  // z
  ProxOutcome next;      // T_lambda(p)
};

inline constexpr int kMaxContractions = 200;

/// Starts at min(s, theta prev_lambda) and multiplies by eta until the
/// descent condition holds. Throws std::runtime_error after
/// kMaxContractions contractions.
BacktrackResult backtrack(const SplitProblem& problem, const Point& p, double prev_lambda,
                          const BacktrackingStep& rule);

/// Runs CRPG from p0 until the gradient-mapping norm drops below the
/// tolerance or max_iter steps were taken. Throws std::invalid_argument when
/// h(p0) is infinite or the backtracking guess violates s < 2 / L.
SolverTrace crpg_solve(const SplitProblem& problem, const Point& p0, const StepsizeRule& rule,
                       const StoppingCriterion& stop);

/// Cyclic proximal point method on (1 / 2N) sum dist^2(., q_i) plus an
/// optional extra term of `problem` (its h). Cycle k applies the data proxes
/// in index order and then the extra prox, all with lambda_0 / (k + 1).
/// Stops when |f(p^{k+1}) - f(p^k)| < cost_change_tol or at max_iter cycles.
SolverTrace cppa_solve(const DataCloud& cloud, const SplitProblem& problem, const Point& p0,
                       double lambda0, const StoppingCriterion& stop);

/// Projected gradient onto B(center, radius) with constant lambda.
SolverTrace pga_solve(const SplitProblem& problem, const Point& center, double radius,
                      const Point& p0, double lambda, const StoppingCriterion& stop);

}  // namespace crpg
