#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crpg/manifold.hpp"
#include "crpg/objectives.hpp"
#include "crpg/solvers.hpp"

namespace crpg {

/// Slack = LHS - RHS of one inequality; the inequality holds when
/// slack >= -tolerance * scale.
struct InequalityReport {
  std::string name;
  double slack = 0.0;
  double scale = 1.0;
  double tolerance = 0.0;
  bool applicable = true;
  std::string context;

  bool holds() const { return !applicable || slack >= -tolerance * scale; }
};

/// Longest side of the geodesic triangle abc.
double triangle_diameter(const Manifold& m, const Point& a, const Point& b, const Point& c);

enum class DecreaseForm {
  kLemma,   // f(p) - f(T) >= (2 - lambda L) / (2 lambda) dist^2(p, T)
  kSecond,  // f(p) - f(T) >= dist^2(p, T) / (2 lambda) under the descent condition
};

std::string to_string(DecreaseForm form);

InequalityReport check_sufficient_decrease(const SplitProblem& problem, const Point& p,
                                           double lambda, DecreaseForm form = DecreaseForm::kLemma,
                                           double tolerance = 1e-9);

enum class ProxGradVariant { kThm51a, kThm51b, kCor52 };

std::string to_string(ProxGradVariant variant);

/// Evaluates one proximal-gradient inequality at (p, q, lambda) with
/// z = gradient_step(q) and T = prox(z). Curvature bounds come from the
/// geometry unless overridden. The report is marked inapplicable when the
/// descent condition at q fails by more than 1e-10, when f(p) is infinite,
/// or when Cor52 is asked for with kappa_max > 0.
InequalityReport check_prox_grad_inequality(const SplitProblem& problem, const Point& p,
                                            const Point& q, double lambda,
                                            ProxGradVariant variant,
                                            std::optional<CurvatureBounds> curvature = {},
                                            double tolerance = 1e-8);

// --- rate checks on traces ---------------------------------------------------

enum class RateKind { kSublinear, kLinear };

struct RateEnvelope {
  RateKind kind = RateKind::kSublinear;
  double alpha = 1.0;
  double beta = 1.0;
  double lipschitz = 1.0;
  double mu_bar = 0.0;
  double r_hat = 0.0;
  double r_alpha_hat = 0.0;
  double zeta1_at_r_alpha = 1.0;
  double gradient_step_bound = 0.0;  // sqrt(alpha / (2 - alpha)) (dist(q*, p0) + r_hat)
  // Complexity constants of the stationarity bound; logged, never asserted.
  std::optional<double> sigma_kmin;
  std::optional<double> g_plus;
};

/// Exact largest pairwise distance among the points.
double point_set_diameter(const Manifold& m, const std::vector<Point>& points);

/// Builds the envelope for one trace. r_hat is the iterate diameter plus
/// dist(p0, final); r_alpha_hat is the larger of the gradient-step bound and
/// the largest recorded D_k. dist_qstar_p0 is the distance from p0 to a
/// minimizer of g.
RateEnvelope make_rate_envelope(const Manifold& m, const SolverTrace& trace,
                                const StepsizeBounds& bounds, double lipschitz, double mu_bar,
                                double dist_qstar_p0);

/// C with Delta_k <= C / k, namely 1 / delta for
/// delta = min(beta / (2 L zeta1 r_hat^2), 1 / Delta_0).
double convex_envelope_constant(const RateEnvelope& envelope, double delta0);

/// 1 - min(beta mu_bar / (4 L zeta1), 1 / 2).
double linear_rate_factor(const RateEnvelope& envelope);

enum class Regime { kHalving, kSublinear, kLinear, kAmbiguous, kExcluded };

std::string to_string(Regime regime);

struct RateRow {
  int k = 0;
  double delta = 0.0;
  Regime regime = Regime::kExcluded;
  double ratio = 0.0;
  double bound = 0.0;
  double slack = 0.0;
};

struct RateReport {
  std::vector<RateRow> rows;
  double delta0 = 0.0;
  double tolerance = 0.0;  // relative to delta0
  int checked = 0;
  int excluded = 0;
  int ambiguous = 0;
  int violations = 0;
  double min_recursion_slack = 0.0;
  double min_envelope_slack = 0.0;     // convex: C / k; linear: iterate bound
  double min_summed_slack = 0.0;       // convex only
  double min_gradient_step_slack = 0.0;  // diagnostic, not counted

  bool passed() const { return violations == 0; }
};

/// Deltas below this are excluded from ratio-based checks.
inline constexpr double kDeltaFloor = 1e-12;
/// Relative width of the regime boundary band marked ambiguous.
inline constexpr double kRegimeBand = 0.05;

/// Per-iteration recursion, C / k envelope for k >= 1 and summed form
/// 1 / Delta_k >= 1 / Delta_0 + k delta, each with slack >= -tolerance Delta_0.
RateReport check_convex_rate(const Manifold& m, const SolverTrace& trace,
                             const RateEnvelope& envelope, double f_best, const Point& p_star,
                             double tolerance = 1e-8);

/// Delta_{k+1} <= rho Delta_k and (mu_bar / 2) dist^2(p^k, p*) <= rho^k Delta_0,
/// each with slack >= -tolerance Delta_0.
RateReport check_strongly_convex_rate(const Manifold& m, const SolverTrace& trace,
                                      const RateEnvelope& envelope, double f_best,
                                      const Point& p_star, double tolerance = 1e-10);

}  // namespace crpg
