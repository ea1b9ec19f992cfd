#include "crpg/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crpg {

namespace {

constexpr double kPreconditionTol = 1e-10;

double sum_abs(std::initializer_list<double> terms) {
  double s = 0.0;
  for (double t : terms) s += std::abs(t);
  return s;
}

}  // namespace

double triangle_diameter(const Manifold& m, const Point& a, const Point& b, const Point& c) {
  return std::max({m.dist(a, b), m.dist(b, c), m.dist(a, c)});
}

std::string to_string(DecreaseForm form) {
  return form == DecreaseForm::kLemma ? "SuffDec" : "SuffDec2";
}

std::string to_string(ProxGradVariant variant) {
  switch (variant) {
    case ProxGradVariant::kThm51a: return "Thm51a";
    case ProxGradVariant::kThm51b: return "Thm51b";
    case ProxGradVariant::kCor52: return "Cor52";
  }
  return "unknown";
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::kHalving: return "halving";
    case Regime::kSublinear: return "sublinear";
    case Regime::kLinear: return "linear";
    case Regime::kAmbiguous: return "ambiguous";
    case Regime::kExcluded: return "excluded";
  }
  return "unknown";
}

InequalityReport check_sufficient_decrease(const SplitProblem& problem, const Point& p,
                                           double lambda, DecreaseForm form, double tolerance) {
  if (!(lambda > 0.0)) throw std::invalid_argument("check_sufficient_decrease: lambda <= 0");
  const Manifold& m = *problem.geometry;
  InequalityReport report;
  report.name = to_string(form);
  report.tolerance = tolerance;
  const Tangent grad = problem.g_gradient(p);
  const Point z = m.exp(p, -lambda * grad);
  const Point t = problem.h_prox(lambda, z).point;
  const double fp = problem.cost(p);
  const double ft = problem.cost(t);
  const double d = m.dist(p, t);
  double quad;
  if (form == DecreaseForm::kLemma) {
    if (!(lambda * problem.lipschitz < 2.0)) {
      report.applicable = false;
      report.context = "lambda outside (0, 2/L)";
    }
    quad = (2.0 - lambda * problem.lipschitz) / (2.0 * lambda) * d * d;
  } else {
    if (!descent_condition_holds(problem, lambda, p, grad, t)) {
      report.applicable = false;
      report.context = "descent condition violated";
    }
    quad = d * d / (2.0 * lambda);
  }
  if (!std::isfinite(fp)) {
    report.applicable = false;
    report.context = "p outside dom(h)";
    report.slack = 0.0;
    return report;
  }
  report.slack = (fp - ft) - quad;
  report.scale = 1.0 + sum_abs({fp, ft, quad});
  return report;
}

InequalityReport check_prox_grad_inequality(const SplitProblem& problem, const Point& p,
                                            const Point& q, double lambda,
                                            ProxGradVariant variant,
                                            std::optional<CurvatureBounds> curvature,
                                            double tolerance) {
  if (!(lambda > 0.0)) throw std::invalid_argument("check_prox_grad_inequality: lambda <= 0");
  const Manifold& m = *problem.geometry;
  const CurvatureBounds kb = curvature.value_or(m.curvature());
  InequalityReport report;
  report.name = to_string(variant);
  report.tolerance = tolerance;

  const Tangent grad_q = problem.g_gradient(q);
  const Point z = m.exp(q, -lambda * grad_q);
  const Point t = problem.h_prox(lambda, z).point;

  const double gq = problem.g_value(q);
  const double gt = problem.g_value(t);
  const double d_qt = m.dist(q, t);
  const double descent_gap =
      gt - (gq + m.inner(q, grad_q, m.log(q, t)) + d_qt * d_qt / (2.0 * lambda));
  if (descent_gap > kPreconditionTol) {
    report.applicable = false;
    report.context = "descent condition at q violated";
    return report;
  }
  const double fp = problem.cost(p);
  if (!std::isfinite(fp)) {
    report.applicable = false;
    report.context = "p outside dom(h)";
    return report;
  }
  if (variant == ProxGradVariant::kCor52 && kb.kappa_max > 0.0) {
    report.applicable = false;
    report.context = "kappa_max > 0";
    return report;
  }

  const double ft = problem.cost(t);
  const double lin = problem.g_value(p) - gq - m.inner(q, grad_q, m.log(q, p));
  const double d_pt = m.dist(p, t);
  const double d_pq = m.dist(p, q);
  const double d_qz = m.dist(q, z);
  const double d_zt = m.dist(z, t);
  const double c = 1.0 / (2.0 * lambda);

  double rhs;
  double terms;
  if (variant == ProxGradVariant::kCor52) {
    const double a = c * d_pt * d_pt;
    const double b = -(zeta1(kb.kappa_min, d_qz) + 1.0) / (4.0 * lambda) * d_pq * d_pq;
    const double e = -(zeta1(kb.kappa_min, d_pq) - 1.0) / (4.0 * lambda) * d_qz * d_qz;
    rhs = lin + a + b + e;
    terms = sum_abs({lin, a, b, e});
  } else {
    const double d1 = std::max({d_qz, d_zt, d_qt});
    const double d2 = std::max({d_qz, m.dist(z, p), d_pq});
    const double d3 = std::max({d_zt, m.dist(z, p), d_pt});
    const double z1 = zeta1(kb.kappa_min, d2);
    const double z2_d1 = zeta2(kb.kappa_max, d1);
    const double z2_d3 = zeta2(kb.kappa_max, d3);
    double a, b, e, h;
    if (variant == ProxGradVariant::kThm51a) {
      a = c * d_pt * d_pt;
      b = -z1 * c * d_pq * d_pq;
      e = (z2_d3 - 1.0) * c * d_zt * d_zt;
      h = (z2_d1 - 1.0) * c * d_qz * d_qz;
    } else {
      a = z2_d3 * c * d_pt * d_pt;
      b = -c * d_pq * d_pq;
      e = (1.0 - z1) * c * d_qz * d_qz;
      h = (z2_d1 - 1.0) * c * d_qt * d_qt;
    }
    rhs = lin + a + b + e + h;
    terms = sum_abs({lin, a, b, e, h});
  }
  report.slack = (fp - ft) - rhs;
  report.scale = 1.0 + std::abs(fp) + std::abs(ft) + terms;
  return report;
}

double point_set_diameter(const Manifold& m, const std::vector<Point>& points) {
  // Each sweep computes the eccentricity e_i of one point and tightens the
  // upper bounds ecc(j) <= dist(i, j) + e_i; the sweep always picks the point
  // with the largest remaining bound, so the loop ends once no bound exceeds
  // the best distance seen.
  const std::size_t n = points.size();
  if (n < 2) return 0.0;
  std::vector<double> upper(n, std::numeric_limits<double>::infinity());
  std::vector<char> done(n, 0);
  double best = 0.0;
  std::size_t i = 0;
  while (true) {
    std::vector<double> d(n);
    double ecc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      d[j] = j == i ? 0.0 : m.dist(points[i], points[j]);
      ecc = std::max(ecc, d[j]);
    }
    best = std::max(best, ecc);
    done[i] = 1;
    upper[i] = ecc;
    std::size_t next = n;
    for (std::size_t j = 0; j < n; ++j) {
      upper[j] = std::min(upper[j], d[j] + ecc);
      if (!done[j] && (next == n || upper[j] > upper[next])) next = j;
    }
    if (next == n || upper[next] <= best * (1.0 + 1e-12)) break;
    i = next;
  }
  return best;
}

RateEnvelope make_rate_envelope(const Manifold& m, const SolverTrace& trace,
                                const StepsizeBounds& bounds, double lipschitz, double mu_bar,
                                double dist_qstar_p0) {
  if (trace.iterates.empty()) throw std::invalid_argument("make_rate_envelope: empty trace");
  if (!(bounds.alpha > 0.0 && bounds.alpha < 2.0)) {
    throw std::invalid_argument("make_rate_envelope: alpha must lie in (0, 2)");
  }
  RateEnvelope env;
  env.kind = mu_bar > 0.0 ? RateKind::kLinear : RateKind::kSublinear;
  env.alpha = bounds.alpha;
  env.beta = bounds.beta;
  env.lipschitz = lipschitz;
  env.mu_bar = mu_bar;
  env.r_hat = point_set_diameter(m, trace.iterates) +
              m.dist(trace.iterates.front(), trace.iterates.back());
  env.gradient_step_bound =
      std::sqrt(bounds.alpha / (2.0 - bounds.alpha)) * (dist_qstar_p0 + env.r_hat);
  double max_dk = 0.0;
  for (const IterationRecord& r : trace.records) max_dk = std::max(max_dk, r.grad_step_length);
  env.r_alpha_hat = std::max(env.gradient_step_bound, max_dk);
  env.zeta1_at_r_alpha = zeta1(m.curvature().kappa_min, env.r_alpha_hat);
  return env;
}

double convex_envelope_constant(const RateEnvelope& envelope, double delta0) {
  const double a = 2.0 * envelope.lipschitz * envelope.zeta1_at_r_alpha * envelope.r_hat *
                   envelope.r_hat / envelope.beta;
  return std::max(a, delta0);
}

double linear_rate_factor(const RateEnvelope& envelope) {
  return 1.0 - std::min(envelope.beta * envelope.mu_bar /
                            (4.0 * envelope.lipschitz * envelope.zeta1_at_r_alpha),
                        0.5);
}

RateReport check_convex_rate(const Manifold& m, const SolverTrace& trace,
                             const RateEnvelope& envelope, double f_best, const Point& p_star,
                             double tolerance) {
  RateReport report;
  report.tolerance = tolerance;
  report.delta0 = trace.costs.front() - f_best;
  const double delta0 = report.delta0;
  const double tol = tolerance * delta0;
  const double big_c = convex_envelope_constant(envelope, delta0);
  const double delta_rate = 1.0 / big_c;
  const double kmin = m.curvature().kappa_min;
  const double sub_coeff =
      envelope.beta /
      (2.0 * envelope.lipschitz * envelope.zeta1_at_r_alpha * envelope.r_hat * envelope.r_hat);
  report.min_recursion_slack = std::numeric_limits<double>::infinity();
  report.min_envelope_slack = std::numeric_limits<double>::infinity();
  report.min_summed_slack = std::numeric_limits<double>::infinity();
  report.min_gradient_step_slack = std::numeric_limits<double>::infinity();

  for (const IterationRecord& r : trace.records) {
    report.min_gradient_step_slack = std::min(report.min_gradient_step_slack,
                                              envelope.gradient_step_bound - r.grad_step_length);
  }
  if (!(delta0 > kDeltaFloor)) return report;

  for (std::size_t k = 1; k < trace.costs.size(); ++k) {
    RateRow row;
    row.k = static_cast<int>(k);
    row.delta = trace.costs[k] - f_best;
    const double prev = trace.costs[k - 1] - f_best;

    const double kd = static_cast<double>(k);
    const double env_slack = big_c / kd - row.delta;
    const double summed_slack = delta0 / (1.0 + kd * delta_rate * delta0) - row.delta;
    report.min_envelope_slack = std::min(report.min_envelope_slack, env_slack);
    report.min_summed_slack = std::min(report.min_summed_slack, summed_slack);
    bool violated = env_slack < -tol || summed_slack < -tol;

    if (prev < kDeltaFloor || row.delta < kDeltaFloor) {
      row.regime = Regime::kExcluded;
      ++report.excluded;
    } else {
      const IterationRecord& rec = trace.records[k - 1];
      const double d = m.dist(trace.iterates[k - 1], p_star);
      const double denom = zeta1(kmin, rec.grad_step_length) * d * d;
      row.ratio = denom > 0.0 ? rec.lambda * prev / denom
                              : std::numeric_limits<double>::infinity();
      const double halving = 0.5 * prev;
      const double sublinear = (1.0 - sub_coeff * prev) * prev;
      if (std::abs(row.ratio - 1.0) <= kRegimeBand) {
        row.regime = Regime::kAmbiguous;
        row.bound = std::max(halving, sublinear);
        ++report.ambiguous;
      } else if (row.ratio >= 1.0) {
        row.regime = Regime::kHalving;
        row.bound = halving;
      } else {
        row.regime = Regime::kSublinear;
        row.bound = sublinear;
      }
      row.slack = row.bound - row.delta;
      report.min_recursion_slack = std::min(report.min_recursion_slack, row.slack);
      violated = violated || row.slack < -tol;
      ++report.checked;
    }
    if (violated) ++report.violations;
    report.rows.push_back(row);
  }
  return report;
}

RateReport check_strongly_convex_rate(const Manifold& m, const SolverTrace& trace,
                                      const RateEnvelope& envelope, double f_best,
                                      const Point& p_star, double tolerance) {
  if (!(envelope.mu_bar > 0.0)) {
    throw std::invalid_argument("check_strongly_convex_rate: mu_bar must be positive");
  }
  RateReport report;
  report.tolerance = tolerance;
  report.delta0 = trace.costs.front() - f_best;
  const double delta0 = report.delta0;
  const double tol = tolerance * delta0;
  const double rho = linear_rate_factor(envelope);
  report.min_recursion_slack = std::numeric_limits<double>::infinity();
  report.min_envelope_slack = std::numeric_limits<double>::infinity();
  report.min_summed_slack = std::numeric_limits<double>::infinity();
  report.min_gradient_step_slack = std::numeric_limits<double>::infinity();
  for (const IterationRecord& r : trace.records) {
    report.min_gradient_step_slack = std::min(report.min_gradient_step_slack,
                                              envelope.gradient_step_bound - r.grad_step_length);
  }
  if (!(delta0 > kDeltaFloor)) return report;

  double rho_k = 1.0;
  for (std::size_t k = 0; k < trace.costs.size(); ++k) {
    const double d = m.dist(trace.iterates[k], p_star);
    const double iterate_slack = rho_k * delta0 - 0.5 * envelope.mu_bar * d * d;
    report.min_envelope_slack = std::min(report.min_envelope_slack, iterate_slack);
    bool violated = iterate_slack < -tol;
    if (k > 0) {
      RateRow row;
      row.k = static_cast<int>(k);
      row.delta = trace.costs[k] - f_best;
      const double prev = trace.costs[k - 1] - f_best;
      if (prev < kDeltaFloor || row.delta < kDeltaFloor) {
        row.regime = Regime::kExcluded;
        ++report.excluded;
      } else {
        row.regime = Regime::kLinear;
        row.bound = rho * prev;
        row.slack = row.bound - row.delta;
        report.min_recursion_slack = std::min(report.min_recursion_slack, row.slack);
        violated = violated || row.slack < -tol;
        ++report.checked;
      }
      report.rows.push_back(row);
    }
    if (violated) ++report.violations;
    rho_k *= rho;
  }
  return report;
}

}  // namespace crpg
