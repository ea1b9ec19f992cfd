#include "crpg/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "crpg/euclidean.hpp"
#include "crpg/prox.hpp"

#ifndef CRPG_VERSION
#define CRPG_VERSION "0.1.0"
#endif

namespace crpg::bench {

namespace {

constexpr std::uint64_t kSpdSalt = 0x5d1;
constexpr std::uint64_t kSparseSalt = 0x5a2;
constexpr std::uint64_t kConstrainedSalt = 0xc03;
constexpr std::uint64_t kInequalitySalt = 0x1e4;

constexpr double kSufficientDecreaseTol = 1e-9;
constexpr double kEquivalenceTol = 1e-12;
constexpr double kFeasibilityTol = 1e-8;
constexpr double kFlatMatchTol = 1e-10;
constexpr double kConsistencyTol = 1e-12;
constexpr double kSparsityThreshold = 1e-8;
constexpr double kCenterOffset = 1.5;
constexpr int kInequalityCloudSize = 20;
constexpr double kInequalityMu = 0.5;
constexpr int kMaxStepHalvings = 60;

const std::vector<std::string> kExperiments = {"spd-convex", "sparse-mean", "constrained-mean",
                                               "check-inequalities"};

std::string fmt_int(long long v) { return std::to_string(v); }
std::string fmt_bool(bool v) { return v ? "1" : "0"; }

std::vector<std::string> modes(const ExperimentConfig& c) {
  if (c.stepsize.empty()) return {"constant", "backtracking"};
  return {c.stepsize};
}

StepsizeRule make_rule(const std::string& mode, const ExperimentConfig& c, double lipschitz) {
  if (mode == "constant") return ConstantStep{1.0 / lipschitz};
  return BacktrackingStep{*c.s / lipschitz, *c.eta, *c.theta};
}

StoppingCriterion make_stop(const ExperimentConfig& c) {
  StoppingCriterion stop;
  stop.grad_map_tol = c.tol;
  stop.max_iter = *c.max_iter;
  return stop;
}

// Records every sufficient-decrease violation of a CRPG trace.
void check_decrease(const SolverRun& run, ExperimentResult& result) {
  for (const IterationRecord& r : run.trace.records) {
    if (r.sufficient_decrease_slack < -kSufficientDecreaseTol * r.sufficient_decrease_scale) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s n=%d run=%d k=%d: sufficient decrease slack %.3e",
                    run.solver.c_str(), run.dimension, run.run, r.k,
                    r.sufficient_decrease_slack);
      result.failures.emplace_back(buf);
    }
  }
}

double min_decrease_slack(const SolverTrace& trace) {
  double m = std::numeric_limits<double>::infinity();
  for (const IterationRecord& r : trace.records) {
    m = std::min(m, r.sufficient_decrease_slack / r.sufficient_decrease_scale);
  }
  return trace.records.empty() ? 0.0 : m;
}

std::pair<double, double> lambda_range(const SolverTrace& trace) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const IterationRecord& r : trace.records) {
    lo = std::min(lo, r.lambda);
    hi = std::max(hi, r.lambda);
  }
  if (trace.records.empty()) lo = 0.0;
  return {lo, hi};
}

// f_best over the runs of one instance and the final iterate of the longest run.
std::pair<double, Point> best_and_reference(const std::vector<SolverRun>& runs) {
  double f_best = std::numeric_limits<double>::infinity();
  const SolverRun* longest = nullptr;
  for (const SolverRun& r : runs) {
    for (double c : r.trace.costs) f_best = std::min(f_best, c);
    if (!longest || r.trace.iterations() > longest->trace.iterations()) longest = &r;
  }
  return {f_best, longest->trace.final_point()};
}

// Rate reports of unconverged traces stay in the tables but are not asserted:
// their final iterate is no usable stand-in for p*.
void rate_failure(const SolverRun& run, ExperimentResult& result) {
  if (run.rate && run.trace.converged && !run.rate->passed()) {
    result.failures.push_back(run.solver + " n=" + std::to_string(run.dimension) +
                              " run=" + std::to_string(run.run) + ": " +
                              std::to_string(run.rate->violations) + " rate violations");
  }
}

Point unconstrained_mean(const CloudInstance& inst) {
  const SplitProblem frechet = make_frechet_problem(inst.cloud, inst.lipschitz);
  StoppingCriterion stop;
  stop.grad_map_tol = 1e-13;
  stop.max_iter = 100000;
  return crpg_solve(frechet, inst.p0, constant_step_for(frechet), stop).final_point();
}

}  // namespace

// --- configuration -------------------------------------------------------------

ExperimentConfig resolve(ExperimentConfig c) {
  if (std::find(kExperiments.begin(), kExperiments.end(), c.experiment) == kExperiments.end()) {
    throw ConfigError("experiment: unknown value '" + c.experiment + "'");
  }
  const bool spd = c.experiment == "spd-convex";
  const bool sparse = c.experiment == "sparse-mean";
  const bool constrained = c.experiment == "constrained-mean";
  if (c.dimensions.empty()) {
    if (spd) c.dimensions = {2, 3, 4, 5};
    if (sparse) c.dimensions = {2};
    if (constrained) c.dimensions = {10};
    if (c.experiment == "check-inequalities") c.dimensions = {3};
  }
  if (!c.s) c.s = constrained ? 1.0 : 1.5;
  if (!c.eta) c.eta = constrained ? 0.995 : 0.9;
  if (!c.theta) c.theta = constrained ? 1.0 : 2.0;
  if (!c.max_iter) c.max_iter = spd ? 20000 : 5000;
  if (!c.points) c.points = constrained ? 400 : 1000;

  for (int d : c.dimensions) {
    if (d < 1) throw ConfigError("dimension: must be >= 1");
    if (sparse && d < 2) throw ConfigError("dimension: sparse-mean needs n >= 2");
  }
  if (!(c.tol > 0.0)) throw ConfigError("tol: must be positive");
  if (c.runs < 1) throw ConfigError("runs: must be >= 1");
  if (*c.max_iter < 1) throw ConfigError("max-iter: must be >= 1");
  if (!(c.tau > 0.0)) throw ConfigError("tau: must be positive");
  if (!(c.radius > 0.0)) throw ConfigError("radius: must be positive");
  if (c.mu.empty()) throw ConfigError("mu: needs at least one value");
  for (double m : c.mu) {
    if (!(m >= 0.0)) throw ConfigError("mu: values must be nonnegative");
  }
  if (!c.stepsize.empty() && c.stepsize != "constant" && c.stepsize != "backtracking") {
    throw ConfigError("stepsize: expected 'constant' or 'backtracking'");
  }
  if (!(*c.s > 0.0 && *c.s < 2.0)) throw ConfigError("s: must lie in (0, 2) in units of 1/L");
  if (!(*c.eta > 0.0 && *c.eta < 1.0)) throw ConfigError("eta: must lie in (0, 1)");
  if (!(*c.theta >= 1.0)) throw ConfigError("theta: must be >= 1");
  if (*c.points < 1) throw ConfigError("points: must be >= 1");
  if (c.lipschitz_samples < 1) throw ConfigError("lipschitz-samples: must be >= 1");
  if (!(c.cppa_lambda0 > 0.0)) throw ConfigError("cppa-lambda0: must be positive");
  if (c.samples < 1) throw ConfigError("samples: must be >= 1");
  if (c.output.empty()) throw ConfigError("output: empty path");
  return c;
}

std::vector<std::string> describe(const ExperimentConfig& c) {
  auto join_ints = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  std::string mus;
  for (std::size_t i = 0; i < c.mu.size(); ++i) mus += (i ? "," : "") + format_real(c.mu[i]);
  std::vector<std::string> out = {
      "experiment=" + c.experiment,
      "dimension=" + join_ints(c.dimensions),
      "seed=" + std::to_string(c.seed),
      "tau=" + format_real(c.tau),
      "mu=" + mus,
      "radius=" + format_real(c.radius),
      "stepsize=" + (c.stepsize.empty() ? std::string("constant,backtracking") : c.stepsize),
      "s=" + (c.s ? format_real(*c.s) : std::string("default")) + " (units of 1/L)",
      "eta=" + (c.eta ? format_real(*c.eta) : std::string("default")),
      "theta=" + (c.theta ? format_real(*c.theta) : std::string("default")),
      "max-iter=" + (c.max_iter ? std::to_string(*c.max_iter) : std::string("default")),
      "tol=" + format_real(c.tol),
      "runs=" + std::to_string(c.runs),
      "points=" + (c.points ? std::to_string(*c.points) : std::string("default")),
      "lipschitz-samples=" + std::to_string(c.lipschitz_samples),
      "cppa-lambda0=" + format_real(c.cppa_lambda0),
      "samples=" + std::to_string(c.samples),
      "rng=std::mt19937_64 seeded by std::seed_seq(seed, dimension, run, salt)",
      "anchor=gaussian tangent stddev 1 at the apex",
  };
  return out;
}

std::string version() { return CRPG_VERSION; }

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) {
    throw std::logic_error("CsvTable " + name + ": row width does not match header");
  }
  rows.push_back(std::move(row));
}

std::string CsvTable::body() const {
  std::ostringstream out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

const CsvTable& ExperimentResult::table(const std::string& name) const {
  for (const CsvTable& t : tables) {
    if (t.name == name) return t;
  }
  for (const CsvTable& t : timing) {
    if (t.name == name) return t;
  }
  throw std::out_of_range("no table named " + name);
}

void write_result(const ExperimentResult& result, const ExperimentConfig& config) {
  std::filesystem::create_directories(config.output);
  auto write = [&](const CsvTable& t) {
    const std::filesystem::path path = std::filesystem::path(config.output) / (t.name + ".csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "# crpg bench " << version() << '\n';
    for (const std::string& kv : describe(config)) out << "# " << kv << '\n';
    out << t.body();
  };
  for (const CsvTable& t : result.tables) write(t);
  for (const CsvTable& t : result.timing) write(t);
}

Rng instance_rng(std::uint64_t seed, int dimension, int run, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(dimension), static_cast<std::uint32_t>(run),
                    static_cast<std::uint32_t>(salt)};
  return Rng(seq);
}

int sparsity_count(const Point& p) {
  int count = 0;
  for (Eigen::Index i = 0; i < p.coords.size(); ++i) {
    if (std::abs(p.coords(i)) < kSparsityThreshold) ++count;
  }
  return count;
}

// --- instances -----------------------------------------------------------------

SpdInstance make_spd_instance(int n, double tau, int lipschitz_samples, Rng& rng) {
  SpdInstance inst;
  auto spd = std::make_shared<const SpdMatrices>(n);
  inst.spd = spd;
  inst.q_bar = spd->random_point(rng);
  inst.p0 = spd->random_point(rng);
  const double radius = 2.0 * spd->dist(inst.p0, inst.q_bar);
  const double estimate =
      radius > 0.0 ? logdet4_lipschitz(*spd, inst.p0, radius, lipschitz_samples, rng) : 0.0;
  inst.lipschitz = floor_lipschitz(estimate);
  inst.dist_qstar_p0 = std::abs(log_det(*spd, inst.p0)) / std::sqrt(static_cast<double>(n));
  inst.problem = make_spd_convex_problem(spd, inst.q_bar, tau, inst.lipschitz);
  return inst;
}

CloudInstance make_sparse_mean_instance(int n, int points, Rng& rng) {
  CloudInstance inst;
  auto hyp = std::make_shared<const HyperbolicSpace>(n);
  inst.hyp = hyp;
  inst.anchor = hyp->random_point(rng);
  std::vector<Point> data;
  data.reserve(points);
  for (int i = 0; i < points; ++i) data.push_back(hyp->sample_gaussian(inst.anchor, 1.0, rng));
  inst.cloud = make_data_cloud(hyp, std::move(data));
  inst.p0 = hyp->random_point(rng);
  double far = 0.0;
  for (const Point& q : inst.cloud.points) far = std::max(far, hyp->dist(inst.p0, q));
  inst.diameter = 2.0 * far;
  inst.lipschitz = floor_lipschitz(frechet_lipschitz(inst.cloud, inst.diameter));
  return inst;
}

ConstrainedInstance make_constrained_instance(int n, int points, double radius, Rng& rng) {
  ConstrainedInstance inst;
  auto hyp = std::make_shared<const HyperbolicSpace>(n);
  inst.base.hyp = hyp;
  inst.base.anchor = hyp->random_point(rng);
  std::vector<Point> data;
  data.reserve(points);
  for (int i = 0; i < points; ++i) {
    data.push_back(hyp->sample_gaussian(inst.base.anchor, 1.0, rng));
  }
  inst.base.cloud = make_data_cloud(hyp, std::move(data));
  Tangent dir = hyp->random_tangent(inst.base.anchor, rng);
  dir = (kCenterOffset / hyp->norm(inst.base.anchor, dir)) * dir;
  inst.center = hyp->exp(inst.base.anchor, dir);
  inst.radius = radius;
  inst.base.p0 = inst.center;
  double far = 0.0;
  for (const Point& q : inst.base.cloud.points) far = std::max(far, hyp->dist(inst.center, q));
  inst.base.diameter = 2.0 * far;
  inst.base.lipschitz = floor_lipschitz(frechet_lipschitz(inst.base.cloud, inst.base.diameter));
  inst.problem =
      make_constrained_mean_problem(inst.base.cloud, inst.center, radius, inst.base.lipschitz);
  inst.dist_qstar_p0 = hyp->dist(unconstrained_mean(inst.base), inst.base.p0);
  return inst;
}

// --- spd-convex ------------------------------------------------------------------

ExperimentResult run_spd_convex(const ExperimentConfig& config) {
  const ExperimentConfig c = resolve(config);
  ExperimentResult result;
  CsvTable summary{"spd_convex_summary",
                   {"n", "manifold_dimension", "run", "stepsize", "iterations", "converged",
                    "final_objective", "f_best", "lambda_min", "lambda_max", "lipschitz",
                    "min_sufficient_decrease_slack", "rate_checked", "rate_ambiguous",
                    "rate_violations", "min_gradient_step_slack"},
                   {}};
  CsvTable curve{"spd_convex_curve", {"n", "run", "stepsize", "k", "delta"}, {}};
  CsvTable timing{"spd_convex_timing", {"n", "run", "stepsize", "wall_seconds"}, {}};

  for (int n : c.dimensions) {
    for (int r = 0; r < c.runs; ++r) {
      Rng rng = instance_rng(c.seed, n, r, kSpdSalt);
      const SpdInstance inst = make_spd_instance(n, c.tau, c.lipschitz_samples, rng);
      std::vector<SolverRun> runs;
      for (const std::string& mode : modes(c)) {
        const StepsizeRule rule = make_rule(mode, c, inst.lipschitz);
        SolverRun run;
        run.solver = "crpg-" + mode;
        run.dimension = n;
        run.run = r;
        run.lipschitz = inst.lipschitz;
        run.bounds = stepsize_bounds(rule, inst.lipschitz);
        run.trace = crpg_solve(inst.problem, inst.p0, rule, make_stop(c));
        run.trace.seed = c.seed;
        run.trace.config = to_string(rule);
        runs.push_back(std::move(run));
      }
      const auto [f_best, p_star] = best_and_reference(runs);
      for (SolverRun& run : runs) {
        const RateEnvelope env = make_rate_envelope(*inst.spd, run.trace, run.bounds,
                                                    inst.lipschitz, 0.0, inst.dist_qstar_p0);
        run.rate = check_convex_rate(*inst.spd, run.trace, env, f_best, p_star);
        check_decrease(run, result);
        rate_failure(run, result);
        result.nonconvergence = result.nonconvergence || !run.trace.converged;
        const std::string mode = run.solver.substr(5);
        const auto [lo, hi] = lambda_range(run.trace);
        summary.add_row({fmt_int(n), fmt_int(inst.spd->manifold_dimension()), fmt_int(r), mode,
                         fmt_int(run.trace.iterations()), fmt_bool(run.trace.converged),
                         format_real(run.trace.final_cost()), format_real(f_best),
                         format_real(lo), format_real(hi), format_real(inst.lipschitz),
                         format_real(min_decrease_slack(run.trace)),
                         fmt_int(run.rate->checked), fmt_int(run.rate->ambiguous),
                         fmt_int(run.rate->violations),
                         format_real(run.rate->min_gradient_step_slack)});
        for (std::size_t k = 0; k < run.trace.costs.size(); ++k) {
          curve.add_row({fmt_int(n), fmt_int(r), mode, fmt_int(static_cast<long long>(k)),
                         format_real(run.trace.costs[k] - f_best)});
        }
        timing.add_row({fmt_int(n), fmt_int(r), mode, format_real(run.trace.wall_seconds)});
        result.runs.push_back(std::move(run));
      }
    }
  }
  result.tables = {std::move(summary), std::move(curve)};
  result.timing = {std::move(timing)};
  return result;
}

// --- sparse-mean -------------------------------------------------------------------

ExperimentResult run_sparse_mean(const ExperimentConfig& config) {
  const ExperimentConfig c = resolve(config);
  ExperimentResult result;
  CsvTable rows{"sparse_mean_runs",
                {"n", "mu", "run", "solver", "iterations", "converged", "final_objective",
                 "f_best", "sparsity", "prox_converged", "min_sufficient_decrease_slack"},
                {}};
  CsvTable summary{"sparse_mean_summary",
                   {"n", "mu", "solver", "runs", "mean_iterations", "mean_objective",
                    "mean_sparsity"},
                   {}};
  CsvTable timing{"sparse_mean_timing", {"n", "mu", "run", "solver", "wall_seconds"}, {}};

  struct Acc {
    double iterations = 0.0, objective = 0.0, sparsity = 0.0;
    int count = 0;
  };
  std::map<std::tuple<int, double, std::string>, Acc> acc;
  std::vector<std::tuple<int, double, std::string>> order;

  for (int n : c.dimensions) {
    for (int r = 0; r < c.runs; ++r) {
      Rng rng = instance_rng(c.seed, n, r, kSparseSalt);
      const CloudInstance inst = make_sparse_mean_instance(n, *c.points, rng);
      for (double mu : c.mu) {
        const SplitProblem problem =
            make_sparse_mean_problem(inst.hyp, inst.cloud, mu, inst.lipschitz);
        std::vector<SolverRun> runs;
        for (const std::string& mode : modes(c)) {
          const StepsizeRule rule = make_rule(mode, c, inst.lipschitz);
          SolverRun run;
          run.solver = "crpg-" + mode;
          run.bounds = stepsize_bounds(rule, inst.lipschitz);
          run.trace = crpg_solve(problem, inst.p0, rule, make_stop(c));
          run.trace.config = to_string(rule);
          runs.push_back(std::move(run));
        }
        {
          SolverRun run;
          run.solver = "cppa";
          StoppingCriterion stop = make_stop(c);
          stop.cost_change_tol = c.tol;
          run.trace = cppa_solve(inst.cloud, problem, inst.p0, c.cppa_lambda0, stop);
          run.trace.config = "lambda0=" + format_real(c.cppa_lambda0);
          runs.push_back(std::move(run));
        }
        const double f_best = best_and_reference(runs).first;
        for (SolverRun& run : runs) {
          run.dimension = n;
          run.mu = mu;
          run.run = r;
          run.lipschitz = inst.lipschitz;
          run.trace.seed = c.seed;
          const bool crpg = run.solver != "cppa";
          if (crpg) check_decrease(run, result);
          result.nonconvergence = result.nonconvergence || !run.trace.converged;
          const int sparsity = sparsity_count(run.trace.final_point());
          rows.add_row({fmt_int(n), format_real(mu), fmt_int(r), run.solver,
                        fmt_int(run.trace.iterations()), fmt_bool(run.trace.converged),
                        format_real(run.trace.final_cost()), format_real(f_best),
                        fmt_int(sparsity), fmt_bool(run.trace.prox_always_converged),
                        crpg ? format_real(min_decrease_slack(run.trace)) : "nan"});
          timing.add_row({fmt_int(n), format_real(mu), fmt_int(r), run.solver,
                          format_real(run.trace.wall_seconds)});
          const auto key = std::make_tuple(n, mu, run.solver);
          if (!acc.count(key)) order.push_back(key);
          Acc& a = acc[key];
          a.iterations += run.trace.iterations();
          a.objective += run.trace.final_cost();
          a.sparsity += sparsity;
          ++a.count;
          result.runs.push_back(std::move(run));
        }
      }
    }
  }
  for (const auto& key : order) {
    const Acc& a = acc[key];
    summary.add_row({fmt_int(std::get<0>(key)), format_real(std::get<1>(key)), std::get<2>(key),
                     fmt_int(a.count), format_real(a.iterations / a.count),
                     format_real(a.objective / a.count), format_real(a.sparsity / a.count)});
  }
  result.tables = {std::move(rows), std::move(summary)};
  result.timing = {std::move(timing)};
  return result;
}

// --- constrained-mean ----------------------------------------------------------------

ExperimentResult run_constrained_mean(const ExperimentConfig& config) {
  const ExperimentConfig c = resolve(config);
  ExperimentResult result;
  CsvTable rows{"constrained_mean_runs",
                {"n", "run", "solver", "iterations", "converged", "final_objective", "f_best",
                 "dist_to_center", "feasible", "rate_checked", "rate_violations",
                 "min_sufficient_decrease_slack"},
                {}};
  CsvTable equivalence{"constrained_mean_equivalence",
                       {"n", "run", "compared_iterates", "max_coordinate_difference"},
                       {}};
  CsvTable timing{"constrained_mean_timing", {"n", "run", "solver", "wall_seconds"}, {}};

  for (int n : c.dimensions) {
    for (int r = 0; r < c.runs; ++r) {
      Rng rng = instance_rng(c.seed, n, r, kConstrainedSalt);
      const ConstrainedInstance inst = make_constrained_instance(n, *c.points, c.radius, rng);
      const Manifold& m = *inst.base.hyp;
      const double lipschitz = inst.base.lipschitz;
      std::vector<SolverRun> runs;
      for (const std::string& mode : modes(c)) {
        const StepsizeRule rule = make_rule(mode, c, lipschitz);
        SolverRun run;
        run.solver = "crpg-" + mode;
        run.bounds = stepsize_bounds(rule, lipschitz);
        run.trace = crpg_solve(inst.problem, inst.base.p0, rule, make_stop(c));
        run.trace.config = to_string(rule);
        runs.push_back(std::move(run));
      }
      {
        SolverRun run;
        run.solver = "pga";
        run.bounds = {1.0, 1.0};
        run.trace = pga_solve(inst.problem, inst.center, inst.radius, inst.base.p0,
                              1.0 / lipschitz, make_stop(c));
        runs.push_back(std::move(run));
      }
      const auto [f_best, p_star] = best_and_reference(runs);

      const SolverRun* constant = nullptr;
      const SolverRun* pga = nullptr;
      for (SolverRun& run : runs) {
        run.dimension = n;
        run.run = r;
        run.lipschitz = lipschitz;
        run.trace.seed = c.seed;
        const bool crpg = run.solver != "pga";
        if (crpg) {
          const RateEnvelope env =
              make_rate_envelope(m, run.trace, run.bounds, lipschitz, 1.0, inst.dist_qstar_p0);
          run.rate = check_strongly_convex_rate(m, run.trace, env, f_best, p_star);
          rate_failure(run, result);
          check_decrease(run, result);
        }
        result.nonconvergence = result.nonconvergence || !run.trace.converged;
        const double dc = m.dist(run.trace.final_point(), inst.center);
        const bool feasible = dc <= inst.radius + kFeasibilityTol;
        if (!feasible) {
          result.failures.push_back(run.solver + " n=" + std::to_string(n) +
                                    ": final point outside the ball");
        }
        rows.add_row({fmt_int(n), fmt_int(r), run.solver, fmt_int(run.trace.iterations()),
                      fmt_bool(run.trace.converged), format_real(run.trace.final_cost()),
                      format_real(f_best), format_real(dc), fmt_bool(feasible),
                      run.rate ? fmt_int(run.rate->checked) : "0",
                      run.rate ? fmt_int(run.rate->violations) : "0",
                      format_real(min_decrease_slack(run.trace))});
        timing.add_row(
            {fmt_int(n), fmt_int(r), run.solver, format_real(run.trace.wall_seconds)});
      }
      for (const SolverRun& run : runs) {
        if (run.solver == "crpg-constant") constant = &run;
        if (run.solver == "pga") pga = &run;
      }
      if (constant && pga) {
        const std::size_t common =
            std::min(constant->trace.iterates.size(), pga->trace.iterates.size());
        double diff = 0.0;
        for (std::size_t k = 0; k < common; ++k) {
          diff = std::max(diff, (constant->trace.iterates[k].coords - pga->trace.iterates[k].coords)
                                    .cwiseAbs()
                                    .maxCoeff());
        }
        if (diff > kEquivalenceTol || constant->trace.iterates.size() != pga->trace.iterates.size()) {
          result.failures.push_back("crpg-constant and pga iterates differ for n=" +
                                    std::to_string(n));
        }
        equivalence.add_row({fmt_int(n), fmt_int(r), fmt_int(static_cast<long long>(common)),
                             format_real(diff)});
      }
      for (SolverRun& run : runs) result.runs.push_back(std::move(run));
    }
  }
  result.tables = {std::move(rows), std::move(equivalence)};
  result.timing = {std::move(timing)};
  return result;
}

// --- inequality suite ----------------------------------------------------------------

namespace {

struct SlackStats {
  int samples = 0;
  int applicable = 0;
  int violations = 0;
  double min_rel = std::numeric_limits<double>::infinity();
  double sum_rel = 0.0;

  void add(const InequalityReport& r) {
    ++samples;
    if (!r.applicable) return;
    ++applicable;
    if (!r.holds()) ++violations;
    const double rel = r.slack / r.scale;
    min_rel = std::min(min_rel, rel);
    sum_rel += rel;
  }
};

// Halves lambda until the descent condition holds at q and lambda stays below
// 2 / L on the segment from q to its update.
double admissible_lambda(const SplitProblem& problem, const Point& q, double lambda) {
  const Tangent grad = problem.g_gradient(q);
  for (int i = 0; i < kMaxStepHalvings; ++i) {
    const Point t = crpg_iterate(problem, lambda, q).point;
    if (descent_condition_holds(problem, lambda, q, grad, t) &&
        lambda * problem.segment_lipschitz(q, t) < 2.0) {
      return lambda;
    }
    lambda *= 0.5;
  }
  throw std::runtime_error("inequality suite: no admissible stepsize found");
}

struct Sampler {
  std::string geometry;
  SplitProblem problem;
  std::function<Point(Rng&)> draw;
};

}  // namespace

ExperimentResult run_inequality_suite(const ExperimentConfig& config) {
  const ExperimentConfig c = resolve(config);
  ExperimentResult result;
  CsvTable summary{"inequality_summary",
                   {"geometry", "check", "samples", "applicable", "violations",
                    "min_relative_slack", "mean_relative_slack"},
                   {}};
  CsvTable flat_table{"inequality_flat",
                      {"check", "samples", "max_abs_difference", "mismatches", "violations"},
                      {}};
  CsvTable consistency{"inequality_consistency",
                       {"geometry", "samples", "max_abs_difference"},
                       {}};

  Rng setup = instance_rng(c.seed, 0, 0, kInequalitySalt);
  std::vector<Sampler> samplers;
  {
    auto hyp = std::make_shared<const HyperbolicSpace>(3);
    const Point anchor = hyp->random_point(setup);
    std::vector<Point> data;
    for (int i = 0; i < kInequalityCloudSize; ++i) {
      data.push_back(hyp->sample_gaussian(anchor, 1.0, setup));
    }
    DataCloud cloud = make_data_cloud(hyp, std::move(data));
    const L1ProxOptions exact{1e-15, 500};
    SplitProblem problem = make_sparse_mean_problem(hyp, cloud, kInequalityMu, 1.0, exact);
    samplers.push_back({"H3", problem, [hyp](Rng& rng) { return hyp->random_point(rng); }});
  }
  {
    auto spd = std::make_shared<const SpdMatrices>(2);
    const Point q_bar = spd->random_point(setup);
    SplitProblem problem = make_spd_convex_problem(spd, q_bar, c.tau, 1.0);
    samplers.push_back({"P2", problem, [spd](Rng& rng) { return spd->random_point(rng); }});
  }

  const std::vector<ProxGradVariant> variants = {ProxGradVariant::kThm51a,
                                                 ProxGradVariant::kThm51b,
                                                 ProxGradVariant::kCor52};
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (std::size_t g = 0; g < samplers.size(); ++g) {
    const Sampler& s = samplers[g];
    Rng rng = instance_rng(c.seed, static_cast<int>(g) + 1, 0, kInequalitySalt);
    std::map<std::string, SlackStats> stats;
    double max_consistency = 0.0;
    for (int i = 0; i < c.samples; ++i) {
      const Point p = s.draw(rng);
      const Point q = s.draw(rng);
      const double l0 = floor_lipschitz(s.problem.segment_lipschitz(q, q));
      const double lambda = admissible_lambda(s.problem, q, unit(rng) * 1.9 / l0);
      for (ProxGradVariant v : variants) {
        stats[to_string(v)].add(check_prox_grad_inequality(s.problem, p, q, lambda, v));
      }
      SplitProblem local = s.problem;
      local.lipschitz = s.problem.segment_lipschitz(q, crpg_iterate(s.problem, lambda, q).point);
      stats["SuffDec"].add(check_sufficient_decrease(local, q, lambda, DecreaseForm::kLemma));
      const InequalityReport second =
          check_sufficient_decrease(s.problem, q, lambda, DecreaseForm::kSecond);
      stats["SuffDec2"].add(second);
      const InequalityReport cor_pq =
          check_prox_grad_inequality(s.problem, q, q, lambda, ProxGradVariant::kCor52);
      if (cor_pq.applicable && second.applicable) {
        max_consistency = std::max(max_consistency, std::abs(cor_pq.slack - second.slack));
      }
    }
    for (const auto& [name, st] : stats) {
      summary.add_row({s.geometry, name, fmt_int(st.samples), fmt_int(st.applicable),
                       fmt_int(st.violations), format_real(st.min_rel),
                       format_real(st.applicable ? st.sum_rel / st.applicable : 0.0)});
      if (st.violations > 0) {
        result.failures.push_back(s.geometry + " " + name + ": " +
                                  std::to_string(st.violations) + " violations");
      }
    }
    consistency.add_row({s.geometry, fmt_int(c.samples), format_real(max_consistency)});
    if (max_consistency > kConsistencyTol) {
      result.failures.push_back(s.geometry + ": Cor52 at p = q differs from SuffDec2");
    }
  }

  // Flat sanity: on R^3 every coefficient is 1 and each variant reduces to
  // f(p) - f(T) >= l(p, q) + |p - T|^2 / (2 lambda) - |p - q|^2 / (2 lambda).
  {
    const int dim = 3;
    auto flat = std::make_shared<const EuclideanSpace>(dim);
    Rng rng = instance_rng(c.seed, dim, 1, kInequalitySalt);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(dim, dim);
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = normal(rng);
    const Eigen::MatrixXd a = g.transpose() * g / dim + 0.1 * Eigen::MatrixXd::Identity(dim, dim);
    Eigen::VectorXd b(dim);
    for (Eigen::Index i = 0; i < dim; ++i) b(i) = normal(rng);
    const SplitProblem problem = make_flat_quadratic_l1_problem(flat, a, b, kInequalityMu);
    const CurvatureBounds zero{0.0, 0.0};

    std::map<std::string, std::tuple<int, double, int, int>> flat_stats;
    for (int i = 0; i < c.samples; ++i) {
      const Point p = flat->random_point(rng);
      const Point q = flat->random_point(rng);
      const double lambda = unit(rng) / problem.lipschitz;
      const Eigen::VectorXd pv = p.coords.col(0);
      const Eigen::VectorXd qv = q.coords.col(0);
      const Eigen::VectorXd grad = a * (qv - b);
      const Eigen::VectorXd tv = soft_threshold(qv - lambda * grad, lambda * kInequalityMu);
      auto f = [&](const Eigen::VectorXd& x) {
        return 0.5 * (x - b).dot(a * (x - b)) + kInequalityMu * x.lpNorm<1>();
      };
      auto gq = [&](const Eigen::VectorXd& x) { return 0.5 * (x - b).dot(a * (x - b)); };
      const double lin = gq(pv) - gq(qv) - grad.dot(pv - qv);
      const double closed = (f(pv) - f(tv)) - (lin + (pv - tv).squaredNorm() / (2.0 * lambda) -
                                               (pv - qv).squaredNorm() / (2.0 * lambda));
      for (ProxGradVariant v : variants) {
        const InequalityReport r =
            check_prox_grad_inequality(problem, p, q, lambda, v, zero, kFlatMatchTol);
        auto& [count, max_diff, mismatches, violations] = flat_stats[to_string(v)];
        ++count;
        if (!r.applicable) continue;
        const double diff = std::abs(r.slack - closed);
        max_diff = std::max(max_diff, diff);
        if (diff > kFlatMatchTol * r.scale) ++mismatches;
        if (!r.holds()) ++violations;
      }
    }
    for (const auto& [name, st] : flat_stats) {
      const auto& [count, max_diff, mismatches, violations] = st;
      flat_table.add_row({name, fmt_int(count), format_real(max_diff), fmt_int(mismatches),
                          fmt_int(violations)});
      if (mismatches > 0 || violations > 0) {
        result.failures.push_back("flat " + name + ": " + std::to_string(mismatches) +
                                  " mismatches, " + std::to_string(violations) + " violations");
      }
    }
  }

  result.tables = {std::move(summary), std::move(flat_table), std::move(consistency)};
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.experiment == "spd-convex") return run_spd_convex(config);
  if (config.experiment == "sparse-mean") return run_sparse_mean(config);
  if (config.experiment == "constrained-mean") return run_constrained_mean(config);
  if (config.experiment == "check-inequalities") return run_inequality_suite(config);
  throw ConfigError("experiment: unknown value '" + config.experiment + "'");
}

}  // namespace crpg::bench
