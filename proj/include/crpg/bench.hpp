#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crpg/hyperbolic.hpp"
#include "crpg/objectives.hpp"
#include "crpg/solvers.hpp"
#include "crpg/spd.hpp"
#include "crpg/theory.hpp"

namespace crpg::bench {

/// Raised for invalid experiment configurations; the message names the field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Settings shared by every experiment. Unset optionals fall back to the
/// per-experiment defaults listed in README.md. `s` is given in units of 1/L.
struct ExperimentConfig {
  std::string experiment;
  std::vector<int> dimensions;
  std::uint64_t seed = 1;
  double tau = 0.5;
  std::vector<double> mu = {0.1, 0.5, 1.0};
  double radius = 1.0;
  std::string stepsize;  // "constant", "backtracking" or empty for both
  std::optional<double> s;
  std::optional<double> eta;
  std::optional<double> theta;
  std::optional<int> max_iter;
  double tol = 1e-7;
  int runs = 1;
  std::optional<int> points;  // cloud size N
  int lipschitz_samples = 1000;
  double cppa_lambda0 = 1.0;
  int samples = 500;  // triples per geometry in the inequality suite
  std::string output = ".";
};

/// Fills per-experiment defaults and validates; throws ConfigError.
ExperimentConfig resolve(ExperimentConfig config);

/// key=value lines echoing every resolved field.
std::vector<std::string> describe(const ExperimentConfig& config);

/// Version string baked in at build time.
std::string version();

/// Formats a real with 17 significant digits.
std::string format_real(double v);

struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  /// Header line plus rows, newline terminated.
  std::string body() const;
};

/// One solver run kept in memory for checks.
struct SolverRun {
  std::string solver;  // crpg-constant, crpg-backtracking, cppa, pga
  int dimension = 0;
  double mu = 0.0;
  int run = 0;
  double lipschitz = 1.0;
  StepsizeBounds bounds;
  SolverTrace trace;
  std::optional<RateReport> rate;
};

struct ExperimentResult {
  std::vector<CsvTable> tables;  // deterministic content
  std::vector<CsvTable> timing;  // wall-clock columns only
  std::vector<SolverRun> runs;
  std::vector<std::string> failures;  // violated hard assertions
  bool nonconvergence = false;

  const CsvTable& table(const std::string& name) const;
};

/// Writes every table to <dir>/<name>.csv with a '#' comment block.
void write_result(const ExperimentResult& result, const ExperimentConfig& config);

/// Instance seeds derived from (seed, dimension, run, salt).
Rng instance_rng(std::uint64_t seed, int dimension, int run, std::uint64_t salt);

// --- instances ---------------------------------------------------------------

struct SpdInstance {
  std::shared_ptr<const SpdMatrices> spd;
  Point q_bar;
  Point p0;
  double lipschitz = 1.0;  // floored estimate
  double dist_qstar_p0 = 0.0;
  SplitProblem problem;
};

/// Random q_bar and p0; L estimated over B(p0, 2 dist(p0, q_bar)).
SpdInstance make_spd_instance(int n, double tau, int lipschitz_samples, Rng& rng);

struct CloudInstance {
  std::shared_ptr<const HyperbolicSpace> hyp;
  Point anchor;
  DataCloud cloud;
  Point p0;
  double diameter = 0.0;   // D = 2 max_i dist(p0, q_i)
  double lipschitz = 1.0;  // zeta_1(D)
};

/// N Gaussian samples of stddev 1 around a Gaussian anchor; p0 drawn the
/// same way as the anchor.
CloudInstance make_sparse_mean_instance(int n, int points, Rng& rng);

struct ConstrainedInstance {
  CloudInstance base;  // p0 is the ball center
  Point center;
  double radius = 1.0;
  SplitProblem problem;
  double dist_qstar_p0 = 0.0;  // distance from p0 to the unconstrained mean
};

/// Cloud as above; the ball center is exp of a random tangent of length 1.5
/// at the anchor and the solver starts at the center.
ConstrainedInstance make_constrained_instance(int n, int points, double radius, Rng& rng);

// --- experiments -------------------------------------------------------------

ExperimentResult run_spd_convex(const ExperimentConfig& config);
ExperimentResult run_sparse_mean(const ExperimentConfig& config);
ExperimentResult run_constrained_mean(const ExperimentConfig& config);
ExperimentResult run_inequality_suite(const ExperimentConfig& config);

/// Dispatches on config.experiment.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// |x_i| < 1e-8 count over all coordinates.
int sparsity_count(const Point& p);

}  // namespace crpg::bench
