// Command-line harness for the CRPG experiments.
//
//   bench <experiment> [--dimension N[,N...]] [--seed S] [--mu V[,V...]]
//         [--tau V] [--radius V] [--stepsize constant|backtracking]
//         [--s V --eta V --theta V] [--max-iter K] [--tol T] [--runs R]
//         [--config FILE] [--output DIR]
//
// Exit codes: 0 success, 1 configuration error, 2 assertion failure,
// 3 solver non-convergence.

#include <cstdio>
#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "crpg/bench.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitAssertion = 2;
constexpr int kExitNonConvergence = 3;

}  // namespace

int main(int argc, char** argv) {
  using crpg::bench::ExperimentConfig;
  CLI::App app{"CRPG experiments: spd-convex, sparse-mean, constrained-mean, check-inequalities"};
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.set_version_flag("--version", crpg::bench::version());

  ExperimentConfig config;
  double s = 0.0, eta = 0.0, theta = 0.0;
  int max_iter = 0, points = 0;
  app.add_option("experiment", config.experiment, "Experiment to run")
      ->required()
      ->check(CLI::IsMember({"spd-convex", "sparse-mean", "constrained-mean",
                             "check-inequalities"}));
  app.add_option("--dimension", config.dimensions, "Dimension list")->delimiter(',');
  app.add_option("--seed", config.seed, "Base seed");
  app.add_option("--mu", config.mu, "l1 weight list (sparse-mean)")->delimiter(',');
  app.add_option("--tau", config.tau, "Distance weight (spd-convex)");
  app.add_option("--radius", config.radius, "Ball radius (constrained-mean)");
  app.add_option("--stepsize", config.stepsize, "constant or backtracking; both when omitted");
  auto* s_opt = app.add_option("--s", s, "Backtracking initial guess in units of 1/L");
  auto* eta_opt = app.add_option("--eta", eta, "Backtracking contraction factor");
  auto* theta_opt = app.add_option("--theta", theta, "Backtracking warm-start factor");
  auto* iter_opt = app.add_option("--max-iter", max_iter, "Iteration cap");
  app.add_option("--tol", config.tol, "Tolerance on the gradient-mapping norm");
  app.add_option("--runs", config.runs, "Instances per configuration");
  auto* points_opt = app.add_option("--points", points, "Cloud size N");
  app.add_option("--lipschitz-samples", config.lipschitz_samples,
                 "Ball samples for the spd-convex Lipschitz estimate");
  app.add_option("--cppa-lambda0", config.cppa_lambda0, "Initial CPPA stepsize");
  app.add_option("--samples", config.samples, "Triples per geometry (check-inequalities)");
  app.add_option("--output", config.output, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (s_opt->count()) config.s = s;
  if (eta_opt->count()) config.eta = eta;
  if (theta_opt->count()) config.theta = theta;
  if (iter_opt->count()) config.max_iter = max_iter;
  if (points_opt->count()) config.points = points;

  crpg::bench::ExperimentResult result;
  try {
    config = crpg::bench::resolve(config);
    result = crpg::bench::run_experiment(config);
    crpg::bench::write_result(result, config);
  } catch (const crpg::bench::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAssertion;
  }

  for (const auto& t : result.tables) std::cout << "wrote " << config.output << '/' << t.name << ".csv\n";
  for (const auto& t : result.timing) std::cout << "wrote " << config.output << '/' << t.name << ".csv\n";
  for (const std::string& f : result.failures) std::cerr << "FAILED: " << f << '\n';
  if (!result.failures.empty()) return kExitAssertion;
  if (result.nonconvergence) {
    std::cerr << "warning: at least one solver hit its iteration cap\n";
    return kExitNonConvergence;
  }
  return 0;
}
