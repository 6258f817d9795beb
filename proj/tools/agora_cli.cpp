// Command line front end: run, bounds, datagen, verify.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "agora/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Hyperparameter search with teacher-labeled augmentation"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Execute one configured experiment");
  std::string run_config;
  std::string run_out;
  std::optional<std::uint64_t> run_seed;
  std::optional<int> run_workers;
  run->add_option("--config", run_config, "Experiment config JSON")->required();
  run->add_option("--out", run_out, "Trace CSV output path")->required();
  run->add_option("--seed", run_seed, "Override the config master seed");
  run->add_option("--workers", run_workers, "Override the worker count");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Print sample-size and runtime bounds");
  agora::BoundsArgs ba;
  bounds->add_option("--manifold", ba.manifold, "circle, sphere, or segment")->required();
  bounds->add_option("--radius", ba.radius, "Radius (circle/sphere) or length (segment)")
      ->required();
  bounds->add_option("--rho", ba.rho, "Feature scale rho")->required();
  bounds->add_option("--delta", ba.delta, "Failure probability delta")->required();
  bounds->add_option("--positive-fraction", ba.positive_fraction,
                     "Fraction of the manifold labeled positive");
  bounds->add_option("--mu-cap", ba.mu_cap, "Condition-number cap for segments");
  bounds->add_option("--e-size", ba.e_size, "Evaluation set size for the kappa bound");
  bounds->add_option("--c-frac", ba.c_frac, "Covered fraction c in the kappa bound");
  bounds->add_option("--size-delta", ba.size_delta, "Uncovered remainder size");
  bounds->add_option("--theta-count", ba.theta_count,
                     "Candidate count; enables the runtime prediction");
  bounds->add_option("--theta-size", ba.theta_size, "Atoms per candidate");
  bounds->add_option("--d-size", ba.d_size, "Training set size");
  bounds->add_option("--s-bar", ba.s_bar, "Mean teacher latency");
  bounds->add_option("--f-bar", ba.f_bar, "Mean model flop cost; switches to the SGD form");
  bounds->add_option("--batch-max", ba.batch_max, "Largest batch size");
  bounds->add_option("--L", ba.L, "Smoothness constant");
  bounds->add_option("--G", ba.G, "Gradient norm bound");
  bounds->add_option("--zeta", ba.zeta, "Convergence tolerance");

  // datagen
  auto* datagen = app.add_subcommand("datagen", "Sample a labeled dataset to CSV");
  agora::DatagenArgs da;
  std::vector<double> region;
  datagen->add_option("--manifold", da.manifold, "circle, sphere, or segment")->required();
  datagen->add_option("--radius", da.radius, "Radius (circle/sphere) or length (segment)")
      ->required();
  datagen->add_option("--n", da.n, "Number of points")->required();
  datagen->add_option("--out", da.out, "Output CSV path")->required();
  datagen->add_option("--seed", da.seed, "Master seed");
  datagen->add_option("--positive-fraction", da.positive_fraction,
                      "Fraction of the manifold labeled positive");
  datagen->add_option("--mu-cap", da.mu_cap, "Condition-number cap for segments");
  datagen->add_option("--region", region, "Parameter-space restriction lo hi")
      ->expected(2);

  // verify
  auto* verify = app.add_subcommand("verify", "Run a named verification suite");
  std::string suite;
  long trials = 0;
  std::uint64_t vseed = 1;
  std::optional<int> vworkers;
  verify->add_option("--suite", suite, "Suite name")->required();
  verify->add_option("--trials", trials, "Trial count (0 = suite default)");
  verify->add_option("--seed", vseed, "Base seed");
  verify->add_option("--workers", vworkers, "Parallel trial workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (run->parsed()) {
    std::optional<int> workers = run_workers;
    if (!workers && std::getenv("AGORA_WORKERS")) workers = agora::default_workers();
    return agora::cli_run(run_config, run_out, run_seed, workers);
  }
  if (bounds->parsed()) return agora::cli_bounds(ba);
  if (datagen->parsed()) {
    if (!region.empty()) da.region = {region[0], region[1]};
    return agora::cli_datagen(da);
  }
  if (verify->parsed())
    return agora::cli_verify(suite, trials, vseed,
                             vworkers ? *vworkers : agora::default_workers());
  return 2;
}
