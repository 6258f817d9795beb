#pragma once

// Experiment orchestration: JSON config parsing (strict, fail-fast),
// dataset construction, paired algorithm/enumeration runs, CLI entry
// points, and the named Monte Carlo verification suites.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "agora/agora.hpp"
#include "agora/bounds.hpp"
#include "agora/geometry.hpp"

#include "json.hpp"

namespace agora {

// Invalid or unknown configuration; the message names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataConfig {
  long d_size = 0;
  long e_size = 0;
  bool d_representative = true;
  double d_region_lo = 0.0;  // parameter-space region for non-representative D
  double d_region_hi = 1.0;
  double e_margin = 0.0;  // chord clearance of E points from the label boundary
};

struct TimaeusConfig {
  ClassifierKind kind = ClassifierKind::ball_memory;
  std::optional<double> match_radius;  // ball_memory; defaults to rho/4
  int hidden = 8;                      // mlp width
};

struct ExperimentConfig {
  ManifoldSpec manifold = ManifoldSpec::circle(1.0);
  DataConfig data;
  double rho = 0.2;
  TauMode tau_mode = TauMode::faithful;
  int tau_max_rejections = 64;
  double socrates_noise = 0.0;
  TimaeusConfig timaeus;
  HyperparamSpace theta;
  MSource m_source = MSource::incumbent;
  std::uint64_t master_seed = 0;
  int workers = 1;
};

ExperimentConfig parse_config(const nlohmann::ordered_json& j);
ExperimentConfig load_config_file(const std::string& path);

// Materializes datasets and the full loop input; validates every module
// precondition before anything trains.
AgoraInput build_input(const ExperimentConfig& c);

struct RunOutput {
  AgoraResult result;
  double enum_acc = 0.0;
  double ratio = 0.0;
  RuntimePrediction pred;
  TraceCheck check;  // against the raw (C = 1) prediction
};

RunOutput execute_run(const ExperimentConfig& c);

nlohmann::ordered_json summary_json(const RunOutput& out);
nlohmann::ordered_json bounds_report_json(const BoundsReport& r);
nlohmann::ordered_json runtime_prediction_json(const RuntimePrediction& p);

// Shortest chord distance from x to the manifold's label boundary.
double boundary_distance(const ManifoldSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x);

// --- CLI entry points (exit codes: 0 ok, 2 bad config/args, 3 runtime) ---

int cli_run(const std::string& config_path, const std::string& out_path,
            std::optional<std::uint64_t> seed_override, std::optional<int> workers_override);

struct BoundsArgs {
  std::string manifold = "circle";
  double radius = 1.0;  // length for segment
  double positive_fraction = 0.5;
  double mu_cap = 1e6;
  double rho = 0.0;
  double delta = 0.0;
  long e_size = 100;
  double c_frac = 0.5;
  long size_delta = 0;
  // optional runtime prediction
  std::optional<long> theta_count;
  long theta_size = 1;
  long d_size = 1;
  double s_bar = 1.0;
  std::optional<double> f_bar;  // switches to the SGD-form bound
  long batch_max = 1;
  double L = 0.25;
  double G = 1.0;
  double zeta = 1.0;
};

int cli_bounds(const BoundsArgs& args);

struct DatagenArgs {
  std::string manifold = "circle";
  double radius = 1.0;
  double positive_fraction = 0.5;
  double mu_cap = 1e6;
  long n = 0;
  std::string out;
  std::uint64_t seed = 0;
  std::optional<std::pair<double, double>> region;
};

int cli_datagen(const DatagenArgs& args);

int cli_verify(const std::string& suite, long trials, std::uint64_t seed, int workers);

// --- verification suites ---

struct ClaimResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<ClaimResult> claims;
  bool pass() const;
};

std::vector<std::string> suite_names();

// trials = 0 picks the suite's documented default.
SuiteResult run_suite(const std::string& name, long trials, std::uint64_t seed, int workers);

// The canonical small experiment the floor/ratio/dominance/runtime suites
// share: unit circle, ball-memory learner, faithful perturbations, five
// disjoint candidate sets.
ExperimentConfig idealized_config(std::uint64_t seed, double noise_rate);

// One-candidate logistic run on a segment; enumeration and the loop
// coincide exactly.
ExperimentConfig minimal_config(std::uint64_t seed);

int default_workers();  // AGORA_WORKERS, else 1

}  // namespace agora
