#ifndef MONOSCALE_CLI_HPP
#define MONOSCALE_CLI_HPP

#include <string>

#include "monoscale/pipeline.hpp"
#include "monoscale/synth.hpp"

namespace monoscale {

// Stable exit codes, also documented in the README.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;         // malformed command line
constexpr int kExitInput = 2;         // missing or ill-formed input files
constexpr int kExitNoValidPairs = 3;  // every frame pair was degenerate
constexpr int kExitAlignment = 4;     // timestamp alignment failure
constexpr int kExitConfig = 5;        // configuration value out of range

/// Parsed command line for one run. Paths are empty when not given.
struct RunConfig {
  std::string subcommand;

  std::string imu_path;
  std::string poses_path;
  std::string gt_path;
  std::string calib_path;
  std::string out_dir = ".";

  std::string estimator = "ma-log";  // ma-add | ma-log | ar | kf | all
  double kf_q = 1e-5;
  double kf_r = 1e-2;
  double kf_p0 = 1.0;
  int ar_order = 4;
  std::string vel_init = "mono-fd";  // zero | mono-fd | gt
  double prior_lambda = 0.0;         // > 0 seeds the mono-fd bootstrap
  bool include_first_pair = false;
  std::string gravity_csv;           // "x,y,z" override

  double lambda = 0.0;               // rescale scale factor
  std::string lambda_from;           // summary file to read lambda_hat from

  // simulate
  std::string trajectory = "circle";
  double duration_s = 60.0;
  double imu_rate_hz = 200.0;
  double frame_rate_hz = 20.0;
  double true_lambda = 2.31;
  double accel_noise = 0.0;
  double gyro_noise = 0.0;
  double mono_noise_frac = 0.0;
  double circle_radius = 1.0;
  double circle_rate = 1.0;
  uint64_t seed = 1;
};

/// Runs one subcommand end to end; returns the process exit code and writes
/// diagnostics to stderr. Summaries go to stdout only.
int run_estimate(const RunConfig& config);
int run_evaluate(const RunConfig& config);
int run_simulate(const RunConfig& config);
int run_rescale(const RunConfig& config);

/// Translates the run config into pipeline options (estimator selection,
/// filter parameters, velocity strategy).
PipelineOptions make_pipeline_options(const RunConfig& config);

/// Builds the simulator config for `simulate`.
SynthConfig make_synth_config(const RunConfig& config);

/// Renders the flat key = value estimate summary.
std::string render_estimate_summary(const RunConfig& config,
                                    const PipelineResult& result);

}  // namespace monoscale

#endif  // MONOSCALE_CLI_HPP
