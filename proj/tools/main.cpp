#include <CLI11.hpp>

#include "monoscale/cli.hpp"

namespace {

void add_estimator_options(CLI::App* cmd, monoscale::RunConfig& config) {
  cmd->add_option("--estimator", config.estimator,
                  "ma-add | ma-log | ar | kf | all")
      ->default_val(config.estimator);
  cmd->add_option("--kf-q", config.kf_q, "Kalman process noise variance");
  cmd->add_option("--kf-r", config.kf_r, "Kalman measurement noise variance");
  cmd->add_option("--kf-p0", config.kf_p0, "Kalman initial variance");
  cmd->add_option("--ar-order", config.ar_order, "AR filter order");
  cmd->add_option("--vel-init", config.vel_init, "zero | mono-fd | gt");
  cmd->add_option("--prior-lambda", config.prior_lambda,
                  "Rough prior scale seeding the mono-fd bootstrap");
  cmd->add_flag("--include-first-pair", config.include_first_pair,
                "Feed the first frame pair to the estimators too");
  cmd->add_option("--gravity", config.gravity_csv,
                  "Gravity override as X,Y,Z in m/s^2");
}

void add_input_options(CLI::App* cmd, monoscale::RunConfig& config,
                       bool with_gt) {
  cmd->add_option("--imu", config.imu_path, "IMU CSV file");
  cmd->add_option("--poses", config.poses_path, "Monocular TUM trajectory");
  if (with_gt) cmd->add_option("--gt", config.gt_path, "Ground-truth CSV");
  cmd->add_option("--calib", config.calib_path, "Calibration config file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metric scale recovery for monocular trajectories from IMU data"};
  app.require_subcommand(1);

  monoscale::RunConfig config;

  CLI::App* estimate =
      app.add_subcommand("estimate", "Estimate the scale coefficient");
  add_input_options(estimate, config, /*with_gt=*/true);  // gt feeds --vel-init gt
  add_estimator_options(estimate, config);
  estimate->add_option("--out", config.out_dir, "Output directory");

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Estimate and score against ground truth");
  add_input_options(evaluate, config, /*with_gt=*/true);
  add_estimator_options(evaluate, config);
  evaluate->add_option("--out", config.out_dir, "Output directory");

  CLI::App* simulate =
      app.add_subcommand("simulate", "Generate a synthetic sequence");
  simulate->add_option("--traj", config.trajectory,
                       "hover | line | circle | lissajous | dash");
  simulate->add_option("--duration", config.duration_s, "Seconds");
  simulate->add_option("--imu-rate", config.imu_rate_hz, "Hz");
  simulate->add_option("--frame-rate", config.frame_rate_hz, "Hz");
  simulate->add_option("--lambda", config.true_lambda, "True scale coefficient");
  simulate->add_option("--accel-noise", config.accel_noise,
                       "Accelerometer noise std, m/s^2");
  simulate->add_option("--gyro-noise", config.gyro_noise,
                       "Gyroscope noise std, rad/s");
  simulate->add_option("--mono-noise-frac", config.mono_noise_frac,
                       "Monocular position noise as a fraction of the mean step");
  simulate->add_option("--circle-radius", config.circle_radius, "Meters");
  simulate->add_option("--circle-rate", config.circle_rate, "Rad/s");
  simulate->add_option("--gravity", config.gravity_csv, "X,Y,Z in m/s^2");
  simulate->add_option("--seed", config.seed, "RNG seed");
  simulate->add_option("--out", config.out_dir, "Output directory");

  CLI::App* rescale =
      app.add_subcommand("rescale", "Apply a scale factor to a trajectory");
  rescale->add_option("--poses", config.poses_path, "Monocular TUM trajectory");
  rescale->add_option("--lambda", config.lambda, "Scale factor");
  rescale->add_option("--lambda-from", config.lambda_from,
                      "Summary file to read lambda_hat from");
  rescale->add_option("--estimator", config.estimator,
                      "Which estimate to read with --lambda-from");
  rescale->add_option("--out", config.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : monoscale::kExitUsage;
  }

  if (estimate->parsed()) {
    config.subcommand = "estimate";
    return monoscale::run_estimate(config);
  }
  if (evaluate->parsed()) {
    config.subcommand = "evaluate";
    return monoscale::run_evaluate(config);
  }
  if (simulate->parsed()) {
    config.subcommand = "simulate";
    return monoscale::run_simulate(config);
  }
  config.subcommand = "rescale";
  return monoscale::run_rescale(config);
}
