#include "monoscale/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace monoscale {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Vec3 parse_gravity_csv(const std::string& csv) {
  Vec3 g;
  std::istringstream is(csv);
  std::string field;
  for (int i = 0; i < 3; ++i) {
    if (!std::getline(is, field, ',')) {
      throw InvalidConfigError("gravity override needs three comma-separated values");
    }
    try {
      g[i] = std::stod(field);
    } catch (const std::exception&) {
      throw InvalidConfigError("bad gravity component '" + field + "'");
    }
  }
  if (std::getline(is, field, ',')) {
    throw InvalidConfigError("gravity override needs exactly three values");
  }
  return g;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out.is_open()) {
    throw Error(path.string() + ": cannot open for writing");
  }
  out << content;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["imu"] = c.imu_path;
  j["poses"] = c.poses_path;
  j["gt"] = c.gt_path;
  j["calib"] = c.calib_path;
  j["out"] = c.out_dir;
  j["estimator"] = c.estimator;
  j["kf_q"] = c.kf_q;
  j["kf_r"] = c.kf_r;
  j["kf_p0"] = c.kf_p0;
  j["ar_order"] = c.ar_order;
  j["vel_init"] = c.vel_init;
  j["include_first_pair"] = c.include_first_pair;
  j["gravity"] = c.gravity_csv;
  j["lambda"] = c.lambda;
  j["lambda_from"] = c.lambda_from;
  j["trajectory"] = c.trajectory;
  j["duration_s"] = c.duration_s;
  j["imu_rate_hz"] = c.imu_rate_hz;
  j["frame_rate_hz"] = c.frame_rate_hz;
  j["true_lambda"] = c.true_lambda;
  j["accel_noise"] = c.accel_noise;
  j["gyro_noise"] = c.gyro_noise;
  j["mono_noise_frac"] = c.mono_noise_frac;
  j["circle_radius"] = c.circle_radius;
  j["circle_rate"] = c.circle_rate;
  j["seed"] = c.seed;
  return j;
}

void write_manifest(const RunConfig& config,
                    const std::vector<std::string>& outputs) {
  json j;
  j["tool"] = "monoscale";
  j["version"] = kVersion;
  j["command"] = config.subcommand;
  j["seed"] = config.seed;
  j["config"] = config_to_json(config);
  j["outputs"] = outputs;
  write_text_file(fs::path(config.out_dir) / "manifest.json", j.dump(2) + "\n");
}

SequenceBundle load_inputs(const RunConfig& config, bool need_gt) {
  if (config.imu_path.empty()) {
    throw InvalidInputError("missing --imu input");
  }
  if (config.poses_path.empty()) {
    throw InvalidInputError("missing --poses input");
  }
  if (config.calib_path.empty()) {
    throw InvalidInputError("missing --calib input");
  }
  if (need_gt && config.gt_path.empty()) {
    throw InvalidInputError("missing --gt input");
  }
  SequenceBundle bundle = load_sequence(config.imu_path, config.poses_path,
                                        config.gt_path, config.calib_path);
  if (!config.gravity_csv.empty()) {
    bundle.gravity = parse_gravity_csv(config.gravity_csv);
  }
  return bundle;
}

int map_exception(const std::exception& e) {
  std::cerr << "monoscale: " << e.what() << "\n";
  if (dynamic_cast<const AlignmentError*>(&e)) return kExitAlignment;
  if (dynamic_cast<const NoValidPairsError*>(&e)) return kExitNoValidPairs;
  if (dynamic_cast<const InvalidConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const IntegrityError*>(&e) ||
      dynamic_cast<const InvalidInputError*>(&e)) {
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace

PipelineOptions make_pipeline_options(const RunConfig& config) {
  PipelineOptions options;
  const std::string& e = config.estimator;
  if (e != "all" && e != "ma-add" && e != "ma-log" && e != "ar" && e != "kf") {
    throw InvalidConfigError("unknown estimator '" + e + "'");
  }
  options.run_ma_add = e == "all" || e == "ma-add";
  options.run_ma_log = e == "all" || e == "ma-log";
  options.run_ar = e == "all" || e == "ar";
  options.run_kf = e == "all" || e == "kf";
  if (!(config.kf_r > 0.0)) throw InvalidConfigError("--kf-r must be > 0");
  if (config.kf_q < 0.0) throw InvalidConfigError("--kf-q must be >= 0");
  if (!(config.kf_p0 > 0.0)) throw InvalidConfigError("--kf-p0 must be > 0");
  if (config.ar_order < 1) throw InvalidConfigError("--ar-order must be >= 1");
  options.kf_q = config.kf_q;
  options.kf_r = config.kf_r;
  options.kf_p0 = config.kf_p0;
  options.ar_order = config.ar_order;
  options.vel_init = velocity_init_from_string(config.vel_init);
  if (config.prior_lambda != 0.0) {
    if (config.prior_lambda < 0.0) {
      throw InvalidConfigError("--prior-lambda must be > 0");
    }
    options.prior_lambda = config.prior_lambda;
  }
  options.skip_first_pair = !config.include_first_pair;
  // Monocular finite differences are scaled by the selected estimator,
  // by the multiplicative mean when all of them run.
  if (e == "ma-add") options.vel_scale_source = EstimatorKind::MaAdd;
  else if (e == "ar") options.vel_scale_source = EstimatorKind::Ar;
  else if (e == "kf") options.vel_scale_source = EstimatorKind::Kf;
  else options.vel_scale_source = EstimatorKind::MaLog;
  return options;
}

SynthConfig make_synth_config(const RunConfig& config) {
  SynthConfig synth;
  synth.kind = trajectory_kind_from_string(config.trajectory);
  synth.duration_s = config.duration_s;
  synth.imu_rate_hz = config.imu_rate_hz;
  synth.frame_rate_hz = config.frame_rate_hz;
  synth.true_lambda = config.true_lambda;
  synth.accel_noise_std = config.accel_noise;
  synth.gyro_noise_std = config.gyro_noise;
  synth.mono_noise_frac = config.mono_noise_frac;
  synth.circle_radius_m = config.circle_radius;
  synth.circle_rate_rad_s = config.circle_rate;
  synth.seed = config.seed;
  if (!config.gravity_csv.empty()) {
    synth.gravity = parse_gravity_csv(config.gravity_csv);
  }
  synth.validate();
  return synth;
}

std::string render_estimate_summary(const RunConfig& config,
                                    const PipelineResult& result) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  std::ostringstream os;
  os << "pairs.total = " << result.total_pairs << "\n";
  os << "pairs.valid = " << result.valid_pairs << "\n";
  const PipelineOptions options = make_pipeline_options(config);
  if (options.run_ma_add) {
    os << "lambda_hat.ma_add = " << fmt_double(result.ma_add.value_or(nan)) << "\n";
  }
  if (options.run_ma_log) {
    os << "lambda_hat.ma_log = " << fmt_double(result.ma_log.value_or(nan)) << "\n";
  }
  if (options.run_ar) {
    os << "lambda_hat.ar = " << fmt_double(result.ar.value_or(nan)) << "\n";
    if (result.ar_disabled) {
      os << "ar.disabled_reason = " << result.ar_disabled_reason << "\n";
    }
  }
  if (options.run_kf) {
    os << "lambda_hat.kf = " << fmt_double(result.kf.value_or(nan)) << "\n";
  }
  if (result.lambda_g) {
    os << "lambda_g = " << fmt_double(*result.lambda_g) << "\n";
  }
  os << "vel_init = " << config.vel_init << "\n";
  return os.str();
}

int run_estimate(const RunConfig& config) {
  try {
    const SequenceBundle bundle = load_inputs(config, /*need_gt=*/false);
    const PipelineOptions options = make_pipeline_options(config);
    const PipelineResult result = run_scale_pipeline(bundle, options);
    if (result.valid_pairs == 0) {
      throw NoValidPairsError("estimate: every frame pair was degenerate");
    }
    fs::create_directories(config.out_dir);
    const std::string summary = render_estimate_summary(config, result);
    write_text_file(fs::path(config.out_dir) / "summary.txt", summary);
    write_text_file(fs::path(config.out_dir) / "series.csv",
                    render_series_csv(result.series));
    write_manifest(config, {"summary.txt", "series.csv"});
    std::cout << summary;
    return kExitOk;
  } catch (const std::exception& e) {
    return map_exception(e);
  }
}

int run_evaluate(const RunConfig& config) {
  try {
    const SequenceBundle bundle = load_inputs(config, /*need_gt=*/true);
    const PipelineOptions options = make_pipeline_options(config);
    const PipelineResult result = run_scale_pipeline(bundle, options);
    if (result.valid_pairs == 0) {
      throw NoValidPairsError("evaluate: every frame pair was degenerate");
    }
    const EvaluationReport report = evaluate_run(bundle, options, result);
    fs::create_directories(config.out_dir);
    const std::string text = render_report(report);
    write_text_file(fs::path(config.out_dir) / "report.txt", text);
    write_text_file(fs::path(config.out_dir) / "series.csv",
                    render_series_csv(report.series));
    write_manifest(config, {"report.txt", "series.csv"});
    std::cout << text;
    return kExitOk;
  } catch (const std::exception& e) {
    return map_exception(e);
  }
}

int run_simulate(const RunConfig& config) {
  try {
    const SynthConfig synth = make_synth_config(config);
    const GroundTruth gt = generate_groundtruth(synth);
    fs::create_directories(config.out_dir);
    const fs::path out(config.out_dir);
    write_imu_csv((out / "imu.csv").string(), simulate_imu(gt, synth));
    write_pose_tum((out / "mono.tum").string(), simulate_monocular(gt, synth));
    write_gt_csv((out / "gt.csv").string(), groundtruth_frames(gt, synth),
                 groundtruth_frame_velocities(gt, synth));
    CalibConfig calib;
    calib.gravity = synth.gravity;
    write_calib_config((out / "calib.cfg").string(), calib);
    write_manifest(config, {"imu.csv", "mono.tum", "gt.csv", "calib.cfg"});
    std::cout << "wrote " << (out / "imu.csv").string() << ", mono.tum, gt.csv, calib.cfg\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return map_exception(e);
  }
}

namespace {

double lambda_from_summary(const std::string& path,
                           const std::string& estimator) {
  std::ifstream in(path);
  if (!in.is_open()) throw ParseError(path + ": cannot open file");
  std::string key = "lambda_hat." + estimator;
  for (auto& c : key) {
    if (c == '-') c = '_';
  }
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string k = line.substr(0, eq);
    k.erase(k.find_last_not_of(" \t") + 1);
    if (k == key) return std::stod(line.substr(eq + 1));
  }
  throw ParseError(path + ": no '" + key + "' entry");
}

}  // namespace

int run_rescale(const RunConfig& config) {
  try {
    if (config.poses_path.empty()) {
      throw InvalidInputError("missing --poses input");
    }
    double lambda = config.lambda;
    if (!config.lambda_from.empty()) {
      lambda = lambda_from_summary(config.lambda_from, config.estimator);
    }
    if (!(lambda > 0.0)) {
      throw InvalidConfigError("rescale needs --lambda > 0 or --lambda-from");
    }
    std::vector<FramePose> poses =
        parse_pose_file(config.poses_path, PoseFileFormat::TumTxt);
    for (FramePose& pose : poses) pose.position *= lambda;
    fs::create_directories(config.out_dir);
    const fs::path out_file = fs::path(config.out_dir) / "rescaled.tum";
    write_pose_tum(out_file.string(), poses);
    write_manifest(config, {"rescaled.tum"});
    std::cout << "lambda = " << fmt_double(lambda) << "\n"
              << "poses = " << poses.size() << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return map_exception(e);
  }
}

}  // namespace monoscale
