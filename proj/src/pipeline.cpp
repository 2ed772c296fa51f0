#include "monoscale/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace monoscale {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

int64_t default_alignment_tolerance(const std::vector<FramePose>& gt) {
  if (gt.size() < 2) return 1000000;  // 1 ms
  std::vector<int64_t> deltas;
  deltas.reserve(gt.size() - 1);
  for (size_t i = 1; i < gt.size(); ++i) {
    deltas.push_back(gt[i].t_ns - gt[i - 1].t_ns);
  }
  std::nth_element(deltas.begin(), deltas.begin() + deltas.size() / 2,
                   deltas.end());
  return std::max<int64_t>(1000000, deltas[deltas.size() / 2] * 6 / 10);
}

size_t nearest_index(const std::vector<int64_t>& times, int64_t t) {
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0;
  if (it == times.end()) return times.size() - 1;
  const size_t hi = static_cast<size_t>(it - times.begin());
  return (t - times[hi - 1] <= times[hi] - t) ? hi - 1 : hi;
}

}  // namespace

VelocityInit velocity_init_from_string(const std::string& name) {
  if (name == "zero") return VelocityInit::Zero;
  if (name == "mono-fd") return VelocityInit::MonoFiniteDiff;
  if (name == "gt") return VelocityInit::GroundTruth;
  throw InvalidConfigError("unknown velocity init '" + name + "'");
}

std::string to_string(VelocityInit v) {
  switch (v) {
    case VelocityInit::Zero: return "zero";
    case VelocityInit::MonoFiniteDiff: return "mono-fd";
    case VelocityInit::GroundTruth: return "gt";
  }
  return "unknown";
}

std::vector<Vec3> align_gt_positions(const std::vector<FramePose>& gt,
                                     const std::vector<FramePose>& frames,
                                     int64_t tolerance_ns) {
  if (gt.empty()) throw AlignmentError("align_gt_positions: no ground truth");
  if (tolerance_ns < 0) tolerance_ns = default_alignment_tolerance(gt);
  std::vector<int64_t> times;
  times.reserve(gt.size());
  for (const FramePose& p : gt) times.push_back(p.t_ns);

  std::vector<Vec3> out;
  out.reserve(frames.size());
  for (const FramePose& frame : frames) {
    const size_t idx = nearest_index(times, frame.t_ns);
    if (std::abs(frame.t_ns - times[idx]) > tolerance_ns) {
      throw AlignmentError(
          "align_gt_positions: frame at " + std::to_string(frame.t_ns) +
          " ns has no ground-truth pose within " +
          std::to_string(tolerance_ns) + " ns");
    }
    out.push_back(gt[idx].position);
  }
  return out;
}

PipelineResult run_scale_pipeline(const SequenceBundle& bundle,
                                  const PipelineOptions& options) {
  if (bundle.mono.size() < 2) {
    throw InvalidInputError("run_scale_pipeline: need at least two frames");
  }
  if (options.vel_init == VelocityInit::GroundTruth &&
      bundle.gt_velocities.empty() && bundle.gt.empty()) {
    throw InvalidConfigError(
        "run_scale_pipeline: gt velocity init requires ground truth");
  }

  std::vector<FramePairWindow> windows =
      associate_windows(bundle.imu, bundle.mono);

  // Ground-truth positions per frame, for the running reference scale.
  std::vector<Vec3> gt_positions;
  const bool have_gt = !bundle.gt.empty();
  if (have_gt) gt_positions = align_gt_positions(bundle.gt, bundle.mono);

  std::vector<int64_t> gt_vel_times;
  for (const TimedVelocity& v : bundle.gt_velocities) {
    gt_vel_times.push_back(v.t_ns);
  }

  MovingAverage ma_add(MovingAverage::Model::Additive);
  MovingAverage ma_log(MovingAverage::Model::Multiplicative);
  ArFilter ar(options.ar_order, options.ar_refit_interval,
              options.ar_buffer_capacity);
  KalmanState kf;
  kf.process_noise = options.kf_q;
  kf.measurement_noise = options.kf_r;
  bool kf_ready = false;

  PipelineResult result;
  result.total_pairs = windows.size();

  double gt_ratio_sum = 0.0;
  int gt_ratio_count = 0;
  std::optional<double> last_raw_lambda;
  double ar_last = kNan;

  for (size_t w = 0; w < windows.size(); ++w) {
    FramePairWindow& window = windows[w];
    window.gravity = bundle.gravity;

    // Start velocity for this window.
    Vec3 v0 = Vec3::Zero();
    switch (options.vel_init) {
      case VelocityInit::Zero:
        break;
      case VelocityInit::GroundTruth: {
        if (!bundle.gt_velocities.empty()) {
          const size_t idx = nearest_index(gt_vel_times, window.start_t_ns());
          v0 = bundle.gt_velocities[idx].velocity;
        } else if (have_gt && w > 0) {
          // Central difference of the aligned ground-truth positions.
          const size_t j = std::min(w + 1, gt_positions.size() - 1);
          const double dt =
              static_cast<double>(bundle.mono[j].t_ns - bundle.mono[w - 1].t_ns) *
              1e-9;
          if (dt > 0.0) v0 = (gt_positions[j] - gt_positions[w - 1]) / dt;
        }
        break;
      }
      case VelocityInit::MonoFiniteDiff: {
        if (w == 0) break;
        double scale = 0.0;
        std::optional<double> driving;
        switch (options.vel_scale_source) {
          case EstimatorKind::MaAdd: driving = ma_add.estimate(); break;
          case EstimatorKind::MaLog: driving = ma_log.estimate(); break;
          case EstimatorKind::Ar:
            if (std::isfinite(ar_last)) driving = ar_last;
            break;
          case EstimatorKind::Kf:
            if (kf_ready) driving = kf.estimate;
            break;
        }
        if (driving) {
          scale = *driving;
        } else if (options.prior_lambda) {
          scale = *options.prior_lambda;
        } else if (last_raw_lambda) {
          scale = *last_raw_lambda;
        }
        if (scale > 0.0) {
          const double dt =
              static_cast<double>(bundle.mono[w].t_ns - bundle.mono[w - 1].t_ns) *
              1e-9;
          v0 = scale *
               (bundle.mono[w].position - bundle.mono[w - 1].position) / dt;
        }
        break;
      }
    }
    window.start_velocity = v0;

    // Integrate and measure.
    ScaleMeasurement meas;
    meas.pair_i = static_cast<int>(w);
    meas.pair_j = static_cast<int>(w + 1);
    const Vec3 mono_delta =
        bundle.mono[w + 1].position - bundle.mono[w].position;
    if (window.complete) {
      const InertialDelta delta = integrate_window(window, options.bias);
      meas = measure_lambda(delta.translation, mono_delta,
                            options.eps_inertial, options.eps_monocular);
      meas.pair_i = static_cast<int>(w);
      meas.pair_j = static_cast<int>(w + 1);
    }
    result.measurements.push_back(meas);
    if (meas.valid) {
      ++result.valid_pairs;
      last_raw_lambda = meas.lambda;
    }

    const bool feed = !(options.skip_first_pair && w == 0);

    if (feed) {
      if (options.run_ma_add) ma_add.update(meas);
      if (options.run_ma_log) ma_log.update(meas);
      if (options.run_ar && !result.ar_disabled) {
        try {
          ar_last = ar.update(meas);
        } catch (const NotReadyError&) {
          ar_last = kNan;
        } catch (const SingularSystemError& e) {
          result.ar_disabled = true;
          result.ar_disabled_reason = e.what();
          ar_last = kNan;
        }
      }
      if (options.run_kf && meas.valid) {
        if (!kf_ready) {
          kf.estimate = meas.lambda;
          kf.variance = options.kf_p0;
          kf_ready = true;
        } else {
          kf = kf_update(kf_predict(kf), meas.lambda);
        }
      }
    }

    // Running reference scale from ground truth.
    if (have_gt && (feed || options.gt_include_first_pair)) {
      const Vec3 gt_delta = gt_positions[w + 1] - gt_positions[w];
      const double gn = gt_delta.norm();
      const double mn = mono_delta.norm();
      if (gn >= options.eps_inertial && mn >= options.eps_monocular) {
        gt_ratio_sum += gn / mn;
        ++gt_ratio_count;
      }
    }

    SeriesRow row;
    row.frame_index = static_cast<int>(w + 1);
    row.t_ns = bundle.mono[w + 1].t_ns;
    row.lambda_meas = meas.valid ? meas.lambda : kNan;
    row.lambda_ma_add =
        options.run_ma_add ? ma_add.estimate().value_or(kNan) : kNan;
    row.lambda_ma_log =
        options.run_ma_log ? ma_log.estimate().value_or(kNan) : kNan;
    row.lambda_ar = options.run_ar ? ar_last : kNan;
    row.lambda_kf = options.run_kf && kf_ready ? kf.estimate : kNan;
    row.lambda_gt_running =
        gt_ratio_count > 0 ? gt_ratio_sum / gt_ratio_count : kNan;
    result.series.push_back(row);
  }

  if (options.run_ma_add) result.ma_add = ma_add.estimate();
  if (options.run_ma_log) result.ma_log = ma_log.estimate();
  if (options.run_ar && !result.ar_disabled && std::isfinite(ar_last)) {
    result.ar = ar_last;
  }
  if (options.run_kf && kf_ready) result.kf = kf.estimate;
  if (gt_ratio_count > 0) result.lambda_g = gt_ratio_sum / gt_ratio_count;
  return result;
}

EvaluationReport evaluate_run(const SequenceBundle& bundle,
                              const PipelineOptions& options,
                              const PipelineResult& result) {
  if (bundle.gt.empty()) {
    throw InvalidInputError("evaluate_run: ground truth required");
  }
  const std::vector<Vec3> gt_positions =
      align_gt_positions(bundle.gt, bundle.mono);

  // Reference scale over the same pair set the estimators saw.
  std::vector<Vec3> gt_deltas;
  std::vector<Vec3> mono_deltas;
  const size_t first = options.gt_include_first_pair || !options.skip_first_pair
                           ? 0
                           : 1;
  for (size_t w = first; w + 1 < bundle.mono.size(); ++w) {
    gt_deltas.push_back(gt_positions[w + 1] - gt_positions[w]);
    mono_deltas.push_back(bundle.mono[w + 1].position -
                          bundle.mono[w].position);
  }
  EvaluationReport report;
  report.lambda_g = lambda_ground_truth(gt_deltas, mono_deltas,
                                        options.eps_inertial,
                                        options.eps_monocular);

  std::vector<Vec3> mono_positions;
  mono_positions.reserve(bundle.mono.size());
  for (const FramePose& p : bundle.mono) mono_positions.push_back(p.position);

  const auto add_estimator = [&](const std::string& name,
                                 const std::optional<double>& value) {
    if (!value || !std::isfinite(*value)) return;
    report.lambda_hat[name] = *value;
    report.e_lambda[name] = scale_error(report.lambda_g, *value);
    report.rmse_m[name] = rmse(mono_positions, report.lambda_g, *value);
    if (*value > 0.0) {
      report.total_distance[name] =
          total_distance(rescale_trajectory(mono_positions, *value));
    }
  };
  add_estimator("ma_add", result.ma_add);
  add_estimator("ma_log", result.ma_log);
  add_estimator("ar", result.ar);
  add_estimator("kf", result.kf);

  report.total_distance_gt = total_distance(gt_positions);

  double best_err = std::numeric_limits<double>::infinity();
  for (const auto& [name, err] : report.e_lambda) {
    if (err < best_err) {
      best_err = err;
      report.best_estimator = name;
    }
  }
  if (!report.best_estimator.empty() &&
      report.total_distance.count(report.best_estimator) > 0) {
    report.total_distance_best =
        report.total_distance.at(report.best_estimator);
  }
  report.series = result.series;
  return report;
}

}  // namespace monoscale
