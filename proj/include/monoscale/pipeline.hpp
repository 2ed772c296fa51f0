#ifndef MONOSCALE_PIPELINE_HPP
#define MONOSCALE_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "monoscale/dataio.hpp"
#include "monoscale/eval.hpp"
#include "monoscale/imu.hpp"
#include "monoscale/scale.hpp"

namespace monoscale {

/// How each window's start velocity is obtained.
enum class VelocityInit {
  Zero,
  // Backward difference of the scale-corrected monocular positions over
  // the previous frame pair. The scale comes from the driving estimator's
  // current value, falling back to the last raw measurement, then to zero
  // velocity while nothing is available yet.
  MonoFiniteDiff,
  // Ground-truth velocity at the window start; requires ground truth.
  GroundTruth,
};

VelocityInit velocity_init_from_string(const std::string& name);
std::string to_string(VelocityInit v);

enum class EstimatorKind { MaAdd, MaLog, Ar, Kf };

struct PipelineOptions {
  bool run_ma_add = true;
  bool run_ma_log = true;
  bool run_ar = true;
  bool run_kf = true;

  double kf_q = 1e-5;
  double kf_r = 1e-2;
  double kf_p0 = 1.0;
  int ar_order = 4;
  int ar_refit_interval = 50;
  size_t ar_buffer_capacity = 500;

  double eps_inertial = kDefaultInertialEps;
  double eps_monocular = kDefaultMonocularEps;

  VelocityInit vel_init = VelocityInit::MonoFiniteDiff;
  EstimatorKind vel_scale_source = EstimatorKind::MaLog;
  // Scale used for the monocular finite differences until the driving
  // estimator has a value. Without it the bootstrap falls back to the last
  // raw measurement, which starts the feedback loop near zero on gentle
  // trajectories; a rough prior keeps it near the right fixed point.
  std::optional<double> prior_lambda;

  // The first frame pair is skipped by the estimators; its integration error
  // is typically large. gt_include_first_pair restores the asymmetric
  // convention where the reference mean still counts that pair.
  bool skip_first_pair = true;
  bool gt_include_first_pair = false;

  BiasState bias;
};

struct PipelineResult {
  std::vector<SeriesRow> series;
  std::vector<ScaleMeasurement> measurements;  // one per frame pair

  std::optional<double> ma_add;
  std::optional<double> ma_log;
  std::optional<double> ar;
  std::optional<double> kf;
  std::optional<double> lambda_g;

  size_t total_pairs = 0;
  size_t valid_pairs = 0;
  bool ar_disabled = false;
  std::string ar_disabled_reason;
};

/// Runs windowing, IMU integration and the selected estimators over a
/// loaded sequence. Ground truth, when present in the bundle, feeds the
/// running reference scale and the GroundTruth velocity strategy.
PipelineResult run_scale_pipeline(const SequenceBundle& bundle,
                                  const PipelineOptions& options);

/// Ground-truth positions matched to each frame timestamp (nearest
/// neighbor). Throws AlignmentError when a frame has no ground-truth pose
/// within the tolerance (default: 60% of the median ground-truth spacing,
/// at least 1 ms).
std::vector<Vec3> align_gt_positions(const std::vector<FramePose>& gt,
                                     const std::vector<FramePose>& frames,
                                     int64_t tolerance_ns = -1);

/// Builds the full evaluation report for a finished run.
EvaluationReport evaluate_run(const SequenceBundle& bundle,
                              const PipelineOptions& options,
                              const PipelineResult& result);

}  // namespace monoscale

#endif  // MONOSCALE_PIPELINE_HPP
