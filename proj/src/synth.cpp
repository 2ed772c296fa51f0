#include "monoscale/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>

namespace monoscale {

namespace {

struct KinematicSample {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
  double yaw = 0.0;       // heading about +z
  double yaw_rate = 0.0;  // rad/s
};

KinematicSample eval_trajectory(const SynthConfig& cfg, double t) {
  KinematicSample s;
  switch (cfg.kind) {
    case TrajectoryKind::Hover:
      break;
    case TrajectoryKind::LineConstAccel:
      s.position = 0.5 * cfg.line_accel * t * t;
      s.velocity = cfg.line_accel * t;
      s.acceleration = cfg.line_accel;
      break;
    case TrajectoryKind::Circle: {
      const double r = cfg.circle_radius_m;
      const double w = cfg.circle_rate_rad_s;
      const double th = w * t;
      s.position = Vec3(r * std::cos(th), r * std::sin(th), 0.0);
      s.velocity = Vec3(-r * w * std::sin(th), r * w * std::cos(th), 0.0);
      s.acceleration =
          Vec3(-r * w * w * std::cos(th), -r * w * w * std::sin(th), 0.0);
      // Heading follows the tangent.
      s.yaw = th + std::numbers::pi / 2.0;
      s.yaw_rate = w;
      break;
    }
    case TrajectoryKind::Lissajous: {
      for (int i = 0; i < 3; ++i) {
        const double a = cfg.lissajous_amplitude[i];
        const double w = cfg.lissajous_rate[i];
        s.position[i] = a * std::sin(w * t);
        s.velocity[i] = a * w * std::cos(w * t);
        s.acceleration[i] = -a * w * w * std::sin(w * t);
      }
      // Heading follows the horizontal tangent; the default rates keep the
      // horizontal speed away from zero.
      s.yaw = std::atan2(s.velocity.y(), s.velocity.x());
      const double h2 =
          s.velocity.x() * s.velocity.x() + s.velocity.y() * s.velocity.y();
      s.yaw_rate = (s.velocity.x() * s.acceleration.y() -
                    s.velocity.y() * s.acceleration.x()) /
                   h2;
      break;
    }
    case TrajectoryKind::Dash: {
      s.position = Vec3(cfg.dash_cruise_speed * t, 0.0, 0.0);
      s.velocity = Vec3(cfg.dash_cruise_speed, 0.0, 0.0);
      const double tp = t - cfg.dash_spike_start_s;
      if (tp >= 0.0 && tp <= cfg.dash_spike_duration_s) {
        // Integer number of (1 - cos) cycles: the burst enters and leaves
        // with continuous velocity.
        const double cycles = static_cast<double>(cfg.dash_spike_cycles);
        const double omega =
            2.0 * std::numbers::pi * cycles / cfg.dash_spike_duration_s;
        const double amp = cfg.dash_spike_accel / (omega * omega);
        s.position.x() += amp * (1.0 - std::cos(omega * tp));
        s.velocity.x() += amp * omega * std::sin(omega * tp);
        s.acceleration.x() += cfg.dash_spike_accel * std::cos(omega * tp);
      }
      break;
    }
  }
  return s;
}

Mat3 yaw_rotation(double yaw) {
  Mat3 r;
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return r;
}

int frame_stride(const SynthConfig& cfg) {
  return static_cast<int>(std::llround(cfg.imu_rate_hz / cfg.frame_rate_hz));
}

}  // namespace

TrajectoryKind trajectory_kind_from_string(const std::string& name) {
  if (name == "hover") return TrajectoryKind::Hover;
  if (name == "line") return TrajectoryKind::LineConstAccel;
  if (name == "circle") return TrajectoryKind::Circle;
  if (name == "lissajous") return TrajectoryKind::Lissajous;
  if (name == "dash") return TrajectoryKind::Dash;
  throw InvalidConfigError("unknown trajectory kind '" + name + "'");
}

std::string to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::Hover: return "hover";
    case TrajectoryKind::LineConstAccel: return "line";
    case TrajectoryKind::Circle: return "circle";
    case TrajectoryKind::Lissajous: return "lissajous";
    case TrajectoryKind::Dash: return "dash";
  }
  return "unknown";
}

void SynthConfig::validate() const {
  if (!(duration_s > 0.0)) throw InvalidConfigError("duration must be > 0");
  if (!(imu_rate_hz > 0.0) || !(frame_rate_hz > 0.0)) {
    throw InvalidConfigError("rates must be > 0");
  }
  if (imu_rate_hz < frame_rate_hz) {
    throw InvalidConfigError("imu rate must be >= frame rate");
  }
  const double ratio = imu_rate_hz / frame_rate_hz;
  if (std::abs(ratio - std::llround(ratio)) > 1e-9) {
    throw InvalidConfigError("imu rate must be an integer multiple of frame rate");
  }
  if (!(true_lambda > 0.0)) throw InvalidConfigError("true_lambda must be > 0");
  if (gyro_noise_std < 0.0 || accel_noise_std < 0.0 || mono_noise_frac < 0.0) {
    throw InvalidConfigError("noise levels must be >= 0");
  }
  if (kind == TrajectoryKind::Dash) {
    if (dash_spike_accel < 5.0) {
      throw InvalidConfigError("dash spikes must reach at least 5 m/s^2");
    }
    if (dash_spike_start_s < 0.0 ||
        dash_spike_start_s + dash_spike_duration_s > duration_s) {
      throw InvalidConfigError("dash spike must fit inside the duration");
    }
  }
}

GroundTruth generate_groundtruth(const SynthConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<size_t>(std::llround(cfg.duration_s * cfg.imu_rate_hz));
  GroundTruth gt;
  gt.poses.reserve(n);
  gt.velocities.reserve(n);
  gt.accelerations.reserve(n);
  gt.body_rates.reserve(n);
  for (size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / cfg.imu_rate_hz;
    const KinematicSample s = eval_trajectory(cfg, t);
    FramePose pose;
    pose.t_ns = std::llround(static_cast<double>(k) * 1e9 / cfg.imu_rate_hz);
    pose.position = s.position;
    pose.orientation = yaw_rotation(s.yaw);
    pose.frame = FrameId::world();
    pose.source = PoseSource::GroundTruth;
    Eigen::Quaterniond q(pose.orientation);
    pose.quat_wxyz = Vec4(q.w(), q.x(), q.y(), q.z());
    gt.poses.push_back(std::move(pose));
    gt.velocities.push_back(s.velocity);
    gt.accelerations.push_back(s.acceleration);
    gt.body_rates.push_back(Vec3(0.0, 0.0, s.yaw_rate));
  }
  return gt;
}

std::vector<ImuSample> simulate_imu(const GroundTruth& gt,
                                    const SynthConfig& cfg) {
  std::mt19937 rng(static_cast<uint32_t>(cfg.seed));
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<ImuSample> out;
  out.reserve(gt.poses.size());
  for (size_t k = 0; k < gt.poses.size(); ++k) {
    ImuSample s;
    s.t_ns = gt.poses[k].t_ns;
    s.gyro = gt.body_rates[k] + cfg.gyro_bias;
    s.accel = gt.poses[k].orientation.transpose() *
                  (gt.accelerations[k] + cfg.gravity) +
              cfg.accel_bias;
    if (cfg.gyro_noise_std > 0.0) {
      for (int i = 0; i < 3; ++i) s.gyro[i] += cfg.gyro_noise_std * unit(rng);
    }
    if (cfg.accel_noise_std > 0.0) {
      for (int i = 0; i < 3; ++i) s.accel[i] += cfg.accel_noise_std * unit(rng);
    }
    out.push_back(s);
  }
  return out;
}

std::vector<FramePose> simulate_monocular(const GroundTruth& gt,
                                          const SynthConfig& cfg) {
  const int stride = frame_stride(cfg);
  std::vector<FramePose> out;
  for (size_t k = 0; k < gt.poses.size(); k += stride) {
    FramePose pose = gt.poses[k];
    pose.position /= cfg.true_lambda;
    pose.source = PoseSource::Monocular;
    pose.frame = FrameId::vision();
    out.push_back(std::move(pose));
  }
  if (cfg.mono_noise_frac > 0.0 && out.size() >= 2) {
    double mean_step = 0.0;
    for (size_t i = 1; i < out.size(); ++i) {
      mean_step += (out[i].position - out[i - 1].position).norm();
    }
    mean_step /= static_cast<double>(out.size() - 1);
    const double std = cfg.mono_noise_frac * mean_step;
    // Separate stream from the IMU noise so the two simulators stay
    // independently reproducible.
    std::mt19937 rng(static_cast<uint32_t>(cfg.seed) ^ 0x9e3779b9u);
    std::normal_distribution<double> unit(0.0, 1.0);
    for (FramePose& pose : out) {
      for (int i = 0; i < 3; ++i) pose.position[i] += std * unit(rng);
    }
  }
  return out;
}

std::vector<FramePose> groundtruth_frames(const GroundTruth& gt,
                                          const SynthConfig& cfg) {
  const int stride = frame_stride(cfg);
  std::vector<FramePose> out;
  for (size_t k = 0; k < gt.poses.size(); k += stride) {
    out.push_back(gt.poses[k]);
  }
  return out;
}

std::vector<TimedVelocity> groundtruth_frame_velocities(const GroundTruth& gt,
                                                        const SynthConfig& cfg) {
  const int stride = frame_stride(cfg);
  std::vector<TimedVelocity> out;
  for (size_t k = 0; k < gt.poses.size(); k += stride) {
    out.push_back(TimedVelocity{gt.poses[k].t_ns, gt.velocities[k]});
  }
  return out;
}

SequenceBundle make_bundle(const SynthConfig& cfg) {
  const GroundTruth gt = generate_groundtruth(cfg);
  SequenceBundle bundle;
  bundle.imu = simulate_imu(gt, cfg);
  bundle.mono = simulate_monocular(gt, cfg);
  bundle.gt = groundtruth_frames(gt, cfg);
  bundle.gt_velocities = groundtruth_frame_velocities(gt, cfg);
  bundle.calib = RigidTransform::identity();
  bundle.gravity = cfg.gravity;
  return bundle;
}

}  // namespace monoscale
