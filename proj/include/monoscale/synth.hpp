#ifndef MONOSCALE_SYNTH_HPP
#define MONOSCALE_SYNTH_HPP

#include <string>
#include <vector>

#include "monoscale/dataio.hpp"
#include "monoscale/imu.hpp"
#include "monoscale/types.hpp"

namespace monoscale {

enum class TrajectoryKind {
  Hover,           // stationary
  LineConstAccel,  // p = a t^2 / 2 from rest
  Circle,          // constant-rate circle, heading follows the tangent
  Lissajous,       // bounded 3-D figure, identity orientation
  Dash,            // cruise with short bursts of hard acceleration
};

TrajectoryKind trajectory_kind_from_string(const std::string& name);
std::string to_string(TrajectoryKind kind);

struct SynthConfig {
  TrajectoryKind kind = TrajectoryKind::Circle;
  double duration_s = 60.0;
  double imu_rate_hz = 200.0;
  double frame_rate_hz = 20.0;
  double true_lambda = 2.31;
  double gyro_noise_std = 0.0;       // rad/s
  double accel_noise_std = 0.0;      // m/s^2
  double mono_noise_frac = 0.0;      // fraction of the mean inter-frame step
  Vec3 accel_bias = Vec3::Zero();
  Vec3 gyro_bias = Vec3::Zero();
  Vec3 gravity = Vec3(0.0, 0.0, 9.81);
  uint64_t seed = 1;

  // Trajectory shape parameters.
  Vec3 line_accel = Vec3(2.0, 0.0, 0.0);      // m/s^2
  double circle_radius_m = 1.0;
  double circle_rate_rad_s = 1.0;
  Vec3 lissajous_amplitude = Vec3(1.0, 0.5, 0.25);  // m
  Vec3 lissajous_rate = Vec3(0.4, 0.8, 1.2);        // rad/s
  double dash_cruise_speed = 0.2;              // m/s along +x
  double dash_spike_accel = 8.0;               // m/s^2 peak, >= 5 required
  double dash_spike_duration_s = 2.0;
  double dash_spike_start_s = 20.0;
  int dash_spike_cycles = 3;                   // full reversals per burst

  void validate() const;
};

/// Analytic trajectory sampled on the IMU clock: pose plus the world-frame
/// velocity/acceleration and body angular rate at every sample.
struct GroundTruth {
  std::vector<FramePose> poses;        // meters, {W}
  std::vector<Vec3> velocities;        // m/s, {W}
  std::vector<Vec3> accelerations;     // m/s^2, {W}, gravity-free
  std::vector<Vec3> body_rates;        // rad/s, body frame
};

GroundTruth generate_groundtruth(const SynthConfig& cfg);

/// Turns the analytic stream into IMU readings:
///   accel = R' (a_world + g) + bias + noise,  gyro = rate + bias + noise
/// so integration against the same gravity recovers a_world exactly in the
/// noise-free case.
std::vector<ImuSample> simulate_imu(const GroundTruth& gt,
                                    const SynthConfig& cfg);

/// Downsamples the ground truth to the frame rate and divides positions by
/// true_lambda, producing the unscaled pose stream a monocular tracker
/// would emit (in {V}; here the calibration is identity so {V} = {W}).
/// Optional zero-mean position noise with std = mono_noise_frac times the
/// mean inter-frame distance.
std::vector<FramePose> simulate_monocular(const GroundTruth& gt,
                                          const SynthConfig& cfg);

/// Ground truth downsampled to the frame rate (poses and velocities), for
/// evaluation and velocity initialization.
std::vector<FramePose> groundtruth_frames(const GroundTruth& gt,
                                          const SynthConfig& cfg);
std::vector<TimedVelocity> groundtruth_frame_velocities(const GroundTruth& gt,
                                                        const SynthConfig& cfg);

/// A complete in-memory sequence: IMU, monocular, ground truth, identity
/// calibration, and the configured gravity.
SequenceBundle make_bundle(const SynthConfig& cfg);

}  // namespace monoscale

#endif  // MONOSCALE_SYNTH_HPP
