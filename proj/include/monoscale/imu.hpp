#ifndef MONOSCALE_IMU_HPP
#define MONOSCALE_IMU_HPP

#include <random>
#include <vector>

#include "monoscale/types.hpp"

namespace monoscale {

/// Constant-per-window sensor biases plus the random-walk variances that
/// drive their evolution. Biases are added to raw measurements during
/// integration; pass zero biases to integrate measurements as-is.
struct BiasState {
  Vec3 accel_bias = Vec3::Zero();  // m/s^2
  Vec3 gyro_bias = Vec3::Zero();   // rad/s
  Vec3 accel_var = Vec3::Zero();   // (m/s^2)^2 per axis
  Vec3 gyro_var = Vec3::Zero();    // (rad/s)^2 per axis
};

enum class BiasWalkMode {
  // b <- b + dt * variance, a deterministic drift of the bias mean.
  Deterministic,
  // b <- b + e, e ~ N(0, variance * dt) per axis. Requires an RNG.
  Sampled,
};

/// The IMU samples bracketed by two consecutive image frames, together with
/// everything integration needs. Sample timestamps live in
/// [start time, end_t_ns); each sample's measurement is held over the
/// interval that starts at its own timestamp, and the first sample extends
/// back to the window start when the grids are offset.
struct FramePairWindow {
  FramePose start_pose;            // frame F_i, already in {W}
  FramePose end_pose;              // frame F_j, already in {W}
  std::vector<ImuSample> samples;  // timestamps in [start, end)
  Vec3 start_velocity = Vec3::Zero();  // m/s in {W} at the start frame
  double dt = 0.0;                 // nominal uniform step, seconds
  Vec3 gravity = Vec3(0.0, 0.0, 9.81);  // {W}, z-up
  int64_t end_t_ns = 0;            // window end (start of F_j)
  bool complete = true;            // false: no samples, or frames off the IMU span

  int64_t start_t_ns() const { return start_pose.t_ns; }
};

/// Relative motion between two frames recovered from IMU integration.
struct InertialDelta {
  Mat3 rotation = Mat3::Identity();     // body rotation F_i -> F_j
  Vec3 velocity_delta = Vec3::Zero();   // m/s, {W}
  Vec3 translation = Vec3::Zero();      // m, {W}
};

/// Per-sample integration steps, seconds. Sample p covers [t_p, t_{p+1}),
/// the last sample runs to the window end, and the first stretches back to
/// the window start.
std::vector<double> sample_steps(const FramePairWindow& window);

/// True when every per-sample step equals the first one at nanosecond
/// resolution (integer timestamps make this exact).
bool has_uniform_steps(const FramePairWindow& window);

/// Product of per-sample rotation increments exp((gyro + bias) * dt),
/// composed left to right in time order.
Mat3 integrate_rotation(const FramePairWindow& window, const BiasState& bias);

/// Sum of world-frame specific accelerations times dt:
///   sum_p [R_p (a_p + b_a) - g] dt_p
/// with one body attitude R_p per sample.
Vec3 integrate_velocity(const FramePairWindow& window, const BiasState& bias,
                        const std::vector<Mat3>& attitudes);

/// Relative translation over the window. For uniform steps this evaluates
/// the closed-form weighted sum
///   N v_i dt + 1/2 sum_p (2(N-1-p)+1) [R_p (a_p + b_a) - g] dt^2,
/// which equals stepping p += v dt + a dt^2 / 2; v += a dt.
/// Non-uniform steps fall back to that per-step loop.
Vec3 integrate_translation(const FramePairWindow& window,
                           const BiasState& bias,
                           const std::vector<Mat3>& attitudes);

/// Attitude of the body at each sample: the start orientation composed with
/// the gyro increments accumulated before that sample.
std::vector<Mat3> propagate_attitudes(const FramePairWindow& window,
                                      const BiasState& bias);

/// Full window integration: attitude propagation from the start pose, then
/// velocity and translation. The rotation is the increment product alone
/// (it does not include the start orientation).
InertialDelta integrate_window(const FramePairWindow& window,
                               const BiasState& bias);

/// Advances the bias random walk by dt. Sampled mode draws a zero-mean
/// Gaussian increment per axis and requires rng.
BiasState propagate_bias(const BiasState& bias, double dt, BiasWalkMode mode,
                         std::mt19937* rng = nullptr);

/// Emits one metric world-frame pose per IMU sample, integrating forward
/// from the last tracked pose. The pose position is taken metric as
/// lambda_hat * last_pose.position; each sample advances the state over the
/// interval ending at its own timestamp (the reading in hand when it fires).
std::vector<FramePose> predict_highrate_pose(const FramePose& last_pose,
                                             double lambda_hat,
                                             const std::vector<ImuSample>& samples,
                                             const BiasState& bias,
                                             const Vec3& velocity,
                                             const Vec3& gravity);

}  // namespace monoscale

#endif  // MONOSCALE_IMU_HPP
