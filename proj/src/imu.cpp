#include "monoscale/imu.hpp"

#include <cmath>
#include <string>

namespace monoscale {

namespace {

constexpr double kNsToSec = 1e-9;

void check_window(const FramePairWindow& window, const char* op) {
  if (window.samples.empty()) {
    throw InvalidInputError(std::string(op) + ": window has no samples");
  }
  if (window.end_t_ns <= window.start_t_ns()) {
    throw InvalidInputError(std::string(op) + ": window duration must be > 0");
  }
}

}  // namespace

std::vector<double> sample_steps(const FramePairWindow& window) {
  check_window(window, "sample_steps");
  const auto& s = window.samples;
  std::vector<double> steps(s.size());
  for (size_t p = 0; p + 1 < s.size(); ++p) {
    steps[p] = static_cast<double>(s[p + 1].t_ns - s[p].t_ns) * kNsToSec;
  }
  steps.back() = static_cast<double>(window.end_t_ns - s.back().t_ns) * kNsToSec;
  // First sample also covers any gap between the window start and its stamp.
  steps.front() +=
      static_cast<double>(s.front().t_ns - window.start_t_ns()) * kNsToSec;
  for (double dt : steps) {
    if (dt <= 0.0) {
      throw InvalidInputError("sample_steps: non-positive step in window");
    }
  }
  return steps;
}

bool has_uniform_steps(const FramePairWindow& window) {
  check_window(window, "has_uniform_steps");
  const auto& s = window.samples;
  if (s.front().t_ns != window.start_t_ns()) return false;
  const int64_t step = window.end_t_ns - s.back().t_ns;
  for (size_t p = 0; p + 1 < s.size(); ++p) {
    if (s[p + 1].t_ns - s[p].t_ns != step) return false;
  }
  return step > 0;
}

Mat3 integrate_rotation(const FramePairWindow& window, const BiasState& bias) {
  check_window(window, "integrate_rotation");
  const std::vector<double> steps = sample_steps(window);
  Mat3 r = Mat3::Identity();
  for (size_t p = 0; p < window.samples.size(); ++p) {
    const Vec3 w = (window.samples[p].gyro + bias.gyro_bias) * steps[p];
    r = r * exp_so3(w);
  }
  return r;
}

Vec3 integrate_velocity(const FramePairWindow& window, const BiasState& bias,
                        const std::vector<Mat3>& attitudes) {
  check_window(window, "integrate_velocity");
  if (attitudes.size() != window.samples.size()) {
    throw InvalidInputError(
        "integrate_velocity: need one attitude per sample");
  }
  const std::vector<double> steps = sample_steps(window);
  Vec3 dv = Vec3::Zero();
  for (size_t p = 0; p < window.samples.size(); ++p) {
    const Vec3 a_world =
        attitudes[p] * (window.samples[p].accel + bias.accel_bias) -
        window.gravity;
    dv += a_world * steps[p];
  }
  return dv;
}

Vec3 integrate_translation(const FramePairWindow& window,
                           const BiasState& bias,
                           const std::vector<Mat3>& attitudes) {
  check_window(window, "integrate_translation");
  if (attitudes.size() != window.samples.size()) {
    throw InvalidInputError(
        "integrate_translation: need one attitude per sample");
  }
  const size_t n = window.samples.size();
  if (has_uniform_steps(window)) {
    const double dt =
        static_cast<double>(window.end_t_ns - window.samples.back().t_ns) *
        kNsToSec;
    Vec3 t = static_cast<double>(n) * window.start_velocity * dt;
    Vec3 weighted = Vec3::Zero();
    for (size_t p = 0; p < n; ++p) {
      const double coeff = 2.0 * static_cast<double>(n - 1 - p) + 1.0;
      const Vec3 a_world =
          attitudes[p] * (window.samples[p].accel + bias.accel_bias) -
          window.gravity;
      weighted += coeff * a_world;
    }
    return t + 0.5 * weighted * dt * dt;
  }
  // Non-uniform steps: per-step position/velocity update.
  const std::vector<double> steps = sample_steps(window);
  Vec3 v = window.start_velocity;
  Vec3 t = Vec3::Zero();
  for (size_t p = 0; p < n; ++p) {
    const double dt = steps[p];
    const Vec3 a_world =
        attitudes[p] * (window.samples[p].accel + bias.accel_bias) -
        window.gravity;
    t += v * dt + 0.5 * a_world * dt * dt;
    v += a_world * dt;
  }
  return t;
}

std::vector<Mat3> propagate_attitudes(const FramePairWindow& window,
                                      const BiasState& bias) {
  check_window(window, "propagate_attitudes");
  const std::vector<double> steps = sample_steps(window);
  std::vector<Mat3> attitudes(window.samples.size());
  Mat3 r = window.start_pose.orientation;
  for (size_t p = 0; p < window.samples.size(); ++p) {
    attitudes[p] = r;
    const Vec3 w = (window.samples[p].gyro + bias.gyro_bias) * steps[p];
    r = r * exp_so3(w);
  }
  return attitudes;
}

InertialDelta integrate_window(const FramePairWindow& window,
                               const BiasState& bias) {
  const std::vector<Mat3> attitudes = propagate_attitudes(window, bias);
  InertialDelta delta;
  delta.rotation = integrate_rotation(window, bias);
  delta.velocity_delta = integrate_velocity(window, bias, attitudes);
  delta.translation = integrate_translation(window, bias, attitudes);
  return delta;
}

BiasState propagate_bias(const BiasState& bias, double dt, BiasWalkMode mode,
                         std::mt19937* rng) {
  if (!(dt > 0.0)) {
    throw InvalidInputError("propagate_bias: dt must be > 0");
  }
  BiasState out = bias;
  switch (mode) {
    case BiasWalkMode::Deterministic:
      out.accel_bias += dt * bias.accel_var;
      out.gyro_bias += dt * bias.gyro_var;
      break;
    case BiasWalkMode::Sampled: {
      if (rng == nullptr) {
        throw InvalidInputError("propagate_bias: sampled mode needs an RNG");
      }
      std::normal_distribution<double> unit(0.0, 1.0);
      for (int i = 0; i < 3; ++i) {
        out.accel_bias[i] += std::sqrt(bias.accel_var[i] * dt) * unit(*rng);
        out.gyro_bias[i] += std::sqrt(bias.gyro_var[i] * dt) * unit(*rng);
      }
      break;
    }
  }
  return out;
}

std::vector<FramePose> predict_highrate_pose(const FramePose& last_pose,
                                             double lambda_hat,
                                             const std::vector<ImuSample>& samples,
                                             const BiasState& bias,
                                             const Vec3& velocity,
                                             const Vec3& gravity) {
  if (!(lambda_hat > 0.0)) {
    throw InvalidInputError("predict_highrate_pose: lambda_hat must be > 0");
  }
  std::vector<FramePose> out;
  if (samples.empty()) return out;
  out.reserve(samples.size());

  Vec3 p = lambda_hat * last_pose.position;
  Vec3 v = velocity;
  Mat3 r = last_pose.orientation;
  int64_t t_prev = last_pose.t_ns;

  for (const ImuSample& s : samples) {
    const double dt = static_cast<double>(s.t_ns - t_prev) * kNsToSec;
    if (dt < 0.0) {
      throw InvalidInputError("predict_highrate_pose: samples precede pose");
    }
    const Vec3 a_world = r * (s.accel + bias.accel_bias) - gravity;
    p += v * dt + 0.5 * a_world * dt * dt;
    v += a_world * dt;
    r = r * exp_so3((s.gyro + bias.gyro_bias) * dt);
    FramePose pose;
    pose.t_ns = s.t_ns;
    pose.position = p;
    pose.orientation = r;
    pose.source = PoseSource::Predicted;
    out.push_back(std::move(pose));
    t_prev = s.t_ns;
  }
  return out;
}

}  // namespace monoscale
