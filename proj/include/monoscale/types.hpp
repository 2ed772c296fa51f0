#ifndef MONOSCALE_TYPES_HPP
#define MONOSCALE_TYPES_HPP

#include <cstdint>
#include <optional>

#include "monoscale/geometry.hpp"

namespace monoscale {

/// One gyroscope + accelerometer reading in the body frame {I}.
/// Timestamps are integer nanoseconds and strictly increase within a stream.
struct ImuSample {
  int64_t t_ns = 0;
  Vec3 gyro = Vec3::Zero();   // rad/s
  Vec3 accel = Vec3::Zero();  // m/s^2 (specific force)
};

enum class PoseSource { Monocular, GroundTruth, Predicted };

/// A timestamped camera/body pose. Positions are meters for ground truth
/// and unscaled units for monocular input. quat_wxyz keeps the quaternion
/// exactly as read or generated so serializing reproduces the source values;
/// the orientation matrix is derived from it.
struct FramePose {
  int64_t t_ns = 0;
  Vec3 position = Vec3::Zero();
  Mat3 orientation = Mat3::Identity();
  FrameId frame = FrameId::world();
  PoseSource source = PoseSource::Monocular;
  std::optional<Vec4> quat_wxyz;
};

/// Timestamped velocity, used for ground-truth velocity lookups.
struct TimedVelocity {
  int64_t t_ns = 0;
  Vec3 velocity = Vec3::Zero();  // m/s, world frame
};

}  // namespace monoscale

#endif  // MONOSCALE_TYPES_HPP
