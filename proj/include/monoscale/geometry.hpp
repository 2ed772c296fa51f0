#ifndef MONOSCALE_GEOMETRY_HPP
#define MONOSCALE_GEOMETRY_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "monoscale/errors.hpp"

namespace monoscale {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;

/// Coordinate frame tags. {V} coincides with the first camera frame when
/// tracking starts; {W} coincides with the body frame at the same instant.
enum class FrameTag { Camera, Vision, Inertial, World };

/// Frame tag plus an optional timestamp for time-varying frames.
/// Carried as metadata only; the library never converts frames implicitly.
struct FrameId {
  FrameTag tag = FrameTag::World;
  int64_t t_ns = 0;  // meaningful only for time-varying frames

  static FrameId world() { return {FrameTag::World, 0}; }
  static FrameId vision() { return {FrameTag::Vision, 0}; }
};

/// Rigid transform: x_A = rotation * x_B + translation.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

  RigidTransform compose(const RigidTransform& other) const {
    return {rotation * other.rotation,
            rotation * other.translation + translation};
  }

  RigidTransform inverse() const {
    Mat3 rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }
};

bool is_finite(const Vec3& v);
bool is_finite(const Mat3& m);

/// True when R'R = I and det(R) = 1, both within tol per entry.
bool is_rotation_matrix(const Mat3& r, double tol = 1e-9);

/// Skew-symmetric matrix of v, so that wedge(v) * w == v.cross(w).
Mat3 wedge(const Vec3& v);

/// Exponential map from a rotation vector (radians) to a rotation matrix.
/// Uses the closed Rodrigues form; below 1e-8 rad it falls back to a
/// second-order expansion so the vanishing angle never divides.
Mat3 exp_so3(const Vec3& v);

/// Maps a vision-frame point into the world frame through the camera-body
/// extrinsic calibration.
Vec3 to_world(const Vec3& p_vision, const RigidTransform& calib);

}  // namespace monoscale

#endif  // MONOSCALE_GEOMETRY_HPP
