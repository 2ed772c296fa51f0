#include "monoscale/geometry.hpp"

#include <cmath>

namespace monoscale {

bool is_finite(const Vec3& v) { return v.allFinite(); }

bool is_finite(const Mat3& m) { return m.allFinite(); }

bool is_rotation_matrix(const Mat3& r, double tol) {
  if (!r.allFinite()) return false;
  Mat3 err = r.transpose() * r - Mat3::Identity();
  if (err.cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(r.determinant() - 1.0) <= tol;
}

Mat3 wedge(const Vec3& v) {
  if (!v.allFinite()) throw InvalidInputError("wedge: non-finite input");
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return m;
}

Mat3 exp_so3(const Vec3& v) {
  if (!v.allFinite()) throw InvalidInputError("exp_so3: non-finite input");
  const double theta = v.norm();
  const Mat3 w = wedge(v);
  if (theta < 1e-8) {
    return Mat3::Identity() + w + 0.5 * (w * w);
  }
  const double s = std::sin(theta) / theta;
  const double c = (1.0 - std::cos(theta)) / (theta * theta);
  return Mat3::Identity() + s * w + c * (w * w);
}

Vec3 to_world(const Vec3& p_vision, const RigidTransform& calib) {
  if (!p_vision.allFinite()) {
    throw InvalidInputError("to_world: non-finite input");
  }
  return calib.apply(p_vision);
}

}  // namespace monoscale
