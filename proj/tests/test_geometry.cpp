#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <numbers>
#include <random>

#include "monoscale/geometry.hpp"

using namespace monoscale;

namespace {

// Independent oracle: rotation via Eigen's angle-axis path.
Mat3 angle_axis_oracle(const Vec3& v) {
  const double angle = v.norm();
  if (angle == 0.0) return Mat3::Identity();
  return Eigen::AngleAxisd(angle, v / angle).toRotationMatrix();
}

Vec3 random_vec(std::mt19937& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  return Vec3(u(rng), u(rng), u(rng));
}

}  // namespace

TEST_CASE("wedge basics") {
  CHECK(wedge(Vec3::Zero()).isZero(0.0));

  Mat3 expected;
  expected << 0, 0, 0, 0, 0, -1, 0, 1, 0;
  CHECK((wedge(Vec3(1, 0, 0)) - expected).cwiseAbs().maxCoeff() == 0.0);

  // wedge(v) * w == v x w
  const Vec3 v(1, 2, 3);
  const Vec3 w(4, 5, 6);
  const Vec3 got = wedge(v) * w;
  CHECK(got.isApprox(Vec3(-3, 6, -3), 1e-15));
  CHECK(got.isApprox(v.cross(w), 1e-15));
}

TEST_CASE("wedge is linear and rejects non-finite input") {
  std::mt19937 rng(7);
  for (int i = 0; i < 100; ++i) {
    const Vec3 u = random_vec(rng, 10.0);
    const Vec3 v = random_vec(rng, 10.0);
    const double a = 2.5, b = -0.75;
    const Mat3 lhs = wedge(a * u + b * v);
    const Mat3 rhs = a * wedge(u) + b * wedge(v);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-15);
  }
  CHECK_THROWS_AS(wedge(Vec3(std::nan(""), 0, 0)), InvalidInputError);
}

TEST_CASE("exp_so3 matches known rotations") {
  CHECK(exp_so3(Vec3::Zero()).isIdentity(0.0));

  Mat3 z90;
  z90 << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  CHECK((exp_so3(Vec3(0, 0, std::numbers::pi / 2)) - z90)
            .cwiseAbs()
            .maxCoeff() < 1e-15);

  const Mat3 x180 = exp_so3(Vec3(std::numbers::pi, 0, 0));
  CHECK((x180 - Vec3(1, -1, -1).asDiagonal().toDenseMatrix())
            .cwiseAbs()
            .maxCoeff() < 1e-15);
}

TEST_CASE("exp_so3 invariants on random rotation vectors") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  for (int i = 0; i < 500; ++i) {
    Vec3 axis = random_vec(rng, 1.0);
    if (axis.norm() < 1e-6) axis = Vec3(1, 0, 0);
    const Vec3 v = axis.normalized() * angle(rng);
    const Mat3 r = exp_so3(v);
    CHECK(is_rotation_matrix(r, 1e-12));
    CHECK((exp_so3(-v) - r.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((r * exp_so3(-v) - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((r - angle_axis_oracle(v)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("exp_so3 small-angle fallback stays continuous") {
  const Vec3 v(3e-9, -2e-9, 1e-9);
  const Mat3 r = exp_so3(v);
  CHECK(is_rotation_matrix(r, 1e-12));
  CHECK((r - angle_axis_oracle(v)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("to_world applies rotation then translation") {
  CHECK(to_world(Vec3(1, 2, 3), RigidTransform::identity())
            .isApprox(Vec3(1, 2, 3), 0.0));

  RigidTransform shift;
  shift.translation = Vec3(1, 0, 0);
  CHECK(to_world(Vec3::Zero(), shift).isApprox(Vec3(1, 0, 0), 0.0));

  RigidTransform calib;
  calib.rotation = exp_so3(Vec3(0, 0, std::numbers::pi / 2));
  calib.translation = Vec3(0, 0, 1);
  CHECK(to_world(Vec3(1, 0, 0), calib).isApprox(Vec3(0, 1, 1), 1e-15));
}

TEST_CASE("composition matches the homogeneous-matrix oracle") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> angle(-std::numbers::pi,
                                               std::numbers::pi);
  auto random_transform = [&] {
    RigidTransform t;
    Vec3 axis = random_vec(rng, 1.0);
    if (axis.norm() < 1e-6) axis = Vec3(0, 1, 0);
    t.rotation = exp_so3(axis.normalized() * angle(rng));
    t.translation = random_vec(rng, 5.0);
    return t;
  };
  auto to_homogeneous = [](const RigidTransform& t) {
    Eigen::Matrix4d h = Eigen::Matrix4d::Identity();
    h.topLeftCorner<3, 3>() = t.rotation;
    h.topRightCorner<3, 1>() = t.translation;
    return h;
  };
  for (int i = 0; i < 200; ++i) {
    const RigidTransform a = random_transform();
    const RigidTransform b = random_transform();
    const RigidTransform c = a.compose(b);
    const Eigen::Matrix4d oracle = to_homogeneous(a) * to_homogeneous(b);
    CHECK((to_homogeneous(c) - oracle).cwiseAbs().maxCoeff() < 1e-12);

    const RigidTransform inv = a.inverse().compose(a);
    CHECK((to_homogeneous(inv) - Eigen::Matrix4d::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}
