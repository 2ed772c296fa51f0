#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "monoscale/dataio.hpp"
#include "monoscale/scale.hpp"
#include "monoscale/synth.hpp"

using namespace monoscale;

namespace {

SynthConfig base_config(TrajectoryKind kind, double duration = 2.0) {
  SynthConfig cfg;
  cfg.kind = kind;
  cfg.duration_s = duration;
  cfg.gravity = Vec3(0, 0, 9.81);
  return cfg;
}

}  // namespace

TEST_CASE("hover stands still") {
  const auto cfg = base_config(TrajectoryKind::Hover, 1.0);
  const GroundTruth gt = generate_groundtruth(cfg);
  REQUIRE(gt.poses.size() == 200);
  for (size_t i = 0; i < gt.poses.size(); ++i) {
    CHECK(gt.poses[i].position.norm() == 0.0);
    CHECK(gt.velocities[i].norm() == 0.0);
    CHECK(gt.accelerations[i].norm() == 0.0);
  }
}

TEST_CASE("line reaches a t^2 / 2 at every sample") {
  auto cfg = base_config(TrajectoryKind::LineConstAccel, 1.0);
  cfg.line_accel = Vec3(2, 0, 0);
  const GroundTruth gt = generate_groundtruth(cfg);
  // t = 0.5 s -> 0.25 m
  const size_t k = 100;
  CHECK(gt.poses[k].position.isApprox(Vec3(0.25, 0, 0), 1e-14));
}

TEST_CASE("circle has constant centripetal acceleration") {
  auto cfg = base_config(TrajectoryKind::Circle, 3.0);
  cfg.circle_radius_m = 1.0;
  cfg.circle_rate_rad_s = 1.0;
  const GroundTruth gt = generate_groundtruth(cfg);
  for (size_t i = 0; i < gt.poses.size(); ++i) {
    CHECK(gt.accelerations[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gt.poses[i].position.norm() == doctest::Approx(1.0).epsilon(1e-12));
    // Acceleration points at the center.
    CHECK(gt.accelerations[i].dot(gt.poses[i].position) ==
          doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(is_rotation_matrix(gt.poses[i].orientation, 1e-12));
  }
}

TEST_CASE("hover IMU reads +g on every sample when level") {
  const auto cfg = base_config(TrajectoryKind::Hover, 1.0);
  const GroundTruth gt = generate_groundtruth(cfg);
  const auto imu = simulate_imu(gt, cfg);
  REQUIRE(imu.size() == 200);
  for (const ImuSample& s : imu) {
    CHECK(s.accel.isApprox(Vec3(0, 0, 9.81), 1e-15));
    CHECK(s.gyro.norm() == 0.0);
  }
}

TEST_CASE("noise-free line integration stays within the first-order bound") {
  auto cfg = base_config(TrajectoryKind::LineConstAccel, 2.0);
  cfg.line_accel = Vec3(1.5, 0, 0);
  const GroundTruth gt = generate_groundtruth(cfg);
  const auto imu = simulate_imu(gt, cfg);

  const auto frames = groundtruth_frames(gt, cfg);
  const auto windows = associate_windows(imu, frames);
  const auto vels = groundtruth_frame_velocities(gt, cfg);
  REQUIRE(windows.size() == frames.size() - 1);

  for (size_t w = 0; w < windows.size(); ++w) {
    FramePairWindow window = windows[w];
    window.gravity = cfg.gravity;
    window.start_velocity = vels[w].velocity;
    const InertialDelta delta = integrate_window(window, BiasState{});
    const Vec3 analytic = frames[w + 1].position - frames[w].position;
    // Constant acceleration makes the per-step update exact.
    CHECK((delta.translation - analytic).norm() < 1e-12);
  }
}

TEST_CASE("circle windows integrate to first-order accuracy") {
  auto cfg = base_config(TrajectoryKind::Circle, 10.0);
  cfg.circle_radius_m = 1.0;
  cfg.circle_rate_rad_s = 1.0;
  const GroundTruth gt = generate_groundtruth(cfg);
  const auto imu = simulate_imu(gt, cfg);
  const auto frames = groundtruth_frames(gt, cfg);
  const auto vels = groundtruth_frame_velocities(gt, cfg);
  const auto windows = associate_windows(imu, frames);

  // Per-window first-order error bound: |da/dt| dt T / 2 with some slack.
  const double dt = 1.0 / cfg.imu_rate_hz;
  const double window_s = 1.0 / cfg.frame_rate_hz;
  const double bound = 0.5 * 1.0 * dt * window_s * 2.0;
  for (size_t w = 0; w < windows.size(); ++w) {
    FramePairWindow window = windows[w];
    window.gravity = cfg.gravity;
    window.start_velocity = vels[w].velocity;
    const InertialDelta delta = integrate_window(window, BiasState{});
    const Vec3 analytic = frames[w + 1].position - frames[w].position;
    CHECK((delta.translation - analytic).norm() < bound);
  }
}

TEST_CASE("imu noise has the configured standard deviation") {
  auto cfg = base_config(TrajectoryKind::Hover, 500.0);
  cfg.accel_noise_std = 0.05;
  cfg.gyro_noise_std = 0.005;
  cfg.seed = 99;
  const GroundTruth gt = generate_groundtruth(cfg);
  const auto imu = simulate_imu(gt, cfg);
  REQUIRE(imu.size() == 100000);
  double acc_sq = 0.0, gyro_sq = 0.0;
  for (const ImuSample& s : imu) {
    const Vec3 res_a = s.accel - Vec3(0, 0, 9.81);
    acc_sq += res_a.squaredNorm();
    gyro_sq += s.gyro.squaredNorm();
  }
  const double acc_std = std::sqrt(acc_sq / (3.0 * imu.size()));
  const double gyro_std = std::sqrt(gyro_sq / (3.0 * imu.size()));
  CHECK(acc_std == doctest::Approx(0.05).epsilon(0.05));
  CHECK(gyro_std == doctest::Approx(0.005).epsilon(0.05));
}

TEST_CASE("monocular stream divides positions by the true scale") {
  auto cfg = base_config(TrajectoryKind::Circle, 5.0);
  cfg.true_lambda = 2.31;
  const GroundTruth gt = generate_groundtruth(cfg);
  const auto mono = simulate_monocular(gt, cfg);
  const auto frames = groundtruth_frames(gt, cfg);
  REQUIRE(mono.size() == frames.size());
  REQUIRE(mono.size() == 100);
  for (size_t i = 1; i < mono.size(); ++i) {
    const double mono_step = (mono[i].position - mono[i - 1].position).norm();
    const double gt_step = (frames[i].position - frames[i - 1].position).norm();
    CHECK(gt_step / mono_step == doctest::Approx(2.31).epsilon(1e-12));
  }
  SUBCASE("per-pair ratio measures the true scale") {
    for (size_t i = 1; i < mono.size(); ++i) {
      const ScaleMeasurement m =
          measure_lambda(frames[i].position - frames[i - 1].position,
                         mono[i].position - mono[i - 1].position);
      REQUIRE(m.valid);
      CHECK(m.lambda == doctest::Approx(2.31).epsilon(1e-12));
    }
  }
}

TEST_CASE("unit scale makes the streams coincide") {
  auto cfg = base_config(TrajectoryKind::Lissajous, 3.0);
  cfg.true_lambda = 1.0;
  const GroundTruth gt = generate_groundtruth(cfg);
  const auto mono = simulate_monocular(gt, cfg);
  const auto frames = groundtruth_frames(gt, cfg);
  for (size_t i = 0; i < mono.size(); ++i) {
    CHECK(mono[i].position == frames[i].position);
  }
}

TEST_CASE("same seed, same bytes") {
  namespace fs = std::filesystem;
  auto cfg = base_config(TrajectoryKind::Dash, 30.0);
  cfg.dash_spike_start_s = 10.0;
  cfg.accel_noise_std = 0.05;
  cfg.gyro_noise_std = 0.005;
  cfg.mono_noise_frac = 0.005;
  cfg.seed = 4242;

  const fs::path dir =
      fs::temp_directory_path() /
      ("monoscale_synth_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  auto emit = [&](const std::string& suffix) {
    const GroundTruth gt = generate_groundtruth(cfg);
    write_imu_csv((dir / ("imu" + suffix)).string(), simulate_imu(gt, cfg));
    write_pose_tum((dir / ("mono" + suffix)).string(),
                   simulate_monocular(gt, cfg));
  };
  emit("_a");
  emit("_b");
  for (const std::string name : {"imu", "mono"}) {
    std::ifstream a(dir / (name + "_a")), b(dir / (name + "_b"));
    const std::string sa((std::istreambuf_iterator<char>(a)), {});
    const std::string sb((std::istreambuf_iterator<char>(b)), {});
    CHECK(sa == sb);
    CHECK(!sa.empty());
  }
  fs::remove_all(dir);
}

TEST_CASE("dash bursts reach the configured magnitude and settle back") {
  auto cfg = base_config(TrajectoryKind::Dash, 60.0);
  cfg.dash_spike_accel = 8.0;
  cfg.dash_spike_start_s = 20.0;
  cfg.dash_spike_duration_s = 2.0;
  const GroundTruth gt = generate_groundtruth(cfg);
  double peak = 0.0;
  for (size_t i = 0; i < gt.poses.size(); ++i) {
    peak = std::max(peak, gt.accelerations[i].norm());
    const double t = static_cast<double>(gt.poses[i].t_ns) * 1e-9;
    if (t < 20.0 || t > 22.0) {
      CHECK(gt.accelerations[i].norm() == 0.0);
      CHECK(gt.velocities[i].isApprox(Vec3(cfg.dash_cruise_speed, 0, 0), 1e-9));
    }
  }
  CHECK(peak == doctest::Approx(8.0).epsilon(1e-6));
  CHECK(peak >= 5.0);
}

TEST_CASE("config validation") {
  auto cfg = base_config(TrajectoryKind::Circle);
  cfg.frame_rate_hz = 30.0;  // 200 / 30 is not an integer
  CHECK_THROWS_AS(cfg.validate(), InvalidConfigError);
  cfg = base_config(TrajectoryKind::Dash);
  cfg.dash_spike_accel = 3.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidConfigError);
  cfg = base_config(TrajectoryKind::Hover);
  cfg.true_lambda = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidConfigError);
}

TEST_CASE("a non-identity calibration round-trips through the loader") {
  namespace fs = std::filesystem;
  auto cfg = base_config(TrajectoryKind::Circle, 2.0);
  cfg.true_lambda = 2.0;
  const GroundTruth gt = generate_groundtruth(cfg);
  const auto mono_w = simulate_monocular(gt, cfg);  // {V} = {W} here

  RigidTransform calib;
  calib.rotation = exp_so3(Vec3(0.2, -0.1, 0.4));
  calib.translation = Vec3(0.05, 0.02, -0.01);
  const RigidTransform inv = calib.inverse();

  // Re-express the monocular stream in a vision frame displaced by calib.
  std::vector<FramePose> mono_v = mono_w;
  for (FramePose& pose : mono_v) {
    pose.position = inv.apply(pose.position);
    pose.orientation = inv.rotation * pose.orientation;
    Eigen::Quaterniond q(pose.orientation);
    pose.quat_wxyz = Vec4(q.w(), q.x(), q.y(), q.z());
  }

  const fs::path dir =
      fs::temp_directory_path() /
      ("monoscale_calib_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  write_imu_csv((dir / "imu.csv").string(), simulate_imu(gt, cfg));
  write_pose_tum((dir / "mono.tum").string(), mono_v);
  CalibConfig cc;
  cc.t_ic = calib;
  cc.gravity = cfg.gravity;
  write_calib_config((dir / "calib.cfg").string(), cc);

  const SequenceBundle bundle =
      load_sequence((dir / "imu.csv").string(), (dir / "mono.tum").string(),
                    "", (dir / "calib.cfg").string());
  REQUIRE(bundle.mono.size() == mono_w.size());
  for (size_t i = 0; i < mono_w.size(); ++i) {
    CHECK((bundle.mono[i].position - mono_w[i].position).norm() < 1e-12);
    CHECK((bundle.mono[i].orientation - mono_w[i].orientation)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
  fs::remove_all(dir);
}
