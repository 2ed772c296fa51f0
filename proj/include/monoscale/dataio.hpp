#ifndef MONOSCALE_DATAIO_HPP
#define MONOSCALE_DATAIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "monoscale/imu.hpp"
#include "monoscale/types.hpp"

namespace monoscale {

enum class PoseFileFormat { EurocGtCsv, TumTxt };

/// Everything one run consumes, time-ordered per stream. Monocular poses
/// are already mapped into {W} through the extrinsic calibration by the
/// loader; parsers alone leave frames untouched.
struct SequenceBundle {
  std::vector<ImuSample> imu;
  std::vector<FramePose> mono;
  std::vector<FramePose> gt;                 // may be empty
  std::vector<TimedVelocity> gt_velocities;  // may be empty
  RigidTransform calib;                      // body-from-camera extrinsics
  Vec3 gravity = Vec3(0.0, 0.0, 9.81);
};

/// Gravity vector and extrinsic calibration read from a key = value file.
struct CalibConfig {
  RigidTransform t_ic;
  Vec3 gravity = Vec3(0.0, 0.0, 9.81);
};

/// Parses "timestamp_ns, w_x, w_y, w_z, a_x, a_y, a_z" rows. Lines starting
/// with '#' are comments. Timestamps must strictly increase.
std::vector<ImuSample> parse_imu_csv(const std::string& path);

/// Parses a pose stream. EuRoC CSV rows are
/// "timestamp_ns, p_x, p_y, p_z, q_w, q_x, q_y, q_z, ..." with extra columns
/// ignored; TUM rows are "t_sec tx ty tz qx qy qz qw" with seconds converted
/// to integer nanoseconds textually (round-half-even past the 9th digit).
/// Quaternions off unit norm by more than 1e-3 are normalized with a warning
/// on stderr; off by more than 1e-1 is an integrity error.
std::vector<FramePose> parse_pose_file(const std::string& path,
                                       PoseFileFormat format);

/// Reads world-frame velocity columns 9-11 of an EuRoC ground-truth CSV.
/// Returns empty when the file has no velocity columns.
std::vector<TimedVelocity> parse_gt_velocities(const std::string& path);

/// Reads gravity.x/y/z and T_IC (12 row-major numbers of the 3x4 [R|t]).
CalibConfig parse_calib_config(const std::string& path);

/// Groups IMU samples by consecutive frame pairs using half-open intervals
/// [t_i, t_j), so every sample lands in exactly one window. Pairs with no
/// interior samples, or reaching outside the IMU time span, come back with
/// complete == false instead of being dropped.
std::vector<FramePairWindow> associate_windows(
    const std::vector<ImuSample>& imu, const std::vector<FramePose>& frames);

/// Loads a full sequence and maps monocular poses from {V} into {W} through
/// the calibration transform. Ground-truth paths may be empty.
SequenceBundle load_sequence(const std::string& imu_path,
                             const std::string& mono_tum_path,
                             const std::string& gt_csv_path,
                             const std::string& calib_path);

// Writers emit exactly the formats the parsers read, value-preserving.
void write_imu_csv(const std::string& path,
                   const std::vector<ImuSample>& samples);
void write_pose_tum(const std::string& path,
                    const std::vector<FramePose>& poses);
void write_gt_csv(const std::string& path, const std::vector<FramePose>& poses,
                  const std::vector<TimedVelocity>& velocities = {});
void write_calib_config(const std::string& path, const CalibConfig& config);

/// Exact textual conversions between TUM decimal seconds and nanoseconds.
int64_t tum_seconds_to_ns(const std::string& field);
std::string ns_to_tum_seconds(int64_t t_ns);

}  // namespace monoscale

#endif  // MONOSCALE_DATAIO_HPP
