#include "monoscale/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <Eigen/Geometry>

namespace monoscale {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool is_comment_or_blank(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t[0] == '#';
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(trim(field));
  return out;
}

std::vector<std::string> split_whitespace(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string field;
  while (is >> field) out.push_back(field);
  return out;
}

double parse_double(const std::string& s, const std::string& path, int lineno) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) {
    throw ParseError(path + ":" + std::to_string(lineno) +
                     ": bad numeric field '" + s + "'");
  }
  return v;
}

int64_t parse_int64(const std::string& s, const std::string& path,
                    int lineno) {
  int64_t v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) {
    throw ParseError(path + ":" + std::to_string(lineno) +
                     ": bad timestamp field '" + s + "'");
  }
  return v;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw ParseError(path + ": cannot open file");
  }
  return in;
}

/// Normalizes and converts a (w,x,y,z) quaternion, enforcing the norm
/// thresholds: > 1e-3 off unit warns and normalizes, > 1e-1 is an error.
Mat3 quat_to_rotation(const Vec4& q_wxyz, const std::string& path,
                      int lineno) {
  Eigen::Quaterniond q(q_wxyz[0], q_wxyz[1], q_wxyz[2], q_wxyz[3]);
  const double deviation = std::abs(q.norm() - 1.0);
  if (deviation > 1e-1) {
    throw IntegrityError(path + ":" + std::to_string(lineno) +
                         ": quaternion norm deviates from 1 by " +
                         fmt_double(deviation));
  }
  if (deviation > 1e-3) {
    std::cerr << path << ":" << lineno
              << ": warning: quaternion norm off unit by "
              << fmt_double(deviation) << ", normalizing\n";
  }
  return q.normalized().toRotationMatrix();
}

void check_strictly_increasing(int64_t prev, int64_t cur,
                               const std::string& path, int lineno) {
  if (cur <= prev) {
    throw IntegrityError(path + ":" + std::to_string(lineno) +
                         ": non-monotone timestamp " + std::to_string(cur));
  }
}

}  // namespace

int64_t tum_seconds_to_ns(const std::string& field) {
  // Textual conversion keeps nanosecond stamps exact where a double cannot.
  const auto bad = [&] {
    throw ParseError("bad TUM time field '" + field + "'");
  };
  if (field.empty() || field[0] == '-') bad();
  const auto dot = field.find('.');
  const std::string whole = dot == std::string::npos ? field : field.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : field.substr(dot + 1);
  if (whole.empty() && frac.empty()) bad();
  for (char c : whole) {
    if (!std::isdigit(static_cast<unsigned char>(c))) bad();
  }
  for (char c : frac) {
    if (!std::isdigit(static_cast<unsigned char>(c))) bad();
  }
  int64_t seconds = 0;
  if (!whole.empty()) {
    auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(),
                                     seconds);
    if (ec != std::errc() || ptr != whole.data() + whole.size()) bad();
  }

  int64_t ns = 0;
  bool round_up = false;
  if (frac.size() <= 9) {
    frac.append(9 - frac.size(), '0');
  } else {
    const std::string rest = frac.substr(9);
    frac = frac.substr(0, 9);
    // Round half to even on the digits past nanoseconds.
    const bool any_nonzero_tail =
        rest.find_first_not_of('0', 1) != std::string::npos;
    if (rest[0] > '5' || (rest[0] == '5' && any_nonzero_tail)) {
      round_up = true;
    } else if (rest[0] == '5' && !any_nonzero_tail) {
      round_up = (frac.back() - '0') % 2 != 0;
    }
  }
  for (char c : frac) ns = ns * 10 + (c - '0');
  if (round_up) ++ns;
  return seconds * 1000000000LL + ns;
}

std::string ns_to_tum_seconds(int64_t t_ns) {
  if (t_ns < 0) {
    throw InvalidInputError("ns_to_tum_seconds: negative timestamp");
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%lld.%09lld",
                static_cast<long long>(t_ns / 1000000000LL),
                static_cast<long long>(t_ns % 1000000000LL));
  return buf;
}

std::vector<ImuSample> parse_imu_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<ImuSample> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment_or_blank(line)) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 7) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 7 fields, got " +
                       std::to_string(fields.size()));
    }
    ImuSample s;
    s.t_ns = parse_int64(fields[0], path, lineno);
    for (int i = 0; i < 3; ++i) {
      s.gyro[i] = parse_double(fields[1 + i], path, lineno);
      s.accel[i] = parse_double(fields[4 + i], path, lineno);
    }
    if (!s.gyro.allFinite() || !s.accel.allFinite()) {
      throw IntegrityError(path + ":" + std::to_string(lineno) +
                           ": non-finite IMU sample");
    }
    if (!out.empty()) check_strictly_increasing(out.back().t_ns, s.t_ns, path, lineno);
    out.push_back(s);
  }
  return out;
}

std::vector<FramePose> parse_pose_file(const std::string& path,
                                       PoseFileFormat format) {
  std::ifstream in = open_or_throw(path);
  std::vector<FramePose> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment_or_blank(line)) continue;
    FramePose pose;
    Vec4 q_wxyz;
    if (format == PoseFileFormat::EurocGtCsv) {
      const auto fields = split(line, ',');
      if (fields.size() < 8) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": expected at least 8 fields, got " +
                         std::to_string(fields.size()));
      }
      pose.t_ns = parse_int64(fields[0], path, lineno);
      for (int i = 0; i < 3; ++i) {
        pose.position[i] = parse_double(fields[1 + i], path, lineno);
      }
      for (int i = 0; i < 4; ++i) {
        q_wxyz[i] = parse_double(fields[4 + i], path, lineno);
      }
      pose.source = PoseSource::GroundTruth;
      pose.frame = FrameId::world();
    } else {
      const auto fields = split_whitespace(line);
      if (fields.size() != 8) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": expected 8 fields, got " +
                         std::to_string(fields.size()));
      }
      try {
        pose.t_ns = tum_seconds_to_ns(fields[0]);
      } catch (const ParseError& e) {
        throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
      }
      for (int i = 0; i < 3; ++i) {
        pose.position[i] = parse_double(fields[1 + i], path, lineno);
      }
      // TUM order is qx qy qz qw.
      q_wxyz[1] = parse_double(fields[4], path, lineno);
      q_wxyz[2] = parse_double(fields[5], path, lineno);
      q_wxyz[3] = parse_double(fields[6], path, lineno);
      q_wxyz[0] = parse_double(fields[7], path, lineno);
      pose.source = PoseSource::Monocular;
      pose.frame = FrameId::vision();
    }
    if (!pose.position.allFinite() || !q_wxyz.allFinite()) {
      throw IntegrityError(path + ":" + std::to_string(lineno) +
                           ": non-finite pose");
    }
    pose.orientation = quat_to_rotation(q_wxyz, path, lineno);
    pose.quat_wxyz = q_wxyz;
    if (!out.empty()) {
      check_strictly_increasing(out.back().t_ns, pose.t_ns, path, lineno);
    }
    out.push_back(pose);
  }
  return out;
}

std::vector<TimedVelocity> parse_gt_velocities(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<TimedVelocity> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment_or_blank(line)) continue;
    const auto fields = split(line, ',');
    if (fields.size() < 11) return {};  // no velocity columns in this file
    TimedVelocity v;
    v.t_ns = parse_int64(fields[0], path, lineno);
    for (int i = 0; i < 3; ++i) {
      v.velocity[i] = parse_double(fields[8 + i], path, lineno);
    }
    out.push_back(v);
  }
  return out;
}

CalibConfig parse_calib_config(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  CalibConfig config;
  std::string line;
  int lineno = 0;
  bool saw_t_ic = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment_or_blank(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "gravity.x") {
      config.gravity.x() = parse_double(value, path, lineno);
    } else if (key == "gravity.y") {
      config.gravity.y() = parse_double(value, path, lineno);
    } else if (key == "gravity.z") {
      config.gravity.z() = parse_double(value, path, lineno);
    } else if (key == "T_IC") {
      const auto nums = split_whitespace(value);
      if (nums.size() != 12) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": T_IC needs 12 row-major numbers of [R|t]");
      }
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          config.t_ic.rotation(r, c) = parse_double(nums[r * 4 + c], path, lineno);
        }
        config.t_ic.translation[r] = parse_double(nums[r * 4 + 3], path, lineno);
      }
      if (!is_rotation_matrix(config.t_ic.rotation, 1e-3)) {
        throw IntegrityError(path + ":" + std::to_string(lineno) +
                             ": T_IC rotation block is not orthonormal");
      }
      // Re-orthonormalize so downstream rotation invariants hold tightly
      // even for configs written with few digits.
      Eigen::Quaterniond q(config.t_ic.rotation);
      config.t_ic.rotation = q.normalized().toRotationMatrix();
      saw_t_ic = true;
    } else {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": unknown key '" + key + "'");
    }
  }
  if (!saw_t_ic) config.t_ic = RigidTransform::identity();
  return config;
}

std::vector<FramePairWindow> associate_windows(
    const std::vector<ImuSample>& imu, const std::vector<FramePose>& frames) {
  std::vector<FramePairWindow> out;
  if (frames.size() < 2) return out;

  // Nominal IMU period, used to extend the last sample's hold interval when
  // judging span coverage.
  int64_t nominal_step = 0;
  if (imu.size() >= 2) {
    std::vector<int64_t> deltas;
    deltas.reserve(imu.size() - 1);
    for (size_t i = 1; i < imu.size(); ++i) {
      deltas.push_back(imu[i].t_ns - imu[i - 1].t_ns);
    }
    std::nth_element(deltas.begin(), deltas.begin() + deltas.size() / 2,
                     deltas.end());
    nominal_step = deltas[deltas.size() / 2];
  }

  size_t cursor = 0;
  for (size_t f = 0; f + 1 < frames.size(); ++f) {
    const int64_t t_i = frames[f].t_ns;
    const int64_t t_j = frames[f + 1].t_ns;
    FramePairWindow w;
    w.start_pose = frames[f];
    w.end_pose = frames[f + 1];
    w.end_t_ns = t_j;

    while (cursor < imu.size() && imu[cursor].t_ns < t_i) ++cursor;
    size_t end = cursor;
    while (end < imu.size() && imu[end].t_ns < t_j) ++end;
    w.samples.assign(imu.begin() + cursor, imu.begin() + end);
    cursor = end;

    if (w.samples.size() >= 2) {
      w.dt = static_cast<double>(w.samples[1].t_ns - w.samples[0].t_ns) * 1e-9;
    } else if (w.samples.size() == 1) {
      w.dt = static_cast<double>(t_j - w.samples[0].t_ns) * 1e-9;
    }

    const bool in_span = !imu.empty() && t_i >= imu.front().t_ns &&
                         t_j <= imu.back().t_ns + nominal_step;
    w.complete = !w.samples.empty() && in_span;
    out.push_back(std::move(w));
  }
  return out;
}

SequenceBundle load_sequence(const std::string& imu_path,
                             const std::string& mono_tum_path,
                             const std::string& gt_csv_path,
                             const std::string& calib_path) {
  SequenceBundle bundle;
  if (!calib_path.empty()) {
    const CalibConfig config = parse_calib_config(calib_path);
    bundle.calib = config.t_ic;
    bundle.gravity = config.gravity;
  }
  bundle.imu = parse_imu_csv(imu_path);
  bundle.mono = parse_pose_file(mono_tum_path, PoseFileFormat::TumTxt);
  // Map monocular poses from the vision frame into the world frame.
  for (FramePose& pose : bundle.mono) {
    pose.position = bundle.calib.apply(pose.position);
    pose.orientation = bundle.calib.rotation * pose.orientation;
    pose.frame = FrameId::world();
    pose.quat_wxyz.reset();  // no longer the as-read orientation
  }
  if (!gt_csv_path.empty()) {
    bundle.gt = parse_pose_file(gt_csv_path, PoseFileFormat::EurocGtCsv);
    bundle.gt_velocities = parse_gt_velocities(gt_csv_path);
  }
  return bundle;
}

void write_imu_csv(const std::string& path,
                   const std::vector<ImuSample>& samples) {
  std::ofstream out(path);
  if (!out.is_open()) throw Error(path + ": cannot open for writing");
  out << "#timestamp [ns],w_x [rad s^-1],w_y [rad s^-1],w_z [rad s^-1],"
         "a_x [m s^-2],a_y [m s^-2],a_z [m s^-2]\n";
  for (const ImuSample& s : samples) {
    out << s.t_ns;
    for (int i = 0; i < 3; ++i) out << ',' << fmt_double(s.gyro[i]);
    for (int i = 0; i < 3; ++i) out << ',' << fmt_double(s.accel[i]);
    out << '\n';
  }
}

namespace {

Vec4 pose_quat_wxyz(const FramePose& pose) {
  if (pose.quat_wxyz) return *pose.quat_wxyz;
  Eigen::Quaterniond q(pose.orientation);
  return Vec4(q.w(), q.x(), q.y(), q.z());
}

}  // namespace

void write_pose_tum(const std::string& path,
                    const std::vector<FramePose>& poses) {
  std::ofstream out(path);
  if (!out.is_open()) throw Error(path + ": cannot open for writing");
  out << "# t x y z qx qy qz qw\n";
  for (const FramePose& pose : poses) {
    const Vec4 q = pose_quat_wxyz(pose);
    out << ns_to_tum_seconds(pose.t_ns) << ' ' << fmt_double(pose.position.x())
        << ' ' << fmt_double(pose.position.y()) << ' '
        << fmt_double(pose.position.z()) << ' ' << fmt_double(q[1]) << ' '
        << fmt_double(q[2]) << ' ' << fmt_double(q[3]) << ' '
        << fmt_double(q[0]) << '\n';
  }
}

void write_gt_csv(const std::string& path, const std::vector<FramePose>& poses,
                  const std::vector<TimedVelocity>& velocities) {
  if (!velocities.empty() && velocities.size() != poses.size()) {
    throw InvalidInputError("write_gt_csv: one velocity per pose, or none");
  }
  std::ofstream out(path);
  if (!out.is_open()) throw Error(path + ": cannot open for writing");
  out << "#timestamp [ns],p_x [m],p_y [m],p_z [m],q_w,q_x,q_y,q_z";
  if (!velocities.empty()) {
    out << ",v_x [m s^-1],v_y [m s^-1],v_z [m s^-1]";
  }
  out << '\n';
  for (size_t i = 0; i < poses.size(); ++i) {
    const FramePose& pose = poses[i];
    const Vec4 q = pose_quat_wxyz(pose);
    out << pose.t_ns;
    for (int k = 0; k < 3; ++k) out << ',' << fmt_double(pose.position[k]);
    for (int k = 0; k < 4; ++k) out << ',' << fmt_double(q[k]);
    if (!velocities.empty()) {
      for (int k = 0; k < 3; ++k) {
        out << ',' << fmt_double(velocities[i].velocity[k]);
      }
    }
    out << '\n';
  }
}

void write_calib_config(const std::string& path, const CalibConfig& config) {
  std::ofstream out(path);
  if (!out.is_open()) throw Error(path + ": cannot open for writing");
  out << "# gravity in {W}, body-from-camera extrinsics as 3x4 [R|t]\n";
  out << "gravity.x = " << fmt_double(config.gravity.x()) << '\n';
  out << "gravity.y = " << fmt_double(config.gravity.y()) << '\n';
  out << "gravity.z = " << fmt_double(config.gravity.z()) << '\n';
  out << "T_IC =";
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out << ' ' << fmt_double(config.t_ic.rotation(r, c));
    out << ' ' << fmt_double(config.t_ic.translation[r]);
  }
  out << '\n';
}

}  // namespace monoscale
