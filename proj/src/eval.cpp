#include "monoscale/eval.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "monoscale/errors.hpp"

namespace monoscale {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double lambda_ground_truth(const std::vector<Vec3>& gt_deltas,
                           const std::vector<Vec3>& mono_deltas,
                           double eps_gt, double eps_mono) {
  if (gt_deltas.size() != mono_deltas.size() || gt_deltas.empty()) {
    throw InvalidInputError(
        "lambda_ground_truth: delta lists must pair up and be nonempty");
  }
  double sum = 0.0;
  int count = 0;
  for (size_t k = 0; k < gt_deltas.size(); ++k) {
    const double gn = gt_deltas[k].norm();
    const double mn = mono_deltas[k].norm();
    if (gn < eps_gt || mn < eps_mono) continue;
    sum += gn / mn;
    ++count;
  }
  if (count == 0) {
    throw NoValidPairsError("lambda_ground_truth: every pair was degenerate");
  }
  return sum / static_cast<double>(count);
}

double scale_error(double lambda_g, double lambda_hat) {
  if (!std::isfinite(lambda_g) || !std::isfinite(lambda_hat)) {
    throw InvalidInputError("scale_error: non-finite input");
  }
  return std::abs(lambda_g - lambda_hat);
}

double rmse(const std::vector<Vec3>& positions, double lambda_g,
            double lambda_hat) {
  if (positions.empty()) {
    throw InvalidInputError("rmse: empty position list");
  }
  double acc = 0.0;
  for (const Vec3& x : positions) {
    acc += (lambda_g * x - lambda_hat * x).squaredNorm();
  }
  return std::sqrt(acc / static_cast<double>(positions.size()));
}

std::vector<Vec3> rescale_trajectory(const std::vector<Vec3>& positions,
                                     double lambda) {
  if (!(lambda > 0.0)) {
    throw InvalidInputError("rescale_trajectory: lambda must be > 0");
  }
  std::vector<Vec3> out;
  out.reserve(positions.size());
  for (const Vec3& p : positions) out.push_back(lambda * p);
  return out;
}

double total_distance(const std::vector<Vec3>& positions) {
  if (positions.size() < 2) {
    throw InvalidInputError("total_distance: need at least 2 positions");
  }
  double acc = 0.0;
  for (size_t i = 1; i < positions.size(); ++i) {
    acc += (positions[i] - positions[i - 1]).norm();
  }
  return acc;
}

std::string render_report(const EvaluationReport& report) {
  std::ostringstream os;
  os << "lambda_g = " << fmt_double(report.lambda_g) << "\n";
  for (const auto& [name, v] : report.lambda_hat) {
    os << "lambda_hat." << name << " = " << fmt_double(v) << "\n";
  }
  for (const auto& [name, v] : report.e_lambda) {
    os << "e_lambda." << name << " = " << fmt_double(v) << "\n";
  }
  for (const auto& [name, v] : report.rmse_m) {
    os << "rmse." << name << " = " << fmt_double(v) << "\n";
  }
  os << "total_distance.groundtruth = " << fmt_double(report.total_distance_gt)
     << "\n";
  for (const auto& [name, v] : report.total_distance) {
    os << "total_distance." << name << " = " << fmt_double(v) << "\n";
  }
  os << "best_estimator = " << report.best_estimator << "\n";
  os << "total_distance.best = " << fmt_double(report.total_distance_best)
     << "\n";
  return os.str();
}

std::string render_series_csv(const std::vector<SeriesRow>& series) {
  std::ostringstream os;
  os << "frame_index,t_ns,lambda_meas,lambda_ma_add,lambda_ma_log,"
        "lambda_ar,lambda_kf,lambda_gt_running\n";
  for (const SeriesRow& row : series) {
    os << row.frame_index << ',' << row.t_ns << ','
       << fmt_double(row.lambda_meas) << ',' << fmt_double(row.lambda_ma_add)
       << ',' << fmt_double(row.lambda_ma_log) << ','
       << fmt_double(row.lambda_ar) << ',' << fmt_double(row.lambda_kf) << ','
       << fmt_double(row.lambda_gt_running) << '\n';
  }
  return os.str();
}

}  // namespace monoscale
