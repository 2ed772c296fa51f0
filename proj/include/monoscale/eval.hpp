#ifndef MONOSCALE_EVAL_HPP
#define MONOSCALE_EVAL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "monoscale/geometry.hpp"

namespace monoscale {

/// Per-pair record of the running estimates, one row of the series CSV.
struct SeriesRow {
  int frame_index = 0;
  int64_t t_ns = 0;
  double lambda_meas = 0.0;     // nan when the pair was degenerate
  double lambda_ma_add = 0.0;   // nan until available
  double lambda_ma_log = 0.0;
  double lambda_ar = 0.0;
  double lambda_kf = 0.0;
  double lambda_gt_running = 0.0;  // nan without ground truth
};

/// Final judgment of a run against ground truth.
struct EvaluationReport {
  double lambda_g = 0.0;
  std::map<std::string, double> lambda_hat;       // per estimator
  std::map<std::string, double> e_lambda;         // per estimator
  std::map<std::string, double> rmse_m;           // per estimator
  std::map<std::string, double> total_distance;   // per estimator, rescaled
  double total_distance_gt = 0.0;
  std::string best_estimator;                     // smallest e_lambda
  double total_distance_best = 0.0;
  std::vector<SeriesRow> series;
};

/// Mean ratio of ground-truth to monocular translation norms over the
/// valid pairs; the reference the estimators are judged against.
double lambda_ground_truth(const std::vector<Vec3>& gt_deltas,
                           const std::vector<Vec3>& mono_deltas,
                           double eps_gt = 1e-6, double eps_mono = 1e-9);

/// L1 distance between the reference scale and an estimate.
double scale_error(double lambda_g, double lambda_hat);

/// Root-mean-square distance between the same trajectory under two
/// scalings. Measures scale error only; the geometry is common.
double rmse(const std::vector<Vec3>& positions, double lambda_g,
            double lambda_hat);

/// Every position multiplied by lambda; orientations untouched by design.
std::vector<Vec3> rescale_trajectory(const std::vector<Vec3>& positions,
                                     double lambda);

/// Sum of consecutive-position Euclidean distances.
double total_distance(const std::vector<Vec3>& positions);

/// Flat key = value rendering of the report (everything but the series).
std::string render_report(const EvaluationReport& report);

/// CSV rendering of a series, with the fixed column set.
std::string render_series_csv(const std::vector<SeriesRow>& series);

}  // namespace monoscale

#endif  // MONOSCALE_EVAL_HPP
