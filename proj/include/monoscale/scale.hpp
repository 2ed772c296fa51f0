#ifndef MONOSCALE_SCALE_HPP
#define MONOSCALE_SCALE_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "monoscale/geometry.hpp"

namespace monoscale {

/// One scale sample from a frame pair: the ratio of inertial to monocular
/// translation norms. Pairs whose motion falls under the degeneracy gates
/// come back with valid == false rather than as errors.
struct ScaleMeasurement {
  int pair_i = 0;
  int pair_j = 0;
  double inertial_norm = 0.0;   // meters
  double monocular_norm = 0.0;  // monocular units
  double lambda = 0.0;          // inertial_norm / monocular_norm when valid
  bool valid = false;
};

/// Default degeneracy gates for near-stationary frame pairs.
constexpr double kDefaultInertialEps = 1e-6;   // meters
constexpr double kDefaultMonocularEps = 1e-9;  // monocular units

ScaleMeasurement measure_lambda(const Vec3& inertial_t, const Vec3& monocular_t,
                                double eps_inertial = kDefaultInertialEps,
                                double eps_monocular = kDefaultMonocularEps);

/// Running mean of accepted scale samples. Additive flavor averages the
/// ratios; multiplicative averages their logs (a geometric mean).
class MovingAverage {
 public:
  enum class Model { Additive, Multiplicative };

  explicit MovingAverage(Model model) : model_(model) {}

  /// Folds one measurement in. Invalid measurements (and non-positive
  /// lambdas under the multiplicative model) leave the state untouched.
  /// Returns the estimate after the update when one exists.
  std::optional<double> update(const ScaleMeasurement& m);

  std::optional<double> estimate() const;
  int count() const { return count_; }

 private:
  Model model_;
  int count_ = 0;
  double accum_ = 0.0;  // sum of lambdas, or of their logs
};

/// Intercept-augmented autoregressive filter. Weights come from the
/// normal equations built on the raw (non-centered) correlations of the
/// buffered measurements, refit periodically over a sliding buffer.
class ArFilter {
 public:
  struct Fit {
    double intercept = 0.0;          // K
    std::vector<double> weights;     // alpha_1 .. alpha_p
  };

  explicit ArFilter(int order, int refit_interval = 50,
                    size_t buffer_capacity = 500);

  /// Consumes one measurement; returns the filter output once fitted.
  /// Throws NotReadyError before the first successful fit.
  double update(const ScaleMeasurement& m);

  /// Installs a fit and output history directly (deterministic replay and
  /// hand-constructed filters). history holds the last p outputs, oldest
  /// first.
  void set_fit(Fit fit, std::vector<double> history);

  bool fitted() const { return fit_.has_value(); }
  const Fit& fit() const;
  std::optional<double> last_output() const { return last_output_; }
  int order() const { return order_; }

 private:
  void maybe_refit();

  int order_;
  int refit_interval_;
  size_t buffer_capacity_;
  std::deque<double> buffer_;      // accepted measurements, fit input
  std::deque<double> history_;     // last p outputs, newest at back
  std::optional<Fit> fit_;
  std::optional<double> last_output_;
  int accepted_ = 0;
};

/// Solves the intercept-augmented normal equations for an order-p
/// autoregression on the given signal:
///   [mu c_1 .. c_p]' = M [K alpha_1 .. alpha_p]'
/// where mu is the signal mean, c_l the raw lag-l correlation, and M the
/// bordered Toeplitz moment matrix. Rank-deficient but consistent systems
/// (constant signals) are accepted; inconsistent ones raise
/// SingularSystemError.
ArFilter::Fit ar_fit_yule_walker(const std::vector<double>& signal, int order);

/// Scalar Kalman filter over the scale coefficient with identity state and
/// measurement models.
struct KalmanState {
  double estimate = 0.0;
  double variance = 1.0;
  double process_noise = 1e-5;      // q
  double measurement_noise = 1e-2;  // r
};

/// Prediction step: the estimate carries over, variance grows by q.
KalmanState kf_predict(const KalmanState& state);

/// Correction step with gain p / (p + r).
KalmanState kf_update(const KalmanState& state, double z);

}  // namespace monoscale

#endif  // MONOSCALE_SCALE_HPP
