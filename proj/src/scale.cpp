#include "monoscale/scale.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "monoscale/errors.hpp"

namespace monoscale {

ScaleMeasurement measure_lambda(const Vec3& inertial_t, const Vec3& monocular_t,
                                double eps_inertial, double eps_monocular) {
  if (!inertial_t.allFinite() || !monocular_t.allFinite()) {
    throw InvalidInputError("measure_lambda: non-finite translation");
  }
  ScaleMeasurement m;
  m.inertial_norm = inertial_t.norm();
  m.monocular_norm = monocular_t.norm();
  if (m.inertial_norm < eps_inertial || m.monocular_norm < eps_monocular) {
    m.valid = false;
    m.lambda = 0.0;
    return m;
  }
  m.lambda = m.inertial_norm / m.monocular_norm;
  m.valid = true;
  return m;
}

std::optional<double> MovingAverage::update(const ScaleMeasurement& m) {
  if (m.valid && (model_ == Model::Additive || m.lambda > 0.0)) {
    accum_ += model_ == Model::Additive ? m.lambda : std::log(m.lambda);
    ++count_;
  }
  return estimate();
}

std::optional<double> MovingAverage::estimate() const {
  if (count_ == 0) return std::nullopt;
  const double mean = accum_ / static_cast<double>(count_);
  return model_ == Model::Additive ? mean : std::exp(mean);
}

ArFilter::ArFilter(int order, int refit_interval, size_t buffer_capacity)
    : order_(order),
      refit_interval_(refit_interval),
      buffer_capacity_(buffer_capacity) {
  if (order < 1) throw InvalidConfigError("ArFilter: order must be >= 1");
  if (refit_interval < 1) {
    throw InvalidConfigError("ArFilter: refit interval must be >= 1");
  }
  if (buffer_capacity < static_cast<size_t>(order) + 2) {
    throw InvalidConfigError("ArFilter: buffer too small for the order");
  }
}

const ArFilter::Fit& ArFilter::fit() const {
  if (!fit_) throw NotReadyError("ArFilter: not fitted yet");
  return *fit_;
}

void ArFilter::set_fit(Fit fit, std::vector<double> history) {
  if (static_cast<int>(fit.weights.size()) != order_ ||
      static_cast<int>(history.size()) != order_) {
    throw InvalidInputError("ArFilter::set_fit: need order weights and outputs");
  }
  fit_ = std::move(fit);
  history_.assign(history.begin(), history.end());
  last_output_ = history_.back();
}

void ArFilter::maybe_refit() {
  if (buffer_.size() <= static_cast<size_t>(order_) + 1) return;
  // First fit as soon as enough data exists, then on the refit cadence.
  if (fit_ && accepted_ % refit_interval_ != 0) return;
  fit_ = ar_fit_yule_walker({buffer_.begin(), buffer_.end()}, order_);
  if (history_.empty()) {
    // Seed the output history with the most recent measurements; they are
    // the only past signal available at the first fit.
    const size_t n = buffer_.size();
    for (size_t k = n - static_cast<size_t>(order_); k < n; ++k) {
      history_.push_back(buffer_[k]);
    }
  }
}

double ArFilter::update(const ScaleMeasurement& m) {
  if (m.valid) {
    buffer_.push_back(m.lambda);
    if (buffer_.size() > buffer_capacity_) buffer_.pop_front();
    ++accepted_;
    maybe_refit();
  }
  if (!fit_) throw NotReadyError("ArFilter: not fitted yet");
  if (!m.valid) {
    if (!last_output_) throw NotReadyError("ArFilter: no output yet");
    return *last_output_;
  }
  // y(i) = K + (lambda(i) - K) + sum_j alpha_j y(i-j)
  double y = m.lambda;
  for (int j = 1; j <= order_; ++j) {
    y += fit_->weights[j - 1] * history_[history_.size() - j];
  }
  history_.push_back(y);
  if (history_.size() > static_cast<size_t>(order_)) history_.pop_front();
  last_output_ = y;
  return y;
}

ArFilter::Fit ar_fit_yule_walker(const std::vector<double>& signal, int order) {
  const int p = order;
  const int n = static_cast<int>(signal.size());
  if (p < 1) throw InvalidConfigError("ar_fit_yule_walker: order must be >= 1");
  if (n <= p + 1) {
    throw InvalidInputError(
        "ar_fit_yule_walker: need more than order + 1 samples");
  }

  double mu = 0.0;
  for (double v : signal) mu += v;
  mu /= n;

  // Raw lag correlations c_l = E[y(i) y(i-l)].
  std::vector<double> c(p + 1, 0.0);
  for (int l = 0; l <= p; ++l) {
    double acc = 0.0;
    for (int i = l; i < n; ++i) acc += signal[i] * signal[i - l];
    c[l] = acc / static_cast<double>(n - l);
  }

  Eigen::MatrixXd m(p + 1, p + 1);
  Eigen::VectorXd rhs(p + 1);
  m(0, 0) = 1.0;
  rhs(0) = mu;
  for (int j = 1; j <= p; ++j) m(0, j) = mu;
  for (int i = 1; i <= p; ++i) {
    m(i, 0) = mu;
    rhs(i) = c[i];
    for (int j = 1; j <= p; ++j) m(i, j) = c[std::abs(i - j)];
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-12);
  Eigen::VectorXd x = lu.solve(rhs);
  const double scale = std::max(1.0, rhs.norm());
  if (!x.allFinite() || (m * x - rhs).norm() > 1e-8 * scale) {
    throw SingularSystemError(
        "ar_fit_yule_walker: normal equations are singular");
  }

  ArFilter::Fit fit;
  fit.intercept = x(0);
  fit.weights.assign(x.data() + 1, x.data() + 1 + p);
  return fit;
}

KalmanState kf_predict(const KalmanState& state) {
  if (!(state.variance > 0.0)) {
    throw InvalidConfigError("kf_predict: variance must be > 0");
  }
  if (state.process_noise < 0.0) {
    throw InvalidConfigError("kf_predict: process noise must be >= 0");
  }
  KalmanState out = state;
  out.variance = state.variance + state.process_noise;
  return out;
}

KalmanState kf_update(const KalmanState& state, double z) {
  if (!(state.measurement_noise > 0.0)) {
    throw InvalidConfigError("kf_update: measurement noise must be > 0");
  }
  if (!(state.variance > 0.0)) {
    throw InvalidConfigError("kf_update: variance must be > 0");
  }
  if (!std::isfinite(z)) {
    throw InvalidInputError("kf_update: non-finite measurement");
  }
  const double gain = state.variance / (state.variance + state.measurement_noise);
  KalmanState out = state;
  out.estimate = state.estimate + gain * (z - state.estimate);
  out.variance = state.variance * (1.0 - gain);
  return out;
}

}  // namespace monoscale
