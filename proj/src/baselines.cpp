#include "admitcast/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "admitcast/errors.hpp"
#include "admitcast/optimize.hpp"

namespace admitcast {

namespace {

constexpr double kLower = 1e-4;
constexpr double kUpper = 1.0 - 1e-4;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_horizon(int h) {
  if (h < 1) throw std::invalid_argument("forecast horizon must be >= 1");
}

void check_length(const TimeSeries& train, Eigen::Index min_len, const char* who) {
  if (train.size() < min_len)
    throw DataError(std::string(who) + ": needs at least " + std::to_string(min_len) + " observations");
}

void check_weight(double w, const char* name) {
  if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

struct Smoothed {
  Eigen::VectorXd fitted;
  double level = 0.0;
  double trend = 0.0;
  double sse = 0.0;
};

Smoothed run_holt(const Eigen::VectorXd& y, double alpha, double beta, double trend0) {
  Smoothed s;
  s.fitted.resize(y.size());
  double level = y[0];
  double trend = trend0;
  for (Eigen::Index t = 0; t < y.size(); ++t) {
    const double pred = level + trend;
    s.fitted[t] = pred;
    const double err = y[t] - pred;
    s.sse += err * err;
    const double next_level = alpha * y[t] + (1.0 - alpha) * pred;
    trend = beta * (next_level - level) + (1.0 - beta) * trend;
    level = next_level;
  }
  s.level = level;
  s.trend = trend;
  return s;
}

Smoothed run_ses(const Eigen::VectorXd& y, double alpha) { return run_holt(y, alpha, 0.0, 0.0); }

double squash(double u) { return kLower + (kUpper - kLower) / (1.0 + std::exp(-u)); }
double unsquash(double w) {
  const double z = (w - kLower) / (kUpper - kLower);
  return std::log(z / (1.0 - z));
}

}  // namespace

BaselineForecast mean_forecast(const TimeSeries& train, int h) {
  check_horizon(h);
  check_length(train, 1, "mean_forecast");
  const double mu = train.values.mean();
  return {"Mean", Eigen::VectorXd::Constant(h, mu), Eigen::VectorXd::Constant(train.size(), mu), {{"mean", mu}}};
}

BaselineForecast naive_forecast(const TimeSeries& train, int h) {
  check_horizon(h);
  check_length(train, 1, "naive_forecast");
  const auto n = train.size();
  Eigen::VectorXd fitted(n);
  fitted[0] = kNaN;
  fitted.tail(n - 1) = train.values.head(n - 1);
  return {"Naive", Eigen::VectorXd::Constant(h, train.values[n - 1]), fitted, {}};
}

BaselineForecast seasonal_naive_forecast(const TimeSeries& train, int h) {
  check_horizon(h);
  const int m = train.period;
  check_length(train, m, "seasonal_naive_forecast");
  const auto n = train.size();
  Eigen::VectorXd point(h);
  for (int k = 0; k < h; ++k) point[k] = train.values[n - m + (k % m)];
  Eigen::VectorXd fitted = Eigen::VectorXd::Constant(n, kNaN);
  fitted.tail(n - m) = train.values.head(n - m);
  return {"Seasonal naive", point, fitted, {{"period", static_cast<double>(m)}}};
}

BaselineForecast drift_forecast(const TimeSeries& train, int h) {
  check_horizon(h);
  check_length(train, 2, "drift_forecast");
  const auto n = train.size();
  const double y1 = train.values[0], yn = train.values[n - 1];
  const double slope = (yn - y1) / static_cast<double>(n - 1);
  Eigen::VectorXd point(h);
  for (int k = 1; k <= h; ++k) point[k - 1] = yn + k * slope;
  Eigen::VectorXd fitted(n);
  fitted[0] = kNaN;
  fitted.tail(n - 1) = train.values.head(n - 1).array() + slope;
  return {"Drift", point, fitted, {{"slope", slope}}};
}

BaselineForecast ses_forecast(const TimeSeries& train, int h, std::optional<double> alpha) {
  check_horizon(h);
  check_length(train, 2, "ses_forecast");
  double a;
  if (alpha) {
    check_weight(*alpha, "alpha");
    a = *alpha;
  } else {
    a = golden_section([&](double w) { return run_ses(train.values, w).sse; }, kLower, kUpper, 1e-10).x;
  }
  const Smoothed s = run_ses(train.values, a);
  return {"SES", Eigen::VectorXd::Constant(h, s.level), s.fitted, {{"alpha", a}, {"sse", s.sse}}};
}

BaselineForecast holt_forecast(const TimeSeries& train, int h, const HoltOptions& options) {
  check_horizon(h);
  check_length(train, 3, "holt_forecast");
  if (options.alpha) check_weight(*options.alpha, "alpha");
  if (options.beta) check_weight(*options.beta, "beta");
  const Eigen::VectorXd& y = train.values;
  const double trend0 = options.initial_trend.value_or(y[1] - y[0]);

  double alpha = options.alpha.value_or(0.5);
  double beta = options.beta.value_or(0.1);
  if (!options.alpha || !options.beta) {
    // Free weights are optimised on a logistic scale mapped into [1e-4, 1 - 1e-4].
    Eigen::VectorXd start(2);
    start << unsquash(std::clamp(alpha, kLower, kUpper)), unsquash(std::clamp(beta, kLower, kUpper));
    auto weights = [&](const Eigen::VectorXd& u) {
      return std::pair{options.alpha ? *options.alpha : squash(u[0]), options.beta ? *options.beta : squash(u[1])};
    };
    NelderMeadOptions nm;
    nm.step = Eigen::VectorXd::Constant(2, 1.0);
    const OptimResult best = nelder_mead(
        [&](const Eigen::VectorXd& u) {
          const auto [a, b] = weights(u);
          return run_holt(y, a, b, trend0).sse;
        },
        start, nm);
    std::tie(alpha, beta) = weights(best.x);
  }
  const Smoothed s = run_holt(y, alpha, beta, trend0);
  Eigen::VectorXd point(h);
  for (int k = 1; k <= h; ++k) point[k - 1] = s.level + k * s.trend;
  return {"Holt", point, s.fitted, {{"alpha", alpha}, {"beta", beta}, {"sse", s.sse}}};
}

std::string_view label(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::mean: return "Mean";
    case BaselineMethod::naive: return "Naive";
    case BaselineMethod::seasonal_naive: return "Seasonal naive";
    case BaselineMethod::drift: return "Drift";
    case BaselineMethod::ses: return "SES";
    case BaselineMethod::holt: return "Holt";
  }
  return "unknown";
}

BaselineForecast baseline_forecast(BaselineMethod method, const TimeSeries& train, int h) {
  switch (method) {
    case BaselineMethod::mean: return mean_forecast(train, h);
    case BaselineMethod::naive: return naive_forecast(train, h);
    case BaselineMethod::seasonal_naive: return seasonal_naive_forecast(train, h);
    case BaselineMethod::drift: return drift_forecast(train, h);
    case BaselineMethod::ses: return ses_forecast(train, h);
    case BaselineMethod::holt: return holt_forecast(train, h);
  }
  throw std::invalid_argument("unknown baseline method");
}

}  // namespace admitcast
