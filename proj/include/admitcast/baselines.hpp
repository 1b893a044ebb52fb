#pragma once

#include <Eigen/Dense>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "admitcast/series.hpp"

namespace admitcast {

struct BaselineForecast {
  std::string method;
  Eigen::VectorXd point;   // length h
  Eigen::VectorXd fitted;  // one-step in-sample fits; NaN where undefined
  std::map<std::string, double> params;
};

BaselineForecast mean_forecast(const TimeSeries& train, int h);
BaselineForecast naive_forecast(const TimeSeries& train, int h);
BaselineForecast seasonal_naive_forecast(const TimeSeries& train, int h);
BaselineForecast drift_forecast(const TimeSeries& train, int h);

// Simple exponential smoothing with level initialised at y_1. An empty alpha
// is chosen by golden-section search on the in-sample SSE.
BaselineForecast ses_forecast(const TimeSeries& train, int h, std::optional<double> alpha = std::nullopt);

struct HoltOptions {
  std::optional<double> alpha;
  std::optional<double> beta;
  // Defaults to y_2 - y_1.
  std::optional<double> initial_trend;
};

// Holt's linear trend method. Unspecified smoothing weights are estimated
// jointly with Nelder-Mead on the in-sample SSE.
BaselineForecast holt_forecast(const TimeSeries& train, int h, const HoltOptions& options = {});

enum class BaselineMethod { mean, naive, seasonal_naive, drift, ses, holt };

inline constexpr std::array<BaselineMethod, 6> kAllBaselines{
    BaselineMethod::holt, BaselineMethod::ses,   BaselineMethod::mean,
    BaselineMethod::drift, BaselineMethod::naive, BaselineMethod::seasonal_naive};

std::string_view label(BaselineMethod method);
BaselineForecast baseline_forecast(BaselineMethod method, const TimeSeries& train, int h);

}  // namespace admitcast
