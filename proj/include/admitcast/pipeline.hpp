#pragma once

// End-to-end runs shared by the command-line tool and the tests: holdout
// comparison, a reference model fit, residual diagnostics and a fan forecast.

#include <cstdint>
#include <optional>
#include <vector>

#include "admitcast/dataset.hpp"
#include "admitcast/report.hpp"
#include "admitcast/selection.hpp"

namespace admitcast {

// ARIMA(2,0,2)(1,1,1)[period] with drift, the reference weekly model.
SarimaSpec reference_spec(int period);

// 10%, 20%, ..., 90% and 99%.
std::vector<double> default_fan_levels();

struct PipelineOptions {
  Eigen::Index train_len = 200;
  int horizon = 52;
  std::vector<double> levels = default_fan_levels();
  // Model for the fit, diagnostics and forecast. Empty means the reference
  // spec, or the search winner when use_selected_model is set.
  std::optional<SarimaSpec> model = std::nullopt;
  bool use_selected_model = false;
  std::optional<SearchBounds> bounds;
  SelectionOptions selection{};
  // Ljung-Box lag; empty uses twice the period, capped at half the sample.
  std::optional<int> ljung_box_lag;
  std::uint64_t seed = 20120301;
};

// Stationarity tests, Ljung-Box (fitdf = ARMA coefficient count) and the six
// normality tests on the residuals of `fit`.
Diagnostics residual_diagnostics(const SarimaFit& fit, std::optional<int> ljung_box_lag = std::nullopt);

// Stationarity tests and the normality battery on a raw series.
Diagnostics series_diagnostics(const TimeSeries& series, std::optional<int> ljung_box_lag = std::nullopt);

RunReport run_pipeline(const Dataset& data, const PipelineOptions& options = {});

}  // namespace admitcast
