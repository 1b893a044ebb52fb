#include "admitcast/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

namespace admitcast {

SarimaSpec reference_spec(int period) {
  SarimaSpec s;
  s.p = 2, s.d = 0, s.q = 2;
  s.P = 1, s.D = 1, s.Q = 1;
  s.period = period;
  s.include_drift = true;
  return s;
}

std::vector<double> default_fan_levels() { return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99}; }

namespace {

int default_lag(int period, Eigen::Index n, int fitdf) {
  const int cap = static_cast<int>(n / 2);
  return std::max(fitdf + 1, std::min(2 * period, cap));
}

void stationarity(const Eigen::VectorXd& x, std::vector<TestResult>& out) {
  out.push_back(adf_test(x));
  out.push_back(pp_test(x));
  out.push_back(kpss_test(x));
}

}  // namespace

Diagnostics residual_diagnostics(const SarimaFit& fit, std::optional<int> ljung_box_lag) {
  const SarimaSpec& s = fit.spec;
  const int fitdf = s.p + s.q + s.P + s.Q;
  const Eigen::VectorXd& r = fit.residuals;
  Diagnostics d{"residuals of " + s.label(), {}};
  stationarity(r, d.tests);
  d.tests.push_back(ljung_box(r, ljung_box_lag.value_or(default_lag(s.period, r.size(), fitdf)), fitdf));
  for (auto& t : normality_battery(r)) d.tests.push_back(std::move(t));
  return d;
}

Diagnostics series_diagnostics(const TimeSeries& series, std::optional<int> ljung_box_lag) {
  const Eigen::VectorXd& x = series.values;
  Diagnostics d{"series", {}};
  stationarity(x, d.tests);
  d.tests.push_back(ljung_box(x, ljung_box_lag.value_or(default_lag(series.period, x.size(), 0))));
  for (auto& t : normality_battery(x)) d.tests.push_back(std::move(t));
  return d;
}

RunReport run_pipeline(const Dataset& data, const PipelineOptions& options) {
  if (options.horizon < 1) throw std::invalid_argument("forecast horizon must be >= 1");
  const auto [train, test] = split(data.series, options.train_len);

  SelectionOptions selection = options.selection;
  selection.fit.optimizer.seed = options.seed;
  CompareOptions compare{options.bounds, selection};

  RunReport report;
  report.provenance.input_sha256 = data.sha256;
  report.provenance.seed = options.seed;
  report.provenance.period = data.series.period;
  report.provenance.train_length = train.size();
  report.provenance.test_length = test.size();

  report.comparison = compare_methods(train, test.values, compare);

  SarimaSpec spec = options.model.value_or(reference_spec(data.series.period));
  if (options.use_selected_model) {
    if (!report.comparison->selection) throw DataError("no model was selected for a zero-variance training series");
    spec = report.comparison->selection->best.spec;
  }
  const bool reuse = report.comparison->selection && report.comparison->selection->best.spec == spec;
  report.model = reuse ? report.comparison->selection->best : fit(spec, train, selection.fit);
  report.diagnostics = residual_diagnostics(*report.model, options.ljung_box_lag);
  report.forecast = ForecastSection{train.size() + 1, forecast(*report.model, options.horizon, options.levels)};
  return report;
}

}  // namespace admitcast
