// admitcast-cli: weekly admissions diagnostics, model fitting, holdout
// comparison and fan-chart forecasts from a CSV export.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 convergence failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "admitcast/charts.hpp"
#include "admitcast/dataset.hpp"
#include "admitcast/errors.hpp"
#include "admitcast/pipeline.hpp"
#include "admitcast/report.hpp"

namespace {

using namespace admitcast;

enum Exit : int { kOk = 0, kUsage = 1, kData = 2, kConvergence = 3 };

struct Globals {
  int period = 52;
  std::uint64_t seed = 20120301;
  std::string format = "json";
  std::string column = "admissions";
  std::string date_column = "week_start_date";
  std::string output;
  unsigned threads = 0;
};

struct ModelFlags {
  std::string order;
  std::string seasonal;
  bool drift = false;

  bool given() const { return !order.empty() || !seasonal.empty(); }
};

std::vector<int> parse_triple(const std::string& text, const char* flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(flag) + " expects three comma-separated integers, got '" + text + "'");
    }
  }
  if (out.size() != 3)
    throw std::invalid_argument(std::string(flag) + " expects three comma-separated integers, got '" + text + "'");
  return out;
}

SarimaSpec make_spec(const ModelFlags& m, int period) {
  SarimaSpec s;
  s.period = period;
  if (!m.order.empty()) {
    const auto o = parse_triple(m.order, "--order");
    s.p = o[0], s.d = o[1], s.q = o[2];
  }
  if (!m.seasonal.empty()) {
    const auto o = parse_triple(m.seasonal, "--seasonal");
    s.P = o[0], s.D = o[1], s.Q = o[2];
  }
  s.include_drift = m.drift;
  s.validate();
  return s;
}

// Percentages such as "10,20,...,99" or the shorthand "10..99" for the
// default fan of 10% steps plus 99%.
std::vector<double> parse_levels(const std::string& text) {
  if (text.empty() || text == "10..99") return default_fan_levels();
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument("--levels expects comma-separated percentages, got '" + text + "'");
    }
    if (!(v > 0.0 && v < 100.0)) throw std::invalid_argument("--levels values must lie strictly between 0 and 100");
    out.push_back(v / 100.0);
  }
  return out;
}

ReportFormat report_format(const std::string& f) {
  if (f == "json") return ReportFormat::json;
  if (f == "csv") return ReportFormat::csv;
  throw std::invalid_argument("--format must be json or csv");
}

Dataset load(const std::string& path, const Globals& g) {
  CsvOptions o;
  o.period = g.period;
  o.value_column = g.column;
  o.date_column = g.date_column;
  return load_dataset(path, o);
}

void write_report(const RunReport& report, const Globals& g) {
  const ReportFormat format = report_format(g.format);
  if (!g.output.empty()) {
    for (const auto& p : emit_report(report, format, g.output)) std::cerr << "wrote " << p.string() << '\n';
    return;
  }
  if (format == ReportFormat::json) {
    std::cout << report_json(report);
    return;
  }
  bool first = true;
  for (const auto& [section, text] : report_csv(report)) {
    std::cout << (first ? "" : "\n") << "# " << section << '\n' << text;
    first = false;
  }
}

Provenance provenance(const Dataset& data, const Globals& g) {
  Provenance p;
  p.input_sha256 = data.sha256;
  p.seed = g.seed;
  p.period = g.period;
  return p;
}

FitOptions fit_options(const Globals& g) {
  FitOptions f;
  f.optimizer.seed = g.seed;
  return f;
}

TimeSeries training_window(const TimeSeries& s, Eigen::Index train_len) {
  if (train_len <= 0 || train_len == s.size()) return s;
  return split(s, train_len).first;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weekly hospital admissions forecasting"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(ADMITCAST_VERSION));

  Globals g;
  app.add_option("--period", g.period, "Seasonal period in weeks")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for optimizer restarts");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--column", g.column, "Name of the admissions column");
  app.add_option("--date-column", g.date_column, "Name of the date column (empty: positional)");
  app.add_option("-o,--output", g.output, "Output path (JSON file, or stem for CSV sections)");
  app.add_option("--threads", g.threads, "Worker threads for model search (0: all cores)");

  std::string csv;
  ModelFlags model;
  Eigen::Index train_len = 0;

  auto add_csv = [&](CLI::App* sub) { sub->add_option("csv", csv, "Input CSV")->required(); };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--order", model.order, "Non-seasonal orders p,d,q");
    sub->add_option("--seasonal", model.seasonal, "Seasonal orders P,D,Q");
    sub->add_flag("--drift", model.drift, "Include a mean or drift term");
  };

  // diagnose
  auto* diagnose = app.add_subcommand("diagnose", "Stationarity, whiteness and normality tests");
  add_csv(diagnose);
  add_model(diagnose);
  std::optional<int> lb_lag;
  diagnose->add_option("--lb-lag", lb_lag, "Ljung-Box lag");
  diagnose->add_option("--train-len", train_len, "Use only the first N weeks");

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit one seasonal ARIMA model");
  add_csv(fit_cmd);
  add_model(fit_cmd);
  fit_cmd->add_option("--train-len", train_len, "Use only the first N weeks");

  // autofit
  auto* autofit = app.add_subcommand("autofit", "Select a seasonal ARIMA model by AIC or BIC");
  add_csv(autofit);
  SearchBounds bounds;
  std::string criterion = "aic", strategy = "stepwise";
  bool no_drift = false, force = false;
  autofit->add_option("--criterion", criterion)->check(CLI::IsMember({"aic", "bic"}));
  autofit->add_option("--strategy", strategy)->check(CLI::IsMember({"stepwise", "exhaustive"}));
  autofit->add_option("--max-p", bounds.max_p)->check(CLI::NonNegativeNumber);
  autofit->add_option("--max-q", bounds.max_q)->check(CLI::NonNegativeNumber);
  autofit->add_option("--max-d", bounds.max_d)->check(CLI::NonNegativeNumber);
  autofit->add_option("--max-P", bounds.max_P)->check(CLI::NonNegativeNumber);
  autofit->add_option("--max-Q", bounds.max_Q)->check(CLI::NonNegativeNumber);
  autofit->add_option("--max-D", bounds.max_D)->check(CLI::NonNegativeNumber);
  autofit->add_flag("--no-drift", no_drift, "Never include a mean or drift term");
  autofit->add_flag("--force", force, "Allow exhaustive grids above 5000 candidates");
  autofit->add_option("--train-len", train_len, "Use only the first N weeks");

  // compare
  auto* compare = app.add_subcommand("compare", "Holdout comparison of ARIMA and six baselines");
  add_csv(compare);
  Eigen::Index holdout_split = 200;
  compare->add_option("--train-len", holdout_split, "Training weeks; the rest is the holdout");

  // forecast
  auto* forecast_cmd = app.add_subcommand("forecast", "Interval forecast with an optional fan chart");
  add_csv(forecast_cmd);
  add_model(forecast_cmd);
  int horizon = 52;
  std::string levels_text;
  std::string svg;
  bool auto_model = false;
  forecast_cmd->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
  forecast_cmd->add_option("--levels", levels_text, "Interval levels in percent, e.g. 10,20,...,99 or 10..99");
  forecast_cmd->add_option("--svg", svg, "Fan chart SVG path (band CSV written beside it)");
  forecast_cmd->add_flag("--auto", auto_model, "Use the stepwise AIC winner instead of the reference model");
  forecast_cmd->add_option("--train-len", train_len, "Use only the first N weeks");

  // report
  auto* report_cmd = app.add_subcommand("report", "Full pipeline: comparison, model, diagnostics, forecast");
  add_csv(report_cmd);
  add_model(report_cmd);
  Eigen::Index report_train = 200;
  std::string fan_svg, seasonal_svg;
  report_cmd->add_option("--train-len", report_train, "Training weeks; the rest is the holdout");
  report_cmd->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
  report_cmd->add_option("--levels", levels_text);
  report_cmd->add_flag("--auto", auto_model, "Use the stepwise AIC winner instead of the reference model");
  report_cmd->add_option("--fan-svg", fan_svg, "Also write the fan chart");
  report_cmd->add_option("--seasonal-svg", seasonal_svg, "Also write the seasonal plot of the full series");
  report_cmd->add_option("--lb-lag", lb_lag, "Ljung-Box lag");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const Dataset data = load(csv, g);
    SelectionOptions selection;
    selection.threads = g.threads;
    selection.fit = fit_options(g);

    if (*diagnose) {
      RunReport r;
      r.provenance = provenance(data, g);
      const TimeSeries series = training_window(data.series, train_len);
      r.provenance.train_length = series.size();
      if (model.given()) {
        r.model = fit(make_spec(model, g.period), series, fit_options(g));
        r.diagnostics = residual_diagnostics(*r.model, lb_lag);
      } else {
        r.diagnostics = series_diagnostics(series, lb_lag);
      }
      write_report(r, g);
    } else if (*fit_cmd) {
      if (!model.given()) throw std::invalid_argument("fit needs --order and/or --seasonal");
      RunReport r;
      r.provenance = provenance(data, g);
      const TimeSeries series = training_window(data.series, train_len);
      r.provenance.train_length = series.size();
      r.model = fit(make_spec(model, g.period), series, fit_options(g));
      write_report(r, g);
    } else if (*autofit) {
      bounds.period = g.period;
      bounds.try_drift = !no_drift;
      selection.force = force;
      const TimeSeries series = training_window(data.series, train_len);
      SelectionResult sel =
          select_sarima(series, bounds, criterion == "aic" ? Criterion::aic : Criterion::bic,
                        strategy == "stepwise" ? SearchStrategy::stepwise : SearchStrategy::exhaustive, selection);
      RunReport r;
      r.provenance = provenance(data, g);
      r.provenance.train_length = series.size();
      r.model = sel.best;
      ComparisonReport ranking;
      ranking.selection = std::move(sel);
      r.comparison = std::move(ranking);
      write_report(r, g);
    } else if (*compare) {
      const auto [train, test] = split(data.series, holdout_split);
      RunReport r;
      r.provenance = provenance(data, g);
      r.provenance.train_length = train.size();
      r.provenance.test_length = test.size();
      r.comparison = compare_methods(train, test.values, CompareOptions{std::nullopt, selection});
      write_report(r, g);
    } else if (*forecast_cmd) {
      const TimeSeries series = training_window(data.series, train_len);
      SarimaFit f;
      if (auto_model) {
        SearchBounds b;
        b.period = g.period;
        f = select_sarima(series, b, Criterion::aic, SearchStrategy::stepwise, selection).best;
      } else {
        f = fit(model.given() ? make_spec(model, g.period) : reference_spec(g.period), series, fit_options(g));
      }
      RunReport r;
      r.provenance = provenance(data, g);
      r.provenance.train_length = series.size();
      r.forecast = ForecastSection{series.size() + 1, forecast(f, horizon, parse_levels(levels_text))};
      r.model = std::move(f);
      if (!svg.empty()) {
        emit_fan_chart(series, r.forecast->result, svg);
        std::cerr << "wrote " << svg << '\n';
      }
      write_report(r, g);
    } else if (*report_cmd) {
      PipelineOptions o;
      o.train_len = report_train;
      o.horizon = horizon;
      o.levels = parse_levels(levels_text);
      if (model.given()) o.model = make_spec(model, g.period);
      o.use_selected_model = auto_model;
      o.selection = selection;
      o.ljung_box_lag = lb_lag;
      o.seed = g.seed;
      const RunReport r = run_pipeline(data, o);
      if (!fan_svg.empty()) {
        emit_fan_chart(split(data.series, report_train).first, r.forecast->result, fan_svg);
        std::cerr << "wrote " << fan_svg << '\n';
      }
      if (!seasonal_svg.empty()) {
        emit_seasonal_plot(data.series, seasonal_svg);
        std::cerr << "wrote " << seasonal_svg << '\n';
      }
      write_report(r, g);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}
