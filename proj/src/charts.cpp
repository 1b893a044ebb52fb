#include "admitcast/charts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace admitcast {

namespace {

constexpr double kWidth = 960.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 30.0, kBottom = 50.0;

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string exact(double v) { return fmt(v, "%.17g"); }

// Linear map from data to pixel coordinates.
struct Frame {
  double x0, x1, y0, y1;

  double x(double v) const { return kLeft + (v - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double y(double v) const { return kHeight - kBottom - (v - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

Frame padded(double x0, double x1, double y0, double y1) {
  if (x1 <= x0) x1 = x0 + 1.0;
  if (y1 <= y0) {
    y0 -= 1.0;
    y1 += 1.0;
  }
  const double pad = 0.05 * (y1 - y0);
  return {x0, x1, y0 - pad, y1 + pad};
}

std::string header(const std::string& title) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  return os.str();
}

std::string y_axis(const Frame& f) {
  std::ostringstream os;
  for (int i = 0; i <= 5; ++i) {
    const double v = f.y0 + (f.y1 - f.y0) * i / 5.0;
    os << "<line x1=\"" << kLeft << "\" x2=\"" << kWidth - kRight << "\" y1=\"" << fmt(f.y(v)) << "\" y2=\""
       << fmt(f.y(v)) << "\" stroke=\"#eeeeee\"/>\n"
       << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(f.y(v) + 4) << "\" text-anchor=\"end\">" << fmt(v, "%.0f")
       << "</text>\n";
  }
  os << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft << "\" y1=\"" << kTop << "\" y2=\"" << kHeight - kBottom
     << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << kLeft << "\" x2=\"" << kWidth - kRight << "\" y1=\"" << kHeight - kBottom << "\" y2=\""
     << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  return os.str();
}

std::string polyline(const std::vector<std::pair<double, double>>& pts, const std::string& attrs) {
  std::ostringstream os;
  os << "<polyline fill=\"none\" " << attrs << " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) os << (i ? " " : "") << fmt(pts[i].first) << ',' << fmt(pts[i].second);
  os << "\"/>\n";
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::filesystem::path sibling(const std::filesystem::path& path, const std::string& suffix) {
  std::filesystem::path out = path.parent_path() / path.stem();
  out += suffix;
  return out;
}

void check_forecast(const ForecastResult& f) {
  if (f.levels.empty()) throw std::invalid_argument("fan chart needs at least one interval level");
  if (f.point.size() < 1) throw std::invalid_argument("fan chart needs a forecast of at least one step");
}

// Level order from widest to narrowest so darker bands land on top.
std::vector<std::size_t> widest_first(const ForecastResult& f) {
  std::vector<std::size_t> order(f.levels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return f.levels[a] > f.levels[b]; });
  return order;
}

}  // namespace

std::string fan_chart_svg(const TimeSeries& history, const ForecastResult& forecast) {
  check_forecast(forecast);
  const auto n = history.size();
  const auto h = forecast.point.size();
  double lo = std::min(history.values.minCoeff(), forecast.lower.minCoeff());
  double hi = std::max(history.values.maxCoeff(), forecast.upper.maxCoeff());
  const Frame f = padded(1.0, static_cast<double>(n + h), lo, hi);

  std::ostringstream os;
  os << header("Forecast with prediction intervals");
  os << y_axis(f);
  const int m = std::max(history.period, 1);
  for (Eigen::Index w = m + 1; w <= n + h; w += m)
    os << "<line class=\"cycle\" x1=\"" << fmt(f.x(w)) << "\" x2=\"" << fmt(f.x(w)) << "\" y1=\"" << kTop
       << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"#cccccc\" stroke-dasharray=\"4 3\"/>\n";
  for (Eigen::Index w = 1; w <= n + h; w += m)
    os << "<text x=\"" << fmt(f.x(w)) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">" << w
       << "</text>\n";
  os << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 10
     << "\" text-anchor=\"middle\">week</text>\n";

  const std::vector<std::size_t> order = widest_first(forecast);
  const double widest = forecast.levels[order.front()];
  for (std::size_t j : order) {
    const double level = forecast.levels[j];
    // Narrow bands are darker: lightness scales with the level.
    const int shade = static_cast<int>(std::lround(90.0 - 55.0 * (widest - level) / std::max(widest, 1e-9)));
    os << "<polygon class=\"band\" data-level=\"" << fmt(level, "%g") << "\" fill=\"hsl(210,70%," << shade
       << "%)\" fill-opacity=\"0.85\" stroke=\"none\" points=\"";
    const auto col = static_cast<Eigen::Index>(j);
    for (Eigen::Index i = 0; i < h; ++i)
      os << (i ? " " : "") << fmt(f.x(n + 1 + i)) << ',' << fmt(f.y(forecast.upper(i, col)));
    for (Eigen::Index i = h - 1; i >= 0; --i)
      os << ' ' << fmt(f.x(n + 1 + i)) << ',' << fmt(f.y(forecast.lower(i, col)));
    os << "\"/>\n";
  }

  std::vector<std::pair<double, double>> past, ahead;
  for (Eigen::Index t = 0; t < n; ++t) past.emplace_back(f.x(t + 1), f.y(history.values[t]));
  ahead.push_back(past.back());
  for (Eigen::Index i = 0; i < h; ++i) ahead.emplace_back(f.x(n + 1 + i), f.y(forecast.point[i]));
  os << polyline(past, "class=\"history\" stroke=\"black\" stroke-width=\"1.2\"");
  os << polyline(ahead, "class=\"forecast\" stroke=\"#08306b\" stroke-width=\"1.6\"");
  os << "</svg>\n";
  return os.str();
}

std::string fan_chart_csv(const TimeSeries& history, const ForecastResult& forecast) {
  check_forecast(forecast);
  std::ostringstream os;
  os << "step,index,level,lower,upper,point\n";
  for (Eigen::Index i = 0; i < forecast.point.size(); ++i)
    for (std::size_t j = 0; j < forecast.levels.size(); ++j) {
      const auto col = static_cast<Eigen::Index>(j);
      os << i + 1 << ',' << history.size() + 1 + i << ',' << exact(forecast.levels[j]) << ','
         << exact(forecast.lower(i, col)) << ',' << exact(forecast.upper(i, col)) << ',' << exact(forecast.point[i])
         << '\n';
    }
  return os.str();
}

void emit_fan_chart(const TimeSeries& history, const ForecastResult& forecast, const std::filesystem::path& path) {
  const std::string svg = fan_chart_svg(history, forecast);
  const std::string csv = fan_chart_csv(history, forecast);
  write_file(path, svg);
  write_file(sibling(path, "_bands.csv"), csv);
}

namespace {

void check_seasonal(const TimeSeries& series) {
  if (series.period < 2) throw std::invalid_argument("seasonal plot needs a period of at least 2");
  if (series.period > series.size())
    throw std::invalid_argument("seasonal plot needs at least one full period of data");
}

// Categorical palette for cycles.
constexpr const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d",
                                    "#666666"};

}  // namespace

std::string seasonal_plot_svg(const TimeSeries& series) {
  check_seasonal(series);
  const auto table = seasonal_table(series);
  const int cycles = seasonal_cycle_count(series.size(), series.period);
  const Frame f = padded(1.0, series.period, series.values.minCoeff(), series.values.maxCoeff());

  std::ostringstream os;
  os << header("Seasonal plot");
  os << y_axis(f);
  const int tick = series.period >= 26 ? 4 : 1;
  for (int pos = 1; pos <= series.period; pos += tick)
    os << "<text x=\"" << fmt(f.x(pos)) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">" << pos
       << "</text>\n";
  os << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 10
     << "\" text-anchor=\"middle\">position in cycle</text>\n";

  for (int c = 1; c <= cycles; ++c) {
    std::vector<std::pair<double, double>> pts;
    for (Eigen::Index r = 0; r < table.rows(); ++r)
      if (table(r, 0) == c) pts.emplace_back(f.x(table(r, 1)), f.y(table(r, 2)));
    const char* colour = kPalette[(c - 1) % std::size(kPalette)];
    os << polyline(pts, "class=\"cycle\" data-cycle=\"" + std::to_string(c) + "\" stroke=\"" + colour +
                            "\" stroke-width=\"1.4\"");
    const double ly = kTop + 14.0 * c;
    os << "<g class=\"legend\"><line x1=\"" << kWidth - kRight - 90 << "\" x2=\"" << kWidth - kRight - 70
       << "\" y1=\"" << ly << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/><text x=\""
       << kWidth - kRight - 64 << "\" y=\"" << ly + 4 << "\">cycle " << c << "</text></g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string seasonal_plot_csv(const TimeSeries& series) {
  check_seasonal(series);
  const auto table = seasonal_table(series);
  std::ostringstream os;
  os << "cycle,position,value\n";
  for (Eigen::Index r = 0; r < table.rows(); ++r)
    os << static_cast<int>(table(r, 0)) << ',' << static_cast<int>(table(r, 1)) << ',' << exact(table(r, 2)) << '\n';
  return os.str();
}

void emit_seasonal_plot(const TimeSeries& series, const std::filesystem::path& path) {
  const std::string svg = seasonal_plot_svg(series);
  const std::string csv = seasonal_plot_csv(series);
  write_file(path, svg);
  write_file(sibling(path, "_table.csv"), csv);
}

}  // namespace admitcast
