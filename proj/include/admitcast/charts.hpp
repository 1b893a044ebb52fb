#pragma once

#include <filesystem>
#include <string>

#include "admitcast/sarima.hpp"
#include "admitcast/series.hpp"

namespace admitcast {

// Fan chart: history and point forecast as lines, one translucent band per
// interval level with narrower bands drawn darker. Week indices on the x axis
// with a gridline at every seasonal cycle.
std::string fan_chart_svg(const TimeSeries& history, const ForecastResult& forecast);

// Long-format band coordinates: step,index,level,lower,upper,point. Values
// are printed with round-trip precision so they equal the forecast exactly.
std::string fan_chart_csv(const TimeSeries& history, const ForecastResult& forecast);

// Writes the SVG to `path` and the band CSV beside it (<stem>_bands.csv).
void emit_fan_chart(const TimeSeries& history, const ForecastResult& forecast, const std::filesystem::path& path);

// One polyline per seasonal cycle over positions 1..period, with a legend.
// Requires 2 <= period <= length.
std::string seasonal_plot_svg(const TimeSeries& series);
std::string seasonal_plot_csv(const TimeSeries& series);

// Writes the SVG to `path` and the table CSV beside it (<stem>_table.csv).
void emit_seasonal_plot(const TimeSeries& series, const std::filesystem::path& path);

}  // namespace admitcast
