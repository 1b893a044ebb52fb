#pragma once

// Series container, (seasonal) differencing and sample correlograms.
// Everything here is header-only and templated on the Eigen scalar type.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "admitcast/errors.hpp"

namespace admitcast {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct BasicTimeSeries {
  VectorX<Scalar> values;
  std::chrono::sys_days start_date{};  // label only, never used in arithmetic
  int period = 1;

  BasicTimeSeries() = default;
  BasicTimeSeries(VectorX<Scalar> v, int m,
                  std::chrono::sys_days start = std::chrono::sys_days{})
      : values(std::move(v)), start_date(start), period(m) {
    if (values.size() < 1) throw DataError("time series must contain at least one observation");
    if (period < 1) throw std::invalid_argument("seasonal period must be >= 1");
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      if (!std::isfinite(static_cast<double>(values[i])))
        throw DataError("time series contains a missing or non-finite value at index " +
                        std::to_string(i));
    }
  }

  Eigen::Index size() const { return values.size(); }
};

using TimeSeries = BasicTimeSeries<double>;

struct DifferenceSpec {
  int d = 0;       // non-seasonal order
  int D = 0;       // seasonal order
  int period = 1;  // seasonal lag

  // Observations consumed by the differencing operator.
  int lost() const { return d + D * period; }
};

// Coefficients c_0..c_K (c_0 = 1) of (1 - B)^d (1 - B^m)^D.
inline std::vector<double> differencing_polynomial(const DifferenceSpec& spec) {
  if (spec.d < 0 || spec.D < 0 || spec.period < 1)
    throw std::invalid_argument("invalid differencing orders");
  std::vector<double> poly{1.0};
  auto multiply = [&poly](int lag) {
    std::vector<double> out(poly.size() + static_cast<std::size_t>(lag), 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      out[i] += poly[i];
      out[i + static_cast<std::size_t>(lag)] -= poly[i];
    }
    poly = std::move(out);
  };
  for (int i = 0; i < spec.D; ++i) multiply(spec.period);
  for (int i = 0; i < spec.d; ++i) multiply(1);
  return poly;
}

// Seasonal differences are applied first, then ordinary ones. The result has
// n - d - D*period entries.
template <typename Derived>
VectorX<typename Derived::Scalar> difference(const Eigen::MatrixBase<Derived>& x,
                                             const DifferenceSpec& spec) {
  using Scalar = typename Derived::Scalar;
  if (spec.d < 0 || spec.D < 0 || spec.period < 1)
    throw std::invalid_argument("invalid differencing orders");
  if (x.size() <= spec.lost())
    throw DataError("series of length " + std::to_string(x.size()) +
                    " is too short for differencing orders d=" + std::to_string(spec.d) +
                    ", D=" + std::to_string(spec.D) + ", period=" + std::to_string(spec.period));
  VectorX<Scalar> out = x;
  auto step = [&out](Eigen::Index lag) {
    const Eigen::Index m = out.size() - lag;
    VectorX<Scalar> next = out.tail(m) - out.head(m);
    out = std::move(next);
  };
  for (int i = 0; i < spec.D; ++i) step(spec.period);
  for (int i = 0; i < spec.d; ++i) step(1);
  return out;
}

// Inverse of difference(): `head` holds the d + D*period leading values of
// the original series. Returns the full reconstructed series (head included).
template <typename DerivedW, typename DerivedH>
VectorX<typename DerivedW::Scalar> undifference(const Eigen::MatrixBase<DerivedW>& diffed,
                                                const DifferenceSpec& spec,
                                                const Eigen::MatrixBase<DerivedH>& head) {
  using Scalar = typename DerivedW::Scalar;
  const int k = spec.lost();
  if (head.size() != k)
    throw std::invalid_argument("undifference: head has " + std::to_string(head.size()) +
                                " values, expected " + std::to_string(k));
  const std::vector<double> poly = differencing_polynomial(spec);
  VectorX<Scalar> y(k + diffed.size());
  y.head(k) = head;
  for (Eigen::Index t = k; t < y.size(); ++t) {
    Scalar acc = diffed[t - k];
    for (int j = 1; j <= k; ++j) acc -= static_cast<Scalar>(poly[static_cast<std::size_t>(j)]) * y[t - j];
    y[t] = acc;
  }
  return y;
}

template <typename Scalar>
struct CorrelogramResult {
  std::vector<int> lags;
  VectorX<Scalar> values;
  Scalar ci_bound{};  // 1.96 / sqrt(n) white-noise band
};

namespace detail {

template <typename Derived>
VectorX<typename Derived::Scalar> autocovariance(const Eigen::MatrixBase<Derived>& x, int max_lag) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = x.size();
  const VectorX<Scalar> c = x.array() - x.mean();
  VectorX<Scalar> g(max_lag + 1);
  for (int j = 0; j <= max_lag; ++j) g[j] = c.head(n - j).dot(c.tail(n - j)) / static_cast<Scalar>(n);
  return g;
}

template <typename Derived>
void check_correlogram_input(const Eigen::MatrixBase<Derived>& x, int max_lag) {
  if (x.size() < 2) throw DataError("correlogram needs at least two observations");
  if (max_lag < 0 || max_lag >= x.size())
    throw std::invalid_argument("max_lag must lie in [0, n)");
  if ((x.array() == x[0]).all())
    throw DataError("zero-variance series has no defined autocorrelation");
}

}  // namespace detail

// Sample ACF with the divide-by-n convention; r_0 = 1.
template <typename Derived>
CorrelogramResult<typename Derived::Scalar> acf(const Eigen::MatrixBase<Derived>& x, int max_lag) {
  using Scalar = typename Derived::Scalar;
  detail::check_correlogram_input(x, max_lag);
  const VectorX<Scalar> g = detail::autocovariance(x, max_lag);
  CorrelogramResult<Scalar> out;
  out.values = g / g[0];
  out.values[0] = Scalar(1);
  for (int j = 0; j <= max_lag; ++j) out.lags.push_back(j);
  out.ci_bound = Scalar(1.96) / std::sqrt(static_cast<Scalar>(x.size()));
  return out;
}

// Partial autocorrelations at lags 1..max_lag by Durbin-Levinson on the
// sample ACF.
template <typename Derived>
CorrelogramResult<typename Derived::Scalar> pacf(const Eigen::MatrixBase<Derived>& x, int max_lag) {
  using Scalar = typename Derived::Scalar;
  if (max_lag < 1) throw std::invalid_argument("pacf needs max_lag >= 1");
  const VectorX<Scalar> r = acf(x, max_lag).values;

  CorrelogramResult<Scalar> out;
  out.values.resize(max_lag);
  VectorX<Scalar> phi = VectorX<Scalar>::Zero(max_lag + 1);
  VectorX<Scalar> prev = phi;
  Scalar v = Scalar(1);
  for (int k = 1; k <= max_lag; ++k) {
    Scalar num = r[k];
    for (int j = 1; j < k; ++j) num -= prev[j] * r[k - j];
    const Scalar a = num / v;
    phi[k] = a;
    for (int j = 1; j < k; ++j) phi[j] = prev[j] - a * prev[k - j];
    v *= (Scalar(1) - a * a);
    prev = phi;
    out.values[k - 1] = a;
    out.lags.push_back(k);
  }
  out.ci_bound = Scalar(1.96) / std::sqrt(static_cast<Scalar>(x.size()));
  return out;
}

// One row per observation: (cycle, position in cycle, value), both indices
// 1-based. The last cycle may be partial.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 3> seasonal_table(const BasicTimeSeries<Scalar>& series) {
  if (series.period < 2) throw std::invalid_argument("seasonal table needs period >= 2");
  const Eigen::Index n = series.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 3> table(n, 3);
  for (Eigen::Index t = 0; t < n; ++t) {
    table(t, 0) = static_cast<Scalar>(t / series.period + 1);
    table(t, 1) = static_cast<Scalar>(t % series.period + 1);
    table(t, 2) = series.values[t];
  }
  return table;
}

inline int seasonal_cycle_count(Eigen::Index length, int period) {
  return static_cast<int>((length + period - 1) / period);
}

}  // namespace admitcast
