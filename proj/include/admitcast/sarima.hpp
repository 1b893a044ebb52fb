#pragma once

// Seasonal ARIMA (p,d,q)(P,D,Q)_m estimated by exact Gaussian maximum
// likelihood on the differenced series.
//
// Sign convention: the MA polynomials carry plus signs,
//   phi(B) Phi(B^m) (w_t - c) = theta(B) Theta(B^m) e_t,
//   phi(B) = 1 - phi_1 B - ... ,  theta(B) = 1 + theta_1 B + ... ,
// with w_t = (1 - B)^d (1 - B^m)^D y_t. The constant c is the mean when the
// model is undifferenced. With one order of differencing it is the drift
// slope of y_t times the differenced time index (1 for d = 1, m for D = 1),
// so the reported "drift" is the per-observation slope on the original scale.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "admitcast/optimize.hpp"
#include "admitcast/series.hpp"

namespace admitcast {

struct SarimaSpec {
  int p = 0, d = 0, q = 0;
  int P = 0, D = 0, Q = 0;
  int period = 1;
  // Constant term: the mean when d + D = 0, the drift when d + D = 1.
  // Not allowed for d + D >= 2.
  bool include_drift = false;

  void validate() const;
  DifferenceSpec differencing() const { return {d, D, period}; }
  bool has_constant() const { return include_drift; }
  // Coefficients estimated besides sigma^2.
  int coefficient_count() const { return p + q + P + Q + (has_constant() ? 1 : 0); }
  // Scale of the constant on the differenced scale (1, or m for one
  // seasonal difference).
  double constant_scale() const { return D == 1 && d == 0 ? static_cast<double>(period) : 1.0; }
  std::string label() const;  // e.g. "ARIMA(2,0,2)(1,1,1)[52] with drift"

  friend bool operator==(const SarimaSpec&, const SarimaSpec&) = default;
  friend auto operator<=>(const SarimaSpec&, const SarimaSpec&) = default;
};

struct SarimaParams {
  double mu_or_drift = 0.0;
  Eigen::VectorXd phi;             // length p
  Eigen::VectorXd theta;           // length q
  Eigen::VectorXd seasonal_phi;    // length P
  Eigen::VectorXd seasonal_theta;  // length Q
  double sigma2 = 1.0;

  static SarimaParams zeros(const SarimaSpec& spec, double sigma2 = 1.0);
  // Reported coefficient order: ar, ma, sar, sma, then the constant.
  Eigen::VectorXd coefficients(const SarimaSpec& spec) const;
  static SarimaParams from_coefficients(const SarimaSpec& spec, const Eigen::VectorXd& coef, double sigma2);
};

std::vector<std::string> coefficient_labels(const SarimaSpec& spec);

// Throws std::invalid_argument unless every AR factor is stationary, every
// MA factor invertible and sigma2 > 0.
void check_admissible(const SarimaSpec& spec, const SarimaParams& params);

// True when 1 - c_1 z - ... - c_k z^k has all roots outside the unit circle.
bool is_stationary_polynomial(const Eigen::VectorXd& coefs);

struct InformationCriteria {
  double aic = 0.0;
  double bic = 0.0;
};

InformationCriteria information_criteria(double loglik, int k, Eigen::Index n);

// Exact Gaussian log-likelihood of the differenced series.
double loglik(const SarimaSpec& spec, const SarimaParams& params, const TimeSeries& series);

struct SarimaFit {
  SarimaSpec spec;
  SarimaParams params;
  std::vector<std::string> labels;
  Eigen::VectorXd std_errors;  // aligned with labels; NaN when the Hessian is not invertible
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  // One-step prediction errors on the differenced scale, each divided by the
  // square root of its relative prediction variance so all share sigma^2.
  Eigen::VectorXd residuals;
  Eigen::Index n_effective = 0;
  bool converged = false;
  int evaluations = 0;
  double start_loglik = 0.0;  // log-likelihood at the optimizer's starting point
  TimeSeries history;         // training data, needed to forecast on the original scale

  int k() const { return spec.coefficient_count() + 1; }
};

struct FitOptions {
  NelderMeadOptions optimizer{};
  // Seed the likelihood optimisation with a conditional-sum-of-squares pass.
  bool css_start = true;
};

SarimaFit fit(const SarimaSpec& spec, const TimeSeries& series, const FitOptions& options = {});

// Gradient of the concentrated log-likelihood in the optimizer's
// (unconstrained) coordinates, by central differences.
Eigen::VectorXd loglik_gradient(const SarimaFit& fit);

struct ForecastResult {
  Eigen::VectorXd point;
  std::vector<double> levels;
  Eigen::MatrixXd lower;  // h x levels
  Eigen::MatrixXd upper;  // h x levels
  Eigen::VectorXd sigma_h;
};

ForecastResult forecast(const SarimaFit& fit, int h, const std::vector<double>& levels);

// psi weights psi_0..psi_{count-1} of theta(B) / a(B) where a(B) = 1 - sum ar_k B^k.
Eigen::VectorXd psi_weights(const Eigen::VectorXd& ar, const Eigen::VectorXd& ma, int count);

// Seeded simulation: ARMA recursion with a discarded burn-in, then inverse
// differencing from a zero head.
TimeSeries simulate(const SarimaSpec& spec, const SarimaParams& params, Eigen::Index n, std::uint64_t seed);

}  // namespace admitcast
