#pragma once

// Internal ARMA machinery shared by the SARIMA estimator and forecaster.

#include <Eigen/Dense>

#include "admitcast/sarima.hpp"

namespace admitcast::detail {

// Multiplied-out ARMA polynomials, a(B) = 1 - sum ar_k B^k and
// b(B) = 1 + sum ma_k B^k.
struct ArmaPolynomials {
  Eigen::VectorXd ar;
  Eigen::VectorXd ma;
};

ArmaPolynomials expand(const SarimaSpec& spec, const SarimaParams& params);

// Autocovariances gamma(0..max_lag) of the ARMA process with unit innovation
// variance.
Eigen::VectorXd arma_autocovariance(const ArmaPolynomials& arma, int max_lag);

struct KalmanOutput {
  double ssq = 0.0;     // sum v_t^2 / F_t
  double sumlog = 0.0;  // sum log F_t
  Eigen::VectorXd innovations;  // v_t / sqrt(F_t)
  Eigen::VectorXd next_state;  // predicted state for the observation after the sample
  bool finite = true;
};

// Prediction-error decomposition for a zero-mean ARMA series x_t using the
// predictive state (E_t x_t, E_t x_{t+1}, ..., E_t x_{t+r-1}) with the exact
// stationary initial covariance. Innovation variance is normalised to one.
KalmanOutput kalman_filter(const ArmaPolynomials& arma, const Eigen::VectorXd& x);

// Applies the transition matrix to a state vector.
Eigen::VectorXd transition(const ArmaPolynomials& arma, const Eigen::VectorXd& state);

// Monahan's map from R^k onto stationary AR coefficients via partial
// autocorrelations, and its inverse.
Eigen::VectorXd pacf_to_ar(const Eigen::VectorXd& raw);
Eigen::VectorXd ar_to_pacf(const Eigen::VectorXd& coefs);

}  // namespace admitcast::detail
