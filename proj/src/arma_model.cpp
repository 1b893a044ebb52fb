#include "arma_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace admitcast::detail {

namespace {
// tanh saturates to exactly 1 in double precision past ~19; keep raw
// coordinates well inside that.
constexpr double kRawLimit = 9.0;
}  // namespace

ArmaPolynomials expand(const SarimaSpec& spec, const SarimaParams& params) {
  const int m = spec.period;
  ArmaPolynomials out;
  out.ar = Eigen::VectorXd::Zero(spec.p + m * spec.P);
  out.ma = Eigen::VectorXd::Zero(spec.q + m * spec.Q);
  out.ar.head(spec.p) = params.phi;
  out.ma.head(spec.q) = params.theta;
  for (int j = 1; j <= spec.P; ++j) {
    const double big = params.seasonal_phi[j - 1];
    out.ar[m * j - 1] += big;
    for (int i = 1; i <= spec.p; ++i) out.ar[m * j + i - 1] -= params.phi[i - 1] * big;
  }
  for (int j = 1; j <= spec.Q; ++j) {
    const double big = params.seasonal_theta[j - 1];
    out.ma[m * j - 1] += big;
    for (int i = 1; i <= spec.q; ++i) out.ma[m * j + i - 1] += params.theta[i - 1] * big;
  }
  return out;
}

Eigen::VectorXd arma_autocovariance(const ArmaPolynomials& arma, int max_lag) {
  const int p = static_cast<int>(arma.ar.size());
  const int q = static_cast<int>(arma.ma.size());
  const Eigen::VectorXd psi = psi_weights(arma.ar, arma.ma, q + 1);
  auto theta = [&](int j) { return j == 0 ? 1.0 : arma.ma[j - 1]; };
  // sum_{j=k}^{q} theta_j psi_{j-k}
  auto ma_term = [&](int k) {
    double s = 0.0;
    for (int j = k; j <= q; ++j) s += theta(j) * psi[j - k];
    return s;
  };

  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(std::max(max_lag, p) + 1);
  if (p == 0) {
    for (int k = 0; k <= max_lag && k <= q; ++k) gamma[k] = ma_term(k);
    return gamma.head(max_lag + 1);
  }
  // gamma(k) - sum_j phi_j gamma(|k - j|) = ma_term(k) for k = 0..p.
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(p + 1, p + 1);
  Eigen::VectorXd rhs(p + 1);
  for (int k = 0; k <= p; ++k) {
    for (int j = 1; j <= p; ++j) a(k, std::abs(k - j)) -= arma.ar[j - 1];
    rhs[k] = ma_term(k);
  }
  gamma.head(p + 1) = a.partialPivLu().solve(rhs);
  for (int k = p + 1; k < gamma.size(); ++k) {
    double g = ma_term(k);
    for (int j = 1; j <= p; ++j) g += arma.ar[j - 1] * gamma[k - j];
    gamma[k] = g;
  }
  return gamma.head(max_lag + 1);
}

Eigen::VectorXd transition(const ArmaPolynomials& arma, const Eigen::VectorXd& state) {
  const auto r = state.size();
  Eigen::VectorXd out(r);
  out.head(r - 1) = state.tail(r - 1);
  double last = 0.0;
  for (Eigen::Index k = 1; k <= arma.ar.size(); ++k) last += arma.ar[k - 1] * state[r - k];
  out[r - 1] = last;
  return out;
}

KalmanOutput kalman_filter(const ArmaPolynomials& arma, const Eigen::VectorXd& x) {
  const int p = static_cast<int>(arma.ar.size());
  const int q = static_cast<int>(arma.ma.size());
  const int r = std::max(p, q + 1);
  const Eigen::VectorXd psi = psi_weights(arma.ar, arma.ma, r);
  const Eigen::VectorXd gamma = arma_autocovariance(arma, r);

  // Cov(E_t x_{t+i}, E_t x_{t+j}) = gamma(j - i) - sum_{k<i} psi_k psi_{k+j-i}, i <= j.
  Eigen::MatrixXd cov(r, r);
  for (int i = 0; i < r; ++i) {
    for (int j = i; j < r; ++j) {
      double v = gamma[j - i];
      for (int k = 0; k < i; ++k) v -= psi[k] * psi[k + j - i];
      cov(i, j) = cov(j, i) = v;
    }
  }

  KalmanOutput out;
  out.innovations.resize(x.size());
  Eigen::VectorXd state = Eigen::VectorXd::Zero(r);
  Eigen::MatrixXd tmp(r, r);
  for (Eigen::Index t = 0; t < x.size(); ++t) {
    const double f = cov(0, 0);
    const double v = x[t] - state[0];
    if (!(f > 0.0) || !std::isfinite(f)) {
      out.finite = false;
      return out;
    }
    out.innovations[t] = v / std::sqrt(f);
    out.ssq += v * v / f;
    out.sumlog += std::log(f);

    const Eigen::VectorXd gain = cov.col(0) / f;
    state += gain * v;
    cov.noalias() -= gain * cov.row(0);

    // Predict: state <- T state, cov <- T cov T' + psi psi'.
    state = transition(arma, state);
    tmp.topRows(r - 1) = cov.bottomRows(r - 1);
    tmp.row(r - 1).setZero();
    for (int k = 1; k <= p; ++k) tmp.row(r - 1) += arma.ar[k - 1] * cov.row(r - k);
    cov.leftCols(r - 1) = tmp.rightCols(r - 1);
    cov.col(r - 1).setZero();
    for (int k = 1; k <= p; ++k) cov.col(r - 1) += arma.ar[k - 1] * tmp.col(r - k);
    cov.noalias() += psi * psi.transpose();
  }
  out.next_state = state;
  out.finite = std::isfinite(out.ssq) && std::isfinite(out.sumlog);
  return out;
}

Eigen::VectorXd pacf_to_ar(const Eigen::VectorXd& raw) {
  const auto k = raw.size();
  Eigen::VectorXd coef(k);
  for (Eigen::Index i = 0; i < k; ++i) coef[i] = std::tanh(std::clamp(raw[i], -kRawLimit, kRawLimit));
  Eigen::VectorXd work = coef;
  for (Eigen::Index j = 1; j < k; ++j) {
    const double a = coef[j];
    for (Eigen::Index i = 0; i < j; ++i) work[i] -= a * coef[j - i - 1];
    coef.head(j) = work.head(j);
  }
  return coef;
}

Eigen::VectorXd ar_to_pacf(const Eigen::VectorXd& coefs) {
  const auto k = coefs.size();
  Eigen::VectorXd cur = coefs;
  Eigen::VectorXd work = coefs;
  for (Eigen::Index j = k - 1; j > 0; --j) {
    const double a = cur[j];
    for (Eigen::Index i = 0; i < j; ++i) work[i] = (cur[i] + a * cur[j - i - 1]) / (1.0 - a * a);
    cur.head(j) = work.head(j);
  }
  for (Eigen::Index i = 0; i < k; ++i) cur[i] = std::atanh(std::clamp(cur[i], -0.9999999, 0.9999999));
  return cur;
}

}  // namespace admitcast::detail
