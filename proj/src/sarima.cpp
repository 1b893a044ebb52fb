#include "admitcast/sarima.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "admitcast/distributions.hpp"
#include "admitcast/errors.hpp"
#include "arma_model.hpp"

namespace admitcast {

void SarimaSpec::validate() const {
  if (p < 0 || d < 0 || q < 0 || P < 0 || D < 0 || Q < 0)
    throw std::invalid_argument("SARIMA orders must be nonnegative");
  if (period < 1) throw std::invalid_argument("seasonal period must be >= 1");
  if (include_drift && d + D > 1)
    throw std::invalid_argument("a constant/drift term requires d + D <= 1");
}

std::string SarimaSpec::label() const {
  std::ostringstream os;
  os << "ARIMA(" << p << ',' << d << ',' << q << ')';
  if (P > 0 || D > 0 || Q > 0) os << '(' << P << ',' << D << ',' << Q << ")[" << period << ']';
  if (include_drift) os << (d + D == 0 ? " with non-zero mean" : " with drift");
  return os.str();
}

SarimaParams SarimaParams::zeros(const SarimaSpec& spec, double sigma2) {
  SarimaParams out;
  out.phi = Eigen::VectorXd::Zero(spec.p);
  out.theta = Eigen::VectorXd::Zero(spec.q);
  out.seasonal_phi = Eigen::VectorXd::Zero(spec.P);
  out.seasonal_theta = Eigen::VectorXd::Zero(spec.Q);
  out.sigma2 = sigma2;
  return out;
}

Eigen::VectorXd SarimaParams::coefficients(const SarimaSpec& spec) const {
  Eigen::VectorXd c(spec.coefficient_count());
  Eigen::Index at = 0;
  for (const Eigen::VectorXd* block : {&phi, &theta, &seasonal_phi, &seasonal_theta}) {
    c.segment(at, block->size()) = *block;
    at += block->size();
  }
  if (spec.has_constant()) c[at] = mu_or_drift;
  return c;
}

SarimaParams SarimaParams::from_coefficients(const SarimaSpec& spec, const Eigen::VectorXd& c, double sigma2) {
  if (c.size() != spec.coefficient_count()) throw std::invalid_argument("coefficient vector has wrong length");
  SarimaParams out;
  Eigen::Index at = 0;
  out.phi = c.segment(at, spec.p);
  at += spec.p;
  out.theta = c.segment(at, spec.q);
  at += spec.q;
  out.seasonal_phi = c.segment(at, spec.P);
  at += spec.P;
  out.seasonal_theta = c.segment(at, spec.Q);
  at += spec.Q;
  out.mu_or_drift = spec.has_constant() ? c[at] : 0.0;
  out.sigma2 = sigma2;
  return out;
}

std::vector<std::string> coefficient_labels(const SarimaSpec& spec) {
  std::vector<std::string> out;
  for (int i = 1; i <= spec.p; ++i) out.push_back("ar" + std::to_string(i));
  for (int i = 1; i <= spec.q; ++i) out.push_back("ma" + std::to_string(i));
  for (int i = 1; i <= spec.P; ++i) out.push_back("sar" + std::to_string(i));
  for (int i = 1; i <= spec.Q; ++i) out.push_back("sma" + std::to_string(i));
  if (spec.has_constant()) out.emplace_back(spec.d + spec.D == 0 ? "intercept" : "drift");
  return out;
}

bool is_stationary_polynomial(const Eigen::VectorXd& coefs) {
  const auto k = coefs.size();
  Eigen::VectorXd cur = coefs;
  Eigen::VectorXd work = coefs;
  for (Eigen::Index j = k - 1; j >= 0; --j) {
    const double a = cur[j];
    if (!(std::abs(a) < 1.0)) return false;
    for (Eigen::Index i = 0; i < j; ++i) work[i] = (cur[i] + a * cur[j - i - 1]) / (1.0 - a * a);
    cur.head(j) = work.head(j);
  }
  return true;
}

void check_admissible(const SarimaSpec& spec, const SarimaParams& params) {
  spec.validate();
  if (params.phi.size() != spec.p || params.theta.size() != spec.q || params.seasonal_phi.size() != spec.P ||
      params.seasonal_theta.size() != spec.Q)
    throw std::invalid_argument("parameter vector lengths do not match the model orders");
  if (!is_stationary_polynomial(params.phi) || !is_stationary_polynomial(params.seasonal_phi))
    throw std::invalid_argument("AR polynomial is not stationary");
  if (!is_stationary_polynomial(-params.theta) || !is_stationary_polynomial(-params.seasonal_theta))
    throw std::invalid_argument("MA polynomial is not invertible");
  if (!(params.sigma2 > 0.0) || !std::isfinite(params.sigma2))
    throw std::invalid_argument("innovation variance must be positive");
  if (!std::isfinite(params.mu_or_drift)) throw std::invalid_argument("constant term must be finite");
}

InformationCriteria information_criteria(double loglik, int k, Eigen::Index n) {
  if (k < 1) throw std::invalid_argument("information criteria need k >= 1");
  if (n < 1) throw std::invalid_argument("information criteria need n >= 1");
  return {-2.0 * loglik + 2.0 * k, -2.0 * loglik + k * std::log(static_cast<double>(n))};
}

Eigen::VectorXd psi_weights(const Eigen::VectorXd& ar, const Eigen::VectorXd& ma, int count) {
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(std::max(count, 0));
  if (count <= 0) return psi;
  psi[0] = 1.0;
  for (int j = 1; j < count; ++j) {
    double v = j <= ma.size() ? ma[j - 1] : 0.0;
    const int upto = std::min<int>(j, static_cast<int>(ar.size()));
    for (int k = 1; k <= upto; ++k) v += ar[k - 1] * psi[j - k];
    psi[j] = v;
  }
  return psi;
}

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// Differenced series with the constant removed.
Eigen::VectorXd centred_differences(const SarimaSpec& spec, const Eigen::VectorXd& w, double constant) {
  if (!spec.has_constant()) return w;
  return w.array() - constant * spec.constant_scale();
}

// Maps unconstrained optimizer coordinates to model parameters. AR blocks go
// through the partial-autocorrelation transform; MA blocks through the same
// transform with flipped sign so that 1 + theta_1 z + ... is invertible.
struct Parameterization {
  SarimaSpec spec;
  double constant_origin = 0.0;
  double constant_scale = 1.0;

  int size() const { return spec.coefficient_count(); }

  SarimaParams params(const Eigen::VectorXd& u) const {
    SarimaParams out;
    Eigen::Index at = 0;
    out.phi = detail::pacf_to_ar(u.segment(at, spec.p));
    at += spec.p;
    out.theta = -detail::pacf_to_ar(u.segment(at, spec.q));
    at += spec.q;
    out.seasonal_phi = detail::pacf_to_ar(u.segment(at, spec.P));
    at += spec.P;
    out.seasonal_theta = -detail::pacf_to_ar(u.segment(at, spec.Q));
    at += spec.Q;
    out.mu_or_drift = spec.has_constant() ? constant_origin + constant_scale * u[at] : 0.0;
    return out;
  }

  Eigen::VectorXd unconstrained(const SarimaParams& prm) const {
    Eigen::VectorXd u(size());
    Eigen::Index at = 0;
    u.segment(at, spec.p) = detail::ar_to_pacf(prm.phi);
    at += spec.p;
    u.segment(at, spec.q) = detail::ar_to_pacf(-prm.theta);
    at += spec.q;
    u.segment(at, spec.P) = detail::ar_to_pacf(prm.seasonal_phi);
    at += spec.P;
    u.segment(at, spec.Q) = detail::ar_to_pacf(-prm.seasonal_theta);
    at += spec.Q;
    if (spec.has_constant()) u[at] = (prm.mu_or_drift - constant_origin) / constant_scale;
    return u;
  }
};

// Negative log-likelihood with sigma^2 profiled out.
double profile_negloglik(const SarimaSpec& spec, const SarimaParams& prm, const Eigen::VectorXd& w,
                         double* sigma2 = nullptr, Eigen::VectorXd* residuals = nullptr) {
  const detail::ArmaPolynomials arma = detail::expand(spec, prm);
  const detail::KalmanOutput kf = detail::kalman_filter(arma, centred_differences(spec, w, prm.mu_or_drift));
  if (!kf.finite) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(w.size());
  const double s2 = kf.ssq / n;
  if (!(s2 > 0.0)) return std::numeric_limits<double>::infinity();
  if (sigma2) *sigma2 = s2;
  if (residuals) *residuals = kf.innovations;
  return 0.5 * (n * (kLog2Pi + std::log(s2)) + kf.sumlog + n);
}

// Conditional sum of squares objective (profiled), used only for start values.
double css_objective(const SarimaSpec& spec, const SarimaParams& prm, const Eigen::VectorXd& w) {
  const detail::ArmaPolynomials arma = detail::expand(spec, prm);
  const Eigen::VectorXd x = centred_differences(spec, w, prm.mu_or_drift);
  const auto p = arma.ar.size(), q = arma.ma.size(), n = x.size();
  if (n - p < 1) return std::numeric_limits<double>::infinity();
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  double ssq = 0.0;
  for (Eigen::Index t = p; t < n; ++t) {
    double v = x[t];
    for (Eigen::Index k = 1; k <= p; ++k) v -= arma.ar[k - 1] * x[t - k];
    for (Eigen::Index k = 1; k <= q && k <= t; ++k) v -= arma.ma[k - 1] * e[t - k];
    e[t] = v;
    ssq += v * v;
  }
  const double m = static_cast<double>(n - p);
  if (!(ssq > 0.0) || !std::isfinite(ssq)) return std::numeric_limits<double>::infinity();
  return 0.5 * m * std::log(ssq / m);
}

Parameterization make_parameterization(const SarimaSpec& spec, const Eigen::VectorXd& w) {
  Parameterization par{spec, 0.0, 1.0};
  if (spec.has_constant()) {
    const double scale = spec.constant_scale();
    const double mean = w.mean();
    const double sd = std::sqrt((w.array() - mean).square().sum() / std::max<double>(1.0, w.size() - 1.0));
    par.constant_origin = mean / scale;
    const double se = sd / std::sqrt(static_cast<double>(w.size())) / scale;
    par.constant_scale = se > 0.0 ? se : 1.0;
  }
  return par;
}

Eigen::MatrixXd numeric_hessian(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& u) {
  const auto k = u.size();
  Eigen::VectorXd h(k);
  for (Eigen::Index i = 0; i < k; ++i) h[i] = 1e-4 * (1.0 + std::abs(u[i]));
  const double f0 = f(u);
  Eigen::MatrixXd hess(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    Eigen::VectorXd up = u, dn = u;
    up[i] += h[i];
    dn[i] -= h[i];
    hess(i, i) = (f(up) - 2.0 * f0 + f(dn)) / (h[i] * h[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      Eigen::VectorXd pp = u, pm = u, mp = u, mm = u;
      pp[i] += h[i]; pp[j] += h[j];
      pm[i] += h[i]; pm[j] -= h[j];
      mp[i] -= h[i]; mp[j] += h[j];
      mm[i] -= h[i]; mm[j] -= h[j];
      hess(i, j) = hess(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h[i] * h[j]);
    }
  }
  return hess;
}

Eigen::VectorXd standard_errors(const Parameterization& par, const Eigen::VectorXd& w, const Eigen::VectorXd& u) {
  const auto k = u.size();
  Eigen::VectorXd se = Eigen::VectorXd::Constant(k, std::numeric_limits<double>::quiet_NaN());
  if (k == 0) return se;
  auto objective = [&](const Eigen::VectorXd& x) { return profile_negloglik(par.spec, par.params(x), w); };
  const Eigen::MatrixXd hess = numeric_hessian(objective, u);
  if (!hess.allFinite()) return se;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || (ldlt.vectorD().array() <= 0.0).any()) return se;
  const Eigen::MatrixXd cov_u = ldlt.solve(Eigen::MatrixXd::Identity(k, k));

  // Delta method: d(reported coefficients) / d(u) by central differences.
  Eigen::MatrixXd jac(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double h = 1e-4 * (1.0 + std::abs(u[j]));
    Eigen::VectorXd up = u, dn = u;
    up[j] += h;
    dn[j] -= h;
    jac.col(j) = (par.params(up).coefficients(par.spec) - par.params(dn).coefficients(par.spec)) / (2.0 * h);
  }
  const Eigen::MatrixXd cov = jac * cov_u * jac.transpose();
  for (Eigen::Index i = 0; i < k; ++i)
    if (cov(i, i) > 0.0) se[i] = std::sqrt(cov(i, i));
  return se;
}

Eigen::VectorXd differenced_history(const SarimaSpec& spec, const TimeSeries& series) {
  return difference(series.values, spec.differencing());
}

}  // namespace

double loglik(const SarimaSpec& spec, const SarimaParams& params, const TimeSeries& series) {
  check_admissible(spec, params);
  const Eigen::VectorXd w = differenced_history(spec, series);
  const detail::KalmanOutput kf =
      detail::kalman_filter(detail::expand(spec, params), centred_differences(spec, w, params.mu_or_drift));
  const double n = static_cast<double>(w.size());
  const double value = -0.5 * (n * (kLog2Pi + std::log(params.sigma2)) + kf.sumlog + kf.ssq / params.sigma2);
  if (!kf.finite || !std::isfinite(value)) throw std::domain_error("log-likelihood is not finite");
  return value;
}

SarimaFit fit(const SarimaSpec& spec, const TimeSeries& series, const FitOptions& options) {
  spec.validate();
  const Eigen::VectorXd w = differenced_history(spec, series);
  const int k = spec.coefficient_count() + 1;
  if (w.size() < k + 10)
    throw DataError("not enough observations after differencing to fit " + spec.label() + ": have " +
                    std::to_string(w.size()) + ", need " + std::to_string(k + 10));
  if ((w.array() == w[0]).all()) throw DataError("differenced series has zero variance");

  const Parameterization par = make_parameterization(spec, w);
  auto ml_objective = [&](const Eigen::VectorXd& u) { return profile_negloglik(spec, par.params(u), w); };

  NelderMeadOptions nm = options.optimizer;
  if (nm.step.size() != par.size()) nm.step = Eigen::VectorXd::Constant(par.size(), 0.1);
  if (spec.has_constant()) nm.step[par.size() - 1] = 1.0;

  Eigen::VectorXd start = Eigen::VectorXd::Zero(par.size());
  if (options.css_start && spec.p + spec.q + spec.P + spec.Q > 0) {
    NelderMeadOptions css_nm = nm;
    css_nm.max_restarts = 1;
    const OptimResult css = nelder_mead(
        [&](const Eigen::VectorXd& u) { return css_objective(spec, par.params(u), w); }, start, css_nm);
    if (ml_objective(css.x) < ml_objective(start)) start = css.x;
  }
  const double start_value = ml_objective(start);
  if (!std::isfinite(start_value))
    throw ConvergenceError("log-likelihood is not finite at the starting values for " + spec.label());

  const OptimResult best = nelder_mead(ml_objective, start, nm);

  SarimaFit out;
  out.spec = spec;
  out.labels = coefficient_labels(spec);
  out.params = par.params(best.x);
  out.loglik = -profile_negloglik(spec, out.params, w, &out.params.sigma2, &out.residuals);
  out.start_loglik = -start_value;
  out.n_effective = w.size();
  out.converged = best.converged;
  out.evaluations = best.evaluations;
  out.std_errors = standard_errors(par, w, best.x);
  const InformationCriteria ic = information_criteria(out.loglik, k, out.n_effective);
  out.aic = ic.aic;
  out.bic = ic.bic;
  out.history = series;
  return out;
}

Eigen::VectorXd loglik_gradient(const SarimaFit& fit) {
  const Eigen::VectorXd w = differenced_history(fit.spec, fit.history);
  const Parameterization par = make_parameterization(fit.spec, w);
  const Eigen::VectorXd u = par.unconstrained(fit.params);
  Eigen::VectorXd g(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double h = 1e-5 * (1.0 + std::abs(u[i]));
    Eigen::VectorXd up = u, dn = u;
    up[i] += h;
    dn[i] -= h;
    g[i] = -(profile_negloglik(fit.spec, par.params(up), w) - profile_negloglik(fit.spec, par.params(dn), w)) /
           (2.0 * h);
  }
  return g;
}

ForecastResult forecast(const SarimaFit& fit, int h, const std::vector<double>& levels) {
  if (h < 1) throw std::invalid_argument("forecast horizon must be >= 1");
  if (levels.empty()) throw std::invalid_argument("at least one interval level is required");
  for (double l : levels)
    if (!(l > 0.0 && l < 1.0)) throw std::invalid_argument("interval levels must lie in (0, 1)");

  const SarimaSpec& spec = fit.spec;
  const DifferenceSpec ds = spec.differencing();
  const Eigen::VectorXd w = differenced_history(spec, fit.history);
  const double mean_w = spec.has_constant() ? fit.params.mu_or_drift * spec.constant_scale() : 0.0;
  const detail::ArmaPolynomials arma = detail::expand(spec, fit.params);
  const detail::KalmanOutput kf = detail::kalman_filter(arma, centred_differences(spec, w, fit.params.mu_or_drift));

  const std::vector<double> delta = differencing_polynomial(ds);
  const Eigen::Index n = fit.history.size();
  Eigen::VectorXd y(n + h);
  y.head(n) = fit.history.values;
  Eigen::VectorXd state = kf.next_state;
  for (int i = 0; i < h; ++i) {
    double v = state[0] + mean_w;
    for (std::size_t j = 1; j < delta.size(); ++j) v -= delta[j] * y[n + i - static_cast<Eigen::Index>(j)];
    y[n + i] = v;
    state = detail::transition(arma, state);
  }

  // psi weights of the integrated model a(B) * (1 - B)^d (1 - B^m)^D.
  Eigen::VectorXd full = Eigen::VectorXd::Zero(arma.ar.size() + static_cast<Eigen::Index>(delta.size()));
  for (Eigen::Index i = 0; i <= arma.ar.size(); ++i) {
    const double ai = i == 0 ? 1.0 : -arma.ar[i - 1];
    for (std::size_t j = 0; j < delta.size(); ++j) full[i + static_cast<Eigen::Index>(j)] += ai * delta[j];
  }
  const Eigen::VectorXd integrated_ar = -full.tail(full.size() - 1);
  const Eigen::VectorXd psi = psi_weights(integrated_ar, arma.ma, h);

  ForecastResult out;
  out.point = y.tail(h);
  out.levels = levels;
  out.sigma_h.resize(h);
  double acc = 0.0;
  for (int i = 0; i < h; ++i) {
    acc += psi[i] * psi[i];
    out.sigma_h[i] = std::sqrt(fit.params.sigma2 * acc);
  }
  const auto nl = static_cast<Eigen::Index>(levels.size());
  out.lower.resize(h, nl);
  out.upper.resize(h, nl);
  for (Eigen::Index j = 0; j < nl; ++j) {
    const double z = dist::normal_quantile(0.5 * (1.0 + levels[static_cast<std::size_t>(j)]));
    out.lower.col(j) = out.point - z * out.sigma_h;
    out.upper.col(j) = out.point + z * out.sigma_h;
  }
  return out;
}

TimeSeries simulate(const SarimaSpec& spec, const SarimaParams& params, Eigen::Index n, std::uint64_t seed) {
  check_admissible(spec, params);
  const DifferenceSpec ds = spec.differencing();
  const int lost = ds.lost();
  if (n < 1) throw std::invalid_argument("simulation length must be >= 1");
  if (n <= lost) throw std::invalid_argument("simulation length must exceed d + D * period");

  const detail::ArmaPolynomials arma = detail::expand(spec, params);
  const auto p = arma.ar.size(), q = arma.ma.size();
  const Eigen::Index burn =
      std::max<Eigen::Index>(200, 10 * (spec.p + spec.q + spec.period * (spec.P + spec.Q)));
  const Eigen::Index nw = n - lost;
  const Eigen::Index total = burn + nw;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(params.sigma2));
  Eigen::VectorXd e(total), x(total);
  for (Eigen::Index t = 0; t < total; ++t) e[t] = normal(rng);
  for (Eigen::Index t = 0; t < total; ++t) {
    double v = e[t];
    for (Eigen::Index k = 1; k <= p && k <= t; ++k) v += arma.ar[k - 1] * x[t - k];
    for (Eigen::Index k = 1; k <= q && k <= t; ++k) v += arma.ma[k - 1] * e[t - k];
    x[t] = v;
  }
  const double mean_w = spec.has_constant() ? params.mu_or_drift * spec.constant_scale() : 0.0;
  const Eigen::VectorXd w = x.tail(nw).array() + mean_w;
  return TimeSeries(undifference(w, ds, Eigen::VectorXd::Zero(lost)), spec.period);
}

}  // namespace admitcast
