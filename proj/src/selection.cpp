#include "admitcast/selection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include "admitcast/baselines.hpp"
#include "admitcast/errors.hpp"
#include "admitcast/stat_tests.hpp"

namespace admitcast {

void SearchBounds::validate() const {
  if (max_p < 0 || max_q < 0 || max_d < 0 || max_P < 0 || max_Q < 0 || max_D < 0)
    throw std::invalid_argument("search bounds must be nonnegative");
  if (period < 1) throw std::invalid_argument("seasonal period must be >= 1");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_constant(const Eigen::VectorXd& x) { return (x.array() == x[0]).all(); }

bool kpss_rejects(const Eigen::VectorXd& x) {
  try {
    return kpss_test(x, {Deterministic::constant}).rejected_at_05;
  } catch (const DataError&) {
    return false;
  }
}

bool seasonal_allowed(const SearchBounds& b) { return b.period >= 2; }

struct Evaluated {
  CandidateScore score;
  std::optional<SarimaFit> fit;
};

Evaluated evaluate_one(const SarimaSpec& spec, const TimeSeries& train, const FitOptions& options) {
  Evaluated out;
  out.score.spec = spec;
  out.score.aic = out.score.bic = kInf;
  try {
    SarimaFit f = fit(spec, train, options);
    out.score.aic = f.aic;
    out.score.bic = f.bic;
    out.score.converged = f.converged && std::isfinite(f.aic) && std::isfinite(f.bic);
    if (!f.converged) out.score.note = "optimizer did not converge";
    out.fit = std::move(f);
  } catch (const std::exception& e) {
    out.score.note = e.what();
  }
  return out;
}

// Fits every spec, possibly in parallel. Results land at the spec's index,
// so the output does not depend on scheduling.
std::vector<Evaluated> evaluate_all(const std::vector<SarimaSpec>& specs, const TimeSeries& train,
                                    const SelectionOptions& options) {
  std::vector<Evaluated> results(specs.size());
  unsigned workers = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, specs.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) results[i] = evaluate_one(specs[i], train, options.fit);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < specs.size(); i = next++) results[i] = evaluate_one(specs[i], train, options.fit);
    });
  }
  pool.clear();  // joins
  return results;
}

struct Ranking {
  Criterion criterion;
  bool operator()(const CandidateScore& a, const CandidateScore& b) const {
    if (a.converged != b.converged) return a.converged;
    const double sa = a.score(criterion), sb = b.score(criterion);
    if (sa != sb) return sa < sb;
    const int ka = a.spec.coefficient_count(), kb = b.spec.coefficient_count();
    if (ka != kb) return ka < kb;
    return a.spec < b.spec;
  }
};

std::vector<bool> drift_options(const SearchBounds& b, int d, int D) {
  if (b.try_drift && d + D <= 1) return {false, true};
  return {false};
}

SarimaSpec make(int p, int d, int q, int P, int D, int Q, int period, bool drift) {
  SarimaSpec s;
  s.p = p, s.d = d, s.q = q, s.P = P, s.D = D, s.Q = Q, s.period = period, s.include_drift = drift;
  return s;
}

bool within(const SarimaSpec& s, const SearchBounds& b) {
  return s.p >= 0 && s.q >= 0 && s.P >= 0 && s.Q >= 0 && s.p <= b.max_p && s.q <= b.max_q && s.P <= b.max_P &&
         s.Q <= b.max_Q;
}

class Search {
 public:
  Search(const TimeSeries& train, const SelectionOptions& options, Criterion criterion)
      : train_(train), options_(options), ranking_{criterion} {}

  // Fits the specs not seen before and returns all requested scores.
  std::vector<CandidateScore> run(const std::vector<SarimaSpec>& specs) {
    std::vector<SarimaSpec> fresh;
    for (const auto& s : specs)
      if (!seen_.contains(s) && std::find(fresh.begin(), fresh.end(), s) == fresh.end()) fresh.push_back(s);
    std::vector<Evaluated> done = evaluate_all(fresh, train_, options_);
    for (std::size_t i = 0; i < fresh.size(); ++i) seen_.emplace(fresh[i], std::move(done[i]));
    std::vector<CandidateScore> out;
    for (const auto& s : specs) out.push_back(seen_.at(s).score);
    return out;
  }

  std::optional<CandidateScore> best_of(const std::vector<CandidateScore>& scores) const {
    std::optional<CandidateScore> best;
    for (const auto& c : scores)
      if (c.converged && (!best || ranking_(c, *best))) best = c;
    return best;
  }

  bool better(const CandidateScore& a, const CandidateScore& b) const { return ranking_(a, b); }

  SelectionResult finish(int d, int D) {
    SelectionResult out;
    out.d = d;
    out.D = D;
    out.criterion = ranking_.criterion;
    for (const auto& [spec, e] : seen_) out.ranked.push_back(e.score);
    std::sort(out.ranked.begin(), out.ranked.end(), ranking_);
    if (out.ranked.empty() || !out.ranked.front().converged) {
      std::string why = out.ranked.empty() ? std::string("no candidates") : out.ranked.front().note;
      throw ConvergenceError("no SARIMA candidate converged (first failure: " + why + ")");
    }
    out.best = *seen_.at(out.ranked.front().spec).fit;
    return out;
  }

 private:
  const TimeSeries& train_;
  const SelectionOptions& options_;
  Ranking ranking_;
  std::map<SarimaSpec, Evaluated> seen_;
};

}  // namespace

std::pair<int, int> choose_differencing(const TimeSeries& train, const SearchBounds& bounds) {
  bounds.validate();
  Eigen::VectorXd x = train.values;
  int D = 0;
  if (seasonal_allowed(bounds)) {
    while (D < bounds.max_D && kpss_rejects(x)) {
      if (x.size() <= bounds.period + 10) break;
      Eigen::VectorXd next = difference(x, {0, 1, bounds.period});
      if (is_constant(next)) break;
      x = std::move(next);
      ++D;
    }
  }
  int d = 0;
  while (d < bounds.max_d && kpss_rejects(x)) {
    if (x.size() <= 11) break;
    Eigen::VectorXd next = difference(x, {1, 0, 1});
    if (is_constant(next)) break;
    x = std::move(next);
    ++d;
  }
  return {d, D};
}

SelectionResult select_sarima(const TimeSeries& train, const SearchBounds& bounds, Criterion criterion,
                              SearchStrategy strategy, const SelectionOptions& options) {
  bounds.validate();
  if (is_constant(train.values)) throw DataError("training series has zero variance");
  auto [d, D] = choose_differencing(train, bounds);
  if (options.d) d = *options.d;
  if (options.D) D = *options.D;
  if (d < 0 || D < 0) throw std::invalid_argument("differencing orders must be nonnegative");
  const bool seasonal = seasonal_allowed(bounds);
  if (!seasonal) D = 0;
  const int m = seasonal ? bounds.period : 1;
  const int max_P = seasonal ? bounds.max_P : 0;
  const int max_Q = seasonal ? bounds.max_Q : 0;
  SearchBounds effective = bounds;
  effective.max_P = max_P;
  effective.max_Q = max_Q;
  const std::vector<bool> drifts = drift_options(bounds, d, D);

  Search search(train, options, criterion);

  if (strategy == SearchStrategy::exhaustive) {
    const long long count = static_cast<long long>(bounds.max_p + 1) * (bounds.max_q + 1) * (max_P + 1) *
                            (max_Q + 1) * static_cast<long long>(drifts.size());
    if (count > options.max_candidates && !options.force)
      throw std::invalid_argument("exhaustive search would fit " + std::to_string(count) +
                                  " candidates; narrow the bounds or force it");
    std::vector<SarimaSpec> grid;
    for (int p = 0; p <= bounds.max_p; ++p)
      for (int q = 0; q <= bounds.max_q; ++q)
        for (int P = 0; P <= max_P; ++P)
          for (int Q = 0; Q <= max_Q; ++Q)
            for (bool c : drifts) grid.push_back(make(p, d, q, P, D, Q, m, c));
    search.run(grid);
    return search.finish(d, D);
  }

  std::vector<SarimaSpec> start;
  for (int k : {0, 1, 2})
    for (int s : {0, 1})
      for (bool c : drifts) {
        const SarimaSpec spec = make(k, d, k, s, D, s, m, c);
        if (within(spec, effective)) start.push_back(spec);
      }
  // Keep the seasonal white-noise start even when bounds are zero.
  if (start.empty()) start.push_back(make(0, d, 0, 0, D, 0, m, false));

  std::optional<CandidateScore> best = search.best_of(search.run(start));
  for (int step = 0; best && step < 500; ++step) {
    const SarimaSpec& c = best->spec;
    std::vector<SarimaSpec> moves;
    for (int delta : {-1, 1}) {
      moves.push_back(make(c.p + delta, d, c.q, c.P, D, c.Q, m, c.include_drift));
      moves.push_back(make(c.p, d, c.q + delta, c.P, D, c.Q, m, c.include_drift));
      moves.push_back(make(c.p, d, c.q, c.P + delta, D, c.Q, m, c.include_drift));
      moves.push_back(make(c.p, d, c.q, c.P, D, c.Q + delta, m, c.include_drift));
    }
    if (drifts.size() == 2) moves.push_back(make(c.p, d, c.q, c.P, D, c.Q, m, !c.include_drift));
    std::erase_if(moves, [&](const SarimaSpec& s) { return !within(s, effective); });
    const std::optional<CandidateScore> challenger = search.best_of(search.run(moves));
    if (!challenger || !search.better(*challenger, *best)) break;
    best = challenger;
  }
  return search.finish(d, D);
}

HoldoutErrors holdout_errors(const Eigen::VectorXd& actual, const Eigen::VectorXd& predicted) {
  if (actual.size() != predicted.size())
    throw std::invalid_argument("actual and predicted lengths differ");
  if (actual.size() < 1) throw std::invalid_argument("holdout needs at least one observation");
  const Eigen::ArrayXd err = (actual - predicted).array();
  const double n = static_cast<double>(actual.size());
  HoldoutErrors out;
  out.sum_of_error = err.abs().sum();
  out.mae = out.sum_of_error / n;
  out.rmse = std::sqrt(err.square().sum() / n);
  return out;
}

ComparisonReport compare_methods(const TimeSeries& train, const Eigen::VectorXd& test, const CompareOptions& options) {
  if (test.size() < 1) throw std::invalid_argument("test set must contain at least one observation");
  const int h = static_cast<int>(test.size());
  ComparisonReport report;

  MethodScore arima{"ARIMA", {}, {}, {}};
  if (is_constant(train.values)) {
    // The likelihood is degenerate (sigma^2 = 0); the mean model reproduces the constant.
    arima.detail = "ARIMA(0,0,0) with non-zero mean";
    arima.point = Eigen::VectorXd::Constant(h, train.values[0]);
  } else {
    SearchBounds bounds = options.bounds.value_or(SearchBounds{});
    if (!options.bounds) bounds.period = train.period;
    SelectionResult sel = select_sarima(train, bounds, Criterion::aic, SearchStrategy::stepwise, options.selection);
    arima.detail = sel.best.spec.label();
    arima.point = forecast(sel.best, h, {0.95}).point;
    report.selection = std::move(sel);
  }
  arima.errors = holdout_errors(test, arima.point);
  report.rows.push_back(std::move(arima));

  for (BaselineMethod method : kAllBaselines) {
    BaselineForecast b = baseline_forecast(method, train, h);
    MethodScore row{b.method, {}, holdout_errors(test, b.point), std::move(b.point)};
    report.rows.push_back(std::move(row));
  }
  std::sort(report.rows.begin(), report.rows.end(), [](const MethodScore& a, const MethodScore& b) {
    if (a.errors.sum_of_error != b.errors.sum_of_error) return a.errors.sum_of_error < b.errors.sum_of_error;
    return a.method < b.method;
  });
  report.winner = report.rows.front().method;
  return report;
}

}  // namespace admitcast
