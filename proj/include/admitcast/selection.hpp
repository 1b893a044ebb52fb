#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "admitcast/sarima.hpp"
#include "admitcast/series.hpp"

namespace admitcast {

struct SearchBounds {
  int max_p = 24, max_q = 24;
  int max_d = 4;
  int max_P = 1, max_Q = 1;
  int max_D = 1;
  int period = 52;
  // Allow the constant term (mean when undifferenced, drift when d + D = 1).
  bool try_drift = true;

  void validate() const;
};

enum class Criterion { aic, bic };
enum class SearchStrategy { stepwise, exhaustive };

struct CandidateScore {
  SarimaSpec spec;
  double aic = 0.0;
  double bic = 0.0;
  bool converged = false;
  std::string note;  // why a candidate failed, empty otherwise

  double score(Criterion c) const { return c == Criterion::aic ? aic : bic; }
};

struct SelectionOptions {
  // Worker threads for candidate fits; 0 uses the hardware concurrency.
  unsigned threads = 0;
  // Exhaustive search refuses grids above this many candidates unless forced.
  int max_candidates = 5000;
  bool force = false;
  // Skip the KPSS choice and use these differencing orders.
  std::optional<int> d;
  std::optional<int> D;
  FitOptions fit{};
};

struct SelectionResult {
  // Converged candidates first, then by criterion, coefficient count and spec.
  std::vector<CandidateScore> ranked;
  int d = 0;
  int D = 0;
  Criterion criterion = Criterion::aic;
  SarimaFit best;
};

// Differencing orders by repeated KPSS level tests: seasonal first, then
// ordinary, each applied while KPSS rejects and the bound allows.
std::pair<int, int> choose_differencing(const TimeSeries& train, const SearchBounds& bounds);

// Throws ConvergenceError when no candidate converges.
SelectionResult select_sarima(const TimeSeries& train, const SearchBounds& bounds,
                              Criterion criterion = Criterion::aic,
                              SearchStrategy strategy = SearchStrategy::stepwise,
                              const SelectionOptions& options = {});

struct HoldoutErrors {
  double sum_of_error = 0.0;  // sum of absolute errors
  double mae = 0.0;
  double rmse = 0.0;
};

HoldoutErrors holdout_errors(const Eigen::VectorXd& actual, const Eigen::VectorXd& predicted);

struct MethodScore {
  std::string method;  // "ARIMA" or a baseline label
  std::string detail;  // selected model label for ARIMA
  HoldoutErrors errors;
  Eigen::VectorXd point;
};

struct ComparisonReport {
  std::vector<MethodScore> rows;  // ascending by sum_of_error, ties by method name
  std::string winner;
  std::optional<SelectionResult> selection;  // empty for a zero-variance training series
};

struct CompareOptions {
  std::optional<SearchBounds> bounds;  // defaults with the training period
  SelectionOptions selection{};
};

ComparisonReport compare_methods(const TimeSeries& train, const Eigen::VectorXd& test,
                                 const CompareOptions& options = {});

}  // namespace admitcast
