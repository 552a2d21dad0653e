#ifndef TCPLAN_CV_HPP_
#define TCPLAN_CV_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "tcplan/error.hpp"

namespace tcplan {

struct RegressionMetrics {
  double mae = 0;
  double mse = 0;
  double r2 = 0;
  double mape = 0;

  bool operator==(const RegressionMetrics&) const = default;
};

// Standard definitions: MAE = mean |e|, MSE = mean e^2,
// R2 = 1 - SSres/SStot, MAPE = mean |e/actual|. Throws ValidationError on
// length mismatch, empty input, or (when with_mape) a zero actual value.
RegressionMetrics regression_metrics(const std::vector<double>& predicted,
                                     const std::vector<double>& actual,
                                     bool with_mape = true);

using Matrix = std::vector<std::vector<double>>;
using Predictor = std::function<double(const std::vector<double>&)>;
using Trainer =
    std::function<Predictor(const Matrix& x, const std::vector<double>& y)>;
// Lower is better (an error score such as MAPE or MSE).
using Metric = std::function<double(const std::vector<double>& predicted,
                                    const std::vector<double>& actual)>;

// Validation folds over n rows: a seeded shuffle split into k slices whose
// sizes differ by at most one (the first n % k folds take the extra row).
std::vector<std::vector<int>> make_folds(int n, int k, std::uint64_t seed);

struct CvResult {
  std::vector<double> fold_scores;
  double mean = 0;
};

// k-fold cross-validation: trains on k-1 folds, scores the held-out fold.
// Throws ValidationError when k < 2 or there are fewer rows than folds.
CvResult kfold_cv(const Matrix& x, const std::vector<double>& y, int k,
                  std::uint64_t seed, const Trainer& trainer,
                  const Metric& metric);

// Greedy backward feature elimination scored by k-fold CV. Each step drops
// the column whose removal gives the best (lowest) mean CV score, as long
// as the score does not get worse; ties drop the highest column index.
// Never eliminates below one column. Returns selected column indices in
// ascending order.
std::vector<int> rfecv(const Matrix& x, const std::vector<double>& y,
                       const Trainer& trainer, const Metric& metric, int folds,
                       std::uint64_t seed);

}  // namespace tcplan

#endif  // TCPLAN_CV_HPP_
