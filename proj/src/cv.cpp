#include "tcplan/cv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tcplan/rng.hpp"

namespace tcplan {

RegressionMetrics regression_metrics(const std::vector<double>& predicted,
                                     const std::vector<double>& actual,
                                     bool with_mape) {
  if (predicted.size() != actual.size()) {
    throw ValidationError("metrics: predicted and actual lengths differ");
  }
  if (predicted.empty()) throw ValidationError("metrics: empty input");

  const double n = static_cast<double>(actual.size());
  double abs_sum = 0, sq_sum = 0, ape_sum = 0, mean_actual = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double e = predicted[i] - actual[i];
    abs_sum += std::fabs(e);
    sq_sum += e * e;
    mean_actual += actual[i];
    if (with_mape) {
      if (actual[i] == 0) {
        throw ValidationError("metrics: MAPE undefined for zero actual value");
      }
      ape_sum += std::fabs(e / actual[i]);
    }
  }
  mean_actual /= n;

  double ss_tot = 0;
  for (double a : actual) {
    const double d = a - mean_actual;
    ss_tot += d * d;
  }

  RegressionMetrics m;
  m.mae = abs_sum / n;
  m.mse = sq_sum / n;
  m.mape = with_mape ? ape_sum / n : 0.0;
  if (ss_tot > 0) {
    m.r2 = 1.0 - sq_sum / ss_tot;
  } else {
    // Constant actuals: perfect predictions score 1, anything else 0.
    m.r2 = (sq_sum == 0) ? 1.0 : 0.0;
  }
  return m;
}

std::vector<std::vector<int>> make_folds(int n, int k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("folds: k must be at least 2");
  if (n < k) throw ValidationError("folds: fewer rows than folds");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<std::vector<int>> folds(k);
  const int base = n / k;
  const int extra = n % k;
  int pos = 0;
  for (int f = 0; f < k; ++f) {
    const int size = base + (f < extra ? 1 : 0);
    folds[f].assign(order.begin() + pos, order.begin() + pos + size);
    pos += size;
  }
  return folds;
}

CvResult kfold_cv(const Matrix& x, const std::vector<double>& y, int k,
                  std::uint64_t seed, const Trainer& trainer,
                  const Metric& metric) {
  if (x.size() != y.size()) throw ValidationError("cv: x and y lengths differ");
  const auto folds = make_folds(static_cast<int>(x.size()), k, seed);

  CvResult result;
  result.fold_scores.reserve(k);
  std::vector<char> in_val(x.size());
  for (const auto& fold : folds) {
    std::fill(in_val.begin(), in_val.end(), 0);
    for (int i : fold) in_val[i] = 1;

    Matrix train_x;
    std::vector<double> train_y;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!in_val[i]) {
        train_x.push_back(x[i]);
        train_y.push_back(y[i]);
      }
    }
    Predictor model = trainer(train_x, train_y);

    std::vector<double> pred, act;
    pred.reserve(fold.size());
    act.reserve(fold.size());
    for (int i : fold) {
      pred.push_back(model(x[i]));
      act.push_back(y[i]);
    }
    result.fold_scores.push_back(metric(pred, act));
  }
  result.mean = std::accumulate(result.fold_scores.begin(),
                                result.fold_scores.end(), 0.0) /
                static_cast<double>(result.fold_scores.size());
  return result;
}

namespace {

Matrix select_columns(const Matrix& x, const std::vector<int>& cols) {
  Matrix out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i].reserve(cols.size());
    for (int c : cols) out[i].push_back(x[i][c]);
  }
  return out;
}

}  // namespace

std::vector<int> rfecv(const Matrix& x, const std::vector<double>& y,
                       const Trainer& trainer, const Metric& metric, int folds,
                       std::uint64_t seed) {
  if (x.empty() || x[0].size() < 2) {
    throw ValidationError("rfecv: needs at least two feature columns");
  }

  std::vector<int> cols(x[0].size());
  std::iota(cols.begin(), cols.end(), 0);

  auto score_of = [&](const std::vector<int>& subset) {
    return kfold_cv(select_columns(x, subset), y, folds, seed, trainer, metric)
        .mean;
  };

  double current = score_of(cols);
  while (cols.size() > 1) {
    double best_score = 0;
    int best_pos = -1;
    for (std::size_t drop = 0; drop < cols.size(); ++drop) {
      std::vector<int> candidate;
      candidate.reserve(cols.size() - 1);
      for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i != drop) candidate.push_back(cols[i]);
      }
      const double s = score_of(candidate);
      // Ties drop the highest column index; columns are kept sorted, so a
      // later position always holds a larger index.
      if (best_pos < 0 || s < best_score ||
          (s == best_score && cols[drop] > cols[best_pos])) {
        best_score = s;
        best_pos = static_cast<int>(drop);
      }
    }
    if (best_score > current) break;  // every removal makes things worse
    current = best_score;
    cols.erase(cols.begin() + best_pos);
  }
  return cols;
}

}  // namespace tcplan
