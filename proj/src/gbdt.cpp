#include "tcplan/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

namespace tcplan {

double RegressionTree::predict(const std::vector<double>& x) const {
  int node = 0;
  while (!nodes[node].is_leaf()) {
    node = (x[nodes[node].feature] <= nodes[node].threshold)
               ? nodes[node].left
               : nodes[node].right;
  }
  return nodes[node].value;
}

namespace {

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0;
  double score = 0;  // (sum_l)^2/n_l + (sum_r)^2/n_r, larger is better
};

// Exact greedy split over all (feature, threshold) pairs. Minimizing the
// children's SSE is equivalent to maximizing the score above because the
// total sum of squares is fixed at the node.
SplitChoice best_split(const Matrix& x, const std::vector<double>& y,
                       const std::vector<int>& rows, int min_samples_leaf) {
  const int n = static_cast<int>(rows.size());
  const int num_features = static_cast<int>(x[rows[0]].size());

  double total = 0;
  for (int r : rows) total += y[r];

  SplitChoice best;
  std::vector<int> order(rows);
  for (int f = 0; f < num_features; ++f) {
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (x[a][f] != x[b][f]) return x[a][f] < x[b][f];
      return a < b;
    });

    double left_sum = 0;
    for (int i = 0; i + 1 < n; ++i) {
      left_sum += y[order[i]];
      if (x[order[i]][f] == x[order[i + 1]][f]) continue;
      const int n_left = i + 1;
      const int n_right = n - n_left;
      if (n_left < min_samples_leaf || n_right < min_samples_leaf) continue;
      const double right_sum = total - left_sum;
      const double score =
          left_sum * left_sum / n_left + right_sum * right_sum / n_right;
      if (!best.found || score > best.score) {
        best.found = true;
        best.feature = f;
        best.threshold = 0.5 * (x[order[i]][f] + x[order[i + 1]][f]);
        best.score = score;
      }
    }
  }
  return best;
}

int build_node(const Matrix& x, const std::vector<double>& y,
               const std::vector<int>& rows, int depth, int max_depth,
               int min_samples_leaf, std::vector<TreeNode>& nodes) {
  const int id = static_cast<int>(nodes.size());
  nodes.emplace_back();

  double mean = 0;
  for (int r : rows) mean += y[r];
  mean /= static_cast<double>(rows.size());

  bool constant = true;
  for (int r : rows) {
    if (y[r] != y[rows[0]]) {
      constant = false;
      break;
    }
  }

  if (depth >= max_depth || constant ||
      static_cast<int>(rows.size()) < 2 * min_samples_leaf) {
    nodes[id].value = mean;
    return id;
  }

  const SplitChoice split = best_split(x, y, rows, min_samples_leaf);
  if (!split.found) {
    nodes[id].value = mean;
    return id;
  }

  std::vector<int> left_rows, right_rows;
  for (int r : rows) {
    (x[r][split.feature] <= split.threshold ? left_rows : right_rows)
        .push_back(r);
  }

  nodes[id].feature = split.feature;
  nodes[id].threshold = split.threshold;
  const int left =
      build_node(x, y, left_rows, depth + 1, max_depth, min_samples_leaf, nodes);
  const int right = build_node(x, y, right_rows, depth + 1, max_depth,
                               min_samples_leaf, nodes);
  nodes[id].left = left;
  nodes[id].right = right;
  return id;
}

}  // namespace

RegressionTree fit_regression_tree(const Matrix& x,
                                   const std::vector<double>& y, int max_depth,
                                   int min_samples_leaf) {
  if (x.empty() || x.size() != y.size()) {
    throw ValidationError("tree: bad training data");
  }
  std::vector<int> rows(x.size());
  std::iota(rows.begin(), rows.end(), 0);
  RegressionTree tree;
  build_node(x, y, rows, 0, max_depth, min_samples_leaf, tree.nodes);
  return tree;
}

std::vector<int> time_input_indices(const FeatureMask& mask) {
  std::vector<int> indices = mask.time_indices();
  indices.push_back(kBitrateColumn);
  return indices;
}

std::vector<double> time_input_vector(const SegmentFeatures& features,
                                      int bitrate_kbps,
                                      const std::vector<int>& indices) {
  std::vector<double> out;
  out.reserve(indices.size());
  for (int idx : indices) {
    out.push_back(idx == kBitrateColumn
                      ? static_cast<double>(bitrate_kbps)
                      : feature_schema().at(idx).get(features));
  }
  return out;
}

TimeModel train_time_regressor(const std::vector<TimeRow>& rows,
                               const GbdtParams& params,
                               const FeatureMask& mask,
                               std::vector<double>* rmse_trace) {
  return train_time_regressor(rows, params, time_input_indices(mask),
                              rmse_trace);
}

TimeModel train_time_regressor(const std::vector<TimeRow>& rows,
                               const GbdtParams& params,
                               const std::vector<int>& input_indices,
                               std::vector<double>* rmse_trace) {
  if (rows.empty()) throw ValidationError("gbdt: empty training set");
  for (const TimeRow& row : rows) {
    if (row.preset != rows[0].preset) {
      throw ValidationError("gbdt: rows mix presets");
    }
    if (row.transcode_time_s <= 0) {
      throw ValidationError("gbdt: transcode time must be positive");
    }
  }

  Matrix x;
  std::vector<double> y;
  x.reserve(rows.size());
  y.reserve(rows.size());
  for (const TimeRow& row : rows) {
    x.push_back(
        time_input_vector(row.features, row.target_bitrate_kbps, input_indices));
    y.push_back(row.transcode_time_s);
  }

  TimeModel model;
  model.preset = rows[0].preset;
  model.learning_rate = params.learning_rate;
  model.feature_indices = input_indices;
  model.base_prediction =
      std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());

  std::vector<double> pred(y.size(), model.base_prediction);
  std::vector<double> residual(y.size());
  model.trees.reserve(params.rounds);
  for (int round = 0; round < params.rounds; ++round) {
    for (std::size_t i = 0; i < y.size(); ++i) residual[i] = y[i] - pred[i];
    RegressionTree tree =
        fit_regression_tree(x, residual, params.max_depth, params.min_samples_leaf);
    for (std::size_t i = 0; i < y.size(); ++i) {
      pred[i] += params.learning_rate * tree.predict(x[i]);
    }
    model.trees.push_back(std::move(tree));

    if (rmse_trace) {
      double sse = 0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = y[i] - pred[i];
        sse += e * e;
      }
      rmse_trace->push_back(std::sqrt(sse / static_cast<double>(y.size())));
    }
  }
  return model;
}

Predictor boosted_predictor(const Matrix& x, const std::vector<double>& y,
                            const GbdtParams& params) {
  if (x.empty() || x.size() != y.size()) {
    throw ValidationError("gbdt: bad training data");
  }
  auto base = std::make_shared<double>(
      std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size()));
  auto trees = std::make_shared<std::vector<RegressionTree>>();
  trees->reserve(params.rounds);

  std::vector<double> pred(y.size(), *base);
  std::vector<double> residual(y.size());
  for (int round = 0; round < params.rounds; ++round) {
    for (std::size_t i = 0; i < y.size(); ++i) residual[i] = y[i] - pred[i];
    RegressionTree tree = fit_regression_tree(x, residual, params.max_depth,
                                              params.min_samples_leaf);
    for (std::size_t i = 0; i < y.size(); ++i) {
      pred[i] += params.learning_rate * tree.predict(x[i]);
    }
    trees->push_back(std::move(tree));
  }

  const double lr = params.learning_rate;
  return [base, trees, lr](const std::vector<double>& row) {
    double out = *base;
    for (const RegressionTree& tree : *trees) out += lr * tree.predict(row);
    return out;
  };
}

double predict_time(const TimeModel& model, const SegmentFeatures& features,
                    int bitrate_kbps) {
  if (bitrate_kbps <= 0) {
    throw ValidationError("predict_time: bitrate must be positive");
  }
  const std::vector<double> x =
      time_input_vector(features, bitrate_kbps, model.feature_indices);
  double out = model.base_prediction;
  for (const RegressionTree& tree : model.trees) {
    out += model.learning_rate * tree.predict(x);
  }
  return std::max(out, 1e-6);
}

}  // namespace tcplan
