#ifndef TCPLAN_GBDT_HPP_
#define TCPLAN_GBDT_HPP_

#include <vector>

#include "tcplan/core.hpp"
#include "tcplan/cv.hpp"

namespace tcplan {

// One training example for the per-preset transcoding-time regressor.
struct TimeRow {
  SegmentFeatures features;
  Preset preset = Preset::kUltrafast;
  int target_bitrate_kbps = 0;
  double transcode_time_s = 0;

  bool operator==(const TimeRow&) const = default;
};

// Axis-aligned regression tree node. feature < 0 marks a leaf.
// Inner nodes send x[feature] <= threshold to the left child.
struct TreeNode {
  int feature = -1;
  double threshold = 0;
  int left = -1;
  int right = -1;
  double value = 0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;

  double predict(const std::vector<double>& x) const;
  bool operator==(const RegressionTree&) const = default;
};

// Fits a depth-limited tree to (x, y) by exact greedy SSE splits.
// Deterministic: ties resolve to the lowest feature index and the
// smallest threshold.
RegressionTree fit_regression_tree(const Matrix& x,
                                   const std::vector<double>& y, int max_depth,
                                   int min_samples_leaf);

struct GbdtParams {
  int rounds = 200;
  int max_depth = 4;
  double learning_rate = 0.1;
  int min_samples_leaf = 2;
};

// Least-squares gradient-boosted trees for one preset's transcoding time.
// The input vector is the masked feature columns followed by the target
// bitrate; feature_indices stores positions into that extended vector
// (index kNumFeatures selects the bitrate column).
struct TimeModel {
  Preset preset = Preset::kUltrafast;
  double base_prediction = 0;
  double learning_rate = 0;
  std::vector<RegressionTree> trees;
  std::vector<int> feature_indices;

  bool operator==(const TimeModel&) const = default;
};

inline constexpr int kBitrateColumn = kNumFeatures;

// Input columns for a time model given the mask: time features plus the
// bitrate column.
std::vector<int> time_input_indices(const FeatureMask& mask);

// Assembles the model input vector for one (segment, bitrate) pair.
std::vector<double> time_input_vector(const SegmentFeatures& features,
                                      int bitrate_kbps,
                                      const std::vector<int>& indices);

// Trains a boosted regressor on rows that must all share one preset.
// Each round fits a tree to the current residuals; the training RMSE per
// round is appended to *rmse_trace when provided and never increases.
TimeModel train_time_regressor(const std::vector<TimeRow>& rows,
                               const GbdtParams& params,
                               const FeatureMask& mask = FeatureMask::defaults(),
                               std::vector<double>* rmse_trace = nullptr);

// Same, with an explicit input-column selection (e.g. after feature
// elimination). Indices address the extended vector described above.
TimeModel train_time_regressor(const std::vector<TimeRow>& rows,
                               const GbdtParams& params,
                               const std::vector<int>& input_indices,
                               std::vector<double>* rmse_trace = nullptr);

// Boosted prediction, floored at 1e-6 s so downstream totals stay positive.
double predict_time(const TimeModel& model, const SegmentFeatures& features,
                    int bitrate_kbps);

// Matrix-level boosting for the generic CV and feature-elimination
// utilities; the returned predictor owns its trees.
Predictor boosted_predictor(const Matrix& x, const std::vector<double>& y,
                            const GbdtParams& params);

}  // namespace tcplan

#endif  // TCPLAN_GBDT_HPP_
