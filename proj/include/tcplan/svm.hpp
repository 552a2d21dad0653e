#ifndef TCPLAN_SVM_HPP_
#define TCPLAN_SVM_HPP_

#include <cstdint>
#include <vector>

#include "tcplan/core.hpp"
#include "tcplan/cv.hpp"

namespace tcplan {

// One training example for the per-preset R-D classifier: the segment's
// features and the cluster id of its measured R-D curve.
struct RDRow {
  SegmentFeatures features;
  Preset preset = Preset::kUltrafast;
  int cluster_label = 0;

  bool operator==(const RDRow&) const = default;
};

// Per-feature z-score parameters. A zero-variance column keeps stddev 1 so
// standardization stays invertible.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  static Standardizer fit(const Matrix& x);
  std::vector<double> transform(const std::vector<double>& x) const;
  std::vector<double> inverse(const std::vector<double>& z) const;

  bool operator==(const Standardizer&) const = default;
};

// Binary kernel SVM in dual form: f(x) = sum_i coef_i K(sv_i, x) + bias
// with coef_i = alpha_i * y_i and kernel (gamma * <u,v> + 1)^2.
struct BinarySvm {
  Matrix support_vectors;
  std::vector<double> dual_coef;
  double bias = 0;

  bool operator==(const BinarySvm&) const = default;
};

double poly2_kernel(const std::vector<double>& u, const std::vector<double>& v,
                    double gamma);

double svm_decision(const BinarySvm& svm, const std::vector<double>& x,
                    double gamma);

struct SvmParams {
  double c = 1.0;
  double tol = 1e-3;
  int max_passes = 100;
  std::uint64_t seed = 0;
};

struct SmoDiagnostics {
  std::vector<double> alphas;       // full dual variables at convergence
  std::vector<double> kkt_violations;  // max(0, margin violation) per row
};

// Sequential minimal optimization on the dual problem; labels are +1/-1.
// Deterministic given the seed. Inputs are expected standardized.
BinarySvm train_binary_svm(const Matrix& x, const std::vector<double>& labels,
                           double gamma, const SvmParams& params,
                           SmoDiagnostics* diag = nullptr);

// One-vs-rest classifier bank for the R-D cluster id of one preset.
// A single-label training set yields a degenerate model that always
// answers that label.
struct RDClassModel {
  Preset preset = Preset::kUltrafast;
  std::vector<int> class_ids;          // ascending observed labels
  std::vector<BinarySvm> classifiers;  // parallel to class_ids
  Standardizer scaler;
  std::vector<int> feature_indices;    // columns into the feature schema
  double gamma = 0;
  bool degenerate = false;

  bool operator==(const RDClassModel&) const = default;
};

// Trains one-vs-rest polynomial SVMs on z-scored features. gamma is fixed
// at 1/dim. Rows must share one preset.
RDClassModel train_rd_classifier(const std::vector<RDRow>& rows,
                                 const SvmParams& params,
                                 const FeatureMask& mask = FeatureMask::defaults());

// Argmax of the one-vs-rest decision scores; ties resolve to the lowest
// class id.
int classify_rd(const RDClassModel& model, const SegmentFeatures& features);

}  // namespace tcplan

#endif  // TCPLAN_SVM_HPP_
