#ifndef TCPLAN_RDMODEL_HPP_
#define TCPLAN_RDMODEL_HPP_

#include <cstdint>
#include <vector>

#include "tcplan/core.hpp"

namespace tcplan {

// One sampled rate-quality curve: PSNR measured at each bitrate of a
// shared sampling grid.
struct RDCurve {
  std::vector<int> bitrates_kbps;  // strictly increasing
  std::vector<double> psnr_db;     // same length, finite, positive

  bool operator==(const RDCurve&) const = default;
};

// Throws ValidationError when lengths differ, fewer than two samples,
// bitrates are not strictly increasing or PSNR values are not finite
// and positive.
void validate(const RDCurve& curve);

// Two-parameter logarithmic quality model: psnr(r) = a * ln(r) + b.
struct LogCurve {
  double a = 0;  // dB per ln(kbps)
  double b = 0;  // dB

  bool operator==(const LogCurve&) const = default;
};

// Evaluates the curve at a bitrate. Throws ValidationError for
// bitrate_kbps <= 0.
double eval_curve(const LogCurve& curve, double bitrate_kbps);

// Least-squares fit of psnr = a*ln(r) + b through the sampled points,
// solved in closed form. Requires >= 2 points with distinct bitrates.
LogCurve fit_centroid(const RDCurve& points);

// A trained clustering of R-D curves for one preset. Centroids are
// sampled over the curves' shared bitrate grid; fitted[c] is the
// least-squares log fit of centroids[c].
struct ClusterModel {
  Preset preset = Preset::kUltrafast;
  int k = 0;
  std::vector<int> bitrates_kbps;               // shared sampling grid
  std::vector<std::vector<double>> centroids;   // k vectors
  std::vector<LogCurve> fitted;                 // k fits
  double inertia = 0;                           // sum of squared distances
  std::uint64_t seed = 0;

  bool operator==(const ClusterModel&) const = default;
};

struct KMeansParams {
  int k = 6;
  std::uint64_t seed = 0;
  int max_iter = 100;
  double tol = 1e-6;  // centroid shift below which training stops
};

struct KMeansResult {
  ClusterModel model;
  std::vector<int> assignments;        // cluster id per input curve
  std::vector<double> inertia_trace;   // one entry per Lloyd iteration
};

// Lloyd's algorithm with k-means++ seeding on the sampled PSNR vectors.
// Deterministic given the seed. An emptied cluster is re-seeded from the
// point farthest from its assigned centroid. Throws ValidationError when
// curves share no common grid or k is outside [1, |curves|].
KMeansResult kmeans_cluster(const std::vector<RDCurve>& curves, Preset preset,
                            const KMeansParams& params);

// Nearest centroid by Euclidean distance on the sampled PSNR vector;
// ties resolve to the lowest cluster id. Throws ValidationError when the
// curve's grid differs from the model's.
int assign_cluster(const RDCurve& curve, const ClusterModel& model);

}  // namespace tcplan

#endif  // TCPLAN_RDMODEL_HPP_
