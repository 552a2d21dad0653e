#include "tcplan/rdmodel.hpp"

#include <cmath>
#include <limits>

#include "tcplan/rng.hpp"

namespace tcplan {

void validate(const RDCurve& curve) {
  if (curve.bitrates_kbps.size() != curve.psnr_db.size()) {
    throw ValidationError("rd curve: bitrate and psnr lengths differ");
  }
  if (curve.bitrates_kbps.size() < 2) {
    throw ValidationError("rd curve: needs at least two samples");
  }
  for (std::size_t i = 0; i < curve.bitrates_kbps.size(); ++i) {
    if (curve.bitrates_kbps[i] <= 0) {
      throw ValidationError("rd curve: bitrates must be positive");
    }
    if (i > 0 && curve.bitrates_kbps[i] <= curve.bitrates_kbps[i - 1]) {
      throw ValidationError("rd curve: bitrates must be strictly increasing");
    }
    if (!std::isfinite(curve.psnr_db[i]) || curve.psnr_db[i] <= 0) {
      throw ValidationError("rd curve: psnr must be finite and positive");
    }
  }
}

double eval_curve(const LogCurve& curve, double bitrate_kbps) {
  if (bitrate_kbps <= 0) {
    throw ValidationError("eval_curve: bitrate must be positive");
  }
  return curve.a * std::log(bitrate_kbps) + curve.b;
}

LogCurve fit_centroid(const RDCurve& points) {
  validate(points);
  const std::size_t n = points.bitrates_kbps.size();

  // Centered normal equations for y = a*x + b with x = ln(rate).
  double mean_x = 0, mean_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += std::log(static_cast<double>(points.bitrates_kbps[i]));
    mean_y += points.psnr_db[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(static_cast<double>(points.bitrates_kbps[i])) - mean_x;
    sxx += dx * dx;
    sxy += dx * (points.psnr_db[i] - mean_y);
  }
  if (sxx == 0) {
    throw ValidationError("fit_centroid: bitrates are not distinct");
  }
  LogCurve fit;
  fit.a = sxy / sxx;
  fit.b = mean_y - fit.a * mean_x;
  return fit;
}

namespace {

double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

int nearest_centroid(const std::vector<double>& point,
                     const std::vector<std::vector<double>>& centroids) {
  int best = 0;
  double best_d = sq_distance(point, centroids[0]);
  for (std::size_t c = 1; c < centroids.size(); ++c) {
    const double d = sq_distance(point, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

// k-means++: first centroid uniform, then D^2-weighted picks.
std::vector<std::vector<double>> seed_centroids(
    const std::vector<std::vector<double>>& points, int k, Rng& rng) {
  std::vector<std::vector<double>> centroids;
  centroids.reserve(k);
  centroids.push_back(points[rng.next_int(static_cast<int>(points.size()))]);

  std::vector<double> dist2(points.size());
  while (static_cast<int>(centroids.size()) < k) {
    double total = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      dist2[i] = sq_distance(points[i], centroids[0]);
      for (std::size_t c = 1; c < centroids.size(); ++c) {
        dist2[i] = std::min(dist2[i], sq_distance(points[i], centroids[c]));
      }
      total += dist2[i];
    }
    std::size_t pick = 0;
    if (total > 0) {
      const double target = rng.next_double() * total;
      double acc = 0;
      pick = points.size() - 1;
      for (std::size_t i = 0; i < points.size(); ++i) {
        acc += dist2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    } else {
      // All points coincide with existing centroids.
      pick = static_cast<std::size_t>(rng.next_int(static_cast<int>(points.size())));
    }
    centroids.push_back(points[pick]);
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans_cluster(const std::vector<RDCurve>& curves, Preset preset,
                            const KMeansParams& params) {
  if (curves.empty()) throw ValidationError("kmeans: no curves");
  if (params.k < 1 || params.k > static_cast<int>(curves.size())) {
    throw ValidationError("kmeans: k must lie in [1, number of curves]");
  }
  validate(curves[0]);
  const std::vector<int>& grid = curves[0].bitrates_kbps;
  for (const RDCurve& c : curves) {
    validate(c);
    if (c.bitrates_kbps != grid) {
      throw ValidationError("kmeans: curves use mixed bitrate grids");
    }
  }

  std::vector<std::vector<double>> points;
  points.reserve(curves.size());
  for (const RDCurve& c : curves) points.push_back(c.psnr_db);

  Rng rng(params.seed);
  std::vector<std::vector<double>> centroids =
      seed_centroids(points, params.k, rng);
  std::vector<int> assignment(points.size(), 0);
  std::vector<double> trace;

  const std::size_t dim = grid.size();
  for (int iter = 0; iter < params.max_iter; ++iter) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      assignment[i] = nearest_centroid(points[i], centroids);
    }

    std::vector<std::vector<double>> next(params.k,
                                          std::vector<double>(dim, 0.0));
    std::vector<int> counts(params.k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      counts[assignment[i]]++;
      for (std::size_t d = 0; d < dim; ++d) next[assignment[i]][d] += points[i][d];
    }
    for (int c = 0; c < params.k; ++c) {
      if (counts[c] > 0) {
        for (std::size_t d = 0; d < dim; ++d) next[c][d] /= counts[c];
      } else {
        // Re-seed an emptied cluster from the point farthest from its
        // current centroid.
        std::size_t far_i = 0;
        double far_d = -1;
        for (std::size_t i = 0; i < points.size(); ++i) {
          const double d = sq_distance(points[i], centroids[assignment[i]]);
          if (d > far_d) {
            far_d = d;
            far_i = i;
          }
        }
        next[c] = points[far_i];
      }
    }

    double shift = 0;
    for (int c = 0; c < params.k; ++c) {
      shift = std::max(shift, std::sqrt(sq_distance(centroids[c], next[c])));
    }
    centroids = std::move(next);

    double inertia = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      inertia += sq_distance(points[i], centroids[assignment[i]]);
    }
    trace.push_back(inertia);

    if (shift < params.tol) break;
  }

  // Final assignment against the converged centroids.
  double inertia = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    assignment[i] = nearest_centroid(points[i], centroids);
    inertia += sq_distance(points[i], centroids[assignment[i]]);
  }

  KMeansResult result;
  result.model.preset = preset;
  result.model.k = params.k;
  result.model.bitrates_kbps = grid;
  result.model.centroids = centroids;
  result.model.inertia = inertia;
  result.model.seed = params.seed;
  result.model.fitted.reserve(params.k);
  for (int c = 0; c < params.k; ++c) {
    result.model.fitted.push_back(
        fit_centroid(RDCurve{grid, centroids[c]}));
  }
  result.assignments = std::move(assignment);
  result.inertia_trace = std::move(trace);
  return result;
}

int assign_cluster(const RDCurve& curve, const ClusterModel& model) {
  validate(curve);
  if (curve.bitrates_kbps != model.bitrates_kbps) {
    throw ValidationError("assign_cluster: curve grid differs from model grid");
  }
  return nearest_centroid(curve.psnr_db, model.centroids);
}

}  // namespace tcplan
