#include "tcplan/svm.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tcplan/rng.hpp"

namespace tcplan {

Standardizer Standardizer::fit(const Matrix& x) {
  if (x.empty()) throw ValidationError("standardizer: empty input");
  const std::size_t dim = x[0].size();
  Standardizer s;
  s.mean.assign(dim, 0.0);
  s.stddev.assign(dim, 0.0);
  for (const auto& row : x) {
    for (std::size_t d = 0; d < dim; ++d) s.mean[d] += row[d];
  }
  for (std::size_t d = 0; d < dim; ++d) s.mean[d] /= static_cast<double>(x.size());
  for (const auto& row : x) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = row[d] - s.mean[d];
      s.stddev[d] += diff * diff;
    }
  }
  for (std::size_t d = 0; d < dim; ++d) {
    s.stddev[d] = std::sqrt(s.stddev[d] / static_cast<double>(x.size()));
    if (s.stddev[d] == 0) s.stddev[d] = 1.0;
  }
  return s;
}

std::vector<double> Standardizer::transform(const std::vector<double>& x) const {
  std::vector<double> z(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) z[d] = (x[d] - mean[d]) / stddev[d];
  return z;
}

std::vector<double> Standardizer::inverse(const std::vector<double>& z) const {
  std::vector<double> x(z.size());
  for (std::size_t d = 0; d < z.size(); ++d) x[d] = z[d] * stddev[d] + mean[d];
  return x;
}

double poly2_kernel(const std::vector<double>& u, const std::vector<double>& v,
                    double gamma) {
  double dot = 0;
  for (std::size_t d = 0; d < u.size(); ++d) dot += u[d] * v[d];
  const double base = gamma * dot + 1.0;
  return base * base;
}

double svm_decision(const BinarySvm& svm, const std::vector<double>& x,
                    double gamma) {
  double f = svm.bias;
  for (std::size_t i = 0; i < svm.support_vectors.size(); ++i) {
    f += svm.dual_coef[i] * poly2_kernel(svm.support_vectors[i], x, gamma);
  }
  return f;
}

BinarySvm train_binary_svm(const Matrix& x, const std::vector<double>& labels,
                           double gamma, const SvmParams& params,
                           SmoDiagnostics* diag) {
  const int n = static_cast<int>(x.size());
  if (n == 0 || labels.size() != x.size()) {
    throw ValidationError("svm: bad training data");
  }
  if (n == 1) {
    // Nothing to optimize; fix the bias so the lone example is classified
    // to its own side.
    BinarySvm lone;
    lone.bias = labels[0];
    if (diag) {
      diag->alphas.assign(1, 0.0);
      diag->kkt_violations.assign(1, 0.0);
    }
    return lone;
  }

  // Precomputed Gram matrix; training sets are per-preset and small.
  std::vector<double> gram(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double k = poly2_kernel(x[i], x[j], gamma);
      gram[static_cast<std::size_t>(i) * n + j] = k;
      gram[static_cast<std::size_t>(j) * n + i] = k;
    }
  }
  auto kernel = [&](int i, int j) {
    return gram[static_cast<std::size_t>(i) * n + j];
  };

  std::vector<double> alpha(n, 0.0);
  double bias = 0;
  auto decision = [&](int i) {
    double f = bias;
    for (int j = 0; j < n; ++j) {
      if (alpha[j] != 0) f += alpha[j] * labels[j] * kernel(j, i);
    }
    return f;
  };

  // One pairwise step of the dual ascent; returns false when the pair
  // cannot make progress.
  auto take_step = [&](int i, int j, double ei) {
    if (i == j) return false;
    const double ej = decision(j) - labels[j];

    const double ai_old = alpha[i];
    const double aj_old = alpha[j];
    double lo, hi;
    if (labels[i] != labels[j]) {
      lo = std::max(0.0, aj_old - ai_old);
      hi = std::min(params.c, params.c + aj_old - ai_old);
    } else {
      lo = std::max(0.0, ai_old + aj_old - params.c);
      hi = std::min(params.c, ai_old + aj_old);
    }
    if (lo >= hi) return false;

    const double eta = 2 * kernel(i, j) - kernel(i, i) - kernel(j, j);
    if (eta >= 0) return false;

    double aj = aj_old - labels[j] * (ei - ej) / eta;
    aj = std::clamp(aj, lo, hi);
    if (std::fabs(aj - aj_old) < 1e-7) return false;
    const double ai = ai_old + labels[i] * labels[j] * (aj_old - aj);

    alpha[i] = ai;
    alpha[j] = aj;

    const double b1 = bias - ei - labels[i] * (ai - ai_old) * kernel(i, i) -
                      labels[j] * (aj - aj_old) * kernel(i, j);
    const double b2 = bias - ej - labels[i] * (ai - ai_old) * kernel(i, j) -
                      labels[j] * (aj - aj_old) * kernel(j, j);
    if (ai > 0 && ai < params.c) {
      bias = b1;
    } else if (aj > 0 && aj < params.c) {
      bias = b2;
    } else {
      bias = 0.5 * (b1 + b2);
    }
    return true;
  };

  Rng rng(params.seed);
  const int max_sweeps = params.max_passes * 50;  // hard stop
  std::vector<double> error_cache(n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    // Refreshed once per sweep; used only to pick promising partners.
    for (int j = 0; j < n; ++j) error_cache[j] = decision(j) - labels[j];

    int changed = 0;
    for (int i = 0; i < n; ++i) {
      const double ei = decision(i) - labels[i];
      const bool violates = (labels[i] * ei < -params.tol && alpha[i] < params.c) ||
                            (labels[i] * ei > params.tol && alpha[i] > 0);
      if (!violates) continue;

      // Second-choice hierarchy: the largest |E_i - E_j| step first, then
      // every partner from a seeded rotation until one moves.
      int best_j = i == 0 ? 1 : 0;
      double best_gap = -1;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double gap = std::fabs(ei - error_cache[j]);
        if (gap > best_gap) {
          best_gap = gap;
          best_j = j;
        }
      }
      bool stepped = take_step(i, best_j, ei);
      if (!stepped) {
        const int start = rng.next_int(n);
        for (int off = 0; off < n && !stepped; ++off) {
          stepped = take_step(i, (start + off) % n, ei);
        }
      }
      if (stepped) ++changed;
    }
    // A clean sweep tried every pair for every violator; nothing can move
    // afterwards either.
    if (changed == 0) break;
  }

  if (diag) {
    diag->alphas = alpha;
    diag->kkt_violations.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double margin = labels[i] * decision(i);
      double v = 0;
      if (alpha[i] <= 0) {
        v = std::max(0.0, 1.0 - margin);  // should satisfy margin >= 1
      } else if (alpha[i] >= params.c) {
        v = std::max(0.0, margin - 1.0);  // should satisfy margin <= 1
      } else {
        v = std::fabs(margin - 1.0);  // free vector sits on the margin
      }
      diag->kkt_violations[i] = v;
    }
  }

  BinarySvm svm;
  svm.bias = bias;
  for (int i = 0; i < n; ++i) {
    if (alpha[i] > 1e-12) {
      svm.support_vectors.push_back(x[i]);
      svm.dual_coef.push_back(alpha[i] * labels[i]);
    }
  }
  return svm;
}

RDClassModel train_rd_classifier(const std::vector<RDRow>& rows,
                                 const SvmParams& params,
                                 const FeatureMask& mask) {
  if (rows.empty()) throw ValidationError("rd classifier: empty training set");
  for (const RDRow& row : rows) {
    if (row.preset != rows[0].preset) {
      throw ValidationError("rd classifier: rows mix presets");
    }
    if (row.cluster_label < 0) {
      throw ValidationError("rd classifier: negative cluster label");
    }
  }

  RDClassModel model;
  model.preset = rows[0].preset;
  model.feature_indices = mask.rd_indices();
  model.gamma = 1.0 / static_cast<double>(model.feature_indices.size());

  std::set<int> labels;
  for (const RDRow& row : rows) labels.insert(row.cluster_label);
  model.class_ids.assign(labels.begin(), labels.end());

  Matrix raw;
  raw.reserve(rows.size());
  for (const RDRow& row : rows) {
    raw.push_back(feature_vector(row.features, model.feature_indices));
  }
  model.scaler = Standardizer::fit(raw);

  if (model.class_ids.size() < 2) {
    model.degenerate = true;
    return model;
  }

  Matrix x;
  x.reserve(raw.size());
  for (const auto& row : raw) x.push_back(model.scaler.transform(row));

  model.classifiers.reserve(model.class_ids.size());
  for (std::size_t c = 0; c < model.class_ids.size(); ++c) {
    std::vector<double> y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      y[i] = (rows[i].cluster_label == model.class_ids[c]) ? 1.0 : -1.0;
    }
    SvmParams per_class = params;
    per_class.seed = Rng::mix(params.seed, c);
    model.classifiers.push_back(train_binary_svm(x, y, model.gamma, per_class));
  }
  return model;
}

int classify_rd(const RDClassModel& model, const SegmentFeatures& features) {
  if (model.class_ids.empty()) {
    throw ValidationError("rd classifier: model has no classes");
  }
  if (model.degenerate) return model.class_ids[0];

  const std::vector<double> z = model.scaler.transform(
      feature_vector(features, model.feature_indices));

  int best = model.class_ids[0];
  double best_score = svm_decision(model.classifiers[0], z, model.gamma);
  for (std::size_t c = 1; c < model.class_ids.size(); ++c) {
    const double score = svm_decision(model.classifiers[c], z, model.gamma);
    if (score > best_score) {
      best_score = score;
      best = model.class_ids[c];
    }
  }
  return best;
}

}  // namespace tcplan
