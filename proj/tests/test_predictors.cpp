#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "tcplan/cv.hpp"
#include "tcplan/gbdt.hpp"
#include "tcplan/rng.hpp"
#include "tcplan/svm.hpp"
#include "test_util.hpp"

using namespace tcplan;

namespace {

SegmentFeatures basic_features(const std::string& id) {
  SegmentFeatures f;
  f.segment_id = id;
  f.width = 1280;
  f.height = 720;
  return f;
}

// Rows following t = 0.1 + 1e-4 * bitrate + 1e-7 * mv_count; the generator
// function is the oracle for the regressor.
std::vector<TimeRow> linear_time_rows(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TimeRow> rows;
  for (int i = 0; i < n; ++i) {
    TimeRow row;
    row.features = basic_features("lin_" + std::to_string(i));
    row.features.mv_count = std::floor(rng.uniform(0.0, 900000.0));
    row.features.mv_mean = rng.uniform(0.0, 800000.0);
    row.preset = Preset::kFast;
    row.target_bitrate_kbps = 200 + 100 * rng.next_int(58);
    row.transcode_time_s =
        0.1 + 1e-4 * row.target_bitrate_kbps + 1e-7 * row.features.mv_count;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TEST_CASE("constant target collapses to the constant") {
  std::vector<TimeRow> rows;
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    TimeRow row;
    row.features = basic_features("c_" + std::to_string(i));
    row.features.mv_count = rng.uniform(0, 1e6);
    row.preset = Preset::kVeryfast;
    row.target_bitrate_kbps = 200 * (1 + rng.next_int(20));
    row.transcode_time_s = 0.5;
    rows.push_back(row);
  }
  const TimeModel model = train_time_regressor(rows, GbdtParams{});
  SegmentFeatures probe = basic_features("probe");
  probe.mv_count = 123456;
  CHECK(predict_time(model, probe, 4321) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("a single row is memorized") {
  TimeRow row;
  row.features = basic_features("only");
  row.preset = Preset::kSlow;
  row.target_bitrate_kbps = 1000;
  row.transcode_time_s = 1.3;
  const TimeModel model = train_time_regressor({row}, GbdtParams{});
  CHECK(predict_time(model, row.features, 1000) ==
        doctest::Approx(1.3).epsilon(1e-9));
}

TEST_CASE("held-out error stays small on the noiseless synthetic function") {
  const std::vector<TimeRow> rows = linear_time_rows(500, 7);
  const std::vector<TimeRow> train(rows.begin(), rows.begin() + 400);
  const std::vector<TimeRow> held(rows.begin() + 400, rows.end());

  std::vector<double> rmse;
  const TimeModel model = train_time_regressor(train, GbdtParams{},
                                               FeatureMask::defaults(), &rmse);
  REQUIRE(rmse.size() == 200);
  for (std::size_t i = 1; i < rmse.size(); ++i) {
    CHECK(rmse[i] <= rmse[i - 1] + 1e-12);
  }

  std::vector<double> predicted, actual;
  for (const TimeRow& row : held) {
    predicted.push_back(
        predict_time(model, row.features, row.target_bitrate_kbps));
    actual.push_back(row.transcode_time_s);
  }
  CHECK(regression_metrics(predicted, actual).mape <= 0.05);
}

TEST_CASE("prediction equals a manual walk of the boosted trees") {
  GbdtParams params;
  params.rounds = 2;
  params.max_depth = 2;
  const std::vector<TimeRow> rows = linear_time_rows(40, 3);
  const TimeModel model = train_time_regressor(rows, params);
  REQUIRE(model.trees.size() == 2);

  SegmentFeatures probe = basic_features("walk");
  probe.mv_count = 444444;
  const int bitrate = 2600;
  const std::vector<double> x =
      time_input_vector(probe, bitrate, model.feature_indices);

  double expected = model.base_prediction;
  for (const RegressionTree& tree : model.trees) {
    int node = 0;
    while (tree.nodes[node].feature >= 0) {
      node = x[tree.nodes[node].feature] <= tree.nodes[node].threshold
                 ? tree.nodes[node].left
                 : tree.nodes[node].right;
    }
    expected += model.learning_rate * tree.nodes[node].value;
  }
  expected = std::max(expected, 1e-6);
  CHECK(predict_time(model, probe, bitrate) == expected);
}

TEST_CASE("negative raw outputs clamp to the floor") {
  TimeModel model;
  model.preset = Preset::kFast;
  model.base_prediction = -2.0;
  model.learning_rate = 0.1;
  model.feature_indices = time_input_indices(FeatureMask::defaults());
  CHECK(predict_time(model, basic_features("neg"), 1000) == 1e-6);
}

TEST_CASE("training input validation") {
  CHECK_THROWS_AS(train_time_regressor({}, GbdtParams{}), ValidationError);
  std::vector<TimeRow> mixed = linear_time_rows(4, 9);
  mixed[2].preset = Preset::kUltrafast;
  CHECK_THROWS_AS(train_time_regressor(mixed, GbdtParams{}), ValidationError);
  std::vector<TimeRow> bad = linear_time_rows(4, 9);
  bad[1].transcode_time_s = 0;
  CHECK_THROWS_AS(train_time_regressor(bad, GbdtParams{}), ValidationError);
}

TEST_CASE("prediction is deterministic") {
  const std::vector<TimeRow> rows = linear_time_rows(60, 21);
  const TimeModel model = train_time_regressor(rows, GbdtParams{});
  SegmentFeatures probe = basic_features("det");
  probe.mv_count = 31337;
  const double a = predict_time(model, probe, 800);
  const double b = predict_time(model, probe, 800);
  CHECK(a == b);
}

TEST_CASE("separable fixture trains to high accuracy with dual feasibility") {
  const std::vector<RDRow> rows = testutil::separable_fixture(40, 5);
  SvmParams params;
  params.seed = 17;
  const RDClassModel model = train_rd_classifier(rows, params);
  REQUIRE_FALSE(model.degenerate);
  REQUIRE(model.class_ids == std::vector<int>{0, 1});

  int correct = 0;
  for (const RDRow& row : rows) {
    if (classify_rd(model, row.features) == row.cluster_label) ++correct;
  }
  CHECK(static_cast<double>(correct) / rows.size() >= 0.99);

  // Dual feasibility and KKT residuals, checked on the raw binary problem.
  Matrix x;
  std::vector<double> labels;
  for (const RDRow& row : rows) {
    x.push_back(feature_vector(row.features, model.feature_indices));
    labels.push_back(row.cluster_label == 1 ? 1.0 : -1.0);
  }
  const Standardizer scaler = Standardizer::fit(x);
  for (auto& r : x) r = scaler.transform(r);
  SmoDiagnostics diag;
  train_binary_svm(x, labels, model.gamma, params, &diag);
  for (double a : diag.alphas) {
    CHECK(a >= -1e-12);
    CHECK(a <= params.c + 1e-12);
  }
  for (double v : diag.kkt_violations) CHECK(v <= params.tol + 1e-9);
}

TEST_CASE("support vectors classify to their own label on the fixture") {
  const std::vector<RDRow> rows = testutil::separable_fixture(25, 77);
  SvmParams params;
  params.seed = 4;
  const RDClassModel model = train_rd_classifier(rows, params);
  for (const RDRow& row : rows) {
    CHECK(classify_rd(model, row.features) == row.cluster_label);
  }
}

TEST_CASE("identical rows with one label classify to that label") {
  SegmentFeatures f = basic_features("twin");
  f.mv_mean = 250000;
  std::vector<RDRow> rows{RDRow{f, Preset::kFast, 2}, RDRow{f, Preset::kFast, 2}};
  const RDClassModel model = train_rd_classifier(rows, SvmParams{});
  CHECK(model.degenerate);
  CHECK(classify_rd(model, f) == 2);
}

TEST_CASE("single-class training yields a constant classifier") {
  std::vector<RDRow> rows;
  Rng rng(6);
  for (int i = 0; i < 10; ++i) {
    SegmentFeatures f = basic_features("one_" + std::to_string(i));
    f.mv_mean = rng.uniform(0, 1e6);
    rows.push_back(RDRow{f, Preset::kVeryslow, 4});
  }
  const RDClassModel model = train_rd_classifier(rows, SvmParams{});
  SegmentFeatures probe = basic_features("anything");
  probe.mv_mean = 1234;
  CHECK(classify_rd(model, probe) == 4);
}

TEST_CASE("score ties resolve to the lowest class id") {
  RDClassModel model;
  model.preset = Preset::kFast;
  model.class_ids = {1, 3};
  model.feature_indices = FeatureMask::defaults().rd_indices();
  model.gamma = 1.0 / model.feature_indices.size();
  model.scaler.mean.assign(model.feature_indices.size(), 0.0);
  model.scaler.stddev.assign(model.feature_indices.size(), 1.0);
  BinarySvm flat;  // no support vectors: score equals the bias
  flat.bias = 0.25;
  model.classifiers = {flat, flat};
  CHECK(classify_rd(model, basic_features("tie")) == 1);
}

TEST_CASE("classifier input validation") {
  CHECK_THROWS_AS(train_rd_classifier({}, SvmParams{}), ValidationError);
  std::vector<RDRow> rows = testutil::separable_fixture(3, 1);
  rows[1].preset = Preset::kUltrafast;
  CHECK_THROWS_AS(train_rd_classifier(rows, SvmParams{}), ValidationError);
}

TEST_CASE("standardization round-trips") {
  Rng rng(8);
  Matrix x;
  for (int i = 0; i < 30; ++i) {
    std::vector<double> row;
    for (int d = 0; d < 7; ++d) row.push_back(rng.uniform(-1e5, 1e5));
    x.push_back(row);
  }
  x[0][3] = 42;  // keep one column constant across rows
  for (auto& row : x) row[3] = 42;
  const Standardizer scaler = Standardizer::fit(x);
  for (const auto& row : x) {
    const std::vector<double> back = scaler.inverse(scaler.transform(row));
    for (std::size_t d = 0; d < row.size(); ++d) {
      CHECK(back[d] == doctest::Approx(row[d]).epsilon(1e-9));
    }
  }
}

TEST_CASE("fold sizes and coverage") {
  const auto folds10 = make_folds(10, 5, 3);
  for (const auto& f : folds10) CHECK(f.size() == 2);

  const auto folds11 = make_folds(11, 5, 3);
  const std::vector<std::size_t> sizes{folds11[0].size(), folds11[1].size(),
                                       folds11[2].size(), folds11[3].size(),
                                       folds11[4].size()};
  CHECK(sizes == std::vector<std::size_t>{3, 2, 2, 2, 2});

  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5 + rng.next_int(200);
    const int k = 2 + rng.next_int(std::min(n - 1, 8));
    const auto folds = make_folds(n, k, rng.next_u64());
    std::set<int> seen;
    for (const auto& fold : folds) {
      for (int idx : fold) CHECK(seen.insert(idx).second);
    }
    CHECK(static_cast<int>(seen.size()) == n);
  }
  CHECK_THROWS_AS(make_folds(3, 5, 0), ValidationError);
  CHECK_THROWS_AS(make_folds(10, 1, 0), ValidationError);
}

TEST_CASE("perfect predictor scores zero in every fold") {
  Rng rng(9);
  Matrix x;
  std::vector<double> y;
  for (int i = 0; i < 25; ++i) {
    x.push_back({rng.uniform(1, 10)});
    y.push_back(3 * x.back()[0]);
  }
  const Trainer trainer = [](const Matrix&, const std::vector<double>&) {
    return Predictor([](const std::vector<double>& row) { return 3 * row[0]; });
  };
  const Metric mape = [](const std::vector<double>& p,
                         const std::vector<double>& a) {
    return regression_metrics(p, a).mape;
  };
  const CvResult result = kfold_cv(x, y, 5, 3, trainer, mape);
  for (double s : result.fold_scores) CHECK(s == doctest::Approx(0).epsilon(1e-12));
  CHECK(result.mean == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("feature elimination keeps the informative column") {
  Rng rng(15);
  Matrix x;
  std::vector<double> y;
  for (int i = 0; i < 80; ++i) {
    std::vector<double> row;
    row.push_back(rng.uniform(1, 5));                      // informative
    for (int d = 0; d < 5; ++d) row.push_back(rng.uniform(-1, 1));  // noise
    y.push_back(2.0 + 4.0 * row[0]);
    x.push_back(std::move(row));
  }
  GbdtParams light;
  light.rounds = 40;
  light.max_depth = 3;
  const Trainer trainer = [&light](const Matrix& tx, const std::vector<double>& ty) {
    return boosted_predictor(tx, ty, light);
  };
  const Metric mape = [](const std::vector<double>& p,
                         const std::vector<double>& a) {
    return regression_metrics(p, a).mape;
  };
  const std::vector<int> kept = rfecv(x, y, trainer, mape, 4, 11);
  CHECK(std::find(kept.begin(), kept.end(), 0) != kept.end());
}

TEST_CASE("identical copies collapse to the lowest-index column") {
  Rng rng(25);
  Matrix x;
  std::vector<double> y;
  for (int i = 0; i < 40; ++i) {
    const double v = rng.uniform(0, 10);
    x.push_back({v, v, v, v});
    y.push_back(1.0 + 2.0 * v);
  }
  GbdtParams light;
  light.rounds = 20;
  light.max_depth = 2;
  const Trainer trainer = [&light](const Matrix& tx, const std::vector<double>& ty) {
    return boosted_predictor(tx, ty, light);
  };
  const Metric mape = [](const std::vector<double>& p,
                         const std::vector<double>& a) {
    return regression_metrics(p, a).mape;
  };
  CHECK(rfecv(x, y, trainer, mape, 4, 2) == std::vector<int>{0});
}

TEST_CASE("metrics closed forms") {
  const RegressionMetrics perfect =
      regression_metrics({1, 2, 3}, {1, 2, 3});
  CHECK(perfect.mae == 0);
  CHECK(perfect.mse == 0);
  CHECK(perfect.r2 == 1);
  CHECK(perfect.mape == 0);

  const RegressionMetrics off = regression_metrics({2, 3, 4}, {1, 2, 3});
  CHECK(off.mae == doctest::Approx(1).epsilon(1e-12));
  CHECK(off.mse == doctest::Approx(1).epsilon(1e-12));
  CHECK(off.mape ==
        doctest::Approx((1.0 + 0.5 + 1.0 / 3.0) / 3.0).epsilon(1e-12));

  CHECK_THROWS_AS(regression_metrics({1}, {0}), ValidationError);
  CHECK_THROWS_AS(regression_metrics({1, 2}, {1}), ValidationError);
  CHECK_THROWS_AS(regression_metrics({}, {}), ValidationError);
}

TEST_CASE("metrics match an independent recomputation") {
  Rng rng(101);
  std::vector<double> predicted, actual;
  for (int i = 0; i < 100; ++i) {
    predicted.push_back(rng.uniform(0.5, 4.0));
    actual.push_back(rng.uniform(0.5, 4.0));
  }
  const RegressionMetrics m = regression_metrics(predicted, actual);

  long double abs_sum = 0, sq_sum = 0, ape_sum = 0, mean = 0;
  for (int i = 0; i < 100; ++i) mean += actual[i];
  mean /= 100.0L;
  long double ss_tot = 0;
  for (int i = 0; i < 100; ++i) {
    const long double e = static_cast<long double>(predicted[i]) - actual[i];
    abs_sum += e < 0 ? -e : e;
    sq_sum += e * e;
    const long double ape = e / actual[i];
    ape_sum += ape < 0 ? -ape : ape;
    ss_tot += (actual[i] - mean) * (actual[i] - mean);
  }
  CHECK(m.mae == doctest::Approx(static_cast<double>(abs_sum / 100.0L)).epsilon(1e-9));
  CHECK(m.mse == doctest::Approx(static_cast<double>(sq_sum / 100.0L)).epsilon(1e-9));
  CHECK(m.mape == doctest::Approx(static_cast<double>(ape_sum / 100.0L)).epsilon(1e-9));
  CHECK(m.r2 ==
        doctest::Approx(static_cast<double>(1.0L - sq_sum / ss_tot)).epsilon(1e-9));
}
