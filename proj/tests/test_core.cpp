#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tcplan/core.hpp"
#include "tcplan/rng.hpp"
#include "tcplan/serialize.hpp"

using namespace tcplan;

namespace {

const std::vector<Preset> kPaperPresets{Preset::kUltrafast, Preset::kVeryfast,
                                        Preset::kFast, Preset::kSlow,
                                        Preset::kVeryslow};
const std::vector<int> kPaperBitrates{200,  400,  600,  800,  1000,
                                      2000, 3000, 4000, 5000, 6000};

}  // namespace

TEST_CASE("preset names and speed ranks are bijective") {
  for (Preset p : kAllPresets) {
    CHECK(preset_from_name(preset_name(p)) == p);
  }
  CHECK(speed_rank(Preset::kUltrafast) == 0);
  CHECK(speed_rank(Preset::kVeryslow) == 4);
  CHECK_THROWS_AS(preset_from_name("medium"), ValidationError);
}

TEST_CASE("full grid has 50 operating points") {
  const OperatingGrid grid = build_operating_grid(kPaperPresets, kPaperBitrates);
  CHECK(grid.size() == 50);
  CHECK(grid.points.front().index_j == 0);
  CHECK(grid.points.back().index_j == 49);
}

TEST_CASE("singleton grid") {
  const OperatingGrid grid = build_operating_grid({Preset::kFast}, {1000});
  CHECK(grid.size() == 1);
  CHECK(grid.points[0].index_j == 0);
  CHECK(grid.points[0].preset == Preset::kFast);
  CHECK(grid.points[0].bitrate_kbps == 1000);
}

TEST_CASE("grid ordering is preset-major") {
  const OperatingGrid grid = build_operating_grid(
      {Preset::kUltrafast, Preset::kSlow}, {200, 400, 600});
  REQUIRE(grid.size() == 6);
  CHECK(grid.points[4].preset == Preset::kSlow);
  CHECK(grid.points[4].bitrate_kbps == 400);
  CHECK(grid.points[4].index_j == 4);
}

TEST_CASE("grid rejects duplicates and empty lists") {
  CHECK_THROWS_AS(build_operating_grid({Preset::kFast, Preset::kFast}, {200}),
                  ValidationError);
  CHECK_THROWS_AS(build_operating_grid({Preset::kFast}, {200, 200}),
                  ValidationError);
  CHECK_THROWS_AS(build_operating_grid({}, {200}), ValidationError);
  CHECK_THROWS_AS(build_operating_grid({Preset::kFast}, {}), ValidationError);
  CHECK_THROWS_AS(build_operating_grid({Preset::kFast}, {0}), ValidationError);
}

TEST_CASE("grid index bijection round-trips") {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const int np = 1 + rng.next_int(5);
    const int nr = 1 + rng.next_int(10);
    std::vector<Preset> presets(kAllPresets.begin(), kAllPresets.begin() + np);
    std::vector<int> bitrates;
    int r = 100;
    for (int i = 0; i < nr; ++i) bitrates.push_back(r += 100 + rng.next_int(500));
    const OperatingGrid grid = build_operating_grid(presets, bitrates);
    for (const OperatingPoint& point : grid.points) {
      const auto j = grid.index_of(point.preset, point.bitrate_kbps);
      REQUIRE(j.has_value());
      CHECK(*j == point.index_j);
      CHECK(grid.point_at(point.index_j) == point);
    }
  }
}

TEST_CASE("time threshold follows segments x (duration - overhead)") {
  CHECK(derive_time_threshold(6, 2.0, 0.04) ==
        doctest::Approx(11.76).epsilon(1e-12));
  CHECK(derive_time_threshold(1, 2.0, 0.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(derive_time_threshold(6, 2.0, 2.0), ValidationError);
  CHECK_THROWS_AS(derive_time_threshold(0, 2.0, 0.1), ValidationError);
  CHECK_THROWS_AS(derive_time_threshold(6, -1.0, 0.1), ValidationError);
}

TEST_CASE("default feature mask matches the usage table") {
  const FeatureMask mask = FeatureMask::defaults();
  CHECK(mask.time_indices().size() == 20);
  CHECK(mask.rd_indices().size() == 11);

  const int mv_mean = feature_index("mv_mean");
  REQUIRE(mv_mean >= 0);
  CHECK(mask.use_for_time[mv_mean]);
  CHECK(mask.use_for_rd[mv_mean]);

  const int mb_16x16 = feature_index("mb_16x16");
  CHECK(mask.use_for_time[mb_16x16]);
  CHECK_FALSE(mask.use_for_rd[mb_16x16]);

  for (const char* name : {"skip_ratio_b", "skip_ratio_p", "avg_qp_y_p",
                           "avg_qp_y_b", "avg_qp_y_i"}) {
    const int idx = feature_index(name);
    REQUIRE(idx >= 0);
    CHECK_FALSE(mask.use_for_time[idx]);
    CHECK(mask.use_for_rd[idx]);
  }
  CHECK(feature_index("nonexistent") == -1);
}

TEST_CASE("segment feature validation") {
  SegmentFeatures f;
  f.segment_id = "x";
  f.width = 1280;
  f.height = 720;
  CHECK_NOTHROW(validate(f));

  SegmentFeatures bad = f;
  bad.mv_count = -1;
  CHECK_THROWS_AS(validate(bad), ValidationError);

  bad = f;
  bad.skip_ratio_b = 1.5;
  CHECK_THROWS_AS(validate(bad), ValidationError);

  bad = f;
  bad.width = 0;
  CHECK_THROWS_AS(validate(bad), ValidationError);

  bad = f;
  bad.duration_s = 0;
  CHECK_THROWS_AS(validate(bad), ValidationError);
}

TEST_CASE("budgets must be positive") {
  CHECK_NOTHROW(validate(Budgets{30000, 11}));
  CHECK_THROWS_AS(validate(Budgets{0, 11}), ValidationError);
  CHECK_THROWS_AS(validate(Budgets{30000, -1}), ValidationError);
}

TEST_CASE("core types are value types with exact serialization round-trips") {
  SegmentFeatures f;
  f.segment_id = "seg_9";
  f.duration_s = 2.0;
  f.width = 1920;
  f.height = 1080;
  f.mv_mean = 711971.4;
  f.sar = 16.0 / 9.0;
  f.skip_ratio_b = 0.123456789012345678;
  f.avg_qp_y_p = 27.25;

  SegmentFeatures copy = f;
  CHECK(copy == f);
  copy.mv_mean += 1;
  CHECK(copy != f);

  const Json j = f;
  CHECK(j.get<SegmentFeatures>() == f);

  const OperatingGrid grid = build_operating_grid(kPaperPresets, kPaperBitrates);
  const Json gj = grid;
  CHECK(gj.get<OperatingGrid>() == grid);
}
