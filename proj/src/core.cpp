#include "tcplan/core.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tcplan {

namespace {

constexpr std::array<std::string_view, kNumPresets> kPresetNames = {
    "ultrafast", "veryfast", "fast", "slow", "veryslow"};

}  // namespace

std::string_view preset_name(Preset p) {
  return kPresetNames.at(static_cast<std::size_t>(p));
}

Preset preset_from_name(std::string_view name) {
  for (int i = 0; i < kNumPresets; ++i) {
    if (kPresetNames[i] == name) return static_cast<Preset>(i);
  }
  throw ValidationError("unknown preset: '" + std::string(name) + "'");
}

std::optional<int> OperatingGrid::index_of(Preset preset,
                                           int bitrate_kbps) const {
  auto pit = std::find(presets.begin(), presets.end(), preset);
  auto rit = std::find(bitrates_kbps.begin(), bitrates_kbps.end(), bitrate_kbps);
  if (pit == presets.end() || rit == bitrates_kbps.end()) return std::nullopt;
  const int pi = static_cast<int>(pit - presets.begin());
  const int ri = static_cast<int>(rit - bitrates_kbps.begin());
  return pi * static_cast<int>(bitrates_kbps.size()) + ri;
}

OperatingGrid build_operating_grid(const std::vector<Preset>& presets,
                                   const std::vector<int>& bitrates_kbps) {
  if (presets.empty()) throw ValidationError("grid: preset list is empty");
  if (bitrates_kbps.empty()) throw ValidationError("grid: bitrate list is empty");
  if (std::set<Preset>(presets.begin(), presets.end()).size() != presets.size()) {
    throw ValidationError("grid: duplicate preset");
  }
  std::set<int> rates(bitrates_kbps.begin(), bitrates_kbps.end());
  if (rates.size() != bitrates_kbps.size()) {
    throw ValidationError("grid: duplicate bitrate");
  }
  for (int r : bitrates_kbps) {
    if (r <= 0) throw ValidationError("grid: bitrate must be positive");
  }

  OperatingGrid grid;
  grid.presets = presets;
  grid.bitrates_kbps = bitrates_kbps;
  grid.points.reserve(presets.size() * bitrates_kbps.size());
  int j = 0;
  for (Preset p : presets) {
    for (int r : bitrates_kbps) {
      grid.points.push_back(OperatingPoint{p, r, j++});
    }
  }
  return grid;
}

namespace {

// Column order matches the extractor's feature table.
#define TCPLAN_FEATURE(field, time_use, rd_use)                        \
  FeatureInfo {                                                        \
    #field, time_use, rd_use,                                          \
        [](const SegmentFeatures& f) { return double(f.field); },      \
        [](SegmentFeatures& f, double v) {                             \
          f.field = static_cast<decltype(f.field)>(v);                 \
        }                                                              \
  }

const std::array<FeatureInfo, kNumFeatures> kSchema = {
    TCPLAN_FEATURE(pict_type_b, true, true),
    TCPLAN_FEATURE(pict_type_p, true, true),
    TCPLAN_FEATURE(i_mb, true, true),
    TCPLAN_FEATURE(p_mb, true, true),
    TCPLAN_FEATURE(b_mb, true, true),
    TCPLAN_FEATURE(s_mb, true, false),
    TCPLAN_FEATURE(mb_16x16, true, false),
    TCPLAN_FEATURE(mb_16x8, true, false),
    TCPLAN_FEATURE(mb_8x16, true, false),
    TCPLAN_FEATURE(mb_8x8, true, false),
    TCPLAN_FEATURE(mb_4x4, true, false),
    TCPLAN_FEATURE(sar, true, false),
    TCPLAN_FEATURE(skip_ratio_b, false, true),
    TCPLAN_FEATURE(skip_ratio_p, false, true),
    TCPLAN_FEATURE(avg_qp_y_p, false, true),
    TCPLAN_FEATURE(avg_qp_y_b, false, true),
    TCPLAN_FEATURE(avg_qp_y_i, false, true),
    TCPLAN_FEATURE(mv_count, true, false),
    TCPLAN_FEATURE(mv_mean, true, true),
    TCPLAN_FEATURE(color_range, true, false),
    TCPLAN_FEATURE(color_space, true, false),
    TCPLAN_FEATURE(color_primaries, true, false),
    TCPLAN_FEATURE(color_transfer, true, false),
    TCPLAN_FEATURE(width, true, false),
    TCPLAN_FEATURE(height, true, false),
};

#undef TCPLAN_FEATURE

}  // namespace

const std::array<FeatureInfo, kNumFeatures>& feature_schema() { return kSchema; }

int feature_index(std::string_view name) {
  for (int i = 0; i < kNumFeatures; ++i) {
    if (name == kSchema[i].name) return i;
  }
  return -1;
}

FeatureMask FeatureMask::defaults() {
  FeatureMask m;
  for (int i = 0; i < kNumFeatures; ++i) {
    m.use_for_time[i] = kSchema[i].time_default;
    m.use_for_rd[i] = kSchema[i].rd_default;
  }
  return m;
}

namespace {

std::vector<int> enabled_indices(const std::array<bool, kNumFeatures>& flags) {
  std::vector<int> out;
  for (int i = 0; i < kNumFeatures; ++i) {
    if (flags[i]) out.push_back(i);
  }
  return out;
}

}  // namespace

std::vector<int> FeatureMask::time_indices() const {
  return enabled_indices(use_for_time);
}

std::vector<int> FeatureMask::rd_indices() const {
  return enabled_indices(use_for_rd);
}

std::vector<double> feature_vector(const SegmentFeatures& f,
                                   const std::vector<int>& indices) {
  std::vector<double> out;
  out.reserve(indices.size());
  for (int idx : indices) out.push_back(kSchema.at(idx).get(f));
  return out;
}

void validate(const SegmentFeatures& f) {
  auto fail = [&](const std::string& msg) {
    throw ValidationError("segment '" + f.segment_id + "': " + msg);
  };
  if (f.duration_s <= 0) fail("duration_s must be positive");
  const double counts[] = {f.pict_type_b, f.pict_type_p, f.i_mb,    f.p_mb,
                           f.b_mb,        f.s_mb,        f.mb_16x16, f.mb_16x8,
                           f.mb_8x16,     f.mb_8x8,      f.mb_4x4,   f.mv_count};
  for (double c : counts) {
    if (c < 0) fail("counts must be non-negative");
  }
  if (f.skip_ratio_b < 0 || f.skip_ratio_b > 1 || f.skip_ratio_p < 0 ||
      f.skip_ratio_p > 1) {
    fail("skip ratios must lie in [0,1]");
  }
  if (f.width <= 0 || f.height <= 0) fail("width and height must be positive");
}

void validate(const Budgets& b) {
  if (b.rate_threshold_kbps <= 0) {
    throw ValidationError("budgets: rate threshold must be positive");
  }
  if (b.time_threshold_s <= 0) {
    throw ValidationError("budgets: time threshold must be positive");
  }
}

double derive_time_threshold(int num_segments, double segment_duration_s,
                             double overhead_s) {
  if (num_segments <= 0) {
    throw ValidationError("time threshold: num_segments must be positive");
  }
  if (segment_duration_s <= 0) {
    throw ValidationError("time threshold: duration must be positive");
  }
  if (overhead_s < 0) {
    throw ValidationError("time threshold: overhead must be non-negative");
  }
  if (overhead_s >= segment_duration_s) {
    throw ValidationError(
        "time threshold: overhead leaves no time for transcoding");
  }
  return num_segments * (segment_duration_s - overhead_s);
}

}  // namespace tcplan
