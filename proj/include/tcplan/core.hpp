#ifndef TCPLAN_CORE_HPP_
#define TCPLAN_CORE_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcplan/error.hpp"

namespace tcplan {

// x264-style speed presets, ordered from fastest to slowest.
// The integer value is the speed rank (0 = ultrafast).
enum class Preset : int {
  kUltrafast = 0,
  kVeryfast = 1,
  kFast = 2,
  kSlow = 3,
  kVeryslow = 4,
};

inline constexpr int kNumPresets = 5;

inline constexpr std::array<Preset, kNumPresets> kAllPresets = {
    Preset::kUltrafast, Preset::kVeryfast, Preset::kFast, Preset::kSlow,
    Preset::kVeryslow};

constexpr int speed_rank(Preset p) { return static_cast<int>(p); }

std::string_view preset_name(Preset p);

// Throws ValidationError on unknown names.
Preset preset_from_name(std::string_view name);

// One (preset, bitrate) pair. index_j is the row-major position in the
// owning grid: j = preset_index * |bitrates| + bitrate_index.
struct OperatingPoint {
  Preset preset = Preset::kUltrafast;
  int bitrate_kbps = 0;
  int index_j = 0;

  bool operator==(const OperatingPoint&) const = default;
};

// The full preset x bitrate grid. Points are stored preset-major so that
// index_j is deterministic across runs.
struct OperatingGrid {
  std::vector<Preset> presets;
  std::vector<int> bitrates_kbps;
  std::vector<OperatingPoint> points;

  int size() const { return static_cast<int>(points.size()); }

  const OperatingPoint& point_at(int j) const { return points.at(j); }

  // Index of (preset, bitrate) in this grid, or nullopt if absent.
  std::optional<int> index_of(Preset preset, int bitrate_kbps) const;

  bool operator==(const OperatingGrid&) const = default;
};

// Validates both lists (non-empty, positive bitrates, no duplicates) and
// assigns row-major indices 0..M-1.
OperatingGrid build_operating_grid(const std::vector<Preset>& presets,
                                   const std::vector<int>& bitrates_kbps);

// Per-segment features extracted from the ingest stream's headers and
// metadata. Counts and QP averages are stored as doubles; categorical
// color fields use small integer codes:
//   color_range:     0 unspecified, 1 limited (tv), 2 full (pc)
//   color_space placeholders follow the usual codec enumerations:
//   color_space:     0 unspecified, 1 bt709, 5 bt470bg, 6 smpte170m, 9 bt2020
//   color_primaries: 0 unspecified, 1 bt709, 5 bt470bg, 6 smpte170m, 9 bt2020
//   color_transfer:  0 unspecified, 1 bt709, 8 linear, 16 smpte2084
struct SegmentFeatures {
  std::string segment_id;
  double duration_s = 2.0;

  double pict_type_b = 0;  // number of B frames
  double pict_type_p = 0;  // number of P frames
  double i_mb = 0;         // I macroblocks
  double p_mb = 0;         // P macroblocks
  double b_mb = 0;         // B macroblocks
  double s_mb = 0;         // S macroblocks (as reported by the extractor)
  double mb_16x16 = 0;
  double mb_16x8 = 0;
  double mb_8x16 = 0;
  double mb_8x8 = 0;
  double mb_4x4 = 0;
  double sar = 1.0;           // sample aspect ratio
  double skip_ratio_b = 0;    // skipped B blocks / all B blocks, in [0,1]
  double skip_ratio_p = 0;    // skipped P blocks / all P blocks, in [0,1]
  double avg_qp_y_p = 0;
  double avg_qp_y_b = 0;
  double avg_qp_y_i = 0;
  double mv_count = 0;        // number of motion vectors
  double mv_mean = 0;         // mean motion-vector magnitude
  int color_range = 0;
  int color_space = 0;
  int color_primaries = 0;
  int color_transfer = 0;
  int width = 0;
  int height = 0;

  bool operator==(const SegmentFeatures&) const = default;
};

// Throws ValidationError when an invariant is violated (negative counts,
// ratios outside [0,1], non-positive dimensions or duration).
void validate(const SegmentFeatures& f);

inline constexpr int kNumFeatures = 25;

// Static description of one feature column: name, default usage flags and
// accessors into SegmentFeatures.
struct FeatureInfo {
  const char* name;
  bool time_default;  // used by the transcoding-time regressor
  bool rd_default;    // used by the R-D classifier
  double (*get)(const SegmentFeatures&);
  void (*set)(SegmentFeatures&, double);
};

const std::array<FeatureInfo, kNumFeatures>& feature_schema();

// Index of a feature column by name, or -1.
int feature_index(std::string_view name);

// Which features feed which predictor. Defaults mirror the extractor's
// usage table: 20 features for time, 11 for R-D.
struct FeatureMask {
  std::array<bool, kNumFeatures> use_for_time{};
  std::array<bool, kNumFeatures> use_for_rd{};

  static FeatureMask defaults();

  std::vector<int> time_indices() const;
  std::vector<int> rd_indices() const;

  bool operator==(const FeatureMask&) const = default;
};

// Extracts the masked feature values in schema order.
std::vector<double> feature_vector(const SegmentFeatures& f,
                                   const std::vector<int>& indices);

// Planning budgets: total bitrate and total transcoding time for one
// sequence of segments. Both inequalities are closed (totals may equal
// the threshold).
struct Budgets {
  double rate_threshold_kbps = 0;
  double time_threshold_s = 0;

  bool operator==(const Budgets&) const = default;
};

// Throws ValidationError unless both thresholds are strictly positive.
void validate(const Budgets& b);

// Time budget for a live sequence: every segment must be transcoded within
// its own duration minus the per-segment prediction/optimization overhead.
// Returns num_segments * (segment_duration_s - overhead_s).
double derive_time_threshold(int num_segments, double segment_duration_s,
                             double overhead_s);

}  // namespace tcplan

#endif  // TCPLAN_CORE_HPP_
