#ifndef TCPLAN_SYNTH_HPP_
#define TCPLAN_SYNTH_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tcplan/core.hpp"
#include "tcplan/gbdt.hpp"
#include "tcplan/rdmodel.hpp"

namespace tcplan {

// A generated segment with its latent complexity and the ground truth the
// feature values are derived from. Per preset, quality follows a log
// curve and transcoding time is linear in bitrate:
//   time(p, r) = time_base_s[p] + time_slope_s_per_kbps[p] * r.
// Construction guarantees: psnr strictly increasing in bitrate; at equal
// bitrate, slower presets never score below faster ones; times strictly
// increase from ultrafast to veryslow and with bitrate, all within
// (0, 4] s for two-second segments.
struct SyntheticSegment {
  SegmentFeatures features;
  double complexity = 0;  // latent, in [0,1]
  std::array<LogCurve, kNumPresets> true_curves;
  std::array<double, kNumPresets> time_base_s;
  std::array<double, kNumPresets> time_slope_s_per_kbps;
};

// Ground-truth transcoding time for one (preset, bitrate) pair.
double true_time(const SyntheticSegment& seg, Preset preset, int bitrate_kbps);

// Content archetypes mapped to complexity bands (low = static content,
// high = dense motion).
struct Archetype {
  const char* name;
  double complexity_center;
};

inline constexpr std::array<Archetype, 11> kArchetypes = {{
    {"lecture", 0.10},
    {"news", 0.16},
    {"interview", 0.24},
    {"animation", 0.32},
    {"howto", 0.40},
    {"vlog", 0.48},
    {"livemusic", 0.56},
    {"tvclip", 0.64},
    {"game", 0.72},
    {"concert", 0.80},
    {"sports", 0.91},
}};

// One measured R-D curve of the corpus: segment index into the segment
// list, the preset it was transcoded with, and the sampled curve.
struct RdRecord {
  int segment_index = 0;
  Preset preset = Preset::kUltrafast;
  RDCurve curve;
};

struct SynthCorpus {
  std::vector<SyntheticSegment> segments;
  std::vector<TimeRow> time_rows;   // one per (segment, preset, bitrate)
  std::vector<RdRecord> rd_records; // one per (segment, preset)
  std::vector<int> bitrates_kbps;
};

struct GenParams {
  std::uint64_t seed = 1;
  int num_segments = 60;
  // Archetype name, or "mixed" for a round-robin over all archetypes.
  std::string archetype = "mixed";
  std::vector<int> bitrates_kbps = {200,  400,  600,  800,  1000,
                                    2000, 3000, 4000, 5000, 6000};
  double duration_s = 2.0;
};

// Deterministic corpus generator. Same parameters produce bit-identical
// corpora.
SynthCorpus gen_corpus(const GenParams& params);

}  // namespace tcplan

#endif  // TCPLAN_SYNTH_HPP_
