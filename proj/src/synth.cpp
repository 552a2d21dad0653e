#include "tcplan/synth.hpp"

#include <algorithm>
#include <cmath>

#include "tcplan/rng.hpp"

namespace tcplan {

namespace {

// Slowdown of each preset relative to ultrafast. Gaps stay above the
// +/-3% per-preset noise so the speed ordering is strict per segment.
constexpr std::array<double, kNumPresets> kSpeedMultiplier = {1.0, 1.5, 2.2,
                                                              4.6, 5.4};

// Quality bonus of slower presets at equal bitrate, in dB, with
// diminishing returns toward veryslow.
constexpr std::array<double, kNumPresets> kQualityOffsetDb = {0.0, 0.8, 1.5,
                                                              2.1, 2.6};

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

const Archetype& archetype_by_name(const std::string& name) {
  for (const Archetype& a : kArchetypes) {
    if (name == a.name) return a;
  }
  throw ValidationError("synth: unknown archetype '" + name + "'");
}

}  // namespace

double true_time(const SyntheticSegment& seg, Preset preset, int bitrate_kbps) {
  const int p = speed_rank(preset);
  return seg.time_base_s[p] + seg.time_slope_s_per_kbps[p] * bitrate_kbps;
}

SynthCorpus gen_corpus(const GenParams& params) {
  if (params.num_segments < 1) {
    throw ValidationError("synth: num_segments must be at least 1");
  }
  if (params.bitrates_kbps.size() < 2) {
    throw ValidationError("synth: need at least two bitrates");
  }
  const bool mixed = params.archetype == "mixed";
  if (!mixed) archetype_by_name(params.archetype);  // validate early

  SynthCorpus corpus;
  corpus.bitrates_kbps = params.bitrates_kbps;
  corpus.segments.reserve(params.num_segments);

  for (int s = 0; s < params.num_segments; ++s) {
    Rng rng(Rng::mix(params.seed, static_cast<std::uint64_t>(s)));
    const Archetype& arch =
        mixed ? kArchetypes[s % kArchetypes.size()]
              : archetype_by_name(params.archetype);
    const double c = std::clamp(
        arch.complexity_center + rng.uniform(-0.04, 0.04), 0.06, 0.96);

    SyntheticSegment seg;
    seg.complexity = c;

    // Time ground truth: time = base(c) * multiplier_p * noise_p * g(r)
    // with g(r) = 0.86 + 0.18 * r / 6000, folded into a linear form.
    const double base_c = 0.24 + 0.44 * c;
    for (int p = 0; p < kNumPresets; ++p) {
      const double noise = 1.0 + rng.uniform(-0.03, 0.03);
      const double scale = base_c * kSpeedMultiplier[p] * noise;
      seg.time_base_s[p] = scale * 0.86;
      seg.time_slope_s_per_kbps[p] = scale * 0.18 / 6000.0;
    }

    // Quality ground truth: psnr = a_p * ln(r) + b_p anchored at 200 kbps.
    const double a_c = 2.0 + 1.5 * c;
    const double psnr_at_200 = 37.0 - 8.0 * c;
    for (int p = 0; p < kNumPresets; ++p) {
      const double a_p = a_c * (1.0 + 0.02 * p);
      const double b_noise = rng.uniform(-0.15, 0.15);
      seg.true_curves[p].a = a_p;
      seg.true_curves[p].b =
          psnr_at_200 + kQualityOffsetDb[p] + b_noise - a_p * std::log(200.0);
    }

    // Features derived from the latent complexity, with bounded noise so
    // the monotone links stay intact.
    SegmentFeatures& f = seg.features;
    f.segment_id = std::string(arch.name) + "_" + std::to_string(s);
    f.duration_s = params.duration_s;
    const bool hd = (s % 3 != 0);
    f.width = hd ? 1920 : 1280;
    f.height = hd ? 1080 : 720;
    const double frames = 60.0 * params.duration_s / 2.0;
    f.pict_type_b = std::floor(frames * (0.30 + 0.40 * c) + rng.uniform(0, 2));
    f.pict_type_p = std::floor(frames * (0.55 - 0.15 * c) + rng.uniform(0, 2));
    const double mb_per_frame = (f.width / 16.0) * (f.height / 16.0);
    const double total_mb = mb_per_frame * frames;
    f.i_mb = std::floor(total_mb * (0.04 + 0.05 * c) * (1 + rng.uniform(-0.05, 0.05)));
    f.p_mb = std::floor(total_mb * (0.50 - 0.10 * c) * (1 + rng.uniform(-0.05, 0.05)));
    f.b_mb = std::floor(total_mb * (0.25 + 0.10 * c) * (1 + rng.uniform(-0.05, 0.05)));
    f.s_mb = std::floor(total_mb * 0.02 * (1 + rng.uniform(-0.05, 0.05)));
    f.mb_16x16 = std::floor(total_mb * (0.55 - 0.25 * c) * (1 + rng.uniform(-0.05, 0.05)));
    f.mb_16x8 = std::floor(total_mb * 0.12 * (1 + rng.uniform(-0.05, 0.05)));
    f.mb_8x16 = std::floor(total_mb * 0.12 * (1 + rng.uniform(-0.05, 0.05)));
    f.mb_8x8 = std::floor(total_mb * (0.10 + 0.10 * c) * (1 + rng.uniform(-0.05, 0.05)));
    f.mb_4x4 = std::floor(total_mb * (0.05 + 0.15 * c) * (1 + rng.uniform(-0.05, 0.05)));
    f.sar = 1.0;
    f.skip_ratio_b = clamp01(0.70 - 0.55 * c + rng.uniform(-0.02, 0.02));
    f.skip_ratio_p = clamp01(0.60 - 0.45 * c + rng.uniform(-0.02, 0.02));
    f.avg_qp_y_p = 26.0 + 12.0 * c + rng.uniform(-0.5, 0.5);
    f.avg_qp_y_b = f.avg_qp_y_p + 1.5;
    f.avg_qp_y_i = f.avg_qp_y_p - 2.5;
    f.mv_count = std::floor((120000.0 + 500000.0 * c) * (1 + rng.uniform(-0.03, 0.03)));
    f.mv_mean = 840000.0 * c * (1 + rng.uniform(-0.03, 0.03));
    f.color_range = 1;
    f.color_space = hd ? 1 : 6;
    f.color_primaries = hd ? 1 : 6;
    f.color_transfer = 1;

    // Measured tables: one time row per (preset, bitrate), one sampled
    // curve per preset. Sampling noise is kept below the preset quality
    // gaps so sampled curves stay increasing and preset-ordered.
    for (int p = 0; p < kNumPresets; ++p) {
      const Preset preset = static_cast<Preset>(p);
      RdRecord record;
      record.segment_index = s;
      record.preset = preset;
      record.curve.bitrates_kbps = params.bitrates_kbps;
      for (int r : params.bitrates_kbps) {
        TimeRow row;
        row.features = f;
        row.preset = preset;
        row.target_bitrate_kbps = r;
        row.transcode_time_s = true_time(seg, preset, r);
        corpus.time_rows.push_back(std::move(row));

        record.curve.psnr_db.push_back(eval_curve(seg.true_curves[p], r) +
                                       rng.uniform(-0.05, 0.05));
      }
      corpus.rd_records.push_back(std::move(record));
    }

    corpus.segments.push_back(std::move(seg));
  }
  return corpus;
}

}  // namespace tcplan
