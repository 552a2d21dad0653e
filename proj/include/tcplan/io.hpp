#ifndef TCPLAN_IO_HPP_
#define TCPLAN_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "tcplan/core.hpp"
#include "tcplan/eval.hpp"
#include "tcplan/gbdt.hpp"
#include "tcplan/rdmodel.hpp"
#include "tcplan/solver.hpp"
#include "tcplan/svm.hpp"

namespace tcplan {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Runtime configuration. Defaults reproduce the reference live-streaming
// setup: five presets, the ten-step bitrate ladder, six clusters, six
// segments per plan, 30000 kbps and 11 s budgets.
struct Config {
  std::vector<Preset> presets{Preset::kUltrafast, Preset::kVeryfast,
                              Preset::kFast, Preset::kSlow, Preset::kVeryslow};
  std::vector<int> bitrates_kbps{200,  400,  600,  800,  1000,
                                 2000, 3000, 4000, 5000, 6000};
  int k_clusters = 6;
  double segment_duration_s = 2.0;
  double overhead_s = 0.04;
  double rate_threshold_kbps = 30000;
  double time_threshold_s = 11;
  int planning_segments = 6;
  GbdtParams gbdt;
  double svm_c = 1.0;
  double svm_tol = 1e-3;
  int svm_max_passes = 100;
  int kmeans_max_iter = 100;
  double kmeans_tol = 1e-6;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

// Throws ValidationError for values the pipeline cannot run with.
void validate(const Config& cfg);

// Strict JSON config: unknown keys are rejected, missing keys keep their
// defaults.
Config load_config(const std::string& path);
void save_config(const std::string& path, const Config& cfg);

// ---- Measurement tables (CSV, UTF-8, '.' decimal separator) ----
//
// time table columns:
//   segment_id, duration_s, <25 feature columns>, preset,
//   target_bitrate_kbps, transcode_time_s
// rd table columns:
//   segment_id, duration_s, <25 feature columns>, preset,
//   psnr_at_<bitrate> for each grid bitrate in ascending order
//
// Loaders are strict: the header must match exactly (unknown or missing
// columns are rejected) and every value must parse and satisfy the domain
// invariants; errors name the offending column and row.

struct RdTableRow {
  SegmentFeatures features;
  Preset preset = Preset::kUltrafast;
  RDCurve curve;

  bool operator==(const RdTableRow&) const = default;
};

void write_time_table(const std::string& path, const std::vector<TimeRow>& rows);
std::vector<TimeRow> load_time_table(const std::string& path);

void write_rd_table(const std::string& path, const std::vector<RdTableRow>& rows);
std::vector<RdTableRow> load_rd_table(const std::string& path);

// ---- Model store ----
//
// Self-describing versioned JSON container with a payload checksum.
// load_models(save_models(m)) yields bit-identical predictions.
void save_models(const std::string& path, const ModelSet& models);
ModelSet load_models(const std::string& path);

// ---- Sweep reports ----
//
// CSV columns: <axis>, runs, feasible, infeasible, baseline_feasible,
// mean_planner_psnr, mean_baseline_psnr, count_<preset> x5.
void write_sweep_csv(const std::string& path, const SweepReport& report);
void write_sweep_json(const std::string& path, const SweepReport& report);

// Two-column curve file for BD-rate comparisons: bitrate_kbps, psnr_db.
RDCurve load_curve_csv(const std::string& path);
void write_curve_csv(const std::string& path, const RDCurve& curve);

}  // namespace tcplan

#endif  // TCPLAN_IO_HPP_
