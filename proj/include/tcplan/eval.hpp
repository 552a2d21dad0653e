#ifndef TCPLAN_EVAL_HPP_
#define TCPLAN_EVAL_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tcplan/core.hpp"
#include "tcplan/rdmodel.hpp"
#include "tcplan/solver.hpp"

namespace tcplan {

// Fixed-configuration reference plan: every segment gets the same
// (preset, bitrate) point. Totals come from the instance matrices; the
// status reflects budget feasibility when budgets are given. Throws
// ValidationError when the point is not in the grid.
Solution baseline_plan(const PlanningInstance& instance, Preset preset,
                       int per_segment_bitrate_kbps,
                       const std::optional<Budgets>& budgets = std::nullopt);

struct PlanTotals {
  double total_utility = 0;
  double total_rate = 0;
  double total_time = 0;
};

// Recomputes the solution's totals from the instance and cross-checks
// them against the stored values (tolerance 1e-9). A mismatch or an
// out-of-range choice raises ValidationError.
PlanTotals summarize_plan(const Solution& solution,
                          const PlanningInstance& instance);

// Bjontegaard delta rate between two quality curves: average percent
// bitrate difference of `test` versus `anchor` at equal PSNR, negative
// when the test curve needs less rate. Cubic log10(rate)-over-PSNR fits
// integrated across the overlapping PSNR interval. Requires >= 4 points
// per curve and overlapping PSNR ranges.
double bd_rate(const RDCurve& anchor, const RDCurve& test);

// One sweep row: planner and baseline aggregates for a single budget
// value, plus the histogram of presets chosen in feasible runs.
struct SweepRow {
  double budget = 0;
  int runs = 0;
  int feasible = 0;
  int infeasible = 0;
  int baseline_feasible = 0;
  double mean_planner_psnr = 0;   // mean total over feasible runs
  double mean_baseline_psnr = 0;  // mean total over baseline-feasible runs
  std::array<long, kNumPresets> preset_counts{};
};

struct SweepReport {
  std::string axis;  // "rate_budget_kbps" or "time_budget_s"
  int segments_per_run = 0;
  int runs = 0;
  std::vector<SweepRow> rows;
};

struct SweepParams {
  std::vector<double> budgets;             // axis values
  double fixed_rate_budget_kbps = 30000;   // held fixed in time sweeps
  double fixed_time_budget_s = 11;         // held fixed in rate sweeps
  int runs = 877;
  std::uint64_t seed = 0;
  int segments_per_run = 6;
  Preset baseline_preset = Preset::kVeryfast;
};

// Sweeps the total-rate budget. Each run draws segments_per_run distinct
// segments (the draw depends only on seed and run index, so every budget
// sees identical samples), solves, and compares against the baseline
// preset at bitrate budget/L. Infeasible runs are counted and excluded
// from the means.
SweepReport sweep_rate_budget(const std::vector<SegmentFeatures>& corpus,
                              const OperatingGrid& grid, const ModelSet& models,
                              const SweepParams& params);

// Sweeps the total-time budget with the rate budget fixed, recording the
// preset distribution of the planner's choices per budget value.
SweepReport sweep_time_budget(const std::vector<SegmentFeatures>& corpus,
                              const OperatingGrid& grid, const ModelSet& models,
                              const SweepParams& params);

}  // namespace tcplan

#endif  // TCPLAN_EVAL_HPP_
