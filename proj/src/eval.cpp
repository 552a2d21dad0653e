#include "tcplan/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tcplan/rng.hpp"

namespace tcplan {

Solution baseline_plan(const PlanningInstance& instance, Preset preset,
                       int per_segment_bitrate_kbps,
                       const std::optional<Budgets>& budgets) {
  validate(instance);
  const std::optional<int> j =
      instance.grid.index_of(preset, per_segment_bitrate_kbps);
  if (!j) {
    throw ValidationError("baseline: (" + std::string(preset_name(preset)) +
                          ", " + std::to_string(per_segment_bitrate_kbps) +
                          " kbps) is not an operating point of the grid");
  }

  Solution sol;
  sol.choice.assign(instance.num_segments, *j);
  for (int i = 0; i < instance.num_segments; ++i) {
    sol.total_utility += instance.utility[i][*j];
    sol.total_rate += instance.rate[i][*j];
    sol.total_time += instance.time[i][*j];
  }
  sol.status = SolveStatus::kOptimal;
  if (budgets && (sol.total_rate > budgets->rate_threshold_kbps ||
                  sol.total_time > budgets->time_threshold_s)) {
    sol.status = SolveStatus::kInfeasible;
  }
  return sol;
}

PlanTotals summarize_plan(const Solution& solution,
                          const PlanningInstance& instance) {
  validate(instance);
  if (static_cast<int>(solution.choice.size()) != instance.num_segments) {
    throw ValidationError("summarize: choice length does not match instance");
  }
  PlanTotals totals;
  for (int i = 0; i < instance.num_segments; ++i) {
    const int j = solution.choice[i];
    if (j < 0 || j >= instance.num_points) {
      throw ValidationError("summarize: choice index out of range");
    }
    totals.total_utility += instance.utility[i][j];
    totals.total_rate += instance.rate[i][j];
    totals.total_time += instance.time[i][j];
  }
  if (std::fabs(totals.total_utility - solution.total_utility) > 1e-9 ||
      std::fabs(totals.total_rate - solution.total_rate) > 1e-9 ||
      std::fabs(totals.total_time - solution.total_time) > 1e-9) {
    throw ValidationError("summarize: stored totals disagree with recomputation");
  }
  return totals;
}

namespace {

// Least-squares cubic y = c0 + c1*u + c2*u^2 + c3*u^3 with u = x - shift,
// solved by normal equations in extended precision.
struct Cubic {
  long double shift = 0;
  std::array<long double, 4> coef{};

  long double integral(long double lo, long double hi) const {
    auto antiderivative = [&](long double x) {
      const long double u = x - shift;
      return coef[0] * u + coef[1] * u * u / 2.0L + coef[2] * u * u * u / 3.0L +
             coef[3] * u * u * u * u / 4.0L;
    };
    return antiderivative(hi) - antiderivative(lo);
  }
};

Cubic fit_cubic(const std::vector<double>& x, const std::vector<double>& y) {
  Cubic fit;
  const std::size_t n = x.size();
  long double mean = 0;
  for (double v : x) mean += v;
  fit.shift = mean / static_cast<long double>(n);

  // Normal equations A c = b over the shifted basis.
  long double pow_sum[7] = {0};
  long double rhs[4] = {0};
  for (std::size_t i = 0; i < n; ++i) {
    const long double u = x[i] - fit.shift;
    long double up = 1;
    for (int d = 0; d <= 6; ++d) {
      pow_sum[d] += up;
      if (d <= 3) rhs[d] += up * y[i];
      up *= u;
    }
  }
  long double a[4][5];
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) a[r][c] = pow_sum[r + c];
    a[r][4] = rhs[r];
  }
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::fabs(static_cast<double>(a[r][col])) >
          std::fabs(static_cast<double>(a[pivot][col]))) {
        pivot = r;
      }
    }
    std::swap(a[col], a[pivot]);
    if (a[col][col] == 0) {
      throw ValidationError("bd_rate: degenerate curve fit");
    }
    for (int r = col + 1; r < 4; ++r) {
      const long double factor = a[r][col] / a[col][col];
      for (int c = col; c < 5; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  for (int r = 3; r >= 0; --r) {
    long double acc = a[r][4];
    for (int c = r + 1; c < 4; ++c) acc -= a[r][c] * fit.coef[c];
    fit.coef[r] = acc / a[r][r];
  }
  return fit;
}

Cubic fit_log_rate_over_psnr(const RDCurve& curve) {
  std::vector<double> log_rate;
  log_rate.reserve(curve.bitrates_kbps.size());
  for (int r : curve.bitrates_kbps) {
    log_rate.push_back(std::log10(static_cast<double>(r)));
  }
  return fit_cubic(curve.psnr_db, log_rate);
}

}  // namespace

double bd_rate(const RDCurve& anchor, const RDCurve& test) {
  validate(anchor);
  validate(test);
  if (anchor.bitrates_kbps.size() < 4 || test.bitrates_kbps.size() < 4) {
    throw ValidationError("bd_rate: each curve needs at least 4 points");
  }

  const auto range = [](const RDCurve& c) {
    const auto [lo, hi] = std::minmax_element(c.psnr_db.begin(), c.psnr_db.end());
    return std::pair<double, double>(*lo, *hi);
  };
  const auto [a_lo, a_hi] = range(anchor);
  const auto [t_lo, t_hi] = range(test);
  const double lo = std::max(a_lo, t_lo);
  const double hi = std::min(a_hi, t_hi);
  if (hi <= lo) {
    throw ValidationError("bd_rate: curves share no PSNR interval");
  }

  const Cubic f_anchor = fit_log_rate_over_psnr(anchor);
  const Cubic f_test = fit_log_rate_over_psnr(test);
  const long double mean_diff =
      (f_test.integral(lo, hi) - f_anchor.integral(lo, hi)) / (hi - lo);
  return static_cast<double>(
      (std::pow(10.0L, mean_diff) - 1.0L) * 100.0L);
}

namespace {

// Shared driver for both sweep axes. Planner rows are precomputed once per
// corpus segment (the prediction of a segment does not depend on the
// budget), then each run assembles a small instance from its sample.
struct SweepContext {
  PlanningInstance all;               // one row per corpus segment
  std::vector<std::vector<int>> samples;  // per run: segment indices

  PlanningInstance instance_for(const std::vector<int>& sample) const {
    PlanningInstance inst;
    inst.num_segments = static_cast<int>(sample.size());
    inst.num_points = all.num_points;
    inst.grid = all.grid;
    for (int s : sample) {
      inst.utility.push_back(all.utility[s]);
      inst.rate.push_back(all.rate[s]);
      inst.time.push_back(all.time[s]);
    }
    return inst;
  }
};

SweepContext make_context(const std::vector<SegmentFeatures>& corpus,
                          const OperatingGrid& grid, const ModelSet& models,
                          const SweepParams& params) {
  if (params.runs < 1) throw ValidationError("sweep: runs must be at least 1");
  if (params.segments_per_run < 1 ||
      params.segments_per_run > static_cast<int>(corpus.size())) {
    throw ValidationError("sweep: segments_per_run outside corpus size");
  }
  SweepContext ctx;
  ctx.all = build_instance(corpus, grid, models);
  ctx.samples.reserve(params.runs);
  std::vector<int> indices(corpus.size());
  std::iota(indices.begin(), indices.end(), 0);
  for (int run = 0; run < params.runs; ++run) {
    Rng rng(Rng::mix(params.seed, static_cast<std::uint64_t>(run)));
    // Partial Fisher-Yates: the first L slots become the sample.
    std::vector<int> pool = indices;
    std::vector<int> sample;
    sample.reserve(params.segments_per_run);
    for (int i = 0; i < params.segments_per_run; ++i) {
      const int pick = i + rng.next_int(static_cast<int>(pool.size()) - i);
      std::swap(pool[i], pool[pick]);
      sample.push_back(pool[i]);
    }
    ctx.samples.push_back(std::move(sample));
  }
  return ctx;
}

int baseline_bitrate_for(double rate_budget, int segments_per_run,
                         const OperatingGrid& grid) {
  const double per_segment = rate_budget / segments_per_run;
  for (int r : grid.bitrates_kbps) {
    if (static_cast<double>(r) == per_segment) return r;
  }
  throw ValidationError(
      "sweep: rate budget / segments_per_run must equal a grid bitrate");
}

void accumulate_row(const SweepContext& ctx, const SweepParams& params,
                    const Budgets& budgets, int baseline_rate, SweepRow& row,
                    const OperatingGrid& grid) {
  double planner_sum = 0, baseline_sum = 0;
  for (const auto& sample : ctx.samples) {
    const PlanningInstance inst = ctx.instance_for(sample);
    const Solution planner = solve_bb(inst, budgets);
    ++row.runs;
    if (planner.status == SolveStatus::kOptimal) {
      ++row.feasible;
      planner_sum += planner.total_utility;
      for (int j : planner.choice) {
        ++row.preset_counts[speed_rank(grid.point_at(j).preset)];
      }
    } else {
      ++row.infeasible;
    }
    const Solution base =
        baseline_plan(inst, params.baseline_preset, baseline_rate, budgets);
    if (base.status == SolveStatus::kOptimal) {
      ++row.baseline_feasible;
      baseline_sum += base.total_utility;
    }
  }
  if (row.feasible > 0) row.mean_planner_psnr = planner_sum / row.feasible;
  if (row.baseline_feasible > 0) {
    row.mean_baseline_psnr = baseline_sum / row.baseline_feasible;
  }
}

}  // namespace

SweepReport sweep_rate_budget(const std::vector<SegmentFeatures>& corpus,
                              const OperatingGrid& grid, const ModelSet& models,
                              const SweepParams& params) {
  const SweepContext ctx = make_context(corpus, grid, models, params);
  SweepReport report;
  report.axis = "rate_budget_kbps";
  report.segments_per_run = params.segments_per_run;
  report.runs = params.runs;
  for (double rate_budget : params.budgets) {
    SweepRow row;
    row.budget = rate_budget;
    const Budgets budgets{rate_budget, params.fixed_time_budget_s};
    validate(budgets);
    const int baseline_rate =
        baseline_bitrate_for(rate_budget, params.segments_per_run, grid);
    accumulate_row(ctx, params, budgets, baseline_rate, row, grid);
    report.rows.push_back(row);
  }
  return report;
}

SweepReport sweep_time_budget(const std::vector<SegmentFeatures>& corpus,
                              const OperatingGrid& grid, const ModelSet& models,
                              const SweepParams& params) {
  const SweepContext ctx = make_context(corpus, grid, models, params);
  SweepReport report;
  report.axis = "time_budget_s";
  report.segments_per_run = params.segments_per_run;
  report.runs = params.runs;
  const int baseline_rate = baseline_bitrate_for(
      params.fixed_rate_budget_kbps, params.segments_per_run, grid);
  for (double time_budget : params.budgets) {
    SweepRow row;
    row.budget = time_budget;
    const Budgets budgets{params.fixed_rate_budget_kbps, time_budget};
    validate(budgets);
    accumulate_row(ctx, params, budgets, baseline_rate, row, grid);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace tcplan
