#ifndef TCPLAN_SOLVER_HPP_
#define TCPLAN_SOLVER_HPP_

#include <map>
#include <vector>

#include "tcplan/core.hpp"
#include "tcplan/gbdt.hpp"
#include "tcplan/rdmodel.hpp"
#include "tcplan/svm.hpp"

namespace tcplan {

// One planning problem: pick one operating point per segment maximizing
// total predicted PSNR under total-rate and total-time budgets (a
// multiple-choice knapsack with two resource constraints).
struct PlanningInstance {
  int num_segments = 0;  // L
  int num_points = 0;    // M
  std::vector<std::vector<double>> utility;  // L x M predicted PSNR, dB
  std::vector<std::vector<double>> rate;     // L x M kbps
  std::vector<std::vector<double>> time;     // L x M seconds
  OperatingGrid grid;
};

// Throws ValidationError on shape mismatches, non-positive rates/times or
// non-finite utilities.
void validate(const PlanningInstance& instance);

enum class SolveStatus { kOptimal, kInfeasible };

struct Solution {
  std::vector<int> choice;  // operating-point index per segment
  double total_utility = 0;
  double total_rate = 0;
  double total_time = 0;
  SolveStatus status = SolveStatus::kInfeasible;
  long nodes_explored = 0;
  // Independent per-resource minima, reported as infeasibility diagnostics.
  double min_total_rate = 0;
  double min_total_time = 0;
};

// The trained artifacts of one pipeline run, keyed by preset.
struct ModelSet {
  std::map<Preset, ClusterModel> clusters;
  std::map<Preset, TimeModel> times;
  std::map<Preset, RDClassModel> classifiers;
};

// Assembles the prediction matrices for a set of segments over the grid:
// time from the per-preset regressors, utility from the centroid curve of
// the class assigned by the per-preset R-D classifier, rate from the grid.
PlanningInstance build_instance(
    const std::vector<SegmentFeatures>& segments, const OperatingGrid& grid,
    const std::map<Preset, TimeModel>& time_models,
    const std::map<Preset, ClusterModel>& cluster_models,
    const std::map<Preset, RDClassModel>& rd_classifiers);

inline PlanningInstance build_instance(
    const std::vector<SegmentFeatures>& segments, const OperatingGrid& grid,
    const ModelSet& models) {
  return build_instance(segments, grid, models.times, models.clusters,
                        models.classifiers);
}

// Exhaustive reference solver. Enumerates choice vectors in lexicographic
// order and keeps the first utility maximizer, so ties resolve to the
// lexicographically smallest vector. Guarded to M^L <= 1e7.
Solution solve_bruteforce(const PlanningInstance& instance,
                          const Budgets& budgets);

// Admissible upper bound for a partial assignment of segments
// [0, prefix.size()): prefix utility plus, per remaining segment, the best
// utility among points that individually fit the remaining budget slack.
// Returns -infinity when some remaining segment has no fitting point.
double bound_upper(const PlanningInstance& instance, const Budgets& budgets,
                   const std::vector<int>& prefix);

// Feasibility-first warm start: per segment in index order, the highest
// utility point whose rate and time fit a proportional share (remaining
// budget divided by remaining segments). Infeasible result means "stuck",
// not proven infeasibility.
Solution greedy_incumbent(const PlanningInstance& instance,
                          const Budgets& budgets);

// Exact depth-first branch and bound. Segments are explored in index
// order, points in descending-utility order; the returned solution and
// status match solve_bruteforce exactly, including the lexicographic
// tie-break.
Solution solve_bb(const PlanningInstance& instance, const Budgets& budgets);

}  // namespace tcplan

#endif  // TCPLAN_SOLVER_HPP_
