#include "tcplan/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tcplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Totals accumulated in segment order so that equal selections produce
// bit-identical sums across solvers.
void fill_totals(const PlanningInstance& inst, const std::vector<int>& choice,
                 Solution& out) {
  out.total_utility = 0;
  out.total_rate = 0;
  out.total_time = 0;
  for (int i = 0; i < inst.num_segments; ++i) {
    out.total_utility += inst.utility[i][choice[i]];
    out.total_rate += inst.rate[i][choice[i]];
    out.total_time += inst.time[i][choice[i]];
  }
}

void fill_min_totals(const PlanningInstance& inst, Solution& out) {
  double min_rate = 0, min_time = 0;
  for (int i = 0; i < inst.num_segments; ++i) {
    min_rate += *std::min_element(inst.rate[i].begin(), inst.rate[i].end());
    min_time += *std::min_element(inst.time[i].begin(), inst.time[i].end());
  }
  out.min_total_rate = min_rate;
  out.min_total_time = min_time;
}

}  // namespace

void validate(const PlanningInstance& inst) {
  if (inst.num_segments < 1 || inst.num_points < 1) {
    throw ValidationError("instance: needs at least one segment and one point");
  }
  auto check_shape = [&](const std::vector<std::vector<double>>& m,
                         const char* name) {
    if (static_cast<int>(m.size()) != inst.num_segments) {
      throw ValidationError(std::string("instance: bad row count in ") + name);
    }
    for (const auto& row : m) {
      if (static_cast<int>(row.size()) != inst.num_points) {
        throw ValidationError(std::string("instance: bad column count in ") +
                              name);
      }
    }
  };
  check_shape(inst.utility, "utility");
  check_shape(inst.rate, "rate");
  check_shape(inst.time, "time");
  for (int i = 0; i < inst.num_segments; ++i) {
    for (int j = 0; j < inst.num_points; ++j) {
      if (!std::isfinite(inst.utility[i][j])) {
        throw ValidationError("instance: utility must be finite");
      }
      if (inst.rate[i][j] <= 0 || inst.time[i][j] <= 0) {
        throw ValidationError("instance: rates and times must be positive");
      }
    }
  }
}

PlanningInstance build_instance(
    const std::vector<SegmentFeatures>& segments, const OperatingGrid& grid,
    const std::map<Preset, TimeModel>& time_models,
    const std::map<Preset, ClusterModel>& cluster_models,
    const std::map<Preset, RDClassModel>& rd_classifiers) {
  if (segments.empty()) throw ValidationError("build_instance: no segments");
  for (Preset p : grid.presets) {
    if (!time_models.count(p) || !cluster_models.count(p) ||
        !rd_classifiers.count(p)) {
      throw ValidationError(std::string("build_instance: missing model for preset ") +
                            std::string(preset_name(p)));
    }
  }

  PlanningInstance inst;
  inst.num_segments = static_cast<int>(segments.size());
  inst.num_points = grid.size();
  inst.grid = grid;
  inst.utility.assign(inst.num_segments,
                      std::vector<double>(inst.num_points, 0.0));
  inst.rate = inst.utility;
  inst.time = inst.utility;

  for (int i = 0; i < inst.num_segments; ++i) {
    for (Preset p : grid.presets) {
      const ClusterModel& clusters = cluster_models.at(p);
      const int cls = classify_rd(rd_classifiers.at(p), segments[i]);
      if (cls < 0 || cls >= static_cast<int>(clusters.fitted.size())) {
        throw ValidationError("build_instance: class id outside cluster model");
      }
      const LogCurve& curve = clusters.fitted[cls];
      const TimeModel& tm = time_models.at(p);
      for (int r : grid.bitrates_kbps) {
        const int j = *grid.index_of(p, r);
        inst.utility[i][j] = eval_curve(curve, r);
        inst.rate[i][j] = static_cast<double>(r);
        inst.time[i][j] = predict_time(tm, segments[i], r);
      }
    }
  }
  return inst;
}

Solution solve_bruteforce(const PlanningInstance& inst, const Budgets& budgets) {
  validate(inst);
  validate(budgets);

  const double space = std::pow(static_cast<double>(inst.num_points),
                                static_cast<double>(inst.num_segments));
  if (space > 1e7) {
    throw ValidationError("bruteforce: search space exceeds 1e7 assignments");
  }

  const int L = inst.num_segments;
  const int M = inst.num_points;
  Solution best;
  best.status = SolveStatus::kInfeasible;
  fill_min_totals(inst, best);

  std::vector<int> choice(L, 0);
  long explored = 0;
  bool done = false;
  while (!done) {
    ++explored;
    double u = 0, r = 0, t = 0;
    for (int i = 0; i < L; ++i) {
      u += inst.utility[i][choice[i]];
      r += inst.rate[i][choice[i]];
      t += inst.time[i][choice[i]];
    }
    if (r <= budgets.rate_threshold_kbps && t <= budgets.time_threshold_s) {
      // Lexicographic enumeration order: a strict improvement keeps the
      // smallest maximizer.
      if (best.status == SolveStatus::kInfeasible || u > best.total_utility) {
        best.status = SolveStatus::kOptimal;
        best.choice = choice;
        best.total_utility = u;
        best.total_rate = r;
        best.total_time = t;
      }
    }
    // Odometer increment.
    int pos = L - 1;
    while (pos >= 0 && choice[pos] == M - 1) {
      choice[pos] = 0;
      --pos;
    }
    if (pos < 0) {
      done = true;
    } else {
      ++choice[pos];
    }
  }
  best.nodes_explored = explored;
  return best;
}

double bound_upper(const PlanningInstance& inst, const Budgets& budgets,
                   const std::vector<int>& prefix) {
  validate(inst);
  if (static_cast<int>(prefix.size()) > inst.num_segments) {
    throw ValidationError("bound_upper: prefix longer than instance");
  }
  double u = 0, r = 0, t = 0;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    u += inst.utility[i][prefix[i]];
    r += inst.rate[i][prefix[i]];
    t += inst.time[i][prefix[i]];
  }
  const double slack_r = budgets.rate_threshold_kbps - r;
  const double slack_t = budgets.time_threshold_s - t;
  if (slack_r < 0 || slack_t < 0) return -kInf;

  for (int i = static_cast<int>(prefix.size()); i < inst.num_segments; ++i) {
    double best = -kInf;
    for (int j = 0; j < inst.num_points; ++j) {
      if (inst.rate[i][j] <= slack_r && inst.time[i][j] <= slack_t) {
        best = std::max(best, inst.utility[i][j]);
      }
    }
    if (best == -kInf) return -kInf;
    u += best;
  }
  return u;
}

Solution greedy_incumbent(const PlanningInstance& inst, const Budgets& budgets) {
  validate(inst);
  validate(budgets);

  const int L = inst.num_segments;
  Solution sol;
  fill_min_totals(inst, sol);

  std::vector<int> choice;
  choice.reserve(L);
  double rem_r = budgets.rate_threshold_kbps;
  double rem_t = budgets.time_threshold_s;
  for (int i = 0; i < L; ++i) {
    const double share_r = rem_r / static_cast<double>(L - i);
    const double share_t = rem_t / static_cast<double>(L - i);
    int pick = -1;
    for (int j = 0; j < inst.num_points; ++j) {
      if (inst.rate[i][j] > share_r || inst.time[i][j] > share_t) continue;
      if (pick < 0 || inst.utility[i][j] > inst.utility[i][pick]) pick = j;
    }
    if (pick < 0) {
      sol.status = SolveStatus::kInfeasible;  // stuck, not proven infeasible
      return sol;
    }
    choice.push_back(pick);
    rem_r -= inst.rate[i][pick];
    rem_t -= inst.time[i][pick];
  }

  sol.choice = std::move(choice);
  fill_totals(inst, sol.choice, sol);
  sol.status = SolveStatus::kOptimal;
  return sol;
}

namespace {

// One linear piece of a segment's concave utility-versus-cost envelope.
struct HullEdge {
  double delta_cost = 0;
  double delta_utility = 0;
  double efficiency = 0;  // delta_utility / delta_cost
};

// Relaxation of one resource dimension: per segment, the upper concave
// envelope of (cost, utility); across segments, envelope edges merged by
// descending efficiency give the LP optimum of the multiple-choice
// knapsack on that single resource.
struct HullRelaxation {
  std::vector<double> base_cost_suffix;     // cheapest completion cost
  std::vector<double> base_utility_suffix;  // its envelope utility
  std::vector<std::vector<HullEdge>> edges_by_depth;

  void build(const std::vector<std::vector<double>>& cost,
             const std::vector<std::vector<double>>& utility) {
    const int num_segments = static_cast<int>(cost.size());
    const int num_points = static_cast<int>(cost[0].size());

    std::vector<std::vector<HullEdge>> per_segment(num_segments);
    std::vector<double> base_cost(num_segments), base_utility(num_segments);
    for (int i = 0; i < num_segments; ++i) {
      std::vector<int> idx(num_points);
      for (int j = 0; j < num_points; ++j) idx[j] = j;
      std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (cost[i][a] != cost[i][b]) return cost[i][a] < cost[i][b];
        return utility[i][a] > utility[i][b];
      });
      // Concave increasing chain from the cheapest point. The chain is an
      // upper envelope of every (cost, utility) point, so the greedy walk
      // below never undercuts an integer completion. The cheapest point
      // stays as the base vertex; without it the bound could report
      // infeasible where completions exist.
      std::vector<std::pair<double, double>> hull;
      for (int j : idx) {
        const double c = cost[i][j];
        const double u = utility[i][j];
        if (!hull.empty() &&
            (c == hull.back().first || u <= hull.back().second)) {
          continue;  // no utility gain for the extra cost
        }
        while (hull.size() >= 2) {
          const auto& [c1, u1] = hull[hull.size() - 2];
          const auto& [c2, u2] = hull[hull.size() - 1];
          // Drop the middle vertex when it lies on or under the chord.
          if ((u2 - u1) * (c - c1) <= (u - u1) * (c2 - c1)) {
            hull.pop_back();
          } else {
            break;
          }
        }
        hull.emplace_back(c, u);
      }
      base_cost[i] = hull[0].first;
      base_utility[i] = hull[0].second;
      for (std::size_t e = 1; e < hull.size(); ++e) {
        HullEdge edge;
        edge.delta_cost = hull[e].first - hull[e - 1].first;
        edge.delta_utility = hull[e].second - hull[e - 1].second;
        edge.efficiency = edge.delta_utility / edge.delta_cost;
        per_segment[i].push_back(edge);
      }
    }

    base_cost_suffix.assign(num_segments + 1, 0.0);
    base_utility_suffix.assign(num_segments + 1, 0.0);
    for (int i = num_segments - 1; i >= 0; --i) {
      base_cost_suffix[i] = base_cost_suffix[i + 1] + base_cost[i];
      base_utility_suffix[i] = base_utility_suffix[i + 1] + base_utility[i];
    }
    edges_by_depth.assign(num_segments + 1, {});
    for (int d = num_segments - 1; d >= 0; --d) {
      edges_by_depth[d] = edges_by_depth[d + 1];
      edges_by_depth[d].insert(edges_by_depth[d].end(), per_segment[d].begin(),
                               per_segment[d].end());
      std::stable_sort(edges_by_depth[d].begin(), edges_by_depth[d].end(),
                       [](const HullEdge& a, const HullEdge& b) {
                         return a.efficiency > b.efficiency;
                       });
    }
  }

  // Upper bound on the utility of segments [depth, L) spending at most
  // `slack` of this resource.
  double bound(int depth, double slack) const {
    double extra = slack - base_cost_suffix[depth];
    if (extra < 0) return -kInf;
    double total = base_utility_suffix[depth];
    for (const HullEdge& edge : edges_by_depth[depth]) {
      if (edge.delta_cost <= extra) {
        extra -= edge.delta_cost;
        total += edge.delta_utility;
      } else {
        total += edge.efficiency * extra;
        break;
      }
    }
    return total;
  }
};

// Depth-first search state for the exact solver.
struct BbSearch {
  const PlanningInstance& inst;
  const Budgets& budgets;
  // Per segment: point indices ordered by descending utility (ascending
  // index on ties).
  std::vector<std::vector<int>> order;
  // Suffix sums of per-segment minimum rate/time, for feasibility pruning.
  std::vector<double> min_rate_suffix;
  std::vector<double> min_time_suffix;
  HullRelaxation rate_relaxation;
  HullRelaxation time_relaxation;

  std::vector<int> path;
  std::vector<int> best_choice;
  double best_utility = -kInf;
  bool found = false;
  long nodes = 0;

  explicit BbSearch(const PlanningInstance& i, const Budgets& b)
      : inst(i), budgets(b) {}

  // Optimistic completion value for segments [depth, L) given budget slack:
  // each remaining segment contributes its best individually fitting point.
  // Scanning in utility order makes the first fitting point the maximum.
  double optimistic_suffix(int depth, double slack_r, double slack_t) const {
    double total = 0;
    for (int i = depth; i < inst.num_segments; ++i) {
      double best = -kInf;
      for (int j : order[i]) {
        if (inst.rate[i][j] <= slack_r && inst.time[i][j] <= slack_t) {
          best = inst.utility[i][j];
          break;
        }
      }
      if (best == -kInf) return -kInf;
      total += best;
    }
    return total;
  }

  bool improves(double utility, const std::vector<int>& choice) const {
    if (!found) return true;
    if (utility > best_utility) return true;
    return utility == best_utility &&
           std::lexicographical_compare(choice.begin(), choice.end(),
                                        best_choice.begin(), best_choice.end());
  }

  void dfs(int depth, double u, double r, double t) {
    ++nodes;
    if (depth == inst.num_segments) {
      if (improves(u, path)) {
        found = true;
        best_utility = u;
        best_choice = path;
      }
      return;
    }

    const double slack_r = budgets.rate_threshold_kbps - r;
    const double slack_t = budgets.time_threshold_s - t;
    for (int j : order[depth]) {
      const double jr = inst.rate[depth][j];
      const double jt = inst.time[depth][j];
      if (jr + min_rate_suffix[depth + 1] > slack_r) continue;
      if (jt + min_time_suffix[depth + 1] > slack_t) continue;

      const double child_u = u + inst.utility[depth][j];
      if (found) {
        // Three admissible relaxations; the minimum prunes hardest.
        double suffix = rate_relaxation.bound(depth + 1, slack_r - jr);
        suffix = std::min(suffix,
                          time_relaxation.bound(depth + 1, slack_t - jt));
        if (suffix > -kInf) {
          suffix = std::min(
              suffix, optimistic_suffix(depth + 1, slack_r - jr, slack_t - jt));
        }
        // Slightly loose cut so float rounding can never discard an
        // optimal or tied completion (ties matter for the lexicographic
        // contract).
        const double eps = 1e-9 * (1.0 + std::fabs(best_utility));
        if (child_u + suffix + eps < best_utility) continue;
      }
      path.push_back(j);
      dfs(depth + 1, child_u, r + jr, t + jt);
      path.pop_back();
    }
  }
};

}  // namespace

Solution solve_bb(const PlanningInstance& inst, const Budgets& budgets) {
  validate(inst);
  validate(budgets);

  const int L = inst.num_segments;
  const int M = inst.num_points;

  BbSearch search(inst, budgets);
  search.order.resize(L);
  for (int i = 0; i < L; ++i) {
    search.order[i].resize(M);
    for (int j = 0; j < M; ++j) search.order[i][j] = j;
    std::sort(search.order[i].begin(), search.order[i].end(),
              [&](int a, int b) {
                if (inst.utility[i][a] != inst.utility[i][b]) {
                  return inst.utility[i][a] > inst.utility[i][b];
                }
                return a < b;
              });
  }
  search.min_rate_suffix.assign(L + 1, 0.0);
  search.min_time_suffix.assign(L + 1, 0.0);
  for (int i = L - 1; i >= 0; --i) {
    search.min_rate_suffix[i] =
        search.min_rate_suffix[i + 1] +
        *std::min_element(inst.rate[i].begin(), inst.rate[i].end());
    search.min_time_suffix[i] =
        search.min_time_suffix[i + 1] +
        *std::min_element(inst.time[i].begin(), inst.time[i].end());
  }
  search.rate_relaxation.build(inst.rate, inst.utility);
  search.time_relaxation.build(inst.time, inst.utility);

  // Warm start. The greedy utility only tightens pruning; the final
  // incumbent still comes from the exhaustive search below.
  const Solution warm = greedy_incumbent(inst, budgets);
  if (warm.status == SolveStatus::kOptimal) {
    search.found = true;
    search.best_utility = warm.total_utility;
    search.best_choice = warm.choice;
  }

  search.path.reserve(L);
  search.dfs(0, 0.0, 0.0, 0.0);

  Solution sol;
  sol.nodes_explored = search.nodes;
  fill_min_totals(inst, sol);
  if (!search.found) {
    sol.status = SolveStatus::kInfeasible;
    return sol;
  }
  sol.status = SolveStatus::kOptimal;
  sol.choice = search.best_choice;
  fill_totals(inst, sol.choice, sol);
  return sol;
}

}  // namespace tcplan
