#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "tcplan/rng.hpp"
#include "tcplan/serialize.hpp"
#include "tcplan/solver.hpp"
#include "tcplan/synth.hpp"
#include "test_util.hpp"

using namespace tcplan;
using testutil::random_budgets;
using testutil::random_instance;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PlanningInstance tiny_instance(std::vector<std::vector<double>> u,
                               std::vector<std::vector<double>> r,
                               std::vector<std::vector<double>> t) {
  PlanningInstance inst;
  inst.num_segments = static_cast<int>(u.size());
  inst.num_points = static_cast<int>(u[0].size());
  inst.utility = std::move(u);
  inst.rate = std::move(r);
  inst.time = std::move(t);
  std::vector<int> bitrates;
  for (int j = 0; j < inst.num_points; ++j) bitrates.push_back(100 + j);
  inst.grid = build_operating_grid({Preset::kUltrafast}, bitrates);
  return inst;
}

// Best achievable utility completing the given prefix, by enumeration.
double best_completion(const PlanningInstance& inst, const Budgets& budgets,
                       const std::vector<int>& prefix) {
  const int L = inst.num_segments;
  const int d = static_cast<int>(prefix.size());
  double base_u = 0, base_r = 0, base_t = 0;
  for (int i = 0; i < d; ++i) {
    base_u += inst.utility[i][prefix[i]];
    base_r += inst.rate[i][prefix[i]];
    base_t += inst.time[i][prefix[i]];
  }
  double best = -kInf;
  std::vector<int> choice(L - d, 0);
  bool done = (L == d);
  if (done) {
    return (base_r <= budgets.rate_threshold_kbps &&
            base_t <= budgets.time_threshold_s)
               ? base_u
               : -kInf;
  }
  while (!done) {
    double u = base_u, r = base_r, t = base_t;
    for (int i = d; i < L; ++i) {
      u += inst.utility[i][choice[i - d]];
      r += inst.rate[i][choice[i - d]];
      t += inst.time[i][choice[i - d]];
    }
    if (r <= budgets.rate_threshold_kbps && t <= budgets.time_threshold_s) {
      best = std::max(best, u);
    }
    int pos = L - d - 1;
    while (pos >= 0 && choice[pos] == inst.num_points - 1) {
      choice[pos] = 0;
      --pos;
    }
    if (pos < 0) {
      done = true;
    } else {
      ++choice[pos];
    }
  }
  return best;
}

}  // namespace

TEST_CASE("single point fits or breaks the budget") {
  const PlanningInstance inst = tiny_instance({{40}}, {{1000}}, {{1.0}});
  const Solution fit = solve_bruteforce(inst, Budgets{1000, 2.0});
  CHECK(fit.status == SolveStatus::kOptimal);
  CHECK(fit.choice == std::vector<int>{0});
  CHECK(fit.total_utility == 40);

  const Solution broke = solve_bruteforce(inst, Budgets{999, 2.0});
  CHECK(broke.status == SolveStatus::kInfeasible);
  CHECK(broke.min_total_rate == 1000);

  const Solution bb_fit = solve_bb(inst, Budgets{1000, 2.0});
  CHECK(bb_fit.status == SolveStatus::kOptimal);
  CHECK(bb_fit.choice == fit.choice);
  const Solution bb_broke = solve_bb(inst, Budgets{999, 2.0});
  CHECK(bb_broke.status == SolveStatus::kInfeasible);
  CHECK(bb_broke.min_total_rate == 1000);
  CHECK(bb_broke.min_total_time == 1.0);
}

TEST_CASE("utility ties pick the lexicographically smallest choice") {
  const PlanningInstance inst = tiny_instance({{10, 20}, {10, 20}},
                                              {{1, 2}, {1, 2}},
                                              {{1, 1}, {1, 1}});
  const Budgets budgets{3, 10};
  const Solution brute = solve_bruteforce(inst, budgets);
  CHECK(brute.total_utility == 30);
  CHECK(brute.choice == std::vector<int>{0, 1});
  const Solution bb = solve_bb(inst, budgets);
  CHECK(bb.choice == std::vector<int>{0, 1});
  CHECK(bb.total_utility == brute.total_utility);
}

TEST_CASE("unconstrained budgets decompose into per-segment argmax") {
  Rng rng(64);
  PlanningInstance inst = random_instance(rng, 4, 6);
  inst.utility[2][1] = inst.utility[2][4];  // force one tie
  const Budgets open{kInf, kInf};
  const Solution sol = solve_bb(inst, open);
  REQUIRE(sol.status == SolveStatus::kOptimal);
  for (int i = 0; i < inst.num_segments; ++i) {
    int arg = 0;
    for (int j = 1; j < inst.num_points; ++j) {
      if (inst.utility[i][j] > inst.utility[i][arg]) arg = j;
    }
    CHECK(sol.choice[i] == arg);
  }
}

TEST_CASE("branch and bound equals brute force on 200 seeded instances") {
  Rng rng(2024);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int L = 1 + rng.next_int(5);
    const int M = 2 + rng.next_int(7);
    const PlanningInstance inst = random_instance(rng, L, M);
    const Budgets budgets = random_budgets(rng, inst);

    const Solution brute = solve_bruteforce(inst, budgets);
    const Solution bb = solve_bb(inst, budgets);
    REQUIRE(bb.status == brute.status);
    if (brute.status == SolveStatus::kOptimal) {
      ++feasible;
      REQUIRE(bb.total_utility == brute.total_utility);
      REQUIRE(bb.choice == brute.choice);
      REQUIRE(bb.total_rate == brute.total_rate);
      REQUIRE(bb.total_time == brute.total_time);
    } else {
      ++infeasible;
    }
  }
  // The budget generator must exercise both outcomes.
  CHECK(feasible > 50);
  CHECK(infeasible > 10);
}

TEST_CASE("brute force guard rejects oversized spaces") {
  Rng rng(3);
  const PlanningInstance inst = random_instance(rng, 9, 8);  // 8^9 > 1e7
  CHECK_THROWS_AS(solve_bruteforce(inst, Budgets{1e9, 1e9}), ValidationError);
}

TEST_CASE("upper bound properties") {
  Rng rng(12);
  const PlanningInstance inst = random_instance(rng, 3, 5);

  SUBCASE("empty prefix with open budgets sums per-segment maxima") {
    double sum = 0;
    for (int i = 0; i < inst.num_segments; ++i) {
      double best = inst.utility[i][0];
      for (int j = 1; j < inst.num_points; ++j) {
        best = std::max(best, inst.utility[i][j]);
      }
      sum += best;
    }
    CHECK(bound_upper(inst, Budgets{kInf, kInf}, {}) == doctest::Approx(sum));
  }

  SUBCASE("full prefix returns the assignment's exact utility") {
    const std::vector<int> prefix{1, 4, 0};
    double u = 0;
    for (int i = 0; i < 3; ++i) u += inst.utility[i][prefix[i]];
    CHECK(bound_upper(inst, Budgets{1e9, 1e9}, prefix) == doctest::Approx(u));
  }
}

TEST_CASE("upper bound is admissible on 200 seeded instances") {
  Rng rng(607);
  for (int trial = 0; trial < 200; ++trial) {
    const int L = 1 + rng.next_int(4);
    const int M = 2 + rng.next_int(5);
    const PlanningInstance inst = random_instance(rng, L, M);
    const Budgets budgets = random_budgets(rng, inst);

    std::vector<int> prefix;
    const int depth = rng.next_int(L + 1);
    for (int i = 0; i < depth; ++i) prefix.push_back(rng.next_int(M));

    const double bound = bound_upper(inst, budgets, prefix);
    const double best = best_completion(inst, budgets, prefix);
    if (best > -kInf) {
      CHECK(bound + 1e-9 >= best);
    }
  }
}

TEST_CASE("greedy incumbent behavior") {
  Rng rng(31);

  SUBCASE("unconstrained budgets match the exact solver") {
    const PlanningInstance inst = random_instance(rng, 5, 6);
    const Budgets open{kInf, kInf};
    const Solution greedy = greedy_incumbent(inst, open);
    const Solution exact = solve_bb(inst, open);
    REQUIRE(greedy.status == SolveStatus::kOptimal);
    CHECK(greedy.choice == exact.choice);
  }

  SUBCASE("stuck when nothing fits the first share") {
    const PlanningInstance inst =
        tiny_instance({{10, 20}}, {{100, 200}}, {{1, 2}});
    CHECK(greedy_incumbent(inst, Budgets{50, 10}).status ==
          SolveStatus::kInfeasible);
  }

  SUBCASE("feasible results never beat the optimum") {
    for (int trial = 0; trial < 100; ++trial) {
      const PlanningInstance inst =
          random_instance(rng, 1 + rng.next_int(5), 2 + rng.next_int(6));
      const Budgets budgets = random_budgets(rng, inst);
      const Solution greedy = greedy_incumbent(inst, budgets);
      if (greedy.status != SolveStatus::kOptimal) continue;
      CHECK(greedy.total_rate <= budgets.rate_threshold_kbps);
      CHECK(greedy.total_time <= budgets.time_threshold_s);
      const Solution exact = solve_bb(inst, budgets);
      REQUIRE(exact.status == SolveStatus::kOptimal);
      CHECK(greedy.total_utility <= exact.total_utility + 1e-12);
    }
  }
}

TEST_CASE("optimal plans dominate any feasible reference assignment") {
  Rng rng(88);
  for (int trial = 0; trial < 60; ++trial) {
    const int L = 1 + rng.next_int(4);
    const int M = 2 + rng.next_int(6);
    const PlanningInstance inst = random_instance(rng, L, M);
    const Budgets budgets = random_budgets(rng, inst);
    const Solution exact = solve_bb(inst, budgets);

    std::vector<int> reference;
    double u = 0, r = 0, t = 0;
    for (int i = 0; i < L; ++i) {
      const int j = rng.next_int(M);
      reference.push_back(j);
      u += inst.utility[i][j];
      r += inst.rate[i][j];
      t += inst.time[i][j];
    }
    if (r <= budgets.rate_threshold_kbps && t <= budgets.time_threshold_s) {
      REQUIRE(exact.status == SolveStatus::kOptimal);
      CHECK(exact.total_utility >= u - 1e-12);
    }
  }
}

TEST_CASE("widening a budget never lowers the optimum") {
  Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const PlanningInstance inst =
        random_instance(rng, 1 + rng.next_int(4), 2 + rng.next_int(6));
    const Budgets budgets = random_budgets(rng, inst);
    Budgets wider = budgets;
    wider.rate_threshold_kbps *= 1.3;
    wider.time_threshold_s *= 1.2;

    const Solution tight = solve_bb(inst, budgets);
    const Solution loose = solve_bb(inst, wider);
    if (tight.status == SolveStatus::kOptimal) {
      REQUIRE(loose.status == SolveStatus::kOptimal);
      CHECK(loose.total_utility >= tight.total_utility - 1e-12);
    }
  }
}

TEST_CASE("solver output is bit-deterministic") {
  Rng rng(7);
  const PlanningInstance inst = random_instance(rng, 5, 7);
  const Budgets budgets = random_budgets(rng, inst);
  const Solution a = solve_bb(inst, budgets);
  const Solution b = solve_bb(inst, budgets);
  CHECK(Json(a).dump() == Json(b).dump());
}

TEST_CASE("instance assembly over the full grid") {
  GenParams gen;
  gen.seed = 21;
  gen.num_segments = 18;
  const SynthCorpus corpus = gen_corpus(gen);
  const ModelSet models = testutil::train_models(corpus, 21, 4);
  const OperatingGrid grid = build_operating_grid(
      {Preset::kUltrafast, Preset::kVeryfast, Preset::kFast, Preset::kSlow,
       Preset::kVeryslow},
      corpus.bitrates_kbps);

  std::vector<SegmentFeatures> six;
  for (int i = 0; i < 6; ++i) six.push_back(corpus.segments[i].features);
  const PlanningInstance inst = build_instance(six, grid, models);
  CHECK(inst.num_segments == 6);
  CHECK(inst.num_points == 50);
  CHECK(inst.utility.size() == 6);
  CHECK(inst.utility[0].size() == 50);

  // Every utility entry must equal an independent evaluation of the
  // classified centroid curve; every time entry the regressor output.
  for (int i = 0; i < 6; ++i) {
    for (const OperatingPoint& point : grid.points) {
      const int cls =
          classify_rd(models.classifiers.at(point.preset), six[i]);
      const LogCurve& curve = models.clusters.at(point.preset).fitted[cls];
      CHECK(inst.utility[i][point.index_j] ==
            eval_curve(curve, point.bitrate_kbps));
      CHECK(inst.time[i][point.index_j] ==
            predict_time(models.times.at(point.preset), six[i],
                         point.bitrate_kbps));
      CHECK(inst.rate[i][point.index_j] == point.bitrate_kbps);
    }
  }

  SUBCASE("missing models are rejected") {
    std::map<Preset, TimeModel> missing = models.times;
    missing.erase(Preset::kSlow);
    CHECK_THROWS_AS(
        build_instance(six, grid, missing, models.clusters, models.classifiers),
        ValidationError);
  }

  SUBCASE("one segment and one point give 1x1 matrices") {
    const OperatingGrid small = build_operating_grid({Preset::kFast}, {1000});
    const PlanningInstance one = build_instance({six[0]}, small, models);
    CHECK(one.num_segments == 1);
    CHECK(one.num_points == 1);
  }
}

TEST_CASE("paper-scale instance solves optimally with zero duality gap") {
  GenParams gen;
  gen.seed = 31;
  gen.num_segments = 12;
  const SynthCorpus corpus = gen_corpus(gen);
  const OperatingGrid grid = build_operating_grid(
      {Preset::kUltrafast, Preset::kVeryfast, Preset::kFast, Preset::kSlow,
       Preset::kVeryslow},
      corpus.bitrates_kbps);
  const PlanningInstance inst =
      testutil::ground_truth_instance(corpus, {0, 1, 2, 3, 4, 5}, grid);
  const Budgets budgets{30000, 11};

  const Solution sol = solve_bb(inst, budgets);
  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(sol.total_rate <= 30000);
  CHECK(sol.total_time <= 11);

  // Lagrangian dual of the two budget constraints; the instance is chosen
  // so that subgradient descent closes the gap.
  auto dual_value = [&](double lambda, double mu) {
    double total = lambda * budgets.rate_threshold_kbps +
                   mu * budgets.time_threshold_s;
    for (int i = 0; i < inst.num_segments; ++i) {
      double best = -kInf;
      for (int j = 0; j < inst.num_points; ++j) {
        best = std::max(best, inst.utility[i][j] - lambda * inst.rate[i][j] -
                                  mu * inst.time[i][j]);
      }
      total += best;
    }
    return total;
  };
  auto dual_choice_totals = [&](double lambda, double mu, double* rate_sum,
                                double* time_sum) {
    *rate_sum = 0;
    *time_sum = 0;
    for (int i = 0; i < inst.num_segments; ++i) {
      int arg = 0;
      double best = -kInf;
      for (int j = 0; j < inst.num_points; ++j) {
        const double v = inst.utility[i][j] - lambda * inst.rate[i][j] -
                         mu * inst.time[i][j];
        if (v > best) {
          best = v;
          arg = j;
        }
      }
      *rate_sum += inst.rate[i][arg];
      *time_sum += inst.time[i][arg];
    }
  };

  double lambda = 1e-4, mu = 0.1;
  double best_dual = dual_value(lambda, mu);
  double step = 1.0;
  for (int iter = 0; iter < 4000; ++iter) {
    double rate_sum = 0, time_sum = 0;
    dual_choice_totals(lambda, mu, &rate_sum, &time_sum);
    const double g_rate = budgets.rate_threshold_kbps - rate_sum;
    const double g_time = budgets.time_threshold_s - time_sum;
    lambda = std::max(0.0, lambda - step * 1e-8 * g_rate);
    mu = std::max(0.0, mu - step * 1e-2 * g_time);
    best_dual = std::min(best_dual, dual_value(lambda, mu));
    step *= 0.999;
  }
  CHECK(best_dual >= sol.total_utility - 1e-9);
  CHECK(best_dual - sol.total_utility <= 1e-6 * std::fabs(sol.total_utility));
}
