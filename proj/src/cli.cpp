#include "tcplan/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "tcplan/eval.hpp"
#include "tcplan/io.hpp"
#include "tcplan/rng.hpp"
#include "tcplan/serialize.hpp"
#include "tcplan/synth.hpp"

namespace tcplan {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInfeasible = 3;

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts* opts, const std::string& out_help) {
  cmd->add_option("--config", opts->config_path, "Config file (JSON)")
      ->envname("TCPLAN_CONFIG");
  cmd->add_option("--seed", opts->seed, "Seed override")
      ->each([opts](const std::string&) { opts->seed_set = true; });
  cmd->add_option("--out", opts->out, out_help);
}

Config resolve_config(const CommonOpts& opts) {
  Config cfg = opts.config_path.empty() ? Config{} : load_config(opts.config_path);
  validate(cfg);
  if (opts.seed_set) cfg.seed = opts.seed;
  return cfg;
}

std::string out_path(const CommonOpts& opts, const Config& cfg,
                     const std::string& fallback_name) {
  if (!opts.out.empty()) return opts.out;
  return (fs::path(cfg.out_dir) / fallback_name).string();
}

void ensure_parent_dir(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

// Reads either table format and keeps the first occurrence of each
// segment id, preserving file order.
std::vector<SegmentFeatures> load_unique_segments(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) throw ValidationError("cannot open '" + path + "'");
  std::string header;
  std::getline(probe, header);
  probe.close();

  std::vector<SegmentFeatures> all;
  if (header.find("transcode_time_s") != std::string::npos) {
    for (const TimeRow& row : load_time_table(path)) all.push_back(row.features);
  } else {
    for (const RdTableRow& row : load_rd_table(path)) all.push_back(row.features);
  }

  std::vector<SegmentFeatures> unique;
  std::set<std::string> seen;
  for (SegmentFeatures& f : all) {
    if (seen.insert(f.segment_id).second) unique.push_back(std::move(f));
  }
  if (unique.empty()) throw ValidationError("'" + path + "' holds no segments");
  return unique;
}

ModelSet load_models_or_empty(const std::string& path) {
  if (!fs::exists(path)) return ModelSet{};
  return load_models(path);
}

std::map<Preset, std::vector<TimeRow>> group_time_rows(
    const std::vector<TimeRow>& rows) {
  std::map<Preset, std::vector<TimeRow>> grouped;
  for (const TimeRow& row : rows) grouped[row.preset].push_back(row);
  return grouped;
}

std::map<Preset, std::vector<RdTableRow>> group_rd_rows(
    const std::vector<RdTableRow>& rows) {
  std::map<Preset, std::vector<RdTableRow>> grouped;
  for (const RdTableRow& row : rows) grouped[row.preset].push_back(row);
  return grouped;
}

// ---- subcommand handlers ----

struct GenOpts {
  CommonOpts common;
  int segments = 60;
  std::string archetype = "mixed";
};

int run_gen_data(const GenOpts& opts) {
  const Config cfg = resolve_config(opts.common);
  const std::string dir = opts.common.out.empty() ? cfg.out_dir : opts.common.out;
  fs::create_directories(dir);

  GenParams params;
  params.seed = cfg.seed;
  params.num_segments = opts.segments;
  params.archetype = opts.archetype;
  params.bitrates_kbps = cfg.bitrates_kbps;
  params.duration_s = cfg.segment_duration_s;
  const SynthCorpus corpus = gen_corpus(params);

  std::vector<RdTableRow> rd_rows;
  rd_rows.reserve(corpus.rd_records.size());
  for (const RdRecord& rec : corpus.rd_records) {
    rd_rows.push_back(RdTableRow{
        corpus.segments[rec.segment_index].features, rec.preset, rec.curve});
  }

  const std::string time_path = (fs::path(dir) / "time_table.csv").string();
  const std::string rd_path = (fs::path(dir) / "rd_table.csv").string();
  write_time_table(time_path, corpus.time_rows);
  write_rd_table(rd_path, rd_rows);
  std::cout << "wrote " << corpus.time_rows.size() << " time rows to "
            << time_path << "\n"
            << "wrote " << rd_rows.size() << " rd rows to " << rd_path << "\n";
  return kExitOk;
}

struct FileOpts {
  CommonOpts common;
  std::string input;
  std::string models;
};

int run_cluster(const FileOpts& opts) {
  const Config cfg = resolve_config(opts.common);
  const std::string models_path =
      opts.models.empty() ? out_path(opts.common, cfg, "models.json")
                          : opts.models;

  const auto grouped = group_rd_rows(load_rd_table(opts.input));
  ModelSet models = load_models_or_empty(models_path);
  for (const auto& [preset, rows] : grouped) {
    std::vector<RDCurve> curves;
    curves.reserve(rows.size());
    for (const RdTableRow& row : rows) curves.push_back(row.curve);

    KMeansParams params;
    params.k = cfg.k_clusters;
    params.seed = Rng::mix(cfg.seed, static_cast<std::uint64_t>(speed_rank(preset)));
    params.max_iter = cfg.kmeans_max_iter;
    params.tol = cfg.kmeans_tol;
    const KMeansResult result = kmeans_cluster(curves, preset, params);
    models.clusters[preset] = result.model;
    std::cout << "clustered " << curves.size() << " curves for "
              << preset_name(preset) << " (inertia "
              << format_double(result.model.inertia) << ")\n";
  }
  ensure_parent_dir(models_path);
  save_models(models_path, models);
  std::cout << "models written to " << models_path << "\n";
  return kExitOk;
}

struct TrainTimeOpts {
  FileOpts file;
  std::string selection;
};

int run_train_time(const TrainTimeOpts& opts) {
  const Config cfg = resolve_config(opts.file.common);
  const std::string models_path =
      opts.file.models.empty() ? out_path(opts.file.common, cfg, "models.json")
                               : opts.file.models;

  Json selection;
  if (!opts.selection.empty()) {
    std::ifstream in(opts.selection);
    if (!in) throw ValidationError("cannot open '" + opts.selection + "'");
    in >> selection;
  }

  const auto grouped = group_time_rows(load_time_table(opts.file.input));
  ModelSet models = load_models_or_empty(models_path);
  for (const auto& [preset, rows] : grouped) {
    std::vector<int> indices = time_input_indices(FeatureMask::defaults());
    const std::string name(preset_name(preset));
    if (selection.contains(name)) {
      selection.at(name).at("input_indices").get_to(indices);
    }
    models.times[preset] = train_time_regressor(rows, cfg.gbdt, indices);
    std::cout << "trained time regressor for " << name << " on "
              << rows.size() << " rows (" << indices.size() << " inputs)\n";
  }
  ensure_parent_dir(models_path);
  save_models(models_path, models);
  std::cout << "models written to " << models_path << "\n";
  return kExitOk;
}

int run_train_rd(const FileOpts& opts) {
  const Config cfg = resolve_config(opts.common);
  const std::string models_path =
      opts.models.empty() ? out_path(opts.common, cfg, "models.json")
                          : opts.models;

  ModelSet models = load_models(models_path);
  const auto grouped = group_rd_rows(load_rd_table(opts.input));
  for (const auto& [preset, rows] : grouped) {
    if (!models.clusters.count(preset)) {
      throw ValidationError("train-rd: no cluster model for preset " +
                            std::string(preset_name(preset)) +
                            " (run cluster first)");
    }
    const ClusterModel& clusters = models.clusters.at(preset);
    std::vector<RDRow> labeled;
    labeled.reserve(rows.size());
    for (const RdTableRow& row : rows) {
      labeled.push_back(
          RDRow{row.features, preset, assign_cluster(row.curve, clusters)});
    }
    SvmParams params;
    params.c = cfg.svm_c;
    params.tol = cfg.svm_tol;
    params.max_passes = cfg.svm_max_passes;
    params.seed = Rng::mix(cfg.seed, 100 + speed_rank(preset));
    models.classifiers[preset] = train_rd_classifier(labeled, params);
    std::cout << "trained rd classifier for " << preset_name(preset) << " on "
              << labeled.size() << " rows\n";
  }
  save_models(models_path, models);
  std::cout << "models written to " << models_path << "\n";
  return kExitOk;
}

struct SelectOpts {
  CommonOpts common;
  std::string input;
  std::string preset = "all";
  int folds = 5;
  int rounds = 30;
};

int run_select_features(const SelectOpts& opts) {
  const Config cfg = resolve_config(opts.common);
  const std::string out = out_path(opts.common, cfg, "selection.json");

  auto grouped = group_time_rows(load_time_table(opts.input));
  if (opts.preset != "all") {
    const Preset wanted = preset_from_name(opts.preset);
    if (!grouped.count(wanted)) {
      throw ValidationError("select-features: no rows for preset " + opts.preset);
    }
    auto keep = std::move(grouped.at(wanted));
    grouped.clear();
    grouped[wanted] = std::move(keep);
  }

  // Elimination is scored with a lightweight booster; the final model is
  // retrained by train-time with the full configuration.
  GbdtParams light = cfg.gbdt;
  light.rounds = opts.rounds;
  light.max_depth = std::min(cfg.gbdt.max_depth, 3);
  const Trainer trainer = [&light](const Matrix& x, const std::vector<double>& y) {
    return boosted_predictor(x, y, light);
  };
  const Metric mape = [](const std::vector<double>& p,
                         const std::vector<double>& a) {
    return regression_metrics(p, a).mape;
  };

  const std::vector<int> candidates = time_input_indices(FeatureMask::defaults());
  Json report = Json::object();
  for (const auto& [preset, rows] : grouped) {
    Matrix x;
    std::vector<double> y;
    for (const TimeRow& row : rows) {
      x.push_back(time_input_vector(row.features, row.target_bitrate_kbps,
                                    candidates));
      y.push_back(row.transcode_time_s);
    }
    const std::vector<int> kept_cols =
        rfecv(x, y, trainer, mape, opts.folds, cfg.seed);

    std::vector<int> input_indices;
    std::vector<std::string> names;
    for (int col : kept_cols) {
      const int idx = candidates[col];
      input_indices.push_back(idx);
      names.push_back(idx == kBitrateColumn ? "target_bitrate_kbps"
                                            : feature_schema()[idx].name);
    }
    report[std::string(preset_name(preset))] =
        Json{{"input_indices", input_indices}, {"columns", names}};
    std::cout << "selected " << input_indices.size() << "/" << candidates.size()
              << " inputs for " << preset_name(preset) << "\n";
  }
  ensure_parent_dir(out);
  std::ofstream of(out, std::ios::binary);
  of << report.dump(2) << "\n";
  std::cout << "selection written to " << out << "\n";
  return kExitOk;
}

struct PlanOpts {
  FileOpts file;
  double rate_budget = -1;
  double time_budget = -1;
  int take = 0;
};

int run_plan(const PlanOpts& opts) {
  const Config cfg = resolve_config(opts.file.common);
  const std::string out = out_path(opts.file.common, cfg, "plan.json");

  const OperatingGrid grid = build_operating_grid(cfg.presets, cfg.bitrates_kbps);
  const ModelSet models = load_models(opts.file.models.empty()
                                          ? out_path(opts.file.common, cfg, "models.json")
                                          : opts.file.models);
  std::vector<SegmentFeatures> segments = load_unique_segments(opts.file.input);
  if (opts.take > 0 && opts.take < static_cast<int>(segments.size())) {
    segments.resize(opts.take);
  }

  Budgets budgets{opts.rate_budget > 0 ? opts.rate_budget : cfg.rate_threshold_kbps,
                  opts.time_budget > 0 ? opts.time_budget : cfg.time_threshold_s};

  const PlanningInstance instance = build_instance(segments, grid, models);
  const auto start = std::chrono::steady_clock::now();
  const Solution sol = solve_bb(instance, budgets);
  const auto elapsed = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  std::cerr << "solve: " << elapsed << " ms, " << sol.nodes_explored
            << " nodes\n";

  Json plan;
  plan["budgets"] = budgets;
  plan["diagnostics"] = Json{{"min_total_rate_kbps", sol.min_total_rate},
                             {"min_total_time_s", sol.min_total_time}};
  if (sol.status == SolveStatus::kOptimal) {
    plan["status"] = "optimal";
    Json segs = Json::array();
    for (int i = 0; i < instance.num_segments; ++i) {
      const OperatingPoint& point = grid.point_at(sol.choice[i]);
      segs.push_back(Json{{"segment_id", segments[i].segment_id},
                          {"preset", point.preset},
                          {"bitrate_kbps", point.bitrate_kbps},
                          {"predicted_time_s", instance.time[i][sol.choice[i]]},
                          {"predicted_psnr_db", instance.utility[i][sol.choice[i]]}});
    }
    plan["segments"] = std::move(segs);
    plan["totals"] = Json{{"predicted_psnr_db", sol.total_utility},
                          {"rate_kbps", sol.total_rate},
                          {"time_s", sol.total_time}};
  } else {
    plan["status"] = "infeasible";
    plan["segments"] = Json::array();
  }

  ensure_parent_dir(out);
  std::ofstream of(out, std::ios::binary);
  of << plan.dump(2) << "\n";
  std::cout << "plan written to " << out << "\n";

  if (sol.status != SolveStatus::kOptimal) {
    std::cerr << "plan infeasible: minimum achievable total rate "
              << format_double(sol.min_total_rate)
              << " kbps, minimum achievable total time "
              << format_double(sol.min_total_time) << " s\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

struct SweepOpts {
  FileOpts file;
  std::vector<double> budgets;
  double fixed_rate = -1;
  double fixed_time = -1;
  int runs = 877;
  int segments_per_run = 0;
};

SweepParams sweep_params(const SweepOpts& opts, const Config& cfg) {
  SweepParams params;
  params.budgets = opts.budgets;
  params.fixed_rate_budget_kbps =
      opts.fixed_rate > 0 ? opts.fixed_rate : cfg.rate_threshold_kbps;
  params.fixed_time_budget_s =
      opts.fixed_time > 0 ? opts.fixed_time : cfg.time_threshold_s;
  params.runs = opts.runs;
  params.seed = cfg.seed;
  params.segments_per_run = opts.segments_per_run > 0 ? opts.segments_per_run
                                                      : cfg.planning_segments;
  return params;
}

void write_sweep_outputs(const SweepReport& report, const std::string& prefix,
                         bool with_curves) {
  ensure_parent_dir(prefix + ".csv");
  write_sweep_csv(prefix + ".csv", report);
  write_sweep_json(prefix + ".json", report);
  std::cout << "report written to " << prefix << ".csv and " << prefix
            << ".json\n";
  if (!with_curves) return;

  RDCurve planner, baseline;
  for (const SweepRow& row : report.rows) {
    if (row.feasible == 0 || row.baseline_feasible == 0) continue;
    planner.bitrates_kbps.push_back(static_cast<int>(row.budget));
    planner.psnr_db.push_back(row.mean_planner_psnr);
    baseline.bitrates_kbps.push_back(static_cast<int>(row.budget));
    baseline.psnr_db.push_back(row.mean_baseline_psnr);
  }
  if (planner.bitrates_kbps.size() >= 2) {
    write_curve_csv(prefix + "_planner_curve.csv", planner);
    write_curve_csv(prefix + "_baseline_curve.csv", baseline);
    std::cout << "comparison curves written to " << prefix
              << "_planner_curve.csv and " << prefix << "_baseline_curve.csv\n";
  }
}

int run_sweep_rate(const SweepOpts& opts) {
  const Config cfg = resolve_config(opts.file.common);
  const OperatingGrid grid = build_operating_grid(cfg.presets, cfg.bitrates_kbps);
  const ModelSet models = load_models(opts.file.models.empty()
                                          ? out_path(opts.file.common, cfg, "models.json")
                                          : opts.file.models);
  const std::vector<SegmentFeatures> corpus = load_unique_segments(opts.file.input);

  SweepParams params = sweep_params(opts, cfg);
  if (params.budgets.empty()) {
    for (int r : cfg.bitrates_kbps) {
      params.budgets.push_back(static_cast<double>(params.segments_per_run) * r);
    }
  }
  const SweepReport report = sweep_rate_budget(corpus, grid, models, params);

  const std::string prefix = opts.file.common.out.empty()
                                 ? (fs::path(cfg.out_dir) / "sweep_rate").string()
                                 : opts.file.common.out;
  write_sweep_outputs(report, prefix, true);
  return kExitOk;
}

int run_sweep_time(const SweepOpts& opts) {
  const Config cfg = resolve_config(opts.file.common);
  const OperatingGrid grid = build_operating_grid(cfg.presets, cfg.bitrates_kbps);
  const ModelSet models = load_models(opts.file.models.empty()
                                          ? out_path(opts.file.common, cfg, "models.json")
                                          : opts.file.models);
  const std::vector<SegmentFeatures> corpus = load_unique_segments(opts.file.input);

  SweepParams params = sweep_params(opts, cfg);
  if (params.budgets.empty()) params.budgets = {11, 8, 5, 3};
  const SweepReport report = sweep_time_budget(corpus, grid, models, params);

  const std::string prefix = opts.file.common.out.empty()
                                 ? (fs::path(cfg.out_dir) / "sweep_time").string()
                                 : opts.file.common.out;
  write_sweep_outputs(report, prefix, false);
  return kExitOk;
}

struct BdOpts {
  CommonOpts common;
  std::string anchor;
  std::string test;
};

int run_bd_rate(const BdOpts& opts) {
  const RDCurve anchor = load_curve_csv(opts.anchor);
  const RDCurve test = load_curve_csv(opts.test);
  std::printf("%.2f\n", bd_rate(anchor, test));
  return kExitOk;
}

struct ReportOpts {
  CommonOpts common;
  std::string plan;
};

int run_report(const ReportOpts& opts) {
  std::ifstream in(opts.plan, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + opts.plan + "'");
  Json plan;
  try {
    in >> plan;
  } catch (const Json::parse_error& e) {
    throw ValidationError("report: cannot parse '" + opts.plan + "': " + e.what());
  }

  const std::string status = plan.at("status").get<std::string>();
  std::cout << "status: " << status << "\n";
  const Budgets budgets = plan.at("budgets").get<Budgets>();
  std::cout << "budgets: " << format_double(budgets.rate_threshold_kbps)
            << " kbps, " << format_double(budgets.time_threshold_s) << " s\n";
  if (status == "optimal") {
    std::printf("%-24s %-10s %8s %12s %10s\n", "segment", "preset", "kbps",
                "time_s", "psnr_db");
    for (const Json& seg : plan.at("segments")) {
      std::printf("%-24s %-10s %8d %12.4f %10.3f\n",
                  seg.at("segment_id").get<std::string>().c_str(),
                  seg.at("preset").get<std::string>().c_str(),
                  seg.at("bitrate_kbps").get<int>(),
                  seg.at("predicted_time_s").get<double>(),
                  seg.at("predicted_psnr_db").get<double>());
    }
    const Json& totals = plan.at("totals");
    std::printf("totals: %.3f dB, %.1f kbps, %.4f s\n",
                totals.at("predicted_psnr_db").get<double>(),
                totals.at("rate_kbps").get<double>(),
                totals.at("time_s").get<double>());
  } else if (plan.contains("diagnostics")) {
    const Json& diag = plan.at("diagnostics");
    std::printf("minimum achievable: %.1f kbps, %.4f s\n",
                diag.at("min_total_rate_kbps").get<double>(),
                diag.at("min_total_time_s").get<double>());
  }
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Per-segment transcoding preset and bitrate planner"};
  app.require_subcommand(1);

  GenOpts gen;
  CLI::App* gen_cmd = app.add_subcommand(
      "gen-data", "Generate a synthetic measurement corpus");
  add_common(gen_cmd, &gen.common, "Output directory");
  gen_cmd->add_option("--segments", gen.segments, "Number of segments");
  gen_cmd->add_option("--archetype", gen.archetype,
                      "Content archetype name, or 'mixed'");

  FileOpts cluster;
  CLI::App* cluster_cmd =
      app.add_subcommand("cluster", "Cluster R-D curves per preset");
  add_common(cluster_cmd, &cluster.common, "Models file (default models.json)");
  cluster_cmd->add_option("--rd", cluster.input, "R-D table CSV")->required();
  cluster_cmd->add_option("--models", cluster.models, "Models file to update");

  TrainTimeOpts train_time;
  CLI::App* tt_cmd = app.add_subcommand(
      "train-time", "Train per-preset transcoding-time regressors");
  add_common(tt_cmd, &train_time.file.common, "Models file (default models.json)");
  tt_cmd->add_option("--time", train_time.file.input, "Time table CSV")->required();
  tt_cmd->add_option("--models", train_time.file.models, "Models file to update");
  tt_cmd->add_option("--selection", train_time.selection,
                     "Feature selection JSON from select-features");

  FileOpts train_rd;
  CLI::App* tr_cmd = app.add_subcommand(
      "train-rd", "Train per-preset R-D class predictors");
  add_common(tr_cmd, &train_rd.common, "Models file (default models.json)");
  tr_cmd->add_option("--rd", train_rd.input, "R-D table CSV")->required();
  tr_cmd->add_option("--models", train_rd.models, "Models file to update");

  SelectOpts select;
  CLI::App* sel_cmd = app.add_subcommand(
      "select-features", "Backward feature elimination for the time models");
  add_common(sel_cmd, &select.common, "Selection JSON output");
  sel_cmd->add_option("--time", select.input, "Time table CSV")->required();
  sel_cmd->add_option("--preset", select.preset, "Preset name or 'all'");
  sel_cmd->add_option("--folds", select.folds, "CV folds");
  sel_cmd->add_option("--rounds", select.rounds, "Boosting rounds while scoring");

  PlanOpts plan;
  CLI::App* plan_cmd = app.add_subcommand(
      "plan", "Select one (preset, bitrate) per segment under the budgets");
  add_common(plan_cmd, &plan.file.common, "Plan JSON output (default plan.json)");
  plan_cmd->add_option("--in", plan.file.input, "Segment table CSV")->required();
  plan_cmd->add_option("--models", plan.file.models, "Models file");
  plan_cmd->add_option("--rate-budget", plan.rate_budget, "Total kbps budget");
  plan_cmd->add_option("--time-budget", plan.time_budget, "Total seconds budget");
  plan_cmd->add_option("--take", plan.take, "Plan only the first N segments");

  SweepOpts sweep_rate;
  CLI::App* sr_cmd = app.add_subcommand(
      "sweep-rate", "Sweep the total-rate budget against the baseline");
  add_common(sr_cmd, &sweep_rate.file.common, "Report path prefix");
  sr_cmd->add_option("--in", sweep_rate.file.input, "Corpus table CSV")->required();
  sr_cmd->add_option("--models", sweep_rate.file.models, "Models file");
  sr_cmd->add_option("--budgets", sweep_rate.budgets,
                     "Rate budgets (kbps); default L x each grid bitrate");
  sr_cmd->add_option("--time-budget", sweep_rate.fixed_time, "Fixed time budget");
  sr_cmd->add_option("--runs", sweep_rate.runs, "Sampled runs per budget");
  sr_cmd->add_option("--segments-per-run", sweep_rate.segments_per_run,
                     "Segments per run (default config L)");

  SweepOpts sweep_time;
  CLI::App* st_cmd = app.add_subcommand(
      "sweep-time", "Sweep the total-time budget, recording preset shares");
  add_common(st_cmd, &sweep_time.file.common, "Report path prefix");
  st_cmd->add_option("--in", sweep_time.file.input, "Corpus table CSV")->required();
  st_cmd->add_option("--models", sweep_time.file.models, "Models file");
  st_cmd->add_option("--budgets", sweep_time.budgets,
                     "Time budgets (s); default 11 8 5 3");
  st_cmd->add_option("--rate-budget", sweep_time.fixed_rate, "Fixed rate budget");
  st_cmd->add_option("--runs", sweep_time.runs, "Sampled runs per budget");
  st_cmd->add_option("--segments-per-run", sweep_time.segments_per_run,
                     "Segments per run (default config L)");

  BdOpts bd;
  CLI::App* bd_cmd = app.add_subcommand(
      "bd-rate", "Bjontegaard delta rate between two curve files");
  add_common(bd_cmd, &bd.common, "(unused)");
  bd_cmd->add_option("--anchor", bd.anchor, "Anchor curve CSV")->required();
  bd_cmd->add_option("--test", bd.test, "Test curve CSV")->required();

  ReportOpts report;
  CLI::App* rep_cmd = app.add_subcommand("report", "Pretty-print a plan JSON");
  add_common(rep_cmd, &report.common, "(unused)");
  rep_cmd->add_option("--plan", report.plan, "Plan JSON")->required();

  int rc = kExitOk;
  gen_cmd->callback([&] { rc = run_gen_data(gen); });
  cluster_cmd->callback([&] { rc = run_cluster(cluster); });
  tt_cmd->callback([&] { rc = run_train_time(train_time); });
  tr_cmd->callback([&] { rc = run_train_rd(train_rd); });
  sel_cmd->callback([&] { rc = run_select_features(select); });
  plan_cmd->callback([&] { rc = run_plan(plan); });
  sr_cmd->callback([&] { rc = run_sweep_rate(sweep_rate); });
  st_cmd->callback([&] { rc = run_sweep_time(sweep_time); });
  bd_cmd->callback([&] { rc = run_bd_rate(bd); });
  rep_cmd->callback([&] { rc = run_report(report); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return rc;
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("tcplan");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace tcplan
