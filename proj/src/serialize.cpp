#include "tcplan/serialize.hpp"

namespace tcplan {

void to_json(Json& j, const Preset& p) { j = std::string(preset_name(p)); }

void from_json(const Json& j, Preset& p) {
  p = preset_from_name(j.get<std::string>());
}

void to_json(Json& j, const OperatingGrid& grid) {
  j = Json{{"presets", grid.presets}, {"bitrates_kbps", grid.bitrates_kbps}};
}

void from_json(const Json& j, OperatingGrid& grid) {
  grid = build_operating_grid(j.at("presets").get<std::vector<Preset>>(),
                              j.at("bitrates_kbps").get<std::vector<int>>());
}

void to_json(Json& j, const SegmentFeatures& f) {
  j = Json{{"segment_id", f.segment_id}, {"duration_s", f.duration_s}};
  for (const FeatureInfo& info : feature_schema()) j[info.name] = info.get(f);
}

void from_json(const Json& j, SegmentFeatures& f) {
  f = SegmentFeatures{};
  f.segment_id = j.at("segment_id").get<std::string>();
  f.duration_s = j.at("duration_s").get<double>();
  for (const FeatureInfo& info : feature_schema()) {
    info.set(f, j.at(info.name).get<double>());
  }
}

void to_json(Json& j, const Budgets& b) {
  j = Json{{"rate_threshold_kbps", b.rate_threshold_kbps},
           {"time_threshold_s", b.time_threshold_s}};
}

void from_json(const Json& j, Budgets& b) {
  j.at("rate_threshold_kbps").get_to(b.rate_threshold_kbps);
  j.at("time_threshold_s").get_to(b.time_threshold_s);
}

void to_json(Json& j, const RDCurve& c) {
  j = Json{{"bitrates_kbps", c.bitrates_kbps}, {"psnr_db", c.psnr_db}};
}

void from_json(const Json& j, RDCurve& c) {
  j.at("bitrates_kbps").get_to(c.bitrates_kbps);
  j.at("psnr_db").get_to(c.psnr_db);
}

void to_json(Json& j, const LogCurve& c) { j = Json{{"a", c.a}, {"b", c.b}}; }

void from_json(const Json& j, LogCurve& c) {
  j.at("a").get_to(c.a);
  j.at("b").get_to(c.b);
}

void to_json(Json& j, const ClusterModel& m) {
  j = Json{{"preset", m.preset},     {"k", m.k},
           {"bitrates_kbps", m.bitrates_kbps}, {"centroids", m.centroids},
           {"fitted", m.fitted},     {"inertia", m.inertia},
           {"seed", m.seed}};
}

void from_json(const Json& j, ClusterModel& m) {
  j.at("preset").get_to(m.preset);
  j.at("k").get_to(m.k);
  j.at("bitrates_kbps").get_to(m.bitrates_kbps);
  j.at("centroids").get_to(m.centroids);
  j.at("fitted").get_to(m.fitted);
  j.at("inertia").get_to(m.inertia);
  j.at("seed").get_to(m.seed);
}

void to_json(Json& j, const TreeNode& n) {
  j = Json{{"feature", n.feature},
           {"threshold", n.threshold},
           {"left", n.left},
           {"right", n.right},
           {"value", n.value}};
}

void from_json(const Json& j, TreeNode& n) {
  j.at("feature").get_to(n.feature);
  j.at("threshold").get_to(n.threshold);
  j.at("left").get_to(n.left);
  j.at("right").get_to(n.right);
  j.at("value").get_to(n.value);
}

void to_json(Json& j, const RegressionTree& t) { j = Json{{"nodes", t.nodes}}; }

void from_json(const Json& j, RegressionTree& t) {
  j.at("nodes").get_to(t.nodes);
}

void to_json(Json& j, const TimeModel& m) {
  j = Json{{"preset", m.preset},
           {"base_prediction", m.base_prediction},
           {"learning_rate", m.learning_rate},
           {"trees", m.trees},
           {"feature_indices", m.feature_indices}};
}

void from_json(const Json& j, TimeModel& m) {
  j.at("preset").get_to(m.preset);
  j.at("base_prediction").get_to(m.base_prediction);
  j.at("learning_rate").get_to(m.learning_rate);
  j.at("trees").get_to(m.trees);
  j.at("feature_indices").get_to(m.feature_indices);
}

void to_json(Json& j, const Standardizer& s) {
  j = Json{{"mean", s.mean}, {"stddev", s.stddev}};
}

void from_json(const Json& j, Standardizer& s) {
  j.at("mean").get_to(s.mean);
  j.at("stddev").get_to(s.stddev);
}

void to_json(Json& j, const BinarySvm& s) {
  j = Json{{"support_vectors", s.support_vectors},
           {"dual_coef", s.dual_coef},
           {"bias", s.bias}};
}

void from_json(const Json& j, BinarySvm& s) {
  j.at("support_vectors").get_to(s.support_vectors);
  j.at("dual_coef").get_to(s.dual_coef);
  j.at("bias").get_to(s.bias);
}

void to_json(Json& j, const RDClassModel& m) {
  j = Json{{"preset", m.preset},
           {"class_ids", m.class_ids},
           {"classifiers", m.classifiers},
           {"scaler", m.scaler},
           {"feature_indices", m.feature_indices},
           {"gamma", m.gamma},
           {"degenerate", m.degenerate}};
}

void from_json(const Json& j, RDClassModel& m) {
  j.at("preset").get_to(m.preset);
  j.at("class_ids").get_to(m.class_ids);
  j.at("classifiers").get_to(m.classifiers);
  j.at("scaler").get_to(m.scaler);
  j.at("feature_indices").get_to(m.feature_indices);
  j.at("gamma").get_to(m.gamma);
  j.at("degenerate").get_to(m.degenerate);
}

namespace {

template <typename T>
Json preset_map_to_json(const std::map<Preset, T>& models) {
  Json j = Json::object();
  for (const auto& [preset, model] : models) {
    j[std::string(preset_name(preset))] = model;
  }
  return j;
}

template <typename T>
void preset_map_from_json(const Json& j, std::map<Preset, T>& models) {
  models.clear();
  for (auto it = j.begin(); it != j.end(); ++it) {
    models[preset_from_name(it.key())] = it.value().get<T>();
  }
}

}  // namespace

void to_json(Json& j, const ModelSet& m) {
  j = Json{{"clusters", preset_map_to_json(m.clusters)},
           {"times", preset_map_to_json(m.times)},
           {"classifiers", preset_map_to_json(m.classifiers)}};
}

void from_json(const Json& j, ModelSet& m) {
  preset_map_from_json(j.at("clusters"), m.clusters);
  preset_map_from_json(j.at("times"), m.times);
  preset_map_from_json(j.at("classifiers"), m.classifiers);
}

void to_json(Json& j, const Solution& s) {
  j = Json{{"status",
            s.status == SolveStatus::kOptimal ? "optimal" : "infeasible"},
           {"choice", s.choice},
           {"total_utility", s.total_utility},
           {"total_rate", s.total_rate},
           {"total_time", s.total_time},
           {"nodes_explored", s.nodes_explored},
           {"min_total_rate", s.min_total_rate},
           {"min_total_time", s.min_total_time}};
}

void from_json(const Json& j, Solution& s) {
  const std::string status = j.at("status").get<std::string>();
  if (status == "optimal") {
    s.status = SolveStatus::kOptimal;
  } else if (status == "infeasible") {
    s.status = SolveStatus::kInfeasible;
  } else {
    throw ValidationError("solution: unknown status '" + status + "'");
  }
  j.at("choice").get_to(s.choice);
  j.at("total_utility").get_to(s.total_utility);
  j.at("total_rate").get_to(s.total_rate);
  j.at("total_time").get_to(s.total_time);
  j.at("nodes_explored").get_to(s.nodes_explored);
  j.at("min_total_rate").get_to(s.min_total_rate);
  j.at("min_total_time").get_to(s.min_total_time);
}

void to_json(Json& j, const SweepRow& r) {
  j = Json{{"budget", r.budget},
           {"runs", r.runs},
           {"feasible", r.feasible},
           {"infeasible", r.infeasible},
           {"baseline_feasible", r.baseline_feasible},
           {"mean_planner_psnr", r.mean_planner_psnr},
           {"mean_baseline_psnr", r.mean_baseline_psnr},
           {"preset_counts", r.preset_counts}};
}

void from_json(const Json& j, SweepRow& r) {
  j.at("budget").get_to(r.budget);
  j.at("runs").get_to(r.runs);
  j.at("feasible").get_to(r.feasible);
  j.at("infeasible").get_to(r.infeasible);
  j.at("baseline_feasible").get_to(r.baseline_feasible);
  j.at("mean_planner_psnr").get_to(r.mean_planner_psnr);
  j.at("mean_baseline_psnr").get_to(r.mean_baseline_psnr);
  j.at("preset_counts").get_to(r.preset_counts);
}

void to_json(Json& j, const SweepReport& r) {
  j = Json{{"axis", r.axis},
           {"segments_per_run", r.segments_per_run},
           {"runs", r.runs},
           {"rows", r.rows}};
}

void from_json(const Json& j, SweepReport& r) {
  j.at("axis").get_to(r.axis);
  j.at("segments_per_run").get_to(r.segments_per_run);
  j.at("runs").get_to(r.runs);
  j.at("rows").get_to(r.rows);
}

}  // namespace tcplan
