#include "tcplan/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tcplan/serialize.hpp"

namespace tcplan {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw ValidationError("format_double: value too long");
  return std::string(buf, ptr);
}

namespace {

double parse_double(const std::string& field, const std::string& where) {
  double v = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError(where + ": cannot parse number '" + field + "'");
  }
  return v;
}

long parse_long(const std::string& field, const std::string& where) {
  long v = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError(where + ": cannot parse integer '" + field + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::vector<std::string> read_lines(const std::string& path,
                                    const std::string& what) {
  std::ifstream in(path);
  if (!in) throw ValidationError(what + ": cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (lines.empty()) throw ValidationError(what + ": '" + path + "' is empty");
  return lines;
}

void write_file(const std::string& path, const std::string& contents,
                const std::string& what) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(what + ": cannot write '" + path + "'");
  out << contents;
  if (!out) throw ValidationError(what + ": write failed for '" + path + "'");
}

// Leading columns shared by both tables.
std::vector<std::string> shared_columns() {
  std::vector<std::string> cols = {"segment_id", "duration_s"};
  for (const FeatureInfo& info : feature_schema()) cols.push_back(info.name);
  return cols;
}

void check_header(const std::vector<std::string>& actual,
                  const std::vector<std::string>& expected,
                  const std::string& what) {
  for (std::size_t i = 0; i < std::min(actual.size(), expected.size()); ++i) {
    if (actual[i] != expected[i]) {
      throw ValidationError(what + ": unexpected column '" + actual[i] +
                            "' at position " + std::to_string(i + 1) +
                            " (expected '" + expected[i] + "')");
    }
  }
  if (actual.size() < expected.size()) {
    throw ValidationError(what + ": missing column '" +
                          expected[actual.size()] + "'");
  }
  if (actual.size() > expected.size()) {
    throw ValidationError(what + ": unexpected column '" +
                          actual[expected.size()] + "' at position " +
                          std::to_string(expected.size() + 1));
  }
}

void append_shared_fields(std::ostringstream& out, const SegmentFeatures& f) {
  out << f.segment_id << ',' << format_double(f.duration_s);
  for (const FeatureInfo& info : feature_schema()) {
    out << ',' << format_double(info.get(f));
  }
}

SegmentFeatures parse_shared_fields(const std::vector<std::string>& fields,
                                    const std::string& where) {
  SegmentFeatures f;
  f.segment_id = fields[0];
  if (f.segment_id.empty()) {
    throw ValidationError(where + ": segment_id is empty");
  }
  f.duration_s = parse_double(fields[1], where + " column duration_s");
  for (int i = 0; i < kNumFeatures; ++i) {
    const FeatureInfo& info = feature_schema()[i];
    info.set(f, parse_double(fields[2 + i],
                             where + " column " + std::string(info.name)));
  }
  validate(f);
  return f;
}

}  // namespace

void write_time_table(const std::string& path, const std::vector<TimeRow>& rows) {
  std::ostringstream out;
  std::vector<std::string> cols = shared_columns();
  cols.insert(cols.end(), {"preset", "target_bitrate_kbps", "transcode_time_s"});
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
  for (const TimeRow& row : rows) {
    append_shared_fields(out, row.features);
    out << ',' << preset_name(row.preset) << ',' << row.target_bitrate_kbps
        << ',' << format_double(row.transcode_time_s) << '\n';
  }
  write_file(path, out.str(), "time table");
}

std::vector<TimeRow> load_time_table(const std::string& path) {
  const std::string what = "time table";
  const std::vector<std::string> lines = read_lines(path, what);

  std::vector<std::string> expected = shared_columns();
  expected.insert(expected.end(),
                  {"preset", "target_bitrate_kbps", "transcode_time_s"});
  check_header(split_csv_line(lines[0]), expected, what);

  std::vector<TimeRow> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const std::string where = what + " row " + std::to_string(n);
    const std::vector<std::string> fields = split_csv_line(lines[n]);
    if (fields.size() != expected.size()) {
      throw ValidationError(where + ": expected " +
                            std::to_string(expected.size()) + " fields, got " +
                            std::to_string(fields.size()));
    }
    TimeRow row;
    row.features = parse_shared_fields(fields, where);
    const std::size_t base = 2 + kNumFeatures;
    row.preset = preset_from_name(fields[base]);
    row.target_bitrate_kbps = static_cast<int>(
        parse_long(fields[base + 1], where + " column target_bitrate_kbps"));
    if (row.target_bitrate_kbps <= 0) {
      throw ValidationError(where + ": target_bitrate_kbps must be positive");
    }
    row.transcode_time_s =
        parse_double(fields[base + 2], where + " column transcode_time_s");
    if (row.transcode_time_s <= 0) {
      throw ValidationError(where + ": transcode_time_s must be positive");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_rd_table(const std::string& path, const std::vector<RdTableRow>& rows) {
  if (rows.empty()) throw ValidationError("rd table: nothing to write");
  const std::vector<int>& grid = rows[0].curve.bitrates_kbps;

  std::ostringstream out;
  std::vector<std::string> cols = shared_columns();
  cols.push_back("preset");
  for (int r : grid) cols.push_back("psnr_at_" + std::to_string(r));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
  for (const RdTableRow& row : rows) {
    if (row.curve.bitrates_kbps != grid) {
      throw ValidationError("rd table: rows use mixed bitrate grids");
    }
    append_shared_fields(out, row.features);
    out << ',' << preset_name(row.preset);
    for (double p : row.curve.psnr_db) out << ',' << format_double(p);
    out << '\n';
  }
  write_file(path, out.str(), "rd table");
}

std::vector<RdTableRow> load_rd_table(const std::string& path) {
  const std::string what = "rd table";
  const std::vector<std::string> lines = read_lines(path, what);
  const std::vector<std::string> header = split_csv_line(lines[0]);

  std::vector<std::string> prefix = shared_columns();
  prefix.push_back("preset");
  if (header.size() <= prefix.size()) {
    check_header(header, prefix, what);  // reports the precise column
    throw ValidationError(what + ": no psnr_at_<bitrate> columns");
  }
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (header[i] != prefix[i]) {
      throw ValidationError(what + ": unexpected column '" + header[i] +
                            "' at position " + std::to_string(i + 1) +
                            " (expected '" + prefix[i] + "')");
    }
  }

  std::vector<int> grid;
  for (std::size_t i = prefix.size(); i < header.size(); ++i) {
    const std::string& col = header[i];
    if (col.rfind("psnr_at_", 0) != 0) {
      throw ValidationError(what + ": unexpected column '" + col +
                            "' at position " + std::to_string(i + 1) +
                            " (expected a psnr_at_<bitrate> column)");
    }
    const int bitrate = static_cast<int>(
        parse_long(col.substr(8), what + " column " + col));
    if (!grid.empty() && bitrate <= grid.back()) {
      throw ValidationError(what + ": column '" + col +
                            "' breaks the increasing bitrate order");
    }
    grid.push_back(bitrate);
  }
  if (grid.size() < 2) {
    throw ValidationError(what + ": needs at least two psnr columns");
  }

  std::vector<RdTableRow> rows;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const std::string where = what + " row " + std::to_string(n);
    const std::vector<std::string> fields = split_csv_line(lines[n]);
    if (fields.size() != header.size()) {
      throw ValidationError(where + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
    }
    RdTableRow row;
    row.features = parse_shared_fields(fields, where);
    row.preset = preset_from_name(fields[prefix.size() - 1]);
    row.curve.bitrates_kbps = grid;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      row.curve.psnr_db.push_back(
          parse_double(fields[prefix.size() + i],
                       where + " column psnr_at_" + std::to_string(grid[i])));
    }
    try {
      validate(row.curve);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

constexpr const char* kModelFormat = "tcplan-models";
constexpr int kModelVersion = 1;

std::string fnv1a64_hex(const std::string& data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[hash & 0xf];
    hash >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

}  // namespace

void save_models(const std::string& path, const ModelSet& models) {
  Json payload = models;
  Json envelope{{"format", kModelFormat},
                {"version", kModelVersion},
                {"checksum", fnv1a64_hex(payload.dump())},
                {"payload", std::move(payload)}};
  write_file(path, envelope.dump(2) + "\n", "model store");
}

ModelSet load_models(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("model store: cannot open '" + path + "'");
  Json envelope;
  try {
    in >> envelope;
  } catch (const Json::parse_error& e) {
    throw ValidationError("model store: corrupt file '" + path +
                          "': " + e.what());
  }
  if (!envelope.is_object() || envelope.value("format", "") != kModelFormat) {
    throw ValidationError("model store: '" + path + "' is not a model file");
  }
  if (envelope.value("version", -1) != kModelVersion) {
    throw ValidationError("model store: unsupported version in '" + path + "'");
  }
  const Json& payload = envelope.at("payload");
  const std::string checksum = envelope.value("checksum", "");
  if (checksum != fnv1a64_hex(payload.dump())) {
    throw ValidationError("model store: checksum mismatch in '" + path + "'");
  }
  return payload.get<ModelSet>();
}

void write_sweep_csv(const std::string& path, const SweepReport& report) {
  std::ostringstream out;
  out << report.axis
      << ",runs,feasible,infeasible,baseline_feasible,mean_planner_psnr,"
         "mean_baseline_psnr";
  for (Preset p : kAllPresets) out << ",count_" << preset_name(p);
  out << '\n';
  for (const SweepRow& row : report.rows) {
    out << format_double(row.budget) << ',' << row.runs << ',' << row.feasible
        << ',' << row.infeasible << ',' << row.baseline_feasible << ','
        << format_double(row.mean_planner_psnr) << ','
        << format_double(row.mean_baseline_psnr);
    for (long c : row.preset_counts) out << ',' << c;
    out << '\n';
  }
  write_file(path, out.str(), "sweep report");
}

void write_sweep_json(const std::string& path, const SweepReport& report) {
  const Json j = report;
  write_file(path, j.dump(2) + "\n", "sweep report");
}

RDCurve load_curve_csv(const std::string& path) {
  const std::string what = "curve file";
  const std::vector<std::string> lines = read_lines(path, what);
  check_header(split_csv_line(lines[0]), {"bitrate_kbps", "psnr_db"}, what);

  RDCurve curve;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const std::string where = what + " row " + std::to_string(n);
    const std::vector<std::string> fields = split_csv_line(lines[n]);
    if (fields.size() != 2) {
      throw ValidationError(where + ": expected 2 fields");
    }
    curve.bitrates_kbps.push_back(
        static_cast<int>(parse_long(fields[0], where + " column bitrate_kbps")));
    curve.psnr_db.push_back(parse_double(fields[1], where + " column psnr_db"));
  }
  validate(curve);
  return curve;
}

void write_curve_csv(const std::string& path, const RDCurve& curve) {
  std::ostringstream out;
  out << "bitrate_kbps,psnr_db\n";
  for (std::size_t i = 0; i < curve.bitrates_kbps.size(); ++i) {
    out << curve.bitrates_kbps[i] << ',' << format_double(curve.psnr_db[i])
        << '\n';
  }
  write_file(path, out.str(), "curve file");
}

void validate(const Config& cfg) {
  build_operating_grid(cfg.presets, cfg.bitrates_kbps);  // throws on misuse
  for (std::size_t i = 1; i < cfg.bitrates_kbps.size(); ++i) {
    if (cfg.bitrates_kbps[i] <= cfg.bitrates_kbps[i - 1]) {
      throw ValidationError("config: bitrates_kbps must be ascending");
    }
  }
  if (cfg.k_clusters < 1) throw ValidationError("config: k_clusters must be >= 1");
  if (cfg.segment_duration_s <= 0) {
    throw ValidationError("config: segment_duration_s must be positive");
  }
  if (cfg.overhead_s < 0 || cfg.overhead_s >= cfg.segment_duration_s) {
    throw ValidationError("config: overhead_s must lie in [0, duration)");
  }
  validate(Budgets{cfg.rate_threshold_kbps, cfg.time_threshold_s});
  if (cfg.planning_segments < 1) {
    throw ValidationError("config: planning_segments must be >= 1");
  }
  if (cfg.gbdt.rounds < 1 || cfg.gbdt.max_depth < 1 ||
      cfg.gbdt.learning_rate <= 0 || cfg.gbdt.min_samples_leaf < 1) {
    throw ValidationError("config: bad gbdt hyperparameters");
  }
  if (cfg.svm_c <= 0 || cfg.svm_tol <= 0 || cfg.svm_max_passes < 1) {
    throw ValidationError("config: bad svm hyperparameters");
  }
  if (cfg.kmeans_max_iter < 1 || cfg.kmeans_tol < 0) {
    throw ValidationError("config: bad kmeans hyperparameters");
  }
}

namespace {

const std::vector<std::string> kConfigKeys = {
    "presets",        "bitrates_kbps",   "k_clusters",
    "segment_duration_s", "overhead_s",  "rate_threshold_kbps",
    "time_threshold_s",   "planning_segments", "gbdt_rounds",
    "gbdt_max_depth", "gbdt_learning_rate",    "gbdt_min_samples_leaf",
    "svm_c",          "svm_tol",         "svm_max_passes",
    "kmeans_max_iter", "kmeans_tol",     "seed",
    "out_dir"};

}  // namespace

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ValidationError("config: cannot parse '" + path + "': " + e.what());
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), it.key()) ==
        kConfigKeys.end()) {
      throw ValidationError("config: unknown key '" + it.key() + "'");
    }
  }

  Config cfg;
  if (j.contains("presets")) j.at("presets").get_to(cfg.presets);
  if (j.contains("bitrates_kbps")) j.at("bitrates_kbps").get_to(cfg.bitrates_kbps);
  cfg.k_clusters = j.value("k_clusters", cfg.k_clusters);
  cfg.segment_duration_s = j.value("segment_duration_s", cfg.segment_duration_s);
  cfg.overhead_s = j.value("overhead_s", cfg.overhead_s);
  cfg.rate_threshold_kbps = j.value("rate_threshold_kbps", cfg.rate_threshold_kbps);
  cfg.time_threshold_s = j.value("time_threshold_s", cfg.time_threshold_s);
  cfg.planning_segments = j.value("planning_segments", cfg.planning_segments);
  cfg.gbdt.rounds = j.value("gbdt_rounds", cfg.gbdt.rounds);
  cfg.gbdt.max_depth = j.value("gbdt_max_depth", cfg.gbdt.max_depth);
  cfg.gbdt.learning_rate = j.value("gbdt_learning_rate", cfg.gbdt.learning_rate);
  cfg.gbdt.min_samples_leaf =
      j.value("gbdt_min_samples_leaf", cfg.gbdt.min_samples_leaf);
  cfg.svm_c = j.value("svm_c", cfg.svm_c);
  cfg.svm_tol = j.value("svm_tol", cfg.svm_tol);
  cfg.svm_max_passes = j.value("svm_max_passes", cfg.svm_max_passes);
  cfg.kmeans_max_iter = j.value("kmeans_max_iter", cfg.kmeans_max_iter);
  cfg.kmeans_tol = j.value("kmeans_tol", cfg.kmeans_tol);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  validate(cfg);
  return cfg;
}

void save_config(const std::string& path, const Config& cfg) {
  Json j{{"presets", cfg.presets},
         {"bitrates_kbps", cfg.bitrates_kbps},
         {"k_clusters", cfg.k_clusters},
         {"segment_duration_s", cfg.segment_duration_s},
         {"overhead_s", cfg.overhead_s},
         {"rate_threshold_kbps", cfg.rate_threshold_kbps},
         {"time_threshold_s", cfg.time_threshold_s},
         {"planning_segments", cfg.planning_segments},
         {"gbdt_rounds", cfg.gbdt.rounds},
         {"gbdt_max_depth", cfg.gbdt.max_depth},
         {"gbdt_learning_rate", cfg.gbdt.learning_rate},
         {"gbdt_min_samples_leaf", cfg.gbdt.min_samples_leaf},
         {"svm_c", cfg.svm_c},
         {"svm_tol", cfg.svm_tol},
         {"svm_max_passes", cfg.svm_max_passes},
         {"kmeans_max_iter", cfg.kmeans_max_iter},
         {"kmeans_tol", cfg.kmeans_tol},
         {"seed", cfg.seed},
         {"out_dir", cfg.out_dir}};
  write_file(path, j.dump(2) + "\n", "config");
}

}  // namespace tcplan
