// cigstream: command-line front end for the online clustering / CIG pipeline.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cigstream/cigstream.hpp"

namespace fs = std::filesystem;
using namespace cigstream;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFloor = 1;
constexpr int kExitError = 2;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// 64-bit FNV-1a, used for artifact fingerprints in the manifest.
std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Config flags shared by subcommands; each maps onto a StreamConfig key.
struct ConfigFlags {
  std::string config_file;
  std::string profile;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "key=value config file")->check(CLI::ExistingFile);
    app->add_option("--paper-profile", profile, "parameter set: bf2006, nh2016 or movies")
        ->check(CLI::IsMember({"bf2006", "nh2016", "movies"}));
    for (const char* key : {"overlap_threshold", "distance_threshold", "min_track_length",
                            "cluster_threshold", "shot_diff_threshold", "window_seconds", "fps",
                            "act1_interval", "act2_interval", "constraint_mode", "boundary_mode"}) {
      std::string flag = std::string("--") + key;
      for (auto& ch : flag)
        if (ch == '_') ch = '-';
      app->add_option(flag, values[key], key);
    }
  }

  StreamConfig resolve() const {
    StreamConfig cfg;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      cfg = parse_config(in, cfg);
    }
    if (!profile.empty()) apply_profile(cfg, profile);
    for (const auto& [key, value] : values)
      if (!value.empty()) set_config_value(cfg, key, value);
    cfg.validate();
    return cfg;
  }
};

int cmd_run(const std::string& stream_path, const ConfigFlags& flags, const fs::path& out_dir,
            std::size_t top_k) {
  using clock = std::chrono::steady_clock;
  auto ms = [](clock::duration d) {
    return std::chrono::duration<double, std::milli>(d).count();
  };

  const StreamConfig cfg = flags.resolve();

  const auto t0 = clock::now();
  const std::string raw = read_file(stream_path);
  DetectionStream stream;
  try {
    stream = load_detection_stream(raw);
  } catch (const StreamError& e) {
    throw StageError("stream-model", e.what());
  }
  const auto t1 = clock::now();
  const PipelineResult result = run_pipeline(stream, cfg);
  const auto t2 = clock::now();

  std::map<std::string, std::string> artifacts;
  artifacts["clusters.json"] = clusters_json(result);
  artifacts["tracks.jsonl"] = tracks_jsonl(result);
  artifacts["cig.json"] = cig_json(result.cig.matrix());
  artifacts["cig.dot"] = cig_dot(result.cig.matrix(), result.importance ? &*result.importance : nullptr);
  artifacts["ged.csv"] = ged_csv(result);
  artifacts["acts.csv"] = result.acts ? acts_csv(*result.acts)
                                      : "boundary,seconds,interval_lo,interval_hi,shots_in_interval,fallback,mode\n";
  artifacts["rank.csv"] = result.importance ? rank_csv(*result.importance, top_k)
                                            : "cluster,importance,centrality,rank\n";
  artifacts["assignments.csv"] = assignments_csv(result, stream);

  const auto faces = face_assignments(result);
  const bool labelled = !faces.empty() && std::all_of(faces.begin(), faces.end(), [&](const FaceAssignment& f) {
    return stream.detections[f.face].label.has_value();
  });
  if (labelled) {
    std::vector<ClusterId> predicted;
    std::vector<std::string> truth;
    for (const auto& f : faces) {
      predicted.push_back(f.cluster);
      truth.push_back(*stream.detections[f.face].label);
    }
    const auto report = benchmark_report(fs::path(stream_path).stem().string(), predicted, truth);
    artifacts["report.txt"] = report.to_text();
    artifacts["report.csv"] = report.to_csv();
  }
  const auto t3 = clock::now();

  nlohmann::json outputs = nlohmann::json::object();
  for (const auto& [name, text] : artifacts)
    outputs[name] = {{"bytes", text.size()}, {"fnv1a", hex(fnv1a(text))}};
  const nlohmann::json manifest{
      {"tool", "cigstream"},
      {"version", "0.1.0"},
      {"inputs", {{"stream", stream_path}, {"stream_fnv1a", hex(fnv1a(raw))}, {"config_file", flags.config_file}}},
      {"config", format_config(cfg)},
      {"stages",
       {{"stream-model", 1}, {"shot-track", 1}, {"online-cluster", 1}, {"cig-graph", 1}, {"narrative-analysis", 1}}},
      {"outputs", outputs},
      {"summary",
       {{"detections", stream.detections.size()},
        {"shots", result.shots.size()},
        {"tracks", result.tracks.size()},
        {"clusters", result.clusters.size()}}},
      {"warnings", result.warnings},
      {"timings_ms", {{"load", ms(t1 - t0)}, {"pipeline", ms(t2 - t1)}, {"export", ms(t3 - t2)}}}};

  fs::create_directories(out_dir);
  for (const auto& [name, text] : artifacts) write_file(out_dir / name, text);
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "shots " << result.shots.size() << ", tracks " << result.tracks.size() << ", clusters "
            << result.clusters.size() << '\n';
  if (result.acts)
    std::cout << "act boundaries " << result.acts->first.seconds << " s, " << result.acts->second.seconds << " s\n";
  if (labelled) std::cout << artifacts["report.txt"];
  return kExitOk;
}

struct Floors {
  double accuracy = -1.0;
  double homogeneity = -1.0;
  double completeness = -1.0;
  double v_measure = -1.0;
};

int cmd_eval(const std::string& predictions, const std::string& truth_path, bool per_track,
             const Floors& floors, const std::string& csv_out) {
  std::ifstream pin(predictions);
  if (!pin) throw std::runtime_error("cannot open " + predictions);
  std::ifstream tin(truth_path);
  if (!tin) throw std::runtime_error("cannot open " + truth_path);
  const auto faces = read_assignments_csv(pin);
  const auto labels = read_truth_labels(tin);
  if (faces.empty()) throw std::invalid_argument("no predictions to score");
  const auto items = labeled_items(faces, labels, per_track ? Granularity::track : Granularity::face);
  const auto report = benchmark_report(fs::path(predictions).stem().string(), items.predicted, items.truth);
  std::cout << report.to_text();
  if (!csv_out.empty()) write_file(csv_out, report.to_csv());

  bool ok = true;
  auto check = [&](const char* name, double value, double floor) {
    if (floor >= 0.0 && value < floor) {
      std::cerr << "floor not met: " << name << ' ' << value << " < " << floor << '\n';
      ok = false;
    }
  };
  check("accuracy", report.accuracy, floors.accuracy);
  check("homogeneity", report.scores.homogeneity, floors.homogeneity);
  check("completeness", report.scores.completeness, floors.completeness);
  check("v_measure", report.scores.v_measure, floors.v_measure);
  return ok ? kExitOk : kExitFloor;
}

int cmd_synth(const std::string& spec_path, std::optional<std::uint64_t> seed, const fs::path& out_dir) {
  MovieSpec spec;
  if (!spec_path.empty()) {
    try {
      spec = movie_spec_from_json(nlohmann::json::parse(read_file(spec_path)));
    } catch (const nlohmann::json::parse_error& e) {
      throw SpecError(std::string("movie spec: ") + e.what());
    }
  }
  if (seed) spec.seed = *seed;
  const auto movie = generate_movie(spec);
  std::ostringstream stream;
  write_stream_jsonl(stream, movie.stream);
  const std::string truth = truth_to_json(movie.truth).dump() + "\n";
  fs::create_directories(out_dir);
  write_file(out_dir / "stream.jsonl", stream.str());
  write_file(out_dir / "truth.json", truth);
  std::cout << "wrote " << movie.stream.detections.size() << " detections, " << movie.truth.shots.size()
            << " shots, " << movie.truth.tracks << " tracks to " << out_dir.string() << '\n';
  return kExitOk;
}

CigMatrix read_cig_json(const std::string& path) {
  const auto j = nlohmann::json::parse(read_file(path));
  const auto rows = j.at("weights").get<std::vector<std::vector<Weight>>>();
  WeightMatrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t p = 0; p < rows.size(); ++p) {
    if (rows[p].size() != rows.size()) throw std::invalid_argument("cig.json: weights must be square");
    for (std::size_t q = 0; q < rows.size(); ++q)
      a(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = rows[p][q];
  }
  return CigMatrix(std::move(a));
}

int cmd_acts(const std::string& ged_path, double duration, const ConfigFlags& flags) {
  const StreamConfig cfg = flags.resolve();
  std::istringstream in(read_file(ged_path));
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> times, ged;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::istringstream fields(line);
    for (std::string f; std::getline(fields, f, ',');) cols.push_back(f);
    if (cols.size() < 5) throw std::invalid_argument("ged.csv: expected shot,t_center,...,ged");
    times.push_back(std::stod(cols[1]));
    ged.push_back(std::stod(cols[4]));
  }
  const auto y = ged_window_series(times, ged, cfg.window_seconds);
  const auto acts = three_act_segment(times, y, duration, cfg);
  std::cout << acts_csv(acts);
  return kExitOk;
}

int cmd_rank(const std::string& cig_path, std::size_t top_k) {
  const auto a = read_cig_json(cig_path);
  if (a.size() == 0) throw std::invalid_argument("empty CIG");
  const auto scores = eigenvector_centrality(a.as_real());
  if (scores.all_zero) std::cerr << "warning: CIG has no edges; importance is uniform\n";
  std::cout << rank_csv(scores, top_k);
  return kExitOk;
}

int cmd_export_dot(const std::string& cig_path, const std::string& out) {
  const auto a = read_cig_json(cig_path);
  std::optional<ImportanceScores> scores;
  if (a.size() > 0) scores = eigenvector_centrality(a.as_real());
  const auto dot = cig_dot(a, scores ? &*scores : nullptr);
  if (out.empty())
    std::cout << dot;
  else
    write_file(out, dot);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online face-track clustering and character interaction graphs"};
  app.require_subcommand(1);

  std::string stream_path, out_dir = "cigstream_out";
  std::size_t top_k = 10;
  ConfigFlags run_flags;
  auto* run = app.add_subcommand("run", "process a detection stream end to end");
  run->add_option("stream", stream_path, "JSON-lines detection stream")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--out", out_dir, "output directory");
  run->add_option("--top-k", top_k, "rows in rank.csv")->check(CLI::PositiveNumber);
  run_flags.attach(run);

  std::string predictions, truth, eval_csv;
  bool per_track = false;
  Floors floors;
  auto* eval = app.add_subcommand("eval", "score predicted clusters against truth labels");
  eval->add_option("predictions", predictions, "assignments.csv from run")->required()->check(CLI::ExistingFile);
  eval->add_option("truth", truth, "truth.json or face,label CSV")->required()->check(CLI::ExistingFile);
  eval->add_flag("--per-track", per_track, "score one item per track instead of per face");
  eval->add_option("--floor-accuracy", floors.accuracy, "minimum accuracy in percent");
  eval->add_option("--floor-h", floors.homogeneity, "minimum homogeneity");
  eval->add_option("--floor-c", floors.completeness, "minimum completeness");
  eval->add_option("--floor-v", floors.v_measure, "minimum V-measure");
  eval->add_option("--csv", eval_csv, "also write the report as CSV");

  std::string spec_path, synth_out = "synth_out";
  std::optional<std::uint64_t> seed;
  auto* synth = app.add_subcommand("synth", "generate a synthetic movie stream with truth");
  synth->add_option("--spec", spec_path, "movie spec JSON")->check(CLI::ExistingFile);
  synth->add_option("--seed", seed, "RNG seed (overrides the spec)");
  synth->add_option("-o,--out", synth_out, "output directory");

  std::string ged_path;
  double duration = 0.0;
  ConfigFlags acts_flags;
  auto* acts = app.add_subcommand("acts", "recompute act boundaries from ged.csv");
  acts->add_option("ged", ged_path, "ged.csv from run")->required()->check(CLI::ExistingFile);
  acts->add_option("--duration", duration, "movie duration in seconds")->required();
  acts_flags.attach(acts);

  std::string cig_path;
  auto* rank = app.add_subcommand("rank", "rank characters by eigenvector centrality");
  rank->add_option("cig", cig_path, "cig.json from run")->required()->check(CLI::ExistingFile);
  rank->add_option("--top-k", top_k, "number of characters")->check(CLI::PositiveNumber);

  std::string dot_out;
  auto* dot = app.add_subcommand("export-dot", "render cig.json as a DOT graph");
  dot->add_option("cig", cig_path, "cig.json from run")->required()->check(CLI::ExistingFile);
  dot->add_option("-o,--out", dot_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*run) return cmd_run(stream_path, run_flags, out_dir, top_k);
    if (*eval) return cmd_eval(predictions, truth, per_track, floors, eval_csv);
    if (*synth) return cmd_synth(spec_path, seed, synth_out);
    if (*acts) return cmd_acts(ged_path, duration, acts_flags);
    if (*rank) return cmd_rank(cig_path, top_k);
    if (*dot) return cmd_export_dot(cig_path, dot_out);
  } catch (const StageError& e) {
    std::cerr << "error in stage " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
