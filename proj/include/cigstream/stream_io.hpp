#pragma once

// JSON-lines detection stream reader and flat key=value config reader.

#include <algorithm>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "cigstream/stream_model.hpp"

namespace cigstream {

struct DetectionStream {
  std::vector<Detection> detections;  // sorted by frame, stable w.r.t. input order
  std::vector<FrameDiff> diffs;       // strictly increasing frames
  std::vector<FrameIndex> shot_ends;  // sorted, unique; a shot ends at (and includes) this frame
  int dimension = 0;                  // 0 when the stream has no detections

  bool empty() const { return detections.empty() && diffs.empty() && shot_ends.empty(); }

  /// Highest frame index mentioned by any record, or -1 for an empty stream.
  FrameIndex last_frame() const {
    FrameIndex last = -1;
    if (!detections.empty()) last = std::max(last, detections.back().frame);
    if (!diffs.empty()) last = std::max(last, diffs.back().frame);
    if (!shot_ends.empty()) last = std::max(last, shot_ends.back());
    return last;
  }
};

namespace detail {

inline FrameIndex read_frame(const nlohmann::json& rec, std::size_t line) {
  const auto it = rec.find("frame");
  if (it == rec.end() || !it->is_number_integer())
    throw StreamError("missing or non-integer \"frame\"", line);
  const auto frame = it->get<FrameIndex>();
  if (frame < 0) throw StreamError("negative frame index", line);
  return frame;
}

inline std::vector<double> read_numbers(const nlohmann::json& rec, const char* key,
                                        std::size_t line) {
  const auto it = rec.find(key);
  if (it == rec.end() || !it->is_array())
    throw StreamError(std::string("missing array \"") + key + "\"", line);
  std::vector<double> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_number()) throw StreamError(std::string("non-numeric entry in \"") + key + "\"", line);
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

/// Reads a JSON-lines stream of "det", "diff" and "shot_end" records.
///
/// Embeddings are normalized on ingest and must share one dimension d >= 2.
/// Errors carry the offending 1-based line number.
inline DetectionStream load_detection_stream(std::istream& in) {
  DetectionStream out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;

    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw StreamError(std::string("malformed JSON: ") + e.what(), line);
    }
    if (!rec.is_object()) throw StreamError("record is not a JSON object", line);
    const auto type_it = rec.find("type");
    if (type_it == rec.end() || !type_it->is_string())
      throw StreamError("missing \"type\"", line);
    const auto type = type_it->get<std::string>();

    if (type == "det") {
      Detection det;
      det.frame = detail::read_frame(rec, line);
      const auto box = detail::read_numbers(rec, "box", line);
      if (box.size() != 4) throw StreamError("\"box\" must have 4 entries", line);
      det.box = Box{box[0], box[1], box[2], box[3]};
      if (!det.box.valid()) throw StreamError("box width and height must be positive", line);

      const auto emb = detail::read_numbers(rec, "emb", line);
      if (emb.size() < 2) throw StreamError("embedding dimension must be >= 2", line);
      if (out.dimension == 0) {
        out.dimension = static_cast<int>(emb.size());
      } else if (static_cast<int>(emb.size()) != out.dimension) {
        throw StreamError("embedding dimension " + std::to_string(emb.size()) +
                              " differs from stream dimension " + std::to_string(out.dimension),
                          line);
      }
      try {
        det.embedding = normalize_embedding(Eigen::Map<const Embedding>(emb.data(), emb.size()));
      } catch (const StreamError& e) {
        throw StreamError(e.what(), line);
      }
      if (const auto lab = rec.find("label"); lab != rec.end() && !lab->is_null()) {
        if (!lab->is_string()) throw StreamError("\"label\" must be a string", line);
        det.label = lab->get<std::string>();
      }
      out.detections.push_back(std::move(det));
    } else if (type == "diff") {
      FrameDiff d;
      d.frame = detail::read_frame(rec, line);
      const auto v = rec.find("v");
      if (v == rec.end() || !v->is_number()) throw StreamError("missing numeric \"v\"", line);
      d.diff = v->get<double>();
      if (!(d.diff >= 0.0)) throw StreamError("frame difference must be non-negative", line);
      out.diffs.push_back(d);
    } else if (type == "shot_end") {
      out.shot_ends.push_back(detail::read_frame(rec, line));
    } else {
      throw StreamError("unknown record type \"" + type + "\"", line);
    }
  }

  std::stable_sort(out.detections.begin(), out.detections.end(),
                   [](const Detection& a, const Detection& b) { return a.frame < b.frame; });
  std::stable_sort(out.diffs.begin(), out.diffs.end(),
                   [](const FrameDiff& a, const FrameDiff& b) { return a.frame < b.frame; });
  for (std::size_t i = 1; i < out.diffs.size(); ++i) {
    if (out.diffs[i].frame == out.diffs[i - 1].frame)
      throw StreamError("duplicate frame difference for frame " +
                        std::to_string(out.diffs[i].frame));
  }
  std::sort(out.shot_ends.begin(), out.shot_ends.end());
  out.shot_ends.erase(std::unique(out.shot_ends.begin(), out.shot_ends.end()),
                      out.shot_ends.end());
  return out;
}

inline DetectionStream load_detection_stream(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_detection_stream(in);
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

/// Overrides tau, alpha and min_track_length with one of the published parameter sets.
inline void apply_profile(StreamConfig& cfg, std::string_view profile) {
  if (profile == "bf2006") {
    cfg.cluster_threshold = 2.80;
    cfg.overlap_threshold = 0.85;
    cfg.min_track_length = 1;
  } else if (profile == "nh2016") {
    cfg.cluster_threshold = 2.85;
    cfg.overlap_threshold = 0.85;
    cfg.min_track_length = 1;
  } else if (profile == "movies") {
    cfg.cluster_threshold = 3.0;
    cfg.overlap_threshold = 0.95;
    cfg.distance_threshold = 1.0;
    cfg.min_track_length = 15;
  } else {
    throw ConfigError("unknown profile \"" + std::string(profile) + "\"");
  }
}

inline Interval parse_interval(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ConfigError("interval must be \"lo,hi\": " + text);
  try {
    Interval iv{std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    if (iv.empty()) throw ConfigError("interval has hi < lo: " + text);
    return iv;
  } catch (const std::logic_error&) {
    throw ConfigError("interval must be \"lo,hi\": " + text);
  }
}

inline ConstraintMode parse_constraint_mode(const std::string& s) {
  if (s == "replace") return ConstraintMode::replace;
  if (s == "accumulate") return ConstraintMode::accumulate;
  throw ConfigError("constraint_mode must be replace or accumulate, got " + s);
}

inline BoundaryMode parse_boundary_mode(const std::string& s) {
  if (s == "centroid") return BoundaryMode::centroid;
  if (s == "paper") return BoundaryMode::paper;
  if (s == "baseline") return BoundaryMode::baseline;
  throw ConfigError("boundary_mode must be centroid, paper or baseline, got " + s);
}

/// Sets a single StreamConfig field by its key name.
inline void set_config_value(StreamConfig& cfg, const std::string& key, const std::string& value) {
  auto num = [&]() {
    try {
      std::size_t pos = 0;
      const double v = std::stod(value, &pos);
      if (pos != value.size()) throw std::invalid_argument(value);
      return v;
    } catch (const std::logic_error&) {
      throw ConfigError("bad numeric value for " + key + ": " + value);
    }
  };
  if (key == "overlap_threshold") cfg.overlap_threshold = num();
  else if (key == "distance_threshold") cfg.distance_threshold = num();
  else if (key == "min_track_length") {
    const double v = num();
    if (v != std::floor(v)) throw ConfigError("min_track_length must be an integer");
    cfg.min_track_length = static_cast<int>(v);
  }
  else if (key == "cluster_threshold") cfg.cluster_threshold = num();
  else if (key == "shot_diff_threshold") cfg.shot_diff_threshold = num();
  else if (key == "window_seconds") cfg.window_seconds = num();
  else if (key == "fps") cfg.fps = num();
  else if (key == "act1_interval") cfg.act1_interval = parse_interval(value);
  else if (key == "act2_interval") cfg.act2_interval = parse_interval(value);
  else if (key == "constraint_mode") cfg.constraint_mode = parse_constraint_mode(value);
  else if (key == "boundary_mode") cfg.boundary_mode = parse_boundary_mode(value);
  else if (key == "profile") apply_profile(cfg, value);
  else throw ConfigError("unknown config key \"" + key + "\"");
}

/// Parses flat `key = value` lines (`#` and `;` comments) on top of `base`, then validates.
inline StreamConfig parse_config(std::istream& in, StreamConfig base = {}) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& [key, node] : tree) {
    if (!node.empty()) throw ConfigError("config sections are not supported: [" + key + "]");
    set_config_value(base, key, node.data());
  }
  base.validate();
  return base;
}

/// Serializes a config in the same key=value format parse_config reads.
inline std::string format_config(const StreamConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "overlap_threshold = " << cfg.overlap_threshold << '\n'
     << "distance_threshold = " << cfg.distance_threshold << '\n'
     << "min_track_length = " << cfg.min_track_length << '\n'
     << "cluster_threshold = " << cfg.cluster_threshold << '\n'
     << "shot_diff_threshold = " << cfg.shot_diff_threshold << '\n'
     << "window_seconds = " << cfg.window_seconds << '\n'
     << "fps = " << cfg.fps << '\n';
  if (cfg.act1_interval) os << "act1_interval = " << cfg.act1_interval->lo << ',' << cfg.act1_interval->hi << '\n';
  if (cfg.act2_interval) os << "act2_interval = " << cfg.act2_interval->lo << ',' << cfg.act2_interval->hi << '\n';
  os << "constraint_mode = " << (cfg.constraint_mode == ConstraintMode::replace ? "replace" : "accumulate") << '\n';
  os << "boundary_mode = "
     << (cfg.boundary_mode == BoundaryMode::centroid ? "centroid"
         : cfg.boundary_mode == BoundaryMode::paper  ? "paper"
                                                     : "baseline")
     << '\n';
  return os.str();
}

}  // namespace cigstream
