#pragma once

// Canonical record types shared by every stage of the pipeline.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cigstream {

using FrameIndex = std::int64_t;
using Embedding = Eigen::VectorXd;

/// Axis-aligned face box in pixels.
struct Box {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  double area() const { return width * height; }
  bool valid() const { return width > 0.0 && height > 0.0; }
};

/// One detected face in one frame.
struct Detection {
  FrameIndex frame = 0;
  Box box;
  Embedding embedding;
  std::optional<std::string> label;
};

/// Mean absolute pixel difference between a frame and its predecessor.
struct FrameDiff {
  FrameIndex frame = 0;
  double diff = 0.0;
};

/// Closed time interval in seconds.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double t) const { return t >= lo && t <= hi; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool empty() const { return hi < lo; }
};

enum class ConstraintMode { replace, accumulate };

enum class BoundaryMode {
  centroid,  // sum(t*y) / sum(y)
  paper,     // sum(t*y) / sum(t)
  baseline,  // fixed 25th minute from either end
};

struct StreamConfig {
  double overlap_threshold = 0.85;   // alpha, compared against overlap / 100
  double distance_threshold = 1.0;   // delta_max on squared feature distance
  int min_track_length = 15;
  double cluster_threshold = 3.0;    // tau
  double shot_diff_threshold = 30.0;
  double window_seconds = 60.0;      // T_w
  double fps = 25.0;
  std::optional<Interval> act1_interval;
  std::optional<Interval> act2_interval;
  ConstraintMode constraint_mode = ConstraintMode::replace;
  BoundaryMode boundary_mode = BoundaryMode::centroid;

  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed input records; carries the 1-based source line (0 if unknown).
class StreamError : public std::runtime_error {
 public:
  StreamError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline void StreamConfig::validate() const {
  if (!(overlap_threshold > 0.0 && overlap_threshold <= 1.0))
    throw ConfigError("overlap_threshold must be in (0, 1]");
  if (!(distance_threshold > 0.0))
    throw ConfigError("distance_threshold must be > 0");
  if (min_track_length < 1)
    throw ConfigError("min_track_length must be a positive integer");
  if (!(cluster_threshold >= 0.0 && cluster_threshold <= 4.0))
    throw ConfigError("cluster_threshold must be in [0, 4]");
  if (!(shot_diff_threshold > 0.0))
    throw ConfigError("shot_diff_threshold must be > 0");
  if (!(window_seconds > 0.0))
    throw ConfigError("window_seconds must be > 0");
  if (!(fps > 0.0))
    throw ConfigError("fps must be > 0");
  for (const auto* iv : {&act1_interval, &act2_interval}) {
    if (*iv && ((*iv)->empty() || (*iv)->lo < 0.0))
      throw ConfigError("act intervals must be nonempty and non-negative");
  }
}

/// Scales `v` to unit Euclidean length. Throws StreamError on a zero (or non-finite) norm.
inline Embedding normalize_embedding(const Embedding& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw StreamError("embedding has zero or non-finite norm");
  return v / norm;
}

}  // namespace cigstream
