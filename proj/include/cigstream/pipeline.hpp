#pragma once

// End-to-end processing of a detection stream, one shot at a time.

#include <optional>
#include <string>
#include <vector>

#include "cigstream/cig_graph.hpp"
#include "cigstream/narrative.hpp"
#include "cigstream/online_cluster.hpp"
#include "cigstream/shot_track.hpp"
#include "cigstream/stream_io.hpp"

namespace cigstream {

struct PipelineResult {
  std::vector<Shot> shots;
  std::vector<FaceTrack> tracks;  // tracks[i].id == i
  ClusterState clusters;
  std::vector<ShotAssignment> assignments;  // one per shot
  std::vector<ClusterId> track_cluster;     // cluster of each track
  CigBuilder cig;
  std::vector<double> shot_times;  // center of each shot, seconds
  std::vector<double> ged;         // per shot
  std::vector<double> y_ged;       // windowed
  double duration_seconds = 0.0;
  std::optional<ActBoundaries> acts;
  std::optional<ImportanceScores> importance;
  std::vector<std::string> warnings;
};

/// Stage-tagged failure so callers can report where the pipeline stopped.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

inline PipelineResult run_pipeline(const DetectionStream& stream, const StreamConfig& cfg) {
  cfg.validate();
  PipelineResult out;
  if (stream.empty()) {
    out.warnings.push_back("empty stream: nothing to process");
    return out;
  }

  out.shots = detect_shot_boundaries(stream.diffs, cfg.shot_diff_threshold, stream.shot_ends,
                                     stream.last_frame());
  out.duration_seconds = static_cast<double>(stream.last_frame() + 1) / cfg.fps;
  const auto ranges = partition_by_shot(stream.detections, out.shots);

  for (std::size_t s = 0; s < out.shots.size(); ++s) {
    const auto [begin, end] = ranges[s];
    std::vector<FaceTrack> shot_tracks;
    try {
      shot_tracks = build_face_tracks(
          std::span<const Detection>(stream.detections).subspan(begin, end - begin), out.shots[s],
          cfg, out.tracks.size(), begin);
    } catch (const std::exception& e) {
      throw StageError("shot-track (shot " + std::to_string(s) + ")", e.what());
    }

    ShotAssignment assigned;
    try {
      assigned = cluster_shot(shot_tracks, out.clusters, cfg.cluster_threshold, cfg.constraint_mode);
    } catch (const std::exception& e) {
      throw StageError("online-cluster (shot " + std::to_string(s) + ")", e.what());
    }
    out.track_cluster.resize(out.track_cluster.size() + shot_tracks.size());
    for (const auto& step : assigned.steps) out.track_cluster[step.track] = step.cluster;
    for (auto& t : shot_tracks) out.tracks.push_back(std::move(t));

    out.cig.push_shot(assigned.touched);
    out.assignments.push_back(std::move(assigned));
    out.shot_times.push_back(out.shots[s].center_seconds(cfg.fps));
  }
  out.cig.finalize();

  out.ged.reserve(out.cig.snapshots().size());
  for (const auto& snap : out.cig.snapshots()) out.ged.push_back(static_cast<double>(snap.delta.ged()));
  out.y_ged = ged_window_series(out.shot_times, out.ged, cfg.window_seconds);

  try {
    out.acts = three_act_segment(out.shot_times, out.y_ged, out.duration_seconds, cfg);
    if (out.acts->first.fallback) out.warnings.push_back("no GED mass in act I interval; using midpoint");
    if (out.acts->second.fallback) out.warnings.push_back("no GED mass in act II interval; using midpoint");
    if (!out.acts->ordered()) out.warnings.push_back("act boundary I is not before act boundary II");
  } catch (const ConfigError& e) {
    out.warnings.push_back(std::string("act segmentation skipped: ") + e.what());
  }

  if (out.cig.matrix().size() > 0) {
    out.importance = eigenvector_centrality(out.cig.matrix().as_real());
    if (out.importance->all_zero) out.warnings.push_back("CIG has no edges; importance is uniform");
    if (!out.importance->converged) out.warnings.push_back("power iteration hit the iteration cap");
  } else {
    out.warnings.push_back("no face tracks survived; CIG is empty");
  }
  return out;
}

/// Predicted cluster and truth label per face that ended up in a kept track.
struct FaceAssignment {
  std::size_t face = 0;  // index into the stream's detections
  TrackId track = 0;
  ClusterId cluster = 0;
};

inline std::vector<FaceAssignment> face_assignments(const PipelineResult& r) {
  std::vector<FaceAssignment> out;
  for (const auto& t : r.tracks)
    for (const auto face : t.detections) out.push_back({face, t.id, r.track_cluster[t.id]});
  std::sort(out.begin(), out.end(),
            [](const FaceAssignment& a, const FaceAssignment& b) { return a.face < b.face; });
  return out;
}

}  // namespace cigstream
