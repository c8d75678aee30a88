#pragma once

// Shot segmentation by frame-difference thresholding, and linking of per-frame
// detections into face tracks within a shot.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <tuple>
#include <vector>

#include "cigstream/stream_model.hpp"

namespace cigstream {

using TrackId = std::size_t;

/// Inclusive frame range [start_frame, end_frame]; `index` is 0-based shot order.
struct Shot {
  std::size_t index = 0;
  FrameIndex start_frame = 0;
  FrameIndex end_frame = 0;

  FrameIndex length() const { return end_frame - start_frame + 1; }
  double center_seconds(double fps) const {
    return static_cast<double>(start_frame + end_frame) / (2.0 * fps);
  }
  bool contains(FrameIndex f) const { return f >= start_frame && f <= end_frame; }
};

/// Face detections of one person over consecutive frames of one shot.
struct FaceTrack {
  TrackId id = 0;
  std::size_t shot_index = 0;
  FrameIndex start_frame = 0;
  FrameIndex end_frame = 0;
  Eigen::MatrixXd features;             // d x N_k, one unit column per face
  std::vector<Box> boxes;               // one per frame
  std::vector<std::size_t> detections;  // indices into the stream's detection list

  std::size_t size() const { return static_cast<std::size_t>(features.cols()); }
  Embedding mean_feature() const { return features.rowwise().mean(); }
  bool overlaps_in_time(const FaceTrack& other) const {
    return start_frame <= other.end_frame && other.start_frame <= end_frame;
  }
};

/// Splits frames [0, last] into shots.
///
/// A cut is placed before every frame whose difference exceeds `threshold`, and
/// after every explicit shot end marker. `last` is the final frame of the
/// stream; the range also extends to cover every diff and marker.
inline std::vector<Shot> detect_shot_boundaries(std::span<const FrameDiff> diffs, double threshold,
                                                std::span<const FrameIndex> shot_ends = {},
                                                FrameIndex last = -1) {
  for (const auto& d : diffs) last = std::max(last, d.frame);
  for (const auto e : shot_ends) last = std::max(last, e);
  std::vector<Shot> shots;
  if (last < 0) return shots;

  std::vector<FrameIndex> starts{0};
  for (const auto& d : diffs) {
    if (d.frame > 0 && d.diff > threshold) starts.push_back(d.frame);
  }
  for (const auto e : shot_ends) {
    if (e + 1 <= last) starts.push_back(e + 1);
  }
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());

  shots.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const FrameIndex end = i + 1 < starts.size() ? starts[i + 1] - 1 : last;
    shots.push_back(Shot{i, starts[i], end});
  }
  return shots;
}

/// Intersection area over the larger box area, as a percentage in [0, 100].
inline double face_overlap(const Box& a, const Box& b) {
  const double w = std::min(a.x + a.width, b.x + b.width) - std::max(a.x, b.x);
  const double h = std::min(a.y + a.height, b.y + b.height) - std::max(a.y, b.y);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return 100.0 * (w * h) / std::max(a.area(), b.area());
}

/// Squared Euclidean distance; lies in [0, 4] for unit vectors.
template <typename A, typename B>
double feature_distance(const Eigen::MatrixBase<A>& u, const Eigen::MatrixBase<B>& v) {
  return (u - v).squaredNorm();
}

/// Links the detections of one shot into face tracks.
///
/// `detections` must be sorted by frame and all lie inside `shot`;
/// `first_detection` is the stream index of `detections[0]`. Within each
/// frame, (track, detection) pairs passing both the overlap and distance tests
/// are matched greedily by decreasing overlap. A track that is not extended in
/// the next frame is closed. Tracks shorter than `min_track_length` are dropped;
/// kept tracks are numbered from `first_track_id` in order of start frame.
inline std::vector<FaceTrack> build_face_tracks(std::span<const Detection> detections,
                                                const Shot& shot, const StreamConfig& cfg,
                                                TrackId first_track_id = 0,
                                                std::size_t first_detection = 0) {
  struct Building {
    std::vector<std::size_t> members;  // local indices into `detections`
    FrameIndex last_frame;
  };
  std::vector<Building> all;
  std::vector<std::size_t> open;  // indices into `all` whose last frame is the previous frame
  const double min_overlap = 100.0 * cfg.overlap_threshold;

  std::size_t i = 0;
  while (i < detections.size()) {
    const FrameIndex frame = detections[i].frame;
    std::size_t j = i;
    while (j < detections.size() && detections[j].frame == frame) ++j;

    std::vector<std::size_t> live;
    for (const auto t : open) {
      if (all[t].last_frame + 1 == frame) live.push_back(t);
    }

    // Candidate pairs: (overlap, track, detection).
    std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
    for (const auto t : live) {
      const auto& tail = detections[all[t].members.back()];
      for (std::size_t k = i; k < j; ++k) {
        const double ov = face_overlap(tail.box, detections[k].box);
        if (ov > min_overlap &&
            feature_distance(tail.embedding, detections[k].embedding) <= cfg.distance_threshold) {
          candidates.emplace_back(ov, t, k);
        }
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
      if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
      return std::get<2>(a) < std::get<2>(b);
    });

    std::vector<bool> det_used(j - i, false);
    std::vector<std::size_t> next_open;
    std::vector<bool> track_used(all.size(), false);
    for (const auto& [ov, t, k] : candidates) {
      if (track_used[t] || det_used[k - i]) continue;
      track_used[t] = true;
      det_used[k - i] = true;
      all[t].members.push_back(k);
      all[t].last_frame = frame;
      next_open.push_back(t);
    }
    for (std::size_t k = i; k < j; ++k) {
      if (det_used[k - i]) continue;
      all.push_back(Building{{k}, frame});
      next_open.push_back(all.size() - 1);
    }
    std::sort(next_open.begin(), next_open.end());
    open = std::move(next_open);
    i = j;
  }

  std::vector<FaceTrack> tracks;
  TrackId next_id = first_track_id;
  for (const auto& b : all) {  // `all` is already ordered by start frame
    if (b.members.size() < static_cast<std::size_t>(cfg.min_track_length)) continue;
    FaceTrack tr;
    tr.id = next_id++;
    tr.shot_index = shot.index;
    tr.start_frame = detections[b.members.front()].frame;
    tr.end_frame = detections[b.members.back()].frame;
    const auto dim = detections[b.members.front()].embedding.size();
    tr.features.resize(dim, static_cast<Eigen::Index>(b.members.size()));
    for (std::size_t m = 0; m < b.members.size(); ++m) {
      const auto& det = detections[b.members[m]];
      tr.features.col(static_cast<Eigen::Index>(m)) = det.embedding;
      tr.boxes.push_back(det.box);
      tr.detections.push_back(first_detection + b.members[m]);
    }
    tracks.push_back(std::move(tr));
  }
  return tracks;
}

/// Half-open index range [begin, end) of detections falling inside each shot.
inline std::vector<std::pair<std::size_t, std::size_t>> partition_by_shot(
    std::span<const Detection> detections, std::span<const Shot> shots) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  ranges.reserve(shots.size());
  std::size_t pos = 0;
  for (const auto& shot : shots) {
    while (pos < detections.size() && detections[pos].frame < shot.start_frame) ++pos;
    const std::size_t begin = pos;
    while (pos < detections.size() && detections[pos].frame <= shot.end_frame) ++pos;
    ranges.emplace_back(begin, pos);
  }
  return ranges;
}

}  // namespace cigstream
