#pragma once

// Online assignment of a shot's face tracks to character clusters under
// temporal cannot-link constraints.

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

#include "cigstream/shot_track.hpp"
#include "cigstream/stream_model.hpp"

namespace cigstream {

using ClusterId = std::size_t;
using ConstraintMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

/// Cluster centroids with their face counts and member tracks.
///
/// A centroid is the plain mean of every member face feature; it is not
/// re-normalized, so its norm is at most 1.
struct ClusterState {
  std::vector<Embedding> centroids;
  std::vector<std::size_t> face_counts;
  std::vector<std::vector<TrackId>> members;

  std::size_t size() const { return centroids.size(); }
  bool empty() const { return centroids.empty(); }
};

/// Clusters touched by one shot and the order in which tracks were placed.
struct ShotAssignment {
  struct Step {
    TrackId track;
    ClusterId cluster;
    bool created;
    double score;  // max(D . W) at decision time; 0 when no cluster existed
  };
  std::vector<Step> steps;
  std::vector<ClusterId> touched;  // U_i, sorted ascending

  std::size_t clusters_created() const {
    return static_cast<std::size_t>(
        std::count_if(steps.begin(), steps.end(), [](const Step& s) { return s.created; }));
  }
};

/// Q(p, q) = 0 when tracks p and q overlap in time (so Q(p, p) = 0), else 1.
inline ConstraintMatrix temporal_constraint_matrix(std::span<const FaceTrack> tracks) {
  const auto k = static_cast<Eigen::Index>(tracks.size());
  ConstraintMatrix q(k, k);
  for (Eigen::Index p = 0; p < k; ++p) {
    for (Eigen::Index r = 0; r < k; ++r) {
      q(p, r) = tracks[p].overlaps_in_time(tracks[r]) ? 0 : 1;
    }
  }
  return q;
}

/// 4 minus the mean squared distance between the track's features and `centroid`.
inline double track_cluster_similarity(const Embedding& centroid, const Eigen::MatrixXd& features) {
  const double mean_sq = (features.colwise() - centroid).colwise().squaredNorm().mean();
  return std::clamp(4.0 - mean_sq, 0.0, 4.0);
}

/// Folds a track into cluster `l` as a face-count weighted running mean.
inline void update_centroid(ClusterState& state, ClusterId l, const FaceTrack& track) {
  if (l >= state.size()) throw std::logic_error("update_centroid: unknown cluster id");
  const auto n = static_cast<double>(track.size());
  const auto count = static_cast<double>(state.face_counts[l]);
  state.centroids[l] = (count * state.centroids[l] + track.features.rowwise().sum()) / (count + n);
  state.face_counts[l] += track.size();
  state.members[l].push_back(track.id);
}

/// Opens a new cluster whose centroid is the track's mean feature.
inline ClusterId add_cluster(ClusterState& state, const FaceTrack& track) {
  state.centroids.push_back(track.mean_feature());
  state.face_counts.push_back(track.size());
  state.members.push_back({track.id});
  return state.size() - 1;
}

namespace detail {

template <typename Matrix>
void erase_column(Matrix& m, Eigen::Index col) {
  const auto tail = m.cols() - col - 1;
  if (tail > 0) m.middleCols(col, tail) = m.rightCols(tail).eval();
  m.conservativeResize(Eigen::NoChange, m.cols() - 1);
}

template <typename Matrix>
void erase_row(Matrix& m, Eigen::Index row) {
  const auto tail = m.rows() - row - 1;
  if (tail > 0) m.middleRows(row, tail) = m.bottomRows(tail).eval();
  m.conservativeResize(m.rows() - 1, Eigen::NoChange);
}

}  // namespace detail

/// Assigns every track of one shot to an existing or a new cluster.
///
/// Each step takes the argmax of D . W (ties: lowest cluster, then lowest
/// track). If C is nonempty and the maximum reaches `tau` the track joins that
/// cluster; otherwise the first remaining track opens a new one. The chosen
/// cluster's D row is then recomputed, its W row takes the track's Q row
/// (ConstraintMode::accumulate keeps the element-wise minimum with the old row
/// instead), and the track is removed from D, W, Q and the live index list.
inline ShotAssignment cluster_shot(std::span<const FaceTrack> tracks, ClusterState& state,
                                   double tau, ConstraintMode mode = ConstraintMode::replace) {
  ShotAssignment result;
  if (tracks.empty()) return result;

  ConstraintMatrix q = temporal_constraint_matrix(tracks);
  const auto k0 = static_cast<Eigen::Index>(tracks.size());
  const auto l0 = static_cast<Eigen::Index>(state.size());
  Eigen::MatrixXd d(l0, k0);
  for (Eigen::Index l = 0; l < l0; ++l)
    for (Eigen::Index k = 0; k < k0; ++k)
      d(l, k) = track_cluster_similarity(state.centroids[l], tracks[k].features);
  ConstraintMatrix w = ConstraintMatrix::Ones(l0, k0);
  std::vector<std::size_t> ind(tracks.size());
  for (std::size_t k = 0; k < ind.size(); ++k) ind[k] = k;

  while (!ind.empty()) {
    Eigen::Index best_l = 0;
    Eigen::Index best_k = 0;
    double best = -1.0;
    for (Eigen::Index l = 0; l < d.rows(); ++l) {
      for (Eigen::Index k = 0; k < d.cols(); ++k) {
        const double v = d(l, k) * w(l, k);
        if (v > best) {
          best = v;
          best_l = l;
          best_k = k;
        }
      }
    }

    const double score = d.rows() > 0 ? best : 0.0;
    Eigen::Index l_hat;
    Eigen::Index k_hat;
    bool created = false;
    if (!state.empty() && best >= tau) {
      l_hat = best_l;
      k_hat = best_k;
      update_centroid(state, static_cast<ClusterId>(l_hat), tracks[ind[k_hat]]);
    } else {
      k_hat = 0;
      l_hat = static_cast<Eigen::Index>(add_cluster(state, tracks[ind[k_hat]]));
      created = true;
      d.conservativeResize(d.rows() + 1, Eigen::NoChange);
      w.conservativeResize(w.rows() + 1, Eigen::NoChange);
      w.row(l_hat).setOnes();
    }
    const auto& chosen = tracks[ind[k_hat]];
    result.steps.push_back({chosen.id, static_cast<ClusterId>(l_hat), created, score});

    for (Eigen::Index k = 0; k < d.cols(); ++k)
      d(l_hat, k) = track_cluster_similarity(state.centroids[l_hat], tracks[ind[k]].features);
    if (mode == ConstraintMode::accumulate)
      w.row(l_hat) = w.row(l_hat).cwiseMin(q.row(k_hat));
    else
      w.row(l_hat) = q.row(k_hat);

    detail::erase_column(d, k_hat);
    detail::erase_column(w, k_hat);
    detail::erase_row(q, k_hat);
    detail::erase_column(q, k_hat);
    ind.erase(ind.begin() + k_hat);
  }

  for (const auto& s : result.steps) result.touched.push_back(s.cluster);
  std::sort(result.touched.begin(), result.touched.end());
  result.touched.erase(std::unique(result.touched.begin(), result.touched.end()),
                       result.touched.end());
  return result;
}

}  // namespace cigstream
