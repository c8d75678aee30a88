#pragma once

// Brute-force reference implementations used by the property and acceptance
// tests. Each one recomputes from scratch and shares no bookkeeping with the
// online code paths it checks.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cigstream/cig_graph.hpp"
#include "cigstream/online_cluster.hpp"

namespace cigstream {

/// Single-shot clustering that rebuilds the full similarity and weight
/// matrices before every assignment instead of deleting columns.
///
/// The weight of (cluster l, remaining track k) is 1 when l has received no
/// track in this shot; otherwise it is the temporal constraint between k and
/// the last track placed in l (replace) or all tracks placed in l (accumulate).
inline ShotAssignment oracle_cluster_shot(std::span<const FaceTrack> tracks, ClusterState& state,
                                          double tau, ConstraintMode mode = ConstraintMode::replace) {
  ShotAssignment result;
  const std::size_t k_total = tracks.size();
  std::vector<bool> done(k_total, false);
  std::vector<std::vector<std::size_t>> placed;  // per cluster: local track indices placed this shot

  auto similarity = [&](const Embedding& c, const FaceTrack& t) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < t.features.cols(); ++j) {
      double sq = 0.0;
      for (Eigen::Index r = 0; r < t.features.rows(); ++r) {
        const double diff = t.features(r, j) - c(r);
        sq += diff * diff;
      }
      acc += sq;
    }
    return std::clamp(4.0 - acc / static_cast<double>(t.features.cols()), 0.0, 4.0);
  };
  auto apart = [&](std::size_t a, std::size_t b) {
    return tracks[a].end_frame < tracks[b].start_frame || tracks[b].end_frame < tracks[a].start_frame;
  };
  auto weight = [&](std::size_t l, std::size_t k) {
    if (l >= placed.size() || placed[l].empty()) return 1;
    if (mode == ConstraintMode::replace) return apart(placed[l].back(), k) ? 1 : 0;
    for (const auto p : placed[l])
      if (!apart(p, k)) return 0;
    return 1;
  };

  for (std::size_t step = 0; step < k_total; ++step) {
    double best = -1.0;
    std::size_t best_l = 0;
    std::size_t best_k = 0;
    for (std::size_t l = 0; l < state.size(); ++l) {
      for (std::size_t k = 0; k < k_total; ++k) {
        if (done[k]) continue;
        const double v = similarity(state.centroids[l], tracks[k]) * weight(l, k);
        if (v > best) {
          best = v;
          best_l = l;
          best_k = k;
        }
      }
    }

    std::size_t l_hat;
    std::size_t k_hat;
    bool created = false;
    if (state.size() > 0 && best >= tau) {
      l_hat = best_l;
      k_hat = best_k;
      const auto& t = tracks[k_hat];
      const double count = static_cast<double>(state.face_counts[l_hat]);
      Embedding sum = Embedding::Zero(t.features.rows());
      for (Eigen::Index j = 0; j < t.features.cols(); ++j) sum += t.features.col(j);
      state.centroids[l_hat] =
          (count * state.centroids[l_hat] + sum) / (count + static_cast<double>(t.size()));
      state.face_counts[l_hat] += t.size();
      state.members[l_hat].push_back(t.id);
    } else {
      k_hat = static_cast<std::size_t>(std::find(done.begin(), done.end(), false) - done.begin());
      const auto& t = tracks[k_hat];
      Embedding sum = Embedding::Zero(t.features.rows());
      for (Eigen::Index j = 0; j < t.features.cols(); ++j) sum += t.features.col(j);
      state.centroids.push_back(sum / static_cast<double>(t.size()));
      state.face_counts.push_back(t.size());
      state.members.push_back({t.id});
      l_hat = state.size() - 1;
      created = true;
    }
    if (placed.size() < state.size()) placed.resize(state.size());
    placed[l_hat].push_back(k_hat);
    done[k_hat] = true;
    result.steps.push_back({tracks[k_hat].id, l_hat, created, best < 0.0 ? 0.0 : best});
  }

  for (const auto& s : result.steps) result.touched.push_back(s.cluster);
  std::sort(result.touched.begin(), result.touched.end());
  result.touched.erase(std::unique(result.touched.begin(), result.touched.end()),
                       result.touched.end());
  return result;
}

/// Evaluates the co-occurrence counts of the whole movie in one pass:
/// for every shot i and unordered pair {p, q}, +1 for a (p, q) split across
/// shots i and i-1, +1 if both are in shot i, +1 for a split across i and i+1.
inline CigMatrix oracle_cig(const std::vector<std::vector<ClusterId>>& occupancy) {
  std::size_t n = 0;
  for (const auto& shot : occupancy)
    for (const auto id : shot) n = std::max(n, id + 1);
  WeightMatrix a = WeightMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  std::vector<std::vector<bool>> in(occupancy.size(), std::vector<bool>(n, false));
  for (std::size_t i = 0; i < occupancy.size(); ++i)
    for (const auto id : occupancy[i]) in[i][id] = true;
  auto present = [&](std::ptrdiff_t i, std::size_t p) {
    return i >= 0 && i < static_cast<std::ptrdiff_t>(occupancy.size()) && in[static_cast<std::size_t>(i)][p];
  };

  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(occupancy.size()); ++i) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p; q < n; ++q) {
        Weight w = 0;
        if ((present(i, p) && present(i - 1, q)) || (present(i, q) && present(i - 1, p))) ++w;
        if (present(i, p) && present(i, q)) ++w;
        if ((present(i, p) && present(i + 1, q)) || (present(i, q) && present(i + 1, p))) ++w;
        const auto pi = static_cast<Eigen::Index>(p);
        const auto qi = static_cast<Eigen::Index>(q);
        a(pi, qi) += w;
        if (p != q) a(qi, pi) += w;
      }
    }
  }
  return CigMatrix(std::move(a));
}

struct DominantEigen {
  double eigenvalue = 0.0;
  Eigen::VectorXd vector;  // unit 2-norm, first nonzero component positive
  double residual = 0.0;
  bool ok = false;  // residual within 1e-10
};

/// Dominant eigenpair of a small symmetric non-negative matrix.
///
/// Runs 2^20 (> 10^6) power steps on A + rho*I, rho = max row sum, as twenty
/// normalized squarings of the iteration matrix, applied to the all-ones vector.
inline DominantEigen oracle_dominant_eig(const Eigen::MatrixXd& a) {
  const auto n = a.rows();
  DominantEigen out;
  const double rho = a.rowwise().sum().maxCoeff();
  if (rho == 0.0) {
    out.vector = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    out.ok = true;
    return out;
  }
  Eigen::MatrixXd m = a + rho * Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < 20; ++i) {
    m = (m * m).eval();
    m /= m.maxCoeff();
  }
  Eigen::VectorXd v = m * Eigen::VectorXd::Ones(n);
  v.normalize();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(v(i)) > 0.0) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  out.vector = v;
  out.eigenvalue = v.dot(a * v);
  out.residual = (a * v - out.eigenvalue * v).norm() / std::abs(out.eigenvalue);
  out.ok = out.residual <= 1e-10;
  return out;
}

}  // namespace cigstream
