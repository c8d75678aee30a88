#pragma once

// Three-act segmentation from the windowed GED series, and character
// importance from eigenvector centrality of the CIG.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cigstream/online_cluster.hpp"
#include "cigstream/stream_model.hpp"

namespace cigstream {

struct BoundaryEstimate {
  double seconds = 0.0;
  Interval interval;
  std::size_t shots_in_interval = 0;
  bool fallback = false;  // no GED mass inside the interval; midpoint returned
};

struct ActBoundaries {
  BoundaryEstimate first;   // t_b1 over B1
  BoundaryEstimate second;  // t_b2 over B2
  BoundaryMode mode = BoundaryMode::centroid;

  bool ordered() const { return first.seconds < second.seconds; }
};

/// GED-weighted time estimate over the shots whose centers lie in `interval`.
///
/// BoundaryMode::centroid returns sum(t*y)/sum(y). BoundaryMode::paper divides
/// by sum(t) instead, which is generally not a time inside the interval.
inline BoundaryEstimate act_boundary(std::span<const double> times, std::span<const double> y,
                                     Interval interval,
                                     BoundaryMode mode = BoundaryMode::centroid) {
  if (times.size() != y.size())
    throw std::invalid_argument("act_boundary: times and y differ in length");
  BoundaryEstimate out;
  out.interval = interval;
  double weighted = 0.0;
  double mass = 0.0;
  double time_sum = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!interval.contains(times[i])) continue;
    ++out.shots_in_interval;
    weighted += times[i] * y[i];
    mass += y[i];
    time_sum += times[i];
  }
  const double denom = mode == BoundaryMode::paper ? time_sum : mass;
  if (out.shots_in_interval == 0 || !(mass > 0.0) || !(denom > 0.0)) {
    out.seconds = interval.midpoint();
    out.fallback = true;
    return out;
  }
  out.seconds = weighted / denom;
  if (mode == BoundaryMode::centroid) out.seconds = std::clamp(out.seconds, interval.lo, interval.hi);
  return out;
}

/// Default search intervals: 22-40 min from the start, 34-14 min before the end.
inline Interval default_act1_interval() { return {22.0 * 60.0, 40.0 * 60.0}; }
inline Interval default_act2_interval(double duration) {
  return {duration - 34.0 * 60.0, duration - 14.0 * 60.0};
}

inline ActBoundaries three_act_segment(std::span<const double> times, std::span<const double> y,
                                       double duration, const StreamConfig& cfg) {
  if (!(duration > 0.0)) throw ConfigError("movie duration must be positive");
  if ((!cfg.act1_interval || !cfg.act2_interval) && duration <= 40.0 * 60.0)
    throw ConfigError("movies of 40 minutes or less need explicit act intervals");
  const Interval b1 = cfg.act1_interval.value_or(default_act1_interval());
  const Interval b2 = cfg.act2_interval.value_or(default_act2_interval(duration));
  for (const auto& iv : {b1, b2}) {
    if (iv.empty() || iv.lo < 0.0 || iv.hi > duration)
      throw ConfigError("act interval lies outside [0, duration]");
  }

  ActBoundaries out;
  out.mode = cfg.boundary_mode;
  if (cfg.boundary_mode == BoundaryMode::baseline) {
    out.first = {25.0 * 60.0, b1, 0, false};
    out.second = {duration - 25.0 * 60.0, b2, 0, false};
    return out;
  }
  out.first = act_boundary(times, y, b1, cfg.boundary_mode);
  out.second = act_boundary(times, y, b2, cfg.boundary_mode);
  return out;
}

struct ImportanceScores {
  Eigen::VectorXd centrality;  // e, unit 2-norm, non-negative
  double eigenvalue = 0.0;     // zeta, Rayleigh quotient on A
  Eigen::VectorXd importance;  // sigma, sums to 1
  int iterations = 0;
  bool converged = false;
  bool all_zero = false;  // A had no edges; sigma is uniform

  double residual(const Eigen::MatrixXd& a) const {
    const double scale = std::abs(eigenvalue) * centrality.norm();
    return scale > 0.0 ? (a * centrality - eigenvalue * centrality).norm() / scale : 0.0;
  }
};

struct PowerIterationOptions {
  double tolerance = 1e-10;  // max-norm change between successive iterates
  int max_iterations = 10000;
};

/// Dominant eigenvector of a symmetric non-negative matrix by power iteration.
///
/// Iterates on A / max(A) + I from the uniform vector; the shift keeps the
/// iteration from oscillating on bipartite graphs and leaves eigenvectors
/// unchanged. For a disconnected graph the component with the largest
/// eigenvalue takes all the weight.
inline ImportanceScores eigenvector_centrality(const Eigen::MatrixXd& a,
                                               PowerIterationOptions opts = {}) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw std::invalid_argument("eigenvector_centrality: need a nonempty square matrix");
  if ((a.array() < 0.0).any())
    throw std::invalid_argument("eigenvector_centrality: negative weight");
  if (!a.isApprox(a.transpose(), 1e-12) && a != a.transpose())
    throw std::invalid_argument("eigenvector_centrality: matrix is not symmetric");

  const auto n = a.rows();
  ImportanceScores out;
  const double peak = a.maxCoeff();
  if (peak == 0.0) {
    out.centrality = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    out.importance = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    out.all_zero = true;
    out.converged = true;
    return out;
  }

  const Eigen::MatrixXd b = a / peak;
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  for (out.iterations = 1; out.iterations <= opts.max_iterations; ++out.iterations) {
    Eigen::VectorXd next = b * x + x;
    next /= next.norm();
    const double change = (next - x).lpNorm<Eigen::Infinity>();
    x = std::move(next);
    if (change < opts.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.iterations = std::min(out.iterations, opts.max_iterations);

  for (Eigen::Index i = 0; i < n; ++i) {
    if (x(i) != 0.0) {
      if (x(i) < 0.0) x = -x;
      break;
    }
  }
  x = x.cwiseMax(0.0);
  out.eigenvalue = x.dot(a * x) / x.squaredNorm();
  out.centrality = x;
  out.importance = x / x.sum();
  return out;
}

/// Top-k node ids by importance, descending; equal scores keep the lower id first.
inline std::vector<ClusterId> rank_characters(std::span<const double> importance, std::size_t k) {
  if (k == 0) throw std::invalid_argument("rank_characters: k must be >= 1");
  std::vector<ClusterId> ids(importance.size());
  std::iota(ids.begin(), ids.end(), ClusterId{0});
  std::stable_sort(ids.begin(), ids.end(),
                   [&](ClusterId x, ClusterId y) { return importance[x] > importance[y]; });
  ids.resize(std::min(k, ids.size()));
  return ids;
}

inline std::vector<ClusterId> rank_characters(const ImportanceScores& scores, std::size_t k) {
  return rank_characters(
      std::span<const double>(scores.importance.data(), static_cast<std::size_t>(scores.importance.size())), k);
}

}  // namespace cigstream
