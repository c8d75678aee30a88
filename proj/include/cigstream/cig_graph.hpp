#pragma once

// Character interaction graph: a symmetric co-occurrence count matrix grown
// shot by shot, plus graph edit distances between successive snapshots.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cigstream/online_cluster.hpp"

namespace cigstream {

using Weight = std::int64_t;
using WeightMatrix = Eigen::Matrix<Weight, Eigen::Dynamic, Eigen::Dynamic>;

/// Symmetric non-negative integer adjacency over cluster ids. Only grows.
class CigMatrix {
 public:
  CigMatrix() = default;
  explicit CigMatrix(std::size_t n) : a_(WeightMatrix::Zero(idx(n), idx(n))) {}
  explicit CigMatrix(WeightMatrix a) : a_(std::move(a)) {
    if (a_.rows() != a_.cols() || a_ != a_.transpose() || (a_.array() < 0).any())
      throw std::invalid_argument("CigMatrix: matrix must be square, symmetric and non-negative");
  }

  std::size_t size() const { return static_cast<std::size_t>(a_.rows()); }
  Weight operator()(std::size_t p, std::size_t q) const { return a_(idx(p), idx(q)); }
  const WeightMatrix& weights() const { return a_; }

  /// Extends the matrix with zero rows and columns up to `n` nodes.
  void grow(std::size_t n) {
    if (n <= size()) return;
    const auto old = a_.rows();
    a_.conservativeResize(idx(n), idx(n));
    a_.bottomRows(idx(n) - old).setZero();
    a_.rightCols(idx(n) - old).setZero();
  }

  /// Adds `w` to the unordered pair {p, q}; the diagonal is incremented once.
  void add(std::size_t p, std::size_t q, Weight w = 1) {
    if (p >= size() || q >= size()) throw std::logic_error("CigMatrix: node id out of range");
    a_(idx(p), idx(q)) += w;
    if (p != q) a_(idx(q), idx(p)) += w;
  }

  Eigen::MatrixXd as_real() const { return a_.cast<double>(); }

  friend bool operator==(const CigMatrix& x, const CigMatrix& y) {
    return x.size() == y.size() && x.a_ == y.a_;
  }

 private:
  static Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }
  WeightMatrix a_;
};

/// Applies one co-occurrence update for the middle shot `curr_mid`.
///
/// For each unordered pair {p, q}: +1 when one of them is in `mid` and the
/// other in `prev`; +1 when both are in `mid` (p == q included); +1 when one is
/// in `mid` and the other in `next`. The matrix first grows to cover every id
/// in the three sets. Sets must be sorted and duplicate-free.
inline void update_cig(CigMatrix& a, std::span<const ClusterId> prev,
                       std::span<const ClusterId> mid, std::span<const ClusterId> next) {
  std::size_t needed = a.size();
  for (const auto set : {prev, mid, next})
    for (const auto id : set) needed = std::max(needed, id + 1);
  a.grow(needed);

  auto contains = [](std::span<const ClusterId> s, ClusterId id) {
    return std::binary_search(s.begin(), s.end(), id);
  };

  // Cross terms against a neighbouring shot. A pair with both members in mid
  // and in the neighbour satisfies the indicator in both orientations but
  // counts once.
  auto cross = [&](std::span<const ClusterId> other) {
    for (const auto p : mid) {
      for (const auto q : other) {
        if (q < p && contains(mid, q) && contains(other, p)) continue;  // seen as (q, p)
        a.add(p, q);
      }
    }
  };

  cross(prev);
  for (std::size_t i = 0; i < mid.size(); ++i)
    for (std::size_t j = i; j < mid.size(); ++j) a.add(mid[i], mid[j]);
  cross(next);
}

/// Graph edit distance between successive snapshots.
struct GedDelta {
  std::size_t new_nodes = 0;      // delta eta
  std::size_t changed_edges = 0;  // delta e, unordered pairs incl. diagonal
  std::size_t ged() const { return new_nodes + changed_edges; }

  friend bool operator==(const GedDelta&, const GedDelta&) = default;
};

inline GedDelta graph_edit_distance(const CigMatrix& prev, const CigMatrix& curr) {
  if (curr.size() < prev.size())
    throw std::logic_error("graph_edit_distance: graph shrank between snapshots");
  GedDelta out;
  out.new_nodes = curr.size() - prev.size();
  for (std::size_t p = 0; p < curr.size(); ++p) {
    for (std::size_t q = p; q < curr.size(); ++q) {
      const Weight before = (p < prev.size() && q < prev.size()) ? prev(p, q) : 0;
      if (curr(p, q) != before) ++out.changed_edges;
    }
  }
  return out;
}

/// A frozen copy of A after shot `shot_index` received its co-occurrence update.
struct CigSnapshot {
  std::size_t shot_index = 0;
  CigMatrix matrix;
  GedDelta delta;
};

/// Drives update_cig from the per-shot touched-cluster sets as they arrive.
///
/// Shot i can only be updated once shot i + 1 is known, so push_shot(i + 1)
/// emits the snapshot for shot i and finalize() emits the last one.
class CigBuilder {
 public:
  void push_shot(std::vector<ClusterId> touched) {
    if (finalized_) throw std::logic_error("CigBuilder: push_shot after finalize");
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    sets_.push_back(std::move(touched));
    if (sets_.size() >= 2) advance(sets_.size() - 2);
  }

  void finalize() {
    if (finalized_) return;
    finalized_ = true;
    if (!sets_.empty()) advance(sets_.size() - 1);
  }

  const CigMatrix& matrix() const { return a_; }
  const std::vector<CigSnapshot>& snapshots() const { return snapshots_; }
  const std::vector<std::vector<ClusterId>>& touched_sets() const { return sets_; }
  bool finalized() const { return finalized_; }

 private:
  void advance(std::size_t mid) {
    static const std::vector<ClusterId> none;
    const auto& prev = mid > 0 ? sets_[mid - 1] : none;
    const auto& next = mid + 1 < sets_.size() ? sets_[mid + 1] : none;
    const CigMatrix before = a_;
    update_cig(a_, prev, sets_[mid], next);
    snapshots_.push_back({mid, a_, graph_edit_distance(before, a_)});
  }

  CigMatrix a_;
  std::vector<std::vector<ClusterId>> sets_;
  std::vector<CigSnapshot> snapshots_;
  bool finalized_ = false;
};

/// y_i = sum of ged_j over shots j whose center lies within window/2 of t_i.
inline std::vector<double> ged_window_series(std::span<const double> times,
                                             std::span<const double> ged, double window_seconds) {
  if (times.size() != ged.size())
    throw std::invalid_argument("ged_window_series: times and ged differ in length");
  const double half = 0.5 * window_seconds;
  std::vector<double> y(times.size(), 0.0);
  // Shot centers are non-decreasing, so a two-pointer sweep suffices.
  std::size_t lo = 0;
  std::size_t hi = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    while (hi < times.size() && times[hi] - times[i] <= half) sum += ged[hi++];
    while (lo < hi && times[i] - times[lo] > half) sum -= ged[lo++];
    y[i] = sum;
  }
  return y;
}

}  // namespace cigstream
