#pragma once

// Shared fixtures and independent reference computations for the test suites.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "cigstream/cigstream.hpp"

namespace cigstream::testing {

inline Embedding unit(std::initializer_list<double> v) {
  Embedding e(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const double x : v) e(i++) = x;
  return e.normalized();
}

inline Embedding random_unit(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Embedding v(d);
  for (int i = 0; i < d; ++i) v(i) = g(rng);
  return v.normalized();
}

/// A track with `n` copies of `feature` spanning [start, start + n - 1].
inline FaceTrack make_track(TrackId id, FrameIndex start, const Embedding& feature, int n = 10) {
  FaceTrack t;
  t.id = id;
  t.start_frame = start;
  t.end_frame = start + n - 1;
  t.features = feature.replicate(1, n);
  t.boxes.assign(static_cast<std::size_t>(n), Box{0, 0, 10, 10});
  return t;
}

/// A track whose columns are the given features, starting at `start`.
inline FaceTrack make_track(TrackId id, FrameIndex start, const std::vector<Embedding>& features) {
  FaceTrack t;
  t.id = id;
  t.start_frame = start;
  t.end_frame = start + static_cast<FrameIndex>(features.size()) - 1;
  t.features.resize(features.front().size(), static_cast<Eigen::Index>(features.size()));
  for (std::size_t j = 0; j < features.size(); ++j) t.features.col(static_cast<Eigen::Index>(j)) = features[j];
  t.boxes.assign(features.size(), Box{0, 0, 10, 10});
  return t;
}

inline Detection make_detection(FrameIndex frame, Box box, const Embedding& e,
                                std::string label = {}) {
  Detection d;
  d.frame = frame;
  d.box = box;
  d.embedding = e;
  if (!label.empty()) d.label = std::move(label);
  return d;
}

/// Best one-to-one accuracy by trying every injective cluster->class map.
inline double brute_force_accuracy(const std::vector<std::vector<std::size_t>>& counts) {
  const std::size_t rows = counts.size();
  const std::size_t cols = rows ? counts.front().size() : 0;
  std::size_t total = 0;
  for (const auto& r : counts)
    for (const auto v : r) total += v;
  // Permute over max(rows, cols) slots; slot >= cols means "unmatched".
  const std::size_t n = std::max(rows, cols);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t correct = 0;
    for (std::size_t r = 0; r < rows; ++r)
      if (perm[r] < cols) correct += counts[r][perm[r]];
    best = std::max(best, correct);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return 100.0 * static_cast<double>(best) / static_cast<double>(total);
}

/// h, c, V through mutual information: h = I / H(class), c = I / H(cluster).
inline HomogeneityCompleteness entropy_oracle(const std::vector<std::vector<std::size_t>>& counts) {
  double n = 0.0;
  for (const auto& r : counts)
    for (const auto v : r) n += static_cast<double>(v);
  std::vector<double> row(counts.size(), 0.0), col(counts.empty() ? 0 : counts[0].size(), 0.0);
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::size_t j = 0; j < counts[i].size(); ++j) {
      row[i] += static_cast<double>(counts[i][j]);
      col[j] += static_cast<double>(counts[i][j]);
    }
  auto h = [n](const std::vector<double>& m) {
    double s = 0.0;
    for (const double x : m)
      if (x > 0) s -= (x / n) * std::log(x / n);
    return s;
  };
  double mi = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::size_t j = 0; j < counts[i].size(); ++j) {
      const double x = static_cast<double>(counts[i][j]);
      if (x > 0) mi += (x / n) * std::log(x * n / (row[i] * col[j]));
    }
  HomogeneityCompleteness out;
  const double hc = h(col);
  const double hk = h(row);
  out.homogeneity = hc == 0.0 ? 1.0 : mi / hc;
  out.completeness = hk == 0.0 ? 1.0 : mi / hk;
  const double s = out.homogeneity + out.completeness;
  out.v_measure = s == 0.0 ? 0.0 : 2.0 * out.homogeneity * out.completeness / s;
  return out;
}

/// Random single-shot clustering instance: K tracks, L existing clusters.
struct ClusterInstance {
  std::vector<FaceTrack> tracks;
  ClusterState state;
};

inline ClusterInstance random_cluster_instance(std::mt19937_64& rng, std::size_t max_k = 6,
                                               std::size_t max_l = 4, int d = 8) {
  ClusterInstance inst;
  const auto k = std::uniform_int_distribution<std::size_t>(1, max_k)(rng);
  const auto l = std::uniform_int_distribution<std::size_t>(0, max_l)(rng);
  std::vector<Embedding> protos;
  for (std::size_t i = 0; i < std::max<std::size_t>(l, 1) + 2; ++i) protos.push_back(random_unit(d, rng));
  std::normal_distribution<double> noise(0.0, 0.15);
  for (std::size_t i = 0; i < l; ++i) {
    inst.state.centroids.push_back(protos[i] * 0.95);
    inst.state.face_counts.push_back(std::uniform_int_distribution<std::size_t>(1, 40)(rng));
    inst.state.members.push_back({1000 + i});
  }
  std::uniform_int_distribution<std::size_t> pick(0, protos.size() - 1);
  std::uniform_int_distribution<int> len(1, 6);
  std::uniform_int_distribution<FrameIndex> start(0, 30);
  for (std::size_t t = 0; t < k; ++t) {
    const auto& base = protos[pick(rng)];
    std::vector<Embedding> feats;
    const int n = len(rng);
    for (int j = 0; j < n; ++j) {
      Embedding v = base;
      for (int i = 0; i < d; ++i) v(i) += noise(rng);
      feats.push_back(v.normalized());
    }
    inst.tracks.push_back(make_track(t, start(rng), feats));
  }
  return inst;
}

/// Random occupancy table: `shots` shots drawn from `chars` characters.
inline std::vector<std::vector<ClusterId>> random_occupancy(std::mt19937_64& rng, std::size_t shots,
                                                            std::size_t chars) {
  std::vector<std::vector<ClusterId>> occ(shots);
  std::bernoulli_distribution present(0.3);
  for (auto& s : occ) {
    for (ClusterId c = 0; c < chars; ++c)
      if (present(rng)) s.push_back(c);
  }
  return occ;
}

}  // namespace cigstream::testing
