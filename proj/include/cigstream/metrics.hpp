#pragma once

// Clustering scores against ground-truth labels: one-to-one accuracy and
// homogeneity / completeness / V-measure.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cigstream/online_cluster.hpp"

namespace cigstream {

/// Counts of items per (predicted cluster, truth class) pair.
struct Contingency {
  std::vector<ClusterId> clusters;   // row keys, ascending
  std::vector<std::string> classes;  // column keys, ascending
  std::vector<std::vector<std::size_t>> counts;  // [cluster][class]
  std::size_t total = 0;

  std::size_t row_sum(std::size_t r) const {
    std::size_t s = 0;
    for (const auto c : counts[r]) s += c;
    return s;
  }
  std::size_t col_sum(std::size_t c) const {
    std::size_t s = 0;
    for (const auto& row : counts) s += row[c];
    return s;
  }
};

inline Contingency make_contingency(std::span<const ClusterId> predicted,
                                    std::span<const std::string> truth) {
  if (predicted.size() != truth.size())
    throw std::invalid_argument("predictions and truth labels differ in length");
  if (predicted.empty()) throw std::invalid_argument("cannot score an empty assignment");
  std::map<ClusterId, std::size_t> rows;
  std::map<std::string, std::size_t> cols;
  for (const auto p : predicted) rows.emplace(p, 0);
  for (const auto& t : truth) cols.emplace(t, 0);
  Contingency out;
  for (auto& [id, r] : rows) {
    r = out.clusters.size();
    out.clusters.push_back(id);
  }
  for (auto& [label, c] : cols) {
    c = out.classes.size();
    out.classes.push_back(label);
  }
  out.counts.assign(out.clusters.size(), std::vector<std::size_t>(out.classes.size(), 0));
  for (std::size_t i = 0; i < predicted.size(); ++i) ++out.counts[rows[predicted[i]]][cols[truth[i]]];
  out.total = predicted.size();
  return out;
}

/// Builds a table directly from counts; rows are clusters 0..R-1, columns classes "0".."C-1".
inline Contingency contingency_from_counts(const std::vector<std::vector<std::size_t>>& counts) {
  Contingency out;
  out.counts = counts;
  for (std::size_t r = 0; r < counts.size(); ++r) out.clusters.push_back(r);
  const std::size_t ncols = counts.empty() ? 0 : counts.front().size();
  for (std::size_t c = 0; c < ncols; ++c) out.classes.push_back(std::to_string(c));
  for (const auto& row : counts) {
    if (row.size() != ncols) throw std::invalid_argument("ragged contingency table");
    for (const auto v : row) out.total += v;
  }
  return out;
}

/// Maximum-weight one-to-one matching of rows to columns (Kuhn-Munkres).
/// Returns, for each row, the matched column or -1.
inline std::vector<int> max_weight_matching(const std::vector<std::vector<std::size_t>>& weight) {
  const std::size_t rows = weight.size();
  const std::size_t cols = rows ? weight.front().size() : 0;
  const std::size_t n = std::max(rows, cols);
  if (n == 0) return {};
  std::size_t peak = 0;
  for (const auto& r : weight)
    for (const auto v : r) peak = std::max(peak, v);
  // Minimize peak - weight on the zero-padded square matrix.
  auto cost = [&](std::size_t i, std::size_t j) -> double {
    const std::size_t w = (i < rows && j < cols) ? weight[i][j] : 0;
    return static_cast<double>(peak - w);
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> match(rows, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] != 0 && p[j] - 1 < rows && j - 1 < cols) match[p[j] - 1] = static_cast<int>(j - 1);
  }
  return match;
}

/// Percentage of items correctly labelled under the best one-to-one mapping
/// from clusters to classes; clusters left unmatched count as wrong.
inline double clustering_accuracy(const Contingency& t) {
  if (t.total == 0) throw std::invalid_argument("cannot score an empty assignment");
  const auto match = max_weight_matching(t.counts);
  std::size_t correct = 0;
  for (std::size_t r = 0; r < match.size(); ++r)
    if (match[r] >= 0) correct += t.counts[r][static_cast<std::size_t>(match[r])];
  return 100.0 * static_cast<double>(correct) / static_cast<double>(t.total);
}

struct HomogeneityCompleteness {
  double homogeneity = 1.0;
  double completeness = 1.0;
  double v_measure = 1.0;
};

/// Entropy-based scores in nats. h = 1 when there is a single class, c = 1
/// when there is a single cluster, V = 0 when h + c = 0.
inline HomogeneityCompleteness homogeneity_completeness_v(const Contingency& t) {
  if (t.total == 0) throw std::invalid_argument("cannot score an empty assignment");
  const double n = static_cast<double>(t.total);
  auto entropy = [n](const std::vector<std::size_t>& sums) {
    double h = 0.0;
    for (const auto s : sums) {
      if (s == 0) continue;
      const double p = static_cast<double>(s) / n;
      h -= p * std::log(p);
    }
    return h;
  };
  std::vector<std::size_t> class_sums(t.classes.size()), cluster_sums(t.clusters.size());
  for (std::size_t c = 0; c < class_sums.size(); ++c) class_sums[c] = t.col_sum(c);
  for (std::size_t r = 0; r < cluster_sums.size(); ++r) cluster_sums[r] = t.row_sum(r);
  const double h_class = entropy(class_sums);
  const double h_cluster = entropy(cluster_sums);

  // Conditional entropies H(class | cluster) and H(cluster | class).
  double h_class_given_cluster = 0.0;
  double h_cluster_given_class = 0.0;
  for (std::size_t r = 0; r < t.counts.size(); ++r) {
    for (std::size_t c = 0; c < t.counts[r].size(); ++c) {
      const auto nrc = t.counts[r][c];
      if (nrc == 0) continue;
      const double joint = static_cast<double>(nrc) / n;
      h_class_given_cluster -= joint * std::log(static_cast<double>(nrc) / static_cast<double>(cluster_sums[r]));
      h_cluster_given_class -= joint * std::log(static_cast<double>(nrc) / static_cast<double>(class_sums[c]));
    }
  }

  HomogeneityCompleteness out;
  out.homogeneity = h_class == 0.0 ? 1.0 : 1.0 - h_class_given_cluster / h_class;
  out.completeness = h_cluster == 0.0 ? 1.0 : 1.0 - h_cluster_given_class / h_cluster;
  const double s = out.homogeneity + out.completeness;
  out.v_measure = s == 0.0 ? 0.0 : 2.0 * out.homogeneity * out.completeness / s;
  return out;
}

struct ClusterPurity {
  ClusterId cluster = 0;
  std::size_t size = 0;
  std::string majority_label;
  std::size_t majority_count = 0;
  double purity = 0.0;
  std::string matched_label;  // label assigned by the accuracy matching; empty if none
};

struct BenchmarkReport {
  std::string dataset;
  std::size_t items = 0;
  std::size_t cluster_count = 0;
  std::size_t class_count = 0;
  double accuracy = 0.0;  // percent
  HomogeneityCompleteness scores;
  std::vector<ClusterPurity> clusters;

  std::string to_csv() const {
    std::ostringstream os;
    os.precision(10);
    os << "dataset,items,clusters,classes,accuracy,homogeneity,completeness,v_measure\n"
       << dataset << ',' << items << ',' << cluster_count << ',' << class_count << ',' << accuracy
       << ',' << scores.homogeneity << ',' << scores.completeness << ',' << scores.v_measure << '\n'
       << "\ncluster,size,majority_label,majority_count,purity,matched_label\n";
    for (const auto& c : clusters)
      os << c.cluster << ',' << c.size << ',' << c.majority_label << ',' << c.majority_count << ','
         << c.purity << ',' << c.matched_label << '\n';
    return os.str();
  }

  std::string to_text() const {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(4);
    os << "dataset       " << dataset << '\n'
       << "items         " << items << '\n'
       << "clusters      " << cluster_count << " (classes " << class_count << ")\n";
    os.precision(2);
    os << "accuracy      " << accuracy << " %\n";
    os.precision(4);
    os << "homogeneity   " << scores.homogeneity << '\n'
       << "completeness  " << scores.completeness << '\n'
       << "V-measure     " << scores.v_measure << "\n\n"
       << "cluster    size  majority        purity  matched\n";
    for (const auto& c : clusters) {
      std::string label = c.majority_label;
      label.resize(std::max<std::size_t>(label.size(), 14), ' ');
      std::ostringstream row;
      row.setf(std::ios::fixed);
      row.precision(4);
      row.width(7);
      row << c.cluster;
      row.width(8);
      row << c.size << "  " << label << "  " << c.purity << "  "
          << (c.matched_label.empty() ? "-" : c.matched_label);
      os << row.str() << '\n';
    }
    return os.str();
  }
};

inline BenchmarkReport benchmark_report(std::string dataset, std::span<const ClusterId> predicted,
                                        std::span<const std::string> truth) {
  const Contingency t = make_contingency(predicted, truth);
  BenchmarkReport out;
  out.dataset = std::move(dataset);
  out.items = t.total;
  out.cluster_count = t.clusters.size();
  out.class_count = t.classes.size();
  out.accuracy = clustering_accuracy(t);
  out.scores = homogeneity_completeness_v(t);
  const auto match = max_weight_matching(t.counts);
  for (std::size_t r = 0; r < t.clusters.size(); ++r) {
    ClusterPurity row;
    row.cluster = t.clusters[r];
    row.size = t.row_sum(r);
    const auto best = std::max_element(t.counts[r].begin(), t.counts[r].end());
    row.majority_count = *best;
    row.majority_label = t.classes[static_cast<std::size_t>(best - t.counts[r].begin())];
    row.purity = static_cast<double>(row.majority_count) / static_cast<double>(row.size);
    if (match[r] >= 0) row.matched_label = t.classes[static_cast<std::size_t>(match[r])];
    out.clusters.push_back(std::move(row));
  }
  return out;
}

}  // namespace cigstream
