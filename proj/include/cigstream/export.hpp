#pragma once

// Text artifacts produced by a pipeline run. Every writer is deterministic:
// identical results give byte-identical output.

#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cigstream/metrics.hpp"
#include "cigstream/pipeline.hpp"

namespace cigstream {

namespace detail {

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<double> to_vector(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace detail

inline std::string clusters_json(const PipelineResult& r) {
  nlohmann::json clusters = nlohmann::json::array();
  for (std::size_t l = 0; l < r.clusters.size(); ++l) {
    clusters.push_back({{"id", l},
                        {"face_count", r.clusters.face_counts[l]},
                        {"centroid", detail::to_vector(r.clusters.centroids[l])},
                        {"tracks", r.clusters.members[l]}});
  }
  nlohmann::json shots = nlohmann::json::array();
  for (std::size_t s = 0; s < r.assignments.size(); ++s) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& st : r.assignments[s].steps)
      steps.push_back({{"track", st.track}, {"cluster", st.cluster}, {"created", st.created}, {"score", st.score}});
    shots.push_back({{"shot", s}, {"touched", r.assignments[s].touched}, {"steps", steps}});
  }
  return nlohmann::json{{"clusters", clusters}, {"shots", shots}}.dump(2) + "\n";
}

/// One track per line: id, shot, frame span, face count, cluster and mean embedding.
inline std::string tracks_jsonl(const PipelineResult& r) {
  std::ostringstream os;
  for (const auto& t : r.tracks) {
    os << nlohmann::json{{"track", t.id},
                         {"shot", t.shot_index},
                         {"frames", {t.start_frame, t.end_frame}},
                         {"faces", t.size()},
                         {"cluster", r.track_cluster[t.id]},
                         {"mean", detail::to_vector(t.mean_feature())}}
              .dump()
       << '\n';
  }
  return os.str();
}

inline std::string cig_json(const CigMatrix& a) {
  nlohmann::json weights = nlohmann::json::array();
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t p = 0; p < a.size(); ++p) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t q = 0; q < a.size(); ++q) {
      row.push_back(a(p, q));
      if (q >= p && a(p, q) != 0) edges.push_back({{"p", p}, {"q", q}, {"w", a(p, q)}});
    }
    weights.push_back(row);
  }
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t p = 0; p < a.size(); ++p) nodes.push_back(p);
  return nlohmann::json{{"nodes", nodes}, {"weights", weights}, {"edges", edges}}.dump(2) + "\n";
}

/// Undirected DOT graph; pen width grows with edge weight, nodes carry sigma when given.
inline std::string cig_dot(const CigMatrix& a, const ImportanceScores* scores = nullptr) {
  std::ostringstream os;
  os << "graph cig {\n  node [shape=circle];\n";
  Weight peak = 0;
  for (std::size_t p = 0; p < a.size(); ++p)
    for (std::size_t q = p + 1; q < a.size(); ++q) peak = std::max(peak, a(p, q));
  for (std::size_t p = 0; p < a.size(); ++p) {
    os << "  n" << p << " [label=\"" << p;
    if (scores) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", scores->importance(static_cast<Eigen::Index>(p)));
      os << "\\n" << buf;
    }
    os << "\"];\n";
  }
  for (std::size_t p = 0; p < a.size(); ++p) {
    for (std::size_t q = p + 1; q < a.size(); ++q) {
      if (a(p, q) == 0) continue;
      const double width = 1.0 + 7.0 * static_cast<double>(a(p, q)) / static_cast<double>(peak);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", width);
      os << "  n" << p << " -- n" << q << " [weight=" << a(p, q) << ", penwidth=" << buf << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

inline std::string ged_csv(const PipelineResult& r) {
  std::ostringstream os;
  os << "shot,t_center,delta_nodes,delta_edges,ged,y_ged\n";
  const auto& snaps = r.cig.snapshots();
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    os << snaps[i].shot_index << ',' << detail::fmt_double(r.shot_times[i]) << ','
       << snaps[i].delta.new_nodes << ',' << snaps[i].delta.changed_edges << ','
       << snaps[i].delta.ged() << ',' << detail::fmt_double(r.y_ged[i]) << '\n';
  }
  return os.str();
}

inline std::string acts_csv(const ActBoundaries& acts) {
  const char* mode = acts.mode == BoundaryMode::centroid ? "centroid"
                     : acts.mode == BoundaryMode::paper  ? "paper"
                                                         : "baseline";
  std::ostringstream os;
  os << "boundary,seconds,interval_lo,interval_hi,shots_in_interval,fallback,mode\n";
  int k = 1;
  for (const auto* b : {&acts.first, &acts.second}) {
    os << k++ << ',' << detail::fmt_double(b->seconds) << ',' << detail::fmt_double(b->interval.lo)
       << ',' << detail::fmt_double(b->interval.hi) << ',' << b->shots_in_interval << ','
       << (b->fallback ? 1 : 0) << ',' << mode << '\n';
  }
  return os.str();
}

inline std::string rank_csv(const ImportanceScores& scores, std::size_t k) {
  const auto order = rank_characters(scores, k);
  std::ostringstream os;
  os << "cluster,importance,centrality,rank\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto id = static_cast<Eigen::Index>(order[i]);
    os << order[i] << ',' << detail::fmt_double(scores.importance(id)) << ','
       << detail::fmt_double(scores.centrality(id)) << ',' << (i + 1) << '\n';
  }
  return os.str();
}

/// Per-face predictions: stream face index, track, cluster and (if present) label.
inline std::string assignments_csv(const PipelineResult& r, const DetectionStream& stream) {
  std::ostringstream os;
  os << "face,frame,track,cluster,label\n";
  for (const auto& fa : face_assignments(r)) {
    const auto& det = stream.detections[fa.face];
    os << fa.face << ',' << det.frame << ',' << fa.track << ',' << fa.cluster << ','
       << det.label.value_or("") << '\n';
  }
  return os.str();
}

}  // namespace cigstream
