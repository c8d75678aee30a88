#pragma once

// Aligning predictions with truth labels at face or track granularity.

#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cigstream/metrics.hpp"
#include "cigstream/pipeline.hpp"

namespace cigstream {

enum class Granularity { face, track };

struct LabeledItems {
  std::vector<ClusterId> predicted;
  std::vector<std::string> truth;
};

/// `labels[face]` is the truth label of stream face `face`.
inline LabeledItems per_face_items(std::span<const FaceAssignment> faces,
                                   std::span<const std::string> labels) {
  LabeledItems out;
  for (const auto& fa : faces) {
    if (fa.face >= labels.size())
      throw std::invalid_argument("prediction for face " + std::to_string(fa.face) +
                                  " has no truth label");
    out.predicted.push_back(fa.cluster);
    out.truth.push_back(labels[fa.face]);
  }
  return out;
}

/// One item per track, labelled with the majority truth label of its faces
/// (ties go to the lexicographically smallest label).
inline LabeledItems per_track_items(std::span<const FaceAssignment> faces,
                                    std::span<const std::string> labels) {
  std::map<TrackId, std::pair<ClusterId, std::map<std::string, std::size_t>>> tracks;
  for (const auto& fa : faces) {
    if (fa.face >= labels.size())
      throw std::invalid_argument("prediction for face " + std::to_string(fa.face) +
                                  " has no truth label");
    auto& entry = tracks[fa.track];
    entry.first = fa.cluster;
    ++entry.second[labels[fa.face]];
  }
  LabeledItems out;
  for (const auto& [id, entry] : tracks) {
    const auto& votes = entry.second;
    auto best = votes.begin();
    for (auto it = votes.begin(); it != votes.end(); ++it)
      if (it->second > best->second) best = it;
    out.predicted.push_back(entry.first);
    out.truth.push_back(best->first);
  }
  return out;
}

inline LabeledItems labeled_items(std::span<const FaceAssignment> faces,
                                  std::span<const std::string> labels, Granularity g) {
  return g == Granularity::face ? per_face_items(faces, labels) : per_track_items(faces, labels);
}

/// Reads the `face,frame,track,cluster,label` CSV written by assignments_csv.
inline std::vector<FaceAssignment> read_assignments_csv(std::istream& in) {
  std::vector<FaceAssignment> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    std::istringstream fields(line);
    std::string face, frame, track, cluster;
    if (!std::getline(fields, face, ',') || !std::getline(fields, frame, ',') ||
        !std::getline(fields, track, ',') || !std::getline(fields, cluster, ','))
      throw StreamError("assignments: expected face,frame,track,cluster", lineno);
    try {
      out.push_back({std::stoul(face), std::stoul(track), std::stoul(cluster)});
    } catch (const std::logic_error&) {
      throw StreamError("assignments: non-numeric field", lineno);
    }
  }
  return out;
}

/// Reads truth labels: either a JSON object with a "labels" array or
/// `face,label` CSV lines (header optional). Missing CSV rows become gaps
/// that fail alignment.
inline std::vector<std::string> read_truth_labels(std::istream& in) {
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return nlohmann::json::parse(text).at("labels").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw StreamError(std::string("truth: ") + e.what());
    }
  }
  std::map<std::size_t, std::string> rows;
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw StreamError("truth: expected face,label", lineno);
    std::size_t face = 0;
    try {
      face = std::stoul(line.substr(0, comma));
    } catch (const std::logic_error&) {
      if (lineno == 1) continue;  // header
      throw StreamError("truth: non-numeric face index", lineno);
    }
    rows[face] = line.substr(comma + 1);
  }
  std::vector<std::string> labels;
  if (!rows.empty()) {
    labels.resize(rows.rbegin()->first + 1);
    for (auto& [face, label] : rows) labels[face] = std::move(label);
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (!rows.count(i)) throw StreamError("truth: no label for face " + std::to_string(i));
  }
  return labels;
}

}  // namespace cigstream
