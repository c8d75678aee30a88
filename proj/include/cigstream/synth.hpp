#pragma once

// Seeded synthetic movies with known characters, shots, co-occurrence and act
// structure, for desk-scale verification of the whole pipeline.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cigstream/online_cluster.hpp"
#include "cigstream/shot_track.hpp"
#include "cigstream/stream_io.hpp"

namespace cigstream {

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename T>
struct Range {
  T lo;
  T hi;
};

struct MovieSpec {
  std::size_t characters = 7;
  int dimension = 16;
  double min_separation = std::numbers::pi / 3.0;  // radians between prototypes
  double noise = 0.05;                             // per-component Gaussian sigma
  double fps = 25.0;
  double duration_seconds = 600.0;
  Range<double> shot_seconds{2.0, 6.0};
  double face_shot_probability = 1.0;  // chance that an ordinary shot shows anyone
  Range<std::size_t> tracks_per_shot{1, 3};
  Range<int> track_frames{20, 50};
  double dropout = 0.0;  // per-detection miss probability

  // Planted act boundaries (seconds). Characters are split over the acts and a
  // character first appears in the burst around the boundary opening its act.
  std::vector<double> act_boundaries;
  double burst_seconds = 30.0;  // width of the burst window centred on a boundary
  Range<std::size_t> burst_tracks{3, 5};

  // Optional explicit cast per shot; overrides the random cast choice when set.
  std::vector<std::vector<std::size_t>> script;

  bool emit_diffs = false;  // per-frame difference records instead of shot_end markers
  std::uint64_t seed = 1;

  void validate() const;
};

struct MovieTruth {
  std::vector<std::string> labels;                   // per detection, stream order
  std::vector<Shot> shots;
  std::vector<std::vector<std::size_t>> occupancy;   // characters per shot, sorted
  std::vector<double> act_boundaries;
  double duration_seconds = 0.0;
  double fps = 0.0;
  std::size_t tracks = 0;
};

struct SyntheticMovie {
  DetectionStream stream;
  MovieTruth truth;
  std::vector<Embedding> prototypes;
};

inline std::string character_label(std::size_t c) { return "c" + std::to_string(c); }

inline void MovieSpec::validate() const {
  if (characters == 0) throw SpecError("need at least one character");
  if (dimension < 2) throw SpecError("dimension must be >= 2");
  if (!(min_separation >= 0.0 && min_separation <= std::numbers::pi))
    throw SpecError("min_separation must be in [0, pi]");
  if (!(noise >= 0.0)) throw SpecError("noise must be non-negative");
  if (!(fps > 0.0) || !(duration_seconds > 0.0)) throw SpecError("fps and duration must be positive");
  if (!(shot_seconds.lo > 0.0) || shot_seconds.hi < shot_seconds.lo)
    throw SpecError("bad shot length range");
  if (track_frames.lo < 1 || track_frames.hi < track_frames.lo) throw SpecError("bad track length range");
  if (shot_seconds.lo * fps < track_frames.lo)
    throw SpecError("shortest shot cannot hold the shortest track");
  if (tracks_per_shot.lo < 1 || tracks_per_shot.hi < tracks_per_shot.lo)
    throw SpecError("bad tracks-per-shot range");
  if (burst_tracks.lo < 1 || burst_tracks.hi < burst_tracks.lo) throw SpecError("bad burst track range");
  if (tracks_per_shot.hi > 8 || burst_tracks.hi > 8) throw SpecError("at most 8 faces fit in a frame");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw SpecError("dropout must be in [0, 1)");
  if (!(face_shot_probability >= 0.0 && face_shot_probability <= 1.0))
    throw SpecError("face_shot_probability must be in [0, 1]");
  if (act_boundaries.size() + 1 > characters)
    throw SpecError("need at least one new character per act");
  for (std::size_t i = 0; i < act_boundaries.size(); ++i) {
    if (!(act_boundaries[i] > 0.0 && act_boundaries[i] < duration_seconds))
      throw SpecError("act boundary outside the movie");
    if (i > 0 && act_boundaries[i] <= act_boundaries[i - 1])
      throw SpecError("act boundaries must be increasing");
  }
  for (const auto& cast : script) {
    if (cast.size() > 8) throw SpecError("at most 8 faces fit in a frame");
    for (const auto c : cast)
      if (c >= characters) throw SpecError("script names an unknown character");
  }
}

/// Unit prototypes with pairwise angle >= spec.min_separation, by rejection sampling.
inline std::vector<Embedding> sample_prototypes(const MovieSpec& spec, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double max_cos = std::cos(spec.min_separation);
  constexpr int kAttempts = 20000;
  std::vector<Embedding> protos;
  for (std::size_t c = 0; c < spec.characters; ++c) {
    bool placed = false;
    for (int attempt = 0; attempt < kAttempts && !placed; ++attempt) {
      Embedding v(spec.dimension);
      for (int i = 0; i < spec.dimension; ++i) v(i) = gauss(rng);
      if (v.norm() == 0.0) continue;
      v.normalize();
      placed = std::all_of(protos.begin(), protos.end(),
                           [&](const Embedding& p) { return p.dot(v) <= max_cos; });
      if (placed) protos.push_back(std::move(v));
    }
    if (!placed)
      throw SpecError("cannot place " + std::to_string(spec.characters) + " prototypes " +
                      std::to_string(spec.min_separation) + " rad apart in dimension " +
                      std::to_string(spec.dimension));
  }
  return protos;
}

inline SyntheticMovie generate_movie(const MovieSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  SyntheticMovie movie;
  movie.prototypes = sample_prototypes(spec, rng);

  // introduced[a]: characters first seen in act a; act 0 takes the remainder.
  const std::size_t acts = spec.act_boundaries.size() + 1;
  std::vector<std::vector<std::size_t>> introduced(acts);
  {
    const std::size_t per_act = spec.characters / acts;
    const std::size_t first = spec.characters - per_act * (acts - 1);
    std::size_t c = 0;
    for (std::size_t a = 0; a < acts; ++a)
      for (std::size_t n = 0; n < (a == 0 ? first : per_act); ++n) introduced[a].push_back(c++);
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto uniform_int = [&](auto lo, auto hi) {
    using T = decltype(lo);
    return std::uniform_int_distribution<T>(lo, hi)(rng);
  };

  // Eight non-overlapping face slots on a 1280x720 frame.
  constexpr double kBox = 100.0;
  auto slot_origin = [](std::size_t s) {
    return std::pair<double, double>{80.0 + 280.0 * static_cast<double>(s % 4),
                                     120.0 + 300.0 * static_cast<double>(s / 4)};
  };

  const auto total_frames = static_cast<FrameIndex>(std::llround(spec.duration_seconds * spec.fps));
  FrameIndex start = 0;
  std::size_t shot_no = 0;
  struct PendingFace {
    FrameIndex frame;
    std::size_t slot;
    Detection det;
    std::size_t character;
  };
  std::vector<PendingFace> faces;

  while (start < total_frames) {
    FrameIndex len = static_cast<FrameIndex>(std::llround(
        std::uniform_real_distribution<double>(spec.shot_seconds.lo, spec.shot_seconds.hi)(rng) *
        spec.fps));
    len = std::max<FrameIndex>(len, 1);
    FrameIndex end = std::min(start + len, total_frames) - 1;
    // Fold a too-short tail into this shot.
    if (total_frames - 1 - end < static_cast<FrameIndex>(spec.shot_seconds.lo * spec.fps))
      end = total_frames - 1;
    const Shot shot{shot_no, start, end};
    const double center = shot.center_seconds(spec.fps);

    std::size_t act = 0;
    while (act < spec.act_boundaries.size() && center >= spec.act_boundaries[act]) ++act;
    bool burst = false;
    std::size_t burst_act = act;
    for (std::size_t b = 0; b < spec.act_boundaries.size(); ++b) {
      if (std::abs(center - spec.act_boundaries[b]) <= 0.5 * spec.burst_seconds) {
        burst = true;
        burst_act = b + 1;
      }
    }

    std::vector<std::size_t> cast;
    if (!spec.script.empty()) {
      if (shot_no < spec.script.size()) cast = spec.script[shot_no];
    } else {
      std::vector<std::size_t> pool;
      const std::size_t upto = burst ? burst_act : act;
      for (std::size_t a = 0; a <= upto; ++a)
        pool.insert(pool.end(), introduced[a].begin(), introduced[a].end());
      std::size_t count = 0;
      if (burst) {
        count = uniform_int(spec.burst_tracks.lo, spec.burst_tracks.hi);
        // Newcomers of the opening act always take part in the burst.
        cast = introduced[burst_act];
        if (cast.size() > count) cast.resize(count);
      } else if (unit(rng) < spec.face_shot_probability) {
        count = uniform_int(spec.tracks_per_shot.lo, spec.tracks_per_shot.hi);
      }
      std::vector<std::size_t> rest;
      for (const auto c : pool)
        if (std::find(cast.begin(), cast.end(), c) == cast.end()) rest.push_back(c);
      std::shuffle(rest.begin(), rest.end(), rng);
      for (std::size_t i = 0; cast.size() < count && i < rest.size(); ++i) cast.push_back(rest[i]);
    }
    std::sort(cast.begin(), cast.end());

    std::vector<std::size_t> slots{0, 1, 2, 3, 4, 5, 6, 7};
    std::shuffle(slots.begin(), slots.end(), rng);
    for (std::size_t n = 0; n < cast.size(); ++n) {
      const std::size_t character = cast[n];
      const FrameIndex shot_len = shot.length();
      const FrameIndex track_len =
          std::min<FrameIndex>(uniform_int(spec.track_frames.lo, spec.track_frames.hi), shot_len);
      const FrameIndex first = shot.start_frame + uniform_int(FrameIndex{0}, shot_len - track_len);
      const auto [ox, oy] = slot_origin(slots[n]);
      for (FrameIndex f = first; f < first + track_len; ++f) {
        Detection det;
        det.frame = f;
        det.box = Box{ox + static_cast<double>(uniform_int(-1, 1)),
                      oy + static_cast<double>(uniform_int(-1, 1)), kBox, kBox};
        Embedding v = movie.prototypes[character];
        for (int i = 0; i < spec.dimension; ++i) v(i) += spec.noise * gauss(rng);
        det.embedding = normalize_embedding(v);
        det.label = character_label(character);
        const bool dropped = spec.dropout > 0.0 && unit(rng) < spec.dropout;
        if (!dropped) faces.push_back({f, slots[n], std::move(det), character});
      }
    }

    movie.truth.shots.push_back(shot);
    movie.truth.occupancy.push_back(cast);
    movie.truth.tracks += cast.size();
    start = end + 1;
    ++shot_no;
  }

  std::stable_sort(faces.begin(), faces.end(), [](const PendingFace& a, const PendingFace& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.slot < b.slot;
  });
  auto& stream = movie.stream;
  stream.dimension = spec.dimension;
  for (auto& f : faces) {
    movie.truth.labels.push_back(*f.det.label);
    stream.detections.push_back(std::move(f.det));
  }
  if (spec.emit_diffs) {
    std::size_t s = 0;
    for (FrameIndex f = 0; f < total_frames; ++f) {
      while (s + 1 < movie.truth.shots.size() && movie.truth.shots[s].end_frame < f) ++s;
      const bool cut = f > 0 && movie.truth.shots[s].start_frame == f;
      stream.diffs.push_back({f, cut ? 80.0 + 10.0 * unit(rng) : 5.0 * unit(rng)});
    }
  } else {
    for (const auto& shot : movie.truth.shots) stream.shot_ends.push_back(shot.end_frame);
  }
  movie.truth.act_boundaries = spec.act_boundaries;
  movie.truth.duration_seconds = static_cast<double>(total_frames) / spec.fps;
  movie.truth.fps = spec.fps;
  return movie;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Writes the stream in the JSON-lines input format (records in frame order).
inline void write_stream_jsonl(std::ostream& os, const DetectionStream& stream) {
  std::size_t d = 0;
  std::size_t m = 0;
  std::size_t e = 0;
  // Merge by frame: diffs first, then detections, then shot ends.
  while (d < stream.diffs.size() || m < stream.detections.size() || e < stream.shot_ends.size()) {
    FrameIndex next = std::numeric_limits<FrameIndex>::max();
    if (d < stream.diffs.size()) next = std::min(next, stream.diffs[d].frame);
    if (m < stream.detections.size()) next = std::min(next, stream.detections[m].frame);
    if (e < stream.shot_ends.size()) next = std::min(next, stream.shot_ends[e]);
    for (; d < stream.diffs.size() && stream.diffs[d].frame == next; ++d)
      os << nlohmann::json{{"type", "diff"}, {"frame", next}, {"v", stream.diffs[d].diff}}.dump() << '\n';
    for (; m < stream.detections.size() && stream.detections[m].frame == next; ++m) {
      const auto& det = stream.detections[m];
      nlohmann::json rec{{"type", "det"},
                         {"frame", det.frame},
                         {"box", {det.box.x, det.box.y, det.box.width, det.box.height}},
                         {"emb", std::vector<double>(det.embedding.data(),
                                                     det.embedding.data() + det.embedding.size())}};
      if (det.label) rec["label"] = *det.label;
      os << rec.dump() << '\n';
    }
    for (; e < stream.shot_ends.size() && stream.shot_ends[e] == next; ++e)
      os << nlohmann::json{{"type", "shot_end"}, {"frame", next}}.dump() << '\n';
  }
}

inline nlohmann::json truth_to_json(const MovieTruth& truth) {
  nlohmann::json shots = nlohmann::json::array();
  for (const auto& s : truth.shots) shots.push_back({s.start_frame, s.end_frame});
  return {{"labels", truth.labels},
          {"shots", shots},
          {"occupancy", truth.occupancy},
          {"act_boundaries", truth.act_boundaries},
          {"duration_seconds", truth.duration_seconds},
          {"fps", truth.fps},
          {"tracks", truth.tracks}};
}

inline MovieTruth truth_from_json(const nlohmann::json& j) {
  MovieTruth t;
  t.labels = j.at("labels").get<std::vector<std::string>>();
  if (j.contains("shots")) {
    std::size_t i = 0;
    for (const auto& s : j.at("shots")) t.shots.push_back({i++, s.at(0).get<FrameIndex>(), s.at(1).get<FrameIndex>()});
  }
  if (j.contains("occupancy")) t.occupancy = j.at("occupancy").get<std::vector<std::vector<std::size_t>>>();
  if (j.contains("act_boundaries")) t.act_boundaries = j.at("act_boundaries").get<std::vector<double>>();
  t.duration_seconds = j.value("duration_seconds", 0.0);
  t.fps = j.value("fps", 0.0);
  t.tracks = j.value("tracks", std::size_t{0});
  return t;
}

/// Reads a MovieSpec from JSON; absent keys keep their defaults.
inline MovieSpec movie_spec_from_json(const nlohmann::json& j, MovieSpec spec = {}) {
  auto range_d = [](const nlohmann::json& v) { return Range<double>{v.at(0).get<double>(), v.at(1).get<double>()}; };
  auto range_z = [](const nlohmann::json& v) { return Range<std::size_t>{v.at(0).get<std::size_t>(), v.at(1).get<std::size_t>()}; };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "characters") spec.characters = v.get<std::size_t>();
      else if (key == "dimension") spec.dimension = v.get<int>();
      else if (key == "min_separation_deg") spec.min_separation = v.get<double>() * std::numbers::pi / 180.0;
      else if (key == "min_separation") spec.min_separation = v.get<double>();
      else if (key == "noise") spec.noise = v.get<double>();
      else if (key == "fps") spec.fps = v.get<double>();
      else if (key == "duration_seconds") spec.duration_seconds = v.get<double>();
      else if (key == "shot_seconds") spec.shot_seconds = range_d(v);
      else if (key == "face_shot_probability") spec.face_shot_probability = v.get<double>();
      else if (key == "tracks_per_shot") spec.tracks_per_shot = range_z(v);
      else if (key == "track_frames") spec.track_frames = {v.at(0).get<int>(), v.at(1).get<int>()};
      else if (key == "dropout") spec.dropout = v.get<double>();
      else if (key == "act_boundaries") spec.act_boundaries = v.get<std::vector<double>>();
      else if (key == "burst_seconds") spec.burst_seconds = v.get<double>();
      else if (key == "burst_tracks") spec.burst_tracks = range_z(v);
      else if (key == "script") spec.script = v.get<std::vector<std::vector<std::size_t>>>();
      else if (key == "emit_diffs") spec.emit_diffs = v.get<bool>();
      else if (key == "seed") spec.seed = v.get<std::uint64_t>();
      else throw SpecError("unknown movie spec key \"" + key + "\"");
    }
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("movie spec: ") + e.what());
  }
  return spec;
}

}  // namespace cigstream
