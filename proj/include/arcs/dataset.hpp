// Copyright 2026 The ARCS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARCS_DATASET_HPP
#define ARCS_DATASET_HPP

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "arcs/frame.hpp"
#include "arcs/pgm.hpp"
#include "arcs/signal_model.hpp"
#include "arcs/warp.hpp"

namespace arcs {

// On-disk dataset layout:
//   frames/*.pgm        observed sequence; lexicographic order defines time
//   calib/*.pgm         background-only frames used for calibration
//   background.pgm      clean background (optional; enables exact error)
//   ground_truth.csv    t,s_true,visible           (optional)
//   tracks.csv          t,p1,p2,p3,p4 or t,none    (optional, low-res units)

struct Dataset {
  std::vector<Frame> frames;
  std::vector<Frame> calibration;
  std::optional<Frame> background;
  std::vector<int> s_true;                        // empty if unknown
  std::vector<bool> visible;                      // parallel to s_true
  std::vector<std::optional<WarpParams>> tracks;  // empty if absent

  int side() const { return frames.empty() ? 0 : frames.front().side(); }
  bool has_ground_truth() const { return !s_true.empty(); }
  bool has_tracks() const { return !tracks.empty(); }
};

namespace dataset_detail {

inline std::vector<std::filesystem::path> sorted_pgms(
    const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> paths;
  if (!std::filesystem::is_directory(dir)) return paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".pgm")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  return paths;
}

}  // namespace dataset_detail

inline void write_ground_truth_csv(const std::filesystem::path& path,
                                   const GroundTruthSequence& truth) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dataset: cannot write " + path.string());
  out << "t,s_true,visible\n";
  for (std::size_t t = 0; t < truth.sparsity.size(); ++t)
    out << t << "," << truth.sparsity[t] << ","
        << (truth.fully_visible[t] ? 1 : 0) << "\n";
}

inline void read_ground_truth_csv(const std::filesystem::path& path,
                                  std::vector<int>& s_true,
                                  std::vector<bool>& visible) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("dataset: cannot open " + path.string());
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string t, s, v;
    if (!std::getline(row, t, ',') || !std::getline(row, s, ',') ||
        !std::getline(row, v))
      throw std::runtime_error("dataset: malformed ground truth row: " + line);
    s_true.push_back(std::stoi(s));
    visible.push_back(std::stoi(v) != 0);
  }
}

inline void write_tracks_csv(
    const std::filesystem::path& path,
    const std::vector<std::optional<WarpParams>>& tracks) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dataset: cannot write " + path.string());
  out << "t,p1,p2,p3,p4\n";
  char buf[128];
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    if (!tracks[t]) {
      out << t << ",none\n";
      continue;
    }
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g", t,
                  tracks[t]->p1, tracks[t]->p2, tracks[t]->p3, tracks[t]->p4);
    out << buf << "\n";
  }
}

inline std::vector<std::optional<WarpParams>> read_tracks_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("dataset: cannot open " + path.string());
  std::vector<std::optional<WarpParams>> tracks;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');  // t
    std::getline(row, field, ',');
    if (field == "none" || field == " none") {
      tracks.push_back(std::nullopt);
      continue;
    }
    WarpParams p;
    p.p1 = std::stod(field);
    std::getline(row, field, ',');
    p.p2 = std::stod(field);
    std::getline(row, field, ',');
    p.p3 = std::stod(field);
    std::getline(row, field);
    p.p4 = std::stod(field);
    tracks.push_back(p);
  }
  return tracks;
}

/// Writes a synthesized sequence as a dataset directory. Tracks are derived
/// from the scene geometry in low-resolution units: the largest fully
/// visible object's bounding box, or none when any object is clipped.
inline void write_dataset(const std::filesystem::path& dir,
                          const SceneConfig& scene,
                          const SyntheticSequence& seq,
                          int track_downsample_factor) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "frames");
  fs::create_directories(dir / "calib");
  char name[64];
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    std::snprintf(name, sizeof(name), "frame_%05zu.pgm", t);
    write_pgm(dir / "frames" / name, seq.frames[t]);
  }
  for (std::size_t j = 0; j < seq.calibration_frames.size(); ++j) {
    std::snprintf(name, sizeof(name), "calib_%05zu.pgm", j);
    write_pgm(dir / "calib" / name, seq.calibration_frames[j]);
  }
  write_pgm(dir / "background.pgm", seq.background);
  write_ground_truth_csv(dir / "ground_truth.csv", seq.truth);

  const double inv_d = 1.0 / track_downsample_factor;
  std::vector<std::optional<WarpParams>> tracks;
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    const int src = scene.repeat_first ? 0 : static_cast<int>(t);
    std::optional<WarpParams> best;
    double best_area = 0.0;
    bool clipped_any = false;
    for (const auto& obj : scene.objects) {
      if (src < obj.first_frame || src > obj.last_frame) continue;
      const auto rect = scene_detail::rect_at(obj, src, scene.side);
      if (rect.clipped) {
        clipped_any = true;
        continue;
      }
      const double area =
          static_cast<double>(rect.col1 - rect.col0) * (rect.row1 - rect.row0);
      if (area > best_area) {
        best_area = area;
        best = WarpParams{(rect.col1 - rect.col0) * inv_d,
                          (rect.row1 - rect.row0) * inv_d,
                          rect.col0 * inv_d, rect.row0 * inv_d};
      }
    }
    // Mirror the fully-visible tracking protocol: no track while any
    // object is entering or leaving the view.
    tracks.push_back(clipped_any ? std::nullopt : best);
  }
  write_tracks_csv(dir / "tracks.csv", tracks);
}

inline Dataset load_dataset(const std::filesystem::path& dir,
                            int max_frames = 0, int max_calibration = 0) {
  Dataset ds;
  for (const auto& path : dataset_detail::sorted_pgms(dir / "frames")) {
    if (max_frames > 0 &&
        static_cast<int>(ds.frames.size()) >= max_frames)
      break;
    ds.frames.push_back(read_pgm(path));
  }
  if (ds.frames.empty())
    throw std::runtime_error("dataset: no frames under " + dir.string());
  for (const auto& path : dataset_detail::sorted_pgms(dir / "calib")) {
    if (max_calibration > 0 &&
        static_cast<int>(ds.calibration.size()) >= max_calibration)
      break;
    ds.calibration.push_back(read_pgm(path));
  }
  if (std::filesystem::exists(dir / "background.pgm"))
    ds.background = read_pgm(dir / "background.pgm");
  if (std::filesystem::exists(dir / "ground_truth.csv"))
    read_ground_truth_csv(dir / "ground_truth.csv", ds.s_true, ds.visible);
  if (std::filesystem::exists(dir / "tracks.csv"))
    ds.tracks = read_tracks_csv(dir / "tracks.csv");
  return ds;
}

}  // namespace arcs

#endif  // ARCS_DATASET_HPP
