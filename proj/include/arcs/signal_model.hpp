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

#ifndef ARCS_SIGNAL_MODEL_HPP
#define ARCS_SIGNAL_MODEL_HPP

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "arcs/frame.hpp"
#include "arcs/rng.hpp"

namespace arcs {

// Scene model: each observed image is x_t = f_t + b, where b is a static
// background and f_t has above-threshold foreground components on a support
// set and small zero-mean Gaussian residuals elsewhere.

struct ForegroundModel {
  double tau;          // foreground threshold, in (0, 1)
  double sigma_b_sq;   // background residual variance

  ForegroundModel(double tau_, double sigma_b_sq_)
      : tau(tau_), sigma_b_sq(sigma_b_sq_) {
    if (!(tau > 0.0 && tau < 1.0))
      throw std::invalid_argument("ForegroundModel: tau must be in (0, 1)");
    if (!(sigma_b_sq > 0.0 && sigma_b_sq < tau * tau))
      throw std::invalid_argument(
          "ForegroundModel: requires 0 < sigma_b_sq < tau^2");
  }

  double sigma_b() const { return std::sqrt(sigma_b_sq); }
};

/// Draws a foreground vector: components on `support` uniform on
/// [-1,-tau] u [tau,1], all others N(0, sigma_b_sq). Deterministic per seed;
/// component i depends only on (seed, i), not on the rest of the support.
inline Eigen::VectorXd sample_foreground(const ForegroundModel& model,
                                         const std::vector<int>& support,
                                         int dim, std::uint64_t seed) {
  Eigen::VectorXd f(dim);
  for (int i = 0; i < dim; ++i)
    f[i] = model.sigma_b() * normal_at(seed, /*stream=*/0, i);
  for (int idx : support) {
    if (idx < 0 || idx >= dim)
      throw std::out_of_range("sample_foreground: support index out of range");
    const double mag =
        model.tau + (1.0 - model.tau) * unit_halfopen(hash3(seed, 1, idx));
    const bool negative = hash3(seed, 2, idx) & 1u;
    f[idx] = negative ? -mag : mag;
  }
  return f;
}

/// Axis-aligned rectangular object moving with constant velocity. Positions
/// are in pixels; the rectangle at time t covers columns
/// [round(x0+t*vx), +width) and rows [round(y0+t*vy), +height), clipped to
/// the frame.
struct RectTrajectory {
  double x0 = 0.0, y0 = 0.0;   // top-left corner at t = 0 (col, row)
  double vx = 0.0, vy = 0.0;   // per-frame velocity
  int width = 0, height = 0;
  int first_frame = 0;
  int last_frame = std::numeric_limits<int>::max();
};

struct SceneConfig {
  int side = 32;
  int frame_count = 1;
  double background_level = 0.05;  // flat background intensity
  bool repeat_first = false;       // repeat frame 0 (static-signal protocol)
  int calibration_frames = 30;     // background-only frames for calibration
  std::vector<RectTrajectory> objects;
};

struct GroundTruthSequence {
  Eigen::VectorXd background;                 // b, length n
  std::vector<std::vector<int>> supports;     // F_t (column-major indices)
  std::vector<Eigen::VectorXd> foregrounds;   // f_t = x_t - b, length n
  std::vector<int> sparsity;                  // s_t = |F_t|
  std::vector<bool> fully_visible;            // no object clipped at t
};

struct SyntheticSequence {
  std::vector<Frame> frames;              // x_t
  std::vector<Frame> calibration_frames;  // background-only acquisitions
  Frame background;                       // clean b as an image
  GroundTruthSequence truth;
};

namespace scene_detail {

struct ClippedRect {
  int col0, col1, row0, row1;  // half-open [col0, col1) x [row0, row1)
  bool clipped;
  bool empty() const { return col0 >= col1 || row0 >= row1; }
};

inline ClippedRect rect_at(const RectTrajectory& obj, int t, int side) {
  const int cx = static_cast<int>(std::lround(obj.x0 + t * obj.vx));
  const int cy = static_cast<int>(std::lround(obj.y0 + t * obj.vy));
  ClippedRect r{std::max(cx, 0), std::min(cx + obj.width, side),
                std::max(cy, 0), std::min(cy + obj.height, side), false};
  r.clipped = (r.col0 != cx) || (r.col1 != cx + obj.width) ||
              (r.row0 != cy) || (r.row1 != cy + obj.height) || r.empty();
  return r;
}

}  // namespace scene_detail

/// Generates frames x_t = clamp(b + f_t, 0, 1) with exact per-frame ground
/// truth. Foreground signs are restricted to intensities representable in
/// [0, 1], so every on-support pixel keeps |f_t(i)| >= tau after clamping and
/// s_t is exactly the rasterized (clipped) object area.
inline SyntheticSequence synthesize_sequence(const SceneConfig& config,
                                             const ForegroundModel& model,
                                             std::uint64_t seed) {
  const int side = config.side;
  const int n = side * side;
  if (side <= 0 || config.frame_count <= 0)
    throw std::invalid_argument("synthesize_sequence: empty scene");
  const double b0 = config.background_level;
  if (!(b0 >= 0.0 && b0 <= 1.0))
    throw std::invalid_argument("synthesize_sequence: background outside [0,1]");
  const bool can_negative = b0 - model.tau >= 0.0;
  const bool can_positive = b0 + model.tau <= 1.0;
  if (!can_negative && !can_positive)
    throw std::invalid_argument(
        "synthesize_sequence: tau not representable around background level");

  SyntheticSequence out{.frames = {},
                        .calibration_frames = {},
                        .background = Frame::constant(side, b0),
                        .truth = {}};
  out.truth.background = out.background.vectorize();

  auto make_frame = [&](int t, std::uint64_t stream_base,
                        const std::vector<int>& support) {
    SeededRng rng(seed, stream_base);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i)
      x[i] = std::clamp(b0 + model.sigma_b() * rng.normal(), 0.0, 1.0);
    for (int idx : support) {
      const double mag = model.tau + (1.0 - model.tau) * rng.uniform();
      bool negative = can_negative && (!can_positive || (rng.next_word() & 1u));
      x[idx] = std::clamp(negative ? b0 - mag : b0 + mag, 0.0, 1.0);
    }
    (void)t;
    return Frame(side, std::move(x));
  };

  for (int t = 0; t < config.frame_count; ++t) {
    const int src = config.repeat_first ? 0 : t;
    std::vector<int> support;
    bool visible = true;
    std::vector<char> mask(n, 0);
    for (const auto& obj : config.objects) {
      if (src < obj.first_frame || src > obj.last_frame) continue;
      const auto r = scene_detail::rect_at(obj, src, side);
      if (r.clipped) visible = false;
      for (int col = r.col0; col < r.col1; ++col)
        for (int row = r.row0; row < r.row1; ++row) mask[col * side + row] = 1;
    }
    for (int i = 0; i < n; ++i)
      if (mask[i]) support.push_back(i);

    Frame frame = make_frame(src, 1000 + static_cast<std::uint64_t>(src) * 2,
                             support);
    out.truth.foregrounds.push_back(frame.vectorize() - out.truth.background);
    out.truth.supports.push_back(std::move(support));
    out.truth.sparsity.push_back(
        static_cast<int>(out.truth.supports.back().size()));
    out.truth.fully_visible.push_back(visible);
    out.frames.push_back(std::move(frame));
  }

  for (int j = 0; j < config.calibration_frames; ++j)
    out.calibration_frames.push_back(
        make_frame(j, 500000 + static_cast<std::uint64_t>(j) * 2, {}));

  return out;
}

}  // namespace arcs

#endif  // ARCS_SIGNAL_MODEL_HPP
