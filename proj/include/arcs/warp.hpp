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

#ifndef ARCS_WARP_HPP
#define ARCS_WARP_HPP

#include <array>
#include <cmath>
#include <stdexcept>

#include "arcs/frame.hpp"

namespace arcs {

/// Low-resolution frame: each pixel is the mean of its D x D block in the
/// high-resolution image. Pixel (r, c) of the output covers rows
/// [r*D, (r+1)*D) and columns [c*D, (c+1)*D) of the input.
inline Frame downsample(const Frame& hi, int factor) {
  const int n = hi.side();
  if (factor < 1 || n % factor != 0)
    throw std::invalid_argument("downsample: factor must divide the side");
  const int lo_side = n / factor;
  Eigen::VectorXd pix(static_cast<Eigen::Index>(lo_side) * lo_side);
  const double inv = 1.0 / (factor * factor);
  for (int c = 0; c < lo_side; ++c)
    for (int r = 0; r < lo_side; ++r) {
      double acc = 0.0;
      for (int dc = 0; dc < factor; ++dc)
        for (int dr = 0; dr < factor; ++dr)
          acc += hi.at(r * factor + dr, c * factor + dc);
      pix[static_cast<Eigen::Index>(c) * lo_side + r] = acc * inv;
    }
  return Frame(lo_side, std::move(pix));
}

/// Zero-skew affine warp in low-resolution pixel units: (x, y) maps to
/// (p1 * x + p3, p2 * y + p4).
struct WarpParams {
  double p1 = 1.0;  // x-scale
  double p2 = 1.0;  // y-scale
  double p3 = 0.0;  // x-translation
  double p4 = 0.0;  // y-translation
};

/// Corner coordinates of the object template, in an order tracing its
/// outline. Default is the unit square.
struct TemplateOutline {
  std::array<std::array<double, 2>, 4> corners = {
      {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};

  /// Shoelace cross sum over consecutive corners; |sum| / 2 is the area.
  double cross_sum() const {
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
      const auto& a = corners[i];
      const auto& b = corners[(i + 1) % 4];
      acc += a[0] * b[1] - a[1] * b[0];
    }
    return acc;
  }

  void validate() const {
    if (cross_sum() == 0.0)
      throw std::invalid_argument("TemplateOutline: degenerate outline");
  }
};

// Eq. (26) as printed mixes scales and translations through the
// p1*p4 - p2*p3 determinant term; the warp's own linear part has
// determinant p1*p2. The geometric form is the default (it is the one the
// rasterization oracle validates); literal mode preserves the printed
// expression for auditability.
enum class AreaMode { geometric, literal };

/// Real-valued (pre-ceiling) count of high-resolution pixels covered by the
/// warped template.
inline double warp_area(const WarpParams& p, const TemplateOutline& outline,
                        int downsample_factor, AreaMode mode = AreaMode::geometric) {
  outline.validate();
  const double d2 =
      static_cast<double>(downsample_factor) * downsample_factor;
  const double det =
      mode == AreaMode::geometric ? p.p1 * p.p2 : p.p1 * p.p4 - p.p2 * p.p3;
  return std::abs(d2 * det * 0.5 * outline.cross_sum());
}

/// Predicted foreground sparsity: the warped-template area rounded up, and
/// clamped to at least one pixel so degenerate warps stay in the cost
/// function's domain.
inline int warp_to_sparsity(const WarpParams& p, const TemplateOutline& outline,
                            int downsample_factor,
                            AreaMode mode = AreaMode::geometric) {
  const double area = warp_area(p, outline, downsample_factor, mode);
  const long long s = static_cast<long long>(std::ceil(area - 1e-9));
  return static_cast<int>(std::max(1LL, s));
}

}  // namespace arcs

#endif  // ARCS_WARP_HPP
