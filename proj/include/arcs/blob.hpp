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

#ifndef ARCS_BLOB_HPP
#define ARCS_BLOB_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "arcs/frame.hpp"
#include "arcs/warp.hpp"

namespace arcs {

struct Blob {
  int area = 0;
  int min_row = 0, max_row = 0;  // inclusive bounds
  int min_col = 0, max_col = 0;
};

/// 8-connected components of a column-major binary mask, in scan order.
inline std::vector<Blob> label_components(const std::vector<char>& mask,
                                          int side) {
  std::vector<int> label(mask.size(), -1);
  std::vector<Blob> blobs;
  std::vector<int> stack;
  for (int col = 0; col < side; ++col)
    for (int row = 0; row < side; ++row) {
      const int start = col * side + row;
      if (!mask[start] || label[start] >= 0) continue;
      Blob blob{0, row, row, col, col};
      const int id = static_cast<int>(blobs.size());
      label[start] = id;
      stack.assign(1, start);
      while (!stack.empty()) {
        const int at = stack.back();
        stack.pop_back();
        const int c = at / side, r = at % side;
        ++blob.area;
        blob.min_row = std::min(blob.min_row, r);
        blob.max_row = std::max(blob.max_row, r);
        blob.min_col = std::min(blob.min_col, c);
        blob.max_col = std::max(blob.max_col, c);
        for (int dc = -1; dc <= 1; ++dc)
          for (int dr = -1; dr <= 1; ++dr) {
            const int nc = c + dc, nr = r + dr;
            if (nc < 0 || nc >= side || nr < 0 || nr >= side) continue;
            const int neighbor = nc * side + nr;
            if (mask[neighbor] && label[neighbor] < 0) {
              label[neighbor] = id;
              stack.push_back(neighbor);
            }
          }
      }
      blobs.push_back(blob);
    }
  return blobs;
}

/// Largest-area blob of |frame - background| >= tau_blob, reported as a
/// warp against the unit-square template: width, height, then the
/// bounding box's minimum corner. Empty masks yield no track.
inline std::optional<WarpParams> blob_track(const Frame& frame_lo,
                                            const Frame& background_lo,
                                            double tau_blob) {
  if (frame_lo.side() != background_lo.side())
    throw std::invalid_argument("blob_track: frame sizes differ");
  const int side = frame_lo.side();
  std::vector<char> mask(static_cast<std::size_t>(side) * side, 0);
  bool any = false;
  for (int col = 0; col < side; ++col)
    for (int row = 0; row < side; ++row)
      if (std::abs(frame_lo.at(row, col) - background_lo.at(row, col)) >=
          tau_blob) {
        mask[static_cast<std::size_t>(col) * side + row] = 1;
        any = true;
      }
  if (!any) return std::nullopt;

  const std::vector<Blob> blobs = label_components(mask, side);
  const Blob* best = &blobs.front();
  for (const Blob& blob : blobs)
    if (blob.area > best->area) best = &blob;
  return WarpParams{static_cast<double>(best->max_col - best->min_col + 1),
                    static_cast<double>(best->max_row - best->min_row + 1),
                    static_cast<double>(best->min_col),
                    static_cast<double>(best->min_row)};
}

}  // namespace arcs

#endif  // ARCS_BLOB_HPP
