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

#ifndef ARCS_FRAME_HPP
#define ARCS_FRAME_HPP

#include <Eigen/Core>
#include <stdexcept>
#include <utility>

namespace arcs {

/// A square grayscale image with intensities in [0, 1], stored column-major
/// so that vectorize()/from_vector() are exact mutual inverses.
class Frame {
 public:
  Frame(int side_length, Eigen::VectorXd pixels)
      : side_(side_length), pix_(std::move(pixels)) {
    if (side_ <= 0) throw std::invalid_argument("Frame: side must be positive");
    if (pix_.size() != static_cast<Eigen::Index>(side_) * side_)
      throw std::invalid_argument("Frame: pixel count != side^2");
    for (Eigen::Index i = 0; i < pix_.size(); ++i) {
      if (!(pix_[i] >= 0.0 && pix_[i] <= 1.0))
        throw std::invalid_argument("Frame: intensity outside [0, 1]");
    }
  }

  static Frame constant(int side_length, double value) {
    return Frame(side_length,
                 Eigen::VectorXd::Constant(
                     static_cast<Eigen::Index>(side_length) * side_length,
                     value));
  }

  int side() const { return side_; }
  Eigen::Index pixel_count() const { return pix_.size(); }

  double at(int row, int col) const { return pix_[index(row, col)]; }
  double& at(int row, int col) { return pix_[index(row, col)]; }

  /// Column-major vectorization: entry col * side + row.
  const Eigen::VectorXd& vectorize() const { return pix_; }

  static Frame from_vector(int side_length, Eigen::VectorXd v) {
    return Frame(side_length, std::move(v));
  }

  bool operator==(const Frame& other) const {
    return side_ == other.side_ && pix_ == other.pix_;
  }

 private:
  Eigen::Index index(int row, int col) const {
    if (row < 0 || row >= side_ || col < 0 || col >= side_)
      throw std::out_of_range("Frame: pixel index out of range");
    return static_cast<Eigen::Index>(col) * side_ + row;
  }

  int side_;
  Eigen::VectorXd pix_;
};

inline Frame devectorize(int side_length, const Eigen::VectorXd& v) {
  return Frame::from_vector(side_length, v);
}

}  // namespace arcs

#endif  // ARCS_FRAME_HPP
