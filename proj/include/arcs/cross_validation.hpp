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

#ifndef ARCS_CROSS_VALIDATION_HPP
#define ARCS_CROSS_VALIDATION_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "arcs/rng.hpp"

namespace arcs {

/// Rows sufficient for the cross-validation error bound at accuracy epsilon
/// and confidence rho: the smallest integer r >= 8 * eps^-2 * log(1/(2*rho)).
inline int cv_row_count(double epsilon, double rho) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("cv_row_count: epsilon must be in (0, 1)");
  if (!(rho > 0.0 && rho < 0.5))
    throw std::invalid_argument("cv_row_count: rho must be in (0, 1/2)");
  const double bound = 8.0 / (epsilon * epsilon) * std::log(1.0 / (2.0 * rho));
  return static_cast<int>(std::ceil(bound));
}

// Static r x n matrix with i.i.d. entries +-1/sqrt(r) (zero mean, variance
// exactly 1/r). Entries are pure functions of (seed, i, j); nothing is stored.
class CrossValidationMatrix {
 public:
  CrossValidationMatrix(int rows, int ambient_dim, std::uint64_t seed)
      : r_(rows), n_(ambient_dim), seed_(seed) {
    if (r_ <= 0 || n_ <= 0)
      throw std::invalid_argument("CrossValidationMatrix: bad dimensions");
    inv_sqrt_r_ = 1.0 / std::sqrt(static_cast<double>(r_));
  }

  int rows() const { return r_; }
  int ambient_dim() const { return n_; }
  std::uint64_t seed() const { return seed_; }

  double entry(int i, int j) const {
    return (hash3(seed_, static_cast<std::uint64_t>(i), j) & 1u)
               ? -inv_sqrt_r_
               : inv_sqrt_r_;
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    if (x.size() != n_)
      throw std::invalid_argument("CrossValidationMatrix: dimension mismatch");
    Eigen::VectorXd out(r_);
    for (int i = 0; i < r_; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n_; ++j)
        acc += (hash3(seed_, static_cast<std::uint64_t>(i), j) & 1u) ? -x[j]
                                                                     : x[j];
      out[i] = acc * inv_sqrt_r_;
    }
    return out;
  }

 private:
  int r_;
  int n_;
  std::uint64_t seed_;
  double inv_sqrt_r_;
};

}  // namespace arcs

#endif  // ARCS_CROSS_VALIDATION_HPP
