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

#ifndef ARCS_UNSCENTED_HPP
#define ARCS_UNSCENTED_HPP

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "arcs/warp.hpp"

namespace arcs {

/// Random-walk track dynamics: the next warp is the current one plus
/// zero-mean Gaussian noise with this covariance.
struct TrackDynamics {
  Eigen::Matrix4d covariance = Eigen::Vector4d(1.0, 1.0, 3.0, 3.0).asDiagonal();

  void validate() const {
    if (!covariance.isApprox(covariance.transpose(), 1e-12))
      throw std::invalid_argument("TrackDynamics: covariance not symmetric");
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(covariance);
    if (eig.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, eig.eigenvalues().maxCoeff()))
      throw std::invalid_argument("TrackDynamics: covariance not PSD");
  }
};

/// Mean and variance of the predicted sparsity when the track takes a
/// random-walk step: the classic sigma-point set (2d+1 points, d + kappa = 3,
/// symmetric matrix square root) pushed through the real-valued warp area.
/// The ceiling is deferred to pmf discretization; a step nonlinearity under
/// sigma points is ill-behaved.
inline std::pair<double, double> unscented_moments(
    const WarpParams& previous, const TrackDynamics& dynamics,
    const TemplateOutline& outline, int downsample_factor,
    AreaMode mode = AreaMode::geometric) {
  dynamics.validate();
  constexpr int kDim = 4;
  constexpr double kKappa = 3.0 - kDim;
  constexpr double kSpread = kDim + kKappa;  // = 3

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(dynamics.covariance);
  if (eig.info() != Eigen::Success)
    throw std::invalid_argument("unscented_moments: covariance factorization failed");
  const Eigen::Matrix4d root =
      eig.eigenvectors() *
      eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
      eig.eigenvectors().transpose();

  const Eigen::Vector4d center(previous.p1, previous.p2, previous.p3,
                               previous.p4);
  auto area_at = [&](const Eigen::Vector4d& v) {
    return warp_area(WarpParams{v[0], v[1], v[2], v[3]}, outline,
                     downsample_factor, mode);
  };

  double values[2 * kDim + 1];
  double weights[2 * kDim + 1];
  values[0] = area_at(center);
  weights[0] = kKappa / kSpread;
  for (int i = 0; i < kDim; ++i) {
    const Eigen::Vector4d offset = std::sqrt(kSpread) * root.col(i);
    values[1 + 2 * i] = area_at(center + offset);
    values[2 + 2 * i] = area_at(center - offset);
    weights[1 + 2 * i] = weights[2 + 2 * i] = 1.0 / (2.0 * kSpread);
  }

  double mean = 0.0;
  for (int i = 0; i < 2 * kDim + 1; ++i) mean += weights[i] * values[i];
  double var = 0.0;
  for (int i = 0; i < 2 * kDim + 1; ++i) {
    const double d = values[i] - mean;
    var += weights[i] * d * d;
  }
  return {mean, std::max(0.0, var)};  // the center weight is negative
}

/// Probability mass over sparsity levels {0, ..., n}; sums to one.
struct SparsityPmf {
  Eigen::VectorXd mass;  // length n + 1

  int max_sparsity() const { return static_cast<int>(mass.size()) - 1; }

  void validate() const {
    if (mass.size() < 1 || mass.minCoeff() < 0.0 ||
        std::abs(mass.sum() - 1.0) > 1e-12)
      throw std::invalid_argument("SparsityPmf: not a distribution");
  }
};

/// Normal density sampled at the integers 0..n and renormalized; zero
/// variance collapses to a point mass at the clamped rounded mean.
inline SparsityPmf discretize_pmf(double mu, double sigma_sq, int n) {
  if (n < 0 || !(sigma_sq >= 0.0))
    throw std::invalid_argument("discretize_pmf: bad arguments");
  SparsityPmf pmf;
  pmf.mass = Eigen::VectorXd::Zero(n + 1);
  if (sigma_sq == 0.0) {
    const int at = std::clamp(static_cast<int>(std::lround(mu)), 0, n);
    pmf.mass[at] = 1.0;
    return pmf;
  }
  // Work relative to the peak exponent so far-off means stay normalizable.
  double max_exp = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd exponent(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double d = k - mu;
    exponent[k] = -d * d / (2.0 * sigma_sq);
    max_exp = std::max(max_exp, exponent[k]);
  }
  for (int k = 0; k <= n; ++k) pmf.mass[k] = std::exp(exponent[k] - max_exp);
  pmf.mass /= pmf.mass.sum();
  return pmf;
}

}  // namespace arcs

#endif  // ARCS_UNSCENTED_HPP
