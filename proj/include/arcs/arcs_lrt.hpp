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

#ifndef ARCS_ARCS_LRT_HPP
#define ARCS_ARCS_LRT_HPP

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "arcs/blob.hpp"
#include "arcs/calibration.hpp"
#include "arcs/decoder.hpp"
#include "arcs/ensemble.hpp"
#include "arcs/phase_diagram.hpp"
#include "arcs/sparsity_cost.hpp"
#include "arcs/unscented.hpp"
#include "arcs/warp.hpp"

namespace arcs {

struct LrtConfig {
  double lambda = 0.1;           // sparsity penalty weight
  int downsample_factor = 2;     // D; low-res side is N / D
  double delta = 0.25;           // near-isometry constant for the bound
  double tau = 0.1;
  double sigma_b_sq = (4.0 / 255.0) * (4.0 / 255.0);
  int side = 0;                  // N
  TrackDynamics dynamics;        // random-walk covariance
  TemplateOutline outline;       // unit square by default
  AreaMode area_mode = AreaMode::geometric;
  double tau_blob = 0.05;        // blob-tracker threshold

  int ambient_dim() const { return side * side; }
  int low_res_side() const { return side / downsample_factor; }

  void validate() const {
    if (side <= 0 || downsample_factor < 1 || side % downsample_factor != 0)
      throw std::invalid_argument("LrtConfig: D must divide the frame side");
    if (!(lambda > 0.0))
      throw std::invalid_argument("LrtConfig: lambda must be positive");
    if (!(delta > 0.0 && delta < std::numbers::sqrt2 - 1.0))
      throw std::invalid_argument("LrtConfig: delta outside (0, sqrt(2)-1)");
    if (!(tau > 0.0 && tau < 1.0) || !(sigma_b_sq > 0.0))
      throw std::invalid_argument("LrtConfig: bad model parameters");
    dynamics.validate();
    outline.validate();
  }

  CostParams cost_params() const {
    return CostParams{lambda, recovery_constant(delta), tau,
                      std::sqrt(sigma_b_sq), ambient_dim()};
  }
};

struct LrtStepResult {
  Eigen::VectorXd f_hat;  // full (untruncated) foreground estimate
  int s_hat_used = 0;
  int m_used = 0;
  int s_hat_next = 0;
  int m_next = 0;
  std::optional<WarpParams> track;
  double mu_pred = 0.0;       // predicted sparsity mean (valid with a track)
  double sigma_sq_pred = 0.0;
  DecodeResult decode;
  bool decode_failed = false;
  int side_overhead = 0;      // L^2 low-resolution measurements per frame
};

// Sequential controller driven by a co-located low-resolution camera.
// Per frame: decode the foreground from the calibrated compressive
// measurements, obtain the object track from the low-resolution image (or
// an externally supplied track), push the track's random-walk step through
// the unscented transform to a predicted sparsity distribution, and pick
// the next sparsity estimate by minimizing the penalized expected-error
// cost. Frames without a track fall back to the thresholded support of the
// decoded estimate.
class LrtController {
 public:
  LrtController(const LrtConfig& config, const PhaseDiagram& diagram,
                const LookupPolicy& policy,
                const MeasurementEnsemble& ensemble,
                const BackgroundCalibration& calibration,
                std::optional<Frame> background_lo, const SolverConfig& solver,
                int initial_s_hat)
      : cfg_(config),
        pd_(&diagram),
        policy_(policy),
        ens_(&ensemble),
        calib_(&calibration),
        background_lo_(std::move(background_lo)),
        solver_cfg_(solver),
        s_hat_(std::clamp(initial_s_hat, 0, config.ambient_dim())) {
    cfg_.validate();
    if (ensemble.ambient_dim() != cfg_.ambient_dim())
      throw std::invalid_argument("LrtController: ensemble dim mismatch");
    if (background_lo_ && background_lo_->side() != cfg_.low_res_side())
      throw std::invalid_argument("LrtController: low-res background size");
  }

  int s_hat() const { return s_hat_; }

  int measurement_count() const {
    try {
      return lookup_measurements(*pd_, s_hat_, policy_);
    } catch (const NoFeasibleMeasurementCount&) {
      return pd_->ambient_dim;
    }
  }

  /// One frame. `frame_lo` is the secondary camera's image; `manual_track`
  /// overrides the blob tracker when present (visible-object tracks from a
  /// file, or none when the object is not fully visible).
  LrtStepResult step(const Eigen::VectorXd& y_stacked, const Frame& frame_lo,
                     std::optional<WarpParams> manual_track = std::nullopt,
                     bool use_blob_tracker = true) {
    const int n = cfg_.ambient_dim();
    LrtStepResult out;
    out.s_hat_used = s_hat_;
    out.m_used = measurement_count();
    out.side_overhead = cfg_.low_res_side() * cfg_.low_res_side();

    const RowSubsetOperator op(*ens_, out.m_used);
    const Eigen::VectorXd xi =
        foreground_measurements(y_stacked, *calib_, out.m_used);
    out.decode = decode(xi, op, solver_cfg_);
    out.decode_failed = !out.decode.estimate.allFinite() ||
                        out.decode.feasibility_residual > 1e-2;
    out.f_hat = out.decode.estimate;

    out.track = manual_track;
    if (!out.track && use_blob_tracker && background_lo_)
      out.track = blob_track(frame_lo, *background_lo_, cfg_.tau_blob);

    int next;
    if (out.track) {
      const auto [mu, var] =
          unscented_moments(*out.track, cfg_.dynamics, cfg_.outline,
                            cfg_.downsample_factor, cfg_.area_mode);
      out.mu_pred = mu;
      out.sigma_sq_pred = var;
      const SparsityPmf pmf = discretize_pmf(mu, var, n);
      next = minimize_cost(pmf, cfg_.cost_params());
    } else {
      next = threshold_count(out.f_hat);
    }
    s_hat_ = std::clamp(next, 0, n);
    out.s_hat_next = s_hat_;
    out.m_next = measurement_count();
    return out;
  }

 private:
  int threshold_count(const Eigen::VectorXd& f) const {
    int count = 0;
    for (Eigen::Index i = 0; i < f.size(); ++i)
      if (std::abs(f[i]) >= cfg_.tau) ++count;
    return count;
  }

  LrtConfig cfg_;
  const PhaseDiagram* pd_;
  LookupPolicy policy_;
  const MeasurementEnsemble* ens_;
  const BackgroundCalibration* calib_;
  std::optional<Frame> background_lo_;
  SolverConfig solver_cfg_;
  int s_hat_;
};

}  // namespace arcs

#endif  // ARCS_ARCS_LRT_HPP
