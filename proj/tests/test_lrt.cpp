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

#include <gtest/gtest.h>

#include "arcs/arcs_lrt.hpp"
#include "arcs/blob.hpp"
#include "arcs/signal_model.hpp"
#include "arcs/sparsity_cost.hpp"
#include "arcs/unscented.hpp"
#include "arcs/warp.hpp"

namespace arcs {
namespace {

constexpr double kSigmaBSq = (4.0 / 255.0) * (4.0 / 255.0);

TEST(Downsample, BlockMeanAndIdentity) {
  Frame hi = Frame::constant(2, 0.0);
  hi.at(0, 1) = 1.0;
  hi.at(1, 0) = 1.0;
  const Frame lo = downsample(hi, 2);
  ASSERT_EQ(lo.side(), 1);
  EXPECT_DOUBLE_EQ(lo.at(0, 0), 0.5);

  const Frame c = Frame::constant(8, 0.25);
  EXPECT_TRUE(downsample(c, 4) == Frame::constant(2, 0.25));
  EXPECT_TRUE(downsample(c, 1) == c);
  EXPECT_THROW(downsample(c, 3), std::invalid_argument);
}

TEST(Downsample, PreservesMean) {
  SeededRng rng(5);
  Eigen::VectorXd pix(16 * 16);
  for (int i = 0; i < 256; ++i) pix[i] = rng.uniform();
  const Frame hi(16, pix);
  const Frame lo = downsample(hi, 4);
  EXPECT_NEAR(lo.vectorize().mean(), hi.vectorize().mean(), 1e-14);
}

TEST(WarpToSparsity, UnitIdentity) {
  EXPECT_EQ(warp_to_sparsity({1, 1, 0, 0}, {}, 1), 1);
}

TEST(WarpToSparsity, GeometricArea) {
  // 4 x 3 box in low-res units at downsampling 2: 48 high-res pixels.
  EXPECT_EQ(warp_to_sparsity({4, 3, 10, 20}, {}, 2), 48);
}

TEST(WarpToSparsity, LiteralModeUsesPrintedDeterminant) {
  // |D^2 (p1 p4 - p2 p3)| * template area = 4 * (4*20 - 3*10) = 200.
  EXPECT_EQ(warp_to_sparsity({4, 3, 10, 20}, {}, 2, AreaMode::literal), 200);
}

TEST(WarpToSparsity, DegenerateWidthClampsToOne) {
  EXPECT_EQ(warp_to_sparsity({0, 5, 2, 2}, {}, 2), 1);
}

TEST(WarpToSparsity, RejectsDegenerateTemplate) {
  TemplateOutline line;
  line.corners = {{{0, 0}, {1, 0}, {2, 0}, {3, 0}}};
  EXPECT_THROW(warp_to_sparsity({1, 1, 0, 0}, line, 1), std::invalid_argument);
}

// Rasterization oracle: high-res pixel centers inside the mapped box.
int raster_count(const WarpParams& p, int d) {
  const double x0 = d * p.p3, x1 = d * (p.p3 + p.p1);
  const double y0 = d * p.p4, y1 = d * (p.p4 + p.p2);
  int count = 0;
  for (int i = static_cast<int>(std::floor(x0)) - 1;
       i <= static_cast<int>(std::ceil(x1)) + 1; ++i)
    for (int j = static_cast<int>(std::floor(y0)) - 1;
         j <= static_cast<int>(std::ceil(y1)) + 1; ++j)
      if (i + 0.5 >= x0 && i + 0.5 < x1 && j + 0.5 >= y0 && j + 0.5 < y1)
        ++count;
  return count;
}

TEST(WarpToSparsity, TracksRasterizationWithinPerimeterBand) {
  SeededRng rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 1 << rng.below(3);  // 1, 2, 4
    const WarpParams p{0.5 + 9.5 * rng.uniform(), 0.5 + 9.5 * rng.uniform(),
                       20.0 * rng.uniform(), 20.0 * rng.uniform()};
    const int predicted = warp_to_sparsity(p, {}, d);
    const int rasterized = raster_count(p, d);
    const double band = 2.0 * (p.p1 + p.p2) * d + 4.0;
    EXPECT_LE(std::abs(predicted - rasterized), band)
        << "d=" << d << " p1=" << p.p1 << " p2=" << p.p2;
  }
}

TEST(Unscented, ZeroCovarianceIsDeterministic) {
  TrackDynamics still;
  still.covariance.setZero();
  const WarpParams p{4, 2.5, 3, 7};
  const auto [mu, var] = unscented_moments(p, still, {}, 2);
  EXPECT_NEAR(mu, warp_area(p, {}, 2), 1e-12);
  EXPECT_NEAR(var, 0.0, 1e-18);
}

TEST(Unscented, TranslationNoiseIsInvisibleInGeometricMode) {
  TrackDynamics dyn;
  dyn.covariance = Eigen::Vector4d(0.0, 0.0, 3.0, 3.0).asDiagonal();
  const auto [mu, var] = unscented_moments({5, 4, 1, 2}, dyn, {}, 2);
  EXPECT_DOUBLE_EQ(mu, warp_area({5, 4, 1, 2}, {}, 2));
  EXPECT_NEAR(var, 0.0, 1e-18);
}

TEST(Unscented, MatchesMonteCarloMean) {
  const TrackDynamics dyn;  // diag(1, 1, 3, 3)
  SeededRng rng(33);
  for (int trial = 0; trial < 3; ++trial) {
    const WarpParams p{4.0 + 6.0 * rng.uniform(), 4.0 + 6.0 * rng.uniform(),
                       10.0 * rng.uniform(), 10.0 * rng.uniform()};
    const auto [mu, var] = unscented_moments(p, dyn, {}, 2);

    SeededRng mc(hash3(44, trial, 0));
    double acc = 0.0;
    const int samples = 100000;
    for (int i = 0; i < samples; ++i) {
      const WarpParams step{p.p1 + mc.normal(), p.p2 + mc.normal(),
                            p.p3 + std::sqrt(3.0) * mc.normal(),
                            p.p4 + std::sqrt(3.0) * mc.normal()};
      acc += warp_area(step, {}, 2);
    }
    const double mc_mean = acc / samples;
    EXPECT_NEAR(mu, mc_mean, 0.10 * mc_mean);
    EXPECT_GT(var, 0.0);
  }
}

TEST(Unscented, RejectsBadCovariance) {
  TrackDynamics dyn;
  dyn.covariance(0, 1) = 0.5;  // asymmetric
  EXPECT_THROW(unscented_moments({1, 1, 0, 0}, dyn, {}, 1),
               std::invalid_argument);
  dyn.covariance = -Eigen::Matrix4d::Identity();
  EXPECT_THROW(unscented_moments({1, 1, 0, 0}, dyn, {}, 1),
               std::invalid_argument);
}

TEST(DiscretizePmf, PointMassAndNormalization) {
  const SparsityPmf point = discretize_pmf(5.0, 0.0, 20);
  EXPECT_DOUBLE_EQ(point.mass[5], 1.0);
  EXPECT_NO_THROW(point.validate());

  const SparsityPmf off = discretize_pmf(-3.0, 0.0, 20);
  EXPECT_DOUBLE_EQ(off.mass[0], 1.0);

  const int n = 1000;
  const SparsityPmf q = discretize_pmf(n / 2.0, std::pow(n / 10.0, 2), n);
  EXPECT_NEAR(q.mass.sum(), 1.0, 1e-12);
  double mean = 0.0;
  for (int k = 0; k <= n; ++k) mean += k * q.mass[k];
  EXPECT_NEAR(mean, n / 2.0, 0.01 * (n / 2.0));
}

TEST(RecoveryConstant, DirectEvaluation) {
  // delta -> 0 limit is 2.
  EXPECT_NEAR(recovery_constant(1e-12), 2.0, 1e-9);
  const double delta = 0.25;
  const double expected = (2.0 - (2.0 - std::numbers::sqrt2) * delta) /
                          (1.0 - (1.0 - std::numbers::sqrt2) * delta);
  EXPECT_DOUBLE_EQ(recovery_constant(delta), expected);
  EXPECT_NEAR(recovery_constant(delta), 1.6796, 1e-4);
}

TEST(RecoveryConstant, MonotoneOverValidRange) {
  // The printed constant decreases from 2 toward 3/2 across (0, sqrt2 - 1).
  double prev = recovery_constant(1e-6);
  for (double delta = 0.05; delta < std::numbers::sqrt2 - 1.0; delta += 0.05) {
    const double value = recovery_constant(delta);
    EXPECT_LT(value, prev);
    prev = value;
  }
  EXPECT_THROW(recovery_constant(std::numbers::sqrt2 - 1.0),
               std::invalid_argument);
  EXPECT_THROW(recovery_constant(0.0), std::invalid_argument);
}

CostParams test_params(int n, double lambda) {
  return CostParams{lambda, recovery_constant(0.25), 0.1,
                    std::sqrt(kSigmaBSq), n};
}

TEST(ExpectedCost, PointMassAtZero) {
  const int n = 400;
  SparsityPmf q;
  q.mass = Eigen::VectorXd::Zero(n + 1);
  q.mass[0] = 1.0;
  const CostParams params = test_params(n, 0.05);
  for (int s : {1, 10, 50}) {
    const double expected =
        params.c0 / std::sqrt(s) * std::sqrt(2.0 / std::numbers::pi) *
            (n - s) * params.sigma_b +
        params.lambda * s;
    EXPECT_NEAR(expected_cost(s, q, params), expected, 1e-12);
  }
  EXPECT_THROW(expected_cost(0, q, params), std::invalid_argument);
}

TEST(ExpectedCost, PointMassCoveredExactly) {
  const int n = 400, k = 120;
  SparsityPmf q;
  q.mass = Eigen::VectorXd::Zero(n + 1);
  q.mass[k] = 1.0;
  const CostParams params = test_params(n, 0.05);
  const double expected =
      params.c0 / std::sqrt(k) * std::sqrt(2.0 / std::numbers::pi) * (n - k) *
          params.sigma_b +
      params.lambda * k;
  EXPECT_NEAR(expected_cost(k, q, params), expected, 1e-12);
}

TEST(ExpectedCost, MonteCarloL1ErrorOracle) {
  // J0 + J1 should match E[e_shat(f)_1] when the true sparsity is drawn
  // from q; valid regime keeps s_hat well below the typical sparsity.
  const int n = 1024;
  const SparsityPmf q = discretize_pmf(300.0, 30.0 * 30.0, n);
  const ForegroundModel model(0.1, kSigmaBSq);
  const CostParams params = test_params(n, 0.05);
  for (int s_hat : {3, 10}) {
    SeededRng rng(hash3(71, s_hat, 0));
    double acc = 0.0;
    const int samples = 20000;
    for (int i = 0; i < samples; ++i) {
      // Inverse-CDF draw of the sparsity level.
      double u = rng.uniform(), cdf = 0.0;
      int k = 0;
      for (; k < n; ++k) {
        cdf += q.mass[k];
        if (cdf >= u) break;
      }
      std::vector<int> support(k);
      std::iota(support.begin(), support.end(), 0);
      const Eigen::VectorXd f =
          sample_foreground(model, support, n, hash3(72, s_hat, i));
      acc += sparse_approx_error(f, s_hat, 1);
    }
    const double mc = acc / samples;
    const double closed =
        expected_cost(s_hat, q, params) - params.lambda * s_hat;
    const double j_sum = closed * std::sqrt(static_cast<double>(s_hat)) /
                         params.c0;
    EXPECT_NEAR(j_sum, mc, 0.05 * mc) << "s_hat=" << s_hat;
  }
}

int exhaustive_minimizer(const SparsityPmf& q, const CostParams& params) {
  const ExpectedCostEvaluator cost(q, params);
  int best = 1;
  double best_value = cost(1);
  for (int s = 2; s <= params.ambient_dim; ++s) {
    const double value = cost(s);
    if (value < best_value) {
      best_value = value;
      best = s;
    }
  }
  return best;
}

TEST(MinimizeCost, LargePenaltyForcesMinimum) {
  const int n = 500;
  const SparsityPmf q = discretize_pmf(100.0, 400.0, n);
  EXPECT_EQ(minimize_cost(q, test_params(n, 1e6)), 1);
}

TEST(MinimizeCost, PointMassNeverUnderestimates) {
  const int n = 800, k = 50;
  SparsityPmf q;
  q.mass = Eigen::VectorXd::Zero(n + 1);
  q.mass[k] = 1.0;
  const CostParams params = test_params(n, 0.01);
  const int s = minimize_cost(q, params);
  EXPECT_GE(s, k);
  EXPECT_EQ(s, exhaustive_minimizer(q, params));
}

TEST(MinimizeCost, AgreesWithExhaustiveScan) {
  SeededRng rng(99);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 200 + static_cast<int>(rng.below(1800));
    const double mu = 1.0 + (n - 1) * rng.uniform();
    const double sigma = 1.0 + 0.2 * n * rng.uniform();
    const SparsityPmf q = discretize_pmf(mu, sigma * sigma, n);
    const double lambda = std::pow(10.0, -3.0 + 4.0 * rng.uniform());
    const CostParams params = test_params(n, lambda);
    EXPECT_EQ(minimize_cost(q, params), exhaustive_minimizer(q, params))
        << "n=" << n << " mu=" << mu << " sigma=" << sigma
        << " lambda=" << lambda;
  }
}

TEST(BlobTrack, NoDifferenceMeansNoTrack) {
  const Frame bg = Frame::constant(16, 0.2);
  EXPECT_FALSE(blob_track(bg, bg, 0.05).has_value());
}

TEST(BlobTrack, FindsRectangle) {
  Frame bg = Frame::constant(16, 0.1);
  Frame frame = bg;
  for (int col = 5; col < 8; ++col)
    for (int row = 7; row < 11; ++row) frame.at(row, col) = 0.9;
  const auto track = blob_track(frame, bg, 0.05);
  ASSERT_TRUE(track.has_value());
  EXPECT_DOUBLE_EQ(track->p1, 3.0);
  EXPECT_DOUBLE_EQ(track->p2, 4.0);
  EXPECT_DOUBLE_EQ(track->p3, 5.0);
  EXPECT_DOUBLE_EQ(track->p4, 7.0);
}

TEST(BlobTrack, PrefersLargestComponent) {
  Frame bg = Frame::constant(16, 0.1);
  Frame frame = bg;
  for (int col = 1; col < 3; ++col)       // area 10
    for (int row = 1; row < 6; ++row) frame.at(row, col) = 0.9;
  for (int col = 8; col < 13; ++col)      // area 40
    for (int row = 6; row < 14; ++row) frame.at(row, col) = 0.9;
  const auto track = blob_track(frame, bg, 0.05);
  ASSERT_TRUE(track.has_value());
  EXPECT_DOUBLE_EQ(track->p1, 5.0);
  EXPECT_DOUBLE_EQ(track->p2, 8.0);
  EXPECT_DOUBLE_EQ(track->p3, 8.0);
  EXPECT_DOUBLE_EQ(track->p4, 6.0);
}

TEST(LabelComponents, DiagonalPixelsConnect) {
  std::vector<char> mask(16, 0);
  // (row, col) = (0,0) and (1,1) on a 4x4 grid, column-major index c*4+r.
  mask[0] = 1;
  mask[5] = 1;
  const std::vector<Blob> blobs = label_components(mask, 4);
  ASSERT_EQ(blobs.size(), 1u);
  EXPECT_EQ(blobs[0].area, 2);
}

}  // namespace
}  // namespace arcs
