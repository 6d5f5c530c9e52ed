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

#include "arcs/signal_model.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <numeric>

#include "arcs/pgm.hpp"

namespace arcs {
namespace {

const ForegroundModel kModel(0.1, (4.0 / 255.0) * (4.0 / 255.0));

TEST(Frame, ColumnMajorVectorization) {
  // [[a, c], [b, d]] row by row; column-major order is (a, b, c, d).
  Frame f = Frame::constant(2, 0.0);
  f.at(0, 0) = 0.1;  // a
  f.at(1, 0) = 0.2;  // b
  f.at(0, 1) = 0.3;  // c
  f.at(1, 1) = 0.4;  // d
  const Eigen::VectorXd v = f.vectorize();
  ASSERT_EQ(v.size(), 4);
  EXPECT_DOUBLE_EQ(v[0], 0.1);
  EXPECT_DOUBLE_EQ(v[1], 0.2);
  EXPECT_DOUBLE_EQ(v[2], 0.3);
  EXPECT_DOUBLE_EQ(v[3], 0.4);
}

TEST(Frame, SinglePixelIdentity) {
  Frame f = Frame::constant(1, 0.625);
  EXPECT_EQ(f.vectorize().size(), 1);
  EXPECT_DOUBLE_EQ(f.vectorize()[0], 0.625);
  EXPECT_TRUE(devectorize(1, f.vectorize()) == f);
}

TEST(Frame, RoundTripIsExact) {
  SeededRng rng(7);
  for (int trial = 0; trial < 4; ++trial) {
    Eigen::VectorXd pix(16);
    for (int i = 0; i < 16; ++i) pix[i] = rng.uniform();
    Frame f(4, pix);
    EXPECT_TRUE(devectorize(4, f.vectorize()) == f);
  }
}

TEST(Frame, RejectsOutOfRangeIntensity) {
  Eigen::VectorXd pix = Eigen::VectorXd::Constant(4, 1.5);
  EXPECT_THROW(Frame(2, pix), std::invalid_argument);
  EXPECT_THROW(Frame(3, Eigen::VectorXd::Zero(4)), std::invalid_argument);
}

TEST(ForegroundModel, ValidatesParameters) {
  EXPECT_THROW(ForegroundModel(0.1, 0.02), std::invalid_argument);  // var >= tau^2
  EXPECT_THROW(ForegroundModel(1.0, 1e-4), std::invalid_argument);
  EXPECT_NO_THROW(ForegroundModel(0.1, 1e-4));
}

TEST(SampleForeground, EmptySupportIsSubThreshold) {
  const Eigen::VectorXd f = sample_foreground(kModel, {}, 4, 99);
  for (int i = 0; i < 4; ++i) EXPECT_LT(std::abs(f[i]), kModel.tau);
}

TEST(SampleForeground, FullSupportMagnitudes) {
  std::vector<int> support(16);
  std::iota(support.begin(), support.end(), 0);
  const Eigen::VectorXd f = sample_foreground(kModel, support, 16, 3);
  for (int i = 0; i < 16; ++i) {
    EXPECT_GE(std::abs(f[i]), kModel.tau);
    EXPECT_LE(std::abs(f[i]), 1.0);
  }
}

TEST(SampleForeground, MonteCarloMoments) {
  const int n = 100000;
  std::vector<int> support(1000);
  std::iota(support.begin(), support.end(), 0);
  const Eigen::VectorXd f = sample_foreground(kModel, support, n, 2024);

  double on_mean = 0.0;
  for (int i = 0; i < 1000; ++i) on_mean += f[i];
  on_mean /= 1000.0;
  // Signs are symmetric; the mean of 1000 draws has stddev ~ 0.019.
  EXPECT_NEAR(on_mean, 0.0, 0.06);

  double off_var = 0.0;
  for (int i = 1000; i < n; ++i) off_var += f[i] * f[i];
  off_var /= static_cast<double>(n - 1000);
  EXPECT_NEAR(off_var, kModel.sigma_b_sq, 0.05 * kModel.sigma_b_sq);
}

TEST(SampleForeground, DeterministicAndRangeChecked) {
  const Eigen::VectorXd a = sample_foreground(kModel, {1, 3}, 8, 5);
  const Eigen::VectorXd b = sample_foreground(kModel, {1, 3}, 8, 5);
  EXPECT_EQ(a, b);
  EXPECT_THROW(sample_foreground(kModel, {8}, 8, 5), std::out_of_range);
  EXPECT_THROW(sample_foreground(kModel, {-1}, 8, 5), std::out_of_range);
}

TEST(Synthesize, EmptySceneHasZeroSparsity) {
  SceneConfig config;
  config.side = 16;
  config.frame_count = 5;
  const SyntheticSequence seq = synthesize_sequence(config, kModel, 11);
  ASSERT_EQ(seq.frames.size(), 5u);
  for (int t = 0; t < 5; ++t) {
    EXPECT_EQ(seq.truth.sparsity[t], 0);
    EXPECT_TRUE(seq.truth.fully_visible[t]);
  }
}

TEST(Synthesize, RepeatModeStaticObject) {
  SceneConfig config;
  config.side = 32;
  config.frame_count = 6;
  config.repeat_first = true;
  config.objects.push_back({.x0 = 5, .y0 = 7, .width = 10, .height = 10});
  const SyntheticSequence seq = synthesize_sequence(config, kModel, 42);
  for (int t = 0; t < 6; ++t) {
    EXPECT_EQ(seq.truth.sparsity[t], 100);
    EXPECT_TRUE(seq.frames[t] == seq.frames[0]);
  }
}

TEST(Synthesize, ClipsObjectsAtFrameEdge) {
  SceneConfig config;
  config.side = 32;
  config.frame_count = 3;
  config.objects.push_back(
      {.x0 = 30, .y0 = 4, .vx = 1, .vy = 0, .width = 4, .height = 4});
  const SyntheticSequence seq = synthesize_sequence(config, kModel, 13);
  EXPECT_EQ(seq.truth.sparsity[0], 8);   // columns 30, 31 visible
  EXPECT_EQ(seq.truth.sparsity[1], 4);   // column 31 visible
  EXPECT_EQ(seq.truth.sparsity[2], 0);   // fully outside
  EXPECT_FALSE(seq.truth.fully_visible[0]);
  EXPECT_FALSE(seq.truth.fully_visible[1]);
}

TEST(Synthesize, SparsityMatchesThresholdedSupport) {
  SceneConfig config;
  config.side = 32;
  config.frame_count = 8;
  config.objects.push_back(
      {.x0 = 2, .y0 = 3, .vx = 0.5, .vy = 0.25, .width = 6, .height = 5});
  config.objects.push_back({.x0 = 20, .y0 = 18, .width = 4, .height = 7});
  const SyntheticSequence seq = synthesize_sequence(config, kModel, 77);
  for (int t = 0; t < config.frame_count; ++t) {
    const Eigen::VectorXd& f = seq.truth.foregrounds[t];
    int above = 0;
    for (Eigen::Index i = 0; i < f.size(); ++i)
      if (std::abs(f[i]) >= kModel.tau) ++above;
    EXPECT_EQ(above, seq.truth.sparsity[t]);
    for (int idx : seq.truth.supports[t]) {
      EXPECT_GE(std::abs(f[idx]), kModel.tau);
      EXPECT_LE(std::abs(f[idx]), 1.0);
    }
  }
}

TEST(Pgm, RoundTripWithinQuantization) {
  SceneConfig config;
  config.side = 16;
  config.frame_count = 1;
  config.objects.push_back({.x0 = 4, .y0 = 4, .width = 5, .height = 5});
  const SyntheticSequence seq = synthesize_sequence(config, kModel, 3);

  const auto path = std::filesystem::temp_directory_path() / "arcs_t.pgm";
  write_pgm(path, seq.frames[0]);
  const Frame back = read_pgm(path);
  ASSERT_EQ(back.side(), 16);
  const double max_err =
      (back.vectorize() - seq.frames[0].vectorize()).cwiseAbs().maxCoeff();
  EXPECT_LE(max_err, 0.5 / 255.0 + 1e-12);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace arcs
