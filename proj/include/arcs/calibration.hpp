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

#ifndef ARCS_CALIBRATION_HPP
#define ARCS_CALIBRATION_HPP

#include <Eigen/Core>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "arcs/cross_validation.hpp"
#include "arcs/ensemble.hpp"
#include "arcs/frame.hpp"

namespace arcs {

// Background calibration: beta = Phi * b measured through the FULL ensemble
// (stored unscaled, stacked-real for fourier), and zeta = Psi * b. Prefixes
// of beta reproduce direct measurement of b through any Phi_t after the
// sqrt(n/M_t) rescale.
struct BackgroundCalibration {
  EnsembleKind kind = EnsembleKind::gaussian;
  int ambient_dim = 0;
  int cv_rows = 0;
  std::uint64_t ensemble_seed = 0;
  std::uint64_t cv_seed = 0;
  int frame_count = 0;            // J
  Eigen::VectorXd beta_stacked;   // n (gaussian) or 2n (fourier: re, then im)
  Eigen::VectorXd zeta;           // r
};

/// Mean of full-ensemble measurements over background-only frames.
inline BackgroundCalibration calibrate_background(
    const std::vector<Frame>& frames, const MeasurementEnsemble& ensemble,
    const CrossValidationMatrix& cv) {
  if (frames.empty())
    throw std::invalid_argument("calibrate_background: empty frame list");
  const int n = ensemble.ambient_dim();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
  for (const Frame& f : frames) {
    if (f.pixel_count() != n)
      throw std::invalid_argument("calibrate_background: frame size mismatch");
    mean += f.vectorize();
  }
  mean /= static_cast<double>(frames.size());

  BackgroundCalibration calib;
  calib.kind = ensemble.kind();
  calib.ambient_dim = n;
  calib.cv_rows = cv.rows();
  calib.ensemble_seed = ensemble.seed();
  calib.cv_seed = cv.seed();
  calib.frame_count = static_cast<int>(frames.size());

  // (1/J) sum_j Phi x_j == Phi mean by linearity; the full-ensemble product
  // is one unscaled RowSubsetOperator apply at M = n.
  const RowSubsetOperator full(ensemble, n);
  calib.beta_stacked = full.apply(mean);  // scale is exactly 1 at M = n
  calib.zeta = cv.apply(mean);
  return calib;
}

/// beta_t: the first M_t stored entries rescaled by sqrt(n / M_t), in the
/// same stacked-real layout the operator produces.
inline Eigen::VectorXd background_prefix(const BackgroundCalibration& calib,
                                         int m) {
  const int n = calib.ambient_dim;
  if (m < 1 || m > n)
    throw std::invalid_argument(
        "background_prefix: M_t exceeds stored beta length");
  const double scale =
      std::sqrt(static_cast<double>(n) / static_cast<double>(m));
  if (calib.kind == EnsembleKind::gaussian)
    return scale * calib.beta_stacked.head(m);
  Eigen::VectorXd out(2 * m);
  out.head(m) = scale * calib.beta_stacked.head(m);
  out.tail(m) = scale * calib.beta_stacked.segment(n, m);
  return out;
}

/// xi_t = y_t - beta_t for stacked-real measurements taken with M_t rows.
inline Eigen::VectorXd foreground_measurements(
    const Eigen::VectorXd& y_stacked, const BackgroundCalibration& calib,
    int m) {
  const Eigen::VectorXd beta_t = background_prefix(calib, m);
  if (y_stacked.size() != beta_t.size())
    throw std::invalid_argument(
        "foreground_measurements: measurement length does not match M_t");
  return y_stacked - beta_t;
}

/// gamma_t = chi_t - zeta.
inline Eigen::VectorXd cv_foreground(const Eigen::VectorXd& chi,
                                     const BackgroundCalibration& calib) {
  if (chi.size() != calib.zeta.size())
    throw std::invalid_argument("cv_foreground: dimension mismatch");
  return chi - calib.zeta;
}

// Binary persistence: little-endian header (magic, version, kind, n, r,
// seeds, J) followed by beta then zeta as 64-bit floats.

namespace calibration_detail {

constexpr char kMagic[8] = {'A', 'R', 'C', 'S', 'C', 'A', 'L', 'B'};

template <typename T>
void put(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("calibration: truncated file");
  return value;
}

}  // namespace calibration_detail

inline void save_calibration(const std::filesystem::path& path,
                             const BackgroundCalibration& calib) {
  namespace d = calibration_detail;
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("calibration: cannot write " + path.string());
  out.write(d::kMagic, sizeof(d::kMagic));
  d::put<std::uint32_t>(out, 1);  // version
  d::put<std::uint8_t>(out, calib.kind == EnsembleKind::gaussian ? 0 : 1);
  d::put<std::int32_t>(out, calib.ambient_dim);
  d::put<std::int32_t>(out, calib.cv_rows);
  d::put<std::uint64_t>(out, calib.ensemble_seed);
  d::put<std::uint64_t>(out, calib.cv_seed);
  d::put<std::int32_t>(out, calib.frame_count);
  out.write(reinterpret_cast<const char*>(calib.beta_stacked.data()),
            static_cast<std::streamsize>(calib.beta_stacked.size() *
                                         sizeof(double)));
  out.write(reinterpret_cast<const char*>(calib.zeta.data()),
            static_cast<std::streamsize>(calib.zeta.size() * sizeof(double)));
  if (!out) throw std::runtime_error("calibration: write failed");
}

inline BackgroundCalibration load_calibration(
    const std::filesystem::path& path) {
  namespace d = calibration_detail;
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("calibration: cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, d::kMagic, sizeof(magic)) != 0)
    throw std::runtime_error("calibration: bad magic in " + path.string());
  const auto version = d::get<std::uint32_t>(in);
  if (version != 1)
    throw std::runtime_error("calibration: unsupported version");
  BackgroundCalibration calib;
  calib.kind = d::get<std::uint8_t>(in) == 0 ? EnsembleKind::gaussian
                                             : EnsembleKind::fourier_permuted;
  calib.ambient_dim = d::get<std::int32_t>(in);
  calib.cv_rows = d::get<std::int32_t>(in);
  calib.ensemble_seed = d::get<std::uint64_t>(in);
  calib.cv_seed = d::get<std::uint64_t>(in);
  calib.frame_count = d::get<std::int32_t>(in);
  const int beta_len = calib.kind == EnsembleKind::gaussian
                           ? calib.ambient_dim
                           : 2 * calib.ambient_dim;
  calib.beta_stacked.resize(beta_len);
  in.read(reinterpret_cast<char*>(calib.beta_stacked.data()),
          static_cast<std::streamsize>(beta_len * sizeof(double)));
  calib.zeta.resize(calib.cv_rows);
  in.read(reinterpret_cast<char*>(calib.zeta.data()),
          static_cast<std::streamsize>(calib.cv_rows * sizeof(double)));
  if (!in) throw std::runtime_error("calibration: truncated file");
  return calib;
}

}  // namespace arcs

#endif  // ARCS_CALIBRATION_HPP
