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

#ifndef ARCS_ENSEMBLE_HPP
#define ARCS_ENSEMBLE_HPP

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "arcs/fft.hpp"
#include "arcs/rng.hpp"

namespace arcs {

enum class EnsembleKind { gaussian, fourier_permuted };

inline std::string to_string(EnsembleKind kind) {
  return kind == EnsembleKind::gaussian ? "gaussian" : "fourier_permuted";
}

inline EnsembleKind ensemble_kind_from_string(const std::string& s) {
  if (s == "gaussian") return EnsembleKind::gaussian;
  if (s == "fourier_permuted" || s == "fourier")
    return EnsembleKind::fourier_permuted;
  throw std::invalid_argument("unknown ensemble kind: " + s);
}

// A fixed n x n measurement ensemble defined implicitly by (kind, n, seed).
// Rows are regenerated on demand from (seed, row_index); the full matrix is
// never stored. Gaussian entries are N(0, 1/n); Fourier rows are rows of the
// unitary n-point DFT matrix under a seeded permutation.
class MeasurementEnsemble {
 public:
  MeasurementEnsemble(EnsembleKind kind, int ambient_dim, std::uint64_t seed)
      : kind_(kind), n_(ambient_dim), seed_(seed) {
    if (n_ <= 0)
      throw std::invalid_argument("MeasurementEnsemble: ambient_dim <= 0");
    if (kind_ == EnsembleKind::fourier_permuted) {
      row_perm_.resize(n_);
      std::iota(row_perm_.begin(), row_perm_.end(), 0);
      SeededRng rng(seed_, kPermStream);
      for (int i = n_ - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(row_perm_[i], row_perm_[j]);
      }
    }
  }

  EnsembleKind kind() const { return kind_; }
  int ambient_dim() const { return n_; }
  std::uint64_t seed() const { return seed_; }

  double gaussian_entry(int row, int col) const {
    return normal_at(seed_, static_cast<std::uint64_t>(row), col) /
           std::sqrt(static_cast<double>(n_));
  }

  void gaussian_row(int row, double* out) const {
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n_));
    for (int j = 0; j < n_; ++j)
      out[j] = normal_at(seed_, static_cast<std::uint64_t>(row), j) * inv_sqrt_n;
  }

  /// Source DFT row selected for ensemble row `row` (fourier only).
  int fourier_source_row(int row) const { return row_perm_.at(row); }

  std::complex<double> fourier_entry(int row, int col) const {
    const double angle = -2.0 * std::numbers::pi *
                         static_cast<double>(fourier_source_row(row)) *
                         static_cast<double>(col) / static_cast<double>(n_);
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n_));
    return {std::cos(angle) * inv_sqrt_n, std::sin(angle) * inv_sqrt_n};
  }

  const std::vector<int>& row_permutation() const { return row_perm_; }

 private:
  static constexpr std::uint64_t kPermStream = 0x70657261ULL;  // outside row ids

  EnsembleKind kind_;
  int n_;
  std::uint64_t seed_;
  std::vector<int> row_perm_;  // fourier only
};

// The operator Phi_t = sqrt(n / M_t) * (first M_t ensemble rows).
//
// Measurements are handled in a stacked-real representation throughout:
// gaussian operators produce M_t reals, fourier operators produce 2*M_t
// reals (all real parts, then all imaginary parts). apply_complex() exposes
// the contract-level complex view.
class RowSubsetOperator {
 public:
  RowSubsetOperator(const MeasurementEnsemble& ensemble, int rows)
      : ens_(&ensemble), m_(rows) {
    const int n = ens_->ambient_dim();
    if (m_ < 1 || m_ > n)
      throw std::invalid_argument("RowSubsetOperator: need 1 <= M_t <= n");
    scale_ = std::sqrt(static_cast<double>(n) / static_cast<double>(m_));
    if (ens_->kind() == EnsembleKind::gaussian) {
      block_.resize(m_, n);
      std::vector<double> row(n);
      for (int i = 0; i < m_; ++i) {
        ens_->gaussian_row(i, row.data());
        for (int j = 0; j < n; ++j) block_(i, j) = row[j];
      }
    }
  }

  const MeasurementEnsemble& ensemble() const { return *ens_; }
  EnsembleKind kind() const { return ens_->kind(); }
  int rows() const { return m_; }
  int ambient_dim() const { return ens_->ambient_dim(); }
  double scale() const { return scale_; }
  bool is_complex() const { return kind() == EnsembleKind::fourier_permuted; }
  int stacked_rows() const { return is_complex() ? 2 * m_ : m_; }

  /// y = Phi_t x in stacked-real form.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    check_dim(x);
    if (!is_complex()) return scale_ * (block_ * x);
    Eigen::VectorXcd c = unitary_dft_rows(x);
    Eigen::VectorXd out(2 * m_);
    out.head(m_) = scale_ * c.real();
    out.tail(m_) = scale_ * c.imag();
    return out;
  }

  /// w = Phi_t^T y for stacked-real y.
  Eigen::VectorXd adjoint(const Eigen::VectorXd& y) const {
    if (y.size() != stacked_rows())
      throw std::invalid_argument("RowSubsetOperator: adjoint dim mismatch");
    const int n = ambient_dim();
    if (!is_complex()) return scale_ * (block_.transpose() * y);
    // Re(W)^T yre + Im(W)^T yim = Re(W (yre - i*yim)) since the DFT matrix
    // is symmetric; scatter into source rows and run one forward transform.
    Eigen::VectorXcd scattered = Eigen::VectorXcd::Zero(n);
    for (int a = 0; a < m_; ++a)
      scattered[ens_->fourier_source_row(a)] =
          std::complex<double>(y[a], -y[m_ + a]);
    Eigen::VectorXcd t = unitary_dft_full(scattered);
    return scale_ * t.real();
  }

  Eigen::VectorXcd apply_complex(const Eigen::VectorXd& x) const {
    if (!is_complex()) {
      const Eigen::VectorXd y = apply(x);
      Eigen::VectorXcd out(m_);
      out.real() = y;
      out.imag().setZero();
      return out;
    }
    const Eigen::VectorXd y = apply(x);
    Eigen::VectorXcd out(m_);
    out.real() = y.head(m_);
    out.imag() = y.tail(m_);
    return out;
  }

  /// Unscaled gaussian row block (gaussian kind only).
  const Eigen::MatrixXd& dense_block() const {
    if (is_complex())
      throw std::logic_error("dense_block: fourier operator has no block");
    return block_;
  }

  /// Source DFT row indices for the selected rows (fourier kind only).
  std::vector<int> selected_source_rows() const {
    std::vector<int> rows(m_);
    for (int a = 0; a < m_; ++a) rows[a] = ens_->fourier_source_row(a);
    return rows;
  }

 private:
  void check_dim(const Eigen::VectorXd& x) const {
    if (x.size() != ambient_dim())
      throw std::invalid_argument("RowSubsetOperator: dimension mismatch");
  }

  // Unitary DFT outputs at the selected (permuted) rows.
  Eigen::VectorXcd unitary_dft_rows(const Eigen::VectorXd& x) const {
    const int n = ambient_dim();
    Eigen::VectorXcd out(m_);
    if (is_power_of_two(n)) {
      std::vector<std::complex<double>> buf(n);
      for (int j = 0; j < n; ++j) buf[j] = x[j];
      fft_radix2(buf, false);
      const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
      for (int a = 0; a < m_; ++a)
        out[a] = buf[ens_->fourier_source_row(a)] * inv_sqrt_n;
      return out;
    }
    for (int a = 0; a < m_; ++a) {
      std::complex<double> acc(0.0, 0.0);
      for (int j = 0; j < n; ++j) acc += ens_->fourier_entry(a, j) * x[j];
      out[a] = acc;
    }
    return out;
  }

  Eigen::VectorXcd unitary_dft_full(const Eigen::VectorXcd& v) const {
    const int n = ambient_dim();
    Eigen::VectorXcd out(n);
    if (is_power_of_two(n)) {
      std::vector<std::complex<double>> buf(n);
      for (int j = 0; j < n; ++j) buf[j] = v[j];
      fft_radix2(buf, false);
      const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
      for (int j = 0; j < n; ++j) out[j] = buf[j] * inv_sqrt_n;
      return out;
    }
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k) {
      std::complex<double> acc(0.0, 0.0);
      for (int j = 0; j < n; ++j) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) *
                             static_cast<double>(j) / static_cast<double>(n);
        acc += v[j] * std::complex<double>(std::cos(angle), std::sin(angle));
      }
      out[k] = acc * inv_sqrt_n;
    }
    return out;
  }

  const MeasurementEnsemble* ens_;
  int m_;
  double scale_;
  Eigen::MatrixXd block_;  // gaussian rows, unscaled
};

struct RipRatioEstimate {
  double min_ratio;
  double max_ratio;
};

/// Monte Carlo envelope of ||Phi f||^2 / ||f||^2 over random s-sparse f.
/// A diagnostic lower bound on the restricted isometry constant delta_s.
inline RipRatioEstimate estimate_rip_ratio(const RowSubsetOperator& op, int s,
                                           int trials, std::uint64_t seed) {
  const int n = op.ambient_dim();
  if (s < 1 || s > n)
    throw std::invalid_argument("estimate_rip_ratio: need 1 <= s <= n");
  RipRatioEstimate est{std::numeric_limits<double>::infinity(), 0.0};
  for (int t = 0; t < trials; ++t) {
    SeededRng rng(seed, static_cast<std::uint64_t>(t));
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    // Partial Fisher-Yates for a uniform random s-subset.
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < s; ++i) {
      const int j =
          i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
      std::swap(idx[i], idx[j]);
      f[idx[i]] = rng.normal();
    }
    const double ratio = op.apply(f).squaredNorm() / f.squaredNorm();
    est.min_ratio = std::min(est.min_ratio, ratio);
    est.max_ratio = std::max(est.max_ratio, ratio);
  }
  return est;
}

}  // namespace arcs

#endif  // ARCS_ENSEMBLE_HPP
