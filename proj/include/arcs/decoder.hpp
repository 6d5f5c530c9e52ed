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

#ifndef ARCS_DECODER_HPP
#define ARCS_DECODER_HPP

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "arcs/ensemble.hpp"

namespace arcs {

struct SolverConfig {
  double feasibility_tol = 1e-6;  // relative to ||xi||, floor 1e-12
  int max_iterations = 5000;
  double convergence_tol = 1e-9;  // relative iterate change
  double rho = 1.0;               // augmented Lagrangian parameter
  double over_relaxation = 1.8;

  void validate() const {
    if (!(feasibility_tol > 0.0) || max_iterations <= 0 ||
        !(convergence_tol > 0.0) || !(rho > 0.0) ||
        !(over_relaxation > 0.0 && over_relaxation < 2.0))
      throw std::invalid_argument("SolverConfig: all parameters must be positive");
  }
};

struct DecodeResult {
  Eigen::VectorXd estimate;
  int iterations = 0;
  double feasibility_residual = 0.0;  // ||Phi z - xi|| / max(||xi||, floor)
  double objective = 0.0;             // ||z||_1
  bool converged = true;
};

// Minimum-l1 recovery subject to Phi_t z = xi, solved with an
// operator-splitting (ADMM) iteration:
//
//   x <- Pi(z - u)            projection onto the affine set {x : A x = b}
//   z <- shrink(x^ + u, 1/rho)
//   u <- u + x^ - z
//
// with over-relaxed x^ = alpha x + (1 - alpha) z. The projection
// Pi(v) = v - A^T G^+ (A v - b) needs one solve against the Gram matrix
// G = A A^T per iteration. For gaussian operators G is factored once
// (Cholesky) and shared across solves; for fourier operators the stacked
// real/imaginary Gram is block diagonal over conjugate row pairs and G^+
// is applied in closed form. The problem is positively homogeneous, so xi
// is normalized up front; this makes the iteration scale-free and the
// decoder exactly scaling-equivariant.
class BasisPursuitSolver {
 public:
  explicit BasisPursuitSolver(const RowSubsetOperator& op,
                              SolverConfig config = {})
      : op_(&op), cfg_(config) {
    cfg_.validate();
    if (op.kind() == EnsembleKind::gaussian) {
      const Eigen::MatrixXd& block = op.dense_block();
      Eigen::MatrixXd gram(op.rows(), op.rows());
      gram.setZero();
      gram.selfadjointView<Eigen::Lower>().rankUpdate(block);
      llt_.compute(gram);
      if (llt_.info() != Eigen::Success) {
        // Rank-deficient draws are measure-zero but guard with a jitter.
        gram.diagonal().array() += 1e-12 * gram.trace() / op.rows();
        llt_.compute(gram);
        if (llt_.info() != Eigen::Success)
          throw std::runtime_error("BasisPursuitSolver: Gram factorization failed");
      }
    } else {
      build_fourier_pairing();
    }
  }

  const SolverConfig& config() const { return cfg_; }

  /// Periodic snoop on the current (unnormalized) iterate; return true to
  /// stop early. Used by Monte Carlo drivers that can already tell whether
  /// a trial has succeeded.
  using StopProbe = std::function<bool(const Eigen::VectorXd&)>;

  DecodeResult solve(const Eigen::VectorXd& xi_stacked) const {
    return solve(xi_stacked, nullptr, 0);
  }

  DecodeResult solve(const Eigen::VectorXd& xi_stacked, const StopProbe& probe,
                     int probe_interval) const {
    if (xi_stacked.size() != op_->stacked_rows())
      throw std::invalid_argument("decode: measurement dimension mismatch");
    const int n = op_->ambient_dim();

    DecodeResult result;
    const double xi_norm = xi_stacked.norm();
    if (xi_norm == 0.0) {
      result.estimate = Eigen::VectorXd::Zero(n);
      return result;
    }
    const Eigen::VectorXd b = xi_stacked / xi_norm;

    // Warm start from the least-squares feasible point.
    Eigen::VectorXd x = op_->adjoint(gram_solve(b));
    Eigen::VectorXd z = x;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd v(n), xh(n), z_old(n), scaled(n);

    const double alpha = cfg_.over_relaxation;
    const double shrink_level = 1.0 / cfg_.rho;
    bool settled = false;
    int iter = 0;
    for (; iter < cfg_.max_iterations; ++iter) {
      v = z - u;
      x = v - op_->adjoint(gram_solve(op_->apply(v) - b));
      xh = alpha * x + (1.0 - alpha) * z;
      z_old.swap(z);
      z = xh + u;
      shrink_inplace(z, shrink_level);
      u += xh - z;

      const double denom = std::max(1e-12, z.norm());
      const double change =
          std::max((x - z).norm(), (z - z_old).norm()) / denom;
      if (change <= cfg_.convergence_tol) {
        settled = true;
        ++iter;
        break;
      }
      if (probe && probe_interval > 0 && (iter + 1) % probe_interval == 0) {
        scaled = z * xi_norm;
        if (probe(scaled)) {
          settled = true;
          ++iter;
          break;
        }
      }
    }

    result.estimate = z * xi_norm;
    result.iterations = iter;
    result.objective = result.estimate.lpNorm<1>();
    result.feasibility_residual =
        (op_->apply(result.estimate) - xi_stacked).norm() /
        std::max(xi_norm, 1e-12);
    result.converged =
        settled && result.feasibility_residual <= cfg_.feasibility_tol;
    return result;
  }

 private:
  static void shrink_inplace(Eigen::VectorXd& w, double kappa) {
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double a = w[i];
      w[i] = a > kappa ? a - kappa : (a < -kappa ? a + kappa : 0.0);
    }
  }

  // Applies G^{-1} (gaussian) or G^+ (fourier) to a stacked residual.
  Eigen::VectorXd gram_solve(const Eigen::VectorXd& w) const {
    if (op_->kind() == EnsembleKind::gaussian) {
      const double s2 = op_->scale() * op_->scale();
      return llt_.solve(w) / s2;
    }
    const int m = op_->rows();
    const double s2 = op_->scale() * op_->scale();
    Eigen::VectorXd out(2 * m);
    for (int a = 0; a < m; ++a) {
      const int partner = pair_[a];
      if (partner == a) {
        // Self-conjugate DFT row: real part carries weight 2, imaginary
        // part of the row is identically zero.
        out[a] = w[a] / s2;
        out[m + a] = 0.0;
      } else if (partner < 0) {
        out[a] = 2.0 * w[a] / s2;
        out[m + a] = 2.0 * w[m + a] / s2;
      } else if (partner > a) {
        const double re = (w[a] + w[partner]) / (2.0 * s2);
        const double im = (w[m + a] - w[m + partner]) / (2.0 * s2);
        out[a] = re;
        out[partner] = re;
        out[m + a] = im;
        out[m + partner] = -im;
      }
    }
    return out;
  }

  void build_fourier_pairing() {
    const int n = op_->ambient_dim();
    const std::vector<int> sources = op_->selected_source_rows();
    std::vector<int> position(n, -1);
    for (int a = 0; a < static_cast<int>(sources.size()); ++a)
      position[sources[a]] = a;
    pair_.assign(sources.size(), -1);
    for (int a = 0; a < static_cast<int>(sources.size()); ++a) {
      const int complement = (n - sources[a]) % n;
      if (complement == sources[a])
        pair_[a] = a;
      else if (position[complement] >= 0)
        pair_[a] = position[complement];
    }
  }

  const RowSubsetOperator* op_;
  SolverConfig cfg_;
  Eigen::LLT<Eigen::MatrixXd> llt_;  // gaussian Gram factor
  std::vector<int> pair_;            // fourier conjugate pairing (-1 = alone)
};

inline DecodeResult decode(const Eigen::VectorXd& xi_stacked,
                           const RowSubsetOperator& op,
                           const SolverConfig& config = {}) {
  return BasisPursuitSolver(op, config).solve(xi_stacked);
}

/// Keeps the s largest-magnitude components (ties go to the lowest index)
/// and zeroes the rest.
inline Eigen::VectorXd truncate(const Eigen::VectorXd& z, int s) {
  const Eigen::Index n = z.size();
  if (s < 0 || s > n)
    throw std::invalid_argument("truncate: need 0 <= s <= n");
  if (s == 0) return Eigen::VectorXd::Zero(n);
  if (s == n) return z;
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::nth_element(order.begin(), order.begin() + s - 1, order.end(),
                   [&z](Eigen::Index a, Eigen::Index b) {
                     const double fa = std::abs(z[a]), fb = std::abs(z[b]);
                     return fa != fb ? fa > fb : a < b;
                   });
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < s; ++i) out[order[i]] = z[order[i]];
  return out;
}

/// Optimal s-sparse approximation error e_s(f)_p = ||f - truncate(f, s)||_p
/// for p in {1, 2}.
inline double sparse_approx_error(const Eigen::VectorXd& f, int s, int p) {
  if (p != 1 && p != 2)
    throw std::invalid_argument("sparse_approx_error: p must be 1 or 2");
  const Eigen::VectorXd tail = f - truncate(f, s);
  return p == 1 ? tail.lpNorm<1>() : tail.norm();
}

}  // namespace arcs

#endif  // ARCS_DECODER_HPP
