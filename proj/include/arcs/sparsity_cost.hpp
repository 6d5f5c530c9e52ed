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

#ifndef ARCS_SPARSITY_COST_HPP
#define ARCS_SPARSITY_COST_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "arcs/unscented.hpp"

namespace arcs {

/// Recovery-bound constant for the l1 decoder at near-isometry constant
/// delta (valid for delta < sqrt(2) - 1), evaluated exactly as printed.
inline double recovery_constant(double delta) {
  if (!(delta > 0.0 && delta < std::numbers::sqrt2 - 1.0))
    throw std::invalid_argument(
        "recovery_constant: delta must be in (0, sqrt(2) - 1)");
  return (2.0 - (2.0 - std::numbers::sqrt2) * delta) /
         (1.0 - (1.0 - std::numbers::sqrt2) * delta);
}

struct CostParams {
  double lambda;      // sparsity penalty weight
  double c0;          // recovery constant
  double tau;         // foreground threshold
  double sigma_b;     // background residual stddev
  int ambient_dim;    // n
};

// Expected optimal-s_hat-sparse l1 error under a sparsity pmf, split by
// whether the true sparsity k is covered (k <= s_hat: only background
// residuals are missed) or not (k > s_hat: k - s_hat foreground components
// are missed too), plus the lambda * s_hat penalty. The covered branch sums
// from k = 0: an empty scene leaves the same background residual error.
//
// Prefix sums over the pmf make a single evaluation O(1), and the summation
// boundary uses floor(s_hat) so the function extends to real-valued s_hat
// for the scalar search.
class ExpectedCostEvaluator {
 public:
  ExpectedCostEvaluator(const SparsityPmf& pmf, const CostParams& params)
      : params_(params) {
    pmf.validate();
    if (pmf.max_sparsity() != params.ambient_dim)
      throw std::invalid_argument("expected_cost: pmf support must be 0..n");
    if (!(params.lambda > 0.0))
      throw std::invalid_argument("expected_cost: lambda must be positive");
    const int n = params.ambient_dim;
    mass_prefix_.resize(n + 1);
    weighted_prefix_.resize(n + 1);
    double acc_mass = 0.0, acc_weighted = 0.0;
    for (int k = 0; k <= n; ++k) {
      acc_mass += pmf.mass[k];
      acc_weighted += k * pmf.mass[k];
      mass_prefix_[k] = acc_mass;
      weighted_prefix_[k] = acc_weighted;
    }
  }

  double operator()(double s_hat) const {
    const int n = params_.ambient_dim;
    if (!(s_hat >= 1.0) || s_hat > n)
      throw std::invalid_argument("expected_cost: need 1 <= s_hat <= n");
    const int boundary = std::min(static_cast<int>(s_hat), n);
    const double c = std::sqrt(2.0 / std::numbers::pi) * params_.sigma_b;
    const double covered_mass = mass_prefix_[boundary];
    const double tail_mass = mass_prefix_[n] - covered_mass;
    const double tail_weighted = weighted_prefix_[n] - weighted_prefix_[boundary];

    const double covered_term = c * (n - s_hat) * covered_mass;
    const double missed_term =
        (1.0 + params_.tau) / 2.0 * (tail_weighted - s_hat * tail_mass) +
        c * (n * tail_mass - tail_weighted);
    return params_.c0 / std::sqrt(s_hat) * (covered_term + missed_term) +
           params_.lambda * s_hat;
  }

 private:
  CostParams params_;
  std::vector<double> mass_prefix_;
  std::vector<double> weighted_prefix_;
};

inline double expected_cost(int s_candidate, const SparsityPmf& pmf,
                            const CostParams& params) {
  return ExpectedCostEvaluator(pmf, params)(s_candidate);
}

namespace cost_detail {

// Golden-section search on [lo, hi], narrowed to below unit width.
template <typename F>
double golden_section(const F& f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 0.5) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// One parabolic-interpolation step through (x - h, x, x + h).
template <typename F>
double parabolic_refine(const F& f, double x, double h, double lo, double hi) {
  const double xl = std::max(lo, x - h), xr = std::min(hi, x + h);
  const double fl = f(xl), fm = f(x), fr = f(xr);
  const double denom = (xl - x) * (fl - fr) + (xr - x) * (fm - fl) +
                       (xr - xl) * (fr - fm);
  if (denom == 0.0) return x;
  const double num = (xl - x) * (xl - x) * (fl - fr) +
                     (xr - x) * (xr - x) * (fm - fl) +
                     (xr - xl) * (xr - xl) * (fr - fm);
  double vertex = x - 0.5 * num / denom;
  if (!(vertex >= lo && vertex <= hi)) return x;
  return vertex;
}

}  // namespace cost_detail

/// Penalized sparsity choice: a coarse bracketing scan, golden-section
/// search with a parabolic refinement on the continuous relaxation, then an
/// exact integer decision over the candidates near every local basin.
inline int minimize_cost(const SparsityPmf& pmf, const CostParams& params) {
  const ExpectedCostEvaluator cost(pmf, params);
  const int n = params.ambient_dim;
  if (n == 1) return 1;

  // Coarse scan brackets the global basin even when the pmf makes the
  // continuous cost multimodal.
  const int scan_points = std::min(64, n);
  std::vector<double> xs(scan_points), fs(scan_points);
  for (int i = 0; i < scan_points; ++i) {
    xs[i] = 1.0 + (static_cast<double>(n) - 1.0) * i / (scan_points - 1);
    fs[i] = cost(xs[i]);
  }

  std::vector<double> candidates;
  for (int i = 0; i < scan_points; ++i) {
    const bool left_ok = i == 0 || fs[i] <= fs[i - 1];
    const bool right_ok = i == scan_points - 1 || fs[i] <= fs[i + 1];
    if (!(left_ok && right_ok)) continue;
    const double lo = xs[std::max(0, i - 1)];
    const double hi = xs[std::min(scan_points - 1, i + 1)];
    const double golden = cost_detail::golden_section(cost, lo, hi);
    candidates.push_back(golden);
    candidates.push_back(
        cost_detail::parabolic_refine(cost, golden, 1.0, 1.0, n));
  }

  int best_s = 1;
  double best_cost = std::numeric_limits<double>::infinity();
  auto consider = [&](int s) {
    if (s < 1 || s > n) return;
    const double value = cost(s);
    if (value < best_cost - 1e-15 ||
        (std::abs(value - best_cost) <= 1e-15 && s < best_s)) {
      best_cost = value;
      best_s = s;
    }
  };
  for (double x : candidates) {
    const int base = static_cast<int>(std::floor(x));
    for (int offset = -2; offset <= 2; ++offset) consider(base + offset);
  }
  consider(1);
  consider(n);
  return best_s;
}

}  // namespace arcs

#endif  // ARCS_SPARSITY_COST_HPP
