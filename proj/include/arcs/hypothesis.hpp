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

#ifndef ARCS_HYPOTHESIS_HPP
#define ARCS_HYPOTHESIS_HPP

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "arcs/cross_validation.hpp"

namespace arcs {

// Closed-form moments of the squared optimal s_hat-sparse approximation
// error of a foreground vector, under the hypotheses of the sparsity test:
// H_0 (true sparsity below s_hat, only background residuals are missed) and
// H_k (true sparsity k > s_hat, so k - s_hat above-threshold components are
// missed as well). All counts are over the ambient dimension n.

inline std::pair<double, double> null_moments(int s_hat, int n,
                                              double sigma_b_sq) {
  if (s_hat < 0 || s_hat > n)
    throw std::invalid_argument("null_moments: need 0 <= s_hat <= n");
  const double remaining = static_cast<double>(n - s_hat);
  return {remaining * sigma_b_sq,
          2.0 * remaining * sigma_b_sq * sigma_b_sq};
}

namespace hypothesis_detail {

// The raw four-term mean/variance expressions, defined for any k >= s_hat;
// at k == s_hat they reduce algebraically to the null moments.
inline std::pair<double, double> alt_moment_terms(double k, double s_hat,
                                                  double n, double sigma_b_sq,
                                                  double tau) {
  const double missed = k - s_hat;        // foreground components dropped
  const double background = n - k;        // background components dropped
  const double p = tau * tau + tau + 1.0;
  const double q =
      tau * tau * tau * tau + tau * tau * tau + tau * tau + tau + 1.0;
  const double sb4 = sigma_b_sq * sigma_b_sq;

  const double mu = background * sigma_b_sq + missed * p / 3.0;
  const double second_moment =
      (missed * missed - missed) * p * p / 9.0 + missed * q / 5.0 +
      (background * background + 2.0 * background) * sb4 +
      2.0 / 3.0 * background * missed * p * sigma_b_sq;
  return {mu, second_moment - mu * mu};
}

}  // namespace hypothesis_detail

inline std::pair<double, double> alt_moments(int k, int s_hat, int n,
                                             double sigma_b_sq, double tau) {
  if (k <= s_hat || k > n)
    throw std::invalid_argument("alt_moments: need s_hat < k <= n");
  return hypothesis_detail::alt_moment_terms(k, s_hat, n, sigma_b_sq, tau);
}

/// Moment table for the full hypothesis set {H_0, H_{s_hat+1}, ..., H_n}.
class HypothesisMoments {
 public:
  HypothesisMoments(int s_hat, int n, double sigma_b_sq, double tau)
      : s_hat_(s_hat), n_(n) {
    std::tie(mu0_, sigma0_sq_) = null_moments(s_hat, n, sigma_b_sq);
    mu_.reserve(n - s_hat);
    sigma_sq_.reserve(n - s_hat);
    for (int k = s_hat + 1; k <= n; ++k) {
      const auto [mu, var] =
          hypothesis_detail::alt_moment_terms(k, s_hat, n, sigma_b_sq, tau);
      mu_.push_back(mu);
      sigma_sq_.push_back(var);
    }
  }

  int s_hat() const { return s_hat_; }
  int ambient_dim() const { return n_; }
  double mu0() const { return mu0_; }
  double sigma0_sq() const { return sigma0_sq_; }

  double mu(int k) const { return mu_.at(k - s_hat_ - 1); }
  double sigma_sq(int k) const { return sigma_sq_.at(k - s_hat_ - 1); }

 private:
  int s_hat_;
  int n_;
  double mu0_ = 0.0;
  double sigma0_sq_ = 0.0;
  std::vector<double> mu_;        // k = s_hat+1 .. n
  std::vector<double> sigma_sq_;
};

/// Observable upper bound (1 + epsilon)^2 ||gamma - Psi f_hat||^2 on the
/// squared optimal sparse approximation error.
inline double cv_error_bound(const Eigen::VectorXd& gamma,
                             const CrossValidationMatrix& psi,
                             const Eigen::VectorXd& f_hat, double epsilon) {
  if (gamma.size() != psi.rows() || f_hat.size() != psi.ambient_dim())
    throw std::invalid_argument("cv_error_bound: dimension mismatch");
  const double err = (gamma - psi.apply(f_hat)).squaredNorm();
  return (1.0 + epsilon) * (1.0 + epsilon) * err;
}

namespace hypothesis_detail {

inline double log_density(double x, double mu, double sigma_sq) {
  if (sigma_sq <= 0.0)
    return x == mu ? std::numeric_limits<double>::infinity()
                   : -std::numeric_limits<double>::infinity();
  const double d = x - mu;
  return -0.5 * std::log(2.0 * std::numbers::pi * sigma_sq) -
         d * d / (2.0 * sigma_sq);
}

}  // namespace hypothesis_detail

/// Minimum-probability-of-error selection (equal priors, normal
/// approximation of each hypothesis density) with the explicit low-error
/// override: bounds below mu0 always select H_0. Returns 0 or the selected
/// k in {s_hat+1, ..., n}.
inline int select_hypothesis(double bound_value,
                             const HypothesisMoments& moments) {
  if (bound_value < moments.mu0()) return 0;
  int best_k = 0;
  double best = hypothesis_detail::log_density(bound_value, moments.mu0(),
                                               moments.sigma0_sq());
  for (int k = moments.s_hat() + 1; k <= moments.ambient_dim(); ++k) {
    const double score = hypothesis_detail::log_density(
        bound_value, moments.mu(k), moments.sigma_sq(k));
    if (score > best) {
      best = score;
      best_k = k;
    }
  }
  return best_k;
}

}  // namespace arcs

#endif  // ARCS_HYPOTHESIS_HPP
