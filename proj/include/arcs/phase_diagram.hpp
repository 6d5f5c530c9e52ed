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

#ifndef ARCS_PHASE_DIAGRAM_HPP
#define ARCS_PHASE_DIAGRAM_HPP

#include <Eigen/Core>
#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "arcs/decoder.hpp"
#include "arcs/ensemble.hpp"
#include "arcs/rng.hpp"

namespace arcs {

// Shortest round-trippable decimal representation; keeps CSV output
// byte-stable across runs.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

// Empirical recovery map over the phase space (M/n, s/M) in (0, 1]^2.
// Each cell holds the fraction of sense-and-reconstruct trials whose
// normalized l2 error stayed within the tolerance. Cells whose rounded
// M or s is zero are excluded and carry NaN.
struct PhaseDiagram {
  EnsembleKind kind = EnsembleKind::gaussian;
  int ambient_dim = 0;
  std::vector<double> m_fractions;  // ascending, columns
  std::vector<double> s_fractions;  // ascending, rows
  Eigen::MatrixXd success;          // success(row, col) in [0, 1] or NaN
  int trials = 0;
  double tolerance = 1e-3;
  double signal_tau = 0.1;
  std::uint64_t seed = 0;

  int cell_rows(int col) const {
    return static_cast<int>(
        std::lround(m_fractions.at(col) * ambient_dim));
  }
  int cell_sparsity(int row, int col) const {
    return static_cast<int>(
        std::lround(s_fractions.at(row) * cell_rows(col)));
  }
};

struct PhaseDiagramConfig {
  EnsembleKind kind = EnsembleKind::gaussian;
  int ambient_dim = 1024;
  int grid = 16;  // uniform grid over (0, 1]^2 unless fractions given
  std::vector<double> m_fractions;
  std::vector<double> s_fractions;
  int trials = 25;
  double tolerance = 1e-3;
  double signal_tau = 0.1;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  SolverConfig solver = diagram_solver_defaults();

  static SolverConfig diagram_solver_defaults() {
    SolverConfig cfg;
    cfg.max_iterations = 1000;
    cfg.convergence_tol = 1e-7;
    cfg.rho = 16.0;
    return cfg;
  }
};

namespace phase_detail {

inline std::vector<double> uniform_grid(int cells) {
  std::vector<double> fracs(cells);
  for (int i = 0; i < cells; ++i)
    fracs[i] = static_cast<double>(i + 1) / cells;
  return fracs;
}

inline Eigen::VectorXd trial_signal(int n, int s, double tau,
                                    std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < s; ++i) {
    const int j =
        i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
    const double mag = tau + (1.0 - tau) * rng.uniform();
    f[idx[i]] = (rng.next_word() & 1u) ? -mag : mag;
  }
  return f;
}

}  // namespace phase_detail

/// Runs `trials` seeded sense-and-reconstruct experiments per grid cell.
/// Per-trial seeds depend only on (seed, cell, trial), so the result is
/// identical regardless of thread count.
inline PhaseDiagram generate_phase_diagram(const PhaseDiagramConfig& config) {
  if (config.trials < 1)
    throw std::invalid_argument("phase diagram: trials must be >= 1");
  PhaseDiagram pd;
  pd.kind = config.kind;
  pd.ambient_dim = config.ambient_dim;
  pd.m_fractions = config.m_fractions.empty()
                       ? phase_detail::uniform_grid(config.grid)
                       : config.m_fractions;
  pd.s_fractions = config.s_fractions.empty()
                       ? phase_detail::uniform_grid(config.grid)
                       : config.s_fractions;
  for (const auto* fracs : {&pd.m_fractions, &pd.s_fractions}) {
    for (std::size_t i = 0; i < fracs->size(); ++i) {
      if (!((*fracs)[i] > 0.0 && (*fracs)[i] <= 1.0))
        throw std::invalid_argument("phase diagram: grid outside (0, 1]");
      if (i > 0 && (*fracs)[i] <= (*fracs)[i - 1])
        throw std::invalid_argument("phase diagram: grid must be increasing");
    }
  }
  pd.trials = config.trials;
  pd.tolerance = config.tolerance;
  pd.signal_tau = config.signal_tau;
  pd.seed = config.seed;

  const int cols = static_cast<int>(pd.m_fractions.size());
  const int rows = static_cast<int>(pd.s_fractions.size());
  pd.success.resize(rows, cols);
  pd.success.setConstant(std::numeric_limits<double>::quiet_NaN());

  const MeasurementEnsemble ensemble(config.kind, config.ambient_dim,
                                     config.seed);
  std::atomic<int> next_col{0};
  auto worker = [&]() {
    for (;;) {
      const int col = next_col.fetch_add(1);
      if (col >= cols) return;
      const int m = pd.cell_rows(col);
      if (m < 1 || m > pd.ambient_dim) continue;
      const RowSubsetOperator op(ensemble, m);
      const BasisPursuitSolver solver(op, config.solver);
      for (int row = 0; row < rows; ++row) {
        const int s = pd.cell_sparsity(row, col);
        if (s < 1 || s > pd.ambient_dim) continue;
        int successes = 0;
        for (int trial = 0; trial < config.trials; ++trial) {
          const std::uint64_t trial_seed = hash3(
              config.seed, 0xce11u + static_cast<std::uint64_t>(col) * rows + row,
              trial);
          const Eigen::VectorXd f = phase_detail::trial_signal(
              pd.ambient_dim, s, config.signal_tau, trial_seed);
          const double f_norm = f.norm();
          const auto probe = [&](const Eigen::VectorXd& z) {
            return (z - f).norm() <= config.tolerance * f_norm;
          };
          const DecodeResult result =
              solver.solve(op.apply(f), probe, /*probe_interval=*/10);
          if ((result.estimate - f).norm() <= config.tolerance * f_norm)
            ++successes;
        }
        pd.success(row, col) =
            static_cast<double>(successes) / config.trials;
      }
    }
  };

  int thread_count = config.threads > 0
                         ? config.threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  thread_count = std::max(1, std::min(thread_count, cols));
  std::vector<std::thread> pool;
  for (int t = 1; t < thread_count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return pd;
}

struct LookupPolicy {
  double tau_d = 0.9;  // minimum acceptable success probability
  int m_floor = 8;     // never acquire fewer rows than this
};

struct NoFeasibleMeasurementCount : std::runtime_error {
  explicit NoFeasibleMeasurementCount(const std::string& what)
      : std::runtime_error(what) {}
};

/// Smallest grid M whose cell at (M/n, s_hat/M) - with the sparsity ratio
/// rounded up to the next grid row - meets the policy's success threshold.
/// Conservative in both directions: over-measuring is harmless,
/// under-measuring is not.
inline int lookup_measurements(const PhaseDiagram& pd, int s_hat,
                               const LookupPolicy& policy) {
  if (s_hat < 0) throw std::invalid_argument("lookup: s_hat must be >= 0");
  if (!(policy.tau_d > 0.0 && policy.tau_d < 1.0))
    throw std::invalid_argument("lookup: tau_d must be in (0, 1)");
  if (policy.m_floor < 1 || policy.m_floor > pd.ambient_dim)
    throw std::invalid_argument("lookup: m_floor must be in [1, n]");
  if (s_hat == 0) return policy.m_floor;

  const int cols = static_cast<int>(pd.m_fractions.size());
  const int rows = static_cast<int>(pd.s_fractions.size());
  for (int col = 0; col < cols; ++col) {
    const int m = pd.cell_rows(col);
    if (m < 1) continue;
    const double ratio = static_cast<double>(s_hat) / m;
    int row = -1;
    for (int i = 0; i < rows; ++i) {
      if (pd.s_fractions[i] >= ratio - 1e-12) {
        row = i;
        break;
      }
    }
    if (row < 0) continue;  // sparser grid row than this column supports
    const double rate = pd.success(row, col);
    if (std::isnan(rate)) continue;
    if (rate >= policy.tau_d) return std::max(m, policy.m_floor);
  }
  throw NoFeasibleMeasurementCount(
      "lookup: no grid cell reaches tau_d for s_hat = " +
      std::to_string(s_hat));
}

// ---------------------------------------------------------------------------
// Closed-form guarantees for the Gaussian construction.

/// Probability bound that an M x n matrix with N(0, 1/M) entries acts as a
/// near-isometry of order s with constant delta. May be arbitrarily
/// negative; informative only when positive.
inline double success_probability_bound(double delta, double m, double s,
                                        double n) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("success_probability_bound: delta in (0,1)");
  if (!(s >= 1.0))
    throw std::invalid_argument("success_probability_bound: s >= 1");
  const double half = delta / 2.0;
  const double c0 = half * half / 4.0 - half * half * half / 6.0;
  const double exponent =
      -c0 * m + s * (std::log(std::numbers::e * n / s) + std::log(12.0 / delta));
  return 1.0 - 2.0 * std::exp(std::min(exponent, 700.0));
}

/// Smallest integer M for which the bound above reaches tau_g.
inline long long min_rows_theoretical(double delta, double s, double n,
                                      double tau_g) {
  if (!(delta > 0.0 && delta < 1.0) || !(tau_g > 0.0 && tau_g < 1.0) ||
      !(s >= 1.0))
    throw std::invalid_argument("min_rows_theoretical: bad parameters");
  const double denom = delta * delta / 16.0 * (1.0 - delta / 3.0);
  const double numer = s * (1.0 + std::log(n / s) + std::log(12.0 / delta)) +
                       std::log(2.0 / (1.0 - tau_g));
  return static_cast<long long>(std::ceil(numer / denom));
}

/// Largest sparsity fraction s/n for which an undersampling matrix (M <= n)
/// can still carry the order-2s near-isometry guarantee at constant delta;
/// keeps only the s-independent term of the dimension bound.
inline double max_sparsity_fraction(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("max_sparsity_fraction: delta in (0,1)");
  const double denom = delta * delta / 16.0 * (1.0 - delta / 3.0);
  return 0.5 * denom / (1.0 + std::log(12.0 / delta));
}

// ---------------------------------------------------------------------------
// CSV persistence: commented metadata header, then one row per cell.

inline void save_phase_diagram(const std::filesystem::path& path,
                               const PhaseDiagram& pd) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("phase diagram: cannot write " + path.string());
  out << "# ensemble=" << to_string(pd.kind) << "\n";
  out << "# n=" << pd.ambient_dim << "\n";
  out << "# trials=" << pd.trials << "\n";
  out << "# tolerance=" << format_double(pd.tolerance) << "\n";
  out << "# signal_tau=" << format_double(pd.signal_tau) << "\n";
  out << "# seed=" << pd.seed << "\n";
  out << "m_over_n,s_over_m,success_rate\n";
  for (std::size_t col = 0; col < pd.m_fractions.size(); ++col)
    for (std::size_t row = 0; row < pd.s_fractions.size(); ++row) {
      const double rate = pd.success(static_cast<int>(row),
                                     static_cast<int>(col));
      out << format_double(pd.m_fractions[col]) << ","
          << format_double(pd.s_fractions[row]) << ","
          << (std::isnan(rate) ? std::string("nan") : format_double(rate))
          << "\n";
    }
  if (!out) throw std::runtime_error("phase diagram: write failed");
}

inline PhaseDiagram load_phase_diagram(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("phase diagram: cannot open " + path.string());
  PhaseDiagram pd;
  std::string line;
  std::vector<std::tuple<double, double, double>> cells;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      key.erase(key.find_last_not_of(' ') + 1);
      const std::string value = line.substr(eq + 1);
      if (key == "ensemble") pd.kind = ensemble_kind_from_string(value);
      else if (key == "n") pd.ambient_dim = std::stoi(value);
      else if (key == "trials") pd.trials = std::stoi(value);
      else if (key == "tolerance") pd.tolerance = std::stod(value);
      else if (key == "signal_tau") pd.signal_tau = std::stod(value);
      else if (key == "seed") pd.seed = std::stoull(value);
      continue;
    }
    if (line.rfind("m_over_n", 0) == 0) continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') ||
        !std::getline(row, c))
      throw std::runtime_error("phase diagram: malformed row: " + line);
    cells.emplace_back(std::stod(a), std::stod(b),
                       c == "nan" ? std::numeric_limits<double>::quiet_NaN()
                                  : std::stod(c));
  }
  if (cells.empty()) throw std::runtime_error("phase diagram: no cells");

  auto collect = [](std::vector<double> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
  };
  std::vector<double> ms, ss;
  for (const auto& [m, s, rate] : cells) {
    ms.push_back(m);
    ss.push_back(s);
  }
  pd.m_fractions = collect(ms);
  pd.s_fractions = collect(ss);
  pd.success.resize(static_cast<int>(pd.s_fractions.size()),
                    static_cast<int>(pd.m_fractions.size()));
  pd.success.setConstant(std::numeric_limits<double>::quiet_NaN());
  auto index_of = [](const std::vector<double>& fracs, double v) {
    const auto it = std::lower_bound(fracs.begin(), fracs.end(), v - 1e-15);
    return static_cast<int>(it - fracs.begin());
  };
  for (const auto& [m, s, rate] : cells)
    pd.success(index_of(pd.s_fractions, s), index_of(pd.m_fractions, m)) = rate;
  return pd;
}

}  // namespace arcs

#endif  // ARCS_PHASE_DIAGRAM_HPP
