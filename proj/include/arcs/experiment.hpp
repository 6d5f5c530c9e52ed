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

#ifndef ARCS_EXPERIMENT_HPP
#define ARCS_EXPERIMENT_HPP

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "arcs/arcs_cv.hpp"
#include "arcs/arcs_lrt.hpp"
#include "arcs/config.hpp"
#include "arcs/dataset.hpp"
#include "arcs/phase_diagram.hpp"
#include "arcs/svg.hpp"

namespace arcs {

enum class Strategy { oracle, arcs_cv, arcs_lrt };

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::oracle: return "oracle";
    case Strategy::arcs_cv: return "arcs_cv";
    case Strategy::arcs_lrt: return "arcs_lrt";
  }
  return "?";
}

inline Strategy strategy_from_string(const std::string& s) {
  if (s == "oracle") return Strategy::oracle;
  if (s == "arcs_cv") return Strategy::arcs_cv;
  if (s == "arcs_lrt") return Strategy::arcs_lrt;
  throw std::invalid_argument("unknown strategy: " + s);
}

struct ExperimentConfig {
  Strategy strategy = Strategy::oracle;
  std::filesystem::path dataset_dir;
  std::filesystem::path phase_diagram_path;
  std::filesystem::path output_dir = "out";
  std::filesystem::path calibration_path;  // empty: calibrate from dataset
  int frames = 0;                          // 0 = all available
  int calibration_frames = 30;
  EnsembleKind ensemble = EnsembleKind::gaussian;
  std::uint64_t ensemble_seed = 101;
  std::uint64_t cv_seed = 202;
  int initial_s_hat = 0;
  double tau_d = 0.9;
  int m_floor = 0;  // 0: max(r, 8) for arcs_cv, 8 otherwise
  double tau = 0.1;
  double sigma_b_sq = (4.0 / 255.0) * (4.0 / 255.0);
  SolverConfig solver = run_solver_defaults();

  // arcs_cv
  double epsilon = 0.1;
  double rho = 0.45;
  int cv_rows = 0;  // 0: cv_row_count(epsilon, rho)

  // arcs_lrt
  double lambda = 0.1;
  int downsample_factor = 2;
  double delta = 0.25;
  Eigen::Matrix4d track_covariance =
      Eigen::Vector4d(1.0, 1.0, 3.0, 3.0).asDiagonal();
  std::string track_source = "file";  // "file" or "blob"
  double tau_blob = 0.05;

  // Calibration error keeps run estimates well above solver precision;
  // a tight iterate tolerance would only burn iterations.
  static SolverConfig run_solver_defaults() {
    SolverConfig cfg;
    cfg.max_iterations = 800;
    cfg.convergence_tol = 1e-6;
    cfg.rho = 16.0;
    return cfg;
  }

  int effective_cv_rows() const {
    return cv_rows > 0 ? cv_rows : cv_row_count(epsilon, rho);
  }
};

/// Reads [experiment], [model], [cv], [lrt] sections. The section for the
/// selected adaptive strategy must be present.
inline ExperimentConfig load_experiment_config(
    const std::filesystem::path& path) {
  const ConfigFile file = ConfigFile::parse_file(path);
  ExperimentConfig cfg;
  cfg.strategy =
      strategy_from_string(file.require_string("experiment", "strategy"));
  cfg.dataset_dir = file.require_string("experiment", "dataset");
  cfg.phase_diagram_path = file.require_string("experiment", "phase_diagram");
  cfg.output_dir = file.get_string("experiment", "output", "out");
  if (file.has("experiment", "calibration"))
    cfg.calibration_path = file.get_string("experiment", "calibration");
  cfg.frames = static_cast<int>(file.get_int("experiment", "frames", 0));
  cfg.calibration_frames =
      static_cast<int>(file.get_int("experiment", "calibration_frames", 30));
  cfg.ensemble = ensemble_kind_from_string(
      file.get_string("experiment", "ensemble", "gaussian"));
  cfg.ensemble_seed = file.get_seed("experiment", "ensemble_seed", 101);
  cfg.cv_seed = file.get_seed("experiment", "cv_seed", 202);
  cfg.initial_s_hat =
      static_cast<int>(file.get_int("experiment", "initial_s_hat", 0));
  cfg.tau_d = file.get_double("experiment", "tau_d", 0.9);
  cfg.m_floor = static_cast<int>(file.get_int("experiment", "m_floor", 0));
  cfg.solver.max_iterations = static_cast<int>(
      file.get_int("experiment", "solver_max_iterations",
                   cfg.solver.max_iterations));
  cfg.solver.convergence_tol = file.get_double(
      "experiment", "solver_convergence_tol", cfg.solver.convergence_tol);

  cfg.tau = file.get_double("model", "tau", cfg.tau);
  cfg.sigma_b_sq = file.get_double("model", "sigma_b_sq", cfg.sigma_b_sq);

  if (cfg.strategy == Strategy::arcs_cv && !file.has("cv", "epsilon"))
    throw std::runtime_error("config: [cv] section required for arcs_cv");
  cfg.epsilon = file.get_double("cv", "epsilon", cfg.epsilon);
  cfg.rho = file.get_double("cv", "rho", cfg.rho);
  cfg.cv_rows = static_cast<int>(file.get_int("cv", "r", 0));

  if (cfg.strategy == Strategy::arcs_lrt && !file.has("lrt", "lambda"))
    throw std::runtime_error("config: [lrt] section required for arcs_lrt");
  cfg.lambda = file.get_double("lrt", "lambda", cfg.lambda);
  cfg.downsample_factor =
      static_cast<int>(file.get_int("lrt", "downsample", 2));
  cfg.delta = file.get_double("lrt", "delta", 0.25);
  cfg.track_source = file.get_string("lrt", "track_source", "file");
  cfg.tau_blob = file.get_double("lrt", "tau_blob", 0.05);
  if (file.has("lrt", "sigma")) {
    std::istringstream list(file.get_string("lrt", "sigma", ""));
    Eigen::Vector4d diag;
    std::string item;
    for (int i = 0; i < 4; ++i) {
      if (!std::getline(list, item, ','))
        throw std::runtime_error("config: [lrt] sigma needs 4 diagonal values");
      diag[i] = std::stod(item);
    }
    cfg.track_covariance = diag.asDiagonal();
  }
  return cfg;
}

struct FrameMetrics {
  int t = 0;
  int s_true = -1;  // -1 when unknown
  int s_hat = 0;
  int m_cs = 0;     // compressive measurement rows
  int m_total = 0;  // including side-information overhead
  double l2_error = std::numeric_limits<double>::quiet_NaN();
  int decode_iterations = 0;
  double cv_bound = std::numeric_limits<double>::quiet_NaN();
  int k_star_star = -1;
  double mu_pred = std::numeric_limits<double>::quiet_NaN();
  double sigma_pred = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = 0.0;  // reported separately; never in metrics.csv
};

struct ExperimentResult {
  Strategy strategy = Strategy::oracle;
  int ambient_dim = 0;
  std::vector<FrameMetrics> frames;

  double avg_m_total() const {
    double acc = 0.0;
    for (const auto& f : frames) acc += f.m_total;
    return frames.empty() ? 0.0 : acc / static_cast<double>(frames.size());
  }
  double avg_l2_error() const {
    double acc = 0.0;
    for (const auto& f : frames) acc += f.l2_error;
    return frames.empty() ? 0.0 : acc / static_cast<double>(frames.size());
  }
};

namespace experiment_detail {

inline int auto_m_floor(const ExperimentConfig& cfg, int n) {
  if (cfg.m_floor > 0) return std::min(cfg.m_floor, n);
  const int floor = cfg.strategy == Strategy::arcs_cv
                        ? std::max(cfg.effective_cv_rows(), 8)
                        : 8;
  return std::min(floor, n);
}

inline double frame_error(const Eigen::VectorXd& estimate,
                          const std::optional<Eigen::VectorXd>& truth) {
  if (!truth) return std::numeric_limits<double>::quiet_NaN();
  return (estimate - *truth).norm();
}

}  // namespace experiment_detail

/// Runs one strategy over a dataset. The compressive, cross-validation,
/// and low-resolution acquisitions are simulated from the stored frames.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       const Dataset& dataset,
                                       const PhaseDiagram& diagram) {
  using clock = std::chrono::steady_clock;
  const int side = dataset.side();
  const int n = side * side;
  if (diagram.ambient_dim != n)
    throw std::runtime_error("run: phase diagram n does not match dataset");
  if (diagram.kind != cfg.ensemble)
    throw std::runtime_error("run: phase diagram ensemble kind mismatch");

  const int frame_count =
      cfg.frames > 0
          ? std::min<int>(cfg.frames, static_cast<int>(dataset.frames.size()))
          : static_cast<int>(dataset.frames.size());

  const MeasurementEnsemble ensemble(cfg.ensemble, n, cfg.ensemble_seed);
  const int r = cfg.effective_cv_rows();
  const CrossValidationMatrix psi(r, n, cfg.cv_seed);

  BackgroundCalibration calibration;
  if (!cfg.calibration_path.empty()) {
    calibration = load_calibration(cfg.calibration_path);
    if (calibration.ambient_dim != n || calibration.kind != cfg.ensemble ||
        calibration.ensemble_seed != cfg.ensemble_seed ||
        calibration.cv_seed != cfg.cv_seed || calibration.cv_rows != r)
      throw std::runtime_error("run: calibration file does not match config");
  } else {
    if (dataset.calibration.empty())
      throw std::runtime_error("run: dataset has no calibration frames");
    std::vector<Frame> calib_frames = dataset.calibration;
    if (cfg.calibration_frames > 0 &&
        static_cast<int>(calib_frames.size()) > cfg.calibration_frames)
      calib_frames.erase(calib_frames.begin() + cfg.calibration_frames,
                         calib_frames.end());
    calibration = calibrate_background(calib_frames, ensemble, psi);
  }

  const LookupPolicy policy{cfg.tau_d, experiment_detail::auto_m_floor(cfg, n)};
  auto lookup_clamped = [&](int s_hat) {
    try {
      return lookup_measurements(diagram, s_hat, policy);
    } catch (const NoFeasibleMeasurementCount&) {
      return n;
    }
  };

  // Ground-truth foregrounds for the error column, when recoverable.
  std::vector<std::optional<Eigen::VectorXd>> truth(frame_count);
  if (dataset.background)
    for (int t = 0; t < frame_count; ++t)
      truth[t] =
          dataset.frames[t].vectorize() - dataset.background->vectorize();

  ExperimentResult result;
  result.strategy = cfg.strategy;
  result.ambient_dim = n;

  if (cfg.strategy == Strategy::oracle) {
    if (!dataset.has_ground_truth())
      throw std::runtime_error("run: oracle strategy needs ground truth");
    for (int t = 0; t < frame_count; ++t) {
      const auto start = clock::now();
      FrameMetrics m;
      m.t = t;
      m.s_true = dataset.s_true.at(t);
      m.s_hat = m.s_true;
      m.m_cs = lookup_clamped(m.s_hat);
      m.m_total = m.m_cs;  // the oracle carries no side information
      const RowSubsetOperator op(ensemble, m.m_cs);
      const Eigen::VectorXd y = op.apply(dataset.frames[t].vectorize());
      const Eigen::VectorXd xi = foreground_measurements(y, calibration, m.m_cs);
      const DecodeResult dec = decode(xi, op, cfg.solver);
      m.decode_iterations = dec.iterations;
      m.l2_error = experiment_detail::frame_error(dec.estimate, truth[t]);
      m.wall_ms = std::chrono::duration<double, std::milli>(clock::now() -
                                                            start).count();
      result.frames.push_back(std::move(m));
    }
    return result;
  }

  if (cfg.strategy == Strategy::arcs_cv) {
    CvConfig cv;
    cv.epsilon = cfg.epsilon;
    cv.rho = cfg.rho;
    cv.r = r;
    cv.tau = cfg.tau;
    cv.sigma_b_sq = cfg.sigma_b_sq;
    cv.ambient_dim = n;
    CvController controller(cv, diagram, policy, ensemble, psi, calibration,
                            cfg.solver, cfg.initial_s_hat);
    for (int t = 0; t < frame_count; ++t) {
      const auto start = clock::now();
      const int m_t = controller.measurement_count();
      const RowSubsetOperator op(ensemble, m_t);
      const Eigen::VectorXd x = dataset.frames[t].vectorize();
      const CvStepResult step = controller.step(op.apply(x), psi.apply(x));

      FrameMetrics m;
      m.t = t;
      m.s_true = dataset.has_ground_truth() ? dataset.s_true.at(t) : -1;
      m.s_hat = step.s_hat_used;
      m.m_cs = step.m_used;
      m.m_total = step.m_used + r;
      m.cv_bound = step.cv_bound;
      m.k_star_star = step.k_star_star;
      m.decode_iterations = step.decode.iterations;
      m.l2_error = experiment_detail::frame_error(step.f_hat, truth[t]);
      m.wall_ms = std::chrono::duration<double, std::milli>(clock::now() -
                                                            start).count();
      result.frames.push_back(std::move(m));
    }
    return result;
  }

  // arcs_lrt
  LrtConfig lrt;
  lrt.lambda = cfg.lambda;
  lrt.downsample_factor = cfg.downsample_factor;
  lrt.delta = cfg.delta;
  lrt.tau = cfg.tau;
  lrt.sigma_b_sq = cfg.sigma_b_sq;
  lrt.side = side;
  lrt.dynamics.covariance = cfg.track_covariance;
  lrt.tau_blob = cfg.tau_blob;

  const bool blob_mode = cfg.track_source == "blob";
  if (!blob_mode && cfg.track_source != "file")
    throw std::runtime_error("run: track_source must be 'file' or 'blob'");
  if (!blob_mode && !dataset.has_tracks())
    throw std::runtime_error("run: track_source=file but dataset has no tracks");

  std::optional<Frame> background_lo;
  if (dataset.background)
    background_lo = downsample(*dataset.background, cfg.downsample_factor);
  else if (!dataset.calibration.empty())
    background_lo = downsample(dataset.calibration.front(),
                               cfg.downsample_factor);

  LrtController controller(lrt, diagram, policy, ensemble, calibration,
                           background_lo, cfg.solver, cfg.initial_s_hat);
  for (int t = 0; t < frame_count; ++t) {
    const auto start = clock::now();
    const int m_t = controller.measurement_count();
    const RowSubsetOperator op(ensemble, m_t);
    const Eigen::VectorXd x = dataset.frames[t].vectorize();
    const Frame frame_lo = downsample(dataset.frames[t], cfg.downsample_factor);
    std::optional<WarpParams> manual;
    if (!blob_mode && t < static_cast<int>(dataset.tracks.size()))
      manual = dataset.tracks[t];
    const LrtStepResult step =
        controller.step(op.apply(x), frame_lo, manual, blob_mode);

    FrameMetrics m;
    m.t = t;
    m.s_true = dataset.has_ground_truth() ? dataset.s_true.at(t) : -1;
    m.s_hat = step.s_hat_used;
    m.m_cs = step.m_used;
    m.m_total = step.m_used + step.side_overhead;
    m.mu_pred = step.mu_pred;
    m.sigma_pred = std::sqrt(step.sigma_sq_pred);
    m.decode_iterations = step.decode.iterations;
    m.l2_error = experiment_detail::frame_error(step.f_hat, truth[t]);
    m.wall_ms = std::chrono::duration<double, std::milli>(clock::now() -
                                                          start).count();
    result.frames.push_back(std::move(m));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Report emission: deterministic CSVs plus static SVG charts. Wall-clock
// timings go to their own file so metrics.csv stays byte-reproducible.

namespace experiment_detail {

inline std::string csv_value(double v) {
  return std::isnan(v) ? std::string("nan") : format_double(v);
}

}  // namespace experiment_detail

inline void write_metrics_csv(const std::filesystem::path& path,
                              const ExperimentResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("report: cannot write " + path.string());
  switch (result.strategy) {
    case Strategy::oracle:
      out << "t,s_true,s_hat,m_cs,m_total,l2_error,decode_iterations\n";
      break;
    case Strategy::arcs_cv:
      out << "t,s_true,s_hat,m_cs,m_total,cv_bound,k_star_star,l2_error,"
             "decode_iterations\n";
      break;
    case Strategy::arcs_lrt:
      out << "t,s_true,s_hat,m_cs,m_total,mu_pred,sigma_pred,l2_error,"
             "decode_iterations\n";
      break;
  }
  for (const auto& f : result.frames) {
    out << f.t << "," << f.s_true << "," << f.s_hat << "," << f.m_cs << ","
        << f.m_total << ",";
    if (result.strategy == Strategy::arcs_cv)
      out << experiment_detail::csv_value(f.cv_bound) << "," << f.k_star_star
          << ",";
    if (result.strategy == Strategy::arcs_lrt)
      out << experiment_detail::csv_value(f.mu_pred) << ","
          << experiment_detail::csv_value(f.sigma_pred) << ",";
    out << experiment_detail::csv_value(f.l2_error) << ","
        << f.decode_iterations << "\n";
  }
}

/// Reads a metrics CSV back; the strategy is inferred from the header.
inline ExperimentResult read_metrics_csv(const std::filesystem::path& path,
                                         int ambient_dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("report: cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  ExperimentResult result;
  result.ambient_dim = ambient_dim;
  if (header.find("cv_bound") != std::string::npos)
    result.strategy = Strategy::arcs_cv;
  else if (header.find("mu_pred") != std::string::npos)
    result.strategy = Strategy::arcs_lrt;
  else
    result.strategy = Strategy::oracle;

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::vector<std::string> fields;
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    const std::size_t expected =
        result.strategy == Strategy::oracle ? 7u : 9u;
    if (fields.size() != expected)
      throw std::runtime_error("report: malformed metrics row: " + line);
    FrameMetrics m;
    m.t = std::stoi(fields[0]);
    m.s_true = std::stoi(fields[1]);
    m.s_hat = std::stoi(fields[2]);
    m.m_cs = std::stoi(fields[3]);
    m.m_total = std::stoi(fields[4]);
    std::size_t at = 5;
    if (result.strategy == Strategy::arcs_cv) {
      m.cv_bound = std::stod(fields[at++]);
      m.k_star_star = std::stoi(fields[at++]);
    } else if (result.strategy == Strategy::arcs_lrt) {
      m.mu_pred = std::stod(fields[at++]);
      m.sigma_pred = std::stod(fields[at++]);
    }
    m.l2_error = fields[at] == "nan"
                     ? std::numeric_limits<double>::quiet_NaN()
                     : std::stod(fields[at]);
    ++at;
    m.decode_iterations = std::stoi(fields[at]);
    result.frames.push_back(m);
  }
  return result;
}

inline void write_summary_csv(const std::filesystem::path& path,
                              const std::vector<ExperimentResult>& results) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("report: cannot write " + path.string());
  out << "strategy,frames,avg_m_total,avg_m_fraction,avg_l2_error\n";
  for (const auto& r : results)
    out << to_string(r.strategy) << "," << r.frames.size() << ","
        << format_double(r.avg_m_total()) << ","
        << format_double(r.avg_m_total() / r.ambient_dim) << ","
        << experiment_detail::csv_value(r.avg_l2_error()) << "\n";
}

inline void emit_report(const std::vector<ExperimentResult>& results,
                        const std::filesystem::path& out_dir) {
  if (results.empty()) throw std::invalid_argument("report: no results");
  std::filesystem::create_directories(out_dir);
  for (const auto& r : results) {
    const std::string name = results.size() == 1
                                 ? "metrics.csv"
                                 : "metrics_" + to_string(r.strategy) + ".csv";
    write_metrics_csv(out_dir / name, r);
  }
  write_summary_csv(out_dir / "summary.csv", results);

  std::vector<SvgSeries> sparsity, measurements, error;
  for (const auto& r : results) {
    SvgSeries s{to_string(r.strategy), {}};
    SvgSeries m{to_string(r.strategy), {}};
    SvgSeries e{to_string(r.strategy), {}};
    for (const auto& f : r.frames) {
      s.values.push_back(f.s_hat);
      m.values.push_back(f.m_total);
      e.values.push_back(f.l2_error);
    }
    sparsity.push_back(std::move(s));
    measurements.push_back(std::move(m));
    error.push_back(std::move(e));
  }
  for (const auto& r : results) {
    if (r.frames.empty() || r.frames.front().s_true < 0) continue;
    SvgSeries true_s{"s_true", {}};
    for (const auto& f : r.frames) true_s.values.push_back(f.s_true);
    sparsity.push_back(std::move(true_s));
    break;
  }
  write_line_chart(out_dir / "sparsity.svg", "Sparsity estimate per frame",
                   "s", sparsity);
  write_line_chart(out_dir / "measurements.svg",
                   "Total measurements per frame", "M", measurements);
  write_line_chart(out_dir / "error.svg", "Reconstruction error per frame",
                   "l2 error", error);

  std::ofstream timing(out_dir / "timings.csv");
  timing << "strategy,t,wall_ms\n";
  for (const auto& r : results)
    for (const auto& f : r.frames)
      timing << to_string(r.strategy) << "," << f.t << ","
             << format_double(f.wall_ms) << "\n";
}

}  // namespace arcs

#endif  // ARCS_EXPERIMENT_HPP
