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

#include <CLI11.hpp>
#include <chrono>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "arcs/dataset.hpp"
#include "arcs/experiment.hpp"
#include "arcs/phase_diagram.hpp"
#include "arcs/signal_model.hpp"
#include "arcs/svg.hpp"

namespace {

arcs::RectTrajectory parse_object_spec(const std::string& spec) {
  // x,y,w,h[,vx,vy[,first,last]]
  std::vector<double> parts;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) parts.push_back(std::stod(item));
  if (parts.size() != 4 && parts.size() != 6 && parts.size() != 8)
    throw CLI::ValidationError("--object expects x,y,w,h[,vx,vy[,first,last]]");
  arcs::RectTrajectory obj;
  obj.x0 = parts[0];
  obj.y0 = parts[1];
  obj.width = static_cast<int>(parts[2]);
  obj.height = static_cast<int>(parts[3]);
  if (parts.size() >= 6) {
    obj.vx = parts[4];
    obj.vy = parts[5];
  }
  if (parts.size() == 8) {
    obj.first_frame = static_cast<int>(parts[6]);
    obj.last_frame = static_cast<int>(parts[7]);
  }
  return obj;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Adaptive-rate compressive sensing toolkit"};
  app.require_subcommand(1);

  // ---- phase-diagram ------------------------------------------------------
  auto* pd_cmd = app.add_subcommand("phase-diagram",
                                    "Recovery phase diagram operations");
  pd_cmd->require_subcommand(1);

  auto* pd_gen = pd_cmd->add_subcommand("generate",
                                        "Monte Carlo sense-and-reconstruct map");
  std::string pd_out = "phase_diagram.csv", pd_kind = "gaussian";
  int pd_n = 1024, pd_grid = 16, pd_trials = 25, pd_threads = 0;
  double pd_tol = 1e-3, pd_tau = 0.1;
  std::uint64_t pd_seed = 1;
  pd_gen->add_option("--out", pd_out, "Output CSV path");
  pd_gen->add_option("--ensemble", pd_kind, "gaussian or fourier_permuted");
  pd_gen->add_option("--n", pd_n, "Ambient dimension (pixel count)");
  pd_gen->add_option("--grid", pd_grid, "Cells per axis");
  pd_gen->add_option("--trials", pd_trials, "Trials per cell");
  pd_gen->add_option("--tolerance", pd_tol, "Normalized l2 success threshold");
  pd_gen->add_option("--tau", pd_tau, "Trial signal threshold");
  pd_gen->add_option("--seed", pd_seed, "Master seed");
  pd_gen->add_option("--threads", pd_threads, "Worker threads (0 = auto)");
  pd_gen->callback([&]() {
    arcs::PhaseDiagramConfig config;
    config.kind = arcs::ensemble_kind_from_string(pd_kind);
    config.ambient_dim = pd_n;
    config.grid = pd_grid;
    config.trials = pd_trials;
    config.tolerance = pd_tol;
    config.signal_tau = pd_tau;
    config.seed = pd_seed;
    config.threads = pd_threads;
    const auto start = std::chrono::steady_clock::now();
    const arcs::PhaseDiagram pd = arcs::generate_phase_diagram(config);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    arcs::save_phase_diagram(pd_out, pd);
    std::cout << "wrote " << pd_out << " (" << pd.m_fractions.size() << "x"
              << pd.s_fractions.size() << " cells, " << pd_trials
              << " trials/cell, " << secs << " s)\n";
  });

  auto* pd_query = pd_cmd->add_subcommand("query",
                                          "Sparsity to measurement lookup");
  std::string pd_query_path;
  int query_s = 0, query_floor = 8;
  double query_tau_d = 0.9;
  pd_query->add_option("--diagram", pd_query_path, "Diagram CSV")->required();
  pd_query->add_option("--s-hat", query_s, "Sparsity estimate")->required();
  pd_query->add_option("--tau-d", query_tau_d, "Minimum success probability");
  pd_query->add_option("--m-floor", query_floor, "Minimum measurement count");
  pd_query->callback([&]() {
    const arcs::PhaseDiagram pd = arcs::load_phase_diagram(pd_query_path);
    const int m = arcs::lookup_measurements(
        pd, query_s, {.tau_d = query_tau_d, .m_floor = query_floor});
    std::cout << m << "\n";
  });

  auto* pd_render = pd_cmd->add_subcommand("render", "Heatmap SVG");
  std::string pd_render_in, pd_render_out = "phase_diagram.svg";
  pd_render->add_option("--diagram", pd_render_in, "Diagram CSV")->required();
  pd_render->add_option("--out", pd_render_out, "Output SVG path");
  pd_render->callback([&]() {
    arcs::write_phase_diagram_svg(pd_render_out,
                                  arcs::load_phase_diagram(pd_render_in));
    std::cout << "wrote " << pd_render_out << "\n";
  });

  // ---- synth --------------------------------------------------------------
  auto* synth = app.add_subcommand("synth",
                                   "Generate a synthetic dataset directory");
  std::string synth_out;
  int synth_side = 32, synth_frames = 40, synth_calib = 30, synth_track_d = 2;
  double synth_background = 0.03, synth_tau = 0.1;
  double synth_sigma_b_sq = (4.0 / 255.0) * (4.0 / 255.0);
  bool synth_repeat = false;
  std::uint64_t synth_seed = 9;
  std::vector<std::string> synth_objects;
  synth->add_option("--out", synth_out, "Dataset directory")->required();
  synth->add_option("--side", synth_side, "Frame side length N");
  synth->add_option("--frames", synth_frames, "Sequence length");
  synth->add_option("--calib-frames", synth_calib, "Background-only frames");
  synth->add_option("--background", synth_background, "Background intensity");
  synth->add_option("--tau", synth_tau, "Foreground threshold");
  synth->add_option("--sigma-b-sq", synth_sigma_b_sq, "Residual variance");
  synth->add_option("--seed", synth_seed, "Scene seed");
  synth->add_option("--track-downsample", synth_track_d,
                    "Downsampling factor used for track-file units");
  synth->add_flag("--repeat-first", synth_repeat,
                  "Repeat frame 0 for the whole sequence");
  synth->add_option("--object", synth_objects,
                    "Object spec x,y,w,h[,vx,vy[,first,last]] (repeatable)");
  synth->callback([&]() {
    arcs::SceneConfig scene;
    scene.side = synth_side;
    scene.frame_count = synth_frames;
    scene.background_level = synth_background;
    scene.repeat_first = synth_repeat;
    scene.calibration_frames = synth_calib;
    for (const auto& spec : synth_objects)
      scene.objects.push_back(parse_object_spec(spec));
    const arcs::ForegroundModel model(synth_tau, synth_sigma_b_sq);
    const arcs::SyntheticSequence seq =
        arcs::synthesize_sequence(scene, model, synth_seed);
    arcs::write_dataset(synth_out, scene, seq, synth_track_d);
    std::cout << "wrote " << synth_frames << " frames to " << synth_out
              << "\n";
  });

  // ---- calibrate ----------------------------------------------------------
  auto* calibrate = app.add_subcommand(
      "calibrate", "Measure the static background through the full ensemble");
  std::string cal_dataset, cal_out = "calibration.bin";
  std::string cal_kind = "gaussian";
  std::uint64_t cal_seed = 101, cal_cv_seed = 202;
  int cal_cv_rows = 85, cal_frames = 30;
  calibrate->add_option("--dataset", cal_dataset, "Dataset directory")
      ->required();
  calibrate->add_option("--out", cal_out, "Calibration file path");
  calibrate->add_option("--ensemble", cal_kind, "gaussian or fourier_permuted");
  calibrate->add_option("--ensemble-seed", cal_seed, "Ensemble seed");
  calibrate->add_option("--cv-rows", cal_cv_rows, "Cross-validation rows");
  calibrate->add_option("--cv-seed", cal_cv_seed, "Cross-validation seed");
  calibrate->add_option("--frames", cal_frames,
                        "Background frames to average (J)");
  calibrate->callback([&]() {
    const arcs::Dataset ds = arcs::load_dataset(cal_dataset, 1, cal_frames);
    if (ds.calibration.empty())
      throw std::runtime_error("calibrate: dataset has no calib frames");
    const int n = ds.calibration.front().side() * ds.calibration.front().side();
    const arcs::MeasurementEnsemble ensemble(
        arcs::ensemble_kind_from_string(cal_kind), n, cal_seed);
    const arcs::CrossValidationMatrix psi(cal_cv_rows, n, cal_cv_seed);
    const arcs::BackgroundCalibration calib =
        arcs::calibrate_background(ds.calibration, ensemble, psi);
    arcs::save_calibration(cal_out, calib);
    std::cout << "wrote " << cal_out << " (J=" << calib.frame_count << ")\n";
  });

  // ---- run ----------------------------------------------------------------
  auto* run = app.add_subcommand("run", "Run a sensing strategy over a dataset");
  std::string run_config, run_strategy, run_out;
  int run_frames = -1;
  std::int64_t run_s1 = -1, run_seed = -1;
  run->add_option("--config", run_config, "Experiment config file")->required();
  run->add_option("--strategy", run_strategy,
                  "Override: oracle, arcs_cv, arcs_lrt, or all");
  run->add_option("--frames", run_frames, "Override: frame count (0 = all)");
  run->add_option("--out", run_out, "Override: output directory");
  run->add_option("--initial-s-hat", run_s1, "Override: initial estimate");
  run->add_option("--seed", run_seed,
                  "Override: ensemble seed (cross-validation seed follows)");
  run->callback([&]() {
    arcs::ExperimentConfig cfg = arcs::load_experiment_config(run_config);
    if (run_frames >= 0) cfg.frames = run_frames;
    if (!run_out.empty()) cfg.output_dir = run_out;
    if (run_s1 >= 0) cfg.initial_s_hat = static_cast<int>(run_s1);
    if (run_seed >= 0) {
      cfg.ensemble_seed = static_cast<std::uint64_t>(run_seed);
      cfg.cv_seed = arcs::hash3(cfg.ensemble_seed, 0xc5, 0);
    }

    const arcs::Dataset dataset = arcs::load_dataset(cfg.dataset_dir);
    const arcs::PhaseDiagram diagram =
        arcs::load_phase_diagram(cfg.phase_diagram_path);

    std::vector<arcs::Strategy> strategies;
    const std::string choice =
        run_strategy.empty() ? arcs::to_string(cfg.strategy) : run_strategy;
    if (choice == "all")
      strategies = {arcs::Strategy::oracle, arcs::Strategy::arcs_cv,
                    arcs::Strategy::arcs_lrt};
    else
      strategies = {arcs::strategy_from_string(choice)};

    std::vector<arcs::ExperimentResult> results;
    for (arcs::Strategy strategy : strategies) {
      cfg.strategy = strategy;
      results.push_back(arcs::run_experiment(cfg, dataset, diagram));
      const auto& r = results.back();
      std::cout << arcs::to_string(strategy) << ": " << r.frames.size()
                << " frames, avg M_total " << r.avg_m_total()
                << ", avg l2 error " << r.avg_l2_error() << "\n";
    }
    arcs::emit_report(results, cfg.output_dir);
    std::cout << "report written to " << cfg.output_dir.string() << "\n";
  });

  // ---- report -------------------------------------------------------------
  auto* report = app.add_subcommand(
      "report", "Regenerate summary and charts from metrics CSVs");
  std::vector<std::string> report_inputs;
  std::string report_out = "report";
  int report_n = 0;
  report->add_option("--out", report_out, "Output directory");
  report->add_option("--n", report_n, "Ambient dimension for M fractions")
      ->required();
  report->add_option("metrics", report_inputs, "metrics.csv files")
      ->required()
      ->expected(-1);
  report->callback([&]() {
    std::vector<arcs::ExperimentResult> results;
    for (const auto& path : report_inputs)
      results.push_back(arcs::read_metrics_csv(path, report_n));
    arcs::emit_report(results, report_out);
    std::cout << "report written to " << report_out << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
