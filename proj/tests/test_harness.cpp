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

#include "arcs/experiment.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "arcs/dataset.hpp"

namespace arcs {
namespace {

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("arcs_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

const ForegroundModel kModel(0.1, (4.0 / 255.0) * (4.0 / 255.0));

SceneConfig static_scene() {
  SceneConfig scene;
  scene.side = 16;
  scene.frame_count = 8;
  scene.background_level = 0.03;
  scene.repeat_first = true;
  scene.calibration_frames = 16;
  scene.objects.push_back({.x0 = 4, .y0 = 6, .width = 6, .height = 5});
  return scene;
}

const PhaseDiagram& shared_diagram() {
  static const PhaseDiagram pd = [] {
    PhaseDiagramConfig config;
    config.ambient_dim = 256;
    config.grid = 8;
    config.trials = 8;
    config.seed = 17;
    return generate_phase_diagram(config);
  }();
  return pd;
}

struct TestRig {
  std::filesystem::path dir;
  Dataset dataset;
  ExperimentConfig config;
};

TestRig make_rig(const std::string& name) {
  TestRig rig;
  rig.dir = temp_dir(name);
  const SceneConfig scene = static_scene();
  const SyntheticSequence seq = synthesize_sequence(scene, kModel, 5);
  write_dataset(rig.dir / "data", scene, seq, 2);
  rig.dataset = load_dataset(rig.dir / "data");
  rig.config.dataset_dir = rig.dir / "data";
  rig.config.output_dir = rig.dir / "out";
  rig.config.epsilon = 0.1;
  rig.config.rho = 0.45;
  rig.config.cv_rows = 85;
  rig.config.calibration_frames = 16;
  return rig;
}

TEST(ConfigFile, ParsesSectionsAndTypes) {
  const auto dir = temp_dir("config");
  const auto path = dir / "exp.cfg";
  std::ofstream out(path);
  out << "# comment line\n"
         "[experiment]\n"
         "strategy = arcs_cv\n"
         "dataset = data   # trailing comment\n"
         "phase_diagram = pd.csv\n"
         "frames = 12\n"
         "[model]\n"
         "tau = 0.2\n"
         "[cv]\n"
         "epsilon = 0.25\n"
         "rho = 0.3\n"
         "[lrt]\n"
         "lambda = 0.7\n"
         "sigma = 4,4,9,9\n";
  out.close();

  const ExperimentConfig cfg = load_experiment_config(path);
  EXPECT_EQ(cfg.strategy, Strategy::arcs_cv);
  EXPECT_EQ(cfg.frames, 12);
  EXPECT_DOUBLE_EQ(cfg.tau, 0.2);
  EXPECT_DOUBLE_EQ(cfg.epsilon, 0.25);
  EXPECT_DOUBLE_EQ(cfg.rho, 0.3);
  EXPECT_DOUBLE_EQ(cfg.lambda, 0.7);
  EXPECT_DOUBLE_EQ(cfg.track_covariance(2, 2), 9.0);
  EXPECT_EQ(cfg.effective_cv_rows(), cv_row_count(0.25, 0.3));
}

TEST(ConfigFile, RequiresStrategySection) {
  const auto dir = temp_dir("config_missing");
  const auto path = dir / "exp.cfg";
  std::ofstream out(path);
  out << "[experiment]\n"
         "strategy = arcs_lrt\n"
         "dataset = data\n"
         "phase_diagram = pd.csv\n";
  out.close();
  EXPECT_THROW(load_experiment_config(path), std::runtime_error);
}

TEST(Dataset, RoundTripThroughDisk) {
  const auto dir = temp_dir("dataset");
  const SceneConfig scene = static_scene();
  const SyntheticSequence seq = synthesize_sequence(scene, kModel, 5);
  write_dataset(dir, scene, seq, 2);
  const Dataset ds = load_dataset(dir);

  ASSERT_EQ(ds.frames.size(), seq.frames.size());
  ASSERT_EQ(ds.calibration.size(), seq.calibration_frames.size());
  ASSERT_TRUE(ds.background.has_value());
  ASSERT_TRUE(ds.has_ground_truth());
  for (std::size_t t = 0; t < ds.frames.size(); ++t)
    EXPECT_EQ(ds.s_true[t], seq.truth.sparsity[t]);
  ASSERT_TRUE(ds.has_tracks());
  ASSERT_TRUE(ds.tracks[0].has_value());
  // 6 x 5 object at (4, 6), in half-resolution track units.
  EXPECT_DOUBLE_EQ(ds.tracks[0]->p1, 3.0);
  EXPECT_DOUBLE_EQ(ds.tracks[0]->p2, 2.5);
  EXPECT_DOUBLE_EQ(ds.tracks[0]->p3, 2.0);
  EXPECT_DOUBLE_EQ(ds.tracks[0]->p4, 3.0);
  // Quantization to 8 bits must not perturb the thresholded support.
  for (std::size_t t = 0; t < ds.frames.size(); ++t) {
    const Eigen::VectorXd f =
        ds.frames[t].vectorize() - ds.background->vectorize();
    int above = 0;
    for (Eigen::Index i = 0; i < f.size(); ++i)
      if (std::abs(f[i]) >= kModel.tau) ++above;
    EXPECT_EQ(above, ds.s_true[t]);
  }
}

TEST(Dataset, TrackFileSupportsMissingRows) {
  const auto dir = temp_dir("tracks");
  std::vector<std::optional<WarpParams>> tracks;
  tracks.push_back(WarpParams{1.5, 2.5, 3.0, 4.0});
  tracks.push_back(std::nullopt);
  tracks.push_back(WarpParams{2.0, 2.0, 0.0, 0.0});
  write_tracks_csv(dir / "tracks.csv", tracks);
  const auto loaded = read_tracks_csv(dir / "tracks.csv");
  ASSERT_EQ(loaded.size(), 3u);
  EXPECT_TRUE(loaded[0].has_value());
  EXPECT_FALSE(loaded[1].has_value());
  EXPECT_DOUBLE_EQ(loaded[0]->p2, 2.5);
  EXPECT_DOUBLE_EQ(loaded[2]->p1, 2.0);
}

TEST(CvConfigValidation, RejectsInsufficientRows) {
  CvConfig cv;
  cv.epsilon = 0.5;
  cv.rho = 0.1;
  cv.ambient_dim = 256;
  cv.r = 51;  // bound requires 52
  EXPECT_THROW(cv.validate(), std::invalid_argument);
  cv.r = 52;
  EXPECT_NO_THROW(cv.validate());
}

TEST(RunExperiment, OracleUsesTrueSparsityAndNoOverhead) {
  TestRig rig = make_rig("oracle");
  rig.config.strategy = Strategy::oracle;
  const ExperimentResult result =
      run_experiment(rig.config, rig.dataset, shared_diagram());
  ASSERT_EQ(result.frames.size(), rig.dataset.frames.size());
  for (const auto& f : result.frames) {
    EXPECT_EQ(f.s_hat, f.s_true);
    EXPECT_EQ(f.m_total, f.m_cs);
    EXPECT_TRUE(std::isfinite(f.l2_error));
  }
}

TEST(RunExperiment, OracleNeedsGroundTruth) {
  TestRig rig = make_rig("oracle_no_truth");
  rig.config.strategy = Strategy::oracle;
  std::filesystem::remove(rig.config.dataset_dir / "ground_truth.csv");
  const Dataset blind = load_dataset(rig.config.dataset_dir);
  EXPECT_THROW(run_experiment(rig.config, blind, shared_diagram()),
               std::runtime_error);
}

TEST(RunExperiment, CvAddsRowOverheadAndConverges) {
  TestRig rig = make_rig("cv");
  rig.config.strategy = Strategy::arcs_cv;
  const ExperimentResult result =
      run_experiment(rig.config, rig.dataset, shared_diagram());
  for (const auto& f : result.frames) EXPECT_EQ(f.m_total - f.m_cs, 85);
  // Static scene with s = 30: the estimate must settle near the truth.
  const auto& last = result.frames.back();
  EXPECT_GE(last.s_hat, 24);
  EXPECT_LE(last.s_hat, 45);
}

TEST(RunExperiment, LrtAddsLowResOverheadAndConverges) {
  TestRig rig = make_rig("lrt");
  rig.config.strategy = Strategy::arcs_lrt;
  const ExperimentResult result =
      run_experiment(rig.config, rig.dataset, shared_diagram());
  const int expected_overhead = (16 / 2) * (16 / 2);
  for (const auto& f : result.frames)
    EXPECT_EQ(f.m_total - f.m_cs, expected_overhead);
  // The track is available from frame one; adaptation is immediate.
  for (std::size_t t = 1; t < result.frames.size(); ++t) {
    EXPECT_GE(result.frames[t].s_hat, 30);
    EXPECT_LE(result.frames[t].s_hat, 45);
  }
}

TEST(RunExperiment, EmptySceneStaysAtMeasurementFloor) {
  TestRig rig = make_rig("empty");
  SceneConfig scene = static_scene();
  scene.objects.clear();
  const SyntheticSequence seq = synthesize_sequence(scene, kModel, 5);
  write_dataset(rig.dir / "empty", scene, seq, 2);
  rig.dataset = load_dataset(rig.dir / "empty");

  rig.config.strategy = Strategy::arcs_cv;
  const ExperimentResult result =
      run_experiment(rig.config, rig.dataset, shared_diagram());
  // The bound hovers at the inflated noise floor, so the estimate may
  // flicker between zero and a few pixels; the acquisition cost must not.
  for (const auto& f : result.frames) {
    EXPECT_EQ(f.m_cs, 85);  // max(r, 8)
    EXPECT_LE(f.s_hat, 4);
  }
}

TEST(RunExperiment, BlobTrackingMatchesManualTracks) {
  // Block-aligned object so the half-block quantization of the blob's
  // bounding box does not mask genuine tracker disagreement.
  TestRig rig = make_rig("lrt_blob");
  SceneConfig scene = static_scene();
  scene.objects[0].height = 6;
  const SyntheticSequence seq = synthesize_sequence(scene, kModel, 5);
  write_dataset(rig.dir / "aligned", scene, seq, 2);
  rig.dataset = load_dataset(rig.dir / "aligned");
  rig.config.dataset_dir = rig.dir / "aligned";

  rig.config.strategy = Strategy::arcs_lrt;
  rig.config.track_source = "blob";
  const ExperimentResult blob =
      run_experiment(rig.config, rig.dataset, shared_diagram());
  rig.config.track_source = "file";
  const ExperimentResult manual =
      run_experiment(rig.config, rig.dataset, shared_diagram());
  ASSERT_EQ(blob.frames.size(), manual.frames.size());
  double rms = 0.0, scale = 0.0;
  for (std::size_t t = 0; t < blob.frames.size(); ++t) {
    const double d = blob.frames[t].s_hat - manual.frames[t].s_hat;
    rms += d * d;
    scale += static_cast<double>(manual.frames[t].s_hat) *
             manual.frames[t].s_hat;
  }
  EXPECT_LE(std::sqrt(rms), 0.15 * std::sqrt(scale));
}

TEST(RunExperiment, CalibrationFileMatchesInProcess) {
  TestRig rig = make_rig("calib_file");
  rig.config.strategy = Strategy::oracle;
  const ExperimentResult direct =
      run_experiment(rig.config, rig.dataset, shared_diagram());

  const MeasurementEnsemble ens(rig.config.ensemble, 256,
                                rig.config.ensemble_seed);
  const CrossValidationMatrix psi(rig.config.effective_cv_rows(), 256,
                                  rig.config.cv_seed);
  std::vector<Frame> calib_frames(rig.dataset.calibration.begin(),
                                  rig.dataset.calibration.begin() + 16);
  save_calibration(rig.dir / "calib.bin",
                   calibrate_background(calib_frames, ens, psi));
  rig.config.calibration_path = rig.dir / "calib.bin";
  const ExperimentResult loaded =
      run_experiment(rig.config, rig.dataset, shared_diagram());
  for (std::size_t t = 0; t < direct.frames.size(); ++t)
    EXPECT_DOUBLE_EQ(direct.frames[t].l2_error, loaded.frames[t].l2_error);
}

TEST(Report, FilesAndExactAverages) {
  TestRig rig = make_rig("report");
  rig.config.strategy = Strategy::arcs_cv;
  const ExperimentResult result =
      run_experiment(rig.config, rig.dataset, shared_diagram());
  emit_report({result}, rig.config.output_dir);

  for (const char* name : {"metrics.csv", "summary.csv", "sparsity.svg",
                           "measurements.svg", "error.svg", "timings.csv"})
    EXPECT_TRUE(std::filesystem::exists(rig.config.output_dir / name)) << name;

  // The summary row holds the exact arithmetic means of the columns.
  double m_acc = 0.0, e_acc = 0.0;
  for (const auto& f : result.frames) {
    m_acc += f.m_total;
    e_acc += f.l2_error;
  }
  const std::string summary = slurp(rig.config.output_dir / "summary.csv");
  std::istringstream lines(summary);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  std::istringstream fields(row);
  std::string strategy, frames, avg_m, avg_frac, avg_err;
  std::getline(fields, strategy, ',');
  std::getline(fields, frames, ',');
  std::getline(fields, avg_m, ',');
  std::getline(fields, avg_frac, ',');
  std::getline(fields, avg_err);
  EXPECT_EQ(strategy, "arcs_cv");
  EXPECT_DOUBLE_EQ(std::stod(avg_m),
                   m_acc / static_cast<double>(result.frames.size()));
  EXPECT_DOUBLE_EQ(std::stod(avg_err),
                   e_acc / static_cast<double>(result.frames.size()));
}

TEST(Report, MetricsCsvIsByteStableAcrossReruns) {
  TestRig rig = make_rig("determinism");
  for (Strategy strategy :
       {Strategy::oracle, Strategy::arcs_cv, Strategy::arcs_lrt}) {
    rig.config.strategy = strategy;
    const ExperimentResult a =
        run_experiment(rig.config, rig.dataset, shared_diagram());
    const ExperimentResult b =
        run_experiment(rig.config, rig.dataset, shared_diagram());
    write_metrics_csv(rig.dir / "a.csv", a);
    write_metrics_csv(rig.dir / "b.csv", b);
    EXPECT_EQ(slurp(rig.dir / "a.csv"), slurp(rig.dir / "b.csv"))
        << to_string(strategy);
  }
}

TEST(Report, MetricsCsvRoundTrip) {
  TestRig rig = make_rig("metrics_roundtrip");
  rig.config.strategy = Strategy::arcs_lrt;
  const ExperimentResult result =
      run_experiment(rig.config, rig.dataset, shared_diagram());
  write_metrics_csv(rig.dir / "m.csv", result);
  const ExperimentResult loaded = read_metrics_csv(rig.dir / "m.csv", 256);
  ASSERT_EQ(loaded.strategy, Strategy::arcs_lrt);
  ASSERT_EQ(loaded.frames.size(), result.frames.size());
  for (std::size_t t = 0; t < result.frames.size(); ++t) {
    EXPECT_EQ(loaded.frames[t].s_hat, result.frames[t].s_hat);
    EXPECT_EQ(loaded.frames[t].m_total, result.frames[t].m_total);
    EXPECT_DOUBLE_EQ(loaded.frames[t].l2_error, result.frames[t].l2_error);
  }
}

#ifdef ARCS_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(ARCS_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

TEST(Cli, EndToEndPipeline) {
  const auto dir = temp_dir("cli");
  const std::string d = dir.string();
  ASSERT_EQ(run_cli("synth --out " + d + "/data --side 16 --frames 6"
                    " --calib-frames 12 --background 0.03"
                    " --object 4,6,6,5 --repeat-first --seed 5 > /dev/null"),
            0);
  ASSERT_EQ(run_cli("phase-diagram generate --out " + d + "/pd.csv"
                    " --n 256 --grid 4 --trials 4 --seed 3 > /dev/null"),
            0);
  ASSERT_EQ(run_cli("phase-diagram query --diagram " + d + "/pd.csv"
                    " --s-hat 8 --tau-d 0.8 > /dev/null"),
            0);
  ASSERT_EQ(run_cli("phase-diagram render --diagram " + d + "/pd.csv"
                    " --out " + d + "/pd.svg > /dev/null"),
            0);
  ASSERT_EQ(run_cli("calibrate --dataset " + d + "/data --out " + d +
                    "/calib.bin --cv-rows 85 --frames 12 > /dev/null"),
            0);

  std::ofstream cfg(dir / "exp.cfg");
  cfg << "[experiment]\nstrategy = arcs_cv\ndataset = " << d << "/data\n"
      << "phase_diagram = " << d << "/pd.csv\ncalibration = " << d
      << "/calib.bin\noutput = " << d << "/out\n"
      << "[cv]\nepsilon = 0.1\nrho = 0.45\nr = 85\n[lrt]\nlambda = 0.1\n";
  cfg.close();
  ASSERT_EQ(run_cli("run --config " + d + "/exp.cfg > /dev/null"), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "metrics.csv"));
  ASSERT_EQ(run_cli("report --n 256 --out " + d + "/report " + d +
                    "/out/metrics.csv > /dev/null"),
            0);
  EXPECT_TRUE(std::filesystem::exists(dir / "report" / "summary.csv"));

  EXPECT_EQ(run_cli("bogus-subcommand 2> /dev/null"), 1);
  EXPECT_EQ(run_cli("run --config " + d + "/missing.cfg 2> /dev/null"), 2);
}
#endif

}  // namespace
}  // namespace arcs
