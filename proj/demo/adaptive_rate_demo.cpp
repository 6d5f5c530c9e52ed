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

// Minimal end-to-end example: synthesize a scene with a moving object,
// build a coarse phase diagram, and let the cross-validation controller
// adapt the measurement rate as the object grows into view.

#include <cstdio>

#include "arcs/arcs_cv.hpp"
#include "arcs/phase_diagram.hpp"
#include "arcs/signal_model.hpp"

int main() {
  using namespace arcs;
  const int side = 16, n = side * side;
  const ForegroundModel model(0.1, std::pow(4.0 / 255.0, 2));

  SceneConfig scene;
  scene.side = side;
  scene.frame_count = 16;
  scene.background_level = 0.03;
  scene.calibration_frames = 20;
  scene.objects.push_back(
      {.x0 = -6, .y0 = 5, .vx = 1.0, .width = 6, .height = 5});
  const SyntheticSequence seq = synthesize_sequence(scene, model, 7);

  PhaseDiagramConfig pd_config;
  pd_config.ambient_dim = n;
  pd_config.grid = 8;
  pd_config.trials = 10;
  pd_config.seed = 11;
  std::puts("building phase diagram...");
  const PhaseDiagram diagram = generate_phase_diagram(pd_config);

  const MeasurementEnsemble ensemble(EnsembleKind::gaussian, n, 101);
  CvConfig cv;
  cv.epsilon = 0.1;
  cv.rho = 0.45;
  cv.r = cv_row_count(cv.epsilon, cv.rho);
  cv.tau = model.tau;
  cv.sigma_b_sq = model.sigma_b_sq;
  cv.ambient_dim = n;
  const CrossValidationMatrix psi(cv.r, n, 202);
  const BackgroundCalibration calibration =
      calibrate_background(seq.calibration_frames, ensemble, psi);

  SolverConfig solver;
  solver.max_iterations = 800;
  solver.convergence_tol = 1e-6;
  solver.rho = 16.0;
  CvController controller(cv, diagram, {.tau_d = 0.9, .m_floor = cv.r},
                          ensemble, psi, calibration, solver,
                          /*initial_s_hat=*/0);

  std::puts(" t  s_true  s_hat  M_t  l2_error");
  for (int t = 0; t < scene.frame_count; ++t) {
    const int m = controller.measurement_count();
    const RowSubsetOperator op(ensemble, m);
    const Eigen::VectorXd x = seq.frames[t].vectorize();
    const CvStepResult step = controller.step(op.apply(x), psi.apply(x));
    const double err = (step.f_hat - seq.truth.foregrounds[t]).norm();
    std::printf("%2d  %6d  %5d  %3d  %.4f\n", t, seq.truth.sparsity[t],
                step.s_hat_used, m, err);
  }
  return 0;
}
