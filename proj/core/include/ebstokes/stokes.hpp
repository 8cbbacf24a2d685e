/*
   Copyright 2026 The ebstokes authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <memory>

#include "ebstokes/ark.hpp"
#include "ebstokes/projection.hpp"

namespace ebs {

struct StokesState {
  Vector u, v;
  double t = 0.0;
};

/// Everything needed to march one case: grid, viscous operator with the
/// per-component boundary data, projection context, source, and reference
/// fields.
struct CaseSetup {
  std::shared_ptr<CutCellGrid> grid;
  double nu = 1.0;
  AffineOperator visc;     // Laplacian with the velocity BC structure
  BcSpec visc_bc[2];       // per-component boundary data (same types)
  ProjectionContext proj;
  bool use_projection = true;
  /// Cell-averaged explicit source for component c at time t (null: none).
  std::function<Vector(int c, double t)> source;
  /// Pointwise exact solution per component (null when unknown).
  std::function<double(int c, Vec2 x, double t)> exact;
  /// Pointwise initial condition per component.
  std::function<double(int c, Vec2 x)> ic;

  /// Exact cell averages of `f` over every valid cell.
  Vector cell_averages(const std::function<double(Vec2)>& f) const;
};

/// Cell averages of the named initial condition at t0.
StokesState initialize(const CaseSetup& cs, double t0 = 0.0);

/// Marches du/dt = nu L u + s with per-component implicit viscous stages and
/// one approximate projection after the full ARK step.
class StokesStepper {
 public:
  StokesStepper(const CaseSetup& cs, double dt);

  StokesState advance(const StokesState& s);
  double dt() const { return dt_; }
  const NormTriple& last_divergence() const { return last_div_; }

 private:
  const CaseSetup& cs_;
  double dt_;
  ArkTableau tab_;
  StageSolver solver_;
  ImexProblem prob_[2];
  NormTriple last_div_;
};

struct SteadyResult {
  StokesState state;
  bool converged = false;
  int steps = 0;
  std::vector<double> residual_history;  // max-norm of (u^{n+1}-u^n)/dt
};

/// Advances until max|u^{n+1}-u^n|/dt < tol or the step cap.
SteadyResult run_to_steady(const CaseSetup& cs, double dt, double tol, int max_steps,
                           double t0 = 0.0);

/// Manufactured diffusion solution u_d = sin(2 pi t) sin(R^2 - |x-x0|^2)
/// and the source that balances du/dt = nu Lap(u) + s.
double mms_diffusion_value(Vec2 x, double t, double R, Vec2 x0);
double mms_diffusion_source(Vec2 x, double t, double R, Vec2 x0, double nu);

/// Steady circular-Couette profile: inner wall stationary, outer rotating.
double couette_analytic(double r, double r_in, double r_out, double omega_out);

}  // namespace ebs
