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

#include "ebstokes/stokes.hpp"

#include <cmath>

#include "ebstokes/runtime.hpp"

namespace ebs {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

Vector CaseSetup::cell_averages(const std::function<double(Vec2)>& f) const {
  const int n = grid->n_cells();
  Vector out(n);
  parallel_for(0, n, [&](int id) { out[id] = grid->cell_average(id, f); });
  return out;
}

StokesState initialize(const CaseSetup& cs, double t0) {
  if (!cs.ic) throw ConfigError("initialize: case has no initial condition");
  StokesState s;
  s.t = t0;
  s.u = cs.cell_averages([&](Vec2 x) { return cs.ic(0, x); });
  s.v = cs.cell_averages([&](Vec2 x) { return cs.ic(1, x); });
  return s;
}

StokesStepper::StokesStepper(const CaseSetup& cs, double dt)
    : cs_(cs), dt_(dt), tab_(ArkTableau::ark436l2sa()),
      solver_(cs.visc.A[0], cs.nu, dt, tab_.gamma) {
  for (int c = 0; c < 2; ++c) {
    prob_[c].A = &cs_.visc.A[0];
    prob_[c].nu = cs_.nu;
    const BcSpec* spec = &cs_.visc_bc[c];
    const AffineOperator* op = &cs_.visc;
    const CutCellGrid* grid = cs_.grid.get();
    prob_[c].boundary_term = [op, spec, grid](double t) {
      return Vector(op->B * boundary_data(*grid, *spec, t));
    };
    if (cs_.source) {
      auto src = cs_.source;
      prob_[c].source = [src, c](const Vector&, double t) { return src(c, t); };
    }
  }
}

StokesState StokesStepper::advance(const StokesState& s) {
  StokesState out;
  out.u = ark_step(s.u, s.t, dt_, prob_[0], tab_, solver_);
  out.v = ark_step(s.v, s.t, dt_, prob_[1], tab_, solver_);
  out.t = s.t + dt_;
  if (cs_.use_projection) {
    ProjectionResult pr = project(out.u, out.v, cs_.proj, out.t);
    out.u = std::move(pr.u);
    out.v = std::move(pr.v);
    last_div_ = pr.div_after;
  } else {
    last_div_ = NormTriple{};
  }
  return out;
}

SteadyResult run_to_steady(const CaseSetup& cs, double dt, double tol, int max_steps,
                           double t0) {
  SteadyResult res;
  StokesStepper stepper(cs, dt);
  StokesState s = initialize(cs, t0);
  for (int k = 0; k < max_steps; ++k) {
    StokesState next = stepper.advance(s);
    double dmax = 0.0;
    for (Eigen::Index m = 0; m < s.u.size(); ++m) {
      dmax = std::max(dmax, std::abs(next.u[m] - s.u[m]));
      dmax = std::max(dmax, std::abs(next.v[m] - s.v[m]));
    }
    const double resid = dmax / dt;
    res.residual_history.push_back(resid);
    s = std::move(next);
    res.steps = k + 1;
    if (resid < tol) {
      res.converged = true;
      break;
    }
  }
  res.state = std::move(s);
  return res;
}

double mms_diffusion_value(Vec2 x, double t, double R, Vec2 x0) {
  const Vec2 d = x - x0;
  return std::sin(kTwoPi * t) * std::sin(R * R - d.dot(d));
}

double mms_diffusion_source(Vec2 x, double t, double R, Vec2 x0, double nu) {
  const Vec2 d = x - x0;
  const double g = R * R - d.dot(d);
  const double sg = std::sin(g), cg = std::cos(g);
  const double st = std::sin(kTwoPi * t), ct = std::cos(kTwoPi * t);
  double lap = 0.0;
  for (int k = 0; k < 2; ++k) lap += -4.0 * d[k] * d[k] * sg - 2.0 * cg;
  return kTwoPi * ct * sg - nu * st * lap;
}

double couette_analytic(double r, double r_in, double r_out, double omega_out) {
  if (r < r_in - 1e-12 || r > r_out + 1e-12)
    throw std::out_of_range("couette_analytic: radius outside the annulus");
  const double num = r / r_in - r_in / r;
  const double den = r_out / r_in - r_in / r_out;
  return omega_out * r_out * num / den;
}

}  // namespace ebs
