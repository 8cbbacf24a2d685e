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

#include <doctest.h>

#include <cmath>

#include "ebstokes/cases.hpp"
#include "ebstokes/projection.hpp"

using namespace ebs;

namespace {

constexpr double kPi = 3.14159265358979323846;

ImplicitGeometry all_fluid() {
  ImplicitGeometry g;
  g.levelset = [](Vec2) { return -1.0; };
  g.gradient = [](Vec2) { return Vec2{0, 0}; };
  return g;
}

}  // namespace

TEST_CASE("projection of the zero field is exactly zero") {
  const int n = 32;
  const CutCellGrid grid =
      CutCellGrid::build(case_geometry("taylor_green_contour"), n, n, 1.0 / n, {0, 0});
  const ProjectionContext ctx = ProjectionContext::build(grid, ProjectionBc{});
  const Vector zero = Vector::Zero(grid.n_cells());
  const ProjectionResult pr = project(zero, zero, ctx, 0.0);
  CHECK(pr.u.cwiseAbs().maxCoeff() == 0.0);
  CHECK(pr.v.cwiseAbs().maxCoeff() == 0.0);
  CHECK(pr.phi.cwiseAbs().maxCoeff() == 0.0);
  CHECK(pr.div_after.linf == 0.0);
}

TEST_CASE("divergence norms: zero field and interior affine field") {
  const int n = 32;
  const CutCellGrid grid = CutCellGrid::build(all_fluid(), n, n, 1.0 / n, {0, 0});
  const ProjectionContext ctx = ProjectionContext::build(grid, ProjectionBc{});
  const Vector zero = Vector::Zero(grid.n_cells());
  const NormTriple nz = divergence_norms(zero, zero, ctx);
  CHECK(nz.linf == 0.0);

  Vector u(grid.n_cells()), v(grid.n_cells());
  for (int id = 0; id < grid.n_cells(); ++id) {
    const auto [i, j] = grid.cell_ij(id);
    const Vec2 c = grid.cell_center(i, j);
    u[id] = c.x;
    v[id] = -c.y;
  }
  const Vector div = ctx.Dv.apply(u, v, 0.0);
  // interior cells see round-off; wall faces carry prescribed no-flow fluxes
  for (int id = 0; id < grid.n_cells(); ++id) {
    const auto [i, j] = grid.cell_ij(id);
    if (i < 6 || j < 6 || i >= n - 6 || j >= n - 6) continue;
    CHECK(std::abs(div[id]) <= 1e-10);
  }
}

TEST_CASE("pure gradient input is annihilated to discretization error") {
  // w = G(chi) for chi = cos(2 pi x) cos(2 pi y): homogeneous Neumann data on
  // the unit square, so the projection must remove (almost) all of it
  double prev = 0;
  for (int n : {16, 32}) {
    const CutCellGrid grid = CutCellGrid::build(all_fluid(), n, n, 1.0 / n, {0, 0});
    const ProjectionContext ctx = ProjectionContext::build(grid, ProjectionBc{});
    Vector chi(grid.n_cells());
    for (int id = 0; id < grid.n_cells(); ++id)
      chi[id] = grid.cell_average(id, [](Vec2 p) {
        return std::cos(2 * kPi * p.x) * std::cos(2 * kPi * p.y);
      });
    const Vector zero_data = Vector::Zero(ctx.Gx.B.cols());
    const Vector wu = ctx.Gx.apply_with_data(chi, zero_data);
    const Vector wv = ctx.Gy.apply_with_data(chi, zero_data);
    const ProjectionResult pr = project(wu, wv, ctx, 0.0);
    const double out = std::max(pr.u.cwiseAbs().maxCoeff(), pr.v.cwiseAbs().maxCoeff());
    const double in = std::max(wu.cwiseAbs().maxCoeff(), wv.cwiseAbs().maxCoeff());
    CHECK(out <= 0.05 * in);  // large reduction at desk resolution
    if (prev > 0) CHECK(prev / out >= 10.0);  // ~fourth-order decay
    prev = out;
  }
}

TEST_CASE("repeated projections: non-increasing norms and approximate idempotence") {
  const int n = 32;
  const CaseSetup cs = [&] {
    CaseConfig cfg;
    cfg.geometry = "taylor_green_contour";
    cfg.nx = cfg.ny = n;
    cfg.h = 1.0 / n;
    cfg.bc = "noslip";
    cfg.ic = "taylor_green";
    cfg.dt = 1;
    cfg.steps = 1;
    return build_case(cfg, {}, false);
  }();
  StokesState s = initialize(cs, 0.0);

  const ProjectionResult p1 = project(s.u, s.v, cs.proj, 0.0);
  const ProjectionResult p2 = project(p1.u, p1.v, cs.proj, 0.0);
  // divergence does not increase under a repeated application
  CHECK(p2.div_after.l1 <= p1.div_after.l1 + 1e-14);
  CHECK(p2.div_after.l2 <= p1.div_after.l2 + 1e-14);
  CHECK(p2.div_after.linf <= p1.div_after.linf + 1e-14);
  // approximate idempotence in the max norm
  const double change2 = std::max((p2.u - p1.u).cwiseAbs().maxCoeff(),
                                  (p2.v - p1.v).cwiseAbs().maxCoeff());
  const double change1 = std::max((p1.u - s.u).cwiseAbs().maxCoeff(),
                                  (p1.v - s.v).cwiseAbs().maxCoeff());
  CHECK(change2 <= change1);
}

TEST_CASE("open-boundary projection runs and reports psi") {
  CaseConfig cfg;
  cfg.geometry = "channel_circle";
  cfg.ny = 16;
  cfg.nx = 32;
  cfg.h = 1.0 / 16;
  cfg.bc = "channel";
  cfg.ic = "zero";
  cfg.dt = 0.01;
  cfg.steps = 1;
  const CaseSetup cs = build_case(cfg, {}, false);
  REQUIRE(cs.proj.has_outflow);
  const Vector zero = Vector::Zero(cs.grid->n_cells());
  const ProjectionResult pr = project(zero, zero, cs.proj, 0.0);
  // inflow data drives a nonzero potential-flow component
  CHECK(pr.psi.cwiseAbs().maxCoeff() > 0.0);
  CHECK(pr.phi_report.converged);
  CHECK(pr.psi_report.converged);
  // the projected field carries flow out of the inflow data alone
  CHECK(pr.u.cwiseAbs().maxCoeff() > 0.0);
}
