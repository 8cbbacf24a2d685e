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

#include "ebstokes/cases.hpp"

#include <cmath>

#include "ebstokes/runtime.hpp"

namespace ebs {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double taylor_green_u(Vec2 p, double n) {
  return std::sin(n * kPi * p.x) * std::cos(n * kPi * p.y);
}

double taylor_green_v(Vec2 p, double n) {
  return -std::cos(n * kPi * p.x) * std::sin(n * kPi * p.y);
}

double geom_param(const CaseConfig& cfg, const std::string& key, double def) {
  auto it = cfg.geom_params.find(key);
  return it == cfg.geom_params.end() ? def : it->second;
}

CaseSetup build_case(const CaseConfig& cfg_in, const AssembleOptions& opt, bool with_viscous) {
  CaseConfig cfg = cfg_in;
  resolve_defaults(cfg);
  validate_config(cfg);

  CaseSetup cs;
  cs.nu = cfg.nu;
  cs.use_projection = cfg.project;

  const ImplicitGeometry geom = case_geometry(cfg.geometry, cfg.geom_params);
  log_debug("build_case: building grid " + std::to_string(cfg.nx) + "x" + std::to_string(cfg.ny));
  cs.grid = std::make_shared<CutCellGrid>(
      CutCellGrid::build(geom, cfg.nx, cfg.ny, cfg.h, cfg.origin));

  // ---- boundary conditions per preset ----
  ProjectionBc pbc;  // all walls by default
  BcSpec visc_u, visc_v;

  if (cfg.bc == "noslip") {
    visc_u = BcSpec::uniform(BcCondition::dirichlet());
    visc_v = visc_u;
  } else if (cfg.bc == "mms_dirichlet") {
    const double R = geom_param(cfg, "radius", 0.3);
    const Vec2 x0{geom_param(cfg, "center_x", 0.5), geom_param(cfg, "center_y", 0.5)};
    auto g = [R, x0](Vec2 x, Vec2, double t) { return mms_diffusion_value(x, t, R, x0); };
    visc_u = BcSpec::uniform(BcCondition::dirichlet(g));
    visc_v = visc_u;
    const double nu = cfg.nu;
    auto src_fn = [R, x0, nu](Vec2 x, double t) {
      return mms_diffusion_source(x, t, R, x0, nu);
    };
    std::shared_ptr<CutCellGrid> grid = cs.grid;
    cs.source = [grid, src_fn](int, double t) {
      const int n = grid->n_cells();
      Vector out(n);
      parallel_for(0, n, [&](int id) {
        out[id] = grid->cell_average(id, [&](Vec2 x) { return src_fn(x, t); });
      });
      return out;
    };
    cs.exact = [R, x0](int, Vec2 x, double t) { return mms_diffusion_value(x, t, R, x0); };
  } else if (cfg.bc == "couette") {
    const double ri = geom_param(cfg, "r_inner", 0.25);
    const double ro = geom_param(cfg, "r_outer", 0.475);
    const Vec2 c{geom_param(cfg, "center_x", 0.5), geom_param(cfg, "center_y", 0.5)};
    const double omega = 1.0 / ro;  // peak tangential speed 1 at the outer wall
    const double rmid = 0.5 * (ri + ro);
    auto wall_u = [c, omega, rmid](Vec2 x, Vec2, double) {
      return ((x - c).norm() > rmid) ? omega * (x.y - c.y) : 0.0;
    };
    auto wall_v = [c, omega, rmid](Vec2 x, Vec2, double) {
      return ((x - c).norm() > rmid) ? -omega * (x.x - c.x) : 0.0;
    };
    visc_u = BcSpec::uniform(BcCondition::dirichlet(wall_u));
    visc_v = BcSpec::uniform(BcCondition::dirichlet(wall_v));
    cs.exact = [ri, ro, omega, c](int comp, Vec2 x, double) {
      const Vec2 d = x - c;
      const double r = std::clamp(d.norm(), ri, ro);
      const double ut = couette_analytic(r, ri, ro, omega);
      return comp == 0 ? ut * d.y / r : -ut * d.x / r;
    };
  } else if (cfg.bc == "channel") {
    const bool gyroid = (cfg.geometry == "gyroid_scaffold");
    const double pipe_r = geom_param(cfg, "pipe_radius", 0.95);
    const double pipe_yc = geom_param(cfg, "pipe_center_y", 0.0);
    auto inflow_u = [gyroid, pipe_r, pipe_yc](Vec2 x, double) {
      if (gyroid) {
        const double s = (x.y - pipe_yc) / pipe_r;
        return std::max(0.0, 1.0 - s * s);
      }
      return 4.0 * x.y * (1.0 - x.y);  // developed inflow, peak 1
    };
    auto gu = [inflow_u](Vec2 x, Vec2, double t) { return inflow_u(x, t); };
    visc_u.xlo = BcCondition::dirichlet(gu);
    visc_u.xhi = BcCondition::neumann();
    visc_u.ylo = visc_u.yhi = visc_u.eb = BcCondition::dirichlet();
    visc_v = visc_u;
    visc_v.xlo = BcCondition::dirichlet();  // v = 0 at inflow
    pbc.xlo = PieceRole::Inflow;
    pbc.xhi = PieceRole::Outflow;
    pbc.inflow_u = inflow_u;
  } else {
    throw ConfigError("build_case: unknown bc preset '" + cfg.bc + "'");
  }
  cs.visc_bc[0] = visc_u;
  cs.visc_bc[1] = visc_v;

  // ---- initial condition ----
  if (cfg.ic == "zero") {
    cs.ic = [](int, Vec2) { return 0.0; };
  } else if (cfg.ic == "constant") {
    const double c0 = cfg.ic_value;
    cs.ic = [c0](int, Vec2) { return c0; };
  } else if (cfg.ic == "taylor_green") {
    const double n = geom_param(cfg, "period", 2.0);
    cs.ic = [n](int comp, Vec2 x) {
      return comp == 0 ? taylor_green_u(x, n) : taylor_green_v(x, n);
    };
  } else if (cfg.ic == "mms_diffusion") {
    const double R = geom_param(cfg, "radius", 0.3);
    const Vec2 x0{geom_param(cfg, "center_x", 0.5), geom_param(cfg, "center_y", 0.5)};
    const double t0 = cfg.t0;
    cs.ic = [R, x0, t0](int, Vec2 x) { return mms_diffusion_value(x, t0, R, x0); };
  } else {
    throw ConfigError("build_case: unknown ic '" + cfg.ic + "'");
  }

  // ---- operators ----
  if (with_viscous) {
    log_debug("build_case: assembling viscous operator");
    cs.visc = assemble_operator(OpKind::Laplacian, *cs.grid, visc_u, opt);
  }
  if (cfg.project) {
    log_debug("build_case: building projection context");
    cs.proj = ProjectionContext::build(*cs.grid, pbc, opt);
  }
  return cs;
}

}  // namespace ebs
