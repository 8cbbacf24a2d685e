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

#include "ebstokes/projection.hpp"

#include "ebstokes/runtime.hpp"

namespace ebs {

namespace {

BcSpec phi_spec(const ProjectionBc& bc) {
  auto cond = [&](PieceRole r) {
    return r == PieceRole::Outflow ? BcCondition::dirichlet() : BcCondition::neumann();
  };
  return {cond(bc.eb), cond(bc.xlo), cond(bc.xhi), cond(bc.ylo), cond(bc.yhi)};
}

BcSpec div_spec(const ProjectionBc& bc) {
  // prescribed u.n integrals: inflow data, no-flow elsewhere, outflow free
  auto normal_flux = [&](PieceRole r) -> BcCondition {
    switch (r) {
      case PieceRole::Outflow: return BcCondition::none();
      case PieceRole::Inflow: {
        auto fu = bc.inflow_u;
        auto fv = bc.inflow_v;
        return BcCondition::dirichlet([fu, fv](Vec2 x, Vec2 n, double t) {
          double un = 0.0;
          if (fu) un += fu(x, t) * n.x;
          if (fv) un += fv(x, t) * n.y;
          return un;
        });
      }
      default: return BcCondition::dirichlet();  // wall: u.n = 0
    }
  };
  return {normal_flux(bc.eb), normal_flux(bc.xlo), normal_flux(bc.xhi), normal_flux(bc.ylo),
          normal_flux(bc.yhi)};
}

BcSpec psi_spec(const ProjectionBc& bc) {
  // grad(psi).n matches the boundary velocity; Dirichlet 0 at outflow
  auto cond = [&](PieceRole r) -> BcCondition {
    switch (r) {
      case PieceRole::Outflow: return BcCondition::dirichlet();
      case PieceRole::Inflow: {
        auto fu = bc.inflow_u;
        auto fv = bc.inflow_v;
        return BcCondition::neumann([fu, fv](Vec2 x, Vec2 n, double t) {
          double un = 0.0;
          if (fu) un += fu(x, t) * n.x;
          if (fv) un += fv(x, t) * n.y;
          return un;
        });
      }
      default: return BcCondition::neumann();  // wall: grad(psi).n = 0
    }
  };
  return {cond(bc.eb), cond(bc.xlo), cond(bc.xhi), cond(bc.ylo), cond(bc.yhi)};
}

}  // namespace

ProjectionContext ProjectionContext::build(const CutCellGrid& grid, const ProjectionBc& bc,
                                           const AssembleOptions& opt, SolveOptions sopt) {
  ProjectionContext ctx;
  ctx.grid = &grid;
  ctx.has_outflow = bc.has_outflow();
  ctx.solve_opt = sopt;

  const BcSpec phi_bc = phi_spec(bc);
  log_debug("projection: assembling L_phi");
  ctx.L_phi = assemble_operator(OpKind::Laplacian, grid, phi_bc, opt);
  log_debug("projection: assembling gradient");
  ctx.Gx = assemble_operator(OpKind::GradientX, grid, phi_bc, opt);
  ctx.Gy = assemble_operator(OpKind::GradientY, grid, phi_bc, opt);
  log_debug("projection: assembling divergence");
  ctx.Dv = assemble_operator(OpKind::Divergence, grid, div_spec(bc), opt);

  ctx.volumes.resize(grid.n_cells());
  for (int id = 0; id < grid.n_cells(); ++id) ctx.volumes[id] = grid.volume(id);

  const bool cache_direct = grid.n_cells() < sopt.direct_threshold;
  if (ctx.has_outflow) {
    log_debug("projection: assembling L_psi");
    ctx.L_psi = assemble_operator(OpKind::Laplacian, grid, psi_spec(bc), opt);
    if (cache_direct) {
      ctx.phi_lu = std::make_shared<Factorized>(ctx.L_phi.A[0]);
      ctx.psi_lu = std::make_shared<Factorized>(ctx.L_psi->A[0]);
    }
  } else if (cache_direct) {
    ctx.phi_neumann = std::make_shared<NeumannSolver>(ctx.L_phi.A[0], ctx.volumes);
  }
  return ctx;
}

ProjectionResult project(const Vector& wu, const Vector& wv, const ProjectionContext& ctx,
                         double t) {
  ProjectionResult res;
  const Vector gdata = ctx.Dv.boundary_data(t);
  const Vector rhs = ctx.Dv.apply_with_data(wu, wv, gdata);
  res.div_before = norms_of(rhs);

  const auto n = wu.size();
  res.psi = Vector::Zero(n);

  if (ctx.has_outflow) {
    // psi: L psi = 0 with grad(psi).n matching the boundary velocity
    const Vector psi_rhs = -(ctx.L_psi->B * ctx.L_psi->boundary_data(t));
    if (ctx.psi_lu) {
      res.psi = ctx.psi_lu->solve(psi_rhs);
      res.psi_report.converged = true;
      res.psi_report.method = "sparse_lu(cached)";
    } else {
      auto [x, rep] = solve_robust(ctx.L_psi->A[0], psi_rhs, ctx.solve_opt);
      res.psi = x;
      res.psi_report = rep;
    }
    // phi: all data homogeneous, so B g vanishes
    if (ctx.phi_lu) {
      res.phi = ctx.phi_lu->solve(rhs);
      res.phi_report.converged = true;
      res.phi_report.method = "sparse_lu(cached)";
    } else {
      auto [x, rep] = solve_robust(ctx.L_phi.A[0], rhs, ctx.solve_opt);
      res.phi = x;
      res.phi_report = rep;
    }
  } else {
    if (ctx.phi_neumann) {
      res.phi = ctx.phi_neumann->solve(rhs);
      res.phi_report.converged = true;
      res.phi_report.method = "neumann_lu(cached)";
    } else {
      auto [x, rep] = solve_neumann_singular(ctx.L_phi.A[0], rhs, ctx.volumes, ctx.solve_opt);
      if (!rep.converged) {
        NeumannSolver ns(ctx.L_phi.A[0], ctx.volumes);
        x = ns.solve(rhs);
        rep.converged = true;
        rep.method += "+lu_escalation";
      }
      res.phi = x;
      res.phi_report = rep;
    }
  }

  const Vector zero_data = Vector::Zero(ctx.Gx.B.cols());
  const Vector gx = ctx.Gx.apply_with_data(res.phi, zero_data);
  const Vector gy = ctx.Gy.apply_with_data(res.phi, zero_data);
  res.u = wu - gx;
  res.v = wv - gy;

  Vector gmag(n);
  for (Eigen::Index k = 0; k < n; ++k) gmag[k] = std::hypot(gx[k], gy[k]);
  res.grad_correction = norms_of(gmag);

  res.div_after = norms_of(ctx.Dv.apply_with_data(res.u, res.v, gdata));
  return res;
}

NormTriple divergence_norms(const Vector& u, const Vector& v, const ProjectionContext& ctx,
                            double t) {
  return norms_of(ctx.Dv.apply(u, v, t));
}

}  // namespace ebs
