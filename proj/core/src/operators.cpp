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

#include "ebstokes/operators.hpp"

#include <array>

#include "ebstokes/runtime.hpp"

namespace ebs {

namespace {

using Triplet = Eigen::Triplet<double>;

struct LocalTriplets {
  std::vector<Triplet> a[2];
  std::vector<Triplet> b;
};

// Cells whose radius-3 gather could touch an irregular/invalid cell or a
// domain edge; outside this band the closed-form Cartesian rows apply.
std::vector<char> near_boundary_mask(const CutCellGrid& g, int reach) {
  const int nx = g.nx(), ny = g.ny();
  std::vector<char> near(nx * ny, 0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      bool flag = (i < reach || j < reach || i >= nx - reach || j >= ny - reach);
      for (int dj = -reach; dj <= reach && !flag; ++dj) {
        for (int di = -reach + std::abs(dj); di <= reach - std::abs(dj); ++di) {
          const int ii = i + di, jj = j + dj;
          if (!g.in_bounds(ii, jj) || g.cls(ii, jj) != CellClass::Regular) {
            flag = true;
            break;
          }
        }
      }
      near[j * nx + i] = flag ? 1 : 0;
    }
  }
  return near;
}

struct Assembler {
  const CutCellGrid& g;
  const BcSpec& bc;
  const AssembleOptions& opt;
  std::vector<char> near;
  int np;

  Assembler(const CutCellGrid& grid, const BcSpec& bcs, const AssembleOptions& o)
      : g(grid), bc(bcs), opt(o), near(near_boundary_mask(grid, o.base_radius + 1)),
        np(multi_index_count(o.degree)) {}

  bool cell_near(int i, int j) const { return near[j * g.nx() + i] != 0; }

  // Boundary-row kinds for the gathered boundary faces; faces whose piece is
  // "None" contribute no row and are dropped from the neighborhood.
  std::vector<BcRowKind> bc_row_kinds(Neighborhood& nb) const {
    std::vector<int> keep;
    std::vector<BcRowKind> kinds;
    for (int bf : nb.bfaces) {
      const BcType t = bc.piece(g.boundary_faces()[bf].piece).type;
      if (t == BcType::None) continue;
      keep.push_back(bf);
      kinds.push_back(t == BcType::Dirichlet ? BcRowKind::Dirichlet : BcRowKind::Neumann);
    }
    nb.bfaces = std::move(keep);
    return kinds;
  }

  StencilRow wls_flux(const StencilTarget& target, Vec2 center, const Eigen::VectorXd& b,
                      bool with_bc, int radius) const {
    Neighborhood nb = gather_neighborhood(g, target, with_bc, radius, np, opt.max_radius);
    const std::vector<BcRowKind> kinds = bc_row_kinds(nb);
    return solve_wls(g, nb, kinds, center, opt.degree, b, target, opt.wls);
  }

  // Scatter a face stencil into the rows of the adjacent cells with the
  // divergence signs (+ for the low cell, - for the high cell), divided by
  // the cell volumes. comp selects the A block.
  void scatter_interior(const StencilRow& s, int lo_cell, int hi_cell, int comp,
                        LocalTriplets& out) const {
    const double vlo = g.volume(lo_cell), vhi = g.volume(hi_cell);
    for (size_t k = 0; k < s.cells.size(); ++k) {
      out.a[comp].emplace_back(lo_cell, s.cells[k], s.cell_w[k] / vlo);
      out.a[comp].emplace_back(hi_cell, s.cells[k], -s.cell_w[k] / vhi);
    }
    for (size_t k = 0; k < s.bfaces.size(); ++k) {
      out.b.emplace_back(lo_cell, s.bfaces[k], s.bc_w[k] / vlo);
      out.b.emplace_back(hi_cell, s.bfaces[k], -s.bc_w[k] / vhi);
    }
  }

  void scatter_boundary(const StencilRow& s, int cell, int comp, LocalTriplets& out) const {
    const double v = g.volume(cell);
    for (size_t k = 0; k < s.cells.size(); ++k)
      out.a[comp].emplace_back(cell, s.cells[k], s.cell_w[k] / v);
    for (size_t k = 0; k < s.bfaces.size(); ++k)
      out.b.emplace_back(cell, s.bfaces[k], s.bc_w[k] / v);
  }

  // ---- interior grid faces (both sides valid) ----

  // 4th-order closed-form 1D stencils across a face between cells c-1|c:
  // gradient flux (1,-15,15,-1)/(12h) * A_f, value flux (-1,7,7,-1)/12 * A_f.
  void closed_form_face(int axis, int fi, int fj, bool gradient, LocalTriplets& out) const {
    static constexpr std::array<double, 4> kGrad{1.0, -15.0, 15.0, -1.0};
    static constexpr std::array<double, 4> kVal{-1.0, 7.0, 7.0, -1.0};
    const double h = g.h();
    const double scale = gradient ? h / (12.0 * h) : h / 12.0;  // times A_f = h
    const auto& coef = gradient ? kGrad : kVal;
    const int lo = g.cell_id(axis == 0 ? fi - 1 : fi, axis == 0 ? fj : fj - 1);
    const int hi = g.cell_id(fi, fj);
    const double vlo = g.volume(lo), vhi = g.volume(hi);
    const int comp = gradient ? 0 : axis;
    for (int k = 0; k < 4; ++k) {
      const int off = k - 2;  // cells at offsets -2..1 relative to the high cell
      const int ci = axis == 0 ? fi + off : fi;
      const int cj = axis == 0 ? fj : fj + off;
      const int id = g.cell_id(ci, cj);
      const double w = coef[k] * scale;
      out.a[comp].emplace_back(lo, id, w / vlo);
      out.a[comp].emplace_back(hi, id, -w / vhi);
    }
  }

  bool face_closed_form_ok(int axis, int fi, int fj) const {
    const int li = axis == 0 ? fi - 1 : fi;
    const int lj = axis == 0 ? fj : fj - 1;
    return !cell_near(li, lj) && !cell_near(fi, fj);
  }

  void interior_face_flux(OpKind kind, int axis, int fi, int fj, LocalTriplets& out) const {
    const int lo = g.cell_id(axis == 0 ? fi - 1 : fi, axis == 0 ? fj : fj - 1);
    const int hi = g.cell_id(fi, fj);
    const bool gradient = (kind == OpKind::Laplacian);
    if (face_closed_form_ok(axis, fi, fj)) {
      closed_form_face(axis, fi, fj, gradient, out);
      return;
    }
    const StencilTarget target =
        axis == 0 ? StencilTarget::xface(fi, fj) : StencilTarget::yface(fi, fj);
    const Vec2 center = g.face_center(axis, fi, fj);
    const MomentSet& fm = g.face_moments(axis, fi, fj);
    if (gradient) {
      const Eigen::VectorXd b = grad_flux_functional_face(fm, axis, opt.degree);
      scatter_interior(wls_flux(target, center, b, /*with_bc=*/true, opt.base_radius), lo, hi,
                       0, out);
    } else {
      // divergence: only the normal component carries flux on a grid face;
      // interior reconstructions gather cells only (no per-component BC rows)
      const Eigen::VectorXd b = value_flux_functional(fm, opt.degree);
      scatter_interior(wls_flux(target, center, b, /*with_bc=*/false, opt.base_radius), lo, hi,
                       axis, out);
    }
  }

  // ---- boundary faces (registry) ----

  void boundary_face_flux(OpKind kind, int k, LocalTriplets& out) const {
    const BoundaryFace& bf = g.boundary_faces()[k];
    const BcCondition& cond = bc.piece(bf.piece);
    const int cell = bf.cell;
    const double vol = g.volume(cell);

    if (kind == OpKind::Laplacian) {
      if (cond.type == BcType::Neumann) {
        out.b.emplace_back(cell, k, 1.0 / vol);  // flux is the prescribed integral
        return;
      }
      if (cond.type == BcType::None)
        throw StencilError("assemble_operator: laplacian boundary piece has no condition");
      // Dirichlet: reconstruct the outward gradient flux through the face
      StencilTarget target = bf.axis < 0
                                 ? StencilTarget::eb(g.cell_ij(cell).first, g.cell_ij(cell).second)
                                 : (bf.axis == 0 ? StencilTarget::xface(bf.fi, bf.fj)
                                                 : StencilTarget::yface(bf.fi, bf.fj));
      const Vec2 center = g.bface_centroid(k);
      const MomentSet m0 = translate_moments(g.bface_nw_moments(k, 0), center);
      const MomentSet m1 = translate_moments(g.bface_nw_moments(k, 1), center);
      const Eigen::VectorXd b = grad_flux_functional_eb(m0, m1, opt.degree);
      scatter_boundary(wls_flux(target, center, b, /*with_bc=*/true, opt.base_radius), cell, 0,
                       out);
      return;
    }

    // divergence fluxes through boundary faces
    if (cond.type == BcType::Dirichlet) {
      out.b.emplace_back(cell, k, 1.0 / vol);  // prescribed u.n integral
      return;
    }
    if (cond.type == BcType::Neumann)
      throw StencilError("assemble_operator: divergence does not take Neumann pieces");
    // None (outflow): one-sided reconstruction, radius expanded immediately
    if (bf.axis < 0)
      throw StencilError("assemble_operator: EB piece cannot use 'none'");
    StencilTarget target = bf.axis == 0 ? StencilTarget::xface(bf.fi, bf.fj)
                                        : StencilTarget::yface(bf.fi, bf.fj);
    const MomentSet& fm = g.face_moments(bf.axis, bf.fi, bf.fj);
    const Eigen::VectorXd b = value_flux_functional(fm, opt.degree);
    StencilRow s = wls_flux(target, g.face_center(bf.axis, bf.fi, bf.fj), b, /*with_bc=*/false,
                            opt.base_radius + 1);
    const double sgn = bf.outward[bf.axis];
    for (double& wv : s.cell_w) wv *= sgn;
    for (double& wv : s.bc_w) wv *= sgn;
    scatter_boundary(s, cell, bf.axis, out);
  }

  // ---- cell-average gradient rows ----

  void gradient_row(int d, int id, LocalTriplets& out) const {
    const auto [i, j] = g.cell_ij(id);
    if (!cell_near(i, j)) {
      static constexpr std::array<double, 5> kCoef{1.0, -8.0, 0.0, 8.0, -1.0};
      const double s = 1.0 / (12.0 * g.h());
      for (int k = 0; k < 5; ++k) {
        if (kCoef[k] == 0.0) continue;
        const int off = k - 2;
        const int id2 = g.cell_id(d == 0 ? i + off : i, d == 0 ? j : j + off);
        out.a[0].emplace_back(id, id2, kCoef[k] * s);
      }
      return;
    }
    const StencilTarget target = StencilTarget::cell(i, j);
    const Vec2 center = g.cell_center(i, j);
    const Eigen::VectorXd b = cell_gradient_functional(g.vol_moments(id), d, opt.degree);
    scatter_boundary(wls_flux(target, center, b, /*with_bc=*/true, opt.base_radius), id, 0, out);
  }
};

}  // namespace

AffineOperator assemble_operator(OpKind kind, const CutCellGrid& grid, const BcSpec& bc,
                                 const AssembleOptions& opt) {
  Assembler as(grid, bc, opt);
  const int n = grid.n_cells();
  const int nbf = static_cast<int>(grid.boundary_faces().size());
  const int ncomp = (kind == OpKind::Divergence) ? 2 : 1;

  std::vector<LocalTriplets> chunks;

  if (kind == OpKind::GradientX || kind == OpKind::GradientY) {
    const int d = (kind == OpKind::GradientX) ? 0 : 1;
    chunks.resize(n);
    parallel_for(0, n, [&](int id) { as.gradient_row(d, id, chunks[id]); });
  } else {
    // face-wise assembly: fluxes are single-valued across the two rows
    struct FaceJob {
      int type;  // 0: interior x, 1: interior y, 2: boundary
      int a, b;
    };
    std::vector<FaceJob> jobs;
    for (int fj = 0; fj < grid.ny(); ++fj)
      for (int fi = 1; fi < grid.nx(); ++fi)
        if (grid.valid(fi - 1, fj) && grid.valid(fi, fj) &&
            grid.face_status(0, fi, fj) != FaceStatus::Covered)
          jobs.push_back({0, fi, fj});
    for (int fj = 1; fj < grid.ny(); ++fj)
      for (int fi = 0; fi < grid.nx(); ++fi)
        if (grid.valid(fi, fj - 1) && grid.valid(fi, fj) &&
            grid.face_status(1, fi, fj) != FaceStatus::Covered)
          jobs.push_back({1, fi, fj});
    for (int k = 0; k < nbf; ++k) jobs.push_back({2, k, 0});

    chunks.resize(jobs.size());
    parallel_for(0, static_cast<int>(jobs.size()), [&](int idx) {
      const FaceJob& job = jobs[idx];
      if (job.type == 2)
        as.boundary_face_flux(kind, job.a, chunks[idx]);
      else
        as.interior_face_flux(kind, job.type, job.a, job.b, chunks[idx]);
    });
  }

  std::vector<Triplet> ta[2], tb;
  for (const LocalTriplets& c : chunks) {
    for (int d = 0; d < 2; ++d) ta[d].insert(ta[d].end(), c.a[d].begin(), c.a[d].end());
    tb.insert(tb.end(), c.b.begin(), c.b.end());
  }

  AffineOperator op;
  op.kind = kind;
  op.bc = bc;
  op.grid = &grid;
  op.A.resize(ncomp);
  for (int d = 0; d < ncomp; ++d) {
    op.A[d] = SpMat(n, n);
    op.A[d].setFromTriplets(ta[d].begin(), ta[d].end());
    op.A[d].makeCompressed();
  }
  op.B = SpMat(n, nbf);
  op.B.setFromTriplets(tb.begin(), tb.end());
  op.B.makeCompressed();
  return op;
}

Vector boundary_data(const CutCellGrid& grid, const BcSpec& bc, double t) {
  const auto& bfs = grid.boundary_faces();
  Vector data = Vector::Zero(bfs.size());
  for (size_t k = 0; k < bfs.size(); ++k) {
    const BcCondition& cond = bc.piece(bfs[k].piece);
    if (cond.type == BcType::None || !cond.g) continue;
    const LineRule rule = grid.bface_rule(static_cast<int>(k));
    double acc = 0.0;
    for (size_t m = 0; m < rule.x.size(); ++m)
      acc += rule.w[m] * cond.g(rule.x[m], rule.n[m], t);
    data[k] = acc;
  }
  return data;
}

Vector AffineOperator::boundary_data(double t) const { return ebs::boundary_data(*grid, bc, t); }

Vector AffineOperator::apply(const Vector& u, double t) const {
  return apply_with_data(u, boundary_data(t));
}

Vector AffineOperator::apply(const Vector& u, const Vector& v, double t) const {
  return apply_with_data(u, v, boundary_data(t));
}

Vector AffineOperator::apply_with_data(const Vector& u, const Vector& g) const {
  if (kind == OpKind::Divergence)
    throw StencilError("AffineOperator::apply: divergence needs two components");
  return A[0] * u + B * g;
}

Vector AffineOperator::apply_with_data(const Vector& u, const Vector& v, const Vector& g) const {
  if (kind != OpKind::Divergence)
    throw StencilError("AffineOperator::apply: scalar operator takes one component");
  return A[0] * u + A[1] * v + B * g;
}

}  // namespace ebs
