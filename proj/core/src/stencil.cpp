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

#include "ebstokes/stencil.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace ebs {

std::string StencilTarget::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::XFace: os << "x-face"; break;
    case Kind::YFace: os << "y-face"; break;
    case Kind::Cell: os << "cell"; break;
    case Kind::Eb: os << "eb-segment"; break;
  }
  os << " (" << i << "," << j << ")";
  return os.str();
}

namespace {

int manhattan(int i0, int j0, int i1, int j1) { return std::abs(i0 - i1) + std::abs(j0 - j1); }

// Distance from a target to cell (i,j) in the gather metric.
int target_distance(const StencilTarget& t, const CutCellGrid& g, int i, int j) {
  switch (t.kind) {
    case StencilTarget::Kind::Cell:
      return manhattan(t.i, t.j, i, j);
    case StencilTarget::Kind::Eb:
      return 1 + manhattan(t.i, t.j, i, j);
    case StencilTarget::Kind::XFace: {
      int d = INT32_MAX;
      if (g.valid(t.i - 1, t.j)) d = std::min(d, manhattan(t.i - 1, t.j, i, j));
      if (g.valid(t.i, t.j)) d = std::min(d, manhattan(t.i, t.j, i, j));
      return d == INT32_MAX ? d : 1 + d;
    }
    case StencilTarget::Kind::YFace: {
      int d = INT32_MAX;
      if (g.valid(t.i, t.j - 1)) d = std::min(d, manhattan(t.i, t.j - 1, i, j));
      if (g.valid(t.i, t.j)) d = std::min(d, manhattan(t.i, t.j, i, j));
      return d == INT32_MAX ? d : 1 + d;
    }
  }
  return INT32_MAX;
}

std::pair<int, int> target_anchor(const StencilTarget& t) {
  // a cell whose neighborhood window certainly covers the gather radius
  return {t.i, t.j};
}

}  // namespace

Neighborhood gather_neighborhood(const CutCellGrid& grid, const StencilTarget& target,
                                 bool with_bc, int radius, int np, int max_radius) {
  const auto [ai, aj] = target_anchor(target);
  for (int r = radius; r <= max_radius; ++r) {
    Neighborhood nb;
    nb.radius = r;
    for (int j = aj - r - 1; j <= aj + r + 1; ++j) {
      for (int i = ai - r - 1; i <= ai + r + 1; ++i) {
        if (!grid.valid(i, j)) continue;
        if (target_distance(target, grid, i, j) > r) continue;
        nb.cells.push_back(grid.cell_id(i, j));
      }
    }
    if (with_bc) {
      for (int c : nb.cells) {
        const auto& bfs = grid.cell_boundary_faces(c);
        nb.bfaces.insert(nb.bfaces.end(), bfs.begin(), bfs.end());
      }
    }
    if (nb.equations() >= 1.5 * np) return nb;
    if (r == max_radius) {
      // domain corners cannot reach the over-determination factor; any
      // comfortably-determined system is accepted at the cap, and the rank
      // check in solve_wls still guards unisolvence
      if (nb.equations() >= np + 2) return nb;
      std::ostringstream os;
      os << "gather_neighborhood: target " << target.describe() << " starving at radius "
         << max_radius << " (" << nb.equations() << " equations, need " << 1.5 * np << ")";
      throw StencilError(os.str());
    }
  }
  throw StencilError("gather_neighborhood: unreachable");
}

Eigen::VectorXd build_weights(const CutCellGrid& grid, const std::vector<int>& cells,
                              Vec2 target_center, double h) {
  Eigen::VectorXd w(cells.size());
  for (size_t k = 0; k < cells.size(); ++k) {
    const auto [i, j] = grid.cell_ij(cells[k]);
    const double dist = (grid.cell_center(i, j) - target_center).norm() / h;
    w[k] = std::pow(std::max(dist, 1.0), -5.0);
  }
  return w;
}

Eigen::VectorXd grad_flux_functional_face(const MomentSet& face_m, int axis, int degree) {
  const auto qs = multi_index_set(2, degree);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(qs.size());
  for (size_t m = 0; m < qs.size(); ++m) {
    const MultiIndex& q = qs[m];
    if (q[axis] > 0) b[m] = q[axis] * face_m.value(q.minus(axis));
  }
  return b;
}

Eigen::VectorXd grad_flux_functional_eb(const MomentSet& nw0, const MomentSet& nw1, int degree) {
  const auto qs = multi_index_set(2, degree);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(qs.size());
  for (size_t m = 0; m < qs.size(); ++m) {
    const MultiIndex& q = qs[m];
    double acc = 0.0;
    if (q.qx > 0) acc += q.qx * nw0.value(q.minus(0));
    if (q.qy > 0) acc += q.qy * nw1.value(q.minus(1));
    b[m] = acc;
  }
  return b;
}

Eigen::VectorXd value_flux_functional(const MomentSet& face_m, int degree) {
  const auto qs = multi_index_set(2, degree);
  Eigen::VectorXd b(qs.size());
  for (size_t m = 0; m < qs.size(); ++m) b[m] = face_m.value(qs[m]);
  return b;
}

Eigen::VectorXd cell_gradient_functional(const MomentSet& vol_m, int d, int degree) {
  const auto qs = multi_index_set(2, degree);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(qs.size());
  for (size_t m = 0; m < qs.size(); ++m) {
    const MultiIndex& q = qs[m];
    if (q[d] > 0) b[m] = q[d] * vol_m.value(q.minus(d));
  }
  return b;
}

Eigen::VectorXd dirichlet_row(const MomentSet& plain_m, int degree) {
  return value_flux_functional(plain_m, degree);
}

Eigen::VectorXd neumann_row(const MomentSet& nw0, const MomentSet& nw1, int degree) {
  return grad_flux_functional_eb(nw0, nw1, degree);
}

StencilRow solve_wls(const CutCellGrid& grid, const Neighborhood& nb,
                     const std::vector<BcRowKind>& bc_kinds, Vec2 target_center, int degree,
                     const Eigen::VectorXd& b, const StencilTarget& target,
                     const WlsOptions& opt) {
  const int np = multi_index_count(degree);
  const int ncell = static_cast<int>(nb.cells.size());
  const int nbc = static_cast<int>(nb.bfaces.size());
  const int nrows = ncell + nbc;
  if (nrows < np) {
    throw StencilError("solve_wls: " + target.describe() + ": " + std::to_string(nrows) +
                       " equations < " + std::to_string(np) + " coefficients");
  }
  const double h = grid.h();
  const auto qs = multi_index_set(2, degree);

  // Column scaling to grid units: column q is divided by h^|q| so the
  // singular-value cutoff acts on conditioning, not on the h^|q| decay.
  std::vector<double> colscale(qs.size());
  for (size_t m = 0; m < qs.size(); ++m) colscale[m] = std::pow(h, qs[m].total());

  Eigen::MatrixXd M(nrows, np);
  Eigen::VectorXd row_mult(nrows);  // weight (cells) or 1/eta (bc rows)

  const Eigen::VectorXd w = build_weights(grid, nb.cells, target_center, h);
  for (int r = 0; r < ncell; ++r) {
    const int id = nb.cells[r];
    const MomentSet mt = translate_moments(grid.vol_moments(id), target_center);
    const double inv_vol = 1.0 / grid.volume(id);
    for (int m = 0; m < np; ++m) M(r, m) = w[r] * mt.values[m] * inv_vol / colscale[m];
    row_mult[r] = w[r];
  }
  for (int k = 0; k < nbc; ++k) {
    const int bf = nb.bfaces[k];
    Eigen::VectorXd raw;
    if (bc_kinds[k] == BcRowKind::Dirichlet) {
      const MomentSet mp = translate_moments(grid.bface_plain_moments(bf), target_center);
      raw = dirichlet_row(mp, degree);
    } else {
      const MomentSet m0 = translate_moments(grid.bface_nw_moments(bf, 0), target_center);
      const MomentSet m1 = translate_moments(grid.bface_nw_moments(bf, 1), target_center);
      raw = neumann_row(m0, m1, degree);
    }
    for (int m = 0; m < np; ++m) raw[m] /= colscale[m];
    const double eta = raw.norm();
    if (eta == 0)
      throw StencilError("solve_wls: " + target.describe() + ": zero boundary row");
    // unit row weight: the row enters the system with unit norm, and the
    // stencil weight later applies to the raw data integral divided by eta
    for (int m = 0; m < np; ++m) M(ncell + k, m) = raw[m] / eta;
    row_mult[ncell + k] = 1.0 / eta;
  }

  // Column equilibration: the least-squares solution is invariant under
  // reparameterizing the coefficients, and unit-norm columns keep the
  // singular-value cutoff a genuine rank test.
  for (int m = 0; m < np; ++m) {
    const double cn = M.col(m).norm();
    if (cn > 0) {
      M.col(m) /= cn;
      colscale[m] *= cn;
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = opt.sv_cutoff * sv[0];
  int rank = 0;
  for (int m = 0; m < sv.size(); ++m)
    if (sv[m] > cutoff) ++rank;
  if (rank < np) {
    std::ostringstream os;
    os << "solve_wls: " << target.describe() << ": rank " << rank << " < " << np
       << " after singular-value cutoff (neighborhood insufficient)";
    throw StencilError(os.str());
  }

  // s^T = bhat^T V S^+ U^T, then fold in the row multipliers.
  Eigen::VectorXd bhat(np);
  for (int m = 0; m < np; ++m) bhat[m] = b[m] / colscale[m];
  Eigen::VectorXd tmp = svd.matrixV().transpose() * bhat;
  for (int m = 0; m < np; ++m) tmp[m] /= sv[m];
  Eigen::VectorXd s = svd.matrixU() * tmp;  // length nrows

  StencilRow out;
  out.cells = nb.cells;
  out.cell_w.resize(ncell);
  for (int r = 0; r < ncell; ++r) out.cell_w[r] = s[r] * row_mult[r];
  out.bfaces = nb.bfaces;
  out.bc_w.resize(nbc);
  for (int k = 0; k < nbc; ++k) out.bc_w[k] = s[ncell + k] * row_mult[ncell + k];
  return out;
}

}  // namespace ebs
