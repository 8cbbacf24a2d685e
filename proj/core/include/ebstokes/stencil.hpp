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

#include <Eigen/Dense>

#include "ebstokes/grid.hpp"

namespace ebs {

/// Stencil synthesis target: a grid face, a cell, or the EB segment of an
/// irregular cell.
struct StencilTarget {
  enum class Kind : unsigned char { XFace, YFace, Cell, Eb };
  Kind kind;
  int i = 0, j = 0;  // face indices for faces, cell indices otherwise

  static StencilTarget xface(int fi, int fj) { return {Kind::XFace, fi, fj}; }
  static StencilTarget yface(int fi, int fj) { return {Kind::YFace, fi, fj}; }
  static StencilTarget cell(int i, int j) { return {Kind::Cell, i, j}; }
  static StencilTarget eb(int i, int j) { return {Kind::Eb, i, j}; }

  std::string describe() const;
};

struct Neighborhood {
  std::vector<int> cells;   // valid cell ids, deterministic order
  std::vector<int> bfaces;  // boundary registry ids
  int radius = 0;
  int equations() const { return static_cast<int>(cells.size() + bfaces.size()); }
};

/// All valid cells within Manhattan radius of the target (face distance is
/// 1 + min distance to either adjacent cell; cell targets include distance
/// 0). Boundary faces of every gathered cell are included when `with_bc`.
/// The radius grows until the equation count reaches 1.5x `np` (cap 6).
Neighborhood gather_neighborhood(const CutCellGrid& grid, const StencilTarget& target,
                                 bool with_bc, int radius, int np, int max_radius = 6);

/// Distance weights max(||x_cell - x_target||/h, 1)^-5 per cell row.
Eigen::VectorXd build_weights(const CutCellGrid& grid, const std::vector<int>& cells,
                              Vec2 target_center, double h);

enum class BcRowKind : unsigned char { Dirichlet, Neumann };

/// One synthesized stencil: weights on neighbor cell averages plus weights
/// on prescribed boundary-data integrals (the raw integrals of g over each
/// boundary face).
struct StencilRow {
  std::vector<int> cells;
  std::vector<double> cell_w;
  std::vector<int> bfaces;
  std::vector<double> bc_w;
};

struct WlsOptions {
  double sv_cutoff = 1e-10;   // relative singular-value cutoff
  double weight_pow = 5.0;
};

/// Weighted least-squares synthesis: fits a degree-`degree` polynomial about
/// `target_center` to the kappa-normalized cell-average rows (and unit-weight
/// BC rows), then applies the functional b (raw coefficients over the
/// canonical multi-index set) through the pseudo-inverse.
StencilRow solve_wls(const CutCellGrid& grid, const Neighborhood& nb,
                     const std::vector<BcRowKind>& bc_kinds, Vec2 target_center, int degree,
                     const Eigen::VectorXd& b, const StencilTarget& target,
                     const WlsOptions& opt = {});

/// Functional builders (raw coefficient vectors over the canonical ordering).
/// Moment sets must already be centered at the stencil's target center.

/// Flux of the gradient through a grid-aligned face with normal +e_axis:
/// b_q = q_axis m_f^{q - e_axis}.
Eigen::VectorXd grad_flux_functional_face(const MomentSet& face_m, int axis, int degree);

/// Flux of the gradient through an EB segment (outward normal):
/// b_q = sum_d q_d m_{nw,d}^{q - e_d}.
Eigen::VectorXd grad_flux_functional_eb(const MomentSet& nw0, const MomentSet& nw1, int degree);

/// Area-weighted value average over a face: b_q = m_f^q.
Eigen::VectorXd value_flux_functional(const MomentSet& face_m, int degree);

/// Cell-average gradient (times volume): b_q = q_d m_i^{q - e_d}.
Eigen::VectorXd cell_gradient_functional(const MomentSet& vol_m, int d, int degree);

/// Dirichlet/Neumann boundary rows for the WLS system (exposed for tests):
/// row entries over the canonical set plus the raw data integral the row's
/// weight multiplies.
Eigen::VectorXd dirichlet_row(const MomentSet& plain_m, int degree);
Eigen::VectorXd neumann_row(const MomentSet& nw0, const MomentSet& nw1, int degree);

}  // namespace ebs
