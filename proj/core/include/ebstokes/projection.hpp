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
#include <optional>

#include "ebstokes/operators.hpp"
#include "ebstokes/verification.hpp"

namespace ebs {

enum class PieceRole : unsigned char { Wall, Inflow, Outflow, Unused };

/// Boundary roles for the projection operators (the EB is always a wall in
/// the cases here, but any piece may be tagged).
struct ProjectionBc {
  PieceRole eb = PieceRole::Wall;
  PieceRole xlo = PieceRole::Wall, xhi = PieceRole::Wall;
  PieceRole ylo = PieceRole::Wall, yhi = PieceRole::Wall;
  /// Inflow velocity components (x, t) -> value; zero when null.
  std::function<double(Vec2, double)> inflow_u, inflow_v;

  PieceRole role(BoundaryPiece p) const {
    switch (p) {
      case BoundaryPiece::Eb: return eb;
      case BoundaryPiece::Xlo: return xlo;
      case BoundaryPiece::Xhi: return xhi;
      case BoundaryPiece::Ylo: return ylo;
      default: return yhi;
    }
  }
  bool has_outflow() const {
    return eb == PieceRole::Outflow || xlo == PieceRole::Outflow ||
           xhi == PieceRole::Outflow || ylo == PieceRole::Outflow || yhi == PieceRole::Outflow;
  }
};

/// Immutable operator bundle for the approximate projection
/// P(w) = (I - G L^-1 D) w with the open-boundary variant.
struct ProjectionContext {
  const CutCellGrid* grid = nullptr;
  AffineOperator L_phi;  // homogeneous-Neumann walls/EB/inflow, Dirichlet 0 at outflow
  AffineOperator Gx, Gy; // cell gradient, same BCs as L_phi
  AffineOperator Dv;     // face divergence: inflow velocity, no-flow walls, outflow none
  std::optional<AffineOperator> L_psi;  // potential flow; built only with open boundaries
  bool has_outflow = false;
  Vector volumes;

  // cached solvers (direct, built below the solver size threshold)
  std::shared_ptr<NeumannSolver> phi_neumann;
  std::shared_ptr<Factorized> phi_lu;
  std::shared_ptr<Factorized> psi_lu;
  SolveOptions solve_opt;

  static ProjectionContext build(const CutCellGrid& grid, const ProjectionBc& bc,
                                 const AssembleOptions& opt = {}, SolveOptions sopt = {});
};

struct ProjectionResult {
  Vector u, v;        // projected velocity
  Vector phi;         // correction potential
  Vector psi;         // potential-flow component (zero when no open boundaries)
  NormTriple div_before, div_after;
  NormTriple grad_correction;  // norms of |G phi| per cell
  SolveReport phi_report, psi_report;
};

ProjectionResult project(const Vector& wu, const Vector& wv, const ProjectionContext& ctx,
                         double t = 0.0);

/// Unweighted norms of the discrete divergence of (u, v).
NormTriple divergence_norms(const Vector& u, const Vector& v, const ProjectionContext& ctx,
                            double t = 0.0);

}  // namespace ebs
