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

#include "ebstokes/sparse.hpp"
#include "ebstokes/stencil.hpp"

namespace ebs {

enum class BcType : unsigned char { Dirichlet, Neumann, None };

/// Boundary data supplier: g(x, n, t) where n is the outward unit normal at
/// x (constant on domain faces). Null means identically zero.
using BcFunc = std::function<double(Vec2 x, Vec2 n, double t)>;

struct BcCondition {
  BcType type = BcType::Dirichlet;
  BcFunc g;

  static BcCondition dirichlet(BcFunc f = nullptr) { return {BcType::Dirichlet, std::move(f)}; }
  static BcCondition neumann(BcFunc f = nullptr) { return {BcType::Neumann, std::move(f)}; }
  static BcCondition none() { return {BcType::None, nullptr}; }
};

/// Per-piece boundary conditions (EB plus the four domain sides). "None" is
/// only legal for the divergence operator (outflow).
struct BcSpec {
  BcCondition eb, xlo, xhi, ylo, yhi;

  const BcCondition& piece(BoundaryPiece p) const {
    switch (p) {
      case BoundaryPiece::Eb: return eb;
      case BoundaryPiece::Xlo: return xlo;
      case BoundaryPiece::Xhi: return xhi;
      case BoundaryPiece::Ylo: return ylo;
      default: return yhi;
    }
  }

  static BcSpec uniform(const BcCondition& c) { return {c, c, c, c, c}; }
};

enum class OpKind : unsigned char { Laplacian, GradientX, GradientY, Divergence };

/// Sparse affine operator Op(u, g) = A u + B g, where g is the vector of raw
/// boundary-data integrals over the grid's boundary faces. The divergence
/// holds one A block per velocity component.
struct AffineOperator {
  OpKind kind;
  std::vector<SpMat> A;
  SpMat B;
  BcSpec bc;
  const CutCellGrid* grid = nullptr;

  /// Raw data integrals per boundary face at time t: Dirichlet pieces get
  /// the integral of g dA, Neumann pieces the integral of the prescribed
  /// normal-derivative values, None pieces 0.
  Vector boundary_data(double t) const;

  Vector apply(const Vector& u, double t = 0.0) const;
  Vector apply(const Vector& u, const Vector& v, double t = 0.0) const;
  Vector apply_with_data(const Vector& u, const Vector& g) const;
  Vector apply_with_data(const Vector& u, const Vector& v, const Vector& g) const;
};

struct AssembleOptions {
  int degree = 4;        // WLS polynomial degree (15 coefficients)
  int base_radius = 3;   // gather radius; grows per the over-determination rule
  int max_radius = 6;
  WlsOptions wls;
};

AffineOperator assemble_operator(OpKind kind, const CutCellGrid& grid, const BcSpec& bc,
                                 const AssembleOptions& opt = {});

/// Raw data integrals per boundary face for an arbitrary spec (the operator
/// method delegates here). Lets one assembled structure serve several data
/// sets with identical piece types (velocity components).
Vector boundary_data(const CutCellGrid& grid, const BcSpec& bc, double t);

}  // namespace ebs
