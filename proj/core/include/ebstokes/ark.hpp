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
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ebstokes/sparse.hpp"

namespace ebs {

/// Butcher coefficients of the six-stage, fourth-order, L-stable additive
/// implicit-explicit Runge-Kutta pair (ESDIRK implicit part: explicit first
/// stage, constant diagonal gamma on stages 2..6; both parts share b and c).
struct ArkTableau {
  int stages = 6;
  Eigen::MatrixXd a_ex, a_im;  // stages x stages, strictly/lower triangular
  Eigen::VectorXd b, c;
  double gamma = 0.0;

  static ArkTableau ark436l2sa();
};

struct TableauReport {
  bool valid = false;
  double max_row_sum_residual = 0.0;
  double max_order_residual = 0.0;
  double stiff_limit_mag = 0.0;  // |R_im(-1e6)|
  std::vector<std::pair<std::string, double>> order_residuals;
};

/// Row sums against c, additive order conditions through order 4, and the
/// L-stability proxy |R(-1e6)|. Any order residual above 1e-10 invalidates.
TableauReport validate_tableau(const ArkTableau& tab);

/// Stability function of the implicit part, R(z) = 1 + z b^T (I - z A)^-1 1.
double implicit_stability_function(const ArkTableau& tab, double z);

/// One step of u' = nu*(A u + bg(t)) + s(u, t) with the stiff affine part
/// implicit and the source explicit.
struct ImexProblem {
  const SpMat* A = nullptr;
  double nu = 1.0;
  /// Affine boundary term bg(t) = B g(t) (already multiplied through B).
  std::function<Vector(double)> boundary_term;
  /// Explicit source s(u, t).
  std::function<Vector(const Vector&, double)> source;
};

/// Caches the factorization of (I - dt*gamma*nu*A); reusable across stages
/// and steps while dt, nu, and A are unchanged.
class StageSolver {
 public:
  StageSolver(const SpMat& A, double nu, double dt, double gamma);
  Vector solve(const Vector& rhs) const;
  double dt() const { return dt_; }

 private:
  double dt_;
  std::unique_ptr<Factorized> lu_;
};

Vector ark_step(const Vector& u, double t, double dt, const ImexProblem& prob,
                const ArkTableau& tab, const StageSolver& solver);

}  // namespace ebs
