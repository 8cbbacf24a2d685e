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

#include <Eigen/Sparse>
#include <memory>
#include <string>
#include <vector>

namespace ebs {

/// Compressed-row sparse matrix (sorted unique columns per row).
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;  // final relative residual ||Ax-b||/||b||
  bool converged = false;
  std::string method;
  std::vector<double> history;  // relative residual per iteration (Krylov path)
};

struct SolveOptions {
  double tol = 1e-12;        // relative residual target
  int max_iter = 4000;
  int restart = 60;          // GMRES restart length
  int direct_threshold = 40000;  // below: sparse direct factorization
  int ilut_fill = 30;
  double ilut_drop = 1e-5;
};

/// Solves A x = b. Below `direct_threshold` unknowns a sparse LU
/// factorization is used; above, restarted GMRES with an incomplete-LU
/// preconditioner. Non-convergence is reported (converged=false), not
/// thrown; the caller escalates.
std::pair<Vector, SolveReport> solve(const SpMat& A, const Vector& b, const SolveOptions& opt = {});

/// Solves the all-Neumann (nullspace = constants) system: b is first
/// projected onto the compatible subspace by removing its volume-weighted
/// mean; the returned x has zero volume-weighted mean.
std::pair<Vector, SolveReport> solve_neumann_singular(const SpMat& A, const Vector& b,
                                                      const Vector& volumes,
                                                      const SolveOptions& opt = {});

/// solve() with escalation: a failed Krylov solve falls back to a sparse
/// direct factorization regardless of size.
std::pair<Vector, SolveReport> solve_robust(const SpMat& A, const Vector& b,
                                            const SolveOptions& opt = {});

/// Cached sparse LU factorization for repeated solves with one matrix.
class Factorized {
 public:
  explicit Factorized(const SpMat& A);
  ~Factorized();
  Factorized(Factorized&&) noexcept;
  Factorized& operator=(Factorized&&) noexcept;
  Vector solve(const Vector& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Repeated singular-Neumann solves against one matrix: the compatibility
/// shift and mean normalization of solve_neumann_singular with a cached
/// factorization of the pinned system.
class NeumannSolver {
 public:
  NeumannSolver(const SpMat& A, Vector volumes);
  Vector solve(const Vector& b) const;

 private:
  Vector volumes_;
  double vol_total_;
  std::unique_ptr<Factorized> lu_;
};

/// Pins row `row` of A to identity (x[row] = 0); used to regularize
/// singular all-Neumann systems after the compatibility shift.
SpMat pin_row(const SpMat& A, int row);

}  // namespace ebs
