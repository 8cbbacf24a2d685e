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

#include "ebstokes/sparse.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <cmath>

#include "ebstokes/types.hpp"

namespace ebs {

namespace {

using ColMat = Eigen::SparseMatrix<double>;

std::pair<Vector, SolveReport> solve_direct(const SpMat& A, const Vector& b) {
  SolveReport rep;
  rep.method = "sparse_lu";
  ColMat Ac = A;
  Eigen::SparseLU<ColMat> lu;
  lu.analyzePattern(Ac);
  lu.factorize(Ac);
  if (lu.info() != Eigen::Success) {
    rep.converged = false;
    rep.residual = std::numeric_limits<double>::infinity();
    return {Vector::Zero(b.size()), rep};
  }
  Vector x = lu.solve(b);
  const double bn = b.norm();
  rep.residual = bn > 0 ? (A * x - b).norm() / bn : (A * x - b).norm();
  rep.converged = std::isfinite(rep.residual);
  rep.iterations = 1;
  rep.history = {rep.residual};
  return {x, rep};
}

// Restarted GMRES with right preconditioning; the history records true
// relative residual norms, non-increasing across iterations and restarts.
std::pair<Vector, SolveReport> solve_gmres_ilut(const SpMat& A, const Vector& b,
                                                const SolveOptions& opt) {
  SolveReport rep;
  rep.method = "gmres+ilut";
  const int n = static_cast<int>(b.size());
  const double bn = b.norm();
  Vector x = Vector::Zero(n);
  if (bn == 0) {
    rep.converged = true;
    rep.residual = 0;
    return {x, rep};
  }

  Eigen::IncompleteLUT<double> precond;
  precond.setFillfactor(opt.ilut_fill);
  precond.setDroptol(opt.ilut_drop);
  ColMat Ac = A;
  precond.compute(Ac);
  const bool have_precond = precond.info() == Eigen::Success;

  const int m = opt.restart;
  Eigen::MatrixXd V(n, m + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
  Vector cs(m), sn(m), beta(m + 1);

  int total_iters = 0;
  double rel = 1.0;
  while (total_iters < opt.max_iter) {
    Vector r = b - A * x;
    double rn = r.norm();
    rel = rn / bn;
    if (rep.history.empty()) rep.history.push_back(rel);
    if (rel <= opt.tol) break;
    V.col(0) = r / rn;
    beta.setZero();
    beta(0) = rn;
    int k = 0;
    for (; k < m && total_iters < opt.max_iter; ++k, ++total_iters) {
      Vector z = have_precond ? precond.solve(V.col(k)) : Vector(V.col(k));
      Vector w = A * z;
      for (int i = 0; i <= k; ++i) {
        H(i, k) = w.dot(V.col(i));
        w -= H(i, k) * V.col(i);
      }
      H(k + 1, k) = w.norm();
      if (H(k + 1, k) > 0) V.col(k + 1) = w / H(k + 1, k);
      // apply stored Givens rotations
      for (int i = 0; i < k; ++i) {
        const double t = cs(i) * H(i, k) + sn(i) * H(i + 1, k);
        H(i + 1, k) = -sn(i) * H(i, k) + cs(i) * H(i + 1, k);
        H(i, k) = t;
      }
      const double denom = std::hypot(H(k, k), H(k + 1, k));
      if (denom == 0) {
        ++k;
        break;
      }
      cs(k) = H(k, k) / denom;
      sn(k) = H(k + 1, k) / denom;
      H(k, k) = denom;
      H(k + 1, k) = 0;
      beta(k + 1) = -sn(k) * beta(k);
      beta(k) = cs(k) * beta(k);
      const double rk = std::abs(beta(k + 1)) / bn;
      rep.history.push_back(std::min(rk, rep.history.back()));
      if (rk <= opt.tol) {
        ++k;
        break;
      }
    }
    // solve the triangular system and update x
    Vector y = Vector::Zero(k);
    for (int i = k - 1; i >= 0; --i) {
      double s = beta(i);
      for (int j = i + 1; j < k; ++j) s -= H(i, j) * y(j);
      y(i) = s / H(i, i);
    }
    Vector dz = V.leftCols(k) * y;
    x += have_precond ? Vector(precond.solve(dz)) : dz;
    rel = (b - A * x).norm() / bn;
    if (rel <= opt.tol) break;
    if (k == 0) break;  // breakdown
  }
  rep.iterations = total_iters;
  rep.residual = (b - A * x).norm() / bn;
  rep.converged = rep.residual <= opt.tol * (1.0 + 1e-12);
  if (!rep.history.empty() && rep.residual < rep.history.back())
    rep.history.push_back(rep.residual);
  return {x, rep};
}

}  // namespace

std::pair<Vector, SolveReport> solve(const SpMat& A, const Vector& b, const SolveOptions& opt) {
  if (A.rows() != A.cols()) throw SolverError("solve: matrix must be square");
  if (A.rows() != b.size()) throw SolverError("solve: dimension mismatch");
  if (A.rows() < opt.direct_threshold) return solve_direct(A, b);
  return solve_gmres_ilut(A, b, opt);
}

std::pair<Vector, SolveReport> solve_robust(const SpMat& A, const Vector& b,
                                            const SolveOptions& opt) {
  auto [x, rep] = solve(A, b, opt);
  if (rep.converged) return {x, rep};
  auto [xd, repd] = solve_direct(A, b);
  repd.method = rep.method + "->" + repd.method;
  return {xd, repd};
}

std::pair<Vector, SolveReport> solve_neumann_singular(const SpMat& A, const Vector& b,
                                                      const Vector& volumes,
                                                      const SolveOptions& opt) {
  if (volumes.size() != b.size()) throw SolverError("solve_neumann_singular: volumes size");
  const double vtot = volumes.sum();
  const double mean = volumes.dot(b) / vtot;
  Vector bc = b - Vector::Constant(b.size(), mean);
  SpMat Ap = pin_row(A, 0);
  auto [x, rep] = solve(Ap, bc, opt);
  const double xmean = volumes.dot(x) / vtot;
  x -= Vector::Constant(x.size(), xmean);
  return {x, rep};
}

SpMat pin_row(const SpMat& A, int row) {
  SpMat Ap = A;
  for (SpMat::InnerIterator it(Ap, row); it; ++it) it.valueRef() = (it.col() == row) ? 1.0 : 0.0;
  Ap.prune(0.0);
  // ensure the diagonal exists on the pinned row
  if (Ap.coeff(row, row) == 0.0) Ap.coeffRef(row, row) = 1.0;
  Ap.makeCompressed();
  return Ap;
}

struct Factorized::Impl {
  ColMat Ac;
  Eigen::SparseLU<ColMat> lu;
};

Factorized::Factorized(const SpMat& A) : impl_(std::make_unique<Impl>()) {
  impl_->Ac = A;
  impl_->lu.analyzePattern(impl_->Ac);
  impl_->lu.factorize(impl_->Ac);
  if (impl_->lu.info() != Eigen::Success)
    throw SolverError("Factorized: sparse LU factorization failed");
}

Factorized::~Factorized() = default;
Factorized::Factorized(Factorized&&) noexcept = default;
Factorized& Factorized::operator=(Factorized&&) noexcept = default;

Vector Factorized::solve(const Vector& b) const { return impl_->lu.solve(b); }

NeumannSolver::NeumannSolver(const SpMat& A, Vector volumes)
    : volumes_(std::move(volumes)), vol_total_(volumes_.sum()) {
  lu_ = std::make_unique<Factorized>(pin_row(A, 0));
}

Vector NeumannSolver::solve(const Vector& b) const {
  const double mean = volumes_.dot(b) / vol_total_;
  Vector x = lu_->solve(b - Vector::Constant(b.size(), mean));
  const double xmean = volumes_.dot(x) / vol_total_;
  x -= Vector::Constant(x.size(), xmean);
  return x;
}

}  // namespace ebs
