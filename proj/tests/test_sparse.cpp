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

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "ebstokes/sparse.hpp"

using namespace ebs;

namespace {

constexpr double kPi = 3.14159265358979323846;

// 1D Dirichlet Poisson: tridiagonal {-1, 2, -1}/h^2
SpMat tridiag_poisson(int n, double h) {
  std::vector<Eigen::Triplet<double>> t;
  const double s = 1.0 / (h * h);
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2 * s);
    if (i > 0) t.emplace_back(i, i - 1, -s);
    if (i < n - 1) t.emplace_back(i, i + 1, -s);
  }
  SpMat A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

// 1D all-Neumann Laplacian (singular, nullspace = constants)
SpMat neumann_laplacian(int n, double h) {
  std::vector<Eigen::Triplet<double>> t;
  const double s = 1.0 / (h * h);
  for (int i = 0; i < n; ++i) {
    const double diag = (i == 0 || i == n - 1) ? 1.0 : 2.0;
    t.emplace_back(i, i, diag * s);
    if (i > 0) t.emplace_back(i, i - 1, -s);
    if (i < n - 1) t.emplace_back(i, i + 1, -s);
  }
  SpMat A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

}  // namespace

TEST_CASE("identity solve returns b immediately") {
  SpMat I(50, 50);
  I.setIdentity();
  Vector b = Vector::LinSpaced(50, -1.0, 1.0);
  SUBCASE("direct path") {
    auto [x, rep] = solve(I, b);
    CHECK(rep.converged);
    CHECK((x - b).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("krylov path converges in one iteration") {
    SolveOptions opt;
    opt.direct_threshold = 0;
    auto [x, rep] = solve(I, b, opt);
    CHECK(rep.converged);
    CHECK(rep.iterations <= 1);
    CHECK((x - b).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("1D Poisson matches a dense direct-solve oracle") {
  const int n = 127;
  const double h = 1.0 / (n + 1);
  const SpMat A = tridiag_poisson(n, h);
  Vector b(n);
  for (int i = 0; i < n; ++i) {
    const double x = (i + 1) * h;
    b[i] = kPi * kPi * std::sin(kPi * x);
  }
  // independent oracle: dense full-pivot LU
  Eigen::MatrixXd Ad(A);
  const Vector want = Eigen::FullPivLU<Eigen::MatrixXd>(Ad).solve(b);

  SUBCASE("direct path") {
    auto [x, rep] = solve(A, b);
    CHECK(rep.converged);
    CHECK((x - want).cwiseAbs().maxCoeff() <= 1e-12 * want.cwiseAbs().maxCoeff());
  }
  SUBCASE("krylov path with residual history") {
    SolveOptions opt;
    opt.direct_threshold = 0;
    auto [x, rep] = solve(A, b, opt);
    CHECK(rep.converged);
    CHECK((x - want).cwiseAbs().maxCoeff() <= 1e-9 * want.cwiseAbs().maxCoeff());
    REQUIRE(rep.history.size() >= 2);
    for (size_t k = 1; k < rep.history.size(); ++k)
      CHECK(rep.history[k] <= rep.history[k - 1] + 1e-15);
  }
}

TEST_CASE("singular all-Neumann matrix is flagged, not silently solved") {
  const SpMat A = neumann_laplacian(64, 1.0 / 64);
  Vector b = Vector::Ones(64);  // incompatible rhs
  auto [x, rep] = solve(A, b);
  CHECK(!rep.converged);
}

TEST_CASE("solve_neumann_singular") {
  const int n = 64;
  const double h = 1.0 / n;
  const SpMat A = neumann_laplacian(n, h);
  const Vector vols = Vector::Constant(n, h);

  SUBCASE("pure incompatibility solves to zero") {
    auto [x, rep] = solve_neumann_singular(A, Vector::Constant(n, 3.0), vols);
    CHECK(rep.converged);
    CHECK(x.cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("mean-zero rhs is unchanged by the compatibility projection") {
    Vector b(n);
    for (int i = 0; i < n; ++i) b[i] = std::cos(2 * kPi * (i + 0.5) / n);
    const double mean = vols.dot(b) / vols.sum();
    CHECK(std::abs(mean) <= 1e-14);
    auto [x, rep] = solve_neumann_singular(A, b, vols);
    CHECK(rep.converged);
    // invariance under adding a constant to b
    auto [x2, rep2] = solve_neumann_singular(A, b + Vector::Constant(n, 7.5), vols);
    CHECK(rep2.converged);
    CHECK((x - x2).cwiseAbs().maxCoeff() <= 1e-10);
    // zero volume-weighted mean of the result
    CHECK(std::abs(vols.dot(x)) / vols.sum() <= 1e-12);
  }
  SUBCASE("matches a dense oracle up to a constant") {
    Vector b(n);
    for (int i = 0; i < n; ++i) b[i] = std::sin(2 * kPi * (i + 0.5) / n);
    b -= Vector::Constant(n, b.mean());
    auto [x, rep] = solve_neumann_singular(A, b, vols);
    CHECK(rep.converged);
    // dense oracle on the pinned system
    Eigen::MatrixXd Ad(A);
    Ad.row(0).setZero();
    Ad(0, 0) = 1.0;
    Vector want = Eigen::FullPivLU<Eigen::MatrixXd>(Ad).solve(b);
    want -= Vector::Constant(n, vols.dot(want) / vols.sum());
    CHECK((x - want).cwiseAbs().maxCoeff() <= 1e-9 * (1 + want.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("NeumannSolver repeats the single-shot result") {
  const int n = 48;
  const SpMat A = neumann_laplacian(n, 1.0 / n);
  const Vector vols = Vector::Constant(n, 1.0 / n);
  Vector b(n);
  for (int i = 0; i < n; ++i) b[i] = std::sin(2 * kPi * (i + 0.5) / n);
  auto [x1, rep] = solve_neumann_singular(A, b, vols);
  NeumannSolver solver(A, vols);
  const Vector x2 = solver.solve(b);
  CHECK(rep.converged);
  CHECK((x1 - x2).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("solve_robust escalates a failed Krylov solve") {
  // an indefinite permutation-like matrix ILUT+GMRES may struggle with
  const int n = 60;
  std::vector<Eigen::Triplet<double>> t;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  for (int i = 0; i < n; ++i) t.emplace_back(i, (i + 17) % n, dist(rng));
  SpMat A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  Vector b = Vector::Ones(n);
  SolveOptions opt;
  opt.direct_threshold = 0;
  opt.max_iter = 3;  // starve the Krylov solver
  auto [x, rep] = solve_robust(A, b, opt);
  CHECK(rep.converged);
  CHECK((A * x - b).cwiseAbs().maxCoeff() <= 1e-10);
}
