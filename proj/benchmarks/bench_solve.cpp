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

#include <benchmark/benchmark.h>

#include "ebstokes/sparse.hpp"

namespace {

// 2D 5-point Poisson matrix on an n x n grid
ebs::SpMat poisson2d(int n) {
  std::vector<Eigen::Triplet<double>> t;
  auto id = [n](int i, int j) { return j * n + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      t.emplace_back(id(i, j), id(i, j), 4.0);
      if (i > 0) t.emplace_back(id(i, j), id(i - 1, j), -1.0);
      if (i < n - 1) t.emplace_back(id(i, j), id(i + 1, j), -1.0);
      if (j > 0) t.emplace_back(id(i, j), id(i, j - 1), -1.0);
      if (j < n - 1) t.emplace_back(id(i, j), id(i, j + 1), -1.0);
    }
  ebs::SpMat A(n * n, n * n);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

}  // namespace

static void BM_SparseSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ebs::SpMat A = poisson2d(n);
  const ebs::Vector b = ebs::Vector::Ones(n * n);
  for (auto _ : state) {
    auto [x, rep] = ebs::solve(A, b);
    benchmark::DoNotOptimize(x.sum());
  }
}
BENCHMARK(BM_SparseSolve)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
