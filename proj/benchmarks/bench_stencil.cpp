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

#include "ebstokes/operators.hpp"

static void BM_AssembleLaplacianCircle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ebs::CutCellGrid grid =
      ebs::CutCellGrid::build(ebs::case_geometry("circle"), n, n, 1.0 / n, {0, 0});
  const ebs::BcSpec bc = ebs::BcSpec::uniform(ebs::BcCondition::dirichlet());
  for (auto _ : state) {
    ebs::AffineOperator op = ebs::assemble_operator(ebs::OpKind::Laplacian, grid, bc);
    benchmark::DoNotOptimize(op.A[0].nonZeros());
  }
}
BENCHMARK(BM_AssembleLaplacianCircle)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
