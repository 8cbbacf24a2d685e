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

#include "ebstokes/grid.hpp"

static void BM_GridBuildCircle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ebs::ImplicitGeometry geom = ebs::case_geometry("circle");
  for (auto _ : state) {
    ebs::CutCellGrid g = ebs::CutCellGrid::build(geom, n, n, 1.0 / n, {0, 0});
    benchmark::DoNotOptimize(g.n_cells());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_GridBuildCircle)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_CellCutRules(benchmark::State& state) {
  const ebs::ImplicitGeometry geom = ebs::case_geometry("circle");
  const double h = 1.0 / 64;
  const ebs::Box cell{{0.5 + 0.3 - h / 2, 0.5 - h / 2}, {0.5 + 0.3 + h / 2, 0.5 + h / 2}};
  for (auto _ : state) {
    ebs::CellCutRules r = ebs::build_cell_rules(geom, cell);
    benchmark::DoNotOptimize(r.volume.measure());
  }
}
BENCHMARK(BM_CellCutRules)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
