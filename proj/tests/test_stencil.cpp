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

#include <cmath>
#include <random>

#include "ebstokes/stencil.hpp"

using namespace ebs;

namespace {

ImplicitGeometry all_fluid() {
  ImplicitGeometry g;
  g.levelset = [](Vec2) { return -1.0; };
  g.gradient = [](Vec2) { return Vec2{0, 0}; };
  return g;
}

// Exact cell averages of the polynomial with coefficients c about `center`.
Eigen::VectorXd poly_cell_averages(const CutCellGrid& g, const Eigen::VectorXd& c, Vec2 center,
                                   int degree) {
  Eigen::VectorXd u(g.n_cells());
  const auto qs = multi_index_set(2, degree);
  for (int id = 0; id < g.n_cells(); ++id) {
    const MomentSet m = translate_moments(g.vol_moments(id), center);
    double acc = 0;
    for (size_t k = 0; k < qs.size(); ++k) acc += c[k] * m.value(qs[k]);
    u[id] = acc / g.volume(id);
  }
  return u;
}

}  // namespace

TEST_CASE("gather: paper neighborhood counts on a regular interior") {
  const double h = 1.0 / 16;
  const CutCellGrid g = CutCellGrid::build(all_fluid(), 16, 16, h, {0, 0});
  // np = 10 (the degree-3 coefficient count) keeps radius 3 satisfied
  SUBCASE("face target at radius 3 gathers 18 cells") {
    const Neighborhood nb = gather_neighborhood(g, StencilTarget::xface(8, 8), false, 3, 10);
    CHECK(nb.cells.size() == 18);
    CHECK(nb.radius == 3);
  }
  SUBCASE("cell target at radius 3 gathers 25 cells") {
    const Neighborhood nb = gather_neighborhood(g, StencilTarget::cell(8, 8), false, 3, 10);
    CHECK(nb.cells.size() == 25);
  }
  SUBCASE("eb-style target at radius 3 gathers at most 13 cells") {
    // np = 8 keeps the over-determination rule satisfied at radius 3
    const Neighborhood nb = gather_neighborhood(g, StencilTarget::eb(8, 8), false, 3, 8);
    CHECK(nb.cells.size() == 13);
    CHECK(nb.radius == 3);
  }
  SUBCASE("under-determined gather grows the radius") {
    const Neighborhood nb = gather_neighborhood(g, StencilTarget::xface(8, 8), false, 3, 15);
    CHECK(nb.radius == 4);
    CHECK(nb.cells.size() == 32);
    CHECK(nb.equations() >= 1.5 * 15);
  }
}

TEST_CASE("gather: irregular geometry includes boundary faces; counts recheck") {
  const double h = 1.0 / 16;
  const CutCellGrid g = CutCellGrid::build(case_geometry("circle"), 16, 16, h, {0, 0});
  int irr = -1;
  for (int id = 0; id < g.n_cells(); ++id)
    if (g.is_irregular(id)) {
      irr = id;
      break;
    }
  REQUIRE(irr >= 0);
  const auto [i, j] = g.cell_ij(irr);
  const Neighborhood nb = gather_neighborhood(g, StencilTarget::eb(i, j), true, 3, 10);
  CHECK(!nb.bfaces.empty());
  for (int c : nb.cells) {
    const auto [ci, cj] = g.cell_ij(c);
    CHECK(std::abs(ci - i) + std::abs(cj - j) <= nb.radius - 1);
  }
  // brute recount of the gathered cells at the returned radius
  int count = 0;
  for (int cj = 0; cj < 16; ++cj)
    for (int ci = 0; ci < 16; ++ci)
      if (g.valid(ci, cj) && 1 + std::abs(ci - i) + std::abs(cj - j) <= nb.radius) ++count;
  CHECK(static_cast<int>(nb.cells.size()) == count);
}

TEST_CASE("build_weights: clamp and inverse-fifth-power decay") {
  const double h = 1.0 / 16;
  const CutCellGrid g = CutCellGrid::build(all_fluid(), 16, 16, h, {0, 0});
  const Vec2 target = g.cell_center(8, 8);
  const std::vector<int> cells = {g.cell_id(8, 8), g.cell_id(10, 8), g.cell_id(11, 8)};
  // distances 0, 2h, 3h
  const Eigen::VectorXd w = build_weights(g, cells, target, h);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(std::pow(2.0, -5.0)));  // 0.03125
  CHECK(w[2] == doctest::Approx(std::pow(3.0, -5.0)));  // ~4.1152e-3
  // clamp: distance 0.5h also gives 1
  const Eigen::VectorXd w2 =
      build_weights(g, {g.cell_id(8, 8)}, {target.x + h / 2, target.y}, h);
  CHECK(w2[0] == doctest::Approx(1.0));
}

TEST_CASE("functionals: closed-form values") {
  const double h = 0.125;
  const MomentSet face = segment_moments({0, -h / 2}, {0, h / 2}, {0, 0}, 5);
  SUBCASE("gradient flux of a constant vanishes") {
    const Eigen::VectorXd b = grad_flux_functional_face(face, 0, 4);
    CHECK(b[0] == 0.0);  // q = (0,0)
  }
  SUBCASE("x-face, q=(1,0): the face area") {
    const Eigen::VectorXd b = grad_flux_functional_face(face, 0, 4);
    CHECK(b[multi_index_position({1, 0})] == doctest::Approx(h));
  }
  SUBCASE("value flux: q=(0,0) gives the area") {
    const Eigen::VectorXd b = value_flux_functional(face, 4);
    CHECK(b[0] == doctest::Approx(h));
  }
  SUBCASE("cell gradient: q=(0,0) vanishes, q=(1,0) gives the volume") {
    const Box cell{{-h / 2, -h / 2}, {h / 2, h / 2}};
    const MomentSet vol = box_moments(cell, {0, 0}, 5);
    const Eigen::VectorXd b = cell_gradient_functional(vol, 0, 4);
    CHECK(b[0] == 0.0);
    CHECK(b[multi_index_position({1, 0})] == doctest::Approx(h * h));
    // q=(2,0): 2 m^(1,0) = 0 for a centered cell
    CHECK(b[multi_index_position({2, 0})] == doctest::Approx(0.0));
  }
}

TEST_CASE("EB viscous flux functional mixes both normal components") {
  // planar EB with normal (1,0): nw0 carries the moments, nw1 vanishes
  const ImplicitGeometry geom = case_geometry("half_space", {{"point_x", 0.5}});
  const Box cell{{0.4375, 0.5}, {0.5625, 0.625}};
  const CellCutRules rules = build_cell_rules(geom, cell);
  const double L = 0.125;  // wetted length
  const MomentSet nw0 = normal_weighted_moments(rules.eb, cell.center(), 5, 0);
  const MomentSet nw1 = normal_weighted_moments(rules.eb, cell.center(), 5, 1);
  CHECK(nw0.m0() == doctest::Approx(L).epsilon(1e-12));
  CHECK(nw1.m0() == doctest::Approx(0.0));
  // q=(1,1): b = 1*nw0^{(0,1)} + 1*nw1^{(1,0)}
  const Eigen::VectorXd b = grad_flux_functional_eb(nw0, nw1, 4);
  CHECK(b[multi_index_position({1, 1})] ==
        doctest::Approx(nw0.value({0, 1}) + nw1.value({1, 0})));
}

TEST_CASE("solve_wls: polynomial exactness on an all-regular face stencil") {
  const double h = 1.0 / 16;
  const CutCellGrid g = CutCellGrid::build(all_fluid(), 16, 16, h, {0, 0});
  const StencilTarget target = StencilTarget::xface(8, 8);
  const Vec2 center = g.face_center(0, 8, 8);
  const Neighborhood nb = gather_neighborhood(g, target, false, 3, 15);

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int np = multi_index_count(4);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::VectorXd c(np);
    for (int k = 0; k < np; ++k) c[k] = dist(rng);
    const Eigen::VectorXd u = poly_cell_averages(g, c, center, 4);

    const MomentSet& fm = g.face_moments(0, 8, 8);
    const Eigen::VectorXd b = grad_flux_functional_face(fm, 0, 4);
    const StencilRow s = solve_wls(g, nb, {}, center, 4, b, target);
    double got = 0, scale = 0;
    for (size_t k = 0; k < s.cells.size(); ++k) {
      got += s.cell_w[k] * u[s.cells[k]];
      scale += std::abs(s.cell_w[k] * u[s.cells[k]]);
    }
    const double want = b.dot(c);
    CHECK(got == doctest::Approx(want).epsilon(1e-9).scale(scale + h));
  }
}

TEST_CASE("solve_wls: exactness with Dirichlet rows near the EB") {
  const double h = 1.0 / 16;
  const CutCellGrid g = CutCellGrid::build(case_geometry("circle"), 16, 16, h, {0, 0});
  int irr = -1;
  for (int id = 0; id < g.n_cells(); ++id)
    if (g.is_irregular(id) && g.kappa_of(id) > 0.3) irr = id;
  REQUIRE(irr >= 0);
  const auto [i, j] = g.cell_ij(irr);
  const StencilTarget target = StencilTarget::eb(i, j);
  const Vec2 center = g.eb(irr).centroid;
  Neighborhood nb = gather_neighborhood(g, target, true, 3, 15);
  const std::vector<BcRowKind> kinds(nb.bfaces.size(), BcRowKind::Dirichlet);

  const int np = multi_index_count(4);
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd c(np);
  for (int k = 0; k < np; ++k) c[k] = dist(rng);
  const Eigen::VectorXd u = poly_cell_averages(g, c, center, 4);

  const MomentSet nw0 = translate_moments(g.eb(irr).nw[0], center);
  const MomentSet nw1 = translate_moments(g.eb(irr).nw[1], center);
  const Eigen::VectorXd b = grad_flux_functional_eb(nw0, nw1, 4);
  const StencilRow s = solve_wls(g, nb, kinds, center, 4, b, target);

  const auto qs = multi_index_set(2, 4);
  double got = 0, scale = 0;
  for (size_t k = 0; k < s.cells.size(); ++k) {
    got += s.cell_w[k] * u[s.cells[k]];
    scale += std::abs(s.cell_w[k] * u[s.cells[k]]);
  }
  for (size_t k = 0; k < s.bfaces.size(); ++k) {
    const MomentSet mp = translate_moments(g.bface_plain_moments(s.bfaces[k]), center);
    double data = 0;
    for (size_t m = 0; m < qs.size(); ++m) data += c[m] * mp.value(qs[m]);
    got += s.bc_w[k] * data;
    scale += std::abs(s.bc_w[k] * data);
  }
  const double want = b.dot(c);
  CHECK(got == doctest::Approx(want).epsilon(1e-9).scale(scale + h));
}

TEST_CASE("solve_wls: constant field reproduction") {
  const double h = 1.0 / 16;
  const CutCellGrid g = CutCellGrid::build(all_fluid(), 16, 16, h, {0, 0});
  const StencilTarget target = StencilTarget::cell(8, 8);
  const Vec2 center = g.cell_center(8, 8);
  const Neighborhood nb = gather_neighborhood(g, target, false, 3, 15);
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(g.n_cells(), 3.5);

  SUBCASE("gradient of a constant vanishes") {
    const Eigen::VectorXd b = cell_gradient_functional(g.vol_moments(g.cell_id(8, 8)), 0, 4);
    const StencilRow s = solve_wls(g, nb, {}, center, 4, b, target);
    double got = 0;
    for (size_t k = 0; k < s.cells.size(); ++k) got += s.cell_w[k] * u[s.cells[k]];
    CHECK(got == doctest::Approx(0.0).scale(1.0));
  }
  SUBCASE("value functional recovers the constant") {
    // cell-average evaluation of the target cell itself
    const Eigen::VectorXd b =
        value_flux_functional(g.vol_moments(g.cell_id(8, 8)), 4);
    const StencilRow s = solve_wls(g, nb, {}, center, 4, b, target);
    double got = 0;
    for (size_t k = 0; k < s.cells.size(); ++k) got += s.cell_w[k] * u[s.cells[k]];
    CHECK(got / g.volume(g.cell_id(8, 8)) == doctest::Approx(3.5).epsilon(1e-10));
  }
}

TEST_CASE("solve_wls: 1D face gradient matches the hand-solved normal equations") {
  // data varying only in x: the production stencil must reproduce the
  // two-cell answer (u_R - u_L)/h that the 2x2 normal equations give
  const double h = 1.0 / 16;
  const CutCellGrid g = CutCellGrid::build(all_fluid(), 16, 16, h, {0, 0});
  const StencilTarget target = StencilTarget::xface(8, 8);
  const Vec2 center = g.face_center(0, 8, 8);
  const Neighborhood nb = gather_neighborhood(g, target, false, 3, 15);

  const double alpha = 0.7, beta = -1.3;
  Eigen::VectorXd u(g.n_cells());
  for (int id = 0; id < g.n_cells(); ++id) {
    const auto [ci, cj] = g.cell_ij(id);
    u[id] = alpha + beta * g.cell_center(ci, cj).x;
  }
  const MomentSet& fm = g.face_moments(0, 8, 8);
  const Eigen::VectorXd b = grad_flux_functional_face(fm, 0, 4);
  const StencilRow s = solve_wls(g, nb, {}, center, 4, b, target);
  double got = 0;
  for (size_t k = 0; k < s.cells.size(); ++k) got += s.cell_w[k] * u[s.cells[k]];

  // hand-solved two-cell least squares: c1 = (u_R - u_L)/h, flux = A_f c1
  const double uL = alpha + beta * g.cell_center(7, 8).x;
  const double uR = alpha + beta * g.cell_center(8, 8).x;
  const double want = h * (uR - uL) / h;
  CHECK(got == doctest::Approx(want).epsilon(1e-11));
}

TEST_CASE("solve_wls: rank failure raises a stencil error") {
  const double h = 1.0 / 16;
  const CutCellGrid g = CutCellGrid::build(all_fluid(), 16, 16, h, {0, 0});
  // 16 collinear cells cannot determine a 2D degree-4 polynomial
  Neighborhood nb;
  for (int ci = 0; ci < 16; ++ci) nb.cells.push_back(g.cell_id(ci, 8));
  const StencilTarget target = StencilTarget::cell(8, 8);
  const Eigen::VectorXd b = cell_gradient_functional(g.vol_moments(g.cell_id(8, 8)), 0, 4);
  CHECK_THROWS_AS(solve_wls(g, nb, {}, g.cell_center(8, 8), 4, b, target), StencilError);
}
