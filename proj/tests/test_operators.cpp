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

#include "ebstokes/io.hpp"
#include "ebstokes/operators.hpp"

using namespace ebs;

namespace {

ImplicitGeometry all_fluid() {
  ImplicitGeometry g;
  g.levelset = [](Vec2) { return -1.0; };
  g.gradient = [](Vec2) { return Vec2{0, 0}; };
  return g;
}

struct Poly {
  Eigen::VectorXd c;  // coefficients over the canonical set about `center`
  Vec2 center;
  int degree;

  double eval(Vec2 p) const {
    const auto qs = multi_index_set(2, degree);
    double acc = 0;
    for (size_t k = 0; k < qs.size(); ++k)
      acc += c[k] * std::pow(p.x - center.x, qs[k].qx) * std::pow(p.y - center.y, qs[k].qy);
    return acc;
  }
  // derivative d/dx_d as a new coefficient set (degree - 1)
  Poly derivative(int d) const {
    Poly out;
    out.center = center;
    out.degree = degree - 1;
    const auto qs_in = multi_index_set(2, degree);
    out.c = Eigen::VectorXd::Zero(multi_index_count(out.degree));
    for (size_t k = 0; k < qs_in.size(); ++k) {
      const MultiIndex& q = qs_in[k];
      if (q[d] == 0) continue;
      out.c[multi_index_position(q.minus(d))] += q[d] * c[k];
    }
    return out;
  }
};

Poly random_poly(int degree, Vec2 center, unsigned seed) {
  Poly p;
  p.center = center;
  p.degree = degree;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  p.c = Eigen::VectorXd::Zero(multi_index_count(degree));
  for (int k = 0; k < p.c.size(); ++k) p.c[k] = dist(rng);
  return p;
}

Vector exact_cell_averages(const CutCellGrid& g, const Poly& p) {
  Vector out(g.n_cells());
  const auto qs = multi_index_set(2, p.degree);
  for (int id = 0; id < g.n_cells(); ++id) {
    const MomentSet m = translate_moments(g.vol_moments(id), p.center);
    double acc = 0;
    for (size_t k = 0; k < qs.size(); ++k) acc += p.c[k] * m.value(qs[k]);
    out[id] = acc / g.volume(id);
  }
  return out;
}

// row-scale-relative residual: |Op_i - exact_i| over the attainable scale
double max_rel_residual(const AffineOperator& op, const std::vector<Vector>& u,
                        const Vector& gdata, const Vector& got, const Vector& want) {
  double worst = 0;
  const int n = static_cast<int>(got.size());
  double umax = 0, gmax = 0;
  for (const auto& uc : u) umax = std::max(umax, uc.cwiseAbs().maxCoeff());
  if (gdata.size() > 0 && gdata.cwiseAbs().size() > 0) gmax = gdata.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i) {
    double rowsum = 0;
    for (const auto& A : op.A)
      for (SpMat::InnerIterator it(A, i); it; ++it) rowsum += std::abs(it.value());
    double bsum = 0;
    for (SpMat::InnerIterator it(op.B, i); it; ++it) bsum += std::abs(it.value());
    const double scale = rowsum * umax + bsum * gmax + std::abs(want[i]) + 1.0;
    worst = std::max(worst, std::abs(got[i] - want[i]) / scale);
  }
  return worst;
}

}  // namespace

TEST_CASE("laplacian: constant annihilation with matching Dirichlet data") {
  const double h = 1.0 / 32;
  const CutCellGrid g = CutCellGrid::build(case_geometry("circle"), 32, 32, h, {0, 0});
  const double c0 = 2.25;
  const BcSpec bc = BcSpec::uniform(
      BcCondition::dirichlet([c0](Vec2, Vec2, double) { return c0; }));
  const AffineOperator L = assemble_operator(OpKind::Laplacian, g, bc);
  const Vector u = Vector::Constant(g.n_cells(), c0);
  const Vector out = L.apply(u, 0.0);
  const Vector zero = Vector::Zero(g.n_cells());
  CHECK(max_rel_residual(L, {u}, L.boundary_data(0.0), out, zero) <= 1e-10);
}

TEST_CASE("laplacian: exactness on degree-4 polynomials (circle and annulus)") {
  const double h = 1.0 / 32;
  for (const char* name : {"circle", "annulus"}) {
    CAPTURE(name);
    const CutCellGrid g = CutCellGrid::build(case_geometry(name), 32, 32, h, {0, 0});
    const Poly p = random_poly(4, {0.5, 0.5}, name[0] == 'c' ? 11 : 22);
    auto gfun = [&p](Vec2 x, Vec2, double) { return p.eval(x); };
    const BcSpec bc = BcSpec::uniform(BcCondition::dirichlet(gfun));
    const AffineOperator L = assemble_operator(OpKind::Laplacian, g, bc);

    const Vector u = exact_cell_averages(g, p);
    // Lap p = d2p/dx2 + d2p/dy2, a degree-2 polynomial
    Poly lap = p.derivative(0).derivative(0);
    const Poly lyy = p.derivative(1).derivative(1);
    lap.c += lyy.c;
    const Vector want = exact_cell_averages(g, lap);
    const Vector got = L.apply(u, 0.0);
    CHECK(max_rel_residual(L, {u}, L.boundary_data(0.0), got, want) <= 1e-8);
  }
}

TEST_CASE("laplacian: x^2 + y^2 maps to 4 on interior regular cells") {
  const double h = 1.0 / 32;
  const CutCellGrid g = CutCellGrid::build(case_geometry("circle"), 32, 32, h, {0, 0});
  Poly p;
  p.center = {0.5, 0.5};
  p.degree = 2;
  p.c = Eigen::VectorXd::Zero(6);
  p.c[multi_index_position({2, 0})] = 1.0;
  p.c[multi_index_position({0, 2})] = 1.0;
  auto gfun = [&p](Vec2 x, Vec2, double) { return p.eval(x); };
  const AffineOperator L = assemble_operator(OpKind::Laplacian, g,
                                             BcSpec::uniform(BcCondition::dirichlet(gfun)));
  const Vector got = L.apply(exact_cell_averages(g, p), 0.0);
  for (int id = 0; id < g.n_cells(); ++id) {
    const auto [i, j] = g.cell_ij(id);
    const double r = (g.cell_center(i, j) - Vec2{0.5, 0.5}).norm();
    if (r > 0.3 - 6 * h) continue;  // interior regular band only
    CHECK(got[id] == doctest::Approx(4.0).epsilon(1e-9));
  }
}

TEST_CASE("divergence: affine divergence-free field annihilates in the interior") {
  const double h = 1.0 / 32;
  const CutCellGrid g = CutCellGrid::build(case_geometry("circle"), 32, 32, h, {0, 0});
  BcSpec bc = BcSpec::uniform(BcCondition::dirichlet());  // walls: zero normal flux data
  const AffineOperator D = assemble_operator(OpKind::Divergence, g, bc);
  Vector u(g.n_cells()), v(g.n_cells());
  for (int id = 0; id < g.n_cells(); ++id) {
    const auto [i, j] = g.cell_ij(id);
    const Vec2 c = g.cell_center(i, j);
    u[id] = c.x;
    v[id] = -c.y;
  }
  const Vector got = D.apply_with_data(u, v, Vector::Zero(D.B.cols()));
  for (int id = 0; id < g.n_cells(); ++id) {
    const auto [i, j] = g.cell_ij(id);
    const double r = (g.cell_center(i, j) - Vec2{0.5, 0.5}).norm();
    if (r > 0.3 - 6 * h) continue;  // wall fluxes are prescribed, skip the band
    CHECK(std::abs(got[id]) <= 1e-10);
  }
}

TEST_CASE("divergence: exactness on degree-4 component polynomials") {
  const double h = 1.0 / 32;
  const CutCellGrid g = CutCellGrid::build(case_geometry("annulus"), 32, 32, h, {0, 0});
  const Poly pu = random_poly(4, {0.5, 0.5}, 31);
  const Poly pv = random_poly(4, {0.5, 0.5}, 32);
  auto gfun = [&pu, &pv](Vec2 x, Vec2 n, double) {
    return pu.eval(x) * n.x + pv.eval(x) * n.y;
  };
  const BcSpec bc = BcSpec::uniform(BcCondition::dirichlet(gfun));
  const AffineOperator D = assemble_operator(OpKind::Divergence, g, bc);
  const Vector u = exact_cell_averages(g, pu);
  const Vector v = exact_cell_averages(g, pv);
  Poly div = pu.derivative(0);
  div.c += pv.derivative(1).c;
  const Vector want = exact_cell_averages(g, div);
  const Vector got = D.apply(u, v, 0.0);
  CHECK(max_rel_residual(D, {u, v}, D.boundary_data(0.0), got, want) <= 1e-8);
}

TEST_CASE("cell gradient: exactness on degree-3 polynomials") {
  const double h = 1.0 / 32;
  for (const char* name : {"circle", "annulus"}) {
    CAPTURE(name);
    const CutCellGrid g = CutCellGrid::build(case_geometry(name), 32, 32, h, {0, 0});
    const Poly p = random_poly(3, {0.5, 0.5}, name[0] == 'c' ? 41 : 42);
    auto gfun = [&p](Vec2 x, Vec2, double) { return p.eval(x); };
    const BcSpec bc = BcSpec::uniform(BcCondition::dirichlet(gfun));
    for (int d = 0; d < 2; ++d) {
      const AffineOperator G = assemble_operator(
          d == 0 ? OpKind::GradientX : OpKind::GradientY, g, bc);
      const Vector u = exact_cell_averages(g, p);
      const Vector want = exact_cell_averages(g, p.derivative(d));
      const Vector got = G.apply(u, 0.0);
      CHECK(max_rel_residual(G, {u}, G.boundary_data(0.0), got, want) <= 1e-8);
    }
  }
}

TEST_CASE("regular interior rows equal the closed-form Cartesian stencils") {
  const double h = 1.0 / 16;
  const CutCellGrid g = CutCellGrid::build(all_fluid(), 16, 16, h, {0, 0});
  const BcSpec bc = BcSpec::uniform(BcCondition::dirichlet());
  const AffineOperator L = assemble_operator(OpKind::Laplacian, g, bc);
  const AffineOperator Gx = assemble_operator(OpKind::GradientX, g, bc);

  const int row = g.cell_id(8, 8);
  // 9-point cross: per direction (-1, 16, -30, 16, -1)/(12 h^2)
  const double s2 = 1.0 / (12 * h * h);
  std::map<int, double> want;
  want[g.cell_id(8, 8)] = -60 * s2;
  for (int d = 0; d < 2; ++d) {
    const int di = d == 0 ? 1 : 0, dj = d == 0 ? 0 : 1;
    want[g.cell_id(8 - 2 * di, 8 - 2 * dj)] = -1 * s2;
    want[g.cell_id(8 - di, 8 - dj)] = 16 * s2;
    want[g.cell_id(8 + di, 8 + dj)] = 16 * s2;
    want[g.cell_id(8 + 2 * di, 8 + 2 * dj)] = -1 * s2;
  }
  int nz = 0;
  for (SpMat::InnerIterator it(L.A[0], row); it; ++it) {
    if (std::abs(it.value()) < 1e-9) continue;
    REQUIRE(want.count(static_cast<int>(it.col())) == 1);
    CHECK(it.value() == doctest::Approx(want[it.col()]).epsilon(1e-13));
    ++nz;
  }
  CHECK(nz == 9);

  // gradient row: (1, -8, 0, 8, -1)/(12 h)
  const double s1 = 1.0 / (12 * h);
  std::map<int, double> wantg;
  wantg[g.cell_id(6, 8)] = 1 * s1;
  wantg[g.cell_id(7, 8)] = -8 * s1;
  wantg[g.cell_id(9, 8)] = 8 * s1;
  wantg[g.cell_id(10, 8)] = -1 * s1;
  int nzg = 0;
  for (SpMat::InnerIterator it(Gx.A[0], row); it; ++it) {
    if (std::abs(it.value()) < 1e-9) continue;
    REQUIRE(wantg.count(static_cast<int>(it.col())) == 1);
    CHECK(it.value() == doctest::Approx(wantg[it.col()]).epsilon(1e-13));
    ++nzg;
  }
  CHECK(nzg == 4);
}

TEST_CASE("assembly is deterministic") {
  const double h = 1.0 / 16;
  const CutCellGrid g = CutCellGrid::build(case_geometry("circle"), 16, 16, h, {0, 0});
  const BcSpec bc = BcSpec::uniform(BcCondition::dirichlet());
  const AffineOperator a = assemble_operator(OpKind::Laplacian, g, bc);
  const AffineOperator b = assemble_operator(OpKind::Laplacian, g, bc);
  REQUIRE(a.A[0].nonZeros() == b.A[0].nonZeros());
  for (int r = 0; r < a.A[0].outerSize(); ++r) {
    SpMat::InnerIterator ia(a.A[0], r), ib(b.A[0], r);
    for (; ia && ib; ++ia, ++ib) {
      CHECK(ia.col() == ib.col());
      CHECK(ia.value() == ib.value());  // bit-identical
    }
  }
}

TEST_CASE("boundary data rows: constant and linear Dirichlet integrals") {
  const double h = 1.0 / 32;
  const CutCellGrid g = CutCellGrid::build(case_geometry("circle"), 32, 32, h, {0, 0});
  SUBCASE("g == 1 integrates to the segment length") {
    const BcSpec bc = BcSpec::uniform(
        BcCondition::dirichlet([](Vec2, Vec2, double) { return 1.0; }));
    const Vector data = boundary_data(g, bc, 0.0);
    for (size_t k = 0; k < g.boundary_faces().size(); ++k)
      CHECK(data[k] == doctest::Approx(g.bface_area(k)).epsilon(1e-12));
  }
  SUBCASE("homogeneous g gives zero data") {
    const BcSpec bc = BcSpec::uniform(BcCondition::dirichlet());
    CHECK(boundary_data(g, bc, 0.0).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("g = x on a vertical boundary face integrates to 0.5 h") {
  // half-plane fluid x < 0.5 with a domain: the x-hi boundary faces of the
  // fluid column sit on x = 0.5
  const ImplicitGeometry geom = case_geometry("half_space", {{"point_x", 0.5}});
  const double h = 1.0 / 8;
  const CutCellGrid g = CutCellGrid::build(geom, 8, 8, h, {0, 0});
  const BcSpec bc = BcSpec::uniform(
      BcCondition::dirichlet([](Vec2 x, Vec2, double) { return x.x; }));
  const Vector data = boundary_data(g, bc, 0.0);
  int checked = 0;
  for (size_t k = 0; k < g.boundary_faces().size(); ++k) {
    const BoundaryFace& bf = g.boundary_faces()[k];
    if (bf.piece == BoundaryPiece::Eb && bf.axis == 0) {
      CHECK(data[k] == doctest::Approx(0.5 * h).epsilon(1e-12));
      ++checked;
    }
  }
  CHECK(checked == 8);
}

TEST_CASE("operator dump produces triplet CSVs") {
  const double h = 1.0 / 16;
  const CutCellGrid g = CutCellGrid::build(case_geometry("circle"), 16, 16, h, {0, 0});
  const AffineOperator L =
      assemble_operator(OpKind::Laplacian, g, BcSpec::uniform(BcCondition::dirichlet()));
  const auto [a, b] = operator_dump_csv(L);
  CHECK(a.find("row_cell,col_cell,value") == 0);
  CHECK(b.find("row_cell,bface,value") == 0);
  CHECK(a.size() > 100);
  CHECK(b.size() > 10);
}

TEST_CASE("'none' pieces are rejected outside the divergence") {
  const double h = 1.0 / 16;
  const CutCellGrid g = CutCellGrid::build(case_geometry("circle"), 16, 16, h, {0, 0});
  BcSpec bc = BcSpec::uniform(BcCondition::dirichlet());
  bc.eb = BcCondition::none();
  CHECK_THROWS_AS(assemble_operator(OpKind::Laplacian, g, bc), StencilError);
}
