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

#include "ebstokes/cases.hpp"

using namespace ebs;

namespace {
constexpr double kPi = 3.14159265358979323846;

CaseConfig mms_config(int n) {
  CaseConfig cfg;
  cfg.geometry = "circle";
  cfg.nx = cfg.ny = n;
  cfg.h = 1.0 / n;
  cfg.nu = 1.0;
  cfg.bc = "mms_dirichlet";
  cfg.ic = "mms_diffusion";
  cfg.t0 = 0.125;
  cfg.dt = 0.8 * (16.0 / n);
  cfg.steps = n;
  return cfg;
}
}  // namespace

TEST_CASE("mms fields: start time, center value, and FD consistency") {
  const double R = 0.3;
  const Vec2 x0{0.5, 0.5};
  SUBCASE("t = 0: solution vanishes, source is 2 pi sin(g)") {
    const Vec2 x{0.61, 0.47};
    CHECK(mms_diffusion_value(x, 0.0, R, x0) == doctest::Approx(0.0));
    const double g = R * R - (x - x0).dot(x - x0);
    CHECK(mms_diffusion_source(x, 0.0, R, x0, 1.0) ==
          doctest::Approx(2 * kPi * std::sin(g)).epsilon(1e-13));
  }
  SUBCASE("center point, nu = 1") {
    const double t = 0.3;
    CHECK(mms_diffusion_value(x0, t, R, x0) ==
          doctest::Approx(std::sin(2 * kPi * t) * std::sin(R * R)));
    const double want = 2 * kPi * std::cos(2 * kPi * t) * std::sin(R * R) +
                        4 * std::sin(2 * kPi * t) * std::cos(R * R);
    CHECK(mms_diffusion_source(x0, t, R, x0, 1.0) == doctest::Approx(want).epsilon(1e-13));
  }
  SUBCASE("finite differences of u reproduce the source") {
    const double nu = 0.7;
    const double d = 1e-4;
    for (const Vec2 x : {Vec2{0.55, 0.52}, Vec2{0.42, 0.61}, Vec2{0.5, 0.35}}) {
      for (const double t : {0.21, 0.77}) {
        auto u = [&](Vec2 p, double tt) { return mms_diffusion_value(p, tt, R, x0); };
        const double ut = (u(x, t + d) - u(x, t - d)) / (2 * d);
        const double uxx =
            (u({x.x + d, x.y}, t) - 2 * u(x, t) + u({x.x - d, x.y}, t)) / (d * d);
        const double uyy =
            (u({x.x, x.y + d}, t) - 2 * u(x, t) + u({x.x, x.y - d}, t)) / (d * d);
        const double fd = ut - nu * (uxx + uyy);
        CHECK(mms_diffusion_source(x, t, R, x0, nu) == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("couette_analytic: wall values and range checks") {
  const double ri = 0.25, ro = 0.475, w = 1.0 / 0.475;
  CHECK(couette_analytic(ri, ri, ro, w) == doctest::Approx(0.0));
  CHECK(couette_analytic(ro, ri, ro, w) == doctest::Approx(1.0));
  // mid-gap value straight from the formula
  const double r = 0.3625;
  const double want = w * ro * (r / ri - ri / r) / (ro / ri - ri / ro);
  CHECK(couette_analytic(r, ri, ro, w) == doctest::Approx(want));
  CHECK_THROWS_AS(couette_analytic(0.1, ri, ro, w), std::out_of_range);
}

TEST_CASE("initialize: zero, constant (kappa-independent), taylor-green average") {
  CaseConfig cfg;
  cfg.geometry = "circle";
  cfg.nx = cfg.ny = 16;
  cfg.h = 1.0 / 16;
  cfg.bc = "noslip";
  cfg.ic = "zero";
  cfg.dt = 0.1;
  cfg.steps = 1;
  cfg.project = false;
  const CaseSetup cs = build_case(cfg, {}, false);

  SUBCASE("zero ic") {
    const StokesState s = initialize(cs, 0.0);
    CHECK(s.u.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("constant ic is exact on every cut cell") {
    CaseSetup cs2 = cs;
    cs2.ic = [](int, Vec2) { return 3.25; };
    const StokesState s = initialize(cs2, 0.0);
    for (int id = 0; id < cs2.grid->n_cells(); ++id)
      CHECK(s.u[id] == doctest::Approx(3.25).epsilon(1e-13));
  }
  SUBCASE("taylor-green average on a regular cell matches the double integral") {
    CaseSetup cs2 = cs;
    cs2.ic = [](int comp, Vec2 x) {
      return comp == 0 ? taylor_green_u(x, 2.0) : taylor_green_v(x, 2.0);
    };
    const StokesState s = initialize(cs2, 0.0);
    const int id = cs2.grid->cell_id(8, 8);
    REQUIRE(id >= 0);
    // closed form: (1/h^2) int sin(2 pi x) dx int cos(2 pi y) dy
    const double h = cs2.grid->h();
    const auto [i, j] = cs2.grid->cell_ij(id);
    const Vec2 lo{i * h, j * h};
    const double ix =
        (std::cos(2 * kPi * lo.x) - std::cos(2 * kPi * (lo.x + h))) / (2 * kPi);
    const double iy =
        (std::sin(2 * kPi * (lo.y + h)) - std::sin(2 * kPi * lo.y)) / (2 * kPi);
    CHECK(s.u[id] == doctest::Approx(ix * iy / (h * h)).epsilon(1e-12));
  }
}

TEST_CASE("advance: nu = 0 with no source leaves the state unchanged") {
  CaseConfig cfg;
  cfg.geometry = "taylor_green_contour";
  cfg.nx = cfg.ny = 16;
  cfg.h = 1.0 / 16;
  cfg.nu = 0.0;
  cfg.bc = "noslip";
  cfg.ic = "taylor_green";
  cfg.dt = 0.01;
  cfg.steps = 1;
  cfg.project = false;  // isolate the integrator
  const CaseSetup cs = build_case(cfg);
  StokesState s = initialize(cs, 0.0);
  StokesStepper stepper(cs, cfg.dt);
  const StokesState next = stepper.advance(s);
  CHECK((next.u - s.u).cwiseAbs().maxCoeff() == 0.0);  // bit-identical
  CHECK((next.v - s.v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("advance: one MMS step at N=16 lands at the Table-1 error scale") {
  const CaseConfig cfg = mms_config(16);
  const CaseSetup cs = build_case(cfg);
  StokesState s = initialize(cs, cfg.t0);
  StokesStepper stepper(cs, cfg.dt);
  s = stepper.advance(s);
  const Vector exact = cs.cell_averages([&](Vec2 x) { return cs.exact(0, x, s.t); });
  const double linf = (s.u - exact).cwiseAbs().maxCoeff();
  CHECK(linf < 1e-4);  // bounded by the N=16 row magnitude order
}

TEST_CASE("advance: velocity components stay bit-identical for identical problems") {
  const CaseConfig cfg = mms_config(16);
  const CaseSetup cs = build_case(cfg);
  StokesState s = initialize(cs, cfg.t0);
  StokesStepper stepper(cs, cfg.dt);
  for (int k = 0; k < 3; ++k) s = stepper.advance(s);
  CHECK((s.u - s.v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("run_to_steady: zero everything converges immediately") {
  CaseConfig cfg;
  cfg.geometry = "taylor_green_contour";
  cfg.nx = cfg.ny = 16;
  cfg.h = 1.0 / 16;
  cfg.nu = 1.0;
  cfg.bc = "noslip";
  cfg.ic = "zero";
  cfg.dt = 0.01;
  cfg.steps = 0;
  const CaseSetup cs = build_case(cfg);
  const SteadyResult r = run_to_steady(cs, cfg.dt, 1e-8, 50);
  CHECK(r.converged);
  CHECK(r.steps <= 2);
  CHECK(r.state.u.cwiseAbs().maxCoeff() <= 1e-12);
}
