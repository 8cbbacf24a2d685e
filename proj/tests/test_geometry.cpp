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

#include "ebstokes/geometry.hpp"

using namespace ebs;

TEST_CASE("annulus levelset vanishes on both walls") {
  const ImplicitGeometry g = case_geometry("annulus");
  CHECK(g.levelset({0.5 + 0.25, 0.5}) == doctest::Approx(0.0));
  CHECK(g.levelset({0.5, 0.5 + 0.475}) == doctest::Approx(0.0));
  CHECK(g.levelset({0.5 + 0.36, 0.5}) < 0);   // inside the gap
  CHECK(g.levelset({0.5 + 0.1, 0.5}) > 0);    // inner solid
  CHECK(g.levelset({0.5 + 0.49, 0.5}) > 0);   // outer solid
}

TEST_CASE("raw gyroid function vanishes at the origin for z=0") {
  CHECK(gyroid_function({0, 0}, 0.0, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("taylor-green contour: deep pocket at (0.75, 0.25) is excluded") {
  const ImplicitGeometry g = case_geometry("taylor_green_contour");
  // psi = sin(1.5 pi) sin(0.5 pi) = -1 < -0.8 there
  CHECK(g.levelset({0.75, 0.25}) > 0);  // invalid region
  CHECK(g.levelset({0.25, 0.25}) < 0);  // psi = +1: fluid
  CHECK(g.levelset({0.25, 0.75}) > 0);  // the mirrored pocket
}

TEST_CASE("circle and channel sign conventions") {
  const ImplicitGeometry circ = case_geometry("circle");
  CHECK(circ.levelset({0.5, 0.5}) < 0);
  CHECK(circ.levelset({0.95, 0.5}) > 0);
  const ImplicitGeometry chan = case_geometry("channel_circle");
  CHECK(chan.levelset({1.0, 0.5}) > 0);    // inside the solid circle
  CHECK(chan.levelset({0.2, 0.5}) < 0);    // open channel
}

TEST_CASE("unknown geometry name is rejected") {
  CHECK_THROWS_AS(case_geometry("klein_bottle"), GeometryError);
}

TEST_CASE("finite-difference gradient fallback matches analytic") {
  const ImplicitGeometry g = case_geometry("circle");
  const ImplicitGeometry fd = ImplicitGeometry::from_levelset(g.levelset);
  const Vec2 p{0.71, 0.62};
  const Vec2 ga = g.gradient(p);
  const Vec2 gf = fd.gradient(p);
  CHECK(ga.x == doctest::Approx(gf.x).epsilon(1e-8));
  CHECK(ga.y == doctest::Approx(gf.y).epsilon(1e-8));
}

TEST_CASE("gyroid scaffold levelset: fluid in the open pipe, solid in a strut") {
  const ImplicitGeometry g = case_geometry("gyroid_scaffold");
  CHECK(g.levelset({1.0, 0.0}) < 0);   // upstream pipe, on centerline
  CHECK(g.levelset({4.0, 0.0}) < 0);   // centerline cut keeps the middle open
  CHECK(g.levelset({1.0, 1.5}) > 0);   // outside the pipe
}
