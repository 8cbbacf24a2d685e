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

#include "ebstokes/geometry.hpp"
#include "ebstokes/moments.hpp"
#include "ebstokes/types.hpp"

namespace ebs {

struct CutQuadParams {
  double tol = 1e-12;          // target relative tolerance
  int max_depth = 24;          // bisection depth cap
  int lattice = 7;             // certification samples per axis
  int gauss_pts = 7;           // Gauss points per axis
  double grad_safety = 2.0;    // safety factor on sampled gradient bounds
  double cone_cos = 0.9993908270190958;  // cos(2 deg): max normal variation per leaf
  double height_margin = 0.08; // min |grad_h| relative to |grad| for a height direction
};

/// Quadrature rules for the fluid part of one Cartesian cell: a volume rule
/// over {phi<0} and a line rule (with outward unit normals) over the
/// embedded-boundary segment inside the cell. Built by recursive
/// coordinate-aligned bisection with sign-definite pruning; cut leaves are
/// finished by a height-direction graph quadrature with 1D root bracketing.
struct CellCutRules {
  AreaRule volume;
  LineRule eb;
};

CellCutRules build_cell_rules(const ImplicitGeometry& geom, const Box& cell,
                              const CutQuadParams& p = {});

/// Quadrature rule over the fluid part {phi<0} of the straight segment from
/// a to b. `nudge` disambiguates a segment lying exactly on the interface:
/// the fluid side is probed at +/- nudge off the segment and the face takes
/// its area from the fluid side (full rule) if one exists.
LineRule build_face_rule(const ImplicitGeometry& geom, Vec2 a, Vec2 b, Vec2 nudge,
                         const CutQuadParams& p = {});

/// Root of phi along the segment a->b given opposite signs at the ends.
double bracket_root(const std::function<double(double)>& f, double a, double b,
                    double fa, double fb);

}  // namespace ebs
