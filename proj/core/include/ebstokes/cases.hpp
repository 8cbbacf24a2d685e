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

#include "ebstokes/config.hpp"
#include "ebstokes/stokes.hpp"

namespace ebs {

/// Assembles the full runtime setup for a resolved config: grid, viscous
/// operator and per-component boundary data, projection context, source,
/// exact and initial fields. `with_viscous` may be cleared for
/// projection-only studies.
CaseSetup build_case(const CaseConfig& cfg, const AssembleOptions& opt = {},
                     bool with_viscous = true);

/// Taylor-Green velocity components for stream function sin(n pi x) sin(n pi y).
double taylor_green_u(Vec2 p, double n);
double taylor_green_v(Vec2 p, double n);

double geom_param(const CaseConfig& cfg, const std::string& key, double def);

}  // namespace ebs
