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

#include <functional>
#include <map>
#include <string>

#include "ebstokes/types.hpp"

namespace ebs {

/// Implicit description of the fluid region: levelset < 0 inside the fluid
/// (fixed sign convention throughout).
struct ImplicitGeometry {
  std::function<double(Vec2)> levelset;
  std::function<Vec2(Vec2)> gradient;

  /// Wraps a levelset with a central finite-difference gradient.
  static ImplicitGeometry from_levelset(std::function<double(Vec2)> phi, double fd_step = 1e-6);
};

/// Built-in geometries used by the verification and demo cases. Recognized
/// names: taylor_green_contour, annulus, circle, channel_circle,
/// gyroid_scaffold, half_space. Unknown names throw GeometryError.
/// Parameters not present in `params` take the case defaults.
ImplicitGeometry case_geometry(const std::string& name, const std::map<std::string, double>& params = {});

/// Raw gyroid function cos(npx x) sin(npy y) + cos(npy y) sin(npz z) + cos(npz z) sin(npx x)
/// with np = n*pi, evaluated at fixed z.
double gyroid_function(Vec2 p, double z, double n);

}  // namespace ebs
