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

#include "ebstokes/geometry.hpp"

#include <cmath>

namespace ebs {

namespace {

constexpr double kPi = 3.14159265358979323846;

double param(const std::map<std::string, double>& p, const std::string& key, double def) {
  auto it = p.find(key);
  return it == p.end() ? def : it->second;
}

// Smooth max with radius eps; exact max when |a-b| >> eps. Used only where
// hard corners would otherwise appear in the interface itself.
double smax(double a, double b, double eps) {
  return 0.5 * (a + b + std::sqrt((a - b) * (a - b) + eps * eps));
}

}  // namespace

ImplicitGeometry ImplicitGeometry::from_levelset(std::function<double(Vec2)> phi, double fd_step) {
  ImplicitGeometry g;
  g.levelset = phi;
  g.gradient = [phi, fd_step](Vec2 p) -> Vec2 {
    const double gx = (phi({p.x + fd_step, p.y}) - phi({p.x - fd_step, p.y})) / (2 * fd_step);
    const double gy = (phi({p.x, p.y + fd_step}) - phi({p.x, p.y - fd_step})) / (2 * fd_step);
    return {gx, gy};
  };
  return g;
}

double gyroid_function(Vec2 p, double z, double n) {
  const double a = n * kPi;
  return std::cos(a * p.x) * std::sin(a * p.y) + std::cos(a * p.y) * std::sin(a * z) +
         std::cos(a * z) * std::sin(a * p.x);
}

ImplicitGeometry case_geometry(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "circle") {
    const double r = param(params, "radius", 0.3);
    const Vec2 c{param(params, "center_x", 0.5), param(params, "center_y", 0.5)};
    ImplicitGeometry g;
    g.levelset = [r, c](Vec2 p) { return (p - c).norm() - r; };
    g.gradient = [c](Vec2 p) {
      const Vec2 d = p - c;
      const double rr = d.norm();
      return rr > 0 ? d / rr : Vec2{1.0, 0.0};
    };
    return g;
  }

  if (name == "annulus") {
    const double ri = param(params, "r_inner", 0.25);
    const double ro = param(params, "r_outer", 0.475);
    const Vec2 c{param(params, "center_x", 0.5), param(params, "center_y", 0.5)};
    ImplicitGeometry g;
    g.levelset = [ri, ro, c](Vec2 p) {
      const double r = (p - c).norm();
      return std::max(ri - r, r - ro);
    };
    g.gradient = [ri, ro, c](Vec2 p) {
      const Vec2 d = p - c;
      const double r = d.norm();
      if (r == 0) return Vec2{1.0, 0.0};
      const Vec2 rad = d / r;
      // active branch of the max
      return (ri - r > r - ro) ? Vec2{-rad.x, -rad.y} : rad;
    };
    return g;
  }

  if (name == "taylor_green_contour") {
    const double n = param(params, "period", 2.0);
    const double cut = param(params, "contour", -0.8);
    // fluid where sin(n pi x) sin(n pi y) >= cut
    ImplicitGeometry g;
    g.levelset = [n, cut](Vec2 p) {
      return cut - std::sin(n * kPi * p.x) * std::sin(n * kPi * p.y);
    };
    g.gradient = [n](Vec2 p) {
      const double a = n * kPi;
      return Vec2{-a * std::cos(a * p.x) * std::sin(a * p.y),
                  -a * std::sin(a * p.x) * std::cos(a * p.y)};
    };
    return g;
  }

  if (name == "channel_circle") {
    const double r = param(params, "radius", 0.15);
    const Vec2 c{param(params, "center_x", 1.0), param(params, "center_y", 0.5)};
    // fluid outside the circle; the channel walls are domain boundaries
    ImplicitGeometry g;
    g.levelset = [r, c](Vec2 p) { return r - (p - c).norm(); };
    g.gradient = [c](Vec2 p) {
      const Vec2 d = p - c;
      const double rr = d.norm();
      return rr > 0 ? d / (-rr) : Vec2{1.0, 0.0};
    };
    return g;
  }

  if (name == "half_space") {
    const Vec2 n{param(params, "normal_x", 1.0), param(params, "normal_y", 0.0)};
    const Vec2 p0{param(params, "point_x", 0.5), param(params, "point_y", 0.0)};
    const double nn = n.norm();
    const Vec2 nu = n / nn;
    ImplicitGeometry g;
    g.levelset = [nu, p0](Vec2 p) { return (p - p0).dot(nu); };
    g.gradient = [nu](Vec2) { return nu; };
    return g;
  }

  if (name == "gyroid_scaffold") {
    const double z = param(params, "z", 0.1);
    const double n = param(params, "period", 2.0);
    const double tau = param(params, "tau", 0.35);
    const double pipe_r = param(params, "pipe_radius", 0.95);
    const double pipe_yc = param(params, "pipe_center_y", 0.0);
    const double slab_x = param(params, "slab_center_x", 4.0);
    const double slab_hw = param(params, "slab_halfwidth", 0.5);
    const double cut_r = param(params, "cut_radius", 0.175);
    const double eps = param(params, "smooth_eps", 0.02);
    auto phi = [=](Vec2 p) {
      const double f = gyroid_function(p, z, n);
      // solid strut set: inside the slab, |f| <= tau, outside the centerline cut
      const double solid = std::max(std::abs(f) - tau,
                                    std::max(std::abs(p.x - slab_x) - slab_hw,
                                             cut_r - std::abs(p.y - pipe_yc)));
      const double pipe = std::abs(p.y - pipe_yc) - pipe_r;
      // fluid = inside pipe and not in the solid, with smoothed corners
      return smax(pipe, -solid, eps);
    };
    return ImplicitGeometry::from_levelset(phi, 1e-7);
  }

  throw GeometryError("case_geometry: unknown geometry name '" + name + "'");
}

}  // namespace ebs
