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

#include <cmath>
#include <stdexcept>
#include <string>

namespace ebs {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double& operator[](int d) { return d == 0 ? x : y; }
  double operator[](int d) const { return d == 0 ? x : y; }

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Axis-aligned box [lo.x,hi.x] x [lo.y,hi.y].
struct Box {
  Vec2 lo, hi;

  Vec2 extent() const { return hi - lo; }
  Vec2 center() const { return (lo + hi) * 0.5; }
  double diag() const { return extent().norm(); }
  double area() const { return (hi.x - lo.x) * (hi.y - lo.y); }
};

enum class CellClass : unsigned char { Regular, Irregular, Invalid };

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StencilError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ebs
