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
#include <vector>

#include "ebstokes/multi_index.hpp"
#include "ebstokes/types.hpp"

namespace ebs {

/// Geometric moments m^q = integral of (x - center)^q over a cell volume,
/// a face, or an EB segment. Holds every q with |q| <= degree, stored in
/// the canonical multi-index order.
struct MomentSet {
  Vec2 center;
  int degree = 0;
  std::vector<double> values;

  MomentSet() = default;
  MomentSet(Vec2 c, int deg) : center(c), degree(deg), values(multi_index_count(deg), 0.0) {}

  double value(const MultiIndex& q) const { return values[multi_index_position(q)]; }
  double& at(const MultiIndex& q) { return values[multi_index_position(q)]; }

  double m0() const { return values[0]; }
};

/// Exact binomial re-centering: m^q(c') = sum_{p<=q} C(q,p) (c-c')^{q-p} m^p(c).
MomentSet translate_moments(const MomentSet& ms, Vec2 new_center);

/// Quadrature rule over a 2D region (volume integrals).
struct AreaRule {
  std::vector<Vec2> x;
  std::vector<double> w;

  double integrate(const std::function<double(Vec2)>& f) const {
    double s = 0.0;
    for (size_t k = 0; k < x.size(); ++k) s += w[k] * f(x[k]);
    return s;
  }
  double measure() const {
    double s = 0.0;
    for (double v : w) s += v;
    return s;
  }
};

/// Quadrature rule over a 1D curve (grid faces, EB segments). For EB
/// segments `n` holds the unit outward normal at each node; grid faces
/// leave it empty (the normal is the face axis).
struct LineRule {
  std::vector<Vec2> x;
  std::vector<double> w;
  std::vector<Vec2> n;

  double integrate(const std::function<double(Vec2)>& f) const {
    double s = 0.0;
    for (size_t k = 0; k < x.size(); ++k) s += w[k] * f(x[k]);
    return s;
  }
  double measure() const {
    double s = 0.0;
    for (double v : w) s += v;
    return s;
  }
};

MomentSet moments_from_area_rule(const AreaRule& rule, Vec2 center, int degree);
MomentSet moments_from_line_rule(const LineRule& rule, Vec2 center, int degree);
/// Normal-weighted moments m_{f,d}^q = integral (x-c)^q n_d dA over an EB rule.
MomentSet normal_weighted_moments(const LineRule& rule, Vec2 center, int degree, int d);

/// Closed-form moments of a full axis-aligned box about an arbitrary center.
MomentSet box_moments(const Box& b, Vec2 center, int degree);

/// Closed-form moments of a full grid-aligned segment from a to b (a.x==b.x
/// or a.y==b.y) about an arbitrary center.
MomentSet segment_moments(Vec2 a, Vec2 b, Vec2 center, int degree);

/// Tensor-product Gauss-Legendre rule on a full box (npts in {3,5,7}).
AreaRule tensor_gauss(const Box& b, int npts);

/// Gauss-Legendre nodes/weights on [a,b].
void gauss_segment(double a, double b, int npts, std::vector<double>& xs, std::vector<double>& ws);

}  // namespace ebs
