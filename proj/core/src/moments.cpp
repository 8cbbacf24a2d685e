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

#include "ebstokes/moments.hpp"

#include <array>
#include <cassert>
#include <cmath>

namespace ebs {

MomentSet translate_moments(const MomentSet& ms, Vec2 new_center) {
  MomentSet out(new_center, ms.degree);
  const Vec2 d = ms.center - new_center;
  const auto qs = multi_index_set(2, ms.degree);
  for (const MultiIndex& q : qs) {
    double acc = 0.0;
    for (int px = 0; px <= q.qx; ++px) {
      for (int py = 0; py <= q.qy; ++py) {
        const MultiIndex p{px, py};
        const double shift = std::pow(d.x, q.qx - px) * std::pow(d.y, q.qy - py);
        acc += multi_index_binomial(q, p) * shift * ms.value(p);
      }
    }
    out.at(q) = acc;
  }
  return out;
}

namespace {

// Powers of (x - c) up to degree, evaluated once per node.
inline void fill_powers(double v, int degree, double* pw) {
  pw[0] = 1.0;
  for (int k = 1; k <= degree; ++k) pw[k] = pw[k - 1] * v;
}

}  // namespace

MomentSet moments_from_area_rule(const AreaRule& rule, Vec2 center, int degree) {
  MomentSet out(center, degree);
  const auto qs = multi_index_set(2, degree);
  std::vector<double> px(degree + 1), py(degree + 1);
  for (size_t k = 0; k < rule.x.size(); ++k) {
    fill_powers(rule.x[k].x - center.x, degree, px.data());
    fill_powers(rule.x[k].y - center.y, degree, py.data());
    for (size_t m = 0; m < qs.size(); ++m)
      out.values[m] += rule.w[k] * px[qs[m].qx] * py[qs[m].qy];
  }
  return out;
}

MomentSet moments_from_line_rule(const LineRule& rule, Vec2 center, int degree) {
  MomentSet out(center, degree);
  const auto qs = multi_index_set(2, degree);
  std::vector<double> px(degree + 1), py(degree + 1);
  for (size_t k = 0; k < rule.x.size(); ++k) {
    fill_powers(rule.x[k].x - center.x, degree, px.data());
    fill_powers(rule.x[k].y - center.y, degree, py.data());
    for (size_t m = 0; m < qs.size(); ++m)
      out.values[m] += rule.w[k] * px[qs[m].qx] * py[qs[m].qy];
  }
  return out;
}

MomentSet normal_weighted_moments(const LineRule& rule, Vec2 center, int degree, int d) {
  assert(rule.n.size() == rule.x.size());
  MomentSet out(center, degree);
  const auto qs = multi_index_set(2, degree);
  std::vector<double> px(degree + 1), py(degree + 1);
  for (size_t k = 0; k < rule.x.size(); ++k) {
    fill_powers(rule.x[k].x - center.x, degree, px.data());
    fill_powers(rule.x[k].y - center.y, degree, py.data());
    const double wn = rule.w[k] * rule.n[k][d];
    for (size_t m = 0; m < qs.size(); ++m)
      out.values[m] += wn * px[qs[m].qx] * py[qs[m].qy];
  }
  return out;
}

namespace {

// integral of (t - c)^k over [a, b]
inline double segment_monomial(double a, double b, double c, int k) {
  const double hi = std::pow(b - c, k + 1);
  const double lo = std::pow(a - c, k + 1);
  return (hi - lo) / (k + 1);
}

}  // namespace

MomentSet box_moments(const Box& b, Vec2 center, int degree) {
  MomentSet out(center, degree);
  const auto qs = multi_index_set(2, degree);
  for (const MultiIndex& q : qs) {
    out.at(q) = segment_monomial(b.lo.x, b.hi.x, center.x, q.qx) *
                segment_monomial(b.lo.y, b.hi.y, center.y, q.qy);
  }
  return out;
}

MomentSet segment_moments(Vec2 a, Vec2 b, Vec2 center, int degree) {
  MomentSet out(center, degree);
  const auto qs = multi_index_set(2, degree);
  const bool along_y = (a.x == b.x);
  for (const MultiIndex& q : qs) {
    if (along_y) {
      const double fx = std::pow(a.x - center.x, q.qx);
      out.at(q) = fx * segment_monomial(std::min(a.y, b.y), std::max(a.y, b.y), center.y, q.qy);
    } else {
      const double fy = std::pow(a.y - center.y, q.qy);
      out.at(q) = fy * segment_monomial(std::min(a.x, b.x), std::max(a.x, b.x), center.x, q.qx);
    }
  }
  return out;
}

namespace {

struct GaussTable {
  std::vector<double> x;  // on [-1, 1]
  std::vector<double> w;
};

const GaussTable& gauss_table(int npts) {
  static const GaussTable g3{{-0.7745966692414834, 0.0, 0.7745966692414834},
                             {0.5555555555555556, 0.8888888888888888, 0.5555555555555556}};
  static const GaussTable g5{{-0.9061798459386640, -0.5384693101056831, 0.0,
                              0.5384693101056831, 0.9061798459386640},
                             {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                              0.4786286704993665, 0.2369268850561891}};
  static const GaussTable g7{{-0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
                              0.0, 0.4058451513773972, 0.7415311855993945, 0.9491079123427585},
                             {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                              0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                              0.1294849661688697}};
  switch (npts) {
    case 3: return g3;
    case 5: return g5;
    case 7: return g7;
    default: throw std::invalid_argument("gauss_table: npts must be 3, 5, or 7");
  }
}

}  // namespace

void gauss_segment(double a, double b, int npts, std::vector<double>& xs, std::vector<double>& ws) {
  const GaussTable& g = gauss_table(npts);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  xs.resize(npts);
  ws.resize(npts);
  for (int k = 0; k < npts; ++k) {
    xs[k] = mid + half * g.x[k];
    ws[k] = half * g.w[k];
  }
}

AreaRule tensor_gauss(const Box& b, int npts) {
  std::vector<double> xs, wx, ys, wy;
  gauss_segment(b.lo.x, b.hi.x, npts, xs, wx);
  gauss_segment(b.lo.y, b.hi.y, npts, ys, wy);
  AreaRule rule;
  rule.x.reserve(npts * npts);
  rule.w.reserve(npts * npts);
  for (int j = 0; j < npts; ++j)
    for (int i = 0; i < npts; ++i) {
      rule.x.push_back({xs[i], ys[j]});
      rule.w.push_back(wx[i] * wy[j]);
    }
  return rule;
}

}  // namespace ebs
