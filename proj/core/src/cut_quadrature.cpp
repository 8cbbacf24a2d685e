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

#include "ebstokes/cut_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ebs {

double bracket_root(const std::function<double(double)>& f, double a, double b,
                    double fa, double fb) {
  // Illinois-damped regula falsi with a bisection fallback.
  double x0 = a, x1 = b, f0 = fa, f1 = fb;
  for (int it = 0; it < 200; ++it) {
    const double denom = f1 - f0;
    double xm = (std::abs(denom) > 0) ? x1 - f1 * (x1 - x0) / denom : 0.5 * (x0 + x1);
    if (!(xm > std::min(x0, x1) && xm < std::max(x0, x1))) xm = 0.5 * (x0 + x1);
    const double fm = f(xm);
    if (fm == 0.0 || std::abs(x1 - x0) < 1e-15 * (std::abs(a) + std::abs(b) + std::abs(b - a)))
      return xm;
    if ((fm < 0) == (f0 < 0)) {
      x0 = xm;
      f0 = fm;
      f1 *= 0.5;  // Illinois damping
    } else {
      x1 = xm;
      f1 = fm;
      f0 *= 0.5;
    }
  }
  return 0.5 * (x0 + x1);
}

namespace {

struct LatticeScan {
  double vmin = 0, vmax = 0;
  double min_abs = 0;
  double gmax = 0;                  // max sampled |grad|
  double gmin_comp[2] = {0, 0};     // min |grad_d| over samples
  bool gsign_uniform[2] = {false, false};
  double cone_min_dot = 1.0;        // min pairwise dot of near-interface normals
  bool near_interface_seen = false;
};

LatticeScan scan_box(const ImplicitGeometry& geom, const Box& b, int n) {
  LatticeScan s;
  const double dx = (b.hi.x - b.lo.x) / (n - 1);
  const double dy = (b.hi.y - b.lo.y) / (n - 1);
  bool first = true;
  std::vector<Vec2> near_normals;
  std::vector<double> vals(n * n);
  std::vector<Vec2> grads(n * n);
  double pos_min[2] = {1e300, 1e300}, neg_max[2] = {-1e300, -1e300};
  bool has_pos[2] = {false, false}, has_neg[2] = {false, false};
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Vec2 p{b.lo.x + i * dx, b.lo.y + j * dy};
      const double v = geom.levelset(p);
      const Vec2 g = geom.gradient(p);
      vals[j * n + i] = v;
      grads[j * n + i] = g;
      if (first) {
        s.vmin = s.vmax = v;
        s.min_abs = std::abs(v);
        first = false;
      } else {
        s.vmin = std::min(s.vmin, v);
        s.vmax = std::max(s.vmax, v);
        s.min_abs = std::min(s.min_abs, std::abs(v));
      }
      s.gmax = std::max(s.gmax, g.norm());
      for (int d = 0; d < 2; ++d) {
        if (g[d] > 0) {
          has_pos[d] = true;
          pos_min[d] = std::min(pos_min[d], g[d]);
        } else {
          has_neg[d] = true;
          neg_max[d] = std::max(neg_max[d], g[d]);
        }
      }
    }
  }
  for (int d = 0; d < 2; ++d) {
    s.gsign_uniform[d] = (has_pos[d] != has_neg[d]);
    s.gmin_comp[d] = s.gsign_uniform[d] ? (has_pos[d] ? pos_min[d] : -neg_max[d]) : 0.0;
  }
  // normal variation among samples that could be near the interface
  const double near = s.gmax * b.diag();
  for (int k = 0; k < n * n; ++k) {
    if (std::abs(vals[k]) <= near) {
      const double gn = grads[k].norm();
      if (gn > 0) near_normals.push_back(grads[k] / gn);
    }
  }
  s.near_interface_seen = !near_normals.empty();
  for (size_t a = 0; a + 1 < near_normals.size(); ++a)
    for (size_t c = a + 1; c < near_normals.size(); ++c)
      s.cone_min_dot = std::min(s.cone_min_dot, near_normals[a].dot(near_normals[c]));
  return s;
}

class CellRuleBuilder {
 public:
  CellRuleBuilder(const ImplicitGeometry& geom, const CutQuadParams& p) : geom_(geom), p_(p) {}

  CellCutRules build(const Box& cell) {
    rules_ = CellCutRules{};
    recurse(cell, 0);
    return std::move(rules_);
  }

 private:
  void add_full_box(const Box& b) {
    AreaRule r = tensor_gauss(b, p_.gauss_pts);
    rules_.volume.x.insert(rules_.volume.x.end(), r.x.begin(), r.x.end());
    rules_.volume.w.insert(rules_.volume.w.end(), r.w.begin(), r.w.end());
  }

  void recurse(const Box& b, int depth) {
    const LatticeScan s = scan_box(geom_, b, p_.lattice);
    const int n = p_.lattice;
    const double sub_diag =
        std::hypot((b.hi.x - b.lo.x) / (n - 1), (b.hi.y - b.lo.y) / (n - 1));
    const double cover = p_.grad_safety * s.gmax * 0.5 * sub_diag;

    if (s.vmin > 0 && s.min_abs > cover) return;  // certified outside
    if (s.vmax < 0 && s.min_abs > cover) {        // certified inside
      add_full_box(b);
      return;
    }

    // try a certified height direction
    int hdir = -1;
    const bool cone_ok = !s.near_interface_seen || s.cone_min_dot >= p_.cone_cos;
    if (cone_ok) {
      const int pref = (s.gmin_comp[0] >= s.gmin_comp[1]) ? 0 : 1;
      for (int trial = 0; trial < 2 && hdir < 0; ++trial) {
        const int d = trial == 0 ? pref : 1 - pref;
        if (s.gsign_uniform[d] && s.gmin_comp[d] >= p_.height_margin * std::max(s.gmax, 1e-300))
          hdir = d;
      }
    }
    if (hdir >= 0) {
      graph_quad(b, hdir);
      return;
    }
    if (depth >= p_.max_depth) {
      // last resort: best-effort graph along the larger gradient component
      graph_quad(b, s.gmin_comp[0] >= s.gmin_comp[1] ? 0 : 1);
      return;
    }
    // bisect the longer axis (x on ties)
    const Vec2 e = b.extent();
    Box b1 = b, b2 = b;
    if (e.x >= e.y) {
      const double mid = 0.5 * (b.lo.x + b.hi.x);
      b1.hi.x = mid;
      b2.lo.x = mid;
    } else {
      const double mid = 0.5 * (b.lo.y + b.hi.y);
      b1.hi.y = mid;
      b2.lo.y = mid;
    }
    recurse(b1, depth + 1);
    recurse(b2, depth + 1);
  }

  // Interface is a single-valued graph over the tangent axis within `b`.
  // The tangent interval is split where the interface crosses the two
  // height-extreme edges, so each Gauss piece sees a smooth column profile.
  void graph_quad(const Box& b, int hdir) {
    const int tdir = 1 - hdir;
    const double hlo = b.lo[hdir], hhi = b.hi[hdir];

    std::vector<double> bp{b.lo[tdir], b.hi[tdir]};
    for (double hval : {hlo, hhi}) {
      auto edge = [&](double tval) {
        Vec2 q;
        q[tdir] = tval;
        q[hdir] = hval;
        return geom_.levelset(q);
      };
      const int M = 17;
      double prev_t = b.lo[tdir], prev_f = edge(prev_t);
      for (int k = 1; k < M; ++k) {
        const double t = b.lo[tdir] + (b.hi[tdir] - b.lo[tdir]) * k / (M - 1);
        const double f = edge(t);
        if ((prev_f < 0) != (f < 0)) bp.push_back(bracket_root(edge, prev_t, t, prev_f, f));
        prev_t = t;
        prev_f = f;
      }
    }
    std::sort(bp.begin(), bp.end());

    std::vector<double> ts, tw, hs, hw;
    for (size_t piece = 0; piece + 1 < bp.size(); ++piece) {
      if (bp[piece + 1] - bp[piece] < 1e-15 * (b.hi[tdir] - b.lo[tdir])) continue;
      gauss_segment(bp[piece], bp[piece + 1], p_.gauss_pts, ts, tw);
      piece_quad(b, hdir, tdir, hlo, hhi, ts, tw, hs, hw);
    }
  }

  void piece_quad(const Box& b, int hdir, int tdir, double hlo, double hhi,
                  const std::vector<double>& ts, const std::vector<double>& tw,
                  std::vector<double>& hs, std::vector<double>& hw) {
    for (int k = 0; k < p_.gauss_pts; ++k) {
      const double t = ts[k];
      auto col = [&](double hval) {
        Vec2 q;
        q[tdir] = t;
        q[hdir] = hval;
        return geom_.levelset(q);
      };
      const double fa = col(hlo);
      const double fb = col(hhi);
      double flo = hlo, fhi = hhi;  // fluid sub-interval
      bool has_fluid = true, has_cross = false;
      double root = 0;
      // endpoint values at round-off scale mean the interface grazes the
      // edge: the crossing sits on the edge itself and must still emit an
      // interface node, or tangency strips lose their closure contribution
      const double ztol = 1e-12 * (std::abs(fa) + std::abs(fb)) + 1e-300;
      const bool fa0 = std::abs(fa) <= ztol;
      const bool fb0 = std::abs(fb) <= ztol;
      if (fa0 && !fb0) {
        has_cross = true;
        root = hlo;
        has_fluid = fb < 0;
        if (!has_fluid) fhi = flo;
      } else if (fb0 && !fa0) {
        has_cross = true;
        root = hhi;
        has_fluid = fa < 0;
        if (!has_fluid) fhi = flo;
      } else if ((fa < 0) != (fb < 0)) {
        has_cross = true;
        root = bracket_root(col, hlo, hhi, fa, fb);
        if (fa < 0)
          fhi = root;
        else
          flo = root;
      } else if (fa >= 0 && fb >= 0) {
        has_fluid = col(0.5 * (hlo + hhi)) < 0;  // certified monotone: should not happen
        if (!has_fluid) {
          continue;
        }
      }
      if (has_fluid && fhi > flo) {
        gauss_segment(flo, fhi, p_.gauss_pts, hs, hw);
        for (int m = 0; m < p_.gauss_pts; ++m) {
          Vec2 q;
          q[tdir] = t;
          q[hdir] = hs[m];
          rules_.volume.x.push_back(q);
          rules_.volume.w.push_back(tw[k] * hw[m]);
        }
      }
      if (has_cross) {
        Vec2 q;
        q[tdir] = t;
        q[hdir] = root;
        const Vec2 g = geom_.gradient(q);
        const double gn = g.norm();
        const double gh = std::abs(g[hdir]);
        if (gn > 0 && gh > 0) {
          rules_.eb.x.push_back(q);
          rules_.eb.w.push_back(tw[k] * gn / gh);
          rules_.eb.n.push_back(g / gn);  // phi < 0 inside, so grad points outward
        }
      }
    }
    (void)b;
  }

  const ImplicitGeometry& geom_;
  const CutQuadParams& p_;
  CellCutRules rules_;
};

}  // namespace

CellCutRules build_cell_rules(const ImplicitGeometry& geom, const Box& cell,
                              const CutQuadParams& p) {
  CellRuleBuilder builder(geom, p);
  return builder.build(cell);
}

LineRule build_face_rule(const ImplicitGeometry& geom, Vec2 a, Vec2 b, Vec2 nudge,
                         const CutQuadParams& p) {
  const Vec2 dir = b - a;
  const double len = dir.norm();
  LineRule rule;
  if (len == 0) return rule;

  auto at = [&](double s) { return a + dir * s; };
  auto phi = [&](double s) { return geom.levelset(at(s)); };

  const int M = 33;
  std::vector<double> sv(M), fv(M);
  double max_abs = 0;
  for (int k = 0; k < M; ++k) {
    sv[k] = static_cast<double>(k) / (M - 1);
    fv[k] = phi(sv[k]);
    max_abs = std::max(max_abs, std::abs(fv[k]));
  }

  if (max_abs < 1e-13 * std::max(1.0, len)) {
    // segment lies on the interface; take area from the fluid side
    const Vec2 mid = at(0.5);
    const double off = 1e-7 * std::max(1.0, len);
    const bool fluid_side = geom.levelset(mid + nudge * off) < 0 ||
                            geom.levelset(mid - nudge * off) < 0;
    if (!fluid_side) return rule;
    std::vector<double> xs, ws;
    gauss_segment(0.0, 1.0, p.gauss_pts, xs, ws);
    for (int k = 0; k < p.gauss_pts; ++k) {
      rule.x.push_back(at(xs[k]));
      rule.w.push_back(ws[k] * len);
    }
    return rule;
  }

  // breakpoints: 0, refined roots, 1
  std::vector<double> bp{0.0};
  for (int k = 0; k + 1 < M; ++k) {
    if ((fv[k] < 0) != (fv[k + 1] < 0)) {
      bp.push_back(bracket_root(phi, sv[k], sv[k + 1], fv[k], fv[k + 1]));
    }
  }
  bp.push_back(1.0);
  std::sort(bp.begin(), bp.end());

  std::vector<double> xs, ws;
  for (size_t k = 0; k + 1 < bp.size(); ++k) {
    const double s0 = bp[k], s1 = bp[k + 1];
    if (s1 - s0 < 1e-14) continue;
    // classify the piece; round-off-level grazing counts as fluid so that
    // a face tangent to the interface keeps its full fluid measure
    if (phi(0.5 * (s0 + s1)) > 1e-13 * std::max(1.0, len)) continue;  // solid
    gauss_segment(s0, s1, p.gauss_pts, xs, ws);
    for (int m = 0; m < p.gauss_pts; ++m) {
      rule.x.push_back(at(xs[m]));
      rule.w.push_back(ws[m] * len);
    }
  }
  return rule;
}

}  // namespace ebs
