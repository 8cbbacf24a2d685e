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

#include "ebstokes/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ebstokes/runtime.hpp"

namespace ebs {

namespace {

enum class ScanVerdict { Fluid, Solid, Mixed, Uncertain };

// 9x9 sign lattice with a sampled Lipschitz certificate.
ScanVerdict scan_cell(const ImplicitGeometry& geom, const Box& b, int n, double safety,
                      bool* degenerate) {
  const double dx = (b.hi.x - b.lo.x) / (n - 1);
  const double dy = (b.hi.y - b.lo.y) / (n - 1);
  double vmin = 1e300, vmax = -1e300, min_abs = 1e300, gmax = 0;
  int zeros = 0;
  const double zero_tol = 1e-14 * std::max(1.0, b.diag());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Vec2 p{b.lo.x + i * dx, b.lo.y + j * dy};
      const double v = geom.levelset(p);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
      min_abs = std::min(min_abs, std::abs(v));
      if (std::abs(v) < zero_tol) ++zeros;
      gmax = std::max(gmax, geom.gradient(p).norm());
    }
  }
  *degenerate = (zeros == n * n);
  if (vmin < 0 && vmax > 0) return ScanVerdict::Mixed;
  const double cover = safety * gmax * 0.5 * std::hypot(dx, dy);
  if (min_abs > cover) return vmax <= 0 ? ScanVerdict::Fluid : ScanVerdict::Solid;
  // uniform sign but a crossing between samples cannot be excluded
  return ScanVerdict::Uncertain;
}

// Finer scan for classification-only refinement: 33x33 lattice.
CellClass refine_classify(const ImplicitGeometry& geom, const Box& b) {
  const int n = 33;
  const double dx = (b.hi.x - b.lo.x) / (n - 1);
  const double dy = (b.hi.y - b.lo.y) / (n - 1);
  double vmin = 1e300, vmax = -1e300;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double v = geom.levelset({b.lo.x + i * dx, b.lo.y + j * dy});
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  if (vmin < 0 && vmax > 0) return CellClass::Irregular;
  return vmax <= 0 ? CellClass::Regular : CellClass::Invalid;
}

}  // namespace

std::vector<CellClass> classify_cells(const ImplicitGeometry& geom, int nx, int ny, double h,
                                      Vec2 origin, const GridOptions& opt) {
  if (nx < 8 || ny < 8) throw GeometryError("classify_cells: nx, ny must be >= 8");
  if (!(h > 0)) throw GeometryError("classify_cells: h must be positive");
  std::vector<CellClass> cls(nx * ny, CellClass::Invalid);
  std::vector<std::string> errors(ny);
  parallel_for(0, ny, [&](int j) {
    for (int i = 0; i < nx; ++i) {
      const Vec2 lo{origin.x + i * h, origin.y + j * h};
      const Box b{lo, {lo.x + h, lo.y + h}};
      bool degenerate = false;
      const ScanVerdict v = scan_cell(geom, b, 9, opt.quad.grad_safety, &degenerate);
      if (degenerate) {
        std::ostringstream os;
        os << "classify_cells: levelset is identically zero on cell (" << i << "," << j << ")";
        errors[j] = os.str();
        return;
      }
      CellClass c;
      switch (v) {
        case ScanVerdict::Fluid: c = CellClass::Regular; break;
        case ScanVerdict::Solid: c = CellClass::Invalid; break;
        case ScanVerdict::Mixed: c = CellClass::Irregular; break;
        default: c = refine_classify(geom, b); break;
      }
      cls[j * nx + i] = c;
    }
  });
  for (const auto& e : errors)
    if (!e.empty()) throw GeometryError(e);
  return cls;
}

CutCellGrid CutCellGrid::build(const ImplicitGeometry& geom, int nx, int ny, double h,
                               Vec2 origin, const GridOptions& opt) {
  CutCellGrid g;
  g.nx_ = nx;
  g.ny_ = ny;
  g.h_ = h;
  g.origin_ = origin;
  g.geom_ = geom;
  g.opt_ = opt;

  g.cls_ = classify_cells(geom, nx, ny, h, origin, opt);

  // Moments and rules for cells the interface may touch; final class decided
  // by the computed volume fraction.
  struct CutWork {
    bool active = false;
    AreaRule vol_rule;
    LineRule eb_rule;
    double kappa = 0;
  };
  std::vector<CutWork> work(nx * ny);
  const double cell_vol = h * h;
  parallel_for(0, ny, [&](int j) {
    for (int i = 0; i < nx; ++i) {
      if (g.cls_[j * nx + i] != CellClass::Irregular) continue;
      CutWork& w = work[j * nx + i];
      w.active = true;
      CellCutRules rules = build_cell_rules(geom, g.cell_box(i, j), opt.quad);
      w.kappa = rules.volume.measure() / cell_vol;
      w.vol_rule = std::move(rules.volume);
      w.eb_rule = std::move(rules.eb);
    }
  });

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      CutWork& w = work[j * nx + i];
      if (!w.active) continue;
      if (w.kappa < opt.kappa_floor) {
        g.cls_[j * nx + i] = CellClass::Invalid;
        w.active = false;
      } else if (w.kappa > 1.0 - opt.kappa_floor && w.eb_rule.measure() < opt.kappa_floor * h) {
        g.cls_[j * nx + i] = CellClass::Regular;  // interface only grazes the cell
        w.active = false;
      }
    }
  }

  // Compressed valid indexing (row-major).
  g.cell_id_.assign(nx * ny, -1);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (g.cls_[j * nx + i] != CellClass::Invalid) {
        g.cell_id_[j * nx + i] = static_cast<int>(g.cells_.size());
        g.cells_.push_back(j * nx + i);
      }
  const int ncells = g.n_cells();
  g.kappa_.assign(ncells, 1.0);

  // Shared analytic moments for uncut entities (relative to own centers).
  const Box unit_cell{{-h / 2, -h / 2}, {h / 2, h / 2}};
  g.regular_moments_ = box_moments(unit_cell, {0, 0}, opt.degree);
  g.full_xface_moments_ = segment_moments({0, -h / 2}, {0, h / 2}, {0, 0}, opt.degree);
  g.full_yface_moments_ = segment_moments({-h / 2, 0}, {h / 2, 0}, {0, 0}, opt.degree);

  // Cut-cell moments and EB data.
  for (int id = 0; id < ncells; ++id) {
    const auto [i, j] = g.cell_ij(id);
    if (g.cls_[j * nx + i] != CellClass::Irregular) continue;
    CutWork& w = work[j * nx + i];
    const Vec2 c = g.cell_center(i, j);
    g.kappa_[id] = w.kappa;
    g.cut_vol_moments_.emplace(id, moments_from_area_rule(w.vol_rule, c, opt.degree));
    g.cut_vol_rules_.emplace(id, std::move(w.vol_rule));
    EbData eb;
    eb.area = w.eb_rule.measure();
    eb.plain = moments_from_line_rule(w.eb_rule, c, opt.degree);
    eb.nw[0] = normal_weighted_moments(w.eb_rule, c, opt.degree, 0);
    eb.nw[1] = normal_weighted_moments(w.eb_rule, c, opt.degree, 1);
    eb.centroid = eb.area > 0
                      ? c + Vec2{eb.plain.value({1, 0}), eb.plain.value({0, 1})} / eb.area
                      : c;
    eb.rule = std::move(w.eb_rule);
    g.eb_.emplace(id, std::move(eb));
  }

  // Faces.
  auto face_endpoints = [&](int axis, int fi, int fj, Vec2& a, Vec2& b) {
    if (axis == 0) {
      a = {origin.x + fi * h, origin.y + fj * h};
      b = {a.x, a.y + h};
    } else {
      a = {origin.x + fi * h, origin.y + fj * h};
      b = {a.x + h, a.y};
    }
  };
  auto build_faces = [&](int axis, std::vector<FaceRec>& recs) {
    const int fnx = axis == 0 ? nx + 1 : nx;
    const int fny = axis == 0 ? ny : ny + 1;
    recs.assign(fnx * fny, FaceRec{});
    std::vector<std::optional<std::pair<MomentSet, LineRule>>> cut(fnx * fny);
    parallel_for(0, fny, [&](int fj) {
      for (int fi = 0; fi < fnx; ++fi) {
        const int li = axis == 0 ? fi - 1 : fi;
        const int lj = axis == 0 ? fj : fj - 1;
        const int ri = fi, rj = fj;
        const bool lvalid = g.valid(li, lj);
        const bool rvalid = g.valid(ri, rj);
        FaceRec& rec = recs[fj * fnx + fi];
        if (!lvalid && !rvalid) continue;  // covered
        const bool lreg = lvalid && g.cls(li, lj) == CellClass::Regular;
        const bool rreg = rvalid && g.cls(ri, rj) == CellClass::Regular;
        if (lvalid && rvalid && lreg && rreg) {
          rec.status = FaceStatus::Full;
          rec.area = h;
          continue;
        }
        Vec2 a, b;
        face_endpoints(axis, fi, fj, a, b);
        const Vec2 nudge = axis == 0 ? Vec2{1, 0} : Vec2{0, 1};
        LineRule rule = build_face_rule(geom, a, b, nudge, opt.quad);
        const double area = rule.measure();
        if (area < opt.kappa_floor * h) continue;  // covered
        if (area > (1.0 - 1e-12) * h && lreg && rreg) {
          rec.status = FaceStatus::Full;
          rec.area = h;
          continue;
        }
        rec.status = FaceStatus::Cut;
        rec.area = area;
        const Vec2 fc = (a + b) * 0.5;
        cut[fj * fnx + fi] = std::make_pair(moments_from_line_rule(rule, fc, opt.degree),
                                            std::move(rule));
      }
    });
    for (int k = 0; k < fnx * fny; ++k) {
      if (cut[k]) {
        recs[k].cut_idx = static_cast<int>(g.cut_face_moments_.size());
        g.cut_face_moments_.push_back(std::move(cut[k]->first));
        g.cut_face_rules_.push_back(std::move(cut[k]->second));
      }
    }
  };
  build_faces(0, g.xfaces_);
  build_faces(1, g.yfaces_);

  // Boundary registry: EB segments, domain-boundary faces, and (degenerate)
  // full faces separating fluid from an invalid cell.
  g.cell_bfaces_.assign(ncells, {});
  auto add_bface = [&](BoundaryFace bf) {
    g.cell_bfaces_[bf.cell].push_back(static_cast<int>(g.bfaces_.size()));
    g.bfaces_.push_back(bf);
  };
  for (int id = 0; id < ncells; ++id) {
    const auto [i, j] = g.cell_ij(id);
    if (g.cls(i, j) == CellClass::Irregular && g.eb_.at(id).area > 0)
      add_bface({BoundaryPiece::Eb, id, -1, -1, -1, {0, 0}});
    // domain-boundary and fluid/invalid faces owned by this cell
    struct Side {
      int axis, fi, fj, ni, nj;
      Vec2 outward;
      BoundaryPiece dpiece;
    };
    const Side sides[4] = {
        {0, i, j, i - 1, j, {-1, 0}, BoundaryPiece::Xlo},
        {0, i + 1, j, i + 1, j, {1, 0}, BoundaryPiece::Xhi},
        {1, i, j, i, j - 1, {0, -1}, BoundaryPiece::Ylo},
        {1, i, j + 1, i, j + 1, {0, 1}, BoundaryPiece::Yhi},
    };
    for (const Side& s : sides) {
      const bool neighbor_exists = g.in_bounds(s.ni, s.nj);
      if (neighbor_exists && g.valid(s.ni, s.nj)) continue;
      if (g.face_status(s.axis, s.fi, s.fj) == FaceStatus::Covered) continue;
      const BoundaryPiece piece = neighbor_exists ? BoundaryPiece::Eb : s.dpiece;
      add_bface({piece, id, s.axis, s.fi, s.fj, s.outward});
    }
  }

  if (opt.check_closure) {
    const double defect = g.max_closure_defect();
    if (defect > opt.closure_tol) {
      std::ostringstream os;
      os << "CutCellGrid::build: per-cell closure defect " << defect << " exceeds "
         << opt.closure_tol;
      throw GeometryError(os.str());
    }
  }
  return g;
}

MomentSet CutCellGrid::vol_moments(int id) const {
  auto it = cut_vol_moments_.find(id);
  if (it != cut_vol_moments_.end()) return it->second;
  MomentSet m = regular_moments_;
  const auto [i, j] = cell_ij(id);
  m.center = cell_center(i, j);
  return m;
}

const CutCellGrid::FaceRec& CutCellGrid::face_rec(int axis, int fi, int fj) const {
  const int fnx = axis == 0 ? nx_ + 1 : nx_;
  return (axis == 0 ? xfaces_ : yfaces_)[fj * fnx + fi];
}

FaceStatus CutCellGrid::face_status(int axis, int fi, int fj) const {
  return face_rec(axis, fi, fj).status;
}

double CutCellGrid::face_area(int axis, int fi, int fj) const {
  return face_rec(axis, fi, fj).area;
}

Vec2 CutCellGrid::face_center(int axis, int fi, int fj) const {
  if (axis == 0) return {origin_.x + fi * h_, origin_.y + (fj + 0.5) * h_};
  return {origin_.x + (fi + 0.5) * h_, origin_.y + fj * h_};
}

MomentSet CutCellGrid::face_moments(int axis, int fi, int fj) const {
  const FaceRec& rec = face_rec(axis, fi, fj);
  if (rec.status == FaceStatus::Covered)
    throw GeometryError("face_moments: covered face has no moments");
  if (rec.status == FaceStatus::Cut) return cut_face_moments_[rec.cut_idx];
  MomentSet m = axis == 0 ? full_xface_moments_ : full_yface_moments_;
  m.center = face_center(axis, fi, fj);
  return m;
}

const EbData& CutCellGrid::eb(int id) const { return eb_.at(id); }

double CutCellGrid::min_kappa() const {
  double k = 1.0;
  for (double v : kappa_) k = std::min(k, v);
  return k;
}

double CutCellGrid::bface_area(int k) const {
  const BoundaryFace& bf = bfaces_[k];
  if (bf.axis < 0) return eb_.at(bf.cell).area;
  return face_area(bf.axis, bf.fi, bf.fj);
}

Vec2 CutCellGrid::bface_centroid(int k) const {
  const BoundaryFace& bf = bfaces_[k];
  if (bf.axis < 0) return eb_.at(bf.cell).centroid;
  const MomentSet& m = face_moments(bf.axis, bf.fi, bf.fj);
  const double a = m.m0();
  if (a <= 0) return m.center;
  return m.center + Vec2{m.value({1, 0}), m.value({0, 1})} / a;
}

MomentSet CutCellGrid::bface_plain_moments(int k) const {
  const BoundaryFace& bf = bfaces_[k];
  if (bf.axis < 0) return eb_.at(bf.cell).plain;
  return face_moments(bf.axis, bf.fi, bf.fj);
}

MomentSet CutCellGrid::bface_nw_moments(int k, int d) const {
  const BoundaryFace& bf = bfaces_[k];
  if (bf.axis < 0) return eb_.at(bf.cell).nw[d];
  MomentSet m = face_moments(bf.axis, bf.fi, bf.fj);
  const double nd = bf.outward[d];
  for (double& v : m.values) v *= nd;
  return m;
}

LineRule CutCellGrid::bface_rule(int k) const {
  const BoundaryFace& bf = bfaces_[k];
  if (bf.axis < 0) return eb_.at(bf.cell).rule;
  const FaceRec& rec = face_rec(bf.axis, bf.fi, bf.fj);
  LineRule rule;
  if (rec.status == FaceStatus::Cut) {
    rule = cut_face_rules_[rec.cut_idx];
  } else if (rec.status == FaceStatus::Full) {
    std::vector<double> xs, ws;
    const Vec2 c = face_center(bf.axis, bf.fi, bf.fj);
    if (bf.axis == 0) {
      gauss_segment(c.y - h_ / 2, c.y + h_ / 2, opt_.quad.gauss_pts, xs, ws);
      for (size_t m = 0; m < xs.size(); ++m) {
        rule.x.push_back({c.x, xs[m]});
        rule.w.push_back(ws[m]);
      }
    } else {
      gauss_segment(c.x - h_ / 2, c.x + h_ / 2, opt_.quad.gauss_pts, xs, ws);
      for (size_t m = 0; m < xs.size(); ++m) {
        rule.x.push_back({xs[m], c.y});
        rule.w.push_back(ws[m]);
      }
    }
  }
  rule.n.assign(rule.x.size(), bf.outward);
  return rule;
}

double CutCellGrid::integrate_cell(int id, const std::function<double(Vec2)>& f) const {
  auto it = cut_vol_rules_.find(id);
  if (it != cut_vol_rules_.end()) return it->second.integrate(f);
  const auto [i, j] = cell_ij(id);
  return tensor_gauss(cell_box(i, j), 5).integrate(f);
}

double CutCellGrid::max_closure_defect() const {
  double worst = 0.0;
  for (const auto& [id, eb] : eb_) {
    const auto [i, j] = cell_ij(id);
    for (int d = 0; d < 2; ++d) {
      const double alo = face_area(d, i, j);
      const double ahi = d == 0 ? face_area(d, i + 1, j) : face_area(d, i, j + 1);
      const double net = ahi - alo + eb.nw[d].m0();
      const double scale = std::abs(ahi) + std::abs(alo) + std::abs(eb.nw[d].m0()) + h_;
      worst = std::max(worst, std::abs(net) / scale);
    }
  }
  return worst;
}

}  // namespace ebs
