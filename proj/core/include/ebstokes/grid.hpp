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

#include <optional>
#include <unordered_map>
#include <vector>

#include "ebstokes/cut_quadrature.hpp"
#include "ebstokes/geometry.hpp"
#include "ebstokes/moments.hpp"
#include "ebstokes/types.hpp"

namespace ebs {

enum class FaceStatus : unsigned char { Covered, Full, Cut };

enum class BoundaryPiece : unsigned char { Eb, Xlo, Xhi, Ylo, Yhi };

/// One boundary segment contributing boundary-condition rows and data: the
/// EB segment of an irregular cell, a domain-boundary face of a valid cell,
/// or (degenerate) a full face separating fluid from an invalid cell.
struct BoundaryFace {
  BoundaryPiece piece;
  int cell;          // valid cell id
  int axis = -1;     // >=0 for grid-aligned segments
  int fi = -1, fj = -1;
  Vec2 outward;      // constant outward normal for grid-aligned segments
};

struct EbData {
  double area = 0.0;     // arc length
  Vec2 centroid;         // area-average centroid
  MomentSet plain;       // about the uncut cell center
  MomentSet nw[2];       // outward-normal-weighted, about the uncut cell center
  LineRule rule;
};

struct GridOptions {
  int degree = 5;                 // stored moment degree
  CutQuadParams quad;
  double kappa_floor = 1e-12;     // below: reclassified invalid
  double closure_tol = 1e-10;     // per-cell geometric closure check
  bool check_closure = true;
};

/// Classification only (no moments): invalid iff entirely outside the fluid,
/// irregular iff the interface intersects the cell, regular otherwise.
std::vector<CellClass> classify_cells(const ImplicitGeometry& geom, int nx, int ny, double h,
                                      Vec2 origin, const GridOptions& opt = {});

/// Cartesian index space with per-cell classification, volume fractions,
/// and volume/face/EB moments to the stored degree. Immutable once built.
class CutCellGrid {
 public:
  static CutCellGrid build(const ImplicitGeometry& geom, int nx, int ny, double h, Vec2 origin,
                           const GridOptions& opt = {});

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  Vec2 origin() const { return origin_; }
  const ImplicitGeometry& geometry() const { return geom_; }
  int moment_degree() const { return opt_.degree; }

  CellClass cls(int i, int j) const { return cls_[j * nx_ + i]; }
  bool in_bounds(int i, int j) const { return i >= 0 && i < nx_ && j >= 0 && j < ny_; }
  bool valid(int i, int j) const {
    return in_bounds(i, j) && cls(i, j) != CellClass::Invalid;
  }
  /// Compressed valid-cell index (row-major order) or -1.
  int cell_id(int i, int j) const {
    return in_bounds(i, j) ? cell_id_[j * nx_ + i] : -1;
  }
  int n_cells() const { return static_cast<int>(cells_.size()); }
  std::pair<int, int> cell_ij(int id) const {
    const int flat = cells_[id];
    return {flat % nx_, flat / nx_};
  }
  Vec2 cell_center(int i, int j) const {
    return {origin_.x + (i + 0.5) * h_, origin_.y + (j + 0.5) * h_};
  }
  Box cell_box(int i, int j) const {
    const Vec2 lo{origin_.x + i * h_, origin_.y + j * h_};
    return {lo, {lo.x + h_, lo.y + h_}};
  }
  double kappa_of(int id) const { return kappa_[id]; }
  double min_kappa() const;
  double volume(int id) const { return kappa_[id] * h_ * h_; }
  bool is_irregular(int id) const {
    const auto [i, j] = cell_ij(id);
    return cls(i, j) == CellClass::Irregular;
  }
  int n_irregular() const { return static_cast<int>(eb_.size()); }

  /// Volume moments about the uncut cell center, degree = moment_degree().
  /// Returned by value: regular cells share one table whose center is
  /// stamped per call.
  MomentSet vol_moments(int id) const;

  /// Faces. Axis 0: x-faces indexed (fi in 0..nx, fj in 0..ny-1), the face
  /// between cells (fi-1,fj) and (fi,fj). Axis 1: y-faces (fi in 0..nx-1,
  /// fj in 0..ny), between (fi,fj-1) and (fi,fj).
  FaceStatus face_status(int axis, int fi, int fj) const;
  double face_area(int axis, int fi, int fj) const;
  Vec2 face_center(int axis, int fi, int fj) const;
  MomentSet face_moments(int axis, int fi, int fj) const;

  const EbData& eb(int id) const;

  const std::vector<BoundaryFace>& boundary_faces() const { return bfaces_; }
  const std::vector<int>& cell_boundary_faces(int id) const { return cell_bfaces_[id]; }
  double bface_area(int k) const;
  Vec2 bface_centroid(int k) const;
  /// Plain moments of boundary face k (center embedded in the MomentSet).
  MomentSet bface_plain_moments(int k) const;
  /// Outward-normal-weighted moments of boundary face k in direction d.
  MomentSet bface_nw_moments(int k, int d) const;
  /// Quadrature rule with outward unit normals filled per node.
  LineRule bface_rule(int k) const;

  /// Integral of f over the fluid part of cell id.
  double integrate_cell(int id, const std::function<double(Vec2)>& f) const;
  double cell_average(int id, const std::function<double(Vec2)>& f) const {
    return integrate_cell(id, f) / volume(id);
  }

  /// Max relative per-cell closure defect over irregular cells.
  double max_closure_defect() const;

 private:
  int nx_ = 0, ny_ = 0;
  double h_ = 0;
  Vec2 origin_;
  ImplicitGeometry geom_;
  GridOptions opt_;

  std::vector<CellClass> cls_;
  std::vector<int> cell_id_;   // flat -> valid id
  std::vector<int> cells_;     // valid id -> flat
  std::vector<double> kappa_;

  MomentSet regular_moments_;          // shared, about own center
  MomentSet full_xface_moments_;       // shared, about own center
  MomentSet full_yface_moments_;
  std::unordered_map<int, MomentSet> cut_vol_moments_;    // key: valid id
  std::unordered_map<int, AreaRule> cut_vol_rules_;
  std::unordered_map<int, EbData> eb_;

  struct FaceRec {
    FaceStatus status = FaceStatus::Covered;
    double area = 0.0;
    int cut_idx = -1;
  };
  std::vector<FaceRec> xfaces_, yfaces_;
  std::vector<MomentSet> cut_face_moments_;
  std::vector<LineRule> cut_face_rules_;

  std::vector<BoundaryFace> bfaces_;
  std::vector<std::vector<int>> cell_bfaces_;

  const FaceRec& face_rec(int axis, int fi, int fj) const;
};

}  // namespace ebs
