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
#include <string>
#include <vector>

#include "ebstokes/grid.hpp"
#include "ebstokes/sparse.hpp"

namespace ebs {

/// Unweighted solution-error norms over the N_c valid cells (cut cells
/// included, no volume weighting):
///   Linf = max|E|, L2 = sqrt(sum E^2 / N_c), L1 = sum|E| / N_c.
struct NormTriple {
  double l1 = 0.0, l2 = 0.0, linf = 0.0;
};

NormTriple norms_of(const Vector& e);
NormTriple error_norms(const Vector& field, const Vector& exact);

/// Q_obsv = log_r(err_coarse / err_fine).
double observed_rate(double err_coarse, double err_fine, double r);

struct ConvergenceRow {
  int n = 0;
  double l1 = 0, rate1 = 0, l2 = 0, rate2 = 0, linf = 0, rateinf = 0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double ratio = 2.0;
  /// Recomputes the rate columns from row 2 on.
  void fill_rates();
};

/// Conservative volume-weighted restriction of a fine solution onto the
/// 2x2-coarser grid. Only coarse cells whose four children are all valid
/// are comparable; the rest are counted in `excluded`.
struct Restriction {
  std::vector<int> coarse_cells;  // coarse valid ids, ascending
  Vector values;                  // restricted values on those cells
  int excluded = 0;
};

Restriction restrict_fine_to_coarse(const CutCellGrid& coarse, const CutCellGrid& fine,
                                    const Vector& fine_vals);

/// Richardson differences for three dyadic levels (h, h/2, h/4): norms of
/// s_h - R(s_{h/2}) and s_{h/2} - R(s_{h/4}) with the rate between them.
struct RichardsonResult {
  ConvergenceTable table;  // two rows: level h and level h/2
  int excluded_coarse = 0, excluded_mid = 0;
};

RichardsonResult richardson_rates(const CutCellGrid& gh, const Vector& sh,
                                  const CutCellGrid& gh2, const Vector& sh2,
                                  const CutCellGrid& gh4, const Vector& sh4);

}  // namespace ebs
