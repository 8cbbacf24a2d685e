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

#include "ebstokes/verification.hpp"

#include <cmath>

namespace ebs {

NormTriple norms_of(const Vector& e) {
  NormTriple n;
  const auto nc = e.size();
  if (nc == 0) return n;
  double s1 = 0, s2 = 0, si = 0;
  for (Eigen::Index k = 0; k < nc; ++k) {
    const double a = std::abs(e[k]);
    s1 += a;
    s2 += a * a;
    si = std::max(si, a);
  }
  n.l1 = s1 / nc;
  n.l2 = std::sqrt(s2 / nc);
  n.linf = si;
  return n;
}

NormTriple error_norms(const Vector& field, const Vector& exact) {
  if (field.size() != exact.size())
    throw std::invalid_argument("error_norms: mismatched valid-cell sets");
  return norms_of(field - exact);
}

double observed_rate(double err_coarse, double err_fine, double r) {
  if (!(err_coarse > 0) || !(err_fine > 0))
    throw std::invalid_argument("observed_rate: norms must be positive");
  if (!(r > 1)) throw std::invalid_argument("observed_rate: refinement ratio must exceed 1");
  return std::log(err_coarse / err_fine) / std::log(r);
}

void ConvergenceTable::fill_rates() {
  for (size_t k = 0; k < rows.size(); ++k) {
    if (k == 0) {
      rows[k].rate1 = rows[k].rate2 = rows[k].rateinf = 0;
      continue;
    }
    rows[k].rate1 = observed_rate(rows[k - 1].l1, rows[k].l1, ratio);
    rows[k].rate2 = observed_rate(rows[k - 1].l2, rows[k].l2, ratio);
    rows[k].rateinf = observed_rate(rows[k - 1].linf, rows[k].linf, ratio);
  }
}

Restriction restrict_fine_to_coarse(const CutCellGrid& coarse, const CutCellGrid& fine,
                                    const Vector& fine_vals) {
  if (fine.nx() != 2 * coarse.nx() || fine.ny() != 2 * coarse.ny())
    throw std::invalid_argument("restrict_fine_to_coarse: grids are not a dyadic pair");
  Restriction out;
  std::vector<double> vals;
  for (int id = 0; id < coarse.n_cells(); ++id) {
    const auto [i, j] = coarse.cell_ij(id);
    const int ci[4] = {2 * i, 2 * i + 1, 2 * i, 2 * i + 1};
    const int cj[4] = {2 * j, 2 * j, 2 * j + 1, 2 * j + 1};
    bool all_valid = true;
    double wsum = 0, acc = 0;
    for (int k = 0; k < 4; ++k) {
      const int fid = fine.cell_id(ci[k], cj[k]);
      if (fid < 0) {
        all_valid = false;
        break;
      }
      const double w = fine.volume(fid);
      wsum += w;
      acc += w * fine_vals[fid];
    }
    if (!all_valid) {
      ++out.excluded;
      continue;
    }
    out.coarse_cells.push_back(id);
    vals.push_back(acc / wsum);
  }
  out.values = Eigen::Map<Vector>(vals.data(), vals.size());
  return out;
}

namespace {

NormTriple diff_norms(const CutCellGrid& coarse, const Vector& coarse_vals,
                      const Restriction& r) {
  Vector e(r.coarse_cells.size());
  for (size_t k = 0; k < r.coarse_cells.size(); ++k)
    e[k] = coarse_vals[r.coarse_cells[k]] - r.values[k];
  (void)coarse;
  return norms_of(e);
}

}  // namespace

RichardsonResult richardson_rates(const CutCellGrid& gh, const Vector& sh,
                                  const CutCellGrid& gh2, const Vector& sh2,
                                  const CutCellGrid& gh4, const Vector& sh4) {
  RichardsonResult out;
  const Restriction r1 = restrict_fine_to_coarse(gh, gh2, sh2);
  const Restriction r2 = restrict_fine_to_coarse(gh2, gh4, sh4);
  out.excluded_coarse = r1.excluded;
  out.excluded_mid = r2.excluded;
  if (r1.coarse_cells.empty() || r2.coarse_cells.empty())
    throw std::invalid_argument("richardson_rates: empty comparable set");
  const NormTriple d1 = diff_norms(gh, sh, r1);
  const NormTriple d2 = diff_norms(gh2, sh2, r2);
  ConvergenceRow row1{gh.ny(), d1.l1, 0, d1.l2, 0, d1.linf, 0};
  ConvergenceRow row2{gh2.ny(), d2.l1, 0, d2.l2, 0, d2.linf, 0};
  out.table.rows = {row1, row2};
  out.table.fill_rates();
  return out;
}

}  // namespace ebs
