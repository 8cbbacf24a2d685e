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

#include <string>

#include "ebstokes/operators.hpp"
#include "ebstokes/verification.hpp"

namespace ebs {

void ensure_dir(const std::string& path);

/// Writes via a temp file + rename so readers never see partial content.
void write_text_atomic(const std::string& path, const std::string& content);

/// Field snapshot: i, j, x_c, y_c, kappa, u, v, div.
std::string field_snapshot_csv(const CutCellGrid& grid, const Vector& u, const Vector& v,
                               const Vector& div);

/// Moment dump: i, j, qx, qy, kind in {vol, facex, facey, ebx, eby}, value.
std::string moment_dump_csv(const CutCellGrid& grid);

/// Operator dump: (row_cell, col_cell, value) triplets; boundary triplets
/// (row_cell, bface, value) go to the second string.
std::pair<std::string, std::string> operator_dump_csv(const AffineOperator& op);

/// Table-mirroring CSV: N, L1, Rate(L1), L2, Rate(L2), Linf, Rate(Linf).
std::string convergence_table_csv(const ConvergenceTable& table);

}  // namespace ebs
