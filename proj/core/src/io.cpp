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

#include "ebstokes/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace ebs {

namespace fs = std::filesystem;

void ensure_dir(const std::string& path) {
  if (!path.empty()) fs::create_directories(path);
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("write_text_atomic: cannot open " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

std::string field_snapshot_csv(const CutCellGrid& grid, const Vector& u, const Vector& v,
                               const Vector& div) {
  std::ostringstream os;
  os.precision(17);
  os << "i,j,x_c,y_c,kappa,u,v,div\n";
  for (int id = 0; id < grid.n_cells(); ++id) {
    const auto [i, j] = grid.cell_ij(id);
    const Vec2 c = grid.cell_center(i, j);
    os << i << "," << j << "," << c.x << "," << c.y << "," << grid.kappa_of(id) << ","
       << u[id] << "," << v[id] << "," << (div.size() == u.size() ? div[id] : 0.0) << "\n";
  }
  return os.str();
}

std::string moment_dump_csv(const CutCellGrid& grid) {
  std::ostringstream os;
  os.precision(17);
  os << "i,j,qx,qy,kind,value\n";
  const auto qs = multi_index_set(2, grid.moment_degree());
  auto emit = [&](int i, int j, const char* kind, const MomentSet& m) {
    for (const MultiIndex& q : qs)
      os << i << "," << j << "," << q.qx << "," << q.qy << "," << kind << "," << m.value(q)
         << "\n";
  };
  for (int id = 0; id < grid.n_cells(); ++id) {
    const auto [i, j] = grid.cell_ij(id);
    emit(i, j, "vol", grid.vol_moments(id));
    if (grid.is_irregular(id)) {
      emit(i, j, "ebx", grid.eb(id).nw[0]);
      emit(i, j, "eby", grid.eb(id).nw[1]);
    }
  }
  for (int fj = 0; fj < grid.ny(); ++fj)
    for (int fi = 0; fi <= grid.nx(); ++fi)
      if (grid.face_status(0, fi, fj) != FaceStatus::Covered)
        emit(fi, fj, "facex", grid.face_moments(0, fi, fj));
  for (int fj = 0; fj <= grid.ny(); ++fj)
    for (int fi = 0; fi < grid.nx(); ++fi)
      if (grid.face_status(1, fi, fj) != FaceStatus::Covered)
        emit(fi, fj, "facey", grid.face_moments(1, fi, fj));
  return os.str();
}

std::pair<std::string, std::string> operator_dump_csv(const AffineOperator& op) {
  std::ostringstream a, b;
  a.precision(17);
  b.precision(17);
  a << "row_cell,col_cell,value\n";
  for (size_t comp = 0; comp < op.A.size(); ++comp)
    for (int r = 0; r < op.A[comp].outerSize(); ++r)
      for (SpMat::InnerIterator it(op.A[comp], r); it; ++it)
        a << it.row() << "," << it.col() << "," << it.value() << "\n";
  b << "row_cell,bface,value\n";
  for (int r = 0; r < op.B.outerSize(); ++r)
    for (SpMat::InnerIterator it(op.B, r); it; ++it)
      b << it.row() << "," << it.col() << "," << it.value() << "\n";
  return {a.str(), b.str()};
}

std::string convergence_table_csv(const ConvergenceTable& table) {
  std::ostringstream os;
  os.precision(12);
  os << "N,L1,Rate(L1),L2,Rate(L2),Linf,Rate(Linf)\n";
  for (size_t k = 0; k < table.rows.size(); ++k) {
    const ConvergenceRow& r = table.rows[k];
    os << r.n << "," << r.l1 << ",";
    if (k > 0) os << r.rate1;
    os << "," << r.l2 << ",";
    if (k > 0) os << r.rate2;
    os << "," << r.linf << ",";
    if (k > 0) os << r.rateinf;
    os << "\n";
  }
  return os.str();
}

}  // namespace ebs
