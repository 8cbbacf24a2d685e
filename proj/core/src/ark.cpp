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

#include "ebstokes/ark.hpp"

#include <cmath>

#include "ebstokes/types.hpp"

namespace ebs {

ArkTableau ArkTableau::ark436l2sa() {
  ArkTableau t;
  t.stages = 6;
  t.gamma = 0.25;
  t.a_ex = Eigen::MatrixXd::Zero(6, 6);
  t.a_im = Eigen::MatrixXd::Zero(6, 6);
  t.b = Eigen::VectorXd::Zero(6);
  t.c = Eigen::VectorXd::Zero(6);

  t.b << 82889.0 / 524892.0, 0.0, 15625.0 / 83664.0, 69875.0 / 102672.0, -2260.0 / 8211.0, 0.25;
  t.c << 0.0, 0.5, 83.0 / 250.0, 31.0 / 50.0, 17.0 / 20.0, 1.0;

  auto& ae = t.a_ex;
  ae(1, 0) = 0.5;
  ae(2, 0) = 13861.0 / 62500.0;
  ae(2, 1) = 6889.0 / 62500.0;
  ae(3, 0) = -116923316275.0 / 2393684061468.0;
  ae(3, 1) = -2731218467317.0 / 15368042101831.0;
  ae(3, 2) = 9408046702089.0 / 11113171139209.0;
  ae(4, 0) = -451086348788.0 / 2902428689909.0;
  ae(4, 1) = -2682348792572.0 / 7519795681897.0;
  ae(4, 2) = 12662868775082.0 / 11960479115383.0;
  ae(4, 3) = 3355817975965.0 / 11060851509271.0;
  ae(5, 0) = 647845179188.0 / 3216320057751.0;
  ae(5, 1) = 73281519250.0 / 8382639484533.0;
  ae(5, 2) = 552539513391.0 / 3454668386233.0;
  ae(5, 3) = 3354512671639.0 / 8306763924573.0;
  ae(5, 4) = 4040.0 / 17871.0;

  auto& ai = t.a_im;
  ai(1, 0) = 0.25;
  ai(1, 1) = 0.25;
  ai(2, 0) = 8611.0 / 62500.0;
  ai(2, 1) = -1743.0 / 31250.0;
  ai(2, 2) = 0.25;
  ai(3, 0) = 5012029.0 / 34652500.0;
  ai(3, 1) = -654441.0 / 2922500.0;
  ai(3, 2) = 174375.0 / 388108.0;
  ai(3, 3) = 0.25;
  ai(4, 0) = 15267082809.0 / 155376265600.0;
  ai(4, 1) = -71443401.0 / 120774400.0;
  ai(4, 2) = 730878875.0 / 902184768.0;
  ai(4, 3) = 2285395.0 / 8070912.0;
  ai(4, 4) = 0.25;
  for (int j = 0; j < 6; ++j) ai(5, j) = t.b[j];  // stiffly accurate
  return t;
}

double implicit_stability_function(const ArkTableau& tab, double z) {
  const int s = tab.stages;
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(s, s) - z * tab.a_im;
  Eigen::VectorXd k = M.partialPivLu().solve(Eigen::VectorXd::Ones(s));
  return 1.0 + z * tab.b.dot(k);
}

TableauReport validate_tableau(const ArkTableau& tab) {
  TableauReport rep;
  const int s = tab.stages;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(s);

  for (int i = 0; i < s; ++i) {
    rep.max_row_sum_residual =
        std::max(rep.max_row_sum_residual, std::abs(tab.a_ex.row(i).sum() - tab.c[i]));
    rep.max_row_sum_residual =
        std::max(rep.max_row_sum_residual, std::abs(tab.a_im.row(i).sum() - tab.c[i]));
  }

  const Eigen::VectorXd& b = tab.b;
  const Eigen::VectorXd& c = tab.c;
  const Eigen::VectorXd c2 = c.array().square().matrix();
  const Eigen::VectorXd c3 = c.array().cube().matrix();
  const Eigen::MatrixXd A[2] = {tab.a_ex, tab.a_im};
  const char* name[2] = {"ex", "im"};

  auto push = [&rep](const std::string& label, double got, double want) {
    rep.order_residuals.emplace_back(label, std::abs(got - want));
  };

  push("order1: b.1", b.sum(), 1.0);
  push("order2: b.c", b.dot(c), 0.5);
  push("order3: b.c^2", b.dot(c2), 1.0 / 3.0);
  for (int v = 0; v < 2; ++v)
    push(std::string("order3: b.A_") + name[v] + ".c", b.dot(A[v] * c), 1.0 / 6.0);
  push("order4: b.c^3", b.dot(c3), 0.25);
  for (int v = 0; v < 2; ++v) {
    push(std::string("order4: (b*c).A_") + name[v] + ".c",
         (b.array() * c.array()).matrix().dot(A[v] * c), 1.0 / 8.0);
    push(std::string("order4: b.A_") + name[v] + ".c^2", b.dot(A[v] * c2), 1.0 / 12.0);
  }
  for (int v = 0; v < 2; ++v)
    for (int u = 0; u < 2; ++u)
      push(std::string("order4: b.A_") + name[v] + ".A_" + name[u] + ".c",
           b.dot(A[v] * (A[u] * c)), 1.0 / 24.0);

  for (const auto& [label, r] : rep.order_residuals)
    rep.max_order_residual = std::max(rep.max_order_residual, r);

  rep.stiff_limit_mag = std::abs(implicit_stability_function(tab, -1e6));
  rep.valid = rep.max_row_sum_residual < 1e-10 && rep.max_order_residual < 1e-10 &&
              rep.stiff_limit_mag < 1e-4;
  return rep;
}

StageSolver::StageSolver(const SpMat& A, double nu, double dt, double gamma) : dt_(dt) {
  SpMat M(A.rows(), A.cols());
  M.setIdentity();
  M = M - (dt * gamma * nu) * A;
  M.makeCompressed();
  lu_ = std::make_unique<Factorized>(M);
}

Vector StageSolver::solve(const Vector& rhs) const { return lu_->solve(rhs); }

Vector ark_step(const Vector& u, double t, double dt, const ImexProblem& prob,
                const ArkTableau& tab, const StageSolver& solver) {
  if (!(dt > 0)) throw SolverError("ark_step: dt must be positive");
  if (solver.dt() != dt) throw SolverError("ark_step: solver was built for a different dt");
  const int s = tab.stages;
  const double g = tab.gamma;
  const auto n = u.size();

  std::vector<Vector> fim(s), fex(s);
  auto bterm = [&](double tt) {
    return prob.boundary_term ? prob.boundary_term(tt) : Vector(Vector::Zero(n));
  };
  auto src = [&](const Vector& uu, double tt) {
    return prob.source ? prob.source(uu, tt) : Vector(Vector::Zero(n));
  };

  // stage 1 is explicit
  fim[0] = prob.nu * ((*prob.A) * u + bterm(t + tab.c[0] * dt));
  fex[0] = src(u, t + tab.c[0] * dt);

  for (int i = 1; i < s; ++i) {
    Vector acc = u;
    for (int j = 0; j < i; ++j) {
      if (tab.a_ex(i, j) != 0.0) acc += (dt * tab.a_ex(i, j)) * fex[j];
      if (tab.a_im(i, j) != 0.0) acc += (dt * tab.a_im(i, j)) * fim[j];
    }
    const double ti = t + tab.c[i] * dt;
    const Vector bg = bterm(ti);
    const Vector rhs = acc + (dt * g * prob.nu) * bg;
    const Vector ui = solver.solve(rhs);
    // recover the implicit stage derivative from the stage equation
    fim[i] = (ui - acc) / (dt * g);
    fex[i] = src(ui, ti);
  }

  Vector out = u;
  for (int j = 0; j < s; ++j) {
    if (tab.b[j] == 0.0) continue;
    out += (dt * tab.b[j]) * (fim[j] + fex[j]);
  }
  return out;
}

}  // namespace ebs
