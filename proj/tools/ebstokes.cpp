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

#include <CLI11.hpp>
#include <chrono>
#include <iostream>
#include <json.hpp>

#include "ebstokes/ark.hpp"
#include "ebstokes/cases.hpp"
#include "ebstokes/io.hpp"
#include "ebstokes/runtime.hpp"
#include "ebstokes/studies.hpp"

namespace {

using nlohmann::json;
using ebs::Vector;

constexpr const char* kVersion = "0.1.0";

struct Manifest {
  json j;
  std::vector<std::string> files;

  Manifest(const std::string& command) {
    j["tool"] = "ebstokes";
    j["version"] = kVersion;
    j["command"] = command;
  }
  void add_file(const std::string& path) { files.push_back(path); }
  void finalize(const std::string& out_dir, double wall_s, bool ok) {
    j["wall_seconds"] = wall_s;
    j["ok"] = ok;
    j["outputs"] = files;
    ebs::write_text_atomic(out_dir + "/manifest.json", j.dump(2) + "\n");
  }
};

int set_log(int level) {
  ebs::set_log_level(level <= 0 ? ebs::LogLevel::Quiet
                                : (level == 1 ? ebs::LogLevel::Info : ebs::LogLevel::Debug));
  return level;
}

ebs::CaseConfig load_config(const std::string& path,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
  ebs::CaseConfig cfg = ebs::parse_config(path);
  for (const auto& [k, v] : overrides) ebs::apply_override(cfg, k, v);
  ebs::resolve_defaults(cfg);
  ebs::validate_config(cfg);
  return cfg;
}

int cmd_run(const std::string& config_path,
            const std::vector<std::pair<std::string, std::string>>& overrides) {
  const auto t0 = std::chrono::steady_clock::now();
  ebs::CaseConfig cfg = load_config(config_path, overrides);
  ebs::ensure_dir(cfg.out_dir);
  Manifest man("run");
  man.j["config"] = ebs::echo_config(cfg);

  const ebs::CaseSetup cs = ebs::build_case(cfg);
  ebs::StokesState s = ebs::initialize(cs, cfg.t0);
  ebs::log_info("grid: " + std::to_string(cs.grid->n_cells()) + " valid cells, " +
                std::to_string(cs.grid->n_irregular()) + " irregular, min kappa " +
                std::to_string(cs.grid->min_kappa()));

  std::ostringstream divhist, residhist;
  divhist.precision(17);
  residhist.precision(17);
  divhist << "step,L1,L2,Linf\n";
  residhist << "step,residual\n";

  auto snapshot = [&](int step, const ebs::StokesState& st) {
    Vector div = Vector::Zero(st.u.size());
    if (cfg.project) div = cs.proj.Dv.apply(st.u, st.v, st.t);
    const std::string p = cfg.out_dir + "/fields_" + std::to_string(step) + ".csv";
    ebs::write_text_atomic(p, ebs::field_snapshot_csv(*cs.grid, st.u, st.v, div));
    man.add_file(p);
  };

  bool converged = true;
  ebs::StokesStepper stepper(cs, cfg.dt);
  int step = 0;
  if (cfg.steps > 0) {
    for (; step < cfg.steps; ++step) {
      s = stepper.advance(s);
      if (cfg.project) {
        const auto& d = stepper.last_divergence();
        divhist << step + 1 << "," << d.l1 << "," << d.l2 << "," << d.linf << "\n";
      }
      if (cfg.snapshot_every > 0 && (step + 1) % cfg.snapshot_every == 0) snapshot(step + 1, s);
    }
  } else {
    for (; step < cfg.max_steps; ++step) {
      const ebs::StokesState prev = s;
      s = stepper.advance(s);
      double dmax = 0.0;
      for (Eigen::Index m = 0; m < s.u.size(); ++m) {
        dmax = std::max(dmax, std::abs(s.u[m] - prev.u[m]));
        dmax = std::max(dmax, std::abs(s.v[m] - prev.v[m]));
      }
      const double resid = dmax / cfg.dt;
      residhist << step + 1 << "," << resid << "\n";
      if (cfg.project) {
        const auto& d = stepper.last_divergence();
        divhist << step + 1 << "," << d.l1 << "," << d.l2 << "," << d.linf << "\n";
      }
      if (cfg.snapshot_every > 0 && (step + 1) % cfg.snapshot_every == 0) snapshot(step + 1, s);
      if (resid < cfg.steady_tol) break;
    }
    converged = step < cfg.max_steps;
    if (!converged) ebs::log_info("run: step cap reached before steady state");
  }

  snapshot(step, s);
  if (cfg.project) {
    const std::string p = cfg.out_dir + "/divergence_history.csv";
    ebs::write_text_atomic(p, divhist.str());
    man.add_file(p);
  }
  if (cfg.steps == 0) {
    const std::string p = cfg.out_dir + "/residual_history.csv";
    ebs::write_text_atomic(p, residhist.str());
    man.add_file(p);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  man.finalize(cfg.out_dir, wall, converged);
  return converged ? 0 : 2;
}

int cmd_study(const std::string& name, int max_n, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!ebs::is_study_name(name)) {
    std::cerr << "unknown study '" << name << "'; expected one of:";
    for (const auto& s : ebs::study_names()) std::cerr << " " << s;
    std::cerr << "\n";
    return 1;
  }
  ebs::StudyOptions opt;
  opt.max_n = max_n;
  opt.out_dir = out_dir;
  const ebs::StudyResult res = ebs::run_study(name, opt);
  for (const auto& m : res.messages) std::cout << m << "\n";
  if (!res.table.rows.empty()) std::cout << ebs::convergence_table_csv(res.table);

  Manifest man("study");
  man.j["study"] = name;
  man.j["passed"] = res.passed;
  json checks = json::array();
  for (const auto& m : res.messages) checks.push_back(m);
  man.j["checks"] = checks;
  for (const auto& a : res.artifacts) man.add_file(a);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ebs::ensure_dir(out_dir + "/" + name);
  man.finalize(out_dir + "/" + name, wall, res.passed);
  std::cout << (res.passed ? "STUDY PASS " : "STUDY FAIL ") << name << "\n";
  return res.passed ? 0 : 3;
}

int cmd_dump_geometry(const std::string& config_path,
                      const std::vector<std::pair<std::string, std::string>>& overrides) {
  ebs::CaseConfig cfg = load_config(config_path, overrides);
  ebs::ensure_dir(cfg.out_dir);
  const ebs::ImplicitGeometry geom = ebs::case_geometry(cfg.geometry, cfg.geom_params);
  const ebs::CutCellGrid grid =
      ebs::CutCellGrid::build(geom, cfg.nx, cfg.ny, cfg.h, cfg.origin);
  const std::string p = cfg.out_dir + "/moments.csv";
  ebs::write_text_atomic(p, ebs::moment_dump_csv(grid));
  std::cout << "cells: " << grid.n_cells() << " valid, " << grid.n_irregular()
            << " irregular, min kappa " << grid.min_kappa() << "\n"
            << "wrote " << p << "\n";
  Manifest man("dump-geometry");
  man.j["config"] = ebs::echo_config(cfg);
  man.add_file(p);
  man.finalize(cfg.out_dir, 0.0, true);
  return 0;
}

int cmd_dump_operator(const std::string& config_path, const std::string& kind,
                      const std::vector<std::pair<std::string, std::string>>& overrides) {
  ebs::CaseConfig cfg = load_config(config_path, overrides);
  ebs::ensure_dir(cfg.out_dir);
  const ebs::CaseSetup cs = ebs::build_case(cfg, {}, /*with_viscous=*/true);
  const ebs::AffineOperator* op = nullptr;
  if (kind == "laplacian") op = &cs.visc;
  else if (cfg.project && kind == "gradient_x") op = &cs.proj.Gx;
  else if (cfg.project && kind == "gradient_y") op = &cs.proj.Gy;
  else if (cfg.project && kind == "divergence") op = &cs.proj.Dv;
  if (!op) {
    std::cerr << "dump-operator: unknown kind '" << kind
              << "' (or projection disabled for this config)\n";
    return 1;
  }
  const auto [acsv, bcsv] = ebs::operator_dump_csv(*op);
  const std::string pa = cfg.out_dir + "/operator_" + kind + "_A.csv";
  const std::string pb = cfg.out_dir + "/operator_" + kind + "_B.csv";
  ebs::write_text_atomic(pa, acsv);
  ebs::write_text_atomic(pb, bcsv);
  std::cout << "wrote " << pa << " and " << pb << "\n";
  Manifest man("dump-operator");
  man.j["kind"] = kind;
  man.add_file(pa);
  man.add_file(pb);
  man.finalize(cfg.out_dir, 0.0, true);
  return 0;
}

int cmd_validate_tableau() {
  const ebs::ArkTableau tab = ebs::ArkTableau::ark436l2sa();
  const ebs::TableauReport rep = ebs::validate_tableau(tab);
  std::cout << "row-sum residual: " << rep.max_row_sum_residual << "\n";
  for (const auto& [label, r] : rep.order_residuals)
    std::cout << label << ": " << r << "\n";
  std::cout << "|R(-1e6)|: " << rep.stiff_limit_mag << "\n";
  std::cout << (rep.valid ? "tableau valid" : "tableau INVALID") << "\n";
  return rep.valid ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ebstokes: fourth-order embedded-boundary Stokes solver"};
  app.require_subcommand(1);
  int log_level = 1;
  app.add_option("--log", log_level, "0=quiet, 1=info, 2=debug");

  std::string config_path, study_name, op_kind = "laplacian", out_dir = "out";
  int max_n = 256;
  int nx = 0, ny = 0, steps = -1;
  double dt = 0.0;
  std::string out_override;

  auto* run = app.add_subcommand("run", "march one configured case");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--nx", nx, "override grid.nx");
  run->add_option("--ny", ny, "override grid.ny");
  run->add_option("--dt", dt, "override time.dt");
  run->add_option("--steps", steps, "override time.steps");
  run->add_option("--out", out_override, "override output.dir");

  auto* study = app.add_subcommand("study", "run a verification study");
  study->add_option("name", study_name, "study name")->required();
  study->add_option("--max-n", max_n, "finest 1/h");
  study->add_option("--out", out_dir, "output directory");

  auto* dg = app.add_subcommand("dump-geometry", "write the moment CSV for a config");
  dg->add_option("--config", config_path, "config file")->required();
  dg->add_option("--out", out_override, "override output.dir");

  auto* dop = app.add_subcommand("dump-operator", "write operator triplet CSVs");
  dop->add_option("--config", config_path, "config file")->required();
  dop->add_option("--kind", op_kind, "laplacian|gradient_x|gradient_y|divergence");
  dop->add_option("--out", out_override, "override output.dir");

  app.add_subcommand("validate-tableau", "print ARK order-condition residuals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  set_log(log_level);

  std::vector<std::pair<std::string, std::string>> ov;
  if (nx > 0) ov.emplace_back("grid.nx", std::to_string(nx));
  if (ny > 0) ov.emplace_back("grid.ny", std::to_string(ny));
  if (dt > 0) ov.emplace_back("time.dt", std::to_string(dt));
  if (steps >= 0) ov.emplace_back("time.steps", std::to_string(steps));
  if (!out_override.empty()) ov.emplace_back("output.dir", out_override);

  try {
    if (app.got_subcommand("run")) return cmd_run(config_path, ov);
    if (app.got_subcommand("study")) return cmd_study(study_name, max_n, out_dir);
    if (app.got_subcommand("dump-geometry")) return cmd_dump_geometry(config_path, ov);
    if (app.got_subcommand("dump-operator")) return cmd_dump_operator(config_path, op_kind, ov);
    if (app.got_subcommand("validate-tableau")) return cmd_validate_tableau();
  } catch (const ebs::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const ebs::GeometryError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const ebs::StencilError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const ebs::SolverError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 1;
}
