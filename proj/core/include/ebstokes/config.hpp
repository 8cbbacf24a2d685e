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

#include <map>
#include <string>

#include "ebstokes/types.hpp"

namespace ebs {

/// Resolved run configuration. Parsed from flat key-value sections
/// ([geometry], [grid], [physics], [time], [bc], [output]); unknown keys are
/// rejected with line numbers, flags override file values.
struct CaseConfig {
  std::string geometry = "circle";
  std::map<std::string, double> geom_params;

  int nx = 0, ny = 0;      // 0: derived from geometry defaults
  double h = 0.0;          // 0: derived (domain extent / ny)
  Vec2 origin{0.0, 0.0};
  bool origin_set = false;

  double nu = 1.0;
  std::string ic = "auto";  // auto|zero|constant|taylor_green|mms_diffusion
  double ic_value = 0.0;
  bool project = true;

  double dt = 0.0;
  int steps = 0;            // 0: run to steady
  double t0 = 0.0;
  double steady_tol = 1e-8;
  int max_steps = 200000;

  std::string bc = "auto";  // auto|noslip|mms_dirichlet|couette|channel

  std::string out_dir = "out";
  int snapshot_every = 0;
};

CaseConfig parse_config(const std::string& path);

/// Applies one dotted-key override (e.g. "grid.nx", "time.dt").
void apply_override(CaseConfig& cfg, const std::string& key, const std::string& value);

/// Rejects invalid values (dt <= 0 for stepped runs, nu < 0, ...); error
/// messages name the offending section.key.
void validate_config(const CaseConfig& cfg);

/// Resolves "auto"/zero fields to concrete per-case defaults.
void resolve_defaults(CaseConfig& cfg);

/// INI echo of the resolved config; parse(echo(cfg)) == cfg.
std::string echo_config(const CaseConfig& cfg);

CaseConfig parse_config_text(const std::string& text, const std::string& origin_name);

}  // namespace ebs
