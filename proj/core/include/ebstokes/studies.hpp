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
#include <vector>

#include "ebstokes/verification.hpp"

namespace ebs {

struct StudyOptions {
  int max_n = 256;          // finest 1/h (per-study defaults may clamp lower)
  std::string out_dir = "out";
  bool write_files = true;
};

struct StudyResult {
  std::string name;
  ConvergenceTable table;
  bool passed = true;
  std::vector<std::string> messages;   // one PASS/FAIL line per check
  std::vector<std::string> artifacts;  // files written
  double wall_seconds = 0.0;
};

std::vector<std::string> study_names();
bool is_study_name(const std::string& name);

/// Runs one of: tg_projection_convergence, tg_projection_stability,
/// diffusion_mms, couette_richardson, channel_richardson. Writes the
/// convergence table CSV, norm histories, and a JSONL summary under
/// out_dir/<name>/.
StudyResult run_study(const std::string& name, const StudyOptions& opt = {});

}  // namespace ebs
