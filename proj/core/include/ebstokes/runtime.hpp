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

#include <functional>
#include <string>

namespace ebs {

/// Worker count: min(hardware, 8), capped by EBSTOKES_THREADS when set.
int worker_count();

/// Runs f(begin..end) split across workers. Each index is processed exactly
/// once; results must be written to per-index slots so the outcome is
/// independent of the thread count.
void parallel_for(int begin, int end, const std::function<void(int)>& f);

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

void set_log_level(LogLevel lvl);
LogLevel log_level();
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace ebs
