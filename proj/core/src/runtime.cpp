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

#include "ebstokes/runtime.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <thread>
#include <vector>

namespace ebs {

int worker_count() {
  static const int n = [] {
    int w = static_cast<int>(std::thread::hardware_concurrency());
    if (w <= 0) w = 1;
    if (w > 8) w = 8;
    if (const char* env = std::getenv("EBSTOKES_THREADS")) {
      const int cap = std::atoi(env);
      if (cap >= 1) w = std::min(w, cap);
    }
    return w;
  }();
  return n;
}

void parallel_for(int begin, int end, const std::function<void(int)>& f) {
  const int n = end - begin;
  if (n <= 0) return;
  const int workers = std::min(worker_count(), n);
  if (workers == 1) {
    for (int i = begin; i < end; ++i) f(i);
    return;
  }
  std::atomic<int> next{begin};
  auto run = [&] {
    constexpr int chunk = 16;
    for (;;) {
      const int lo = next.fetch_add(chunk);
      if (lo >= end) break;
      const int hi = std::min(lo + chunk, end);
      for (int i = lo; i < hi; ++i) f(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

namespace {
LogLevel g_level = LogLevel::Info;
}

void set_log_level(LogLevel lvl) { g_level = lvl; }
LogLevel log_level() { return g_level; }

void log_info(const std::string& msg) {
  if (g_level >= LogLevel::Info) std::cout << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (g_level >= LogLevel::Debug) std::cout << "[debug] " << msg << "\n";
}

}  // namespace ebs
