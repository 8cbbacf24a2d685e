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

#include "ebstokes/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ebs {

namespace {

const std::set<std::string> kGeomParamKeys = {
    "radius", "center_x", "center_y", "r_inner", "r_outer", "period", "contour",
    "normal_x", "normal_y", "point_x", "point_y", "z", "tau", "pipe_radius",
    "pipe_center_y", "slab_center_x", "slab_halfwidth", "cut_radius", "smooth_eps"};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& v, const std::string& where, int line) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    std::ostringstream os;
    os << "config: line " << line << ": " << where << ": expected a number, got '" << v << "'";
    throw ConfigError(os.str());
  }
}

int parse_int(const std::string& v, const std::string& where, int line) {
  const double x = parse_number(v, where, line);
  const int k = static_cast<int>(std::llround(x));
  if (std::abs(x - k) > 1e-12) {
    std::ostringstream os;
    os << "config: line " << line << ": " << where << ": expected an integer, got '" << v << "'";
    throw ConfigError(os.str());
  }
  return k;
}

bool parse_bool(const std::string& v, const std::string& where, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  std::ostringstream os;
  os << "config: line " << line << ": " << where << ": expected a boolean, got '" << v << "'";
  throw ConfigError(os.str());
}

void set_key(CaseConfig& cfg, const std::string& section, const std::string& key,
             const std::string& value, int line) {
  const std::string where = section + "." + key;
  if (section == "geometry") {
    if (key == "name") {
      cfg.geometry = value;
      return;
    }
    if (kGeomParamKeys.count(key)) {
      cfg.geom_params[key] = parse_number(value, where, line);
      return;
    }
  } else if (section == "grid") {
    if (key == "nx") { cfg.nx = parse_int(value, where, line); return; }
    if (key == "ny") { cfg.ny = parse_int(value, where, line); return; }
    if (key == "h") { cfg.h = parse_number(value, where, line); return; }
    if (key == "origin_x") { cfg.origin.x = parse_number(value, where, line); cfg.origin_set = true; return; }
    if (key == "origin_y") { cfg.origin.y = parse_number(value, where, line); cfg.origin_set = true; return; }
  } else if (section == "physics") {
    if (key == "nu") { cfg.nu = parse_number(value, where, line); return; }
    if (key == "ic") { cfg.ic = value; return; }
    if (key == "ic_value") { cfg.ic_value = parse_number(value, where, line); return; }
    if (key == "project") { cfg.project = parse_bool(value, where, line); return; }
  } else if (section == "time") {
    if (key == "dt") { cfg.dt = parse_number(value, where, line); return; }
    if (key == "steps") { cfg.steps = parse_int(value, where, line); return; }
    if (key == "t0") { cfg.t0 = parse_number(value, where, line); return; }
    if (key == "steady_tol") { cfg.steady_tol = parse_number(value, where, line); return; }
    if (key == "max_steps") { cfg.max_steps = parse_int(value, where, line); return; }
  } else if (section == "bc") {
    if (key == "preset") { cfg.bc = value; return; }
  } else if (section == "output") {
    if (key == "dir") { cfg.out_dir = value; return; }
    if (key == "snapshot_every") { cfg.snapshot_every = parse_int(value, where, line); return; }
  } else {
    std::ostringstream os;
    os << "config: line " << line << ": unknown section [" << section << "]";
    throw ConfigError(os.str());
  }
  std::ostringstream os;
  os << "config: line " << line << ": unknown key '" << where << "'";
  throw ConfigError(os.str());
}

}  // namespace

CaseConfig parse_config_text(const std::string& text, const std::string& origin_name) {
  CaseConfig cfg;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find_first_of("#;");
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        std::ostringstream os;
        os << "config " << origin_name << ": line " << line << ": malformed section header";
        throw ConfigError(os.str());
      }
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "config " << origin_name << ": line " << line << ": expected key = value";
      throw ConfigError(os.str());
    }
    if (section.empty()) {
      std::ostringstream os;
      os << "config " << origin_name << ": line " << line << ": key outside any section";
      throw ConfigError(os.str());
    }
    set_key(cfg, section, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line);
  }
  return cfg;
}

CaseConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void apply_override(CaseConfig& cfg, const std::string& key, const std::string& value) {
  const auto dot = key.find('.');
  if (dot == std::string::npos)
    throw ConfigError("override: key '" + key + "' must be section.key");
  set_key(cfg, key.substr(0, dot), key.substr(dot + 1), value, 0);
}

namespace {

void materialize_geometry_defaults(CaseConfig& cfg) {
  auto put = [&cfg](const char* k, double v) { cfg.geom_params.try_emplace(k, v); };
  if (cfg.geometry == "circle") {
    put("radius", 0.3);
    put("center_x", 0.5);
    put("center_y", 0.5);
  } else if (cfg.geometry == "annulus") {
    put("r_inner", 0.25);
    put("r_outer", 0.475);
    put("center_x", 0.5);
    put("center_y", 0.5);
  } else if (cfg.geometry == "taylor_green_contour") {
    put("period", 2.0);
    put("contour", -0.8);
  } else if (cfg.geometry == "channel_circle") {
    put("radius", 0.15);
    put("center_x", 1.0);
    put("center_y", 0.5);
  } else if (cfg.geometry == "half_space") {
    put("normal_x", 1.0);
    put("normal_y", 0.0);
    put("point_x", 0.5);
    put("point_y", 0.0);
  } else if (cfg.geometry == "gyroid_scaffold") {
    put("z", 0.1);
    put("period", 2.0);
    put("tau", 0.35);
    put("pipe_radius", 0.95);
    put("pipe_center_y", 0.0);
    put("slab_center_x", 4.0);
    put("slab_halfwidth", 0.5);
    put("cut_radius", 0.175);
    put("smooth_eps", 0.02);
  }
}

}  // namespace

void resolve_defaults(CaseConfig& cfg) {
  materialize_geometry_defaults(cfg);
  // domain extent per geometry
  double ext_x = 1.0, ext_y = 1.0;
  Vec2 origin{0, 0};
  if (cfg.geometry == "channel_circle") {
    ext_x = 2.0;
    ext_y = 1.0;
  } else if (cfg.geometry == "gyroid_scaffold") {
    ext_x = 8.0;
    ext_y = 2.0;
    origin = {0.0, -1.0};
  }
  if (!cfg.origin_set) cfg.origin = origin;
  if (cfg.ny == 0 && cfg.nx == 0) cfg.ny = 64;
  if (cfg.ny == 0) cfg.ny = static_cast<int>(std::lround(cfg.nx * ext_y / ext_x));
  if (cfg.h == 0.0) cfg.h = ext_y / cfg.ny;
  if (cfg.nx == 0) cfg.nx = static_cast<int>(std::lround(ext_x / cfg.h));

  if (cfg.bc == "auto") {
    if (cfg.geometry == "annulus") cfg.bc = "couette";
    else if (cfg.geometry == "channel_circle" || cfg.geometry == "gyroid_scaffold") cfg.bc = "channel";
    else if (cfg.geometry == "circle") cfg.bc = "mms_dirichlet";
    else cfg.bc = "noslip";
  }
  if (cfg.ic == "auto") {
    if (cfg.bc == "mms_dirichlet") cfg.ic = "mms_diffusion";
    else if (cfg.geometry == "taylor_green_contour") cfg.ic = "taylor_green";
    else cfg.ic = "zero";
  }
  // the manufactured-diffusion study decouples the components and runs
  // without the projection
  if (cfg.bc == "mms_dirichlet") cfg.project = false;
}

void validate_config(const CaseConfig& cfg) {
  if (cfg.nx < 8 || cfg.ny < 8) throw ConfigError("config: grid.nx and grid.ny must be >= 8");
  if (!(cfg.h > 0)) throw ConfigError("config: grid.h must be positive");
  if (cfg.nu < 0) throw ConfigError("config: physics.nu must be non-negative");
  if (cfg.steps > 0 && !(cfg.dt > 0))
    throw ConfigError("config: time.dt must be positive for stepped runs");
  if (cfg.steps == 0 && !(cfg.dt > 0))
    throw ConfigError("config: time.dt must be positive (steady runs step with it)");
  if (!(cfg.steady_tol > 0)) throw ConfigError("config: time.steady_tol must be positive");
  if (cfg.max_steps <= 0) throw ConfigError("config: time.max_steps must be positive");
  if (cfg.snapshot_every < 0) throw ConfigError("config: output.snapshot_every must be >= 0");
}

namespace {

// shortest round-tripping decimal representation
std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string echo_config(const CaseConfig& cfg) {
  std::ostringstream os;
  os << "[geometry]\nname = " << cfg.geometry << "\n";
  for (const auto& [k, v] : cfg.geom_params) os << k << " = " << num(v) << "\n";
  os << "\n[grid]\nnx = " << cfg.nx << "\nny = " << cfg.ny << "\nh = " << num(cfg.h)
     << "\norigin_x = " << num(cfg.origin.x) << "\norigin_y = " << num(cfg.origin.y) << "\n";
  os << "\n[physics]\nnu = " << num(cfg.nu) << "\nic = " << cfg.ic
     << "\nic_value = " << num(cfg.ic_value)
     << "\nproject = " << (cfg.project ? "true" : "false") << "\n";
  os << "\n[time]\ndt = " << num(cfg.dt) << "\nsteps = " << cfg.steps
     << "\nt0 = " << num(cfg.t0) << "\nsteady_tol = " << num(cfg.steady_tol)
     << "\nmax_steps = " << cfg.max_steps << "\n";
  os << "\n[bc]\npreset = " << cfg.bc << "\n";
  os << "\n[output]\ndir = " << cfg.out_dir << "\nsnapshot_every = " << cfg.snapshot_every
     << "\n";
  return os.str();
}

}  // namespace ebs
