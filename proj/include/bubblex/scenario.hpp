#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bubblex/baseline.hpp"
#include "bubblex/bubble.hpp"
#include "bubblex/sensor.hpp"
#include "bubblex/tour.hpp"
#include "bubblex/trajectory.hpp"

namespace bubblex {

/// One episode's full configuration. Scenario files are plain `key value`
/// text with `#` comments; every knob is written out explicitly so runs are
/// self-describing.
struct ScenarioConfig {
  std::string name = "scenario";
  std::string map_path;

  // Grid for point-cloud maps and the online map (voxel-list maps carry
  // their own header, which wins).
  GridConfig grid;

  std::string sensor_kind = "panoramic";  // cone | panoramic
  double hfov_deg = 70.4;
  double vfov_deg = 70.0;
  double range = 10.0;
  int rays_az = 128;
  int rays_el = 16;
  double range_noise_sigma = 0.0;
  double sensor_rate_hz = 5.0;

  Vec3 start = Vec3(1.0, 1.0, 1.0);
  double start_yaw = 0.0;

  MotionLimits limits;
  double corner_speed = 0.5;
  double dt = 0.02;

  std::string frontend = "bubble";  // bubble | baseline
  BubbleConfig bubble;
  BaselineConfig baseline;
  GainParams gain_params;
  int astar_coarsen = 2;

  std::uint64_t seed = 1;
  double time_limit = 600.0;
  double t_replan = 2.0;
  int k_quiet = 3;

  SensorSpec sensor() const {
    if (sensor_kind == "cone")
      return SensorSpec::cone(deg2rad(hfov_deg), deg2rad(vfov_deg), range);
    return SensorSpec::panoramic(deg2rad(vfov_deg), range);
  }
};

namespace detail {

inline void apply_key(ScenarioConfig& c, const std::string& key, std::istringstream& v,
                      const std::string& where) {
  auto num = [&]() {
    double d;
    if (!(v >> d)) throw std::runtime_error(where + ": bad value for key '" + key + "'");
    return d;
  };
  auto integer = [&]() { return static_cast<int>(num()); };

  if (key == "map") {
    v >> c.map_path;
  } else if (key == "origin") {
    c.grid.origin = Vec3(num(), num(), num());
  } else if (key == "resolution") {
    c.grid.resolution = num();
  } else if (key == "dims") {
    c.grid.dims = Idx3(integer(), integer(), integer());
  } else if (key == "sensor_kind") {
    v >> c.sensor_kind;
  } else if (key == "hfov_deg") {
    c.hfov_deg = num();
  } else if (key == "vfov_deg") {
    c.vfov_deg = num();
  } else if (key == "range") {
    c.range = num();
  } else if (key == "rays_az") {
    c.rays_az = integer();
  } else if (key == "rays_el") {
    c.rays_el = integer();
  } else if (key == "range_noise_sigma") {
    c.range_noise_sigma = num();
  } else if (key == "sensor_rate_hz") {
    c.sensor_rate_hz = num();
  } else if (key == "start") {
    c.start = Vec3(num(), num(), num());
  } else if (key == "start_yaw") {
    c.start_yaw = num();
  } else if (key == "v_max") {
    c.limits.v_max = num();
  } else if (key == "a_max") {
    c.limits.a_max = num();
  } else if (key == "yaw_rate_max") {
    c.limits.yaw_rate_max = num();
  } else if (key == "horizon") {
    c.limits.horizon = num();
  } else if (key == "corner_speed") {
    c.corner_speed = num();
  } else if (key == "dt") {
    c.dt = num();
  } else if (key == "frontend") {
    v >> c.frontend;
  } else if (key == "leaf_size") {
    c.bubble.leaf_size = num();
  } else if (key == "r_max") {
    c.bubble.r_max = num();
  } else if (key == "r_fallback") {
    c.bubble.r_fallback = num();
  } else if (key == "n_az") {
    c.bubble.n_az = integer();
  } else if (key == "n_pol") {
    c.bubble.n_pol = integer();
  } else if (key == "n_yaw") {
    c.bubble.n_yaw = integer();
    c.baseline.n_yaw = c.bubble.n_yaw;
  } else if (key == "d_safe") {
    c.bubble.d_safe = num();
    c.baseline.d_safe = c.bubble.d_safe;
  } else if (key == "fb_az") {
    c.bubble.fb_az = integer();
  } else if (key == "fb_rad") {
    c.bubble.fb_rad = integer();
  } else if (key == "fb_pol") {
    c.bubble.fb_pol = integer();
  } else if (key == "split_len") {
    c.baseline.split_len = num();
  } else if (key == "cyl_radii") {
    c.baseline.n_radii = integer();
  } else if (key == "cyl_az") {
    c.baseline.n_az = integer();
  } else if (key == "cyl_heights") {
    c.baseline.n_heights = integer();
  } else if (key == "cyl_rmin") {
    c.baseline.r_min = num();
  } else if (key == "cyl_rmax") {
    c.baseline.r_max = num();
  } else if (key == "cyl_height_step") {
    c.baseline.height_step = num();
  } else if (key == "max_eval_cells") {
    c.baseline.max_eval_cells = integer();
  } else if (key == "lambda") {
    c.gain_params.lambda = num();
  } else if (key == "n_q") {
    c.gain_params.n_q = integer();
  } else if (key == "n_exact") {
    c.gain_params.n_exact = integer();
  } else if (key == "c_unreach") {
    c.gain_params.c_unreach = num();
  } else if (key == "astar_coarsen") {
    c.astar_coarsen = integer();
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(num());
  } else if (key == "time_limit") {
    c.time_limit = num();
  } else if (key == "t_replan") {
    c.t_replan = num();
  } else if (key == "k_quiet") {
    c.k_quiet = integer();
  } else {
    throw std::runtime_error(where + ": unknown scenario key '" + key + "'");
  }
}

}  // namespace detail

inline ScenarioConfig parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  ScenarioConfig c;
  c.name = std::filesystem::path(path).stem().string();
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    detail::apply_key(c, key, ls, path);
  }
  if (!c.map_path.empty()) {
    const std::filesystem::path mp(c.map_path);
    if (mp.is_relative())
      c.map_path = (std::filesystem::path(path).parent_path() / mp).string();
  }
  return c;
}

// `--set key=value` style override.
inline void apply_override(ScenarioConfig& c, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) throw std::runtime_error("override needs key=value: " + kv);
  std::string values = kv.substr(eq + 1);
  std::replace(values.begin(), values.end(), ',', ' ');
  std::istringstream vs(values);
  detail::apply_key(c, kv.substr(0, eq), vs, "override");
}

inline void write_scenario_file(const std::string& path, const ScenarioConfig& c) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file: " + path);
  char buf[256];
  auto kv = [&](const char* key, const char* fmt, auto... args) {
    std::snprintf(buf, sizeof(buf), fmt, args...);
    out << key << ' ' << buf << '\n';
  };
  out << "# world\n";
  kv("map", "%s", c.map_path.c_str());
  kv("resolution", "%.6f", c.grid.resolution);
  kv("origin", "%.6f %.6f %.6f", c.grid.origin.x(), c.grid.origin.y(), c.grid.origin.z());
  kv("dims", "%d %d %d", c.grid.dims.x(), c.grid.dims.y(), c.grid.dims.z());
  out << "# sensor\n";
  kv("sensor_kind", "%s", c.sensor_kind.c_str());
  kv("hfov_deg", "%.6f", c.hfov_deg);
  kv("vfov_deg", "%.6f", c.vfov_deg);
  kv("range", "%.6f", c.range);
  kv("rays_az", "%d", c.rays_az);
  kv("rays_el", "%d", c.rays_el);
  kv("range_noise_sigma", "%.6f", c.range_noise_sigma);
  kv("sensor_rate_hz", "%.6f", c.sensor_rate_hz);
  out << "# vehicle\n";
  kv("start", "%.6f %.6f %.6f", c.start.x(), c.start.y(), c.start.z());
  kv("start_yaw", "%.6f", c.start_yaw);
  kv("v_max", "%.6f", c.limits.v_max);
  kv("a_max", "%.6f", c.limits.a_max);
  kv("yaw_rate_max", "%.6f", c.limits.yaw_rate_max);
  kv("horizon", "%.6f", c.limits.horizon);
  kv("corner_speed", "%.6f", c.corner_speed);
  kv("dt", "%.6f", c.dt);
  out << "# planner\n";
  kv("frontend", "%s", c.frontend.c_str());
  kv("leaf_size", "%.6f", c.bubble.leaf_size);
  kv("r_max", "%.6f", c.bubble.r_max);
  kv("r_fallback", "%.6f", c.bubble.r_fallback);
  kv("n_az", "%d", c.bubble.n_az);
  kv("n_pol", "%d", c.bubble.n_pol);
  kv("n_yaw", "%d", c.bubble.n_yaw);
  kv("d_safe", "%.6f", c.bubble.d_safe);
  kv("fb_az", "%d", c.bubble.fb_az);
  kv("fb_rad", "%d", c.bubble.fb_rad);
  kv("fb_pol", "%d", c.bubble.fb_pol);
  kv("split_len", "%.6f", c.baseline.split_len);
  kv("cyl_radii", "%d", c.baseline.n_radii);
  kv("cyl_az", "%d", c.baseline.n_az);
  kv("cyl_heights", "%d", c.baseline.n_heights);
  kv("cyl_rmin", "%.6f", c.baseline.r_min);
  kv("cyl_rmax", "%.6f", c.baseline.r_max);
  kv("cyl_height_step", "%.6f", c.baseline.height_step);
  kv("max_eval_cells", "%d", c.baseline.max_eval_cells);
  kv("lambda", "%.6f", c.gain_params.lambda);
  kv("n_q", "%d", c.gain_params.n_q);
  kv("n_exact", "%d", c.gain_params.n_exact);
  kv("c_unreach", "%.6f", c.gain_params.c_unreach);
  kv("astar_coarsen", "%d", c.astar_coarsen);
  out << "# episode\n";
  kv("seed", "%llu", static_cast<unsigned long long>(c.seed));
  kv("time_limit", "%.6f", c.time_limit);
  kv("t_replan", "%.6f", c.t_replan);
  kv("k_quiet", "%d", c.k_quiet);
}

}  // namespace bubblex
