#pragma once

#include <filesystem>
#include <string>

#include "bubblex/map_io.hpp"
#include "bubblex/mapgen.hpp"
#include "bubblex/scenario.hpp"

namespace bubblex {

struct GeneratedScenario {
  std::string map_path;
  std::string scenario_path;
};

inline Vec3 parse_size_spec(const std::string& spec) {
  double x = 0, y = 0, z = 0;
  char sep1 = 0, sep2 = 0;
  std::istringstream ss(spec);
  if (!(ss >> x >> sep1 >> y >> sep2 >> z) || (sep1 != 'x' && sep1 != 'X'))
    throw std::runtime_error("bad size spec (want WxDxH, e.g. 40x40x6): " + spec);
  return Vec3(x, y, z);
}

/// Generate a synthetic world plus a fully keyed scenario file next to it.
/// Deterministic for fixed arguments.
inline GeneratedScenario generate_scenario_files(const std::string& out_dir,
                                                 const std::string& name,
                                                 const std::string& kind, const Vec3& size,
                                                 double resolution, double density,
                                                 std::uint64_t seed, bool floor = false) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const GeneratedWorld world = generate_world(kind, size, resolution, density, seed, floor);

  GeneratedScenario out;
  out.map_path = (fs::path(out_dir) / (name + ".map")).string();
  out.scenario_path = (fs::path(out_dir) / (name + ".scenario")).string();
  save_voxel_list_map(out.map_path, world.truth);

  ScenarioConfig cfg;
  cfg.name = name;
  cfg.map_path = name + ".map";  // relative to the scenario file
  cfg.grid = world.truth.config();
  cfg.start = world.start;
  cfg.start_yaw = world.start_yaw;
  cfg.seed = seed;
  write_scenario_file(out.scenario_path, cfg);
  return out;
}

}  // namespace bubblex
