#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bubblex/voxel_grid.hpp"

namespace bubblex {

// Two accepted ground-truth map formats:
//  * voxel list: header `dims nx ny nz / res r / origin ox oy oz`, then one
//    `ix iy iz` occupied index per line;
//  * point cloud: one `x y z` occupied point per line (meters), voxelized
//    into a caller-supplied GridConfig.
// Truth grids are dense: every cell not listed occupied is Free.

inline OccupancyGrid load_voxel_list_map(std::istream& in, const std::string& name) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error(name + ": empty map file");
  GridConfig cfg;
  {
    std::string cleaned = header;
    std::replace(cleaned.begin(), cleaned.end(), '/', ' ');
    std::istringstream hs(cleaned);
    std::string kw;
    int nx = 0, ny = 0, nz = 0;
    double r = 0, ox = 0, oy = 0, oz = 0;
    if (!(hs >> kw >> nx >> ny >> nz) || kw != "dims")
      throw std::runtime_error(name + ": bad voxel-list header (dims)");
    if (!(hs >> kw >> r) || kw != "res")
      throw std::runtime_error(name + ": bad voxel-list header (res)");
    if (!(hs >> kw >> ox >> oy >> oz) || kw != "origin")
      throw std::runtime_error(name + ": bad voxel-list header (origin)");
    cfg.dims = Idx3(nx, ny, nz);
    cfg.resolution = r;
    cfg.origin = Vec3(ox, oy, oz);
  }
  if (!cfg.valid()) throw std::runtime_error(name + ": invalid grid config in header");
  OccupancyGrid grid(cfg);
  grid.fill(VoxelState::Free);
  int ix, iy, iz;
  while (in >> ix >> iy >> iz) {
    const Idx3 c(ix, iy, iz);
    if (cfg.in_bounds(c)) grid.set_state_raw(c, VoxelState::Occupied);
  }
  return grid;
}

inline OccupancyGrid load_point_cloud_map(std::istream& in, const GridConfig& cfg,
                                          const std::string& name) {
  if (!cfg.valid()) throw std::runtime_error(name + ": point-cloud map needs a valid grid config");
  OccupancyGrid grid(cfg);
  grid.fill(VoxelState::Free);
  double x, y, z;
  while (in >> x >> y >> z) {
    const Vec3 p(x, y, z);
    if (cfg.in_bounds_point(p)) grid.set_state_raw(cfg.cell_at(p), VoxelState::Occupied);
  }
  return grid;
}

// Detects the format from the first token ("dims" => voxel list).
inline OccupancyGrid load_truth_map(const std::string& path, const GridConfig& fallback_cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open map file: " + path);
  std::string first_tok;
  in >> first_tok;
  in.seekg(0);
  if (first_tok == "dims") return load_voxel_list_map(in, path);
  return load_point_cloud_map(in, fallback_cfg, path);
}

inline void save_voxel_list_map(const std::string& path, const OccupancyGrid& grid) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write map file: " + path);
  const GridConfig& cfg = grid.config();
  char buf[256];
  std::snprintf(buf, sizeof(buf), "dims %d %d %d / res %.6f / origin %.6f %.6f %.6f\n",
                cfg.dims.x(), cfg.dims.y(), cfg.dims.z(), cfg.resolution,
                cfg.origin.x(), cfg.origin.y(), cfg.origin.z());
  out << buf;
  for (int z = 0; z < cfg.dims.z(); ++z)
    for (int y = 0; y < cfg.dims.y(); ++y)
      for (int x = 0; x < cfg.dims.x(); ++x) {
        const Idx3 c(x, y, z);
        if (grid.state(c) == VoxelState::Occupied)
          out << x << ' ' << y << ' ' << z << '\n';
      }
}

// One `x y z` per line; used for occupied-center dumps and trajectories.
inline void save_points_ascii(const std::string& path, const std::vector<Vec3>& pts) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path);
  char buf[128];
  for (const Vec3& p : pts) {
    std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f\n", p.x(), p.y(), p.z());
    out << buf;
  }
}

inline std::vector<Vec3> occupied_centers(const OccupancyGrid& grid) {
  std::vector<Vec3> pts;
  const GridConfig& cfg = grid.config();
  for (int z = 0; z < cfg.dims.z(); ++z)
    for (int y = 0; y < cfg.dims.y(); ++y)
      for (int x = 0; x < cfg.dims.x(); ++x) {
        const Idx3 c(x, y, z);
        if (grid.state(c) == VoxelState::Occupied) pts.push_back(cfg.center(c));
      }
  return pts;
}

}  // namespace bubblex
