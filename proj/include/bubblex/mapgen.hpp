#pragma once

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "bubblex/common.hpp"
#include "bubblex/voxel_grid.hpp"

namespace bubblex {

struct GeneratedWorld {
  OccupancyGrid truth;
  Vec3 start = Vec3::Zero();
  double start_yaw = 0.0;
};

/// Fraction of truth-Free cells reachable from start by 6-connected flood
/// fill. Also the oracle behind coverage accounting.
inline std::vector<bool> flood_fill_free(const OccupancyGrid& truth, const Vec3& start) {
  const GridConfig& cfg = truth.config();
  std::vector<bool> reach(static_cast<std::size_t>(cfg.cell_count()), false);
  if (!cfg.in_bounds_point(start)) return reach;
  const Idx3 s = cfg.cell_at(start);
  if (truth.state(s) != VoxelState::Free) return reach;
  static const Idx3 kFaces[6] = {Idx3(1, 0, 0),  Idx3(-1, 0, 0), Idx3(0, 1, 0),
                                 Idx3(0, -1, 0), Idx3(0, 0, 1),  Idx3(0, 0, -1)};
  std::vector<Idx3> stack{s};
  reach[static_cast<std::size_t>(cfg.linear(s))] = true;
  while (!stack.empty()) {
    const Idx3 c = stack.back();
    stack.pop_back();
    for (const Idx3& d : kFaces) {
      const Idx3 n = c + d;
      if (!cfg.in_bounds(n)) continue;
      const std::size_t id = static_cast<std::size_t>(cfg.linear(n));
      if (reach[id] || truth.state(n) != VoxelState::Free) continue;
      reach[id] = true;
      stack.push_back(n);
    }
  }
  return reach;
}

inline double reachable_fraction(const OccupancyGrid& truth, const Vec3& start) {
  const auto reach = flood_fill_free(truth, start);
  std::int64_t free_cells = 0, reached = 0;
  const GridConfig& cfg = truth.config();
  for (CellId id = 0; id < cfg.cell_count(); ++id) {
    if (truth.state(cfg.unlinear(id)) != VoxelState::Free) continue;
    ++free_cells;
    if (reach[static_cast<std::size_t>(id)]) ++reached;
  }
  return free_cells ? static_cast<double>(reached) / free_cells : 0.0;
}

namespace detail {

// Fill an axis-aligned box given in meters (inclusive of boundary voxels).
inline void fill_box(OccupancyGrid& g, const Vec3& lo, const Vec3& hi, VoxelState s) {
  const GridConfig& cfg = g.config();
  const Idx3 a = cfg.cell_at(lo + Vec3::Constant(1e-9));
  const Idx3 b = cfg.cell_at(hi - Vec3::Constant(1e-9));
  for (int z = std::max(0, a.z()); z <= std::min(cfg.dims.z() - 1, b.z()); ++z)
    for (int y = std::max(0, a.y()); y <= std::min(cfg.dims.y() - 1, b.y()); ++y)
      for (int x = std::max(0, a.x()); x <= std::min(cfg.dims.x() - 1, b.x()); ++x)
        g.set_state_raw(Idx3(x, y, z), s);
}

inline GridConfig make_config(const Vec3& size, double res) {
  GridConfig cfg;
  cfg.origin = Vec3::Zero();
  cfg.resolution = res;
  cfg.dims = Idx3(static_cast<int>(std::round(size.x() / res)),
                  static_cast<int>(std::round(size.y() / res)),
                  static_cast<int>(std::round(size.z() / res)));
  if (!cfg.valid()) throw std::runtime_error("mapgen: invalid size/resolution");
  return cfg;
}

}  // namespace detail

/// Obstacle-free box; optional occupied floor layer.
inline GeneratedWorld gen_empty(const Vec3& size, double res, bool floor = false) {
  GeneratedWorld w{OccupancyGrid(detail::make_config(size, res))};
  w.truth.fill(VoxelState::Free);
  if (floor) detail::fill_box(w.truth, Vec3::Zero(), Vec3(size.x(), size.y(), res), VoxelState::Occupied);
  w.start = Vec3(0.5 * size.x(), 0.5 * size.y(), std::min(1.0, 0.5 * size.z()));
  return w;
}

/// Poisson-disk forest: occupied floor plus vertical cylinders (dart-thrown
/// trunk positions with a density-derived minimum spacing), with a clearing
/// kept around the start pose. density is trees per square meter.
inline GeneratedWorld gen_forest(const Vec3& size, double res, double density,
                                 std::uint64_t seed) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    Rng rng(seed + 0x9e3779b97f4a7c15ull * attempt);
    GeneratedWorld w{OccupancyGrid(detail::make_config(size, res))};
    w.truth.fill(VoxelState::Free);
    detail::fill_box(w.truth, Vec3::Zero(), Vec3(size.x(), size.y(), res), VoxelState::Occupied);
    w.start = Vec3(2.5, 2.5, std::min(1.2, size.z() - 1.0));

    const int target = static_cast<int>(std::round(density * size.x() * size.y()));
    const double min_dist = 0.65 / std::sqrt(std::max(density, 1e-6));
    std::vector<Vec3> trunks;
    int attempts_left = 40 * std::max(target, 1);
    while (static_cast<int>(trunks.size()) < target && attempts_left-- > 0) {
      const Vec3 p(rng.uniform(1.0, size.x() - 1.0), rng.uniform(1.0, size.y() - 1.0), 0.0);
      if ((p.head<2>() - w.start.head<2>()).norm() < 2.5) continue;
      bool ok = true;
      for (const Vec3& q : trunks)
        if ((p.head<2>() - q.head<2>()).norm() < min_dist) {
          ok = false;
          break;
        }
      if (ok) trunks.push_back(p);
    }
    const GridConfig& cfg = w.truth.config();
    for (const Vec3& t : trunks) {
      const double radius = rng.uniform(0.15, 0.35);
      const double height = rng.uniform(0.6, 1.0) * size.z();
      const Idx3 lo = cfg.cell_at(Vec3(t.x() - radius, t.y() - radius, res) + Vec3::Constant(1e-9));
      const Idx3 hi = cfg.cell_at(Vec3(t.x() + radius, t.y() + radius, height) - Vec3::Constant(1e-9));
      for (int z = std::max(0, lo.z()); z <= std::min(cfg.dims.z() - 1, hi.z()); ++z)
        for (int y = std::max(0, lo.y()); y <= std::min(cfg.dims.y() - 1, hi.y()); ++y)
          for (int x = std::max(0, lo.x()); x <= std::min(cfg.dims.x() - 1, hi.x()); ++x) {
            const Idx3 c(x, y, z);
            if ((cfg.center(c).head<2>() - t.head<2>()).norm() <= radius)
              w.truth.set_state_raw(c, VoxelState::Occupied);
          }
    }
    if (w.truth.state_at(w.start) == VoxelState::Free &&
        reachable_fraction(w.truth, w.start) >= 0.9)
      return w;
  }
  throw std::runtime_error("gen_forest: no reachable layout found");
}

/// Two-story building: perimeter walls, a central open courtyard, a corridor
/// ring, perimeter rooms with doors (seeded positions), an inter-floor slab
/// over the ring with a stairwell opening.
inline GeneratedWorld gen_building(const Vec3& size, double res, std::uint64_t seed) {
  if (size.x() < 24.0 || size.y() < 24.0 || size.z() < 4.0)
    throw std::runtime_error("gen_building: needs at least 24x24x4 m");
  for (int attempt = 0; attempt < 16; ++attempt) {
    Rng rng(seed + 0x9e3779b97f4a7c15ull * attempt);
    GeneratedWorld w{OccupancyGrid(detail::make_config(size, res))};
    w.truth.fill(VoxelState::Free);
    auto occ = [&](const Vec3& lo, const Vec3& hi) {
      detail::fill_box(w.truth, lo, hi, VoxelState::Occupied);
    };
    auto carve = [&](const Vec3& lo, const Vec3& hi) {
      detail::fill_box(w.truth, lo, hi, VoxelState::Free);
    };

    const double H = size.z();
    const double mid = 0.5 * H;             // slab height
    const double room_d = 8.0;              // room band depth
    const double corr_w = 3.0;              // corridor width
    const double ring = room_d + corr_w;    // courtyard starts here

    // Floor and perimeter walls.
    occ(Vec3(0, 0, 0), Vec3(size.x(), size.y(), res));
    occ(Vec3(0, 0, 0), Vec3(res, size.y(), H));
    occ(Vec3(size.x() - res, 0, 0), Vec3(size.x(), size.y(), H));
    occ(Vec3(0, 0, 0), Vec3(size.x(), res, H));
    occ(Vec3(0, size.y() - res, 0), Vec3(size.x(), size.y(), H));

    // Inter-floor slab over the room + corridor ring (courtyard open to sky).
    occ(Vec3(0, 0, mid), Vec3(size.x(), size.y(), mid + res));
    carve(Vec3(ring, ring, mid), Vec3(size.x() - ring, size.y() - ring, mid + res));

    // Room-corridor walls (at room_d) and corridor-courtyard walls (at ring),
    // both full height.
    const auto wall_rect = [&](double inset) {
      occ(Vec3(inset, inset, 0), Vec3(size.x() - inset, inset + res, H));
      occ(Vec3(inset, size.y() - inset - res, 0), Vec3(size.x() - inset, size.y() - inset, H));
      occ(Vec3(inset, inset, 0), Vec3(inset + res, size.y() - inset, H));
      occ(Vec3(size.x() - inset - res, inset, 0), Vec3(size.x() - inset, size.y() - inset, H));
    };
    wall_rect(room_d);
    wall_rect(ring);

    // Room partitions every ~8 m inside the room band, both floors.
    const double part_step = 8.0;
    for (double x = part_step; x < size.x() - part_step * 0.5; x += part_step) {
      occ(Vec3(x, 0, 0), Vec3(x + res, room_d, H));
      occ(Vec3(x, size.y() - room_d, 0), Vec3(x + res, size.y(), H));
    }
    for (double y = part_step; y < size.y() - part_step * 0.5; y += part_step) {
      occ(Vec3(0, y, 0), Vec3(room_d, y + res, H));
      occ(Vec3(size.x() - room_d, y, 0), Vec3(size.x(), y + res, H));
    }

    // Doors: one per room segment through the room-corridor wall, plus
    // courtyard doors on each side, on both levels. Door width 1.8 m.
    const double door_w = 1.8;
    const double lvl_h = mid - res;  // clear height per level
    auto door_x = [&](double wall_y, double x_lo, double x_hi, double z0) {
      const double x = x_lo + rng.uniform(0.2, 0.8) * (x_hi - x_lo - door_w);
      carve(Vec3(x, wall_y, z0), Vec3(x + door_w, wall_y + res, z0 + lvl_h));
    };
    auto door_y = [&](double wall_x, double y_lo, double y_hi, double z0) {
      const double y = y_lo + rng.uniform(0.2, 0.8) * (y_hi - y_lo - door_w);
      carve(Vec3(wall_x, y, z0), Vec3(wall_x + res, y + door_w, z0 + lvl_h));
    };
    for (double z0 : {res, mid + res}) {
      for (double x = 0; x < size.x() - part_step * 0.5; x += part_step) {
        const double x_hi = std::min(x + part_step, size.x());
        door_x(room_d, x + res, x_hi, z0);                  // south rooms
        door_x(size.y() - room_d - res, x + res, x_hi, z0); // north rooms
      }
      for (double y = 0; y < size.y() - part_step * 0.5; y += part_step) {
        const double y_hi = std::min(y + part_step, size.y());
        door_y(room_d, y + res, y_hi, z0);                  // west rooms
        door_y(size.x() - room_d - res, y + res, y_hi, z0); // east rooms
      }
      // Courtyard doors, one per side.
      door_x(ring, ring + res, size.x() - ring, z0);
      door_x(size.y() - ring - res, ring + res, size.x() - ring, z0);
      door_y(ring, ring + res, size.y() - ring, z0);
      door_y(size.x() - ring - res, ring + res, size.y() - ring, z0);
    }

    // Stairwell: opening in the slab over the corridor, southwest corner.
    carve(Vec3(room_d + 0.2, room_d + 0.2, mid), Vec3(room_d + 0.2 + 2.6, room_d + 0.2 + 2.6, mid + res));

    w.start = Vec3(room_d + 0.5 * corr_w, 0.5 * size.y(), 1.2);
    if (w.truth.state_at(w.start) == VoxelState::Free &&
        reachable_fraction(w.truth, w.start) >= 0.9)
      return w;
  }
  throw std::runtime_error("gen_building: no reachable layout found");
}

inline GeneratedWorld generate_world(const std::string& kind, const Vec3& size, double res,
                                     double density, std::uint64_t seed, bool floor = false) {
  if (kind == "empty") return gen_empty(size, res, floor);
  if (kind == "forest") return gen_forest(size, res, density, seed);
  if (kind == "building") return gen_building(size, res, seed);
  throw std::runtime_error("unknown world kind: " + kind);
}

}  // namespace bubblex
