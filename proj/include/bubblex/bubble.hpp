#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bubblex/frontier.hpp"
#include "bubblex/obstacle_index.hpp"
#include "bubblex/sensor.hpp"
#include "bubblex/voxel_grid.hpp"

namespace bubblex {

struct BubbleConfig {
  double r_max = 8.0;       // cap on the sphere radius
  double r_fallback = 1.0;  // below this radius, shell sampling + ray casting
  int n_az = 16;            // surface sampling density
  int n_pol = 5;
  double polar_min = deg2rad(60.0);  // keep samples near the equator
  double polar_max = deg2rad(120.0);
  int n_yaw = 36;
  double d_safe = 0.6;
  int fb_az = 12;  // fallback shell sampling density
  int fb_rad = 3;
  int fb_pol = 3;
  double leaf_size = 2.0;           // frontier downsample leaf
  double surface_range_frac = 0.95; // sphere surface capped at this * sensor range
};

/// Occlusion-free sphere: center on a frontier cell, radius = distance to
/// the nearest obstacle point (clamped to r_max), so the open ball contains
/// no occupied voxel center.
struct Bubble {
  Vec3 center = Vec3::Zero();
  CellId center_cell = -1;
  double radius = 0.0;
  std::vector<CellId> contained_frontiers;  // cells with ||c - center|| < radius
};

// Segments kept within radius - interior_margin of the center can only cross
// voxels whose centers are strictly closer than the sphere radius, i.e.
// guaranteed non-occupied. This carries the point-level emptiness guarantee
// over to voxel extent.
inline double interior_margin(double resolution) {
  return 0.5 * std::sqrt(3.0) * resolution + 1e-9;
}
inline double interior_radius(const Bubble& b, double resolution) {
  return b.radius - interior_margin(resolution);
}

namespace detail {

// Bucketed view of a shrinking frontier working set; range queries return
// sorted cell ids for deterministic iteration.
class FrontierBuckets {
 public:
  FrontierBuckets(const GridConfig& cfg, const std::unordered_set<CellId>& cells,
                  double bucket_size = 2.0)
      : cfg_(cfg), bucket_(bucket_size), alive_(cells) {
    for (CellId id : cells) buckets_[key_of(cfg_.center(cfg_.unlinear(id)))].push_back(id);
  }

  bool contains(CellId id) const { return alive_.count(id) > 0; }
  std::size_t size() const { return alive_.size(); }

  void remove(std::span<const CellId> ids) {
    for (CellId id : ids) alive_.erase(id);
  }

  // Cells within `radius` of p; strict controls < vs <= on the boundary.
  std::vector<CellId> collect_within(const Vec3& p, double radius, bool strict) const {
    std::vector<CellId> out;
    if (radius < 0.0) return out;
    const double r2 = radius * radius;
    const int lo[3] = {bucket_coord(p.x() - radius, 0), bucket_coord(p.y() - radius, 1),
                       bucket_coord(p.z() - radius, 2)};
    const int hi[3] = {bucket_coord(p.x() + radius, 0), bucket_coord(p.y() + radius, 1),
                       bucket_coord(p.z() + radius, 2)};
    for (int bz = lo[2]; bz <= hi[2]; ++bz)
      for (int by = lo[1]; by <= hi[1]; ++by)
        for (int bx = lo[0]; bx <= hi[0]; ++bx) {
          const auto it = buckets_.find(pack(bx, by, bz));
          if (it == buckets_.end()) continue;
          for (CellId id : it->second) {
            if (!alive_.count(id)) continue;
            const double d2 = (cfg_.center(cfg_.unlinear(id)) - p).squaredNorm();
            if (strict ? d2 < r2 : d2 <= r2) out.push_back(id);
          }
        }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  int bucket_coord(double v, int axis) const {
    return static_cast<int>(std::floor((v - cfg_.origin[axis]) / bucket_));
  }
  std::int64_t key_of(const Vec3& p) const {
    return pack(bucket_coord(p.x(), 0), bucket_coord(p.y(), 1), bucket_coord(p.z(), 2));
  }
  static std::int64_t pack(int x, int y, int z) {
    const auto u = [](int v) { return static_cast<std::int64_t>(v) + (1 << 20); };
    return (u(x) << 42) | (u(y) << 21) | u(z);
  }

  GridConfig cfg_;
  double bucket_;
  std::unordered_set<CellId> alive_;
  std::unordered_map<std::int64_t, std::vector<CellId>> buckets_;
};

inline bool viewpoint_position_ok(const Vec3& p, const OccupancyGrid& grid,
                                  const ObstacleIndex& index, double d_safe) {
  if (!grid.config().in_bounds_point(p)) return false;
  if (grid.state_at(p) != VoxelState::Free) return false;
  if (const auto nn = index.nearest(p); nn && nn->dist < d_safe) return false;
  return true;
}

}  // namespace detail

inline Bubble generate_new_sphere(const Vec3& p_c, const ObstacleIndex& index,
                                  const FrontierSet& fs, const BubbleConfig& cfg) {
  Bubble b;
  b.center = p_c;
  b.center_cell = fs.config().linear(fs.config().cell_at(p_c));
  const auto nn = index.nearest(p_c);
  b.radius = nn ? std::min(nn->dist, cfg.r_max) : cfg.r_max;
  const double r2 = b.radius * b.radius;
  for (CellId id : fs.sorted_cells())
    if ((fs.center_of(id) - p_c).squaredNorm() < r2) b.contained_frontiers.push_back(id);
  return b;
}

/// Uniform spherical-coordinate samples on the bubble surface (shrunk to the
/// interior-safe radius and capped below sensor range), keeping only
/// positions in known-Free voxels with d_safe clearance.
inline std::vector<Vec3> sample_surface_viewpoints(const Bubble& b, const OccupancyGrid& grid,
                                                   const ObstacleIndex& index,
                                                   const SensorSpec& sensor,
                                                   const BubbleConfig& cfg) {
  std::vector<Vec3> out;
  const double r_surf = std::min(interior_radius(b, grid.config().resolution),
                                 cfg.surface_range_frac * sensor.max_range);
  if (r_surf <= 0.0) return out;
  for (int ip = 0; ip < cfg.n_pol; ++ip) {
    const double polar =
        cfg.n_pol == 1 ? 0.5 * (cfg.polar_min + cfg.polar_max)
                       : cfg.polar_min + (cfg.polar_max - cfg.polar_min) * ip / (cfg.n_pol - 1);
    for (int ia = 0; ia < cfg.n_az; ++ia) {
      const double az = 2.0 * kPi * ia / cfg.n_az;
      const Vec3 p = b.center + r_surf * Vec3(std::sin(polar) * std::cos(az),
                                              std::sin(polar) * std::sin(az), std::cos(polar));
      if (detail::viewpoint_position_ok(p, grid, index, cfg.d_safe)) out.push_back(p);
    }
  }
  return out;
}

namespace detail {

struct CandidateCenter {
  CellId cell;
  Vec3 position;
};

inline std::vector<CellId> covered_centers(const Viewpoint& vp, const Bubble& b,
                                           const SensorSpec& sensor,
                                           std::span<const CandidateCenter> remaining) {
  std::unordered_set<CellId> in_fv(vp.covered_frontiers.begin(), vp.covered_frontiers.end());
  std::vector<CellId> out;
  const double r2 = b.radius * b.radius;
  for (const CandidateCenter& c : remaining) {
    if (in_fv.count(c.cell)) {
      out.push_back(c.cell);
      continue;
    }
    if ((c.position - b.center).squaredNorm() <= r2 &&
        sensor.in_fov(vp.position, vp.yaw, c.position))
      out.push_back(c.cell);
  }
  return out;
}

// Shell sampling with ray-cast coverage scoring; rescues bubbles too small
// for the surface path (and large bubbles whose surface produced nothing).
inline std::optional<Viewpoint> fallback_viewpoint(
    const Bubble& b, const FrontierBuckets& working, const OccupancyGrid& grid,
    const ObstacleIndex& index, const SensorSpec& sensor, const BubbleConfig& cfg,
    std::int64_t* casts) {
  const double cap = cfg.surface_range_frac * sensor.max_range;
  const double r_lo = std::min(b.radius, cap);
  const double r_hi = std::min(3.0 * b.radius, cap);
  const double neigh = std::min(3.0 * b.radius, sensor.max_range);
  const std::vector<CellId> cells = working.collect_within(b.center, neigh, false);
  if (cells.empty()) return std::nullopt;
  std::vector<Vec3> cell_pos;
  cell_pos.reserve(cells.size());
  const GridConfig& gc = grid.config();
  for (CellId id : cells) cell_pos.push_back(gc.center(gc.unlinear(id)));

  std::optional<Viewpoint> best;
  for (int ir = 0; ir < cfg.fb_rad; ++ir) {
    const double rad = cfg.fb_rad == 1 ? r_lo : r_lo + (r_hi - r_lo) * ir / (cfg.fb_rad - 1);
    for (int ip = 0; ip < cfg.fb_pol; ++ip) {
      const double polar =
          cfg.fb_pol == 1 ? 0.5 * (cfg.polar_min + cfg.polar_max)
                          : cfg.polar_min + (cfg.polar_max - cfg.polar_min) * ip / (cfg.fb_pol - 1);
      for (int ia = 0; ia < cfg.fb_az; ++ia) {
        const double az = 2.0 * kPi * ia / cfg.fb_az;
        const Vec3 pos = b.center + rad * Vec3(std::sin(polar) * std::cos(az),
                                               std::sin(polar) * std::sin(az), std::cos(polar));
        if (!viewpoint_position_ok(pos, grid, index, cfg.d_safe)) continue;
        // Ray-cast-verified visibility, then yaw optimization over survivors.
        std::vector<Vec3> visible_pos;
        std::vector<CellId> visible_id;
        for (std::size_t i = 0; i < cells.size(); ++i) {
          const Vec3 r = cell_pos[i] - pos;
          const double range = r.norm();
          if (range > sensor.max_range) continue;
          if (range > 1e-12 &&
              std::abs(std::atan2(r.z(), std::hypot(r.x(), r.y()))) > 0.5 * sensor.vertical_fov)
            continue;
          if (grid.raycast_occluded(pos, cell_pos[i], casts)) continue;
          visible_pos.push_back(cell_pos[i]);
          visible_id.push_back(cells[i]);
        }
        if (visible_pos.empty()) continue;
        const YawResult yr = optimize_yaw(pos, visible_pos, sensor, cfg.n_yaw);
        if (yr.covered.empty()) continue;
        if (!best || yr.covered.size() > best->covered_frontiers.size()) {
          Viewpoint vp;
          vp.position = pos;
          vp.yaw = yr.yaw;
          for (int i : yr.covered) vp.covered_frontiers.push_back(visible_id[i]);
          vp.source_bubble_radius = b.radius;
          vp.used_fallback = true;
          best = std::move(vp);
        }
      }
    }
  }
  return best;
}

inline std::optional<Viewpoint> best_viewpoint_for_bubble(
    const Bubble& b, const FrontierBuckets& working, const OccupancyGrid& grid,
    const ObstacleIndex& index, const SensorSpec& sensor, const BubbleConfig& cfg,
    std::int64_t* casts) {
  const double res = grid.config().resolution;
  if (b.radius >= cfg.r_fallback) {
    // Large-sphere path: sphere convexity makes every surface-to-interior
    // segment obstacle-free, so coverage needs no ray casting.
    const std::vector<CellId> scoring =
        working.collect_within(b.center, interior_radius(b, res), false);
    if (!scoring.empty()) {
      std::vector<Vec3> scoring_pos;
      scoring_pos.reserve(scoring.size());
      const GridConfig& gc = grid.config();
      for (CellId id : scoring) scoring_pos.push_back(gc.center(gc.unlinear(id)));
      const std::vector<Vec3> candidates =
          sample_surface_viewpoints(b, grid, index, sensor, cfg);
      std::optional<Viewpoint> best;
      for (const Vec3& pos : candidates) {
        const YawResult yr = optimize_yaw(pos, scoring_pos, sensor, cfg.n_yaw);
        if (yr.covered.empty()) continue;
        if (!best || yr.covered.size() > best->covered_frontiers.size()) {
          Viewpoint vp;
          vp.position = pos;
          vp.yaw = yr.yaw;
          for (int i : yr.covered) vp.covered_frontiers.push_back(scoring[i]);
          vp.source_bubble_radius = b.radius;
          vp.used_fallback = false;
          best = std::move(vp);
        }
      }
      if (best) return best;
    }
  }
  return fallback_viewpoint(b, working, grid, index, sensor, cfg, casts);
}

}  // namespace detail

/// One bubble's best viewpoint plus the sphere centers it covers. Returns
/// nullopt when no candidate survives; the caller then marks the bubble's
/// frontier cells dormant for this planning cycle.
inline std::optional<Viewpoint> generate_viewpoint(
    const Bubble& b, const FrontierSet& fs, const OccupancyGrid& grid,
    const ObstacleIndex& index, const SensorSpec& sensor, const BubbleConfig& cfg,
    std::int64_t* casts = nullptr,
    std::span<const detail::CandidateCenter> remaining = {}) {
  detail::FrontierBuckets working(fs.config(), fs.cells());
  std::int64_t local = 0;
  auto vp = detail::best_viewpoint_for_bubble(b, working, grid, index, sensor, cfg, &local);
  if (casts) *casts += local;
  if (vp && !remaining.empty())
    vp->covered_centers = detail::covered_centers(*vp, b, sensor, remaining);
  return vp;
}

struct ViewpointGenResult {
  std::vector<Viewpoint> viewpoints;
  std::vector<CellId> dormant_cells;
  std::int64_t raycasts = 0;
};

/// The full viewpoint-generation loop: downsample frontier cells to sphere
/// centers, build one bubble per center, then repeatedly take the
/// largest-radius bubble, emit its best viewpoint and retire the frontier
/// cells and sphere centers that viewpoint covers.
inline ViewpointGenResult generate_viewpoints(const FrontierSet& fs, const OccupancyGrid& grid,
                                              const ObstacleIndex& index,
                                              const SensorSpec& sensor, const BubbleConfig& cfg,
                                              std::int64_t* external_casts = nullptr) {
  ViewpointGenResult result;
  const CenterCandidates cand = downsample_frontier(fs, cfg.leaf_size);
  if (cand.cells.empty()) return result;

  struct Entry {
    int idx;
    double radius;
  };
  std::vector<Entry> order;
  order.reserve(cand.size());
  for (int i = 0; i < static_cast<int>(cand.size()); ++i) {
    const auto nn = index.nearest(cand.centers[i]);
    order.push_back({i, nn ? std::min(nn->dist, cfg.r_max) : cfg.r_max});
  }
  std::sort(order.begin(), order.end(), [&](const Entry& a, const Entry& b) {
    if (a.radius != b.radius) return a.radius > b.radius;
    return cand.cells[a.idx] < cand.cells[b.idx];
  });

  detail::FrontierBuckets working(fs.config(), fs.cells());
  std::vector<bool> alive(cand.size(), true);

  for (const Entry& e : order) {
    if (!alive[e.idx]) continue;
    alive[e.idx] = false;

    Bubble b;
    b.center = cand.centers[e.idx];
    b.center_cell = cand.cells[e.idx];
    b.radius = e.radius;
    b.contained_frontiers = working.collect_within(b.center, b.radius, true);

    std::vector<detail::CandidateCenter> remaining;
    for (int j = 0; j < static_cast<int>(cand.size()); ++j)
      if (alive[j]) remaining.push_back({cand.cells[j], cand.centers[j]});

    auto vp = detail::best_viewpoint_for_bubble(b, working, grid, index, sensor, cfg,
                                                &result.raycasts);
    if (vp) {
      vp->covered_centers = detail::covered_centers(*vp, b, sensor, remaining);
      working.remove(vp->covered_frontiers);
      std::unordered_set<CellId> covered(vp->covered_centers.begin(),
                                         vp->covered_centers.end());
      for (int j = 0; j < static_cast<int>(cand.size()); ++j)
        if (alive[j] && covered.count(cand.cells[j])) alive[j] = false;
      result.viewpoints.push_back(std::move(*vp));
    } else {
      std::vector<CellId> dormant = b.contained_frontiers;
      if (working.contains(b.center_cell) &&
          !std::binary_search(dormant.begin(), dormant.end(), b.center_cell))
        dormant.push_back(b.center_cell);
      working.remove(dormant);
      result.dormant_cells.insert(result.dormant_cells.end(), dormant.begin(), dormant.end());
    }
  }
  std::sort(result.dormant_cells.begin(), result.dormant_cells.end());
  if (external_casts) *external_casts += result.raycasts;
  return result;
}

}  // namespace bubblex
