#pragma once

#include <cassert>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "bubblex/common.hpp"

namespace bubblex {

enum class VoxelState : std::uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

using CellId = std::int64_t;

/// Axis-aligned voxel grid geometry: origin corner, cubic resolution, voxel
/// counts per axis. The grid spans [origin, origin + dims * resolution).
struct GridConfig {
  Vec3 origin = Vec3::Zero();
  double resolution = 0.2;
  Idx3 dims = Idx3(1, 1, 1);

  bool valid() const {
    return resolution > 0.0 && dims.x() >= 1 && dims.y() >= 1 && dims.z() >= 1;
  }
  std::int64_t cell_count() const {
    return static_cast<std::int64_t>(dims.x()) * dims.y() * dims.z();
  }
  Vec3 max_corner() const { return origin + dims.cast<double>() * resolution; }

  bool in_bounds(const Idx3& c) const {
    return c.x() >= 0 && c.x() < dims.x() && c.y() >= 0 && c.y() < dims.y() &&
           c.z() >= 0 && c.z() < dims.z();
  }
  bool in_bounds_point(const Vec3& p) const {
    const Vec3 mx = max_corner();
    return p.x() >= origin.x() && p.x() < mx.x() && p.y() >= origin.y() &&
           p.y() < mx.y() && p.z() >= origin.z() && p.z() < mx.z();
  }

  // Voxel containing p (floor convention). Caller checks bounds.
  Idx3 cell_at(const Vec3& p) const {
    return Idx3(static_cast<int>(std::floor((p.x() - origin.x()) / resolution)),
                static_cast<int>(std::floor((p.y() - origin.y()) / resolution)),
                static_cast<int>(std::floor((p.z() - origin.z()) / resolution)));
  }
  Vec3 center(const Idx3& c) const {
    return origin + (c.cast<double>() + Vec3::Constant(0.5)) * resolution;
  }

  CellId linear(const Idx3& c) const {
    return (static_cast<CellId>(c.z()) * dims.y() + c.y()) * dims.x() + c.x();
  }
  Idx3 unlinear(CellId id) const {
    const int x = static_cast<int>(id % dims.x());
    const int y = static_cast<int>((id / dims.x()) % dims.y());
    const int z = static_cast<int>(id / (static_cast<CellId>(dims.x()) * dims.y()));
    return Idx3(x, y, z);
  }
};

namespace detail {

// Clip segment a->b to the grid volume (Liang-Barsky). Returns the clipped
// endpoint nudged slightly inside so its voxel index is in bounds, or nullopt
// if the segment leaves the volume immediately. `a` must be in bounds.
inline std::optional<Vec3> clip_endpoint(const GridConfig& cfg, const Vec3& a,
                                         const Vec3& b, bool* clipped) {
  *clipped = false;
  if (cfg.in_bounds_point(b)) return b;
  const Vec3 d = b - a;
  const Vec3 lo = cfg.origin;
  const Vec3 hi = cfg.max_corner();
  double t_exit = 1.0;
  for (int k = 0; k < 3; ++k) {
    if (d[k] > 0.0) {
      t_exit = std::min(t_exit, (hi[k] - a[k]) / d[k]);
    } else if (d[k] < 0.0) {
      t_exit = std::min(t_exit, (lo[k] - a[k]) / d[k]);
    }
  }
  t_exit = std::max(0.0, t_exit);
  *clipped = true;
  // Pull back a hair so the endpoint voxel is strictly inside.
  const double eps = 1e-9 * cfg.resolution / std::max(1e-12, d.norm());
  Vec3 e = a + d * std::max(0.0, t_exit - eps);
  for (int k = 0; k < 3; ++k) {
    e[k] = std::min(std::max(e[k], lo[k]), hi[k] - 1e-9 * cfg.resolution);
  }
  return e;
}

// Exact voxel walk from the cell containing a to the cell containing b
// (Amanatides-Woo stepping). Visits every voxel the segment passes through,
// in order, starting with the cell of a. The visitor returns false to stop.
template <typename Visitor>
inline void walk_segment(const GridConfig& cfg, const Vec3& a, const Vec3& b,
                         Visitor&& visit) {
  Idx3 idx = cfg.cell_at(a);
  const Idx3 end = cfg.cell_at(b);
  const Vec3 d = b - a;
  Idx3 step = Idx3::Zero();
  Vec3 t_max, t_delta;
  for (int k = 0; k < 3; ++k) {
    if (d[k] > 0.0) {
      step[k] = 1;
      t_delta[k] = cfg.resolution / d[k];
      t_max[k] = (cfg.origin[k] + (idx[k] + 1) * cfg.resolution - a[k]) / d[k];
    } else if (d[k] < 0.0) {
      step[k] = -1;
      t_delta[k] = -cfg.resolution / d[k];
      t_max[k] = (cfg.origin[k] + idx[k] * cfg.resolution - a[k]) / d[k];
    } else {
      step[k] = 0;
      t_delta[k] = std::numeric_limits<double>::infinity();
      t_max[k] = std::numeric_limits<double>::infinity();
    }
  }
  if (!visit(idx)) return;
  int guard = (end - idx).cwiseAbs().sum() + 8;
  while (idx != end && guard-- > 0) {
    int ax = 0;
    if (t_max[1] < t_max[ax]) ax = 1;
    if (t_max[2] < t_max[ax]) ax = 2;
    idx[ax] += step[ax];
    t_max[ax] += t_delta[ax];
    if (!visit(idx)) return;
  }
  if (guard <= 0 && idx != end) visit(end);  // fp stragglers
}

}  // namespace detail

/// Tri-state occupancy grid over a GridConfig. Cell states only move
/// Unknown->Free, Unknown->Occupied or Free->Occupied; Occupied is terminal.
class OccupancyGrid {
 public:
  explicit OccupancyGrid(GridConfig cfg)
      : cfg_(cfg), cells_(static_cast<std::size_t>(cfg.cell_count()), VoxelState::Unknown) {
    assert(cfg_.valid());
  }

  const GridConfig& config() const { return cfg_; }
  std::int64_t known_count() const { return known_count_; }

  VoxelState state(const Idx3& c) const {
    if (!cfg_.in_bounds(c)) return VoxelState::Unknown;
    return cells_[static_cast<std::size_t>(cfg_.linear(c))];
  }
  VoxelState state_at(const Vec3& p) const {
    if (!cfg_.in_bounds_point(p)) return VoxelState::Unknown;
    return cells_[static_cast<std::size_t>(cfg_.linear(cfg_.cell_at(p)))];
  }
  bool is_known_free(const Vec3& p) const { return state_at(p) == VoxelState::Free; }

  // Applies the monotone transition rules; returns true if the state changed.
  bool set_state(const Idx3& c, VoxelState s) {
    if (!cfg_.in_bounds(c)) return false;
    VoxelState& cur = cells_[static_cast<std::size_t>(cfg_.linear(c))];
    if (cur == s) return false;
    if (cur == VoxelState::Occupied) return false;
    if (cur == VoxelState::Free && s == VoxelState::Unknown) return false;
    if (cur == VoxelState::Unknown) ++known_count_;
    cur = s;
    return true;
  }

  // Force a state ignoring transition rules. For building ground-truth maps.
  void set_state_raw(const Idx3& c, VoxelState s) {
    if (!cfg_.in_bounds(c)) return;
    VoxelState& cur = cells_[static_cast<std::size_t>(cfg_.linear(c))];
    if (cur != VoxelState::Unknown && s == VoxelState::Unknown) --known_count_;
    if (cur == VoxelState::Unknown && s != VoxelState::Unknown) ++known_count_;
    cur = s;
  }
  void fill(VoxelState s) {
    std::fill(cells_.begin(), cells_.end(), s);
    known_count_ = (s == VoxelState::Unknown) ? 0 : cfg_.cell_count();
  }

  /// Integrate one sensor ray. Voxels traversed from the origin up to (not
  /// including) the endpoint voxel become Free unless already Occupied; the
  /// endpoint voxel becomes Occupied when hit is true, otherwise Free. An
  /// endpoint outside the grid is clipped at the boundary and treated as a
  /// miss beyond the clip. Returns the indices whose state changed.
  std::vector<Idx3> integrate_ray(const Vec3& origin, const Vec3& endpoint, bool hit) {
    std::vector<Idx3> changed;
    if (!cfg_.in_bounds_point(origin)) return changed;
    bool clipped = false;
    const auto end = detail::clip_endpoint(cfg_, origin, endpoint, &clipped);
    if (!end) return changed;
    if (clipped) hit = false;
    const Idx3 end_cell = cfg_.cell_at(*end);
    detail::walk_segment(cfg_, origin, *end, [&](const Idx3& c) {
      const bool is_end = (c == end_cell);
      const VoxelState target =
          (is_end && hit) ? VoxelState::Occupied : VoxelState::Free;
      if (set_state(c, target)) changed.push_back(c);
      return true;
    });
    return changed;
  }

  /// True iff some voxel on the segment between a and b, excluding the voxel
  /// containing b, is Occupied. Unknown voxels do not occlude. When `casts`
  /// is given it is incremented once per call (coverage-evaluation
  /// instrumentation).
  bool raycast_occluded(const Vec3& a, const Vec3& b,
                        std::int64_t* casts = nullptr) const {
    if (casts) ++(*casts);
    const Idx3 skip = cfg_.cell_at(b);
    bool occluded = false;
    detail::walk_segment(cfg_, a, b, [&](const Idx3& c) {
      if (c == skip) return true;
      if (state(c) == VoxelState::Occupied) {
        occluded = true;
        return false;
      }
      return true;
    });
    return occluded;
  }

  /// First Occupied voxel on the segment a->b (inclusive of both end
  /// voxels), or nullopt. Used to trace sensor rays in ground-truth grids.
  std::optional<Idx3> trace_first_hit(const Vec3& a, const Vec3& b) const {
    std::optional<Idx3> hit;
    detail::walk_segment(cfg_, a, b, [&](const Idx3& c) {
      if (state(c) == VoxelState::Occupied) {
        hit = c;
        return false;
      }
      return true;
    });
    return hit;
  }

  /// True iff no Occupied voxel center lies within d of p (box scan).
  bool has_clearance(const Vec3& p, double d) const {
    const int r = static_cast<int>(std::ceil(d / cfg_.resolution)) + 1;
    const Idx3 c = cfg_.cell_at(p);
    const double d2 = d * d;
    for (int dz = -r; dz <= r; ++dz)
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const Idx3 n = c + Idx3(dx, dy, dz);
          if (!cfg_.in_bounds(n)) continue;
          if (state(n) != VoxelState::Occupied) continue;
          if ((cfg_.center(n) - p).squaredNorm() <= d2) return false;
        }
    return true;
  }

 private:
  GridConfig cfg_;
  std::vector<VoxelState> cells_;
  std::int64_t known_count_ = 0;
};

}  // namespace bubblex
