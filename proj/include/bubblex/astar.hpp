#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bubblex/voxel_grid.hpp"

namespace bubblex {

/// Traversability view of an occupancy grid for path search, optionally
/// coarsened by an integer factor. A coarse cell is traversable only when
/// every constituent fine voxel is known Free. Unknown and Occupied space is
/// never traversable.
class PlanningGrid {
 public:
  static PlanningGrid build(const OccupancyGrid& fine, int factor = 1) {
    PlanningGrid pg;
    const GridConfig& fc = fine.config();
    pg.cfg_.origin = fc.origin;
    pg.cfg_.resolution = fc.resolution * factor;
    pg.cfg_.dims = Idx3((fc.dims.x() + factor - 1) / factor,
                        (fc.dims.y() + factor - 1) / factor,
                        (fc.dims.z() + factor - 1) / factor);
    pg.traversable_.assign(static_cast<std::size_t>(pg.cfg_.cell_count()), 1);
    for (int z = 0; z < pg.cfg_.dims.z(); ++z)
      for (int y = 0; y < pg.cfg_.dims.y(); ++y)
        for (int x = 0; x < pg.cfg_.dims.x(); ++x) {
          bool ok = true;
          for (int dz = 0; dz < factor && ok; ++dz)
            for (int dy = 0; dy < factor && ok; ++dy)
              for (int dx = 0; dx < factor && ok; ++dx) {
                const Idx3 f(x * factor + dx, y * factor + dy, z * factor + dz);
                if (!fc.in_bounds(f) || fine.state(f) != VoxelState::Free) ok = false;
              }
          pg.traversable_[static_cast<std::size_t>(pg.cfg_.linear(Idx3(x, y, z)))] =
              ok ? 1 : 0;
        }
    return pg;
  }

  const GridConfig& config() const { return cfg_; }
  bool traversable(const Idx3& c) const {
    if (!cfg_.in_bounds(c)) return false;
    return traversable_[static_cast<std::size_t>(cfg_.linear(c))] != 0;
  }

 private:
  GridConfig cfg_;
  std::vector<std::uint8_t> traversable_;
};

struct PathResult {
  std::vector<Vec3> waypoints;  // exact endpoints, voxel centers between
  double length = 0.0;
};

namespace detail {

inline const std::vector<Idx3>& neighbor_offsets_26() {
  static const std::vector<Idx3> offs = [] {
    std::vector<Idx3> v;
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if (dx || dy || dz) v.emplace_back(dx, dy, dz);
    return v;
  }();
  return offs;
}

}  // namespace detail

/// A* over 26-connected traversable cells with Euclidean edge weights and an
/// admissible Euclidean heuristic. Path length is measured along the
/// polyline [a, interior voxel centers..., b], so it is always >= ||a-b||.
/// The cells containing a and b are treated as traversable (callers
/// guarantee both points lie in known-Free fine voxels).
inline std::optional<PathResult> astar_path(const PlanningGrid& pg, const Vec3& a,
                                            const Vec3& b) {
  const GridConfig& cfg = pg.config();
  if (!cfg.in_bounds_point(a) || !cfg.in_bounds_point(b)) return std::nullopt;
  const Idx3 sa = cfg.cell_at(a);
  const Idx3 sb = cfg.cell_at(b);
  const CellId ida = cfg.linear(sa);
  const CellId idb = cfg.linear(sb);
  if (ida == idb) {
    PathResult r;
    r.waypoints.push_back(a);
    if ((b - a).norm() > 0.0) r.waypoints.push_back(b);
    r.length = (b - a).norm();
    return r;
  }

  const auto pos_of = [&](CellId id) -> Vec3 {
    if (id == ida) return a;
    if (id == idb) return b;
    return cfg.center(cfg.unlinear(id));
  };
  const auto passable = [&](const Idx3& c, CellId id) {
    return id == ida || id == idb || pg.traversable(c);
  };

  struct NodeInfo {
    double g = std::numeric_limits<double>::infinity();
    CellId parent = -1;
    bool closed = false;
  };
  std::unordered_map<CellId, NodeInfo> info;
  using QEntry = std::tuple<double, double, CellId>;  // f, g, id
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<QEntry>> open;

  info[ida] = {0.0, -1, false};
  open.emplace((b - a).norm(), 0.0, ida);

  while (!open.empty()) {
    const auto [f, g, id] = open.top();
    open.pop();
    NodeInfo& ni = info[id];
    if (ni.closed || g > ni.g) continue;
    ni.closed = true;
    if (id == idb) break;
    const Idx3 c = cfg.unlinear(id);
    const Vec3 pu = pos_of(id);
    for (const Idx3& d : detail::neighbor_offsets_26()) {
      const Idx3 n = c + d;
      if (!cfg.in_bounds(n)) continue;
      const CellId nid = cfg.linear(n);
      if (!passable(n, nid)) continue;
      const Vec3 pv = pos_of(nid);
      const double ng = g + (pv - pu).norm();
      NodeInfo& nn = info[nid];
      if (ng < nn.g) {
        nn.g = ng;
        nn.parent = id;
        open.emplace(ng + (b - pv).norm(), ng, nid);
      }
    }
  }

  const auto it = info.find(idb);
  if (it == info.end() || !it->second.closed) return std::nullopt;
  PathResult r;
  r.length = it->second.g;
  std::vector<CellId> chain;
  for (CellId cur = idb; cur != -1; cur = info[cur].parent) chain.push_back(cur);
  std::reverse(chain.begin(), chain.end());
  for (CellId id : chain) r.waypoints.push_back(pos_of(id));
  return r;
}

inline std::optional<PathResult> astar_path(const OccupancyGrid& grid, const Vec3& a,
                                            const Vec3& b) {
  return astar_path(PlanningGrid::build(grid, 1), a, b);
}

/// Exact shortest-path lengths from one source to many targets (same metric
/// as astar_path), via a single Dijkstra sweep with early termination.
/// Unreachable targets get +infinity.
inline std::vector<double> shortest_lengths_from(const PlanningGrid& pg, const Vec3& src,
                                                 std::span<const Vec3> targets) {
  const GridConfig& cfg = pg.config();
  std::vector<double> out(targets.size(), std::numeric_limits<double>::infinity());
  if (!cfg.in_bounds_point(src)) return out;
  const Idx3 sa = cfg.cell_at(src);
  const CellId ida = cfg.linear(sa);

  // Cells whose settled distance each target needs (its traversable
  // neighbors); same-cell targets resolve immediately.
  std::unordered_set<CellId> needed;
  std::vector<Idx3> goal_cells(targets.size());
  for (std::size_t j = 0; j < targets.size(); ++j) {
    if (!cfg.in_bounds_point(targets[j])) {
      goal_cells[j] = Idx3(-1, -1, -1);
      continue;
    }
    goal_cells[j] = cfg.cell_at(targets[j]);
    const CellId idj = cfg.linear(goal_cells[j]);
    if (idj == ida) {
      out[j] = (targets[j] - src).norm();
      continue;
    }
    for (const Idx3& d : detail::neighbor_offsets_26()) {
      const Idx3 n = goal_cells[j] + d;
      if (!cfg.in_bounds(n)) continue;
      const CellId nid = cfg.linear(n);
      if (nid == ida || pg.traversable(n)) needed.insert(nid);
    }
  }

  std::unordered_map<CellId, double> dist;
  using QEntry = std::pair<double, CellId>;
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<QEntry>> open;
  dist[ida] = 0.0;
  open.emplace(0.0, ida);
  std::unordered_set<CellId> settled;

  while (!open.empty() && !needed.empty()) {
    const auto [g, id] = open.top();
    open.pop();
    if (settled.count(id) || g > dist[id]) continue;
    settled.insert(id);
    needed.erase(id);
    const Idx3 c = cfg.unlinear(id);
    const Vec3 pu = (id == ida) ? src : cfg.center(c);
    for (const Idx3& d : detail::neighbor_offsets_26()) {
      const Idx3 n = c + d;
      if (!cfg.in_bounds(n)) continue;
      const CellId nid = cfg.linear(n);
      if (nid != ida && !pg.traversable(n)) continue;
      const Vec3 pv = cfg.center(n);
      const double ng = g + (pv - pu).norm();
      const auto it = dist.find(nid);
      if (it == dist.end() || ng < it->second) {
        dist[nid] = ng;
        open.emplace(ng, nid);
      }
    }
  }

  for (std::size_t j = 0; j < targets.size(); ++j) {
    if (goal_cells[j].x() < 0) continue;
    const CellId idj = cfg.linear(goal_cells[j]);
    if (idj == ida) continue;  // already set
    double best = std::numeric_limits<double>::infinity();
    for (const Idx3& d : detail::neighbor_offsets_26()) {
      const Idx3 n = goal_cells[j] + d;
      if (!cfg.in_bounds(n)) continue;
      const CellId nid = cfg.linear(n);
      if (nid != ida && !pg.traversable(n)) continue;
      const auto it = dist.find(nid);
      if (it == dist.end() || !settled.count(nid)) continue;
      const Vec3 pn = (nid == ida) ? src : cfg.center(n);
      best = std::min(best, it->second + (pn - targets[j]).norm());
    }
    out[j] = best;
  }
  return out;
}

}  // namespace bubblex
