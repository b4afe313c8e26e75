#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bubblex/voxel_grid.hpp"

namespace bubblex {

/// Incrementally maintained frontier set: Free cells with at least one
/// face-adjacent in-bounds Unknown neighbor. Out-of-bounds space never
/// generates frontiers.
class FrontierSet {
 public:
  explicit FrontierSet(const GridConfig& cfg) : cfg_(cfg) {}

  static bool is_frontier(const OccupancyGrid& grid, const Idx3& c) {
    if (grid.state(c) != VoxelState::Free) return false;
    static const Idx3 kFaces[6] = {Idx3(1, 0, 0),  Idx3(-1, 0, 0), Idx3(0, 1, 0),
                                   Idx3(0, -1, 0), Idx3(0, 0, 1),  Idx3(0, 0, -1)};
    for (const Idx3& d : kFaces) {
      const Idx3 n = c + d;
      if (grid.config().in_bounds(n) && grid.state(n) == VoxelState::Unknown) return true;
    }
    return false;
  }

  // `changed` lists every cell whose state changed since the last call; only
  // those cells and their face neighbors are re-examined.
  void update(const OccupancyGrid& grid, std::span<const Idx3> changed) {
    dirty_min_ = Idx3::Constant(std::numeric_limits<int>::max());
    dirty_max_ = Idx3::Constant(std::numeric_limits<int>::min());
    static const Idx3 kProbe[7] = {Idx3(0, 0, 0),  Idx3(1, 0, 0),  Idx3(-1, 0, 0),
                                   Idx3(0, 1, 0),  Idx3(0, -1, 0), Idx3(0, 0, 1),
                                   Idx3(0, 0, -1)};
    for (const Idx3& c : changed) {
      dirty_min_ = dirty_min_.cwiseMin(c);
      dirty_max_ = dirty_max_.cwiseMax(c);
      for (const Idx3& d : kProbe) {
        const Idx3 n = c + d;
        if (!cfg_.in_bounds(n)) continue;
        const CellId id = cfg_.linear(n);
        if (is_frontier(grid, n))
          cells_.insert(id);
        else
          cells_.erase(id);
      }
    }
  }

  bool contains(CellId id) const { return cells_.count(id) > 0; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  const std::unordered_set<CellId>& cells() const { return cells_; }
  const GridConfig& config() const { return cfg_; }
  Vec3 center_of(CellId id) const { return cfg_.center(cfg_.unlinear(id)); }

  std::vector<CellId> sorted_cells() const {
    std::vector<CellId> out(cells_.begin(), cells_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  // Index-space box touched by the last update (empty if min > max).
  Idx3 dirty_min() const { return dirty_min_; }
  Idx3 dirty_max() const { return dirty_max_; }

 private:
  GridConfig cfg_;
  std::unordered_set<CellId> cells_;
  Idx3 dirty_min_ = Idx3::Constant(std::numeric_limits<int>::max());
  Idx3 dirty_max_ = Idx3::Constant(std::numeric_limits<int>::min());
};

/// Sphere-center candidates: one representative frontier cell per non-empty
/// cubic downsample leaf, snapped to the member nearest the leaf centroid.
struct CenterCandidates {
  std::vector<CellId> cells;
  std::vector<Vec3> centers;
  std::size_t size() const { return cells.size(); }
};

inline CenterCandidates downsample_frontier(const FrontierSet& fs, double leaf_size) {
  CenterCandidates out;
  if (fs.empty()) return out;
  const GridConfig& cfg = fs.config();

  struct LeafKey {
    int x, y, z;
    bool operator<(const LeafKey& o) const {
      return std::tie(x, y, z) < std::tie(o.x, o.y, o.z);
    }
  };
  std::map<LeafKey, std::vector<CellId>> leaves;
  for (CellId id : fs.cells()) {
    const Vec3 p = fs.center_of(id);
    const LeafKey key{static_cast<int>(std::floor((p.x() - cfg.origin.x()) / leaf_size)),
                      static_cast<int>(std::floor((p.y() - cfg.origin.y()) / leaf_size)),
                      static_cast<int>(std::floor((p.z() - cfg.origin.z()) / leaf_size))};
    leaves[key].push_back(id);
  }
  for (auto& [key, members] : leaves) {
    const Vec3 centroid = cfg.origin + Vec3(key.x + 0.5, key.y + 0.5, key.z + 0.5) * leaf_size;
    CellId best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    Idx3 best_idx = Idx3::Zero();
    std::sort(members.begin(), members.end());
    for (CellId id : members) {
      const Idx3 idx = cfg.unlinear(id);
      const double d2 = (cfg.center(idx) - centroid).squaredNorm();
      const bool better =
          d2 < best_d2 ||
          (d2 == best_d2 && std::tie(idx.x(), idx.y(), idx.z()) <
                                std::tie(best_idx.x(), best_idx.y(), best_idx.z()));
      if (better) {
        best = id;
        best_d2 = d2;
        best_idx = idx;
      }
    }
    out.cells.push_back(best);
    out.centers.push_back(cfg.center(best_idx));
  }
  return out;
}

}  // namespace bubblex
