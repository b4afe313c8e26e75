#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <optional>
#include <unordered_set>
#include <vector>

#include "bubblex/astar.hpp"
#include "bubblex/bubble.hpp"
#include "bubblex/frontier.hpp"
#include "bubblex/obstacle_index.hpp"
#include "bubblex/sensor.hpp"

namespace bubblex {

struct BaselineConfig {
  double split_len = 4.0;  // PCA split threshold on cluster extent, m
  int n_radii = 4;         // cylindrical sampling grid
  int n_az = 12;
  int n_heights = 3;
  double r_min = 1.5;
  double r_max = 4.5;
  double height_step = 1.0;  // vertical offsets height_step * {-(k-1)/2 .. (k-1)/2}
  int n_yaw = 36;
  double d_safe = 0.6;
  int max_eval_cells = 48;        // deterministic subsample cap per cluster
  double gain_radius_cap = 8.0;   // cap on the gain radius surrogate
};

/// Connected frontier patch with its principal-axis extent.
struct FrontierCluster {
  std::vector<CellId> cells;
  Vec3 centroid = Vec3::Zero();
  double extent = 0.0;
};

namespace detail {

inline void cluster_stats(const GridConfig& cfg, FrontierCluster& cl, Vec3* axis) {
  Vec3 mean = Vec3::Zero();
  for (CellId id : cl.cells) mean += cfg.center(cfg.unlinear(id));
  mean /= static_cast<double>(cl.cells.size());
  cl.centroid = mean;
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (CellId id : cl.cells) {
    const Vec3 d = cfg.center(cfg.unlinear(id)) - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(cl.cells.size());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  Vec3 first = es.eigenvectors().col(2);  // largest eigenvalue
  // Deterministic sign: largest-magnitude component positive.
  int dom = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(first[k]) > std::abs(first[dom])) dom = k;
  if (first[dom] < 0.0) first = -first;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (CellId id : cl.cells) {
    const double proj = (cfg.center(cfg.unlinear(id)) - mean).dot(first);
    lo = std::min(lo, proj);
    hi = std::max(hi, proj);
  }
  cl.extent = hi - lo;
  if (axis) *axis = first;
}

inline void split_cluster(const GridConfig& cfg, FrontierCluster cl, double split_len,
                          std::vector<FrontierCluster>& out) {
  Vec3 axis;
  cluster_stats(cfg, cl, &axis);
  if (cl.extent <= split_len || cl.cells.size() < 2) {
    out.push_back(std::move(cl));
    return;
  }
  FrontierCluster below, above;
  for (CellId id : cl.cells) {
    const double proj = (cfg.center(cfg.unlinear(id)) - cl.centroid).dot(axis);
    (proj < 0.0 ? below : above).cells.push_back(id);
  }
  if (below.cells.empty() || above.cells.empty()) {
    // Degenerate projection spread; force a median split.
    below.cells.clear();
    above.cells.clear();
    for (std::size_t i = 0; i < cl.cells.size(); ++i)
      (i < cl.cells.size() / 2 ? below : above).cells.push_back(cl.cells[i]);
  }
  split_cluster(cfg, std::move(below), split_len, out);
  split_cluster(cfg, std::move(above), split_len, out);
}

}  // namespace detail

/// Region-grow 26-connected frontier components, then recursively bisect
/// any cluster whose first-principal-axis extent exceeds split_len by the
/// plane through its centroid normal to that axis.
inline std::vector<FrontierCluster> cluster_frontiers(const FrontierSet& fs,
                                                      const BaselineConfig& cfg) {
  std::vector<FrontierCluster> out;
  const GridConfig& gc = fs.config();
  const std::vector<CellId> all = fs.sorted_cells();
  std::unordered_set<CellId> unvisited(all.begin(), all.end());
  for (CellId seed : all) {
    if (!unvisited.count(seed)) continue;
    FrontierCluster cl;
    std::vector<CellId> stack{seed};
    unvisited.erase(seed);
    while (!stack.empty()) {
      const CellId cur = stack.back();
      stack.pop_back();
      cl.cells.push_back(cur);
      const Idx3 c = gc.unlinear(cur);
      for (const Idx3& d : detail::neighbor_offsets_26()) {
        const Idx3 n = c + d;
        if (!gc.in_bounds(n)) continue;
        const CellId nid = gc.linear(n);
        const auto it = unvisited.find(nid);
        if (it == unvisited.end()) continue;
        unvisited.erase(it);
        stack.push_back(nid);
      }
    }
    std::sort(cl.cells.begin(), cl.cells.end());
    detail::split_cluster(gc, std::move(cl), cfg.split_len, out);
  }
  return out;
}

/// FUEL-style viewpoint sampling: a radius x azimuth x height grid around
/// the cluster centroid, coverage scored by ray-cast-verified visibility of
/// cluster cells (evaluated on a deterministic subsample when the cluster is
/// large) at the best swept yaw. Every visibility check is one ray cast.
inline std::optional<Viewpoint> sample_cylindrical_viewpoints(
    const FrontierCluster& cluster, const OccupancyGrid& grid, const ObstacleIndex& index,
    const SensorSpec& sensor, const BaselineConfig& cfg, std::int64_t* casts) {
  if (cluster.cells.empty()) return std::nullopt;
  const GridConfig& gc = grid.config();

  std::vector<CellId> eval_ids;
  const std::size_t stride =
      std::max<std::size_t>(1, (cluster.cells.size() + cfg.max_eval_cells - 1) /
                                   static_cast<std::size_t>(cfg.max_eval_cells));
  for (std::size_t i = 0; i < cluster.cells.size(); i += stride)
    eval_ids.push_back(cluster.cells[i]);
  std::vector<Vec3> eval_pos;
  eval_pos.reserve(eval_ids.size());
  for (CellId id : eval_ids) eval_pos.push_back(gc.center(gc.unlinear(id)));

  std::optional<Viewpoint> best;
  for (int ih = 0; ih < cfg.n_heights; ++ih) {
    const double h = cfg.height_step * (ih - 0.5 * (cfg.n_heights - 1));
    for (int ir = 0; ir < cfg.n_radii; ++ir) {
      const double rad = cfg.n_radii == 1
                             ? cfg.r_min
                             : cfg.r_min + (cfg.r_max - cfg.r_min) * ir / (cfg.n_radii - 1);
      for (int ia = 0; ia < cfg.n_az; ++ia) {
        const double az = 2.0 * kPi * ia / cfg.n_az;
        const Vec3 pos = cluster.centroid + Vec3(rad * std::cos(az), rad * std::sin(az), h);
        if (!detail::viewpoint_position_ok(pos, grid, index, cfg.d_safe)) continue;
        std::vector<Vec3> visible_pos;
        std::vector<CellId> visible_id;
        for (std::size_t i = 0; i < eval_pos.size(); ++i) {
          const Vec3 r = eval_pos[i] - pos;
          const double range = r.norm();
          if (range > sensor.max_range) continue;
          if (range > 1e-12 &&
              std::abs(std::atan2(r.z(), std::hypot(r.x(), r.y()))) > 0.5 * sensor.vertical_fov)
            continue;
          if (grid.raycast_occluded(pos, eval_pos[i], casts)) continue;
          visible_pos.push_back(eval_pos[i]);
          visible_id.push_back(eval_ids[i]);
        }
        if (visible_pos.empty()) continue;
        const YawResult yr = optimize_yaw(pos, visible_pos, sensor, cfg.n_yaw);
        if (yr.covered.empty()) continue;
        if (!best || yr.covered.size() > best->covered_frontiers.size()) {
          Viewpoint vp;
          vp.position = pos;
          vp.yaw = yr.yaw;
          for (int i : yr.covered) vp.covered_frontiers.push_back(visible_id[i]);
          vp.used_fallback = true;  // always ray-cast-scored
          best = std::move(vp);
        }
      }
    }
  }
  if (best) {
    // Radius surrogate for the shared gain function: nearest-obstacle
    // distance at the cluster centroid, capped like a bubble radius.
    const auto nn = index.nearest(cluster.centroid);
    best->source_bubble_radius =
        nn ? std::min(nn->dist, cfg.gain_radius_cap) : cfg.gain_radius_cap;
  }
  return best;
}

/// Comparison front-end driver: one best viewpoint per cluster.
inline ViewpointGenResult baseline_generate_viewpoints(
    const FrontierSet& fs, const OccupancyGrid& grid, const ObstacleIndex& index,
    const SensorSpec& sensor, const BaselineConfig& cfg,
    std::int64_t* external_casts = nullptr) {
  ViewpointGenResult result;
  const auto clusters = cluster_frontiers(fs, cfg);
  for (const FrontierCluster& cl : clusters) {
    auto vp = sample_cylindrical_viewpoints(cl, grid, index, sensor, cfg, &result.raycasts);
    if (vp)
      result.viewpoints.push_back(std::move(*vp));
    else
      result.dormant_cells.insert(result.dormant_cells.end(), cl.cells.begin(),
                                  cl.cells.end());
  }
  std::sort(result.dormant_cells.begin(), result.dormant_cells.end());
  if (external_casts) *external_casts += result.raycasts;
  return result;
}

}  // namespace bubblex
