#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bubblex/common.hpp"
#include "bubblex/voxel_grid.hpp"

namespace bubblex {

enum class FovKind { Cone, Panoramic };

/// Sensor field-of-view model. Cone sensors (solid-state LiDAR style) see an
/// azimuth/elevation window around the yaw direction; panoramic sensors see
/// 360 degrees horizontally and are limited by vertical FoV and range only.
struct SensorSpec {
  FovKind kind = FovKind::Panoramic;
  double horizontal_fov = 2.0 * kPi;
  double vertical_fov = deg2rad(70.0);
  double max_range = 10.0;

  static SensorSpec cone(double hfov, double vfov, double range) {
    return SensorSpec{FovKind::Cone, hfov, vfov, range};
  }
  static SensorSpec panoramic(double vfov, double range) {
    return SensorSpec{FovKind::Panoramic, 2.0 * kPi, vfov, range};
  }

  bool in_fov(const Vec3& pos, double yaw, const Vec3& target) const {
    const Vec3 r = target - pos;
    const double range = r.norm();
    if (range > max_range) return false;
    if (range < 1e-12) return true;
    const double elevation = std::atan2(r.z(), std::hypot(r.x(), r.y()));
    if (std::abs(elevation) > 0.5 * vertical_fov) return false;
    if (kind == FovKind::Panoramic) return true;
    const double azimuth = std::atan2(r.y(), r.x());
    return std::abs(wrap_angle(azimuth - yaw)) <= 0.5 * horizontal_fov;
  }
};

/// A candidate sensor pose with the frontier cells and sphere centers it
/// covers. `covered_centers` drives the queue-removal step of the viewpoint
/// generation loop; `source_bubble_radius` feeds the gain function.
struct Viewpoint {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;
  std::vector<CellId> covered_frontiers;  // F_v
  std::vector<CellId> covered_centers;    // S_v
  double source_bubble_radius = 0.0;
  bool used_fallback = false;

  std::size_t coverage() const { return covered_frontiers.size(); }
};

struct YawResult {
  double yaw = 0.0;
  std::vector<int> covered;  // indices into the input cell list
};

/// Sweep n_yaw uniformly spaced yaw angles in (-pi, pi] and return the one
/// covering the most cells (ties toward the smallest yaw). Panoramic
/// sensors skip the sweep: yaw 0 and coverage by range/vertical FoV only.
inline YawResult optimize_yaw(const Vec3& position, std::span<const Vec3> cells,
                              const SensorSpec& sensor, int n_yaw) {
  YawResult result;
  if (sensor.kind == FovKind::Panoramic) {
    result.yaw = 0.0;
    for (int i = 0; i < static_cast<int>(cells.size()); ++i)
      if (sensor.in_fov(position, 0.0, cells[i])) result.covered.push_back(i);
    return result;
  }

  struct Valid {
    int idx;
    double az;
    bool always;  // degenerate zero-range target
  };
  std::vector<Valid> valid;
  valid.reserve(cells.size());
  for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
    const Vec3 r = cells[i] - position;
    const double range = r.norm();
    if (range > sensor.max_range) continue;
    if (range < 1e-12) {
      valid.push_back({i, 0.0, true});
      continue;
    }
    const double elevation = std::atan2(r.z(), std::hypot(r.x(), r.y()));
    if (std::abs(elevation) > 0.5 * sensor.vertical_fov) continue;
    valid.push_back({i, std::atan2(r.y(), r.x()), false});
  }

  int best_count = -1;
  double best_yaw = 0.0;
  for (int k = 0; k < n_yaw; ++k) {
    const double yaw = -kPi + 2.0 * kPi * (k + 1) / n_yaw;
    int count = 0;
    for (const Valid& v : valid)
      if (v.always || std::abs(wrap_angle(v.az - yaw)) <= 0.5 * sensor.horizontal_fov)
        ++count;
    if (count > best_count) {
      best_count = count;
      best_yaw = yaw;
    }
  }
  result.yaw = best_yaw;
  for (const Valid& v : valid)
    if (v.always || std::abs(wrap_angle(v.az - best_yaw)) <= 0.5 * sensor.horizontal_fov)
      result.covered.push_back(v.idx);
  return result;
}

}  // namespace bubblex
