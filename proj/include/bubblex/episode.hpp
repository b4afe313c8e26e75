#pragma once

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "bubblex/baseline.hpp"
#include "bubblex/bubble.hpp"
#include "bubblex/map_io.hpp"
#include "bubblex/mapgen.hpp"
#include "bubblex/scenario.hpp"
#include "bubblex/tour.hpp"
#include "bubblex/trajectory.hpp"

namespace bubblex {

struct ScanRay {
  Vec3 endpoint;
  bool hit;
};

/// Deterministic LiDAR fan over the sensor FoV, traced against the
/// ground-truth grid. Hit rays end at the struck voxel center; misses end at
/// max range. Optional Gaussian range noise from the seeded stream.
inline std::vector<ScanRay> simulate_scan(const OccupancyGrid& truth, const Vec3& pos,
                                          double yaw, const SensorSpec& sensor, int rays_az,
                                          int rays_el, double noise_sigma, Rng& rng) {
  std::vector<ScanRay> rays;
  rays.reserve(static_cast<std::size_t>(rays_az) * rays_el);
  const bool pano = sensor.kind == FovKind::Panoramic;
  for (int j = 0; j < rays_el; ++j) {
    const double el = sensor.vertical_fov * ((j + 0.5) / rays_el - 0.5);
    for (int i = 0; i < rays_az; ++i) {
      const double az = pano ? 2.0 * kPi * i / rays_az
                             : yaw + sensor.horizontal_fov * ((i + 0.5) / rays_az - 0.5);
      const Vec3 dir(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
      const Vec3 far = pos + dir * sensor.max_range;
      ScanRay ray{far, false};
      if (const auto hit = truth.trace_first_hit(pos, far)) {
        ray.endpoint = truth.config().center(*hit);
        ray.hit = true;
      }
      if (noise_sigma > 0.0) {
        const double d = (ray.endpoint - pos).norm() + rng.normal(noise_sigma);
        ray.endpoint = pos + dir * std::max(0.0, d);
      }
      rays.push_back(ray);
    }
  }
  return rays;
}

namespace detail {

// Conservative low-clearance flags per cell, maintained incrementally as
// cells become occupied; exact has_clearance() confirms flagged samples.
class ClearanceField {
 public:
  ClearanceField(const GridConfig& cfg, double d_safe)
      : cfg_(cfg), d_safe_(d_safe),
        flagged_(static_cast<std::size_t>(cfg.cell_count()), 0) {
    margin_ = d_safe + 0.5 * std::sqrt(3.0) * cfg.resolution;
    reach_ = static_cast<int>(std::ceil(margin_ / cfg.resolution));
  }

  void add_occupied(const Idx3& c) {
    const Vec3 oc = cfg_.center(c);
    for (int dz = -reach_; dz <= reach_; ++dz)
      for (int dy = -reach_; dy <= reach_; ++dy)
        for (int dx = -reach_; dx <= reach_; ++dx) {
          const Idx3 n = c + Idx3(dx, dy, dz);
          if (!cfg_.in_bounds(n)) continue;
          if ((cfg_.center(n) - oc).norm() <= margin_)
            flagged_[static_cast<std::size_t>(cfg_.linear(n))] = 1;
        }
  }

  bool maybe_low_clearance(const Vec3& p) const {
    if (!cfg_.in_bounds_point(p)) return false;
    return flagged_[static_cast<std::size_t>(cfg_.linear(cfg_.cell_at(p)))] != 0;
  }

 private:
  GridConfig cfg_;
  double d_safe_, margin_;
  int reach_;
  std::vector<std::uint8_t> flagged_;
};

}  // namespace detail

struct MetricSample {
  double t;
  double explored_volume;
  double flight_distance;
};

struct PlanningRound {
  double t = 0.0;
  double frontier_time = 0.0;  // wall seconds, reported not gated
  double viewpoint_time = 0.0;
  double costmat_time = 0.0;
  double tsp_time = 0.0;
  int n_viewpoints = 0;
};

struct EpisodeResult {
  std::string scenario;
  std::string frontend;
  std::uint64_t seed = 0;
  std::string completion = "timeout";  // completed | timeout | stalled
  double completion_time = 0.0;        // simulated seconds
  double flight_distance = 0.0;
  double coverage = 0.0;  // known fraction of truth-reachable cells
  std::int64_t raycast_count = 0;
  std::int64_t final_known = 0;
  double explored_volume = 0.0;
  double max_speed = 0.0;
  double max_tangential_accel = 0.0;
  bool safety_violation = false;
  std::vector<MetricSample> samples;
  std::vector<PlanningRound> rounds;
  std::vector<Vec3> executed_path;
  std::vector<Vec3> final_map_occupied;
};

struct RunOptions {
  bool validate = false;  // enable per-sample full-scan cross checks
};

inline EpisodeResult run_episode(const ScenarioConfig& cfg, const RunOptions& opts = {}) {
  if (cfg.map_path.empty()) throw std::runtime_error(cfg.name + ": scenario has no map");
  const OccupancyGrid truth = load_truth_map(cfg.map_path, cfg.grid);
  const GridConfig& gc = truth.config();
  if (!gc.in_bounds_point(cfg.start))
    throw std::runtime_error(cfg.name + ": start pose outside map bounds");
  if (truth.state_at(cfg.start) != VoxelState::Free)
    throw std::runtime_error(cfg.name + ": start pose inside an obstacle");

  EpisodeResult result;
  result.scenario = cfg.name;
  result.frontend = cfg.frontend;
  result.seed = cfg.seed;

  const std::vector<bool> reachable = flood_fill_free(truth, cfg.start);
  std::int64_t reachable_cells = 0;
  for (bool b : reachable) reachable_cells += b ? 1 : 0;

  OccupancyGrid online(gc);
  ObstacleIndex index;
  FrontierSet frontier(gc);
  detail::ClearanceField clearance(gc, cfg.bubble.d_safe);
  Rng rng(cfg.seed);
  const SensorSpec sensor = cfg.sensor();
  const double res3 = gc.resolution * gc.resolution * gc.resolution;

  Vec3 pos = cfg.start;
  double yaw = cfg.start_yaw;
  Vec3 vel = Vec3::Zero();
  double t = 0.0;
  double flight = 0.0;
  const double period = 1.0 / cfg.sensor_rate_hz;
  const int steps = std::max(1, static_cast<int>(std::round(period / cfg.dt)));

  Trajectory traj;
  bool have_traj = false;
  double traj_elapsed = 0.0;
  Vec3 traj_target = Vec3::Zero();
  bool collision_trigger = false;

  double next_sample = 0.0;
  double next_scheduled_plan = 0.0;
  int quiet_rounds = 0;
  int stalled_rounds = 0;
  std::vector<CellId> last_dormant;
  double frontier_time_accum = 0.0;
  double prev_speed = 0.0;

  const auto finish = [&](const char* status, double at) {
    result.completion = status;
    result.completion_time = at;
  };

  const auto coverage_now = [&]() {
    std::int64_t known_reachable = 0;
    for (CellId id = 0; id < gc.cell_count(); ++id)
      if (reachable[static_cast<std::size_t>(id)] &&
          online.state(gc.unlinear(id)) != VoxelState::Unknown)
        ++known_reachable;
    return reachable_cells ? static_cast<double>(known_reachable) / reachable_cells : 1.0;
  };

  bool done = false;
  while (!done) {
    if (t > cfg.time_limit - 1e-9) {
      finish("timeout", cfg.time_limit);
      break;
    }

    // Sense and map.
    const auto rays = simulate_scan(truth, pos, yaw, sensor, cfg.rays_az, cfg.rays_el,
                                    cfg.range_noise_sigma, rng);
    std::vector<Idx3> changed;
    std::vector<Vec3> new_obstacles;
    for (const ScanRay& ray : rays) {
      for (const Idx3& c : online.integrate_ray(pos, ray.endpoint, ray.hit)) {
        changed.push_back(c);
        if (online.state(c) == VoxelState::Occupied) {
          new_obstacles.push_back(gc.center(c));
          clearance.add_occupied(c);
        }
      }
    }
    index.insert_batch(new_obstacles);
    {
      Stopwatch sw;
      frontier.update(online, changed);
      frontier_time_accum += sw.seconds();
    }

    if (t + 1e-9 >= next_sample) {
      const double explored = online.known_count() * res3;
      result.samples.push_back({t, explored, flight});
      next_sample += 1.0;
      if (opts.validate) {
        std::int64_t scan_known = 0;
        for (CellId id = 0; id < gc.cell_count(); ++id)
          if (online.state(gc.unlinear(id)) != VoxelState::Unknown) ++scan_known;
        if (scan_known != online.known_count())
          throw std::logic_error("known_count cache out of sync");
      }
    }

    // Replan decision.
    const bool leg_done = !have_traj || traj.finished(traj_elapsed);
    collision_trigger = false;
    if (have_traj && !leg_done) {
      const auto samples = traj.samples();
      const auto start_i = static_cast<std::size_t>(
          std::clamp<double>(std::ceil(traj_elapsed / traj.dt() - 1e-9), 0.0,
                             static_cast<double>(samples.size())));
      for (std::size_t i = start_i; i < samples.size() && !collision_trigger; ++i) {
        const Vec3& p = samples[i].position;
        if (online.state_at(p) == VoxelState::Occupied)
          collision_trigger = true;
        else if (clearance.maybe_low_clearance(p) &&
                 !online.has_clearance(p, cfg.bubble.d_safe))
          collision_trigger = true;
      }
    }
    const bool trigger = leg_done || collision_trigger || t + 1e-9 >= next_scheduled_plan;

    if (trigger) {
      next_scheduled_plan = t + cfg.t_replan;
      PlanningRound round;
      round.t = t;
      round.frontier_time = frontier_time_accum;
      frontier_time_accum = 0.0;

      Stopwatch sw;
      ViewpointGenResult gen =
          (cfg.frontend == "baseline")
              ? baseline_generate_viewpoints(frontier, online, index, sensor, cfg.baseline)
              : generate_viewpoints(frontier, online, index, sensor, cfg.bubble);
      round.viewpoint_time = sw.seconds();
      round.n_viewpoints = static_cast<int>(gen.viewpoints.size());
      result.raycast_count += gen.raycasts;

      if (gen.viewpoints.empty()) {
        ++quiet_rounds;
        last_dormant = gen.dormant_cells;
        have_traj = false;
        if (quiet_rounds >= cfg.k_quiet) {
          // Completed only when no dormant frontier is still reachable.
          bool dormant_reachable = false;
          if (!last_dormant.empty()) {
            const auto online_reach = flood_fill_free(online, pos);
            for (CellId id : last_dormant)
              if (frontier.contains(id) && online_reach[static_cast<std::size_t>(id)]) {
                dormant_reachable = true;
                break;
              }
          }
          if (!dormant_reachable) {
            result.rounds.push_back(round);
            finish("completed", t);
            break;
          }
        }
      } else {
        quiet_rounds = 0;
        const PlanningGrid pg = PlanningGrid::build(online, cfg.astar_coarsen);
        const VehicleConfig xi{pos, yaw, vel};
        const auto plan = plan_global_tour(gen.viewpoints, xi, pg, cfg.gain_params);
        if (plan) {
          round.costmat_time = plan->cost_matrix_time;
          round.tsp_time = plan->tsp_time;
        }
        if (!plan || plan->legs.empty() || plan->legs[0].size() < 1) {
          ++stalled_rounds;
          have_traj = false;
          if (stalled_rounds >= cfg.k_quiet) {
            result.rounds.push_back(round);
            finish("stalled", t);
            break;
          }
        } else {
          stalled_rounds = 0;
          const Viewpoint& first_vp = plan->queue[static_cast<std::size_t>(plan->order[0] - 1)];
          const bool same_target =
              have_traj && !collision_trigger && (first_vp.position - traj_target).norm() < 1e-9;
          if (!same_target) {
            traj = time_parameterize(plan->legs[0], cfg.limits, cfg.dt, cfg.corner_speed,
                                     yaw, first_vp.yaw, sensor.kind == FovKind::Cone);
            traj_elapsed = 0.0;
            have_traj = true;
            traj_target = first_vp.position;
            prev_speed = 0.0;
          }
        }
      }
      result.rounds.push_back(round);
    }

    // Advance along the trajectory for one sensor period.
    for (int k = 0; k < steps; ++k) {
      if (!have_traj) break;
      traj_elapsed += cfg.dt;
      const MotionState ms = traj.sample(traj_elapsed);
      flight += (ms.position - pos).norm();
      const double speed = ms.velocity.norm();
      result.max_speed = std::max(result.max_speed, speed);
      result.max_tangential_accel =
          std::max(result.max_tangential_accel, std::abs(speed - prev_speed) / cfg.dt);
      prev_speed = speed;
      pos = ms.position;
      vel = ms.velocity;
      yaw = ms.yaw;
      if (truth.state_at(pos) == VoxelState::Occupied) result.safety_violation = true;
    }
    result.executed_path.push_back(pos);
    t += period;
  }

  result.flight_distance = flight;
  result.final_known = online.known_count();
  result.explored_volume = online.known_count() * res3;
  result.coverage = coverage_now();
  if (result.completion != "completed") result.completion_time = cfg.time_limit;
  result.final_map_occupied = occupied_centers(online);
  return result;
}

/// Episode artifacts. metrics.csv, summary.json, trajectory.txt and
/// map_final.txt are byte-stable for identical configs; timing.csv holds
/// wall-clock component times and is the one non-reproducible file.
inline void write_episode_artifacts(const std::string& dir, const EpisodeResult& r) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  char buf[256];
  {
    std::ofstream out(fs::path(dir) / "metrics.csv");
    out << "t,explored_volume,flight_distance\n";
    for (const MetricSample& s : r.samples) {
      std::snprintf(buf, sizeof(buf), "%.3f,%.6f,%.6f\n", s.t, s.explored_volume,
                    s.flight_distance);
      out << buf;
    }
  }
  {
    std::ofstream out(fs::path(dir) / "timing.csv");
    out << "t,frontier_s,viewpoint_s,costmat_s,tsp_s,n_viewpoints\n";
    for (const PlanningRound& p : r.rounds) {
      std::snprintf(buf, sizeof(buf), "%.3f,%.6f,%.6f,%.6f,%.6f,%d\n", p.t, p.frontier_time,
                    p.viewpoint_time, p.costmat_time, p.tsp_time, p.n_viewpoints);
      out << buf;
    }
  }
  {
    nlohmann::json j;
    j["scenario"] = r.scenario;
    j["frontend"] = r.frontend;
    j["seed"] = r.seed;
    j["completion"] = r.completion;
    j["completion_time"] = r.completion_time;
    j["flight_distance"] = r.flight_distance;
    j["coverage"] = r.coverage;
    j["raycast_count"] = r.raycast_count;
    j["final_known_cells"] = r.final_known;
    j["explored_volume"] = r.explored_volume;
    j["max_speed"] = r.max_speed;
    j["max_tangential_accel"] = r.max_tangential_accel;
    j["safety_violation"] = r.safety_violation;
    j["planning_rounds"] = r.rounds.size();
    std::ofstream out(fs::path(dir) / "summary.json");
    out << j.dump(2) << '\n';
  }
  save_points_ascii((fs::path(dir) / "trajectory.txt").string(), r.executed_path);
  save_points_ascii((fs::path(dir) / "map_final.txt").string(), r.final_map_occupied);
}

// Mean/max wall-clock component times per episode (reported, never gated).
struct TimingAggregate {
  double mean_frontier = 0, mean_viewpoint = 0, mean_costmat = 0, mean_tsp = 0;
  double max_total = 0;
};

inline TimingAggregate aggregate_timings(const EpisodeResult& r) {
  TimingAggregate a;
  if (r.rounds.empty()) return a;
  for (const PlanningRound& p : r.rounds) {
    a.mean_frontier += p.frontier_time;
    a.mean_viewpoint += p.viewpoint_time;
    a.mean_costmat += p.costmat_time;
    a.mean_tsp += p.tsp_time;
    a.max_total = std::max(a.max_total,
                           p.frontier_time + p.viewpoint_time + p.costmat_time + p.tsp_time);
  }
  const double n = static_cast<double>(r.rounds.size());
  a.mean_frontier /= n;
  a.mean_viewpoint /= n;
  a.mean_costmat /= n;
  a.mean_tsp /= n;
  return a;
}

}  // namespace bubblex
