#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "bubblex/common.hpp"
#include "bubblex/voxel_grid.hpp"

namespace bubblex {

struct MotionLimits {
  double v_max = 2.5;         // m/s
  double a_max = 2.5;         // m/s^2, tangential
  double yaw_rate_max = 1.5;  // rad/s
  double horizon = 15.0;      // receding-horizon truncation, m
};

struct MotionState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  double yaw = 0.0;
  double time = 0.0;
};

/// Time-parameterized polyline trajectory, sampled at a fixed dt. Immutable
/// once built.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::vector<MotionState> samples, double dt, double arc_length)
      : samples_(std::move(samples)), dt_(dt), arc_length_(arc_length) {}

  static Trajectory hold(const Vec3& position, double yaw, double dt) {
    MotionState s;
    s.position = position;
    s.yaw = yaw;
    return Trajectory({s}, dt, 0.0);
  }

  bool empty() const { return samples_.empty(); }
  double dt() const { return dt_; }
  double duration() const {
    return samples_.empty() ? 0.0 : samples_.back().time;
  }
  double arc_length() const { return arc_length_; }
  bool finished(double t) const { return t >= duration() - 1e-9; }
  std::span<const MotionState> samples() const { return samples_; }

  MotionState sample(double t) const {
    if (samples_.empty()) return MotionState{};
    const auto idx = static_cast<std::size_t>(
        std::clamp<double>(std::round(t / dt_), 0.0,
                           static_cast<double>(samples_.size() - 1)));
    return samples_[idx];
  }

 private:
  std::vector<MotionState> samples_;
  double dt_ = 0.02;
  double arc_length_ = 0.0;
};

namespace detail {

struct SegmentProfile {
  Vec3 from, dir;  // unit
  double length;
  double v_in, v_peak, v_out;
  double t_acc, t_cruise, t_dec;  // phase durations
  double t_start;                 // cumulative start time

  double total_time() const { return t_acc + t_cruise + t_dec; }

  // Arc position and speed at local time tau in [0, total].
  void eval(double tau, double a, double* s, double* v) const {
    tau = std::clamp(tau, 0.0, total_time());
    if (tau <= t_acc) {
      *v = v_in + a * tau;
      *s = v_in * tau + 0.5 * a * tau * tau;
      return;
    }
    const double s_acc = v_in * t_acc + 0.5 * a * t_acc * t_acc;
    if (tau <= t_acc + t_cruise) {
      const double tc = tau - t_acc;
      *v = v_peak;
      *s = s_acc + v_peak * tc;
      return;
    }
    const double td = tau - t_acc - t_cruise;
    *v = v_peak - a * td;
    *s = s_acc + v_peak * t_cruise + v_peak * td - 0.5 * a * td * td;
  }
};

}  // namespace detail

/// Trapezoidal time parameterization of a waypoint polyline, truncated at
/// the planning horizon. Speed is capped at v_max, tangential acceleration
/// at a_max, and heading changes above 45 degrees force a slowdown to
/// corner_speed. Yaw slews from start_yaw toward target_yaw within
/// yaw_rate_max; with settle_yaw the trajectory is extended in place until
/// the yaw arrives. Each leg starts and ends at rest.
inline Trajectory time_parameterize(std::span<const Vec3> waypoints,
                                    const MotionLimits& lim, double dt,
                                    double corner_speed, double start_yaw,
                                    double target_yaw, bool settle_yaw = false) {
  std::vector<Vec3> pts;
  for (const Vec3& p : waypoints)
    if (pts.empty() || (p - pts.back()).norm() > 1e-9) pts.push_back(p);

  const double yaw_delta = wrap_angle(target_yaw - start_yaw);
  const auto yaw_at = [&](double t) {
    const double step = lim.yaw_rate_max * t;
    if (step >= std::abs(yaw_delta)) return wrap_angle(start_yaw + yaw_delta);
    return wrap_angle(start_yaw + (yaw_delta >= 0 ? step : -step));
  };

  if (pts.size() <= 1) {
    const Vec3 hold_pos = pts.empty() ? Vec3::Zero() : pts[0];
    if (!settle_yaw || std::abs(yaw_delta) < 1e-12)
      return Trajectory::hold(hold_pos, start_yaw, dt);
    std::vector<MotionState> samples;
    const double T = std::abs(yaw_delta) / lim.yaw_rate_max;
    const int n = static_cast<int>(std::ceil(T / dt - 1e-9));
    for (int i = 0; i <= n; ++i) {
      MotionState s;
      s.position = hold_pos;
      s.time = std::min(i * dt, T);
      s.yaw = yaw_at(s.time);
      samples.push_back(s);
    }
    samples.back().time = T;
    samples.back().yaw = yaw_at(T);
    return Trajectory(std::move(samples), dt, 0.0);
  }

  // Horizon truncation.
  {
    double acc = 0.0;
    std::vector<Vec3> cut;
    cut.push_back(pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double L = (pts[i] - pts[i - 1]).norm();
      if (acc + L >= lim.horizon) {
        const double keep = lim.horizon - acc;
        if (keep > 1e-9)
          cut.push_back(pts[i - 1] + (pts[i] - pts[i - 1]) * (keep / L));
        break;
      }
      acc += L;
      cut.push_back(pts[i]);
    }
    pts = std::move(cut);
    if (pts.size() <= 1) return Trajectory::hold(pts.empty() ? Vec3::Zero() : pts[0], start_yaw, dt);
  }

  const std::size_t nseg = pts.size() - 1;
  std::vector<double> seg_len(nseg);
  std::vector<Vec3> seg_dir(nseg);
  for (std::size_t i = 0; i < nseg; ++i) {
    seg_len[i] = (pts[i + 1] - pts[i]).norm();
    seg_dir[i] = (pts[i + 1] - pts[i]) / seg_len[i];
  }

  // Vertex speed caps: rest at both ends, corner_speed at sharp turns.
  std::vector<double> vcap(pts.size(), lim.v_max);
  vcap.front() = 0.0;
  vcap.back() = 0.0;
  const double cos45 = std::cos(deg2rad(45.0));
  for (std::size_t i = 1; i + 1 < pts.size(); ++i)
    if (seg_dir[i - 1].dot(seg_dir[i]) < cos45)
      vcap[i] = std::min(lim.v_max, corner_speed);

  // Reachability passes.
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    vcap[i + 1] = std::min(vcap[i + 1],
                           std::sqrt(vcap[i] * vcap[i] + 2.0 * lim.a_max * seg_len[i]));
  for (std::size_t i = pts.size() - 1; i >= 1; --i)
    vcap[i - 1] = std::min(vcap[i - 1],
                           std::sqrt(vcap[i] * vcap[i] + 2.0 * lim.a_max * seg_len[i - 1]));

  std::vector<detail::SegmentProfile> profile(nseg);
  double t_cursor = 0.0;
  double arc = 0.0;
  for (std::size_t i = 0; i < nseg; ++i) {
    detail::SegmentProfile& sp = profile[i];
    sp.from = pts[i];
    sp.dir = seg_dir[i];
    sp.length = seg_len[i];
    sp.v_in = vcap[i];
    sp.v_out = vcap[i + 1];
    const double vp2 = (2.0 * lim.a_max * sp.length + sp.v_in * sp.v_in +
                        sp.v_out * sp.v_out) * 0.5;
    sp.v_peak = std::min(lim.v_max, std::sqrt(std::max(vp2, 0.0)));
    sp.t_acc = (sp.v_peak - sp.v_in) / lim.a_max;
    sp.t_dec = (sp.v_peak - sp.v_out) / lim.a_max;
    const double d_acc = (sp.v_peak * sp.v_peak - sp.v_in * sp.v_in) / (2.0 * lim.a_max);
    const double d_dec = (sp.v_peak * sp.v_peak - sp.v_out * sp.v_out) / (2.0 * lim.a_max);
    const double d_cruise = std::max(0.0, sp.length - d_acc - d_dec);
    sp.t_cruise = (sp.v_peak > 1e-12) ? d_cruise / sp.v_peak : 0.0;
    sp.t_start = t_cursor;
    t_cursor += sp.total_time();
    arc += sp.length;
  }
  double total = t_cursor;
  if (settle_yaw)
    total = std::max(total, std::abs(yaw_delta) / lim.yaw_rate_max);

  std::vector<MotionState> samples;
  const int n = static_cast<int>(std::ceil(total / dt - 1e-9));
  std::size_t seg = 0;
  for (int i = 0; i <= n; ++i) {
    const double t = std::min(i * dt, total);
    while (seg + 1 < nseg && t >= profile[seg].t_start + profile[seg].total_time())
      ++seg;
    const detail::SegmentProfile& sp = profile[seg];
    double s = sp.length, v = 0.0;
    if (t <= sp.t_start + sp.total_time())
      sp.eval(t - sp.t_start, lim.a_max, &s, &v);
    s = std::min(s, sp.length);
    MotionState ms;
    ms.position = sp.from + sp.dir * s;
    ms.velocity = sp.dir * v;
    ms.yaw = yaw_at(t);
    ms.time = t;
    samples.push_back(ms);
  }
  samples.back().time = total;
  return Trajectory(std::move(samples), dt, arc);
}

/// Replan trigger: a remaining sample sits in an Occupied voxel or within
/// d_safe of an occupied voxel center, or a new tour arrived.
inline bool check_replan(const Trajectory& traj, double from_time,
                         const OccupancyGrid& grid, double d_safe,
                         bool new_tour_available) {
  if (new_tour_available) return true;
  if (traj.empty()) return false;
  const auto samples = traj.samples();
  const auto start = static_cast<std::size_t>(
      std::clamp<double>(std::ceil(from_time / traj.dt() - 1e-9), 0.0,
                         static_cast<double>(samples.size())));
  for (std::size_t i = start; i < samples.size(); ++i) {
    const Vec3& p = samples[i].position;
    if (grid.state_at(p) == VoxelState::Occupied) return true;
    if (!grid.has_clearance(p, d_safe)) return true;
  }
  return false;
}

}  // namespace bubblex
