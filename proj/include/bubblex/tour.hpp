#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "bubblex/astar.hpp"
#include "bubblex/atsp.hpp"
#include "bubblex/common.hpp"
#include "bubblex/sensor.hpp"

namespace bubblex {

struct VehicleConfig {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;
  Vec3 velocity = Vec3::Zero();
};

struct GainParams {
  double lambda = 0.12;     // travel-cost discount, 1/m
  int n_q = 15;             // viewpoint queue capacity
  int n_exact = 13;         // exact ATSP window
  double c_unreach = 1e4;   // penalty cost for unreachable pairs, meters
};

// g(v) = r(s) * exp(-lambda * ||v - xi||); large spheres promise more
// visible volume, distance discounts them.
inline double gain(const Viewpoint& v, const VehicleConfig& xi, const GainParams& p) {
  return v.source_bubble_radius *
         std::exp(-p.lambda * (v.position - xi.position).norm());
}

/// The n_q highest-gain viewpoints, descending gain; ties broken toward the
/// closer viewpoint, then lexicographically smaller position.
inline std::vector<Viewpoint> select_queue(std::span<const Viewpoint> vps,
                                           const VehicleConfig& xi, const GainParams& p) {
  struct Ranked {
    double g, d;
    const Viewpoint* vp;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(vps.size());
  for (const Viewpoint& v : vps)
    ranked.push_back({gain(v, xi, p), (v.position - xi.position).norm(), &v});
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.g != b.g) return a.g > b.g;
    if (a.d != b.d) return a.d < b.d;
    return lex_less(a.vp->position, b.vp->position);
  });
  std::vector<Viewpoint> out;
  const std::size_t take = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(p.n_q));
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(*ranked[i].vp);
  return out;
}

/// (n+1)x(n+1) connection-cost matrix: row/col 0 is the vehicle, entries are
/// shortest collision-free path lengths, column 0 is zeroed (open tour) and
/// unreachable pairs get c_unreach. Returns nullopt when every viewpoint is
/// unreachable from the vehicle.
inline std::optional<atsp::Matrix> build_cost_matrix(std::span<const Viewpoint> queue,
                                                     const VehicleConfig& xi,
                                                     const PlanningGrid& pg,
                                                     double c_unreach = 1e4) {
  const int n = static_cast<int>(queue.size());
  if (n == 0) return std::nullopt;
  atsp::Matrix m = atsp::Matrix::Zero(n + 1, n + 1);
  std::vector<Vec3> positions;
  positions.reserve(queue.size());
  for (const Viewpoint& v : queue) positions.push_back(v.position);

  const std::vector<double> from_depot = shortest_lengths_from(pg, xi.position, positions);
  bool any_reachable = false;
  for (int j = 0; j < n; ++j) {
    const bool ok = std::isfinite(from_depot[j]);
    any_reachable |= ok;
    m(0, j + 1) = ok ? from_depot[j] : c_unreach;
  }
  if (!any_reachable) return std::nullopt;

  for (int i = 0; i < n; ++i) {
    std::vector<Vec3> rest(positions.begin() + i + 1, positions.end());
    if (rest.empty()) break;
    const std::vector<double> d = shortest_lengths_from(pg, positions[i], rest);
    for (int j = i + 1; j < n; ++j) {
      const double len = std::isfinite(d[j - i - 1]) ? d[j - i - 1] : c_unreach;
      m(i + 1, j + 1) = len;  // grid paths are symmetric in length
      m(j + 1, i + 1) = len;
    }
  }
  return m;
}

struct TourPlan {
  std::vector<Viewpoint> queue;
  std::vector<int> order;                // queue indices + 1, visit sequence
  std::vector<std::vector<Vec3>> legs;   // A* waypoints per tour edge
  double total_cost = 0.0;
  double cost_matrix_time = 0.0;         // wall seconds, reported not gated
  double tsp_time = 0.0;
};

/// Back-end composition: gain-rank into the queue, build the A* cost
/// matrix, solve the open-loop ATSP and attach connecting paths.
inline std::optional<TourPlan> plan_global_tour(std::span<const Viewpoint> vps,
                                                const VehicleConfig& xi,
                                                const PlanningGrid& pg,
                                                const GainParams& params) {
  TourPlan plan;
  plan.queue = select_queue(vps, xi, params);
  if (plan.queue.empty()) return std::nullopt;

  Stopwatch sw;
  const auto matrix = build_cost_matrix(plan.queue, xi, pg, params.c_unreach);
  plan.cost_matrix_time = sw.seconds();
  if (!matrix) return std::nullopt;

  sw.reset();
  const atsp::Result tour = atsp::solve(*matrix, params.n_exact);
  plan.tsp_time = sw.seconds();
  plan.order = tour.order;
  plan.total_cost = tour.cost;

  Vec3 prev = xi.position;
  for (int node : plan.order) {
    const Vec3& target = plan.queue[static_cast<std::size_t>(node - 1)].position;
    if (auto path = astar_path(pg, prev, target))
      plan.legs.push_back(std::move(path->waypoints));
    else
      plan.legs.push_back({});  // unreachable leg (penalty edge)
    prev = target;
  }
  return plan;
}

}  // namespace bubblex
