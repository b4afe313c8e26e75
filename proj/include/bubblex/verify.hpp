#pragma once

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bubblex/astar.hpp"
#include "bubblex/atsp.hpp"
#include "bubblex/bubble.hpp"
#include "bubblex/obstacle_index.hpp"
#include "bubblex/voxel_grid.hpp"

// Brute-force oracle suites behind the `verify` command. Every oracle here
// is an independent re-derivation (sorted crossing enumeration vs DDA
// stepping, std::set Dijkstra vs heap A*, top-down memo DP vs bottom-up DP,
// linear scan vs kd-tree), run with fixed seeds.

namespace bubblex::verify {

struct Report {
  bool ok = true;
  std::string text;
};

namespace detail {

inline void note(Report& r, const std::string& line) {
  r.text += line;
  r.text += '\n';
}

// --- exact independent segment-voxel enumeration -------------------------
// Dense sampling at 0.1 * resolution, refined with one sample per
// boundary-crossing interval (the midpoint), computed analytically from the
// sorted crossing parameters. Fixed-step sampling alone provably misses
// voxels whose chord is shorter than the step (clipped corners), so the
// refinement is what makes the enumeration exact.
inline std::vector<Idx3> segment_cells_oracle(const GridConfig& cfg, const Vec3& a,
                                              const Vec3& b) {
  const Vec3 d = b - a;
  const double len = d.norm();
  std::vector<double> ts = {0.0, 1.0};
  for (int k = 0; k < 3; ++k) {
    if (d[k] == 0.0) continue;
    const double lo = std::min(a[k], b[k]);
    const double hi = std::max(a[k], b[k]);
    const int i0 = static_cast<int>(std::ceil((lo - cfg.origin[k]) / cfg.resolution));
    const int i1 = static_cast<int>(std::floor((hi - cfg.origin[k]) / cfg.resolution));
    for (int i = i0; i <= i1; ++i) {
      const double t = (cfg.origin[k] + i * cfg.resolution - a[k]) / d[k];
      if (t > 0.0 && t < 1.0) ts.push_back(t);
    }
  }
  if (len > 0.0) {
    const double h = 0.1 * cfg.resolution / len;
    for (double t = h; t < 1.0; t += h) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  std::vector<Idx3> cells;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (ts[i + 1] - ts[i] < 1e-15) continue;
    const double tm = 0.5 * (ts[i] + ts[i + 1]);
    const Idx3 c = cfg.cell_at(a + tm * d);
    if (cells.empty() || c != cells.back()) cells.push_back(c);
  }
  if (cells.empty()) cells.push_back(cfg.cell_at(a));
  return cells;
}

// Plain fixed-step sampler (no refinement); used for the one-sided check.
inline std::set<CellId> fixed_step_cells(const GridConfig& cfg, const Vec3& a, const Vec3& b) {
  std::set<CellId> out;
  const Vec3 d = b - a;
  const double len = d.norm();
  const double h = 0.1 * cfg.resolution;
  const int n = len > 0.0 ? static_cast<int>(std::ceil(len / h)) : 0;
  for (int i = 0; i <= n; ++i) {
    const double t = std::min(1.0, len > 0.0 ? i * h / len : 0.0);
    out.insert(cfg.linear(cfg.cell_at(a + t * d)));
  }
  return out;
}

inline bool occluded_oracle(const OccupancyGrid& grid, const Vec3& a, const Vec3& b) {
  const GridConfig& cfg = grid.config();
  const Idx3 skip = cfg.cell_at(b);
  for (const Idx3& c : segment_cells_oracle(cfg, a, b))
    if (c != skip && grid.state(c) == VoxelState::Occupied) return true;
  return false;
}

inline void integrate_oracle(OccupancyGrid& grid, const Vec3& a, const Vec3& b, bool hit) {
  const auto cells = segment_cells_oracle(grid.config(), a, b);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const bool last = (i + 1 == cells.size());
    grid.set_state(cells[i], (last && hit) ? VoxelState::Occupied : VoxelState::Free);
  }
}

inline OccupancyGrid random_grid(Rng& rng, int n, double res, double occupied_frac) {
  GridConfig cfg;
  cfg.resolution = res;
  cfg.dims = Idx3(n, n, n);
  OccupancyGrid g(cfg);
  for (CellId id = 0; id < cfg.cell_count(); ++id) {
    const double u = rng.uniform();
    if (u < occupied_frac)
      g.set_state(cfg.unlinear(id), VoxelState::Occupied);
    else if (u < 0.85)
      g.set_state(cfg.unlinear(id), VoxelState::Free);
  }
  return g;
}

// std::set-based Dijkstra with flat arrays; same path metric as astar_path.
inline std::optional<double> dijkstra_oracle(const OccupancyGrid& grid, const Vec3& a,
                                             const Vec3& b) {
  const GridConfig& cfg = grid.config();
  if (!cfg.in_bounds_point(a) || !cfg.in_bounds_point(b)) return std::nullopt;
  const CellId ida = cfg.linear(cfg.cell_at(a));
  const CellId idb = cfg.linear(cfg.cell_at(b));
  if (ida == idb) return (b - a).norm();
  const auto passable = [&](const Idx3& c) {
    const CellId id = cfg.linear(c);
    return id == ida || id == idb || grid.state(c) == VoxelState::Free;
  };
  const auto pos_of = [&](CellId id) -> Vec3 {
    if (id == ida) return a;
    if (id == idb) return b;
    return cfg.center(cfg.unlinear(id));
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(cfg.cell_count()), inf);
  std::set<std::pair<double, CellId>> open;
  dist[static_cast<std::size_t>(ida)] = 0.0;
  open.insert({0.0, ida});
  while (!open.empty()) {
    const auto [g, id] = *open.begin();
    open.erase(open.begin());
    if (id == idb) return g;
    const Idx3 c = cfg.unlinear(id);
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (!dx && !dy && !dz) continue;
          const Idx3 nb = c + Idx3(dx, dy, dz);
          if (!cfg.in_bounds(nb) || !passable(nb)) continue;
          const CellId nid = cfg.linear(nb);
          const double ng = g + (pos_of(nid) - pos_of(id)).norm();
          double& cur = dist[static_cast<std::size_t>(nid)];
          if (ng < cur) {
            open.erase({cur, nid});
            cur = ng;
            open.insert({ng, nid});
          }
        }
  }
  return std::nullopt;
}

// Top-down memoized subset DP; oracle counterpart to atsp::solve_exact.
class AtspDpOracle {
 public:
  explicit AtspDpOracle(const atsp::Matrix& m)
      : m_(m), n_(static_cast<int>(m.rows()) - 1),
        memo_((std::size_t{1} << n_) * n_, -1.0) {}

  double optimum() {
    if (n_ <= 0) return 0.0;
    const std::size_t full = (std::size_t{1} << n_) - 1;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_; ++j) best = std::min(best, f(full, j));
    return best;
  }

 private:
  double f(std::size_t mask, int j) {
    double& slot = memo_[mask * n_ + j];
    if (slot >= 0.0) return slot;
    const std::size_t rest = mask & ~(std::size_t{1} << j);
    double best;
    if (rest == 0) {
      best = m_(0, j + 1);
    } else {
      best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n_; ++i)
        if (rest & (std::size_t{1} << i))
          best = std::min(best, f(rest, i) + m_(i + 1, j + 1));
    }
    slot = best;
    return best;
  }

  const atsp::Matrix& m_;
  int n_;
  std::vector<double> memo_;
};

inline atsp::Matrix random_cost_matrix(Rng& rng, int n) {
  atsp::Matrix m = atsp::Matrix::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) m(i, j) = rng.uniform(1.0, 100.0);
  return m;  // column 0 stays zero: open-tour transform
}

}  // namespace detail

/// kd-tree nearest neighbor vs linear scan, exact (including tie-breaks),
/// after shuffled batched insertion.
inline Report verify_nn(int n_points = 1000, int n_queries = 1000, std::uint64_t seed = 101) {
  Report rep;
  Rng rng(seed);
  std::vector<Vec3> pts;
  for (int i = 0; i < n_points; ++i)
    pts.push_back(Vec3(rng.uniform(0, 20), rng.uniform(0, 20), rng.uniform(0, 8)));
  // A few duplicates and grid-aligned points to exercise ties.
  for (int i = 0; i < n_points / 20; ++i) pts.push_back(pts[rng.uniform_int(pts.size())]);
  for (int i = 0; i < n_points / 20; ++i)
    pts.push_back(Vec3(std::floor(rng.uniform(0, 20)), std::floor(rng.uniform(0, 20)),
                       std::floor(rng.uniform(0, 8))));

  ObstacleIndex index;
  std::size_t at = 0;
  while (at < pts.size()) {
    const std::size_t batch = 1 + rng.uniform_int(64);
    const std::size_t end = std::min(pts.size(), at + batch);
    index.insert_batch(std::span<const Vec3>(pts.data() + at, end - at));
    at = end;
  }

  const auto linear_scan = [&](const Vec3& q) {
    double best_d2 = std::numeric_limits<double>::infinity();
    Vec3 best = Vec3::Zero();
    for (const Vec3& p : pts) {
      const double d2 = (p - q).squaredNorm();
      if (d2 < best_d2 || (d2 == best_d2 && lex_less(p, best))) {
        best_d2 = d2;
        best = p;
      }
    }
    return NearestResult{best, std::sqrt(best_d2)};
  };

  int mismatches = 0;
  for (int i = 0; i < n_queries; ++i) {
    Vec3 q(rng.uniform(-2, 22), rng.uniform(-2, 22), rng.uniform(-2, 10));
    if (i % 7 == 0) q = pts[rng.uniform_int(pts.size())];  // exact-hit queries
    const auto got = index.nearest(q);
    const auto want = linear_scan(q);
    if (!got || got->point != want.point || got->dist != want.dist) {
      if (++mismatches <= 3) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "  mismatch at query (%.6f, %.6f, %.6f)", q.x(),
                      q.y(), q.z());
        detail::note(rep, buf);
      }
    }
  }
  rep.ok = (mismatches == 0);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "nn: %d queries over %zu points, %d mismatches",
                n_queries, pts.size(), mismatches);
  detail::note(rep, buf);
  return rep;
}

/// Voxel walk vs independent exact enumeration (boolean occlusion and the
/// visited set), plus the one-sided fixed-step containment check and full
/// integrate-ray grid equivalence.
inline Report verify_rays(int n_segments = 10000, std::uint64_t seed = 202) {
  Report rep;
  Rng rng(seed);
  int bool_mismatch = 0, set_mismatch = 0, subset_fail = 0;
  const int per_grid = 500;
  const int n_grids = (n_segments + per_grid - 1) / per_grid;
  for (int gi = 0; gi < n_grids; ++gi) {
    const OccupancyGrid grid = detail::random_grid(rng, 32, 0.2, 0.10);
    const GridConfig& cfg = grid.config();
    const Vec3 ext = cfg.max_corner() - cfg.origin;
    for (int si = 0; si < per_grid; ++si) {
      const Vec3 a = cfg.origin + Vec3(rng.uniform() * ext.x(), rng.uniform() * ext.y(),
                                       rng.uniform() * ext.z());
      const Vec3 b = cfg.origin + Vec3(rng.uniform() * ext.x(), rng.uniform() * ext.y(),
                                       rng.uniform() * ext.z());
      if (grid.raycast_occluded(a, b) != detail::occluded_oracle(grid, a, b)) ++bool_mismatch;

      std::set<CellId> walk;
      bubblex::detail::walk_segment(cfg, a, b, [&](const Idx3& c) {
        walk.insert(cfg.linear(c));
        return true;
      });
      std::set<CellId> oracle;
      for (const Idx3& c : detail::segment_cells_oracle(cfg, a, b))
        oracle.insert(cfg.linear(c));
      if (walk != oracle) ++set_mismatch;
      for (CellId id : detail::fixed_step_cells(cfg, a, b))
        if (!walk.count(id)) {
          ++subset_fail;
          break;
        }
    }
  }

  // Integrate-ray equivalence on fresh grids.
  int grid_mismatch = 0;
  for (int round = 0; round < 3; ++round) {
    GridConfig cfg;
    cfg.resolution = 0.2;
    cfg.dims = Idx3(32, 32, 32);
    OccupancyGrid impl(cfg), twin(cfg);
    const Vec3 ext = cfg.max_corner() - cfg.origin;
    for (int i = 0; i < 100; ++i) {
      const Vec3 a = cfg.origin + Vec3(rng.uniform(0.01, 0.99) * ext.x(),
                                       rng.uniform(0.01, 0.99) * ext.y(),
                                       rng.uniform(0.01, 0.99) * ext.z());
      const Vec3 b = cfg.origin + Vec3(rng.uniform(0.01, 0.99) * ext.x(),
                                       rng.uniform(0.01, 0.99) * ext.y(),
                                       rng.uniform(0.01, 0.99) * ext.z());
      const bool hit = rng.uniform() < 0.5;
      impl.integrate_ray(a, b, hit);
      detail::integrate_oracle(twin, a, b, hit);
    }
    bool same = impl.known_count() == twin.known_count();
    for (CellId id = 0; same && id < cfg.cell_count(); ++id)
      same = impl.state(cfg.unlinear(id)) == twin.state(cfg.unlinear(id));
    if (!same) ++grid_mismatch;
  }

  rep.ok = !bool_mismatch && !set_mismatch && !subset_fail && !grid_mismatch;
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "rays: %d segments; occlusion mismatches %d, visited-set mismatches %d, "
                "fixed-step containment failures %d, integrate-grid mismatches %d",
                n_segments, bool_mismatch, set_mismatch, subset_fail, grid_mismatch);
  detail::note(rep, buf);
  return rep;
}

/// A* vs std::set Dijkstra on random partially known maps; exact length
/// equality (1e-9) and reachability agreement.
inline Report verify_astar(int n_maps = 50, int n_pairs = 50, std::uint64_t seed = 303) {
  Report rep;
  Rng rng(seed);
  int mismatches = 0, compared = 0;
  double worst = 0.0;
  for (int mi = 0; mi < n_maps; ++mi) {
    const OccupancyGrid grid = detail::random_grid(rng, 16, 0.25, 0.20);
    const GridConfig& cfg = grid.config();
    std::vector<Vec3> free_centers;
    for (CellId id = 0; id < cfg.cell_count(); ++id) {
      const Idx3 c = cfg.unlinear(id);
      if (grid.state(c) == VoxelState::Free) free_centers.push_back(cfg.center(c));
    }
    if (free_centers.size() < 2) continue;
    const PlanningGrid pg = PlanningGrid::build(grid, 1);
    for (int pi = 0; pi < n_pairs; ++pi) {
      const Vec3 a = free_centers[rng.uniform_int(free_centers.size())];
      const Vec3 b = free_centers[rng.uniform_int(free_centers.size())];
      const auto got = astar_path(pg, a, b);
      const auto want = detail::dijkstra_oracle(grid, a, b);
      ++compared;
      if (got.has_value() != want.has_value()) {
        ++mismatches;
        continue;
      }
      if (got) {
        const double diff = std::abs(got->length - *want);
        worst = std::max(worst, diff);
        if (diff > 1e-9) ++mismatches;
      }
    }
  }
  rep.ok = (mismatches == 0);
  char buf[200];
  std::snprintf(buf, sizeof(buf), "astar: %d pairs, %d mismatches, worst length diff %.3g",
                compared, mismatches, worst);
  detail::note(rep, buf);
  return rep;
}

/// ATSP production solvers vs an independent top-down DP (and brute-force
/// permutations at n=8): exact window equality, heuristic gap <= 5%.
inline Report verify_atsp(int n_matrices = 100, std::uint64_t seed = 404) {
  Report rep;
  Rng rng(seed);
  double max_gap = 0.0;
  int gap_fails = 0, exact_fails = 0, brute_fails = 0;

  for (int i = 0; i < n_matrices; ++i) {
    const atsp::Matrix m = detail::random_cost_matrix(rng, 10);
    detail::AtspDpOracle oracle(m);
    const double opt = oracle.optimum();
    const atsp::Result h = atsp::solve_heuristic(m);
    if (std::abs(atsp::path_cost(m, h.order) - h.cost) > 1e-9) ++gap_fails;
    const double gap = (h.cost - opt) / opt;
    max_gap = std::max(max_gap, gap);
    if (gap > 0.05 + 1e-12) ++gap_fails;
  }

  for (int n = 1; n <= 13; ++n) {
    for (int rep_i = 0; rep_i < 3; ++rep_i) {
      const atsp::Matrix m = detail::random_cost_matrix(rng, n);
      detail::AtspDpOracle oracle(m);
      const atsp::Result got = atsp::solve(m, 13);
      if (std::abs(got.cost - oracle.optimum()) > 1e-9 ||
          std::abs(atsp::path_cost(m, got.order) - got.cost) > 1e-9)
        ++exact_fails;
    }
  }

  for (int i = 0; i < 10; ++i) {
    const int n = 8;
    const atsp::Matrix m = detail::random_cost_matrix(rng, n);
    std::vector<int> perm(n);
    for (int j = 0; j < n; ++j) perm[j] = j + 1;
    double brute = std::numeric_limits<double>::infinity();
    do {
      brute = std::min(brute, atsp::path_cost(m, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    detail::AtspDpOracle oracle(m);
    if (std::abs(brute - oracle.optimum()) > 1e-9 ||
        std::abs(atsp::solve_exact(m).cost - brute) > 1e-9)
      ++brute_fails;
  }

  rep.ok = !gap_fails && !exact_fails && !brute_fails;
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "atsp: heuristic max gap %.4f%% over %d matrices (fails %d); exact-window "
                "fails %d; brute-force cross-checks failed %d",
                100.0 * max_gap, n_matrices, gap_fails, exact_fails, brute_fails);
  detail::note(rep, buf);
  return rep;
}

// --- randomized occlusion scenes ------------------------------------------

struct RandomScene {
  OccupancyGrid truth;
  OccupancyGrid online;
  ObstacleIndex index;
  FrontierSet frontier;
};

/// Cluttered random world partially observed by a few panoramic scans; the
/// state a planning round would see.
inline RandomScene make_random_scene(std::uint64_t seed) {
  Rng rng(seed);
  GridConfig cfg;
  cfg.resolution = 0.2;
  cfg.dims = Idx3(60, 60, 20);
  OccupancyGrid truth(cfg);
  truth.fill(VoxelState::Free);
  const Vec3 ext = cfg.max_corner();

  const int n_boxes = 3 + static_cast<int>(rng.uniform_int(4));
  for (int i = 0; i < n_boxes; ++i) {
    const Vec3 c(rng.uniform(1, ext.x() - 1), rng.uniform(1, ext.y() - 1),
                 rng.uniform(0.5, ext.z() - 0.5));
    const Vec3 half(rng.uniform(0.3, 1.2), rng.uniform(0.3, 1.2), rng.uniform(0.3, 1.0));
    const Idx3 lo = cfg.cell_at((c - half).cwiseMax(Vec3::Zero()) + Vec3::Constant(1e-9));
    const Idx3 hi = cfg.cell_at((c + half).cwiseMin(ext) - Vec3::Constant(1e-9));
    for (int z = std::max(0, lo.z()); z <= std::min(cfg.dims.z() - 1, hi.z()); ++z)
      for (int y = std::max(0, lo.y()); y <= std::min(cfg.dims.y() - 1, hi.y()); ++y)
        for (int x = std::max(0, lo.x()); x <= std::min(cfg.dims.x() - 1, hi.x()); ++x)
          truth.set_state_raw(Idx3(x, y, z), VoxelState::Occupied);
  }

  const auto random_free = [&](double clear) {
    for (int tries = 0; tries < 400; ++tries) {
      const Vec3 p(rng.uniform(0.5, ext.x() - 0.5), rng.uniform(0.5, ext.y() - 0.5),
                   rng.uniform(0.5, ext.z() - 0.5));
      if (truth.state_at(p) == VoxelState::Free && truth.has_clearance(p, clear)) return p;
    }
    return Vec3(0.5 * ext.x(), 0.5 * ext.y(), 0.5 * ext.z());
  };

  RandomScene scene{std::move(truth), OccupancyGrid(cfg), ObstacleIndex{}, FrontierSet(cfg)};
  const SensorSpec sensor = SensorSpec::panoramic(deg2rad(75.0), 7.0);
  const int n_scans = 3 + static_cast<int>(rng.uniform_int(3));
  for (int s = 0; s < n_scans; ++s) {
    const Vec3 pose = random_free(0.7);
    for (int j = 0; j < 12; ++j) {
      const double el = sensor.vertical_fov * ((j + 0.5) / 12.0 - 0.5);
      for (int i = 0; i < 64; ++i) {
        const double az = 2.0 * kPi * i / 64.0;
        const Vec3 dir(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az),
                       std::sin(el));
        Vec3 end = pose + dir * sensor.max_range;
        bool hit = false;
        if (const auto hc = scene.truth.trace_first_hit(pose, end)) {
          end = cfg.center(*hc);
          hit = true;
        }
        std::vector<Vec3> new_obs;
        for (const Idx3& c : scene.online.integrate_ray(pose, end, hit))
          if (scene.online.state(c) == VoxelState::Occupied) new_obs.push_back(cfg.center(c));
        scene.index.insert_batch(new_obs);
      }
    }
  }
  // Frontier from a full scan (update with every cell marked changed).
  std::vector<Idx3> all;
  for (CellId id = 0; id < cfg.cell_count(); ++id) all.push_back(cfg.unlinear(id));
  scene.frontier.update(scene.online, all);
  return scene;
}

/// The headline property: every large-sphere-path viewpoint's covered cells
/// survive the ray-cast oracle, over randomized partially observed scenes.
inline Report verify_occlusion(int n_scenes = 1000, std::uint64_t seed = 505) {
  Report rep;
  std::int64_t viewpoints = 0, large_viewpoints = 0, checked = 0, violations = 0;
  BubbleConfig bcfg;
  const SensorSpec sensor = SensorSpec::panoramic(deg2rad(75.0), 7.0);
  for (int s = 0; s < n_scenes; ++s) {
    RandomScene scene = make_random_scene(seed + static_cast<std::uint64_t>(s));
    const auto gen =
        generate_viewpoints(scene.frontier, scene.online, scene.index, sensor, bcfg);
    viewpoints += static_cast<std::int64_t>(gen.viewpoints.size());
    for (const Viewpoint& vp : gen.viewpoints) {
      if (vp.used_fallback) continue;
      ++large_viewpoints;
      for (CellId id : vp.covered_frontiers) {
        ++checked;
        const Vec3 cell = scene.online.config().center(scene.online.config().unlinear(id));
        if (scene.online.raycast_occluded(vp.position, cell)) ++violations;
      }
    }
  }
  rep.ok = (violations == 0) && large_viewpoints > 0;
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "occlusion: %d scenes, %lld viewpoints (%lld large-sphere), %lld "
                "segments checked, %lld occluded",
                n_scenes, static_cast<long long>(viewpoints),
                static_cast<long long>(large_viewpoints), static_cast<long long>(checked),
                static_cast<long long>(violations));
  detail::note(rep, buf);
  return rep;
}

inline Report run_suite(const std::string& name, double scale = 1.0) {
  const auto s = [&](int v) { return std::max(1, static_cast<int>(v * scale)); };
  if (name == "nn") return verify_nn(s(1000), s(1000));
  if (name == "rays") return verify_rays(s(10000));
  if (name == "astar") return verify_astar(s(50), 50);
  if (name == "atsp") return verify_atsp(s(100));
  if (name == "occlusion") return verify_occlusion(s(1000));
  Report r;
  r.ok = false;
  r.text = "unknown verify suite: " + name + " (expected nn|rays|astar|atsp|occlusion)\n";
  return r;
}

}  // namespace bubblex::verify
