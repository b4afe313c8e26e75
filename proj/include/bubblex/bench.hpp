#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "bubblex/episode.hpp"
#include "bubblex/scenario.hpp"

namespace bubblex {

/// Batch description: every (scenario, arm, seed) triple runs one episode;
/// seed lists are shared across arms so comparisons are paired.
struct RunManifest {
  std::vector<std::string> scenarios;            // scenario file paths
  std::vector<std::string> arms = {"bubble", "baseline"};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4};
  std::string out_dir = "bench_out";
  int jobs = 1;
  std::optional<double> time_limit;
};

inline RunManifest parse_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  RunManifest m;
  m.arms.clear();
  m.seeds.clear();
  std::string line;
  const auto dir = std::filesystem::path(path).parent_path();
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "scenario") {
      std::string p;
      ls >> p;
      std::filesystem::path sp(p);
      m.scenarios.push_back(sp.is_relative() ? (dir / sp).string() : p);
    } else if (key == "arms") {
      std::string a;
      while (ls >> a) m.arms.push_back(a);
    } else if (key == "seeds") {
      std::uint64_t s;
      while (ls >> s) m.seeds.push_back(s);
    } else if (key == "out") {
      ls >> m.out_dir;
    } else if (key == "jobs") {
      ls >> m.jobs;
    } else if (key == "time_limit") {
      double tl;
      ls >> tl;
      m.time_limit = tl;
    } else {
      throw std::runtime_error(path + ": unknown manifest key '" + key + "'");
    }
  }
  if (m.arms.empty()) m.arms = {"bubble", "baseline"};
  if (m.seeds.empty()) m.seeds = {1, 2, 3, 4};
  if (m.scenarios.empty()) throw std::runtime_error(path + ": manifest lists no scenarios");
  return m;
}

struct BenchOutcome {
  std::vector<EpisodeResult> episodes;  // ordered by (scenario, arm, seed)
  std::string comparison_csv;
  std::string table_text;
};

namespace detail {

struct ArmStats {
  std::string scenario, arm;
  int runs = 0, completed = 0;
  double time_mean = 0, time_min = 1e300, time_max = 0;
  double dist_mean = 0, dist_min = 1e300, dist_max = 0;
  double raycasts_mean = 0;
  double cov_mean = 0;
  TimingAggregate timing;  // means of means
};

inline ArmStats summarize(const std::string& scen, const std::string& arm,
                          const std::vector<const EpisodeResult*>& eps) {
  ArmStats s;
  s.scenario = scen;
  s.arm = arm;
  for (const EpisodeResult* e : eps) {
    ++s.runs;
    if (e->completion == "completed") ++s.completed;
    s.time_mean += e->completion_time;
    s.time_min = std::min(s.time_min, e->completion_time);
    s.time_max = std::max(s.time_max, e->completion_time);
    s.dist_mean += e->flight_distance;
    s.dist_min = std::min(s.dist_min, e->flight_distance);
    s.dist_max = std::max(s.dist_max, e->flight_distance);
    s.raycasts_mean += static_cast<double>(e->raycast_count);
    s.cov_mean += e->coverage;
    const TimingAggregate a = aggregate_timings(*e);
    s.timing.mean_frontier += a.mean_frontier;
    s.timing.mean_viewpoint += a.mean_viewpoint;
    s.timing.mean_costmat += a.mean_costmat;
    s.timing.mean_tsp += a.mean_tsp;
  }
  if (s.runs) {
    const double n = s.runs;
    s.time_mean /= n;
    s.dist_mean /= n;
    s.raycasts_mean /= n;
    s.cov_mean /= n;
    s.timing.mean_frontier /= n;
    s.timing.mean_viewpoint /= n;
    s.timing.mean_costmat /= n;
    s.timing.mean_tsp /= n;
  }
  return s;
}

}  // namespace detail

/// Run the whole manifest with a small worker pool. Per-episode artifacts
/// land in <out>/<scenario>_<arm>_seed<k>/; comparison.csv aggregates the
/// deterministic quantities, comparison_timing.csv the wall-clock ones.
inline BenchOutcome run_bench(const RunManifest& manifest, const RunOptions& opts = {}) {
  struct Job {
    std::string scenario_path;
    std::string arm;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const std::string& sc : manifest.scenarios)
    for (const std::string& arm : manifest.arms)
      for (std::uint64_t seed : manifest.seeds) jobs.push_back({sc, arm, seed});

  BenchOutcome outcome;
  outcome.episodes.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::string first_error;

  const int workers = std::max(1, std::min<int>(manifest.jobs, static_cast<int>(jobs.size())));
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        ScenarioConfig cfg = parse_scenario_file(jobs[i].scenario_path);
        cfg.frontend = jobs[i].arm;
        cfg.seed = jobs[i].seed;
        if (manifest.time_limit) cfg.time_limit = *manifest.time_limit;
        EpisodeResult r = run_episode(cfg, opts);
        char dirname[256];
        std::snprintf(dirname, sizeof(dirname), "%s_%s_seed%llu", r.scenario.c_str(),
                      r.frontend.c_str(), static_cast<unsigned long long>(r.seed));
        write_episode_artifacts(
            (std::filesystem::path(manifest.out_dir) / dirname).string(), r);
        outcome.episodes[i] = std::move(r);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(err_mutex);
        if (first_error.empty()) first_error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (!first_error.empty()) throw std::runtime_error("bench episode failed: " + first_error);

  // Aggregate per (scenario, arm), in manifest order.
  std::vector<detail::ArmStats> stats;
  for (const std::string& sc : manifest.scenarios) {
    const std::string scen_name = std::filesystem::path(sc).stem().string();
    for (const std::string& arm : manifest.arms) {
      std::vector<const EpisodeResult*> eps;
      for (std::size_t i = 0; i < jobs.size(); ++i)
        if (jobs[i].scenario_path == sc && jobs[i].arm == arm)
          eps.push_back(&outcome.episodes[i]);
      stats.push_back(detail::summarize(scen_name, arm, eps));
    }
  }

  char buf[512];
  std::string csv =
      "scenario,frontend,runs,completed,time_mean,time_min,time_max,"
      "dist_mean,dist_min,dist_max,raycasts_mean,coverage_mean\n";
  std::string tcsv =
      "scenario,frontend,frontier_mean_s,viewpoint_mean_s,costmat_mean_s,tsp_mean_s\n";
  std::string table =
      "scenario    frontend  runs done  time[s] mean/min/max     dist[m] mean/min/max    "
      "raycasts    vp_time[s]\n";
  for (const detail::ArmStats& s : stats) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%d,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f,%.1f,%.6f\n",
                  s.scenario.c_str(), s.arm.c_str(), s.runs, s.completed, s.time_mean,
                  s.time_min, s.time_max, s.dist_mean, s.dist_min, s.dist_max,
                  s.raycasts_mean, s.cov_mean);
    csv += buf;
    std::snprintf(buf, sizeof(buf), "%s,%s,%.6f,%.6f,%.6f,%.6f\n", s.scenario.c_str(),
                  s.arm.c_str(), s.timing.mean_frontier, s.timing.mean_viewpoint,
                  s.timing.mean_costmat, s.timing.mean_tsp);
    tcsv += buf;
    std::snprintf(buf, sizeof(buf),
                  "%-11s %-9s %4d %4d  %7.1f/%7.1f/%7.1f  %7.1f/%7.1f/%7.1f  %10.0f  %10.4f\n",
                  s.scenario.c_str(), s.arm.c_str(), s.runs, s.completed, s.time_mean,
                  s.time_min, s.time_max, s.dist_mean, s.dist_min, s.dist_max,
                  s.raycasts_mean, s.timing.mean_viewpoint);
    table += buf;
  }
  outcome.comparison_csv = csv;
  outcome.table_text = table;

  std::filesystem::create_directories(manifest.out_dir);
  std::ofstream(std::filesystem::path(manifest.out_dir) / "comparison.csv") << csv;
  std::ofstream(std::filesystem::path(manifest.out_dir) / "comparison_timing.csv") << tcsv;
  return outcome;
}

}  // namespace bubblex
