// Command-line front door: single episodes, paired benchmarks, synthetic
// scenario generation and the brute-force oracle suites.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "bubblex/bench.hpp"
#include "bubblex/episode.hpp"
#include "bubblex/gen_scenario.hpp"
#include "bubblex/scenario.hpp"
#include "bubblex/verify.hpp"

namespace {

int cmd_run(const std::string& scenario_path, const std::vector<std::string>& overrides,
            const std::string& out_dir, std::optional<std::uint64_t> seed,
            std::optional<std::string> frontend, std::optional<double> time_limit) {
  bubblex::ScenarioConfig cfg = bubblex::parse_scenario_file(scenario_path);
  for (const std::string& kv : overrides) bubblex::apply_override(cfg, kv);
  if (seed) cfg.seed = *seed;
  if (frontend) cfg.frontend = *frontend;
  if (time_limit) cfg.time_limit = *time_limit;

  const bubblex::EpisodeResult r = bubblex::run_episode(cfg);
  const std::string dir =
      out_dir.empty() ? (cfg.name + "_" + cfg.frontend + "_out") : out_dir;
  bubblex::write_episode_artifacts(dir, r);
  std::printf("%s [%s, seed %llu]: %s in %.1f s sim, %.1f m flown, coverage %.4f, "
              "%lld ray casts\n",
              cfg.name.c_str(), cfg.frontend.c_str(),
              static_cast<unsigned long long>(cfg.seed), r.completion.c_str(),
              r.completion_time, r.flight_distance, r.coverage,
              static_cast<long long>(r.raycast_count));
  std::printf("artifacts: %s\n", dir.c_str());
  return 0;
}

int cmd_bench(const std::string& manifest_path, const std::string& out_dir, int jobs,
              std::optional<double> time_limit) {
  bubblex::RunManifest m = bubblex::parse_manifest_file(manifest_path);
  if (!out_dir.empty()) m.out_dir = out_dir;
  if (jobs > 0) m.jobs = jobs;
  if (time_limit) m.time_limit = time_limit;
  const bubblex::BenchOutcome outcome = bubblex::run_bench(m);
  std::cout << outcome.table_text;
  std::printf("artifacts: %s\n", m.out_dir.c_str());
  return 0;
}

int cmd_gen(const std::string& kind, const std::string& size_spec, double resolution,
            double density, std::uint64_t seed, const std::string& out_dir,
            std::string name, bool floor) {
  if (name.empty()) name = kind;
  const auto gen = bubblex::generate_scenario_files(
      out_dir, name, kind, bubblex::parse_size_spec(size_spec), resolution, density, seed,
      floor);
  std::printf("wrote %s\nwrote %s\n", gen.map_path.c_str(), gen.scenario_path.c_str());
  return 0;
}

int cmd_verify(const std::string& suite, double scale) {
  const bubblex::verify::Report rep = bubblex::verify::run_suite(suite, scale);
  std::cout << rep.text;
  std::printf("verify %s: %s\n", suite.c_str(), rep.ok ? "PASS" : "FAIL");
  return rep.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"occlusion-free-sphere exploration planner and benchmark harness"};
  app.require_subcommand(1);

  // run
  std::string scenario_path, run_out;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> run_seed;
  std::optional<std::string> run_frontend;
  std::optional<double> run_time_limit;
  auto* run = app.add_subcommand("run", "run one exploration episode");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", run_out, "artifact directory");
  run->add_option("--seed", run_seed, "override RNG seed");
  run->add_option("--frontend", run_frontend, "bubble | baseline")
      ->check(CLI::IsMember({"bubble", "baseline"}));
  run->add_option("--time-limit", run_time_limit, "simulated-seconds cap");
  run->add_option("--set", overrides, "override any scenario key, key=value");

  // bench
  std::string manifest_path, bench_out;
  int bench_jobs = 0;
  std::optional<double> bench_time_limit;
  auto* bench = app.add_subcommand("bench", "run a paired benchmark manifest");
  bench->add_option("manifest", manifest_path, "manifest file")->required();
  bench->add_option("--out", bench_out, "output directory");
  bench->add_option("--jobs", bench_jobs, "worker pool size");
  bench->add_option("--time-limit", bench_time_limit, "simulated-seconds cap");

  // gen-scenario
  std::string gen_kind, gen_size = "40x40x6", gen_out = ".", gen_name;
  double gen_res = 0.2, gen_density = 0.1;
  std::uint64_t gen_seed = 1;
  bool gen_floor = false;
  auto* gen = app.add_subcommand("gen-scenario", "generate a synthetic world + scenario");
  gen->add_option("kind", gen_kind, "building | forest | empty")
      ->required()
      ->check(CLI::IsMember({"building", "forest", "empty"}));
  gen->add_option("--size", gen_size, "extent WxDxH in meters");
  gen->add_option("--resolution", gen_res, "voxel size, m");
  gen->add_option("--density", gen_density, "trees per m^2 (forest)");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output directory");
  gen->add_option("--name", gen_name, "base name for map/scenario files");
  gen->add_flag("--floor", gen_floor, "occupied floor layer (empty worlds)");

  // verify
  std::string suite;
  double verify_scale = 1.0;
  auto* verify = app.add_subcommand("verify", "run a brute-force oracle suite");
  verify->add_option("suite", suite, "nn | rays | astar | atsp | occlusion")->required();
  verify->add_option("--scale", verify_scale, "case-count multiplier (for smoke runs)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(scenario_path, overrides, run_out, run_seed, run_frontend,
                     run_time_limit);
    if (bench->parsed()) return cmd_bench(manifest_path, bench_out, bench_jobs, bench_time_limit);
    if (gen->parsed())
      return cmd_gen(gen_kind, gen_size, gen_res, gen_density, gen_seed, gen_out, gen_name,
                     gen_floor);
    if (verify->parsed()) return cmd_verify(suite, verify_scale);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
