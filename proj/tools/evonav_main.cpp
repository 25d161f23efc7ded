// evonav: evolves recurrent neural controllers for a camera-guided
// differential-drive robot and reports how the camera field of view shapes
// the outcome. Subcommands: evolve, sweep, replay, report.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "evonav/config.hpp"
#include "evonav/errors.hpp"
#include "evonav/evolution.hpp"
#include "evonav/experiments.hpp"
#include "evonav/report.hpp"
#include "evonav/version.hpp"

namespace {

namespace fs = std::filesystem;
using namespace evonav;

struct SharedFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  int jobs = 0;  // 0 = all hardware threads
};

void add_shared_flags(CLI::App* cmd, SharedFlags& shared) {
  cmd->add_option("--config", shared.config_path, "JSON configuration file");
  cmd->add_option("--seed", shared.seed, "base random seed");
  cmd->add_option("--out", shared.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--jobs", shared.jobs, "worker threads (default: all hardware threads)");
}

int effective_jobs(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

AppConfig load_app_config(const SharedFlags& shared) {
  if (shared.config_path.empty()) return default_config();
  return load_config_file(shared.config_path);
}

// Seed precedence: --seed flag, then config file, then EVONAV_SEED, then 1.
std::uint64_t resolve_seed(const SharedFlags& shared, const AppConfig& config) {
  if (shared.seed) return *shared.seed;
  if (config.sweep_base_seed) return *config.sweep_base_seed;
  if (const char* env = std::getenv("EVONAV_SEED")) {
    try {
      std::size_t used = 0;
      const std::string text(env);
      const unsigned long long value = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return static_cast<std::uint64_t>(value);
    } catch (const std::exception&) {
      throw ConfigError("EVONAV_SEED must be a non-negative integer");
    }
  }
  return 1;
}

fs::path prepare_out_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir + " (" + ec.message() + ")");
  return fs::path(out_dir);
}

SweepConfig sweep_from(const AppConfig& config, std::uint64_t seed) {
  SweepConfig sweep;
  sweep.fov_values = config.sweep_fovs;
  sweep.replicates = config.sweep_replicates;
  sweep.base_seed = seed;
  sweep.scenario = scenario_from(config);
  sweep.evolution = config.evolution;
  sweep.trial = config.trial;
  return sweep;
}

// ---------------------------------------------------------------- evolve ---

struct EvolveFlags {
  SharedFlags shared;
  std::optional<double> fov_deg;
  std::optional<int> generations;
  std::optional<int> population;
};

int cmd_evolve(const EvolveFlags& flags) {
  AppConfig config = load_app_config(flags.shared);
  if (flags.generations) config.evolution.generations = *flags.generations;
  if (flags.population) config.evolution.population_size = *flags.population;
  validate_config(config);
  const double fov = flags.fov_deg.value_or(config.camera.fov_deg);
  const std::uint64_t seed = resolve_seed(flags.shared, config);
  const int jobs = effective_jobs(flags.shared.jobs);
  const fs::path out = prepare_out_dir(flags.shared.out_dir);

  const RunHistory history = run_evolution(fov, scenario_from(config), config.evolution,
                                           config.trial, seed, jobs);

  SweepResult single;
  single.fov_values = {fov};
  single.runs = {{history}};
  write_history_csv(out / "history.csv", single);

  const GenerationStats& final_stats = history.stats.back();
  const NetworkSpec net{config.camera.pixel_count, config.hidden_units, 2};
  write_genome_json(out / "best_genome.json", final_stats.best_genome, net,
                    final_stats.best_fitness, fov);
  write_manifest(out / "manifest.json", config_to_json(config), seed, "evolve");

  std::cout << "evolved " << config.evolution.generations << " generations at fov "
            << format_number(fov) << " deg\n"
            << "final best fitness: " << format_number(final_stats.best_fitness) << '\n'
            << "final mean fitness: " << format_number(final_stats.mean_fitness) << '\n'
            << "outputs written to " << out.string() << '\n';
  return 0;
}

// ----------------------------------------------------------------- sweep ---

struct SweepFlags {
  SharedFlags shared;
  std::vector<double> fovs;
  std::optional<double> fov_min;
  std::optional<double> fov_max;
  std::optional<double> fov_step;
  std::optional<int> replicates;
  std::string preset;
  bool dry_run = false;
};

// Both presets evolve in the post-field course with short, many-start trials:
// wall-adjacent spawns and scattered thin posts are what couple fitness to
// the camera, and averaging eight fresh starts per evaluation keeps the
// selection signal ahead of spawn luck at small population sizes.
void preset_scenario(AppConfig& config) {
  config.arena = experiment_arena();
  // Short-horizon camera: a wall is visible only once it matters. With the
  // full 1 m range a near-parallel ray grazes the wall the robot spawned
  // beside and leaks its side even through a keyhole field of view.
  config.camera.max_range = 0.5;
  config.trial.steps = 100;
  config.trial.starts_per_trial = 8;
  config.evolution.elite_count = 1;
  config.evolution.crossover_prob = 0.7;
  config.evolution.init_range = 3.0;
}

void apply_preset(AppConfig& config, const std::string& preset) {
  if (preset.empty()) return;
  if (preset == "desk") {
    // minutes-scale configuration
    preset_scenario(config);
    config.sweep_fovs = {5.0, 15.0, 45.0, 90.0, 135.0, 180.0};
    config.sweep_replicates = 3;
    config.evolution.population_size = 30;
    config.evolution.generations = 30;
    config.evolution.parent_count = 8;
  } else if (preset == "paper") {
    // full-scale configuration: 91 fov values x 5 replicates x 100 generations
    preset_scenario(config);
    config.sweep_fovs.clear();
    for (int fov = 0; fov <= 180; fov += 2) {
      config.sweep_fovs.push_back(static_cast<double>(fov));
    }
    config.sweep_replicates = 5;
    config.evolution.population_size = 60;
    config.evolution.generations = 100;
    config.evolution.parent_count = 15;
  } else {
    throw ConfigError("unknown preset: " + preset);
  }
}

std::vector<double> fov_grid(double lo, double hi, double step) {
  if (step <= 0.0) throw ConfigError("--fov-step must be > 0");
  if (hi < lo) throw ConfigError("--fov-max must be >= --fov-min");
  std::vector<double> values;
  for (int i = 0;; ++i) {
    const double fov = lo + static_cast<double>(i) * step;
    if (fov > hi + 1e-9) break;
    values.push_back(fov);
  }
  return values;
}

int cmd_sweep(const SweepFlags& flags) {
  AppConfig config = load_app_config(flags.shared);
  apply_preset(config, flags.preset);
  if (!flags.fovs.empty()) {
    config.sweep_fovs = flags.fovs;
  } else if (flags.fov_min || flags.fov_max || flags.fov_step) {
    if (!(flags.fov_min && flags.fov_max && flags.fov_step)) {
      throw ConfigError("--fov-min, --fov-max and --fov-step must be given together");
    }
    config.sweep_fovs = fov_grid(*flags.fov_min, *flags.fov_max, *flags.fov_step);
  }
  if (flags.replicates) config.sweep_replicates = *flags.replicates;
  validate_config(config);

  const std::uint64_t seed = resolve_seed(flags.shared, config);
  const SweepConfig sweep = sweep_from(config, seed);

  if (flags.dry_run) {
    const std::uint64_t evaluations = static_cast<std::uint64_t>(sweep.fov_values.size()) *
                                      static_cast<std::uint64_t>(sweep.replicates) *
                                      static_cast<std::uint64_t>(sweep.evolution.generations) *
                                      static_cast<std::uint64_t>(sweep.evolution.population_size);
    std::cout << "dry run: nothing executed, nothing written\n"
              << "fov values: " << sweep.fov_values.size() << '\n'
              << "replicates: " << sweep.replicates << '\n'
              << "generations: " << sweep.evolution.generations << '\n'
              << "population: " << sweep.evolution.population_size << '\n'
              << "planned evaluations: " << evaluations << '\n';
    return 0;
  }

  const int jobs = effective_jobs(flags.shared.jobs);
  const fs::path out = prepare_out_dir(flags.shared.out_dir);

  const SweepResult result = run_sweep(sweep, jobs);
  write_history_csv(out / "history.csv", result);
  // Summaries are always derived by reading the CSV back, so `sweep` and a
  // later `report` on the same file produce byte-identical outputs.
  const AggregateSeries series = report_from_history(out / "history.csv", out);
  write_manifest(out / "manifest.json", config_to_json(config), seed, "sweep");

  std::cout << "swept " << sweep.fov_values.size() << " fov values x " << sweep.replicates
            << " replicates\n"
            << "best fov (best-of-run series): " << format_number(best_fov(series, SeriesChoice::kBest))
            << " deg\n"
            << "best fov (population-mean series): "
            << format_number(best_fov(series, SeriesChoice::kAverage)) << " deg\n"
            << "outputs written to " << out.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------- replay ---

struct ReplayFlags {
  SharedFlags shared;
  std::string genome_path;
  std::optional<int> steps;
};

int cmd_replay(const ReplayFlags& flags) {
  AppConfig config = load_app_config(flags.shared);
  if (flags.steps) config.trial.steps = *flags.steps;
  validate_config(config);
  const GenomeFile file = read_genome_json(flags.genome_path);

  ScenarioConfig scenario = scenario_from(config);
  scenario.camera.pixel_count = file.spec.n_inputs;
  scenario.hidden_units = file.spec.n_hidden;
  const double fov = file.fov_deg.value_or(scenario.camera.fov_deg);
  CameraSpec camera = scenario.camera;
  camera.fov_deg = fov;

  const std::uint64_t seed = resolve_seed(flags.shared, config);
  const fs::path out = prepare_out_dir(flags.shared.out_dir);

  const World world = build_world(scenario.arena);
  // same pose construction as generation 0 of an evolution run with this seed
  RngStream pose_stream = role_stream(seed, StreamRole::kStartPoses, 0);
  const std::vector<Pose> starts =
      draw_start_poses(world, scenario.robot, pose_stream, config.trial.starts_per_trial);

  const NetworkParams params = decode_genome(file.genome, file.spec);
  const std::vector<StepRecord> records =
      simulate_trial(world, scenario.robot, camera, params, config.trial, starts.front());
  write_trajectory_csv(out / "trajectory.csv", records);
  write_manifest(out / "manifest.json", config_to_json(config), seed, "replay");

  double phi_sum = 0.0;
  bool collided = false;
  for (const StepRecord& rec : records) {
    phi_sum += rec.phi;
    collided = collided || rec.collided;
  }
  std::cout << "replayed " << records.size() << " steps at fov " << format_number(fov)
            << " deg\n"
            << "mean per-step reward: "
            << format_number(phi_sum / static_cast<double>(records.size())) << '\n'
            << "collision: " << (collided ? "yes" : "no") << '\n'
            << "outputs written to " << out.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------- report ---

struct ReportFlags {
  SharedFlags shared;
  std::string history_path;
};

int cmd_report(const ReportFlags& flags) {
  const fs::path out = prepare_out_dir(flags.shared.out_dir);
  const AggregateSeries series = report_from_history(flags.history_path, out);
  std::cout << "report over " << series.fov_values.size() << " fov values x "
            << series.best.cols() << " generations\n"
            << "best fov (best-of-run series): "
            << format_number(best_fov(series, SeriesChoice::kBest)) << " deg\n"
            << "best fov (population-mean series): "
            << format_number(best_fov(series, SeriesChoice::kAverage)) << " deg\n"
            << "outputs written to " << out.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evolutionary field-of-view workbench for vision-guided navigation"};
  app.set_version_flag("--version", std::string("evonav ") + kVersion);
  app.require_subcommand(1);

  EvolveFlags evolve_flags;
  CLI::App* evolve = app.add_subcommand("evolve", "run one evolution at a fixed field of view");
  add_shared_flags(evolve, evolve_flags.shared);
  evolve->add_option("--fov", evolve_flags.fov_deg, "camera field of view in degrees");
  evolve->add_option("--generations", evolve_flags.generations, "number of generations");
  evolve->add_option("--population", evolve_flags.population, "population size");

  SweepFlags sweep_flags;
  CLI::App* sweep = app.add_subcommand("sweep", "evolve across a grid of fields of view");
  add_shared_flags(sweep, sweep_flags.shared);
  CLI::Option* fovs_opt =
      sweep->add_option("--fovs", sweep_flags.fovs, "explicit fov list in degrees")
          ->delimiter(',');
  sweep->add_option("--fov-min", sweep_flags.fov_min, "grid start in degrees")->excludes(fovs_opt);
  sweep->add_option("--fov-max", sweep_flags.fov_max, "grid end in degrees")->excludes(fovs_opt);
  sweep->add_option("--fov-step", sweep_flags.fov_step, "grid step in degrees")->excludes(fovs_opt);
  sweep->add_option("--replicates", sweep_flags.replicates, "independent runs per fov value");
  sweep->add_option("--preset", sweep_flags.preset, "desk (minutes) or paper (full scale)")
      ->check(CLI::IsMember({"desk", "paper"}));
  sweep->add_flag("--dry-run", sweep_flags.dry_run, "print the planned work and exit");

  ReplayFlags replay_flags;
  CLI::App* replay = app.add_subcommand("replay", "re-simulate a saved genome and dump its path");
  add_shared_flags(replay, replay_flags.shared);
  replay->add_option("genome", replay_flags.genome_path, "genome JSON file")->required();
  replay->add_option("--steps", replay_flags.steps, "trial length in steps");

  ReportFlags report_flags;
  CLI::App* report = app.add_subcommand("report", "recompute summaries from a history CSV");
  add_shared_flags(report, report_flags.shared);
  report->add_option("history", report_flags.history_path, "history.csv from a sweep")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;  // bad flags are usage errors
  }

  try {
    if (evolve->parsed()) return cmd_evolve(evolve_flags);
    if (sweep->parsed()) return cmd_sweep(sweep_flags);
    if (replay->parsed()) return cmd_replay(replay_flags);
    if (report->parsed()) return cmd_report(report_flags);
    std::cerr << "error: no subcommand given\n";
    return 2;
  } catch (const IoError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 3;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
}
