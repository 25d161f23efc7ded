#include "evonav/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "evonav/errors.hpp"
#include "evonav/parallel.hpp"

namespace evonav {

namespace {

// Every trial starts with the robot hugging a wall: clearance between half a
// body radius and one body radius, heading roughly parallel to that wall.
// Starting deep inside the proximity penalty band means a controller that
// stands still (or wiggles in place) keeps paying the penalty for the whole
// trial, and the tangent heading means the threatened wall sits beside the
// camera axis, not in front of it. With this little margin a veer toward the
// wall is close to unrecoverable, so picking the safe side takes an actual
// reading of lateral clearance, which is exactly what a too-narrow field of
// view cannot provide.
constexpr double kStartClearanceMinRadii = 0.5;
constexpr double kStartClearanceMaxRadii = 1.0;
constexpr double kStartHeadingJitter = 0.2617993877991494;  // 15 degrees
constexpr int kMaxPoseAttempts = 10000;

void check_trial(const TrialConfig& trial) {
  if (trial.steps < 1) throw ConfigError("trial.steps must be >= 1");
  if (!(trial.dt > 0.0)) throw ConfigError("trial.dt must be > 0");
  if (trial.starts_per_trial < 1) throw ConfigError("trial.starts_per_trial must be >= 1");
}

void check_evolution(const EvolutionConfig& config) {
  if (config.population_size < 1) throw ConfigError("evolution.population_size must be >= 1");
  if (config.generations < 1) throw ConfigError("evolution.generations must be >= 1");
  if (config.elite_count < 0) throw ConfigError("evolution.elite_count must be >= 0");
  if (config.parent_count <= config.elite_count) {
    throw ConfigError("evolution.parent_count must exceed elite_count");
  }
  if (config.parent_count > config.population_size) {
    throw ConfigError("evolution.parent_count must not exceed population_size");
  }
  if (config.crossover_prob < 0.0 || config.crossover_prob > 1.0) {
    throw ConfigError("evolution.crossover_prob must be in [0, 1]");
  }
  if (config.mutation_prob < 0.0 || config.mutation_prob > 1.0) {
    throw ConfigError("evolution.mutation_prob must be in [0, 1]");
  }
  if (!(config.mutation_std >= 0.0)) throw ConfigError("evolution.mutation_std must be >= 0");
  if (config.init_range < 0.0 || config.init_range > config.gene_clamp) {
    throw ConfigError("evolution.init_range must be in [0, gene_clamp]");
  }
  if (!(config.gene_clamp > 0.0)) throw ConfigError("evolution.gene_clamp must be > 0");
}

// Indices sorted best-first; equal fitness keeps the lower population index.
std::vector<int> ranking(const std::vector<Individual>& population) {
  std::vector<int> order(population.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return *population[a].fitness > *population[b].fitness;
  });
  return order;
}

}  // namespace

RngStream role_stream(std::uint64_t seed, StreamRole role, std::uint64_t index) {
  return RngStream(derive_key(seed, static_cast<std::uint64_t>(role), index));
}

double fitness_step(double v_left, double v_right, double clearance_value,
                    const RobotSpec& spec) {
  const double full = 2.0 * spec.max_wheel_speed;
  const double speed_share = (std::abs(v_left) + std::abs(v_right)) / full;
  const double turn_share = std::abs(v_left - v_right) / full;
  const double proximity =
      std::clamp(1.0 - clearance_value / (4.0 * spec.body_radius), 0.0, 1.0);
  return speed_share * (1.0 - std::sqrt(turn_share)) * (1.0 - proximity);
}

std::vector<StepRecord> simulate_trial(const World& world, const RobotSpec& robot,
                                       const CameraSpec& camera, const NetworkParams& params,
                                       const TrialConfig& trial, const Pose& start) {
  check_trial(trial);
  if (clearance(world, start, robot) <= 0.0 || !inside_arena(world, start.position())) {
    throw HarnessError("simulate_trial: start pose is already in collision");
  }
  std::vector<StepRecord> records;
  records.reserve(static_cast<std::size_t>(trial.steps));

  const Eigen::Index hid = params.input_weights.rows();
  Eigen::VectorXd state = Eigen::VectorXd::Zero(hid);
  Eigen::VectorXd next_state(hid);
  Eigen::VectorXd preactivation(hid);
  Eigen::VectorXd image(camera.pixel_count);
  Eigen::Vector2d outputs;

  Pose pose = start;
  bool collided = false;
  for (int step = 0; step < trial.steps; ++step) {
    if (collided) {
      // frozen: the robot stays where it hit, scoring zero from here on
      records.push_back({pose, 0.0, 0.0, 0.0, true});
      continue;
    }
    render_camera_into(world, pose, camera, image);
    network_step_into(params, state, image, preactivation, next_state, outputs);
    state.swap(next_state);
    const auto [v_left, v_right] = outputs_to_wheel_speeds(outputs, robot);
    pose = step_kinematics(pose, v_left, v_right, trial.dt, robot);
    const double clear = clearance(world, pose, robot);
    double phi = 0.0;
    if (clear <= 0.0 || !inside_arena(world, pose.position())) {
      collided = true;  // the colliding step itself scores zero
    } else {
      phi = fitness_step(v_left, v_right, clear, robot);
    }
    records.push_back({pose, v_left, v_right, phi, collided});
  }
  return records;
}

double evaluate_individual(const Genome& genome, const World& world, const RobotSpec& robot,
                           const CameraSpec& camera, const NetworkSpec& net,
                           const TrialConfig& trial, const std::vector<Pose>& start_poses) {
  check_trial(trial);
  if (static_cast<int>(start_poses.size()) != trial.starts_per_trial) {
    throw HarnessError("evaluate_individual: expected " +
                       std::to_string(trial.starts_per_trial) + " start poses, got " +
                       std::to_string(start_poses.size()));
  }
  if (net.n_inputs != camera.pixel_count) {
    throw CodecError("evaluate_individual: network inputs do not match camera pixels");
  }
  const NetworkParams params = decode_genome(genome, net);
  double total = 0.0;
  for (const Pose& start : start_poses) {
    const auto records = simulate_trial(world, robot, camera, params, trial, start);
    double sum = 0.0;
    for (const StepRecord& rec : records) sum += rec.phi;
    total += sum / static_cast<double>(trial.steps);
  }
  return total / static_cast<double>(start_poses.size());
}

std::vector<Pose> draw_start_poses(const World& world, const RobotSpec& robot, RngStream& stream,
                                   int count) {
  if (count < 1) throw HarnessError("draw_start_poses: count must be >= 1");
  const double lo = kStartClearanceMinRadii * robot.body_radius;
  const double hi = kStartClearanceMaxRadii * robot.body_radius;
  const double margin = robot.body_radius + lo;
  const double w = world.arena.width;
  const double h = world.arena.height;
  if (2.0 * margin >= w || 2.0 * margin >= h) {
    throw HarnessError("draw_start_poses: arena too small for the robot");
  }
  std::vector<Pose> poses;
  poses.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxPoseAttempts; ++attempt) {
      Pose pose;
      pose.x = stream.uniform(margin, w - margin);
      pose.y = stream.uniform(margin, h - margin);
      // interior walls count too: a spawn may hug a post instead of the rim
      const double c = clearance(world, pose, robot);
      if (c < lo || c > hi) continue;
      Vec2d closest = Vec2d::Zero();
      double best = std::numeric_limits<double>::infinity();
      for (const WallSegment& wall : world.walls) {
        const Vec2d point = closest_point_on_segment(pose.position(), wall.a, wall.b);
        const double d = (pose.position() - point).norm();
        if (d < best) {
          best = d;
          closest = point;
        }
      }
      const Vec2d away = (pose.position() - closest).normalized();
      const double side = stream.uniform(0.0, 1.0) < 0.5 ? 1.0 : -1.0;
      const double tangent = std::atan2(away.y(), away.x()) + side * std::numbers::pi / 2.0;
      pose.heading =
          wrap_angle(tangent + stream.uniform(-kStartHeadingJitter, kStartHeadingJitter));
      poses.push_back(pose);
      placed = true;
      break;
    }
    if (!placed) {
      throw HarnessError("draw_start_poses: no wall-adjacent pose found");
    }
  }
  return poses;
}

std::vector<Individual> init_population(const EvolutionConfig& config, const NetworkSpec& net,
                                        const RngStream& stream) {
  check_evolution(config);
  const int length = genome_length(net);
  std::vector<Individual> population(static_cast<std::size_t>(config.population_size));
  for (int i = 0; i < config.population_size; ++i) {
    RngStream genes = stream.split(static_cast<std::uint64_t>(i));
    Genome genome;
    genome.weights.resize(length);
    for (int g = 0; g < length; ++g) {
      genome.weights(g) = genes.uniform(-config.init_range, config.init_range);
    }
    population[static_cast<std::size_t>(i)].genome = std::move(genome);
  }
  return population;
}

std::vector<Genome> next_generation(const std::vector<Individual>& population,
                                    const EvolutionConfig& config, const RngStream& stream) {
  check_evolution(config);
  if (static_cast<int>(population.size()) != config.population_size) {
    throw HarnessError("next_generation: population size mismatch");
  }
  for (const Individual& ind : population) {
    if (!ind.fitness.has_value()) {
      throw HarnessError("next_generation: population contains unevaluated individuals");
    }
  }
  const std::vector<int> order = ranking(population);
  const Eigen::Index length = population.front().genome.weights.size();

  std::vector<Genome> offspring(population.size());
  for (int e = 0; e < config.elite_count; ++e) {
    offspring[static_cast<std::size_t>(e)] = population[static_cast<std::size_t>(order[e])].genome;
  }
  for (int slot = config.elite_count; slot < config.population_size; ++slot) {
    RngStream draws = stream.split(static_cast<std::uint64_t>(slot));
    const int first = draws.uniform_int(config.parent_count);
    int second = first;
    while (second == first && config.parent_count > 1) {
      second = draws.uniform_int(config.parent_count);
    }
    const Genome& parent_a = population[static_cast<std::size_t>(order[first])].genome;
    const Genome& parent_b = population[static_cast<std::size_t>(order[second])].genome;

    Genome child;
    if (draws.uniform01() < config.crossover_prob) {
      const int cut = 1 + draws.uniform_int(static_cast<int>(length) - 1);
      child.weights.resize(length);
      child.weights.head(cut) = parent_a.weights.head(cut);
      child.weights.tail(length - cut) = parent_b.weights.tail(length - cut);
    } else {
      child = parent_a;
    }
    for (Eigen::Index g = 0; g < length; ++g) {
      if (draws.uniform01() < config.mutation_prob) {
        const double mutated = child.weights(g) + draws.gaussian(0.0, config.mutation_std);
        child.weights(g) = std::clamp(mutated, -config.gene_clamp, config.gene_clamp);
      }
    }
    offspring[static_cast<std::size_t>(slot)] = std::move(child);
  }
  return offspring;
}

RunHistory run_evolution(double fov_deg, const ScenarioConfig& scenario,
                         const EvolutionConfig& evolution, const TrialConfig& trial,
                         std::uint64_t seed, int jobs,
                         const std::vector<Pose>* fixed_start_poses) {
  if (!(fov_deg >= 0.0) || !(fov_deg <= 180.0)) {
    throw ConfigError("fov_deg must be in [0, 180]");
  }
  check_trial(trial);
  check_evolution(evolution);
  if (scenario.hidden_units < 1) throw ConfigError("network.n_hidden must be >= 1");

  const World world = build_world(scenario.arena);
  CameraSpec camera = scenario.camera;
  camera.fov_deg = fov_deg;
  const NetworkSpec net{camera.pixel_count, scenario.hidden_units, 2};

  if (fixed_start_poses &&
      static_cast<int>(fixed_start_poses->size()) != trial.starts_per_trial) {
    throw HarnessError("run_evolution: fixed start poses do not match starts_per_trial");
  }

  std::vector<Individual> population =
      init_population(evolution, net, role_stream(seed, StreamRole::kInitGenomes));

  RunHistory history;
  history.fov_deg = fov_deg;
  history.seed = seed;
  history.stats.reserve(static_cast<std::size_t>(evolution.generations));

  for (int gen = 0; gen < evolution.generations; ++gen) {
    std::vector<Pose> starts;
    if (fixed_start_poses) {
      starts = *fixed_start_poses;
    } else {
      RngStream pose_stream =
          role_stream(seed, StreamRole::kStartPoses, static_cast<std::uint64_t>(gen));
      starts = draw_start_poses(world, scenario.robot, pose_stream, trial.starts_per_trial);
    }

    parallel_for(evolution.population_size, jobs, [&](int i) {
      Individual& ind = population[static_cast<std::size_t>(i)];
      ind.fitness =
          evaluate_individual(ind.genome, world, scenario.robot, camera, net, trial, starts);
    });

    int best_index = 0;
    double sum = 0.0;
    for (int i = 0; i < evolution.population_size; ++i) {
      const double fit = *population[static_cast<std::size_t>(i)].fitness;
      sum += fit;
      if (fit > *population[static_cast<std::size_t>(best_index)].fitness) best_index = i;
    }
    GenerationStats stats;
    stats.generation = gen;
    stats.best_fitness = *population[static_cast<std::size_t>(best_index)].fitness;
    stats.mean_fitness = sum / static_cast<double>(evolution.population_size);
    stats.best_genome = population[static_cast<std::size_t>(best_index)].genome;
    history.stats.push_back(std::move(stats));

    if (gen + 1 < evolution.generations) {
      std::vector<Genome> offspring = next_generation(
          population, evolution, role_stream(seed, StreamRole::kBreeding, static_cast<std::uint64_t>(gen)));
      for (int i = 0; i < evolution.population_size; ++i) {
        population[static_cast<std::size_t>(i)].genome = std::move(offspring[static_cast<std::size_t>(i)]);
        population[static_cast<std::size_t>(i)].fitness.reset();
      }
    }
  }
  return history;
}

}  // namespace evonav
