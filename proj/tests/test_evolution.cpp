#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "evonav/errors.hpp"
#include "evonav/evolution.hpp"
#include "evonav/rng.hpp"
#include "oracles.hpp"

using namespace evonav;

namespace {

World unit_square() { return build_world(ArenaSpec{1.0, 1.0, {}}); }

EvolutionConfig tiny_evolution(int population, int generations) {
  EvolutionConfig config;
  config.population_size = population;
  config.generations = generations;
  config.parent_count = std::max(2, population / 4);
  return config;
}

}  // namespace

TEST_CASE("fitness_step pins the textbook cases") {
  const RobotSpec robot{};
  const double vmax = robot.max_wheel_speed;
  // full speed, straight, far from walls: the perfect step
  CHECK(fitness_step(vmax, vmax, 4.0 * robot.body_radius, robot) == doctest::Approx(1.0));
  CHECK(fitness_step(vmax, vmax, 1.0, robot) == 1.0);
  // standing still scores nothing
  CHECK(fitness_step(0.0, 0.0, 1.0, robot) == 0.0);
  // a full-speed spin scores nothing either
  CHECK(fitness_step(-vmax, vmax, 1.0, robot) == 0.0);
  // touching or overlapping a wall scores nothing
  CHECK(fitness_step(vmax, vmax, 0.0, robot) == 0.0);
  CHECK(fitness_step(vmax, vmax, -0.05, robot) == 0.0);
}

TEST_CASE("fitness_step stays in [0, 1] for any speeds and clearances") {
  const RobotSpec robot{};
  RngStream s(derive_key(31, 1));
  for (int i = 0; i < 100000; ++i) {
    const double vl = s.uniform(-robot.max_wheel_speed, robot.max_wheel_speed);
    const double vr = s.uniform(-robot.max_wheel_speed, robot.max_wheel_speed);
    const double clear = s.uniform(-0.05, 1.0);
    const double phi = fitness_step(vl, vr, clear, robot);
    REQUIRE(phi >= 0.0);
    REQUIRE(phi <= 1.0);
  }
}

TEST_CASE("an all-zero genome scores exactly zero") {
  const World world = unit_square();
  const RobotSpec robot{};
  const CameraSpec camera{45.0, 16, 1.0};
  const NetworkSpec net{16, 8, 2};
  Genome genome;
  genome.weights = Eigen::VectorXd::Zero(genome_length(net));
  const TrialConfig trial{100, 0.1, 2};
  const std::vector<Pose> starts{{0.5, 0.5, 0.0}, {0.3, 0.7, 1.0}};
  CHECK(evaluate_individual(genome, world, robot, camera, net, trial, starts) == 0.0);
}

TEST_CASE("a blind full-forward controller hits the facing wall on schedule") {
  const World world = unit_square();
  const RobotSpec robot{};
  const CameraSpec camera{45.0, 16, 1.0};
  const NetworkSpec net{16, 8, 2};
  Genome genome;
  genome.weights = Eigen::VectorXd::Zero(genome_length(net));
  genome.weights(216) = 4.0;  // output biases pushed to the positive rail
  genome.weights(217) = 4.0;
  const TrialConfig trial{400, 0.1, 1};
  const Pose start{0.9, 0.5, 0.0};  // 0.1 m from the wall it drives at

  const NetworkParams params = decode_genome(genome, net);
  const auto records = simulate_trial(world, robot, camera, params, trial, start);
  int collision_step = -1;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].collided) {
      collision_step = static_cast<int>(i);
      break;
    }
  }
  REQUIRE(collision_step >= 0);
  CHECK(collision_step < 13);  // ceil(0.1 / (0.08 * 0.1)) with the body radius to spare
  const double fitness =
      evaluate_individual(genome, world, robot, camera, net, trial, {start});
  CHECK(fitness < 13.0 / 400.0);
  // frozen after the hit: same pose, zero reward to the end
  for (std::size_t i = static_cast<std::size_t>(collision_step); i < records.size(); ++i) {
    CHECK(records[i].collided);
    CHECK(records[i].phi == 0.0);
    CHECK(records[i].pose.x == records[static_cast<std::size_t>(collision_step)].pose.x);
  }
}

TEST_CASE("evaluate_individual matches an independent scalar re-simulation") {
  const World world = unit_square();
  const RobotSpec robot{};
  const CameraSpec camera{45.0, 16, 1.0};
  const NetworkSpec net{16, 8, 2};
  const TrialConfig trial{400, 0.1, 2};

  RngStream pose_stream(derive_key(31, 2));
  const std::vector<Pose> starts = draw_start_poses(world, robot, pose_stream, 2);

  for (std::uint64_t k = 0; k < 3; ++k) {
    RngStream genes(derive_key(31, 3, k));
    Genome genome;
    genome.weights.resize(genome_length(net));
    for (int i = 0; i < genome.weights.size(); ++i) genome.weights(i) = genes.uniform(-1.5, 1.5);

    const double fitness = evaluate_individual(genome, world, robot, camera, net, trial, starts);

    oracles::ScalarScenario scenario;
    std::vector<oracles::ScalarPose> scalar_starts;
    for (const Pose& p : starts) scalar_starts.push_back({p.x, p.y, p.heading});
    const std::vector<double> genes_flat(genome.weights.begin(), genome.weights.end());
    const double expected = oracles::scalar_fitness(genes_flat, scenario, scalar_starts);

    CHECK(std::abs(fitness - expected) <= 1e-12);
  }
}

TEST_CASE("draw_start_poses hugs a wall, heading roughly along it") {
  const World world = unit_square();
  const RobotSpec robot{};
  RngStream s(derive_key(31, 4));
  const std::vector<Pose> poses = draw_start_poses(world, robot, s, 1000);
  REQUIRE(poses.size() == 1000);
  for (const Pose& pose : poses) {
    const double c = clearance(world, pose, robot);
    CHECK(c >= 0.5 * robot.body_radius - 1e-12);
    CHECK(c <= 1.0 * robot.body_radius + 1e-12);
    CHECK(pose.heading >= -std::numbers::pi);
    CHECK(pose.heading < std::numbers::pi);
    // recover the nearest wall and check the heading is tangent give or take
    // the advertised 15 degree jitter
    double best = 1e9;
    Vec2d closest = Vec2d::Zero();
    for (const WallSegment& wall : world.walls) {
      const Vec2d point = closest_point_on_segment(pose.position(), wall.a, wall.b);
      if ((pose.position() - point).norm() < best) {
        best = (pose.position() - point).norm();
        closest = point;
      }
    }
    const Vec2d away = (pose.position() - closest).normalized();
    const double along =
        std::abs(away.x() * std::cos(pose.heading) + away.y() * std::sin(pose.heading));
    CHECK(along <= std::sin(0.2617993877991494) + 1e-12);
  }
  RngStream again(derive_key(31, 4));
  const std::vector<Pose> repeat = draw_start_poses(world, robot, again, 1000);
  for (std::size_t i = 0; i < poses.size(); ++i) {
    CHECK(poses[i].x == repeat[i].x);
    CHECK(poses[i].heading == repeat[i].heading);
  }
}

TEST_CASE("draw_start_poses fails loudly when the arena cannot fit the robot") {
  const World world = build_world(ArenaSpec{0.1, 0.1, {}});
  RobotSpec robot;
  robot.body_radius = 0.045;
  RngStream s(derive_key(31, 5));
  CHECK_THROWS_AS(draw_start_poses(world, robot, s, 1), HarnessError);
}

TEST_CASE("init_population has the right shape and range") {
  const NetworkSpec net{16, 8, 2};
  EvolutionConfig config = tiny_evolution(60, 1);
  const auto population = init_population(config, net, RngStream(derive_key(31, 6)));
  REQUIRE(population.size() == 60);
  for (const Individual& ind : population) {
    REQUIRE(ind.genome.weights.size() == 218);
    CHECK_FALSE(ind.fitness.has_value());
    CHECK(ind.genome.weights.lpNorm<Eigen::Infinity>() <= config.init_range);
  }
  // same stream id, same population
  const auto repeat = init_population(config, net, RngStream(derive_key(31, 6)));
  for (std::size_t i = 0; i < population.size(); ++i) {
    CHECK((population[i].genome.weights - repeat[i].genome.weights)
              .lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("init_range zero produces all-zero genomes") {
  const NetworkSpec net{4, 2, 2};
  EvolutionConfig config = tiny_evolution(5, 1);
  config.init_range = 0.0;
  const auto population = init_population(config, net, RngStream(derive_key(31, 7)));
  for (const Individual& ind : population) {
    CHECK(ind.genome.weights.isZero(0.0));
  }
}

TEST_CASE("next_generation with operators disabled copies top parents verbatim") {
  const NetworkSpec net{4, 2, 2};
  EvolutionConfig config;
  config.population_size = 20;
  config.generations = 1;
  config.elite_count = 1;
  config.parent_count = 5;
  config.crossover_prob = 0.0;
  config.mutation_prob = 0.0;

  auto population = init_population(config, net, RngStream(derive_key(31, 8)));
  RngStream fit(derive_key(31, 9));
  for (auto& ind : population) ind.fitness = fit.uniform01();

  // rank by fitness to find the top five genomes
  std::vector<int> order(population.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return *population[static_cast<std::size_t>(a)].fitness >
           *population[static_cast<std::size_t>(b)].fitness;
  });

  const auto offspring = next_generation(population, config, RngStream(derive_key(31, 10)));
  REQUIRE(offspring.size() == 20);
  CHECK((offspring[0].weights - population[static_cast<std::size_t>(order[0])].genome.weights)
            .lpNorm<Eigen::Infinity>() == 0.0);
  for (const Genome& child : offspring) {
    bool found = false;
    for (int p = 0; p < config.parent_count && !found; ++p) {
      found = (child.weights -
               population[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])]
                   .genome.weights)
                  .lpNorm<Eigen::Infinity>() == 0.0;
    }
    CHECK(found);
  }
}

TEST_CASE("next_generation refuses unevaluated populations") {
  const NetworkSpec net{4, 2, 2};
  EvolutionConfig config = tiny_evolution(6, 1);
  auto population = init_population(config, net, RngStream(derive_key(31, 11)));
  population[2].fitness = 0.5;  // others missing
  CHECK_THROWS_AS(next_generation(population, config, RngStream(derive_key(31, 12))),
                  HarnessError);
}

TEST_CASE("mutation magnitudes follow the half-normal mean") {
  EvolutionConfig config;
  config.population_size = 2;
  config.generations = 1;
  config.elite_count = 0;
  config.parent_count = 1;
  config.crossover_prob = 0.0;
  config.mutation_prob = 1.0;
  config.mutation_std = 0.3;

  std::vector<Individual> population(2);
  for (auto& ind : population) {
    ind.genome.weights = Eigen::VectorXd::Zero(5000);
    ind.fitness = 0.5;
  }
  const auto offspring = next_generation(population, config, RngStream(derive_key(31, 13)));
  double sum_abs = 0.0;
  int count = 0;
  for (const Genome& child : offspring) {
    sum_abs += child.weights.cwiseAbs().sum();
    count += static_cast<int>(child.weights.size());
  }
  REQUIRE(count == 10000);
  const double expected = 0.3 * std::sqrt(2.0 / std::numbers::pi);
  CHECK(sum_abs / count == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("mutation respects the gene clamp") {
  EvolutionConfig config;
  config.population_size = 2;
  config.generations = 1;
  config.elite_count = 0;
  config.parent_count = 1;
  config.crossover_prob = 0.0;
  config.mutation_prob = 1.0;
  config.mutation_std = 10.0;  // huge kicks to hit the rails often

  std::vector<Individual> population(2);
  for (auto& ind : population) {
    ind.genome.weights = Eigen::VectorXd::Zero(2000);
    ind.fitness = 0.5;
  }
  const auto offspring = next_generation(population, config, RngStream(derive_key(31, 14)));
  for (const Genome& child : offspring) {
    CHECK(child.weights.lpNorm<Eigen::Infinity>() <= 4.0);
    CHECK(child.weights.cwiseAbs().maxCoeff() == 4.0);  // the clamp actually engaged
  }
}

TEST_CASE("crossover splices a prefix of one parent onto a suffix of the other") {
  EvolutionConfig config;
  config.population_size = 8;
  config.generations = 1;
  config.elite_count = 0;
  config.parent_count = 2;
  config.crossover_prob = 1.0;
  config.mutation_prob = 0.0;

  std::vector<Individual> population(8);
  for (std::size_t i = 0; i < population.size(); ++i) {
    population[i].genome.weights = Eigen::VectorXd::Constant(50, static_cast<double>(i));
    population[i].fitness = 1.0 - 0.1 * static_cast<double>(i);
  }
  const auto offspring = next_generation(population, config, RngStream(derive_key(31, 15)));
  for (const Genome& child : offspring) {
    // parents are the constant-0 and constant-1 genomes; a one-point cross
    // yields a step from one constant to the other with a cut in [1, 49]
    const double head = child.weights(0);
    const double tail = child.weights(49);
    CHECK(((head == 0.0 && tail == 1.0) || (head == 1.0 && tail == 0.0)));
    int switches = 0;
    for (int g = 1; g < 50; ++g) {
      if (child.weights(g) != child.weights(g - 1)) ++switches;
    }
    CHECK(switches == 1);
  }
}

TEST_CASE("selection pressure drives a synthetic gene upward") {
  // fitness = mean gene value; selection alone must push the population mean up
  EvolutionConfig config;
  config.population_size = 100;
  config.generations = 1;
  config.elite_count = 1;
  config.parent_count = 20;
  config.crossover_prob = 0.5;
  config.mutation_prob = 0.2;
  config.mutation_std = 0.05;

  std::vector<Individual> population(100);
  RngStream init(derive_key(31, 16));
  for (auto& ind : population) {
    ind.genome.weights.resize(20);
    for (int g = 0; g < 20; ++g) ind.genome.weights(g) = init.uniform(-1.0, 1.0);
  }
  double previous_mean = -10.0;
  for (int gen = 0; gen < 10; ++gen) {
    double population_mean = 0.0;
    for (auto& ind : population) {
      ind.fitness = ind.genome.weights.mean();
      population_mean += *ind.fitness;
    }
    population_mean /= static_cast<double>(population.size());
    CHECK(population_mean > previous_mean);
    previous_mean = population_mean;

    const auto offspring =
        next_generation(population, config, RngStream(derive_key(31, 17, gen)));
    for (std::size_t i = 0; i < population.size(); ++i) {
      population[i].genome = offspring[i];
      population[i].fitness.reset();
    }
  }
}

TEST_CASE("run_evolution with one generation reports best >= mean") {
  ScenarioConfig scenario;
  const TrialConfig trial{50, 0.1, 1};
  const RunHistory history = run_evolution(45.0, scenario, tiny_evolution(8, 1), trial, 5);
  REQUIRE(history.stats.size() == 1);
  CHECK(history.stats[0].generation == 0);
  CHECK(history.stats[0].best_fitness >= history.stats[0].mean_fitness);
  CHECK(history.fov_deg == 45.0);
}

TEST_CASE("run_evolution is deterministic in (fov, seed)") {
  ScenarioConfig scenario;
  const TrialConfig trial{60, 0.1, 1};
  const EvolutionConfig config = tiny_evolution(10, 4);
  const RunHistory a = run_evolution(45.0, scenario, config, trial, 11);
  const RunHistory b = run_evolution(45.0, scenario, config, trial, 11);
  REQUIRE(a.stats.size() == b.stats.size());
  for (std::size_t g = 0; g < a.stats.size(); ++g) {
    CHECK(a.stats[g].best_fitness == b.stats[g].best_fitness);
    CHECK(a.stats[g].mean_fitness == b.stats[g].mean_fitness);
    CHECK((a.stats[g].best_genome.weights - b.stats[g].best_genome.weights)
              .lpNorm<Eigen::Infinity>() == 0.0);
  }
  const RunHistory c = run_evolution(45.0, scenario, config, trial, 12);
  CHECK(a.stats.back().best_fitness != c.stats.back().best_fitness);
}

TEST_CASE("run_evolution results do not depend on the worker count") {
  ScenarioConfig scenario;
  const TrialConfig trial{60, 0.1, 1};
  const EvolutionConfig config = tiny_evolution(10, 3);
  const RunHistory serial = run_evolution(45.0, scenario, config, trial, 21, 1);
  const RunHistory threaded = run_evolution(45.0, scenario, config, trial, 21, 4);
  REQUIRE(serial.stats.size() == threaded.stats.size());
  for (std::size_t g = 0; g < serial.stats.size(); ++g) {
    CHECK(serial.stats[g].best_fitness == threaded.stats[g].best_fitness);
    CHECK(serial.stats[g].mean_fitness == threaded.stats[g].mean_fitness);
  }
}

TEST_CASE("elitism with frozen start poses makes best fitness non-decreasing") {
  ScenarioConfig scenario;
  const TrialConfig trial{80, 0.1, 1};
  EvolutionConfig config = tiny_evolution(10, 30);
  config.elite_count = 1;
  const World world = build_world(scenario.arena);
  RngStream pose_stream(derive_key(31, 18));
  const std::vector<Pose> poses = draw_start_poses(world, scenario.robot, pose_stream, 1);

  const RunHistory history = run_evolution(45.0, scenario, config, trial, 31, 1, &poses);
  REQUIRE(history.stats.size() == 30);
  for (std::size_t g = 1; g < history.stats.size(); ++g) {
    CHECK(history.stats[g].best_fitness >= history.stats[g - 1].best_fitness);
  }
}

TEST_CASE("run_evolution validates the field of view") {
  ScenarioConfig scenario;
  const TrialConfig trial{10, 0.1, 1};
  CHECK_THROWS_AS(run_evolution(181.0, scenario, tiny_evolution(4, 1), trial, 1), ConfigError);
  CHECK_THROWS_AS(run_evolution(-1.0, scenario, tiny_evolution(4, 1), trial, 1), ConfigError);
}
