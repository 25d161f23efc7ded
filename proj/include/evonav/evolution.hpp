#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "evonav/arena.hpp"
#include "evonav/camera.hpp"
#include "evonav/network.hpp"
#include "evonav/rng.hpp"

namespace evonav {

struct TrialConfig {
  int steps = 400;
  double dt = 0.1;
  int starts_per_trial = 2;
};

struct EvolutionConfig {
  int population_size = 60;
  int generations = 100;
  int elite_count = 1;
  int parent_count = 15;
  double crossover_prob = 0.1;
  double mutation_prob = 0.05;   // per gene
  double mutation_std = 0.3;
  double init_range = 1.0;       // initial genes uniform in [-init_range, init_range]
  double gene_clamp = 4.0;       // mutated genes clamp to [-gene_clamp, gene_clamp]
};

// Everything that defines the task except the evolving weights.
struct ScenarioConfig {
  ArenaSpec arena;
  RobotSpec robot;
  CameraSpec camera;  // fov_deg is overridden per run by the sweep
  int hidden_units = 8;
};

struct Individual {
  Genome genome;
  std::optional<double> fitness;
};

struct GenerationStats {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  Genome best_genome;
};

struct RunHistory {
  double fov_deg = 0.0;
  std::uint64_t seed = 0;
  std::vector<GenerationStats> stats;
};

// Named sub-streams of a run seed. Keying every stream by (seed, role, index)
// makes results independent of evaluation order and worker count.
enum class StreamRole : std::uint64_t {
  kInitGenomes = 1,
  kStartPoses = 2,
  kBreeding = 3,
};

[[nodiscard]] RngStream role_stream(std::uint64_t seed, StreamRole role, std::uint64_t index = 0);

// Per-step reward in [0, 1]: fast, straight, and far from walls.
[[nodiscard]] double fitness_step(double v_left, double v_right, double clearance_value,
                                  const RobotSpec& spec);

struct StepRecord {
  Pose pose;
  double v_left = 0.0;
  double v_right = 0.0;
  double phi = 0.0;
  bool collided = false;
};

// Runs one controller from one start pose for trial.steps steps. After a
// collision the robot stays frozen and every remaining step scores zero.
[[nodiscard]] std::vector<StepRecord> simulate_trial(const World& world, const RobotSpec& robot,
                                                     const CameraSpec& camera,
                                                     const NetworkParams& params,
                                                     const TrialConfig& trial, const Pose& start);

// Mean per-step reward over all start poses (fitness in [0, 1]).
[[nodiscard]] double evaluate_individual(const Genome& genome, const World& world,
                                         const RobotSpec& robot, const CameraSpec& camera,
                                         const NetworkSpec& net, const TrialConfig& trial,
                                         const std::vector<Pose>& start_poses);

// Start poses hug a wall: clearance between half a body radius and one body
// radius, heading tangent to the wall give or take 15 degrees. Throws when no
// such pose exists.
[[nodiscard]] std::vector<Pose> draw_start_poses(const World& world, const RobotSpec& robot,
                                                 RngStream& stream, int count);

[[nodiscard]] std::vector<Individual> init_population(const EvolutionConfig& config,
                                                      const NetworkSpec& net,
                                                      const RngStream& stream);

// Elitism + truncation selection + one-point crossover + per-gene Gaussian
// mutation. Requires every individual to carry a fitness.
[[nodiscard]] std::vector<Genome> next_generation(const std::vector<Individual>& population,
                                                  const EvolutionConfig& config,
                                                  const RngStream& stream);

// Full generational run at one field of view. `fixed_start_poses`, when given,
// replaces the per-generation pose draw (useful for controlled experiments).
[[nodiscard]] RunHistory run_evolution(double fov_deg, const ScenarioConfig& scenario,
                                       const EvolutionConfig& evolution, const TrialConfig& trial,
                                       std::uint64_t seed, int jobs = 1,
                                       const std::vector<Pose>* fixed_start_poses = nullptr);

}  // namespace evonav
