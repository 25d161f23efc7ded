#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "evonav/errors.hpp"
#include "evonav/evolution.hpp"

namespace evonav {

struct SweepConfig {
  std::vector<double> fov_values;  // degrees, strictly increasing, each in [0, 180]
  int replicates = 5;
  std::uint64_t base_seed = 1;
  ScenarioConfig scenario;
  EvolutionConfig evolution;
  TrialConfig trial;
};

struct SweepResult {
  std::vector<double> fov_values;
  std::vector<std::vector<RunHistory>> runs;  // runs[fov_index][replicate]
};

// The obstacle course the shipped presets evolve in: a unit box scattered
// with thin 2 cm posts. Posts are what make the field of view matter when
// the pixel count is fixed: a narrow camera cannot see the wall it spawned
// next to, while a very wide one spreads its rays so far apart that a post
// slips between them until it is too close to dodge.
[[nodiscard]] ArenaSpec experiment_arena();

// Seed for one sweep replicate. Derived from identity, not from draw order,
// so cells can run on any number of workers in any order. Every field of
// view reuses the same replicate seeds (a paired design): differences along
// the sweep axis then reflect the camera, not initialization or pose luck.
[[nodiscard]] std::uint64_t run_seed(std::uint64_t base_seed, int replicate);

[[nodiscard]] SweepResult run_sweep(const SweepConfig& config, int jobs = 1);

// Replicate-mean fitness curves: one row per fov value, one column per generation.
struct AggregateSeries {
  std::vector<double> fov_values;
  Eigen::MatrixXd best;     // mean over replicates of per-generation best fitness
  Eigen::MatrixXd average;  // mean over replicates of per-generation mean fitness
};

[[nodiscard]] AggregateSeries aggregate_replicates(const SweepResult& result);

// First generation from which the series stays within tol * final value of
// the final value. A constant series stabilizes at 0; a series that never
// settles earlier returns its last index.
template <typename Derived>
[[nodiscard]] int stabilization_generation(const Eigen::DenseBase<Derived>& series,
                                           double tol = 0.05) {
  const Eigen::Index n = series.size();
  if (n < 1) throw DomainError("stabilization_generation: series is empty");
  const double last = static_cast<double>(series(n - 1));
  const double band = tol * std::max(std::abs(last), 1e-9);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (std::abs(static_cast<double>(series(i)) - last) > band) {
      return static_cast<int>(i) + 1;
    }
  }
  return 0;
}

enum class SeriesChoice { kBest, kAverage };

// Fov value whose final-generation fitness is highest; ties go to the
// smaller fov.
[[nodiscard]] double best_fov(const AggregateSeries& series, SeriesChoice choice);

[[nodiscard]] const Eigen::MatrixXd& series_matrix(const AggregateSeries& series,
                                                   SeriesChoice choice);

}  // namespace evonav
