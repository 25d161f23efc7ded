#include "evonav/experiments.hpp"

#include <string>

#include "evonav/parallel.hpp"

namespace evonav {

namespace {

void check_sweep(const SweepConfig& config) {
  if (config.fov_values.empty()) {
    throw ConfigError("sweep.fov_values must not be empty");
  }
  for (std::size_t i = 0; i < config.fov_values.size(); ++i) {
    const double fov = config.fov_values[i];
    if (!(fov >= 0.0) || !(fov <= 180.0)) {
      throw ConfigError("sweep.fov_values[" + std::to_string(i) + "] must be in [0, 180]");
    }
    if (i > 0 && !(config.fov_values[i - 1] < fov)) {
      throw ConfigError("sweep.fov_values must be strictly increasing");
    }
  }
  if (config.replicates < 1) {
    throw ConfigError("sweep.replicates must be >= 1");
  }
}

}  // namespace

ArenaSpec experiment_arena() {
  ArenaSpec arena;
  arena.width = 1.0;
  arena.height = 1.0;
  // A 3x3 grid of 2 cm posts (alternating horizontal/vertical slivers) on a
  // 0.25 m pitch. Post size is matched to the camera's fixed pixel budget: a
  // post at typical encounter range subtends a few degrees, so it falls
  // between rays once the field of view stretches past ~120 degrees, while a
  // mid-range field of view still resolves it in time to steer away. Lanes
  // between posts stay several robot diameters wide.
  const double half = 0.01;
  int k = 0;
  for (double cx = 0.25; cx < 0.9; cx += 0.25) {
    for (double cy = 0.25; cy < 0.9; cy += 0.25) {
      if (k++ % 2 == 0) {
        arena.extra_walls.push_back({{cx - half, cy}, {cx + half, cy}});
      } else {
        arena.extra_walls.push_back({{cx, cy - half}, {cx, cy + half}});
      }
    }
  }
  return arena;
}

// Replicate r uses the same run seed at every field of view, a paired design:
// all cells of a replicate start from the same initial population and face
// the same start-pose draws, so comparisons across the sweep axis measure the
// camera, not sampling luck. Distinct replicates stay independent.
std::uint64_t run_seed(std::uint64_t base_seed, int replicate) {
  return derive_key(base_seed, static_cast<std::uint64_t>(replicate));
}

SweepResult run_sweep(const SweepConfig& config, int jobs) {
  check_sweep(config);
  const int fov_count = static_cast<int>(config.fov_values.size());
  const int replicates = config.replicates;

  SweepResult result;
  result.fov_values = config.fov_values;
  result.runs.assign(static_cast<std::size_t>(fov_count),
                     std::vector<RunHistory>(static_cast<std::size_t>(replicates)));

  // one work item per (fov, replicate) cell; each cell runs serially inside
  parallel_for(fov_count * replicates, jobs, [&](int cell) {
    const int f = cell / replicates;
    const int r = cell % replicates;
    const std::uint64_t seed = run_seed(config.base_seed, r);
    result.runs[static_cast<std::size_t>(f)][static_cast<std::size_t>(r)] = run_evolution(
        config.fov_values[static_cast<std::size_t>(f)], config.scenario, config.evolution,
        config.trial, seed, 1);
  });
  return result;
}

AggregateSeries aggregate_replicates(const SweepResult& result) {
  const std::size_t fov_count = result.fov_values.size();
  if (fov_count == 0 || result.runs.size() != fov_count) {
    throw HarnessError("aggregate_replicates: result shape mismatch");
  }
  const std::size_t replicates = result.runs.front().size();
  if (replicates == 0) throw HarnessError("aggregate_replicates: no replicates");
  const std::size_t generations = result.runs.front().front().stats.size();
  if (generations == 0) throw HarnessError("aggregate_replicates: empty history");

  AggregateSeries series;
  series.fov_values = result.fov_values;
  series.best = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(fov_count),
                                      static_cast<Eigen::Index>(generations));
  series.average = series.best;

  for (std::size_t f = 0; f < fov_count; ++f) {
    if (result.runs[f].size() != replicates) {
      throw HarnessError("aggregate_replicates: ragged replicate counts");
    }
    for (std::size_t r = 0; r < replicates; ++r) {
      const RunHistory& run = result.runs[f][r];
      if (run.stats.size() != generations) {
        throw HarnessError("aggregate_replicates: ragged generation counts");
      }
      for (std::size_t g = 0; g < generations; ++g) {
        series.best(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(g)) +=
            run.stats[g].best_fitness;
        series.average(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(g)) +=
            run.stats[g].mean_fitness;
      }
    }
  }
  series.best /= static_cast<double>(replicates);
  series.average /= static_cast<double>(replicates);
  return series;
}

const Eigen::MatrixXd& series_matrix(const AggregateSeries& series, SeriesChoice choice) {
  return choice == SeriesChoice::kBest ? series.best : series.average;
}

double best_fov(const AggregateSeries& series, SeriesChoice choice) {
  const Eigen::MatrixXd& matrix = series_matrix(series, choice);
  if (series.fov_values.empty() || matrix.rows() == 0 || matrix.cols() == 0) {
    throw HarnessError("best_fov: empty series");
  }
  const Eigen::Index last = matrix.cols() - 1;
  Eigen::Index winner = 0;
  for (Eigen::Index f = 1; f < matrix.rows(); ++f) {
    if (matrix(f, last) > matrix(winner, last)) winner = f;  // ties keep the smaller fov
  }
  return series.fov_values[static_cast<std::size_t>(winner)];
}

}  // namespace evonav
