#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "evonav/experiments.hpp"
#include "evonav/network.hpp"

namespace evonav {

// Canonical number rendering for all CSV output: shortest form at 9
// significant digits. Stable across runs, platforms, and thread counts.
[[nodiscard]] std::string format_number(double value);

void write_history_csv(const std::filesystem::path& path, const SweepResult& result);

// history.csv contents, regrouped per fov value: matrices are
// replicate x generation.
struct HistoryTable {
  std::vector<double> fov_values;
  int replicates = 0;
  int generations = 0;
  std::vector<Eigen::MatrixXd> best;
  std::vector<Eigen::MatrixXd> average;
};

[[nodiscard]] HistoryTable read_history_csv(const std::filesystem::path& path);

[[nodiscard]] AggregateSeries aggregate_history(const HistoryTable& table);

void write_summary_csv(const std::filesystem::path& path, const AggregateSeries& series,
                       double tol = 0.05);

void write_heatmap_csv(const std::filesystem::path& path, const AggregateSeries& series,
                       SeriesChoice choice);

// Shared tail of `sweep` and `report`: read a history CSV back and derive
// summary.csv, heatmap_best.csv and heatmap_avg.csv from it. Routing both
// commands through the same reader keeps their outputs byte-identical.
AggregateSeries report_from_history(const std::filesystem::path& history_path,
                                    const std::filesystem::path& out_dir, double tol = 0.05);

void write_genome_json(const std::filesystem::path& path, const Genome& genome,
                       const NetworkSpec& spec, std::optional<double> fitness,
                       std::optional<double> fov_deg);

struct GenomeFile {
  Genome genome;
  NetworkSpec spec;
  std::optional<double> fitness;
  std::optional<double> fov_deg;
};

[[nodiscard]] GenomeFile read_genome_json(const std::filesystem::path& path);

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<StepRecord>& records);

void write_manifest(const std::filesystem::path& path, const nlohmann::json& config_snapshot,
                    std::uint64_t base_seed, std::string_view command);

}  // namespace evonav
