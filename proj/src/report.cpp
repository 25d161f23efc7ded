#include "evonav/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "evonav/errors.hpp"
#include "evonav/version.hpp"

namespace evonav {

namespace {

using nlohmann::json;

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_double(const std::string& token, const std::string& where) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ConfigError(where + ": \"" + token + "\" is not a number");
  }
  if (used != token.size() || !std::isfinite(value)) {
    throw ConfigError(where + ": \"" + token + "\" is not a finite number");
  }
  return value;
}

int parse_index(const std::string& token, const std::string& where) {
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(token, &used);
  } catch (const std::exception&) {
    throw ConfigError(where + ": \"" + token + "\" is not an integer");
  }
  if (used != token.size() || value < 0) {
    throw ConfigError(where + ": \"" + token + "\" is not a non-negative integer");
  }
  return static_cast<int>(value);
}

constexpr const char* kHistoryHeader = "fov_deg,replicate,generation,best_fitness,mean_fitness";
constexpr const char* kSummaryHeader =
    "fov_deg,final_best_mean,final_avg_mean,stabilization_gen_best,stabilization_gen_avg";
constexpr const char* kTrajectoryHeader = "step,x,y,heading,v_left,v_right,phi,collision";

}  // namespace

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

void write_history_csv(const std::filesystem::path& path, const SweepResult& result) {
  std::ofstream out = open_for_write(path);
  out << kHistoryHeader << '\n';
  for (std::size_t f = 0; f < result.fov_values.size(); ++f) {
    const std::string fov = format_number(result.fov_values[f]);
    for (std::size_t r = 0; r < result.runs[f].size(); ++r) {
      for (const GenerationStats& stats : result.runs[f][r].stats) {
        out << fov << ',' << r << ',' << stats.generation << ','
            << format_number(stats.best_fitness) << ',' << format_number(stats.mean_fitness)
            << '\n';
      }
    }
  }
  finish_write(out, path);
}

HistoryTable read_history_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open history file: " + path.string());

  std::string line;
  if (!std::getline(in, line) || line != kHistoryHeader) {
    throw ConfigError("history row 1: expected header \"" + std::string(kHistoryHeader) + "\"");
  }

  struct Row {
    double fov;
    int replicate;
    int generation;
    double best;
    double mean;
  };
  std::vector<Row> rows;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() && in.eof()) break;  // tolerate one trailing newline
    const std::string where = "history row " + std::to_string(line_number);
    const auto fields = split_fields(line);
    if (fields.size() != 5) {
      throw ConfigError(where + ": expected 5 fields, got " + std::to_string(fields.size()));
    }
    Row row;
    row.fov = parse_double(fields[0], where);
    row.replicate = parse_index(fields[1], where);
    row.generation = parse_index(fields[2], where);
    row.best = parse_double(fields[3], where);
    row.mean = parse_double(fields[4], where);
    if (row.fov < 0.0 || row.fov > 180.0) {
      throw ConfigError(where + ": fov_deg out of [0, 180]");
    }
    if (row.best < 0.0 || row.best > 1.0 || row.mean < 0.0 || row.mean > 1.0) {
      throw ConfigError(where + ": fitness out of [0, 1]");
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw ConfigError("history contains no data rows");

  std::vector<double> fovs;
  int replicates = 0;
  int generations = 0;
  for (const Row& row : rows) {
    if (std::find(fovs.begin(), fovs.end(), row.fov) == fovs.end()) fovs.push_back(row.fov);
    replicates = std::max(replicates, row.replicate + 1);
    generations = std::max(generations, row.generation + 1);
  }
  std::sort(fovs.begin(), fovs.end());

  std::map<double, std::size_t> fov_index;
  for (std::size_t f = 0; f < fovs.size(); ++f) fov_index[fovs[f]] = f;

  HistoryTable table;
  table.fov_values = fovs;
  table.replicates = replicates;
  table.generations = generations;
  table.best.assign(fovs.size(), Eigen::MatrixXd::Zero(replicates, generations));
  table.average.assign(fovs.size(), Eigen::MatrixXd::Zero(replicates, generations));
  std::vector<Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>> seen(
      fovs.size(),
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(replicates, generations,
                                                                    false));
  for (const Row& row : rows) {
    const std::size_t f = fov_index.at(row.fov);
    if (seen[f](row.replicate, row.generation)) {
      throw ConfigError("history: duplicate cell (fov " + format_number(row.fov) +
                        ", replicate " + std::to_string(row.replicate) + ", generation " +
                        std::to_string(row.generation) + ")");
    }
    seen[f](row.replicate, row.generation) = true;
    table.best[f](row.replicate, row.generation) = row.best;
    table.average[f](row.replicate, row.generation) = row.mean;
  }
  for (std::size_t f = 0; f < fovs.size(); ++f) {
    if (!seen[f].all()) {
      throw ConfigError("history: missing cells for fov " + format_number(fovs[f]) +
                        "; every (replicate, generation) pair must appear exactly once");
    }
  }
  return table;
}

AggregateSeries aggregate_history(const HistoryTable& table) {
  if (table.fov_values.empty() || table.replicates < 1 || table.generations < 1) {
    throw HarnessError("aggregate_history: empty table");
  }
  AggregateSeries series;
  series.fov_values = table.fov_values;
  const Eigen::Index fov_count = static_cast<Eigen::Index>(table.fov_values.size());
  series.best.resize(fov_count, table.generations);
  series.average.resize(fov_count, table.generations);
  for (Eigen::Index f = 0; f < fov_count; ++f) {
    series.best.row(f) = table.best[static_cast<std::size_t>(f)].colwise().mean();
    series.average.row(f) = table.average[static_cast<std::size_t>(f)].colwise().mean();
  }
  return series;
}

void write_summary_csv(const std::filesystem::path& path, const AggregateSeries& series,
                       double tol) {
  std::ofstream out = open_for_write(path);
  out << kSummaryHeader << '\n';
  const Eigen::Index last = series.best.cols() - 1;
  for (std::size_t f = 0; f < series.fov_values.size(); ++f) {
    const Eigen::Index row = static_cast<Eigen::Index>(f);
    out << format_number(series.fov_values[f]) << ','
        << format_number(series.best(row, last)) << ','
        << format_number(series.average(row, last)) << ','
        << stabilization_generation(series.best.row(row), tol) << ','
        << stabilization_generation(series.average.row(row), tol) << '\n';
  }
  finish_write(out, path);
}

void write_heatmap_csv(const std::filesystem::path& path, const AggregateSeries& series,
                       SeriesChoice choice) {
  const Eigen::MatrixXd& matrix = series_matrix(series, choice);
  std::ofstream out = open_for_write(path);
  out << "fov_deg";
  for (Eigen::Index g = 0; g < matrix.cols(); ++g) out << ',' << g;
  out << '\n';
  for (std::size_t f = 0; f < series.fov_values.size(); ++f) {
    out << format_number(series.fov_values[f]);
    for (Eigen::Index g = 0; g < matrix.cols(); ++g) {
      out << ',' << format_number(matrix(static_cast<Eigen::Index>(f), g));
    }
    out << '\n';
  }
  finish_write(out, path);
}

AggregateSeries report_from_history(const std::filesystem::path& history_path,
                                    const std::filesystem::path& out_dir, double tol) {
  const HistoryTable table = read_history_csv(history_path);
  const AggregateSeries series = aggregate_history(table);
  write_summary_csv(out_dir / "summary.csv", series, tol);
  write_heatmap_csv(out_dir / "heatmap_best.csv", series, SeriesChoice::kBest);
  write_heatmap_csv(out_dir / "heatmap_avg.csv", series, SeriesChoice::kAverage);
  return series;
}

void write_genome_json(const std::filesystem::path& path, const Genome& genome,
                       const NetworkSpec& spec, std::optional<double> fitness,
                       std::optional<double> fov_deg) {
  if (genome.weights.size() != genome_length(spec)) {
    throw CodecError("write_genome_json: genome does not match spec");
  }
  json j;
  j["spec"] = {{"n_inputs", spec.n_inputs},
               {"n_hidden", spec.n_hidden},
               {"n_outputs", spec.n_outputs}};
  j["weights"] = std::vector<double>(genome.weights.begin(), genome.weights.end());
  j["fitness"] = fitness ? json(*fitness) : json(nullptr);
  j["fov_deg"] = fov_deg ? json(*fov_deg) : json(nullptr);
  std::ofstream out = open_for_write(path);
  out << j.dump(2) << '\n';
  finish_write(out, path);
}

GenomeFile read_genome_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open genome file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("genome file: ") + err.what());
  }
  if (!j.is_object()) throw ConfigError("genome file: top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key != "spec" && key != "weights" && key != "fitness" && key != "fov_deg") {
      throw ConfigError("genome file: unknown key \"" + key + "\"");
    }
  }
  if (!j.contains("spec") || !j["spec"].is_object()) {
    throw ConfigError("genome file: missing \"spec\" object");
  }
  const json& spec_json = j["spec"];
  for (auto it = spec_json.begin(); it != spec_json.end(); ++it) {
    const std::string& key = it.key();
    if (key != "n_inputs" && key != "n_hidden" && key != "n_outputs") {
      throw ConfigError("genome file: unknown key \"spec." + key + "\"");
    }
  }
  const auto spec_int = [&](const char* key) {
    if (!spec_json.contains(key) || !spec_json[key].is_number_integer()) {
      throw ConfigError(std::string("genome file: \"spec.") + key + "\" must be an integer");
    }
    return spec_json[key].get<int>();
  };
  GenomeFile file;
  file.spec.n_inputs = spec_int("n_inputs");
  file.spec.n_hidden = spec_int("n_hidden");
  file.spec.n_outputs = spec_int("n_outputs");
  const int expected = genome_length(file.spec);  // validates the spec itself

  if (!j.contains("weights") || !j["weights"].is_array()) {
    throw ConfigError("genome file: missing \"weights\" array");
  }
  const json& weights = j["weights"];
  if (static_cast<int>(weights.size()) != expected) {
    throw CodecError("genome file: expected " + std::to_string(expected) + " weights, got " +
                     std::to_string(weights.size()));
  }
  file.genome.weights.resize(expected);
  for (int i = 0; i < expected; ++i) {
    if (!weights[static_cast<std::size_t>(i)].is_number()) {
      throw ConfigError("genome file: weights[" + std::to_string(i) + "] is not a number");
    }
    const double w = weights[static_cast<std::size_t>(i)].get<double>();
    if (!std::isfinite(w) || std::abs(w) > 4.0) {
      throw ConfigError("genome file: weights[" + std::to_string(i) + "] out of [-4, 4]");
    }
    file.genome.weights(i) = w;
  }
  if (j.contains("fitness") && !j["fitness"].is_null()) {
    if (!j["fitness"].is_number()) throw ConfigError("genome file: \"fitness\" must be a number");
    file.fitness = j["fitness"].get<double>();
  }
  if (j.contains("fov_deg") && !j["fov_deg"].is_null()) {
    if (!j["fov_deg"].is_number()) throw ConfigError("genome file: \"fov_deg\" must be a number");
    file.fov_deg = j["fov_deg"].get<double>();
  }
  return file;
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<StepRecord>& records) {
  std::ofstream out = open_for_write(path);
  out << kTrajectoryHeader << '\n';
  for (std::size_t i = 0; i < records.size(); ++i) {
    const StepRecord& rec = records[i];
    out << i << ',' << format_number(rec.pose.x) << ',' << format_number(rec.pose.y) << ','
        << format_number(rec.pose.heading) << ',' << format_number(rec.v_left) << ','
        << format_number(rec.v_right) << ',' << format_number(rec.phi) << ','
        << (rec.collided ? 1 : 0) << '\n';
  }
  finish_write(out, path);
}

void write_manifest(const std::filesystem::path& path, const nlohmann::json& config_snapshot,
                    std::uint64_t base_seed, std::string_view command) {
  char stamp[32];
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &utc);

  json j;
  j["artifact_version"] = kVersion;
  j["command"] = std::string(command);
  j["base_seed"] = base_seed;
  j["created_utc"] = stamp;
  j["config"] = config_snapshot;
  std::ofstream out = open_for_write(path);
  out << j.dump(2) << '\n';
  finish_write(out, path);
}

}  // namespace evonav
