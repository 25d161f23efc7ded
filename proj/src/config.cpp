#include "evonav/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "evonav/errors.hpp"

namespace evonav {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("config: unknown key \"" + path + it.key() + "\"");
    }
  }
}

const json* find_object(const json& root, const char* name) {
  auto it = root.find(name);
  if (it == root.end()) return nullptr;
  if (!it->is_object()) {
    throw ConfigError("config: \"" + std::string(name) + "\" must be an object");
  }
  return &*it;
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) {
    throw ConfigError("config: \"" + path + key + "\" must be a number");
  }
  return it->get<double>();
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) {
    throw ConfigError("config: \"" + path + key + "\" must be an integer");
  }
  return it->get<int>();
}

}  // namespace

AppConfig default_config() {
  AppConfig config;
  for (int fov = 0; fov <= 180; fov += 2) {
    config.sweep_fovs.push_back(static_cast<double>(fov));
  }
  return config;
}

void validate_config(const AppConfig& config) {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(config.arena.width)) throw ConfigError("config: \"arena.width\" must be > 0");
  if (!positive(config.arena.height)) throw ConfigError("config: \"arena.height\" must be > 0");
  if (!positive(config.robot.body_radius)) {
    throw ConfigError("config: \"robot.body_radius\" must be > 0");
  }
  if (!positive(config.robot.axle_track)) {
    throw ConfigError("config: \"robot.axle_track\" must be > 0");
  }
  if (!positive(config.robot.max_wheel_speed)) {
    throw ConfigError("config: \"robot.max_wheel_speed\" must be > 0");
  }
  if (!(config.camera.fov_deg >= 0.0 && config.camera.fov_deg <= 180.0)) {
    throw ConfigError("config: \"camera.fov_deg\" must be in [0, 180]");
  }
  if (config.camera.pixel_count < 1) {
    throw ConfigError("config: \"camera.pixel_count\" must be >= 1");
  }
  if (!positive(config.camera.max_range)) {
    throw ConfigError("config: \"camera.max_range\" must be > 0");
  }
  if (config.hidden_units < 1) throw ConfigError("config: \"network.n_hidden\" must be >= 1");
  if (config.trial.steps < 1) throw ConfigError("config: \"trial.steps\" must be >= 1");
  if (!positive(config.trial.dt)) throw ConfigError("config: \"trial.dt\" must be > 0");
  if (config.trial.starts_per_trial < 1) {
    throw ConfigError("config: \"trial.starts_per_trial\" must be >= 1");
  }
  const EvolutionConfig& evo = config.evolution;
  if (evo.population_size < 1) {
    throw ConfigError("config: \"evolution.population_size\" must be >= 1");
  }
  if (evo.generations < 1) throw ConfigError("config: \"evolution.generations\" must be >= 1");
  if (evo.elite_count < 0) throw ConfigError("config: \"evolution.elite_count\" must be >= 0");
  if (evo.parent_count <= evo.elite_count) {
    throw ConfigError("config: \"evolution.parent_count\" must exceed elite_count");
  }
  if (evo.parent_count > evo.population_size) {
    throw ConfigError("config: \"evolution.parent_count\" must not exceed population_size");
  }
  if (evo.crossover_prob < 0.0 || evo.crossover_prob > 1.0) {
    throw ConfigError("config: \"evolution.crossover_prob\" must be in [0, 1]");
  }
  if (evo.mutation_prob < 0.0 || evo.mutation_prob > 1.0) {
    throw ConfigError("config: \"evolution.mutation_prob\" must be in [0, 1]");
  }
  if (!(evo.mutation_std >= 0.0)) {
    throw ConfigError("config: \"evolution.mutation_std\" must be >= 0");
  }
  if (evo.init_range < 0.0 || evo.init_range > evo.gene_clamp) {
    throw ConfigError("config: \"evolution.init_range\" must be in [0, 4]");
  }
  if (config.sweep_fovs.empty()) {
    throw ConfigError("config: \"sweep.fov_values\" must not be empty");
  }
  for (std::size_t i = 0; i < config.sweep_fovs.size(); ++i) {
    const double fov = config.sweep_fovs[i];
    if (!(fov >= 0.0 && fov <= 180.0)) {
      throw ConfigError("config: \"sweep.fov_values\" entries must be in [0, 180]");
    }
    if (i > 0 && !(config.sweep_fovs[i - 1] < fov)) {
      throw ConfigError("config: \"sweep.fov_values\" must be strictly increasing");
    }
  }
  if (config.sweep_replicates < 1) {
    throw ConfigError("config: \"sweep.replicates\" must be >= 1");
  }
  // runs wall-placement checks (zero length, outside the rectangle, ...)
  static_cast<void>(build_world(config.arena));
}

AppConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config: ") + err.what());
  }
  if (!root.is_object()) {
    throw ConfigError("config: top level must be a JSON object");
  }
  reject_unknown_keys(root, "", {"arena", "robot", "camera", "network", "trial", "evolution",
                                 "sweep"});

  AppConfig config = default_config();

  if (const json* arena = find_object(root, "arena")) {
    reject_unknown_keys(*arena, "arena.", {"width", "height", "extra_walls"});
    config.arena.width = get_number(*arena, "arena.", "width", config.arena.width);
    config.arena.height = get_number(*arena, "arena.", "height", config.arena.height);
    if (auto it = arena->find("extra_walls"); it != arena->end()) {
      if (!it->is_array()) {
        throw ConfigError("config: \"arena.extra_walls\" must be an array");
      }
      for (std::size_t i = 0; i < it->size(); ++i) {
        const json& entry = (*it)[i];
        const std::string path = "arena.extra_walls[" + std::to_string(i) + "].";
        if (!entry.is_object()) {
          throw ConfigError("config: \"arena.extra_walls\" entries must be objects");
        }
        reject_unknown_keys(entry, path, {"x1", "y1", "x2", "y2"});
        WallSegment seg;
        const auto coord = [&](const char* key) {
          auto field = entry.find(key);
          if (field == entry.end() || !field->is_number()) {
            throw ConfigError("config: \"" + path + key + "\" must be a number");
          }
          return field->get<double>();
        };
        seg.a = Vec2d(coord("x1"), coord("y1"));
        seg.b = Vec2d(coord("x2"), coord("y2"));
        config.arena.extra_walls.push_back(seg);
      }
    }
  }
  if (const json* robot = find_object(root, "robot")) {
    reject_unknown_keys(*robot, "robot.", {"body_radius", "axle_track", "max_wheel_speed"});
    config.robot.body_radius =
        get_number(*robot, "robot.", "body_radius", config.robot.body_radius);
    config.robot.axle_track = get_number(*robot, "robot.", "axle_track", config.robot.axle_track);
    config.robot.max_wheel_speed =
        get_number(*robot, "robot.", "max_wheel_speed", config.robot.max_wheel_speed);
  }
  if (const json* camera = find_object(root, "camera")) {
    reject_unknown_keys(*camera, "camera.", {"fov_deg", "pixel_count", "max_range"});
    config.camera.fov_deg = get_number(*camera, "camera.", "fov_deg", config.camera.fov_deg);
    config.camera.pixel_count =
        get_int(*camera, "camera.", "pixel_count", config.camera.pixel_count);
    config.camera.max_range = get_number(*camera, "camera.", "max_range", config.camera.max_range);
  }
  if (const json* network = find_object(root, "network")) {
    reject_unknown_keys(*network, "network.", {"n_hidden"});
    config.hidden_units = get_int(*network, "network.", "n_hidden", config.hidden_units);
  }
  if (const json* trial = find_object(root, "trial")) {
    reject_unknown_keys(*trial, "trial.", {"steps", "dt", "starts_per_trial"});
    config.trial.steps = get_int(*trial, "trial.", "steps", config.trial.steps);
    config.trial.dt = get_number(*trial, "trial.", "dt", config.trial.dt);
    config.trial.starts_per_trial =
        get_int(*trial, "trial.", "starts_per_trial", config.trial.starts_per_trial);
  }
  if (const json* evolution = find_object(root, "evolution")) {
    reject_unknown_keys(*evolution, "evolution.",
                        {"population_size", "generations", "elite_count", "parent_count",
                         "crossover_prob", "mutation_prob", "mutation_std", "init_range"});
    EvolutionConfig& evo = config.evolution;
    evo.population_size =
        get_int(*evolution, "evolution.", "population_size", evo.population_size);
    evo.generations = get_int(*evolution, "evolution.", "generations", evo.generations);
    evo.elite_count = get_int(*evolution, "evolution.", "elite_count", evo.elite_count);
    evo.parent_count = get_int(*evolution, "evolution.", "parent_count", evo.parent_count);
    evo.crossover_prob =
        get_number(*evolution, "evolution.", "crossover_prob", evo.crossover_prob);
    evo.mutation_prob = get_number(*evolution, "evolution.", "mutation_prob", evo.mutation_prob);
    evo.mutation_std = get_number(*evolution, "evolution.", "mutation_std", evo.mutation_std);
    evo.init_range = get_number(*evolution, "evolution.", "init_range", evo.init_range);
  }
  if (const json* sweep = find_object(root, "sweep")) {
    reject_unknown_keys(*sweep, "sweep.", {"fov_values", "replicates", "base_seed"});
    if (auto it = sweep->find("fov_values"); it != sweep->end()) {
      if (!it->is_array() || it->empty()) {
        throw ConfigError("config: \"sweep.fov_values\" must be a non-empty array");
      }
      config.sweep_fovs.clear();
      for (const json& value : *it) {
        if (!value.is_number()) {
          throw ConfigError("config: \"sweep.fov_values\" entries must be numbers");
        }
        config.sweep_fovs.push_back(value.get<double>());
      }
    }
    config.sweep_replicates = get_int(*sweep, "sweep.", "replicates", config.sweep_replicates);
    if (auto it = sweep->find("base_seed"); it != sweep->end()) {
      if (!it->is_number_integer() ||
          (!it->is_number_unsigned() && it->get<long long>() < 0)) {
        throw ConfigError("config: \"sweep.base_seed\" must be a non-negative integer");
      }
      config.sweep_base_seed = it->get<std::uint64_t>();
    }
  }

  validate_config(config);
  return config;
}

AppConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

nlohmann::json config_to_json(const AppConfig& config) {
  json walls = json::array();
  for (const WallSegment& seg : config.arena.extra_walls) {
    walls.push_back({{"x1", seg.a.x()}, {"y1", seg.a.y()}, {"x2", seg.b.x()}, {"y2", seg.b.y()}});
  }
  json j;
  j["arena"] = {{"width", config.arena.width},
                {"height", config.arena.height},
                {"extra_walls", walls}};
  j["robot"] = {{"body_radius", config.robot.body_radius},
                {"axle_track", config.robot.axle_track},
                {"max_wheel_speed", config.robot.max_wheel_speed}};
  j["camera"] = {{"fov_deg", config.camera.fov_deg},
                 {"pixel_count", config.camera.pixel_count},
                 {"max_range", config.camera.max_range}};
  j["network"] = {{"n_hidden", config.hidden_units}};
  j["trial"] = {{"steps", config.trial.steps},
                {"dt", config.trial.dt},
                {"starts_per_trial", config.trial.starts_per_trial}};
  j["evolution"] = {{"population_size", config.evolution.population_size},
                    {"generations", config.evolution.generations},
                    {"elite_count", config.evolution.elite_count},
                    {"parent_count", config.evolution.parent_count},
                    {"crossover_prob", config.evolution.crossover_prob},
                    {"mutation_prob", config.evolution.mutation_prob},
                    {"mutation_std", config.evolution.mutation_std},
                    {"init_range", config.evolution.init_range}};
  j["sweep"] = {{"fov_values", config.sweep_fovs}, {"replicates", config.sweep_replicates}};
  if (config.sweep_base_seed) {
    j["sweep"]["base_seed"] = *config.sweep_base_seed;
  }
  return j;
}

ScenarioConfig scenario_from(const AppConfig& config) {
  ScenarioConfig scenario;
  scenario.arena = config.arena;
  scenario.robot = config.robot;
  scenario.camera = config.camera;
  scenario.hidden_units = config.hidden_units;
  return scenario;
}

}  // namespace evonav
