#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgsizer/metrics.hpp"
#include "mgsizer/moga.hpp"
#include "mgsizer/objectives.hpp"
#include "mgsizer/scenarios.hpp"

namespace mgsizer {

inline constexpr int kSchemaVersion = 1;

struct ScenarioConfig {
  ScenarioPipelineSettings pipeline = ScenarioPipelineSettings::defaults();
  std::vector<std::size_t> subsample_sizes{10, 20, 30};
  // Scenarios used by optimize/evaluate: 0 means the full reduced set,
  // anything else a seeded subsample of that size.
  std::size_t active = 0;
  // Optional scenario CSV replacing the generated set.
  std::string file;
};

struct MetricsConfig {
  WorstCase worst;
  double cost_gap = 1e5;  // $
  double pec_gap = 2e4;   // kg
};

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 1;
  ModelParams model;
  GaSettings ga;
  Algorithm algorithm = Algorithm::samoga;
  ScenarioConfig scenarios;
  MetricsConfig metrics;
  int repetitions = 5;
  std::string output_dir = "out";

  // Cross-block checks on top of every block's own invariants.
  void validate() const;
};

// Missing keys take their defaults; unknown keys, wrong types and failed
// invariants throw ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);

}  // namespace mgsizer
