#pragma once

#include <filesystem>

#include <json.hpp>

#include "mgsizer/config.hpp"

namespace mgsizer {

// Seed streams derived from the experiment seed.
namespace seeds {
std::uint64_t scenarios(std::uint64_t base);
std::uint64_t subsample(std::uint64_t base, std::size_t size, int repetition = 0);
std::uint64_t ga(std::uint64_t base, int repetition = 0);
}  // namespace seeds

// The reduced scenario set: read from scenarios.file when given, generated
// otherwise.
ScenarioSet full_scenario_set(const ExperimentConfig& cfg);
// full_scenario_set narrowed to scenarios.active (0 keeps everything).
ScenarioSet active_scenario_set(const ExperimentConfig& cfg);

// Thread-safe objective closure; owns copies of its inputs.
ObjectiveFunction make_objective(const ModelParams& params, const ScenarioSet& set);

struct OptimizeReport {
  RunResult run;
  LargestOra largest;
  DiverseCount diverse;
};

// Runs one algorithm on `set` with the config's GA settings and seed.
OptimizeReport optimize(const ExperimentConfig& cfg, Algorithm algorithm, const ScenarioSet& set,
                        std::uint64_t ga_seed);

// Each command writes into `out` (created if needed) and echoes the
// effective config there as config.json.
void cmd_scenarios(const ExperimentConfig& cfg, const std::filesystem::path& out);
OptimizeReport cmd_optimize(const ExperimentConfig& cfg, Algorithm algorithm,
                            const std::filesystem::path& out);
Evaluation cmd_evaluate(const ExperimentConfig& cfg, const SizingConfig& sizing,
                        const std::filesystem::path& out);
nlohmann::json cmd_compare(const ExperimentConfig& cfg, const std::filesystem::path& out);

}  // namespace mgsizer
