#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "mgsizer/device_models.hpp"

namespace mgsizer {

// Hourly magnitudes (kW per device for generation, aggregate kW for load).
using Profile = std::vector<double>;

inline constexpr std::size_t kHoursPerDay = 24;

struct UniformDist {
  double lower = 0.0;
  double upper = 1.0;
};

struct TruncatedNormalDist {
  double mean = 0.0;
  double sd = 1.0;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

using MarginalSpec = std::variant<UniformDist, TruncatedNormalDist>;

// Inverse CDF of a marginal at u in [0, 1). Zero-variance marginals return
// their location (clamped to the support).
double marginal_quantile(const MarginalSpec& spec, double u);

// Latin hypercube sample: n rows, one column per marginal. Each column puts
// exactly one row in each of the n equal-probability strata.
std::vector<std::vector<double>> lhs_sample(std::span<const MarginalSpec> dims, std::size_t n,
                                            std::uint64_t seed);

struct Clustering {
  std::vector<Profile> centroids;
  std::vector<double> probabilities;
  std::vector<std::size_t> assignment;  // sample -> centroid index
  std::vector<double> sse_history;      // within-cluster SSE after each Lloyd pass
  int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding. Centroids are returned ordered
// by ascending total (sum over the profile); ties keep seeding order.
Clustering kmeans_reduce(std::span<const Profile> samples, std::size_t k, std::uint64_t seed,
                         int max_iterations = 300);

struct Scenario {
  Profile wt;    // kW per turbine
  Profile pv;    // kW per panel
  Profile load;  // kW aggregate
  double probability = 0.0;
};

struct ScenarioSet {
  std::vector<Scenario> scenarios;
  std::uint64_t seed = 0;

  std::size_t size() const { return scenarios.size(); }
  std::size_t horizon() const { return scenarios.empty() ? 0 : scenarios.front().load.size(); }
  double probability_sum() const;
  // Throws ConfigError on empty sets, ragged profiles, negative values or a
  // probability sum off by more than 1e-9.
  void validate() const;
};

struct MarginalScenarios {
  std::vector<Profile> profiles;
  std::vector<double> probabilities;
};

// Cartesian product of three reduced marginals; probabilities multiply.
ScenarioSet build_scenario_set(const MarginalScenarios& wt, const MarginalScenarios& pv,
                               const MarginalScenarios& load);

// m scenarios without replacement (kept in original order), renormalized.
ScenarioSet subsample(const ScenarioSet& set, std::size_t m, std::uint64_t seed);

// Per-hour distribution templates for the generation pipeline.
struct ScenarioPipelineSettings {
  std::size_t samples = 500;
  std::size_t clusters = 5;
  std::vector<TruncatedNormalDist> wind_speed;   // m/s
  std::vector<TruncatedNormalDist> irradiance;   // kW/m^2
  std::vector<TruncatedNormalDist> temperature;  // K
  std::vector<TruncatedNormalDist> load;         // kW

  static ScenarioPipelineSettings defaults();
  void validate() const;
};

struct ScenarioPipelineOutput {
  MarginalScenarios wt, pv, load;
  ScenarioSet full;
};

// LHS over hourly wind speed, irradiance/temperature and load, device
// models applied to the weather draws, K-means reduction per dimension,
// Cartesian combination.
ScenarioPipelineOutput generate_scenarios(const ScenarioPipelineSettings& settings,
                                          const WtParams& wt, const PvParams& pv,
                                          std::uint64_t seed);

// CSV layout: wt_00..wt_{H-1}, pv_00.., load_00.., probability.
void write_scenarios_csv(std::ostream& out, const ScenarioSet& set);
ScenarioSet read_scenarios_csv(std::istream& in);

}  // namespace mgsizer
