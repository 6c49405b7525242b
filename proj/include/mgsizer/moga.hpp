#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mgsizer/dispatch.hpp"
#include "mgsizer/metrics.hpp"
#include "mgsizer/objectives.hpp"
#include "mgsizer/rng.hpp"

namespace mgsizer {

// Bit widths of the four count fields. Fields are packed from the least
// significant bit upwards in the order n_wt, n_pv, n_dg, n_es; each field's
// maximum is 2^bits - 1, so every bitstring decodes to an in-range config.
struct GenomeLayout {
  int wt_bits = 5;
  int pv_bits = 14;
  int dg_bits = 4;
  int es_bits = 8;

  int total_bits() const { return wt_bits + pv_bits + dg_bits + es_bits; }
  SizingConfig max_counts() const;
  void validate() const;
  // Throws ConfigError unless every maximum is of the form 2^k - 1.
  static GenomeLayout for_bounds(const DeviceBounds& bounds);
};

struct Chromosome {
  std::uint32_t bits = 0;
  friend auto operator<=>(const Chromosome&, const Chromosome&) = default;
};

Chromosome encode(const SizingConfig& config, const GenomeLayout& layout);
SizingConfig decode(Chromosome c, const GenomeLayout& layout);

enum class GroupFitness { mean, sum, max };

struct GaSettings {
  int pop_size = 30;
  int max_iter = 50;
  double p_c0 = 0.65;
  double p_m0 = 0.01;
  double alpha = 10.0;
  double beta = 10.0;
  int groups = 5;
  GroupFitness group_fitness = GroupFitness::mean;
  // Share of the population reserved for carried-over rank-1 individuals.
  double elite_fraction = 0.2;
  // Infeasible fitness is divided by (1 + penalty_factor * violation).
  double penalty_factor = 10.0;
  std::uint64_t seed = 1;
  // Corner for the convergence signal (largest ORA of the feasible front).
  WorstCase reference;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct Individual {
  Chromosome chromosome;
  ObjectiveVector objectives;
  int rank = 0;
  double crowding = 0.0;
  double fitness = 0.0;
};

// Feasible beats infeasible; between infeasible points the smaller violation
// wins; otherwise Pareto dominance on (cost, pec).
bool constrained_dominates(const ObjectiveVector& a, const ObjectiveVector& b);

// Fast non-dominated sorting; ranks start at 1.
std::vector<int> nondominated_sort(std::span<const ObjectiveVector> objs);

// Crowding distance within each rank; boundary points get +inf.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> objs,
                                      std::span<const int> ranks);

// 1 / (rank + 1/(2 + crowding)), divided by the infeasibility penalty. A
// rank-r point scores in (1/(r+1/2), 1/r], so lower ranks always win.
double scalar_fitness(int rank, double crowding, const ObjectiveVector& obj,
                      double penalty_factor);

// Fills rank, crowding and fitness for the whole population.
void assign_fitness(std::span<Individual> population, double penalty_factor);

// Pre-grouped hierarchical selection: individuals sorted by fitness are cut
// into equal contiguous groups, a group is drawn by roulette on its group
// fitness, then a member is drawn uniformly.
class HierarchicalSelector {
 public:
  HierarchicalSelector(std::span<const double> fitness, int groups, GroupFitness mode);

  std::size_t select_one(Rng& rng) const;
  std::pair<std::size_t, std::size_t> select_pair(Rng& rng) const;

  int group_count() const { return static_cast<int>(group_fitness_.size()); }
  std::span<const std::size_t> group(int g) const;
  double group_fitness(int g) const { return group_fitness_[static_cast<std::size_t>(g)]; }

 private:
  std::vector<std::size_t> order_;
  std::vector<double> group_fitness_;
  std::size_t group_size_ = 0;
  double total_ = 0.0;
};

// Binary tournament on (rank, crowding).
std::size_t binary_tournament(std::span<const Individual> population, Rng& rng);

struct VariationRates {
  double p_c = 0.0;
  double p_m = 0.0;
};

// Convergence-aware schedule: lg is log10 of (g + g_c).
VariationRates adaptive_probabilities(int g, int g_c, const GaSettings& s);
// Straight line from (p_c0, p_m0) at g = 1 to (p_c0/1.2, 1.2*p_m0) at g = max_iter.
VariationRates linear_probabilities(int g, const GaSettings& s);

// Single-point crossover: with probability p_c the bits at positions >= cut
// (cut uniform in [1, bits-1]) are swapped.
std::pair<Chromosome, Chromosome> crossover(Chromosome a, Chromosome b, double p_c, int bits,
                                            Rng& rng);
// Independent per-bit flips.
Chromosome mutate(Chromosome c, double p_m, int bits, Rng& rng);

using ObjectiveFunction = std::function<ObjectiveVector(const SizingConfig&)>;

// Memoizing, optionally threaded population evaluation. The objective
// function must be safe to call concurrently.
class PopulationEvaluator {
 public:
  PopulationEvaluator(ObjectiveFunction fn, GenomeLayout layout, unsigned threads);
  void evaluate(std::span<Individual> population);
  std::size_t evaluations() const { return evaluations_; }

 private:
  ObjectiveFunction fn_;
  GenomeLayout layout_;
  unsigned threads_;
  std::vector<std::pair<std::uint32_t, ObjectiveVector>> cache_;  // sorted by bits
  std::size_t evaluations_ = 0;
};

struct FrontierPoint {
  SizingConfig config;
  ObjectiveVector objectives;
};

struct ParetoFrontier {
  std::vector<FrontierPoint> points;  // cost ascending

  std::vector<ObjectivePoint> feasible_points() const;
  // O(n^2) check that no member constrained-dominates another.
  bool is_nondominated() const;
};

// Rank-1 members of a population with assigned ranks, deduplicated by
// chromosome and by objective vector, sorted by (cost, pec).
ParetoFrontier extract_frontier(std::span<const Individual> population,
                                const GenomeLayout& layout);

// Largest ORA over feasible rank-1 points (inside-corner areas positive,
// past-corner areas negated); with no feasible point, -1e18 minus the
// smallest violation.
double convergence_quality(std::span<const Individual> population, const WorstCase& w);

struct HistoryEntry {
  int iteration = 0;
  double best_fitness = 0.0;
  double p_c = 0.0;
  double p_m = 0.0;
  int stall = 0;
};

struct RunResult {
  ParetoFrontier frontier;
  std::vector<HistoryEntry> history;
  std::size_t evaluations = 0;
};

// Call counters for tests.
struct Instrumentation {
  std::size_t tournament_calls = 0;
  std::size_t hierarchical_calls = 0;
  std::size_t crossover_calls = 0;
  std::size_t mutation_calls = 0;
};

enum class Algorithm { samoga, nsga2, nsga_hs, aga };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);
inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::nsga2, Algorithm::nsga_hs,
                                               Algorithm::aga, Algorithm::samoga};

RunResult run_samoga(const GaSettings& settings, const GenomeLayout& layout,
                     const ObjectiveFunction& objective, Instrumentation* probe = nullptr);

// NSGA2: binary tournament, constant rates, (mu + lambda) survival by rank
// and crowding. NSGA_HS swaps in hierarchical selection; AGA uses linear
// rates.
RunResult run_baseline(Algorithm variant, const GaSettings& settings, const GenomeLayout& layout,
                       const ObjectiveFunction& objective, Instrumentation* probe = nullptr);

RunResult run_algorithm(Algorithm a, const GaSettings& settings, const GenomeLayout& layout,
                        const ObjectiveFunction& objective, Instrumentation* probe = nullptr);

// solution, cost, pec, wt, dg, bess, pv
void write_frontier_csv(std::ostream& out, const ParetoFrontier& frontier);
// iteration, best_fitness, p_c, p_m
void write_history_csv(std::ostream& out, const std::vector<HistoryEntry>& history);

}  // namespace mgsizer
