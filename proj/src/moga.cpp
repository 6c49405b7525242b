#include "mgsizer/moga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <thread>

#include "mgsizer/csv.hpp"
#include "mgsizer/errors.hpp"

namespace mgsizer {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Seed streams; selection, crossover and mutation never share a generator.
enum Stream : std::uint64_t { kInit = 11, kSelection = 12, kCrossover = 13, kMutation = 14 };

std::uint32_t field_mask(int bits) { return bits >= 32 ? ~0u : ((1u << bits) - 1u); }

int bits_for(int max_count, const char* name) {
  const auto m = static_cast<std::uint64_t>(max_count) + 1;
  if (max_count < 0 || (m & (m - 1)) != 0)
    throw ConfigError(std::string("bounds: ") + name + " must be 2^k - 1 to be bit-encoded");
  int bits = 0;
  while ((std::uint64_t{1} << bits) < m) ++bits;
  return bits;
}

bool pareto_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  return a.cost <= b.cost && a.pec <= b.pec && (a.cost < b.cost || a.pec < b.pec);
}

std::vector<ObjectiveVector> objectives_of(std::span<const Individual> pop) {
  std::vector<ObjectiveVector> out;
  out.reserve(pop.size());
  for (const auto& ind : pop) out.push_back(ind.objectives);
  return out;
}

std::vector<Individual> random_population(int n, const GenomeLayout& layout, Rng& rng) {
  std::vector<Individual> pop(static_cast<std::size_t>(n));
  const std::uint32_t mask = field_mask(layout.total_bits());
  for (auto& ind : pop) ind.chromosome.bits = static_cast<std::uint32_t>(rng.next_u64()) & mask;
  return pop;
}

struct Variation {
  Rng& crossover_rng;
  Rng& mutation_rng;
  int bits;
  Instrumentation* probe;

  std::pair<Chromosome, Chromosome> operator()(Chromosome a, Chromosome b, VariationRates r) {
    if (probe) {
      ++probe->crossover_calls;
      probe->mutation_calls += 2;
    }
    auto [c1, c2] = crossover(a, b, r.p_c, bits, crossover_rng);
    return {mutate(c1, r.p_m, bits, mutation_rng), mutate(c2, r.p_m, bits, mutation_rng)};
  }
};

// Position of the individual the elitism step must never drop.
std::size_t best_quality_index(std::span<const Individual> pop, const WorstCase& w) {
  std::size_t best = pop.size();
  double best_q = -kInf;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const auto& o = pop[i].objectives;
    if (pop[i].rank != 1 || !o.feasible) continue;
    const OraValue v = ora({o.cost, o.pec}, w);
    const double q = v.beyond_worst ? -std::abs(v.area) : v.area;
    if (q > best_q) {
      best_q = q;
      best = i;
    }
  }
  return best;
}

// Rank-1 parents that did not survive into the children, best-ORA member
// first and then by crowding, at most `cap` of them.
std::vector<Individual> select_elites(std::span<const Individual> pop,
                                      std::span<const Individual> children, std::size_t cap,
                                      const WorstCase& w) {
  auto in_children = [&](const Individual& ind) {
    return std::any_of(children.begin(), children.end(),
                       [&](const Individual& c) { return c.chromosome == ind.chromosome; });
  };
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < pop.size(); ++i)
    if (pop[i].rank == 1) front.push_back(i);
  std::stable_sort(front.begin(), front.end(), [&](std::size_t a, std::size_t b) {
    return pop[a].crowding > pop[b].crowding;
  });
  const std::size_t anchor = best_quality_index(pop, w);
  if (anchor < pop.size()) {
    auto it = std::find(front.begin(), front.end(), anchor);
    std::rotate(front.begin(), it, it + 1);
  }
  std::vector<Individual> elites;
  for (std::size_t i : front) {
    if (elites.size() >= cap) break;
    const bool dup = std::any_of(elites.begin(), elites.end(), [&](const Individual& e) {
      return e.chromosome == pop[i].chromosome;
    });
    if (!dup && !in_children(pop[i])) elites.push_back(pop[i]);
  }
  return elites;
}

void survive(std::vector<Individual>& combined, std::size_t n) {
  assign_fitness(combined, 0.0);
  std::vector<std::size_t> idx(combined.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (combined[a].rank != combined[b].rank) return combined[a].rank < combined[b].rank;
    return combined[a].crowding > combined[b].crowding;
  });
  std::vector<Individual> next;
  next.reserve(n);
  for (std::size_t k = 0; k < n; ++k) next.push_back(combined[idx[k]]);
  combined = std::move(next);
}

}  // namespace

SizingConfig GenomeLayout::max_counts() const {
  return SizingConfig{static_cast<int>(field_mask(wt_bits)), static_cast<int>(field_mask(pv_bits)),
                      static_cast<int>(field_mask(dg_bits)), static_cast<int>(field_mask(es_bits))};
}

void GenomeLayout::validate() const {
  if (wt_bits < 0 || pv_bits < 0 || dg_bits < 0 || es_bits < 0)
    throw ConfigError("genome: bit widths must be non-negative");
  if (total_bits() < 2 || total_bits() > 31)
    throw ConfigError("genome: total chromosome length must be in [2, 31] bits");
}

GenomeLayout GenomeLayout::for_bounds(const DeviceBounds& b) {
  GenomeLayout g{bits_for(b.max_wt, "max_wt"), bits_for(b.max_pv, "max_pv"),
                 bits_for(b.max_dg, "max_dg"), bits_for(b.max_es, "max_es")};
  g.validate();
  return g;
}

Chromosome encode(const SizingConfig& c, const GenomeLayout& g) {
  const SizingConfig max = g.max_counts();
  if (c.n_wt < 0 || c.n_pv < 0 || c.n_dg < 0 || c.n_es < 0 || c.n_wt > max.n_wt ||
      c.n_pv > max.n_pv || c.n_dg > max.n_dg || c.n_es > max.n_es)
    throw ConfigError("encode: config outside the genome range");
  std::uint32_t bits = static_cast<std::uint32_t>(c.n_wt);
  int shift = g.wt_bits;
  bits |= static_cast<std::uint32_t>(c.n_pv) << shift;
  shift += g.pv_bits;
  bits |= static_cast<std::uint32_t>(c.n_dg) << shift;
  shift += g.dg_bits;
  bits |= static_cast<std::uint32_t>(c.n_es) << shift;
  return Chromosome{bits};
}

SizingConfig decode(Chromosome c, const GenomeLayout& g) {
  SizingConfig out;
  std::uint32_t b = c.bits;
  out.n_wt = static_cast<int>(b & field_mask(g.wt_bits));
  b >>= g.wt_bits;
  out.n_pv = static_cast<int>(b & field_mask(g.pv_bits));
  b >>= g.pv_bits;
  out.n_dg = static_cast<int>(b & field_mask(g.dg_bits));
  b >>= g.dg_bits;
  out.n_es = static_cast<int>(b & field_mask(g.es_bits));
  return out;
}

void GaSettings::validate() const {
  if (pop_size < 2 || pop_size % 2 != 0) throw ConfigError("ga: pop_size must be even and >= 2");
  if (max_iter < 1) throw ConfigError("ga: max_iter must be >= 1");
  if (groups < 1 || pop_size % groups != 0)
    throw ConfigError("ga: groups must divide pop_size");
  if (!(p_c0 > 0.0 && p_c0 < 1.0) || !(p_m0 > 0.0 && p_m0 < 1.0))
    throw ConfigError("ga: p_c0 and p_m0 must lie in (0, 1)");
  if (!(alpha >= 0.0) || !(beta >= 0.0)) throw ConfigError("ga: alpha and beta must be >= 0");
  if (!(elite_fraction >= 0.0 && elite_fraction <= 1.0))
    throw ConfigError("ga: elite_fraction must lie in [0, 1]");
  if (!(penalty_factor >= 0.0)) throw ConfigError("ga: penalty_factor must be >= 0");
}

bool constrained_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (!a.feasible && a.violation != b.violation) return a.violation < b.violation;
  return pareto_dominates(a, b);
}

std::vector<int> nondominated_sort(std::span<const ObjectiveVector> objs) {
  const std::size_t n = objs.size();
  std::vector<int> rank(n, 0);
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<int> count(n, 0);
  std::vector<std::size_t> current;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (constrained_dominates(objs[p], objs[q])) {
        dominated[p].push_back(q);
        ++count[q];
      } else if (constrained_dominates(objs[q], objs[p])) {
        dominated[q].push_back(p);
        ++count[p];
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p)
    if (count[p] == 0) {
      rank[p] = 1;
      current.push_back(p);
    }
  int r = 1;
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t p : current)
      for (std::size_t q : dominated[p])
        if (--count[q] == 0) {
          rank[q] = r + 1;
          next.push_back(q);
        }
    ++r;
    current = std::move(next);
  }
  return rank;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> objs,
                                      std::span<const int> ranks) {
  const std::size_t n = objs.size();
  std::vector<double> cd(n, 0.0);
  const int max_rank = n ? *std::max_element(ranks.begin(), ranks.end()) : 0;
  std::vector<std::vector<std::size_t>> fronts(static_cast<std::size_t>(max_rank) + 1);
  for (std::size_t i = 0; i < n; ++i) fronts[static_cast<std::size_t>(ranks[i])].push_back(i);
  for (auto& front : fronts) {
    if (front.empty()) continue;
    if (front.size() <= 2) {
      for (auto i : front) cd[i] = kInf;
      continue;
    }
    for (int axis = 0; axis < 2; ++axis) {
      auto val = [&](std::size_t i) { return axis == 0 ? objs[i].cost : objs[i].pec; };
      std::stable_sort(front.begin(), front.end(),
                       [&](std::size_t a, std::size_t b) { return val(a) < val(b); });
      const double span = val(front.back()) - val(front.front());
      cd[front.front()] = kInf;
      cd[front.back()] = kInf;
      if (span <= 0.0) continue;
      for (std::size_t k = 1; k + 1 < front.size(); ++k)
        cd[front[k]] += (val(front[k + 1]) - val(front[k - 1])) / span;
    }
  }
  return cd;
}

double scalar_fitness(int rank, double crowding, const ObjectiveVector& obj,
                      double penalty_factor) {
  const double tiebreak = 1.0 / (2.0 + crowding);  // (0, 1/2]; 0 at the boundary
  const double base = 1.0 / (static_cast<double>(rank) + tiebreak);
  return obj.feasible ? base : base / (1.0 + penalty_factor * obj.violation);
}

void assign_fitness(std::span<Individual> pop, double penalty_factor) {
  const auto objs = objectives_of(pop);
  const auto ranks = nondominated_sort(objs);
  const auto cd = crowding_distance(objs, ranks);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    pop[i].rank = ranks[i];
    pop[i].crowding = cd[i];
    pop[i].fitness = scalar_fitness(ranks[i], cd[i], pop[i].objectives, penalty_factor);
  }
}

HierarchicalSelector::HierarchicalSelector(std::span<const double> fitness, int groups,
                                           GroupFitness mode) {
  const std::size_t n = fitness.size();
  if (groups < 1 || n == 0 || n % static_cast<std::size_t>(groups) != 0)
    throw ConfigError("hierarchical selection: groups must divide the population size");
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
  group_size_ = n / static_cast<std::size_t>(groups);
  for (int g = 0; g < groups; ++g) {
    double sum = 0.0;
    double mx = 0.0;
    for (std::size_t k = 0; k < group_size_; ++k) {
      const double f = fitness[order_[static_cast<std::size_t>(g) * group_size_ + k]];
      sum += f;
      mx = std::max(mx, f);
    }
    const double gf = mode == GroupFitness::sum    ? sum
                      : mode == GroupFitness::max ? mx
                                                  : sum / static_cast<double>(group_size_);
    group_fitness_.push_back(gf);
    total_ += gf;
  }
}

std::span<const std::size_t> HierarchicalSelector::group(int g) const {
  return std::span<const std::size_t>(order_).subspan(static_cast<std::size_t>(g) * group_size_,
                                                      group_size_);
}

std::size_t HierarchicalSelector::select_one(Rng& rng) const {
  std::size_t g = group_fitness_.size() - 1;
  if (total_ > 0.0) {
    double r = rng.uniform() * total_;
    for (std::size_t k = 0; k < group_fitness_.size(); ++k) {
      r -= group_fitness_[k];
      if (r < 0.0) {
        g = k;
        break;
      }
    }
  } else {
    g = static_cast<std::size_t>(rng.below(group_fitness_.size()));
  }
  const auto member = static_cast<std::size_t>(rng.below(group_size_));
  return order_[g * group_size_ + member];
}

std::pair<std::size_t, std::size_t> HierarchicalSelector::select_pair(Rng& rng) const {
  const std::size_t a = select_one(rng);
  const std::size_t b = select_one(rng);
  return {a, b};
}

std::size_t binary_tournament(std::span<const Individual> pop, Rng& rng) {
  const auto a = static_cast<std::size_t>(rng.below(pop.size()));
  const auto b = static_cast<std::size_t>(rng.below(pop.size()));
  const auto& x = pop[a];
  const auto& y = pop[b];
  if (x.rank != y.rank) return x.rank < y.rank ? a : b;
  if (x.crowding != y.crowding) return x.crowding > y.crowding ? a : b;
  return std::min(a, b);
}

VariationRates adaptive_probabilities(int g, int g_c, const GaSettings& s) {
  const double lg = std::log10(static_cast<double>(std::max(1, g + g_c)));
  const double ratio = lg / static_cast<double>(s.max_iter);
  VariationRates r{s.p_c0 / (1.0 + s.alpha * ratio), s.p_m0 * (1.0 + s.beta * ratio)};
  r.p_c = std::clamp(r.p_c, std::numeric_limits<double>::min(), 1.0);
  r.p_m = std::clamp(r.p_m, std::numeric_limits<double>::min(), 1.0);
  return r;
}

VariationRates linear_probabilities(int g, const GaSettings& s) {
  const double frac =
      s.max_iter > 1 ? static_cast<double>(std::clamp(g, 1, s.max_iter) - 1) / (s.max_iter - 1)
                     : 0.0;
  const double pc_end = s.p_c0 / 1.2;
  const double pm_end = std::min(1.0, s.p_m0 * 1.2);
  return VariationRates{s.p_c0 + frac * (pc_end - s.p_c0), s.p_m0 + frac * (pm_end - s.p_m0)};
}

std::pair<Chromosome, Chromosome> crossover(Chromosome a, Chromosome b, double p_c, int bits,
                                            Rng& rng) {
  if (bits < 2 || !rng.bernoulli(p_c)) return {a, b};
  const int cut = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(bits - 1)));
  const std::uint32_t tail = field_mask(bits) & ~field_mask(cut);
  return {Chromosome{(a.bits & ~tail) | (b.bits & tail)},
          Chromosome{(b.bits & ~tail) | (a.bits & tail)}};
}

Chromosome mutate(Chromosome c, double p_m, int bits, Rng& rng) {
  for (int i = 0; i < bits; ++i)
    if (rng.bernoulli(p_m)) c.bits ^= (1u << i);
  return c;
}

PopulationEvaluator::PopulationEvaluator(ObjectiveFunction fn, GenomeLayout layout,
                                         unsigned threads)
    : fn_(std::move(fn)), layout_(layout), threads_(threads) {
  if (threads_ == 0) threads_ = std::max(1u, std::thread::hardware_concurrency());
}

void PopulationEvaluator::evaluate(std::span<Individual> pop) {
  auto lookup = [&](std::uint32_t bits) {
    auto it = std::lower_bound(cache_.begin(), cache_.end(), bits,
                               [](const auto& e, std::uint32_t b) { return e.first < b; });
    return (it != cache_.end() && it->first == bits) ? &it->second : nullptr;
  };
  std::vector<std::uint32_t> todo;
  for (const auto& ind : pop)
    if (!lookup(ind.chromosome.bits)) todo.push_back(ind.chromosome.bits);
  std::sort(todo.begin(), todo.end());
  todo.erase(std::unique(todo.begin(), todo.end()), todo.end());

  std::vector<ObjectiveVector> results(todo.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) results[i] = fn_(decode(Chromosome{todo[i]}, layout_));
  };
  const std::size_t workers = std::min<std::size_t>(threads_, todo.size());
  if (workers <= 1) {
    work(0, todo.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (todo.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t b = w * chunk;
      const std::size_t e = std::min(todo.size(), b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
  }
  evaluations_ += todo.size();
  for (std::size_t i = 0; i < todo.size(); ++i) cache_.emplace_back(todo[i], results[i]);
  std::sort(cache_.begin(), cache_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& ind : pop) ind.objectives = *lookup(ind.chromosome.bits);
}

std::vector<ObjectivePoint> ParetoFrontier::feasible_points() const {
  std::vector<ObjectivePoint> out;
  for (const auto& p : points)
    if (p.objectives.feasible) out.push_back({p.objectives.cost, p.objectives.pec});
  return out;
}

bool ParetoFrontier::is_nondominated() const {
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j)
      if (i != j && constrained_dominates(points[i].objectives, points[j].objectives))
        return false;
  return true;
}

ParetoFrontier extract_frontier(std::span<const Individual> pop, const GenomeLayout& layout) {
  std::vector<const Individual*> front;
  for (const auto& ind : pop)
    if (ind.rank == 1) front.push_back(&ind);
  std::sort(front.begin(), front.end(), [](const Individual* a, const Individual* b) {
    if (a->objectives.cost != b->objectives.cost) return a->objectives.cost < b->objectives.cost;
    if (a->objectives.pec != b->objectives.pec) return a->objectives.pec < b->objectives.pec;
    return a->chromosome < b->chromosome;
  });
  ParetoFrontier out;
  for (const Individual* ind : front) {
    if (!out.points.empty()) {
      const auto& last = out.points.back().objectives;
      if (last.cost == ind->objectives.cost && last.pec == ind->objectives.pec) continue;
    }
    out.points.push_back({decode(ind->chromosome, layout), ind->objectives});
  }
  return out;
}

double convergence_quality(std::span<const Individual> pop, const WorstCase& w) {
  double best = -kInf;
  double min_violation = kInf;
  for (const auto& ind : pop) {
    const auto& o = ind.objectives;
    if (!o.feasible) {
      min_violation = std::min(min_violation, o.violation);
      continue;
    }
    const OraValue v = ora({o.cost, o.pec}, w);
    best = std::max(best, v.beyond_worst ? -std::abs(v.area) : v.area);
  }
  return best > -kInf ? best : -1e18 - min_violation;
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::samoga: return "samoga";
    case Algorithm::nsga2: return "nsga2";
    case Algorithm::nsga_hs: return "nsga-hs";
    case Algorithm::aga: return "aga";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::samoga, Algorithm::nsga2, Algorithm::nsga_hs, Algorithm::aga})
    if (name == to_string(a)) return a;
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (expected samoga, nsga2, nsga-hs or aga)");
}

RunResult run_samoga(const GaSettings& s, const GenomeLayout& layout,
                     const ObjectiveFunction& objective, Instrumentation* probe) {
  s.validate();
  layout.validate();
  Rng init_rng(derive_seed(s.seed, kInit));
  Rng sel_rng(derive_seed(s.seed, kSelection));
  Rng cx_rng(derive_seed(s.seed, kCrossover));
  Rng mut_rng(derive_seed(s.seed, kMutation));
  Variation vary{cx_rng, mut_rng, layout.total_bits(), probe};
  PopulationEvaluator evaluator(objective, layout, s.threads);

  const auto n = static_cast<std::size_t>(s.pop_size);
  const auto elite_cap = static_cast<std::size_t>(std::floor(s.elite_fraction * s.pop_size));
  std::vector<Individual> pop = random_population(s.pop_size, layout, init_rng);
  evaluator.evaluate(pop);

  RunResult result;
  double best = -kInf;
  int stall = 0;
  for (int g = 1; g <= s.max_iter; ++g) {
    assign_fitness(pop, s.penalty_factor);
    const double q = convergence_quality(pop, s.reference);
    if (g > 1) stall = q > best ? 0 : stall + 1;
    best = std::max(best, q);
    const VariationRates rates = adaptive_probabilities(g, stall, s);
    result.history.push_back({g, best, rates.p_c, rates.p_m, stall});

    std::vector<double> fitness;
    fitness.reserve(n);
    for (const auto& ind : pop) fitness.push_back(ind.fitness);
    const HierarchicalSelector selector(fitness, s.groups, s.group_fitness);

    std::vector<Individual> children;
    children.reserve(n);
    while (children.size() < n) {
      if (probe) ++probe->hierarchical_calls;
      const auto [i, j] = selector.select_pair(sel_rng);
      const auto [a, b] = vary(pop[i].chromosome, pop[j].chromosome, rates);
      children.push_back(Individual{a, {}, 0, 0.0, 0.0});
      if (children.size() < n) children.push_back(Individual{b, {}, 0, 0.0, 0.0});
    }
    evaluator.evaluate(children);

    // Carry the current rank-1 set over the weakest children.
    const auto elites = select_elites(pop, children, elite_cap, s.reference);
    assign_fitness(children, s.penalty_factor);
    std::vector<std::size_t> weakest(n);
    std::iota(weakest.begin(), weakest.end(), std::size_t{0});
    std::stable_sort(weakest.begin(), weakest.end(), [&](std::size_t a, std::size_t b) {
      return children[a].fitness < children[b].fitness;
    });
    for (std::size_t k = 0; k < elites.size(); ++k) children[weakest[k]] = elites[k];
    pop = std::move(children);
  }
  assign_fitness(pop, s.penalty_factor);
  result.frontier = extract_frontier(pop, layout);
  result.evaluations = evaluator.evaluations();
  return result;
}

RunResult run_baseline(Algorithm variant, const GaSettings& s, const GenomeLayout& layout,
                       const ObjectiveFunction& objective, Instrumentation* probe) {
  if (variant == Algorithm::samoga) return run_samoga(s, layout, objective, probe);
  s.validate();
  layout.validate();
  Rng init_rng(derive_seed(s.seed, kInit));
  Rng sel_rng(derive_seed(s.seed, kSelection));
  Rng cx_rng(derive_seed(s.seed, kCrossover));
  Rng mut_rng(derive_seed(s.seed, kMutation));
  Variation vary{cx_rng, mut_rng, layout.total_bits(), probe};
  PopulationEvaluator evaluator(objective, layout, s.threads);

  const auto n = static_cast<std::size_t>(s.pop_size);
  std::vector<Individual> pop = random_population(s.pop_size, layout, init_rng);
  evaluator.evaluate(pop);
  assign_fitness(pop, s.penalty_factor);

  RunResult result;
  double best = -kInf;
  int stall = 0;
  for (int g = 1; g <= s.max_iter; ++g) {
    const double q = convergence_quality(pop, s.reference);
    if (g > 1) stall = q > best ? 0 : stall + 1;
    best = std::max(best, q);
    const VariationRates rates = variant == Algorithm::aga ? linear_probabilities(g, s)
                                                           : VariationRates{s.p_c0, s.p_m0};
    result.history.push_back({g, best, rates.p_c, rates.p_m, stall});

    std::vector<double> fitness;
    for (const auto& ind : pop) fitness.push_back(ind.fitness);
    const HierarchicalSelector selector(fitness, s.groups, s.group_fitness);

    std::vector<Individual> offspring;
    offspring.reserve(n);
    while (offspring.size() < n) {
      std::size_t i = 0;
      std::size_t j = 0;
      if (variant == Algorithm::nsga_hs) {
        if (probe) ++probe->hierarchical_calls;
        std::tie(i, j) = selector.select_pair(sel_rng);
      } else {
        if (probe) probe->tournament_calls += 2;
        i = binary_tournament(pop, sel_rng);
        j = binary_tournament(pop, sel_rng);
      }
      const auto [a, b] = vary(pop[i].chromosome, pop[j].chromosome, rates);
      offspring.push_back(Individual{a, {}, 0, 0.0, 0.0});
      if (offspring.size() < n) offspring.push_back(Individual{b, {}, 0, 0.0, 0.0});
    }
    evaluator.evaluate(offspring);

    std::vector<Individual> combined = std::move(pop);
    combined.insert(combined.end(), offspring.begin(), offspring.end());
    survive(combined, n);
    pop = std::move(combined);
    assign_fitness(pop, s.penalty_factor);
  }
  result.frontier = extract_frontier(pop, layout);
  result.evaluations = evaluator.evaluations();
  return result;
}

RunResult run_algorithm(Algorithm a, const GaSettings& s, const GenomeLayout& layout,
                        const ObjectiveFunction& objective, Instrumentation* probe) {
  return a == Algorithm::samoga ? run_samoga(s, layout, objective, probe)
                                : run_baseline(a, s, layout, objective, probe);
}

void write_frontier_csv(std::ostream& out, const ParetoFrontier& f) {
  out << "solution,cost,pec,wt,dg,bess,pv\n";
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    const auto& p = f.points[i];
    out << (i + 1) << ',' << csv::format(p.objectives.cost) << ',' << csv::format(p.objectives.pec)
        << ',' << p.config.n_wt << ',' << p.config.n_dg << ',' << p.config.n_es << ','
        << p.config.n_pv << '\n';
  }
}

void write_history_csv(std::ostream& out, const std::vector<HistoryEntry>& history) {
  out << "iteration,best_fitness,p_c,p_m\n";
  for (const auto& h : history)
    out << h.iteration << ',' << csv::format(h.best_fitness) << ',' << csv::format(h.p_c) << ','
        << csv::format(h.p_m) << '\n';
}

}  // namespace mgsizer
