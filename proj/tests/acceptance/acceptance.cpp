// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mgsizer/commands.hpp"
#include "mgsizer/errors.hpp"

using namespace mgsizer;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0.0 && secs > limit_s) {
    o.pass = false;
    o.detail += " [over the " + std::to_string(static_cast<int>(limit_s)) + " s budget]";
  }
  failures += !o.pass;
  std::printf("[%s] %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
              secs);
  std::fflush(stdout);
}

bool rel_close(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::abs(want);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Frontier sorted by cost must have strictly falling PEC.
bool tradeoff_ok(const ParetoFrontier& f) {
  for (std::size_t i = 1; i < f.points.size(); ++i) {
    if (!(f.points[i].objectives.cost >= f.points[i - 1].objectives.cost)) return false;
    if (!(f.points[i].objectives.pec < f.points[i - 1].objectives.pec)) return false;
  }
  return true;
}

std::vector<ParetoFrontier> all_frontiers;

Outcome formula_suite() {
  struct Row {
    const char* what;
    double got, want;
  };
  const GaSettings s;
  const WorstCase w;
  // Reference values computed independently of this code base. The fade
  // figure is kappa*exp(Ea/(R*T))*1000^z evaluated directly (2.3102168 %).
  const std::vector<Row> rows{
      {"wt_power(6)", wt_power(6.0, WtParams{}), 11.1111},
      {"capacity_loss(1000 Ah) %", 100.0 * capacity_loss(1000.0, BessParams{}), 2.3102168},
      {"P_c(1)", adaptive_probabilities(1, 0, s).p_c, 0.65},
      {"P_m(1)", adaptive_probabilities(1, 0, s).p_m, 0.01},
      {"P_c(10)", adaptive_probabilities(10, 0, s).p_c, 0.541667},
      {"P_m(10)", adaptive_probabilities(10, 0, s).p_m, 0.012},
      {"P_c(100)", adaptive_probabilities(60, 40, s).p_c, 0.464286},
      {"P_m(100)", adaptive_probabilities(60, 40, s).p_m, 0.014},
      {"ORA(7858551, 3276596)", ora({7858551.0, 3276596.0}, w).area, 5.8896e12},
      {"ORA(15140305, 1575922)", ora({15140305.0, 1575922.0}, w).area, 2.0840e12},
  };
  std::string bad;
  for (const auto& r : rows)
    if (!rel_close(r.got, r.want, 1e-4)) bad += std::string(" ") + r.what + "=" + fmt("%.8g", r.got);
  if (!bad.empty()) return {false, "mismatch:" + bad};
  return {true, std::to_string(rows.size()) +
                    " values within 1e-4 rel (fade reference from direct evaluation)"};
}

Outcome pareto_oracle() {
  ModelParams mp;
  mp.bounds = DeviceBounds{3, 7, 1, 3, 0.4};
  const GenomeLayout layout = GenomeLayout::for_bounds(mp.bounds);
  const auto full =
      generate_scenarios(ScenarioPipelineSettings::defaults(), WtParams{}, PvParams{}, 42).full;
  ScenarioSet two = subsample(full, 2, 5);
  // A tiny-bound system needs a proportionally small load.
  for (auto& sc : two.scenarios)
    for (double& x : sc.load) x *= 0.3;

  std::vector<ObjectiveVector> objs;
  for (std::uint32_t b = 0; b < (1u << layout.total_bits()); ++b)
    objs.push_back(evaluate(decode(Chromosome{b}, layout), two, mp).objectives);
  std::set<std::pair<double, double>> truth;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < objs.size() && !dominated; ++j)
      dominated = constrained_dominates(objs[j], objs[i]);
    if (!dominated) truth.insert({objs[i].cost, objs[i].pec});
  }

  const ObjectiveFunction f = make_objective(mp, two);
  double recall = 0.0;
  std::string per;
  for (int seed = 1; seed <= 5; ++seed) {
    GaSettings s;
    s.seed = static_cast<std::uint64_t>(seed);
    s.threads = 1;
    const RunResult r = run_samoga(s, layout, f);
    all_frontiers.push_back(r.frontier);
    std::size_t hit = 0;
    for (const auto& p : r.frontier.points) hit += truth.count({p.objectives.cost, p.objectives.pec});
    recall += static_cast<double>(hit) / static_cast<double>(truth.size());
    per += " " + std::to_string(hit);
  }
  recall /= 5.0;
  return {recall >= 0.9,
          fmt("%.0f configs, %.0f true Pareto points, mean recall %.3f (need >= 0.9); hits per seed",
              static_cast<double>(objs.size()), static_cast<double>(truth.size()), recall) +
              per};
}

Outcome invariant_suite() {
  Rng rng(2718);
  std::size_t steps = 0;
  std::size_t broken = 0;
  double worst_residual = 0.0;
  while (steps < 10000) {
    SystemParams p;
    if (rng.bernoulli(0.3)) p.grid.import_cap = 500.0 * rng.uniform();
    if (rng.bernoulli(0.3)) p.grid.export_cap = 500.0 * rng.uniform();
    p.dg.ramp_up = p.dg.ramp_down = 100.0 + 400.0 * rng.uniform();
    p.dg.startup_ramp = p.dg.shutdown_ramp = 150.0 + 350.0 * rng.uniform();
    const SizingConfig c{static_cast<int>(rng.below(32)), static_cast<int>(rng.below(3000)),
                         static_cast<int>(rng.below(8)), static_cast<int>(rng.below(40))};
    DispatchState st = initial_dispatch_state(c, p);
    // Start some runs from a worn battery so replacements occur.
    if (rng.bernoulli(0.3)) {
      st.battery.throughput_ah = end_of_life_throughput(p.bess) * rng.uniform();
      st.battery.q_loss = capacity_loss(st.battery.throughput_ah, p.bess);
      st.battery.energy = std::min(st.battery.energy, actual_capacity(st.battery.q_loss, p.bess));
    }
    for (int t = 0; t < 50 && steps < 10000; ++t, ++steps) {
      const HourInputs in{100.0 * rng.uniform(), 0.35 * rng.uniform(), 4000.0 * rng.uniform()};
      const StepOutcome o = dispatch_step(c, in, st, p, t);
      const auto& r = o.record;
      const auto& b = o.state.battery;
      worst_residual = std::max(worst_residual, std::abs(r.balance_residual()));
      bool ok = std::abs(r.balance_residual()) <= 1e-9 && r.p_ch * r.p_dc == 0.0 && r.lps >= 0.0;
      ok = ok && b.energy >= p.bess.e_min - 1e-9 &&
           b.energy <= actual_capacity(b.q_loss, p.bess) + 1e-9;
      if (b.n_replacements == st.battery.n_replacements)
        ok = ok && b.throughput_ah >= st.battery.throughput_ah;
      broken += !ok;
      st = o.state;
    }
  }

  int disagreements = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ObjectiveVector> objs;
    for (int i = 0; i < 200; ++i)
      objs.push_back(ObjectiveVector{std::floor(rng.uniform() * 50.0),
                                     std::floor(rng.uniform() * 50.0), 0.0, true, 0.0});
    const auto ranks = nondominated_sort(objs);
    // O(n^2) oracle: peel non-dominated layers.
    std::vector<int> oracle(objs.size(), 0);
    int layer = 0;
    std::size_t assigned = 0;
    while (assigned < objs.size()) {
      ++layer;
      std::vector<std::size_t> front;
      for (std::size_t i = 0; i < objs.size(); ++i) {
        if (oracle[i]) continue;
        bool dom = false;
        for (std::size_t j = 0; j < objs.size() && !dom; ++j)
          dom = !oracle[j] && constrained_dominates(objs[j], objs[i]);
        if (!dom) front.push_back(i);
      }
      for (auto i : front) oracle[i] = layer;
      assigned += front.size();
    }
    disagreements += ranks != oracle;
  }
  return {broken == 0 && disagreements == 0,
          fmt("%.0f steps, %.0f violations, max residual %.2e kW", static_cast<double>(steps),
              static_cast<double>(broken), worst_residual) +
              "; sort/oracle disagreements " + std::to_string(disagreements) + "/100"};
}

struct DeskRuns {
  // [algorithm index][seed]
  std::vector<std::vector<double>> ora;
  std::vector<std::vector<double>> n_cost;
  std::vector<std::vector<double>> n_pec;
};

DeskRuns desk;
const std::vector<Algorithm> kAlgos(std::begin(kAllAlgorithms), std::end(kAllAlgorithms));

std::size_t algo_index(Algorithm a) {
  return static_cast<std::size_t>(std::find(kAlgos.begin(), kAlgos.end(), a) - kAlgos.begin());
}

Outcome desk_ora() {
  ExperimentConfig cfg = parse_config("{}");
  const ScenarioSet full = full_scenario_set(cfg);
  desk.ora.assign(kAlgos.size(), {});
  desk.n_cost = desk.n_pec = desk.ora;
  for (int r = 1; r <= 5; ++r) {
    const ScenarioSet set = subsample(full, 10, seeds::subsample(cfg.seed, 10, r));
    for (std::size_t a = 0; a < kAlgos.size(); ++a) {
      const OptimizeReport rep = optimize(cfg, kAlgos[a], set, seeds::ga(cfg.seed, r));
      all_frontiers.push_back(rep.run.frontier);
      desk.ora[a].push_back(rep.largest.empty ? 0.0 : rep.largest.area);
      desk.n_cost[a].push_back(static_cast<double>(rep.diverse.n_cost));
      desk.n_pec[a].push_back(static_cast<double>(rep.diverse.n_pec));
    }
  }
  const auto& sam = desk.ora[algo_index(Algorithm::samoga)];
  const auto& nsga = desk.ora[algo_index(Algorithm::nsga2)];
  int wins = 0;
  std::string cells;
  for (std::size_t k = 0; k < sam.size(); ++k) {
    wins += sam[k] >= nsga[k];
    cells += fmt(" %.4g/%.4g", sam[k], nsga[k]);
  }
  return {wins >= 4, "SAMOGA >= NSGA-II in " + std::to_string(wins) + "/5 seeds (need 4);" + cells};
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

Outcome desk_diversity() {
  if (desk.ora.empty()) return {false, "desk runs unavailable"};
  auto check_axis = [&](const std::vector<std::vector<double>>& v, const char* axis,
                        std::string& detail) {
    std::vector<double> base;
    for (Algorithm a : {Algorithm::nsga2, Algorithm::nsga_hs, Algorithm::aga})
      base.push_back(mean(v[algo_index(a)]));
    std::sort(base.begin(), base.end());
    const double sam = mean(v[algo_index(Algorithm::samoga)]);
    detail += std::string(" ") + axis + fmt(": SAMOGA %.1f vs baseline median %.1f;", sam, base[1]);
    return sam >= base[1];
  };
  std::string detail;
  const bool c = check_axis(desk.n_cost, "cost", detail);
  const bool p = check_axis(desk.n_pec, "pec", detail);
  return {c && p, "mean diverse counts over 5 seeds," + detail};
}

Outcome degradation_effect() {
  ExperimentConfig cfg = parse_config("{}");
  const ScenarioSet set = subsample(full_scenario_set(cfg), 10, seeds::subsample(cfg.seed, 10));
  const SizingConfig c{31, 748, 8, 2};
  ModelParams off = cfg.model;
  off.system.bess.kappa = 0.0;
  const double with = evaluate(c, set, cfg.model).objectives.cost;
  const double without = evaluate(c, set, off).objectives.cost;
  return {with - without > 0.0,
          fmt("cost %.6g $ with fade vs %.6g $ without (+%.3f %%)", with, without,
              100.0 * (with - without) / without)};
}

Outcome tradeoff_structure() {
  std::size_t bad = 0;
  std::size_t points = 0;
  for (const auto& f : all_frontiers) {
    bad += !tradeoff_ok(f) || !f.is_nondominated();
    points += f.points.size();
  }
  return {!all_frontiers.empty() && bad == 0,
          std::to_string(all_frontiers.size()) + " frontiers, " + std::to_string(points) +
              " points, " + std::to_string(bad) + " with a non-decreasing PEC step"};
}

Outcome determinism() {
  ExperimentConfig cfg = parse_config("{}");
  const fs::path root = fs::temp_directory_path() / "mgsizer_acceptance";
  fs::remove_all(root);
  cmd_optimize(cfg, Algorithm::samoga, root / "a");
  cmd_optimize(cfg, Algorithm::samoga, root / "b");
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string a = slurp(root / "a" / "frontier.csv");
  const std::string b = slurp(root / "b" / "frontier.csv");
  fs::remove_all(root);
  return {!a.empty() && a == b, std::to_string(a.size()) + " bytes, " +
                                    (a == b ? "identical" : "different") +
                                    " across two runs (125 scenarios)"};
}

}  // namespace

int main() {
  report(1, "formula unit suite", 1.0, formula_suite);
  report(2, "brute-force Pareto oracle", 60.0, pareto_oracle);
  report(3, "invariant suite", 30.0, invariant_suite);
  report(4, "desk-scale largest ORA vs NSGA-II", 600.0, desk_ora);
  report(5, "desk-scale diverse count vs baseline median", 0.0, desk_diversity);
  report(6, "degradation effect on cost", 0.0, degradation_effect);
  report(7, "trade-off structure of returned frontiers", 0.0, tradeoff_structure);
  report(8, "optimize determinism", 0.0, determinism);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
