#include "mgsizer/commands.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "mgsizer/csv.hpp"
#include "mgsizer/errors.hpp"

namespace mgsizer {
namespace fs = std::filesystem;
using nlohmann::json;

namespace seeds {
std::uint64_t scenarios(std::uint64_t base) { return derive_seed(base, 100); }
std::uint64_t subsample(std::uint64_t base, std::size_t size, int repetition) {
  return derive_seed(derive_seed(base, 200 + static_cast<std::uint64_t>(repetition)), size);
}
std::uint64_t ga(std::uint64_t base, int repetition) {
  return derive_seed(base, 300 + static_cast<std::uint64_t>(repetition));
}
}  // namespace seeds

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

template <class Fn>
void write_with(const fs::path& path, Fn&& fn) {
  std::ostringstream buf;
  fn(buf);
  write_file(path, buf.str());
}

void prepare(const ExperimentConfig& cfg, const fs::path& out) {
  fs::create_directories(out);
  write_file(out / "config.json", config_to_json(cfg).dump(2) + "\n");
}

json objectives_json(const ObjectiveVector& o) {
  return {{"cost", o.cost}, {"pec", o.pec},           {"lpsp", o.lpsp},
          {"feasible", o.feasible}, {"violation", o.violation}};
}

json breakdown_json(const CostBreakdown& b) {
  return {{"c_init", b.c_init},         {"c_om", b.c_om},
          {"c_dg_fuel", b.c_dg_fuel},   {"c_grid_buy", b.c_grid_buy},
          {"c_grid_sell", b.c_grid_sell}, {"c_degradation", b.c_degradation},
          {"total", b.total}};
}

json sizing_json(const SizingConfig& c) {
  return {{"wt", c.n_wt}, {"pv", c.n_pv}, {"dg", c.n_dg}, {"bess", c.n_es}};
}

std::string pad(std::size_t i, int width) {
  std::string s = std::to_string(i);
  return std::string(s.size() < static_cast<std::size_t>(width) ? width - s.size() : 0, '0') + s;
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& v) {
  MeanSd r;
  if (v.empty()) return r;
  for (double x : v) r.mean += x;
  r.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - r.mean) * (x - r.mean);
    r.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return r;
}

}  // namespace

ScenarioSet full_scenario_set(const ExperimentConfig& cfg) {
  ScenarioSet set;
  if (!cfg.scenarios.file.empty()) {
    std::ifstream in(cfg.scenarios.file, std::ios::binary);
    if (!in) throw ConfigError("scenarios.file: cannot open " + cfg.scenarios.file);
    set = read_scenarios_csv(in);
  } else {
    set = generate_scenarios(cfg.scenarios.pipeline, cfg.model.system.wt, cfg.model.system.pv,
                             seeds::scenarios(cfg.seed))
              .full;
  }
  set.validate();
  return set;
}

ScenarioSet active_scenario_set(const ExperimentConfig& cfg) {
  ScenarioSet full = full_scenario_set(cfg);
  const std::size_t m = cfg.scenarios.active;
  if (m == 0 || m == full.size()) return full;
  if (m > full.size())
    throw ConfigError("scenarios.active: " + std::to_string(m) + " exceeds the " +
                      std::to_string(full.size()) + " available scenarios");
  return subsample(full, m, seeds::subsample(cfg.seed, m));
}

ObjectiveFunction make_objective(const ModelParams& params, const ScenarioSet& set) {
  auto shared = std::make_shared<const std::pair<ModelParams, ScenarioSet>>(params, set);
  return [shared](const SizingConfig& c) {
    return evaluate(c, shared->second, shared->first).objectives;
  };
}

OptimizeReport optimize(const ExperimentConfig& cfg, Algorithm algorithm, const ScenarioSet& set,
                        std::uint64_t ga_seed) {
  cfg.model.tariff.validate(set.size(), set.horizon());
  GaSettings s = cfg.ga;
  s.seed = ga_seed;
  s.reference = cfg.metrics.worst;
  OptimizeReport r;
  r.run = run_algorithm(algorithm, s, GenomeLayout::for_bounds(cfg.model.bounds),
                        make_objective(cfg.model, set));
  const auto pts = r.run.frontier.feasible_points();
  r.largest = largest_ora(pts, cfg.metrics.worst);
  r.diverse = diverse_count(pts, cfg.metrics.cost_gap, cfg.metrics.pec_gap);
  return r;
}

void cmd_scenarios(const ExperimentConfig& cfg, const fs::path& out) {
  cfg.validate();
  prepare(cfg, out);
  const ScenarioSet full = full_scenario_set(cfg);
  auto emit = [&](const ScenarioSet& set, const std::string& stem) {
    write_with(out / (stem + ".csv"), [&](std::ostream& o) { write_scenarios_csv(o, set); });
    json j = {{"seed", set.seed}, {"count", set.size()}, {"horizon", set.horizon()}};
    json rows = json::array();
    for (const auto& sc : set.scenarios)
      rows.push_back({{"probability", sc.probability}, {"wt", sc.wt}, {"pv", sc.pv},
                      {"load", sc.load}});
    j["scenarios"] = std::move(rows);
    write_file(out / (stem + ".json"), j.dump(2) + "\n");
  };
  emit(full, "scenarios_" + std::to_string(full.size()));
  for (std::size_t m : cfg.scenarios.subsample_sizes) {
    if (m >= full.size()) continue;
    emit(subsample(full, m, seeds::subsample(cfg.seed, m)), "scenarios_" + std::to_string(m));
  }
}

OptimizeReport cmd_optimize(const ExperimentConfig& cfg, Algorithm algorithm,
                            const fs::path& out) {
  cfg.validate();
  prepare(cfg, out);
  const ScenarioSet set = active_scenario_set(cfg);
  OptimizeReport r = optimize(cfg, algorithm, set, seeds::ga(cfg.seed));
  write_with(out / "frontier.csv", [&](std::ostream& o) { write_frontier_csv(o, r.run.frontier); });
  write_with(out / "history.csv", [&](std::ostream& o) { write_history_csv(o, r.run.history); });

  json m = {{"algorithm", to_string(algorithm)},
            {"scenarios", set.size()},
            {"evaluations", r.run.evaluations},
            {"frontier_size", r.run.frontier.points.size()},
            {"feasible_frontier_size", r.run.frontier.feasible_points().size()}};
  if (r.largest.empty) {
    m["largest_ora"] = nullptr;
  } else {
    const ObjectivePoint p = r.run.frontier.feasible_points()[r.largest.index];
    m["largest_ora"] = {{"area", r.largest.area},
                        {"beyond_worst", r.largest.beyond_worst},
                        {"cost", p.cost},
                        {"pec", p.pec}};
  }
  m["diverse_count"] = {{"cost", r.diverse.n_cost}, {"pec", r.diverse.n_pec}};
  m["worst_case"] = {{"cost", cfg.metrics.worst.cost_star}, {"pec", cfg.metrics.worst.pec_star}};
  write_file(out / "metrics.json", m.dump(2) + "\n");
  return r;
}

Evaluation cmd_evaluate(const ExperimentConfig& cfg, const SizingConfig& sizing,
                        const fs::path& out) {
  cfg.validate();
  if (!cfg.model.bounds.contains(sizing))
    throw ConfigError("evaluate: sizing outside the configured bounds");
  prepare(cfg, out);
  const ScenarioSet set = active_scenario_set(cfg);
  cfg.model.tariff.validate(set.size(), set.horizon());
  std::vector<OperationTrace> traces;
  const Evaluation ev = evaluate_with_traces(sizing, set, cfg.model, traces);

  fs::create_directories(out / "traces");
  json per = json::array();
  std::size_t likely = 0;
  for (std::size_t w = 0; w < traces.size(); ++w) {
    const auto& tr = traces[w];
    for (const auto& s : tr.steps) {
      if (std::abs(s.balance_residual()) > 1e-6)
        throw InvariantViolation("evaluate: power balance broken at t=" + std::to_string(s.t));
    }
    write_with(out / "traces" / ("scenario_" + pad(w, 3) + ".csv"),
               [&](std::ostream& o) { write_trace_csv(o, tr); });
    per.push_back({{"scenario", w},
                   {"probability", set.scenarios[w].probability},
                   {"lpsp", lpsp(tr)},
                   {"diesel_liters", tr.diesel_liters},
                   {"energy_bought", tr.energy_bought},
                   {"energy_sold", tr.energy_sold},
                   {"dg_violations", check_dg_feasibility(tr, cfg.model.system.dg).size()}});
    if (set.scenarios[w].probability > set.scenarios[likely].probability) likely = w;
  }

  // Capacity of one battery over the year of repeated days, most probable
  // scenario; steps down with throughput and jumps back at replacements.
  write_with(out / "bess_capacity.csv", [&](std::ostream& o) {
    o << "day,capacity_kwh,q_loss,replacements\n";
    const auto& bess = cfg.model.system.bess;
    const bool has_bank = sizing.n_es > 0 && !traces.empty();
    const int days = static_cast<int>(std::ceil(cfg.model.periods_per_year));
    for (int d = 0; d <= days; ++d) {
      BatteryState b = fresh_battery(bess);
      if (has_bank && d > 0)
        b = extrapolate_battery(traces[likely].final_batteries.front(), d, bess);
      o << d << ',' << csv::format(has_bank ? actual_capacity(b.q_loss, bess) : 0.0) << ','
        << csv::format(has_bank ? b.q_loss : 0.0) << ',' << (has_bank ? b.n_replacements : 0)
        << '\n';
    }
  });

  ModelParams no_fade = cfg.model;
  no_fade.system.bess.kappa = 0.0;
  const Evaluation ref = evaluate(sizing, set, no_fade);

  json j = {{"sizing", sizing_json(sizing)},
            {"scenarios", set.size()},
            {"objectives", objectives_json(ev.objectives)},
            {"breakdown", breakdown_json(ev.breakdown)},
            {"renewable_proportion", ev.renewable_proportion},
            {"expected_lpsp", ev.expected_lpsp},
            {"dg_violations", ev.dg_violations},
            {"per_scenario", per},
            {"without_degradation",
             {{"cost", ref.objectives.cost},
              {"pec", ref.objectives.pec},
              {"cost_change", ev.objectives.cost - ref.objectives.cost}}}};
  write_file(out / "evaluation.json", j.dump(2) + "\n");
  return ev;
}

json cmd_compare(const ExperimentConfig& cfg, const fs::path& out) {
  cfg.validate();
  prepare(cfg, out);
  const ScenarioSet full = full_scenario_set(cfg);
  const auto& sizes = cfg.scenarios.subsample_sizes;
  const std::vector<Algorithm> algos(std::begin(kAllAlgorithms), std::end(kAllAlgorithms));

  json runs = json::array();
  // [size][algorithm] -> one value per repetition
  std::vector<std::vector<std::vector<double>>> ora_v(sizes.size(),
                                                      std::vector<std::vector<double>>(algos.size()));
  auto cost_v = ora_v;
  auto pec_v = ora_v;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const std::size_t m = sizes[si];
    if (m > full.size())
      throw ConfigError("scenarios.subsample_sizes: " + std::to_string(m) + " exceeds the " +
                        std::to_string(full.size()) + " available scenarios");
    for (int r = 1; r <= cfg.repetitions; ++r) {
      const ScenarioSet set = m == full.size() ? full : subsample(full, m, seeds::subsample(cfg.seed, m, r));
      for (std::size_t ai = 0; ai < algos.size(); ++ai) {
        const OptimizeReport rep = optimize(cfg, algos[ai], set, seeds::ga(cfg.seed, r));
        const double area = rep.largest.empty ? 0.0 : rep.largest.area;
        ora_v[si][ai].push_back(area);
        cost_v[si][ai].push_back(static_cast<double>(rep.diverse.n_cost));
        pec_v[si][ai].push_back(static_cast<double>(rep.diverse.n_pec));
        runs.push_back({{"scenarios", m},
                        {"repetition", r},
                        {"algorithm", to_string(algos[ai])},
                        {"largest_ora", area},
                        {"diverse_cost", rep.diverse.n_cost},
                        {"diverse_pec", rep.diverse.n_pec},
                        {"frontier_size", rep.run.frontier.points.size()}});
      }
    }
  }

  auto table = [&](const std::vector<std::vector<std::vector<double>>>& v) {
    json mean = json::array();
    json sd = json::array();
    for (const auto& row : v) {
      json mr = json::array();
      json sr = json::array();
      for (const auto& cell : row) {
        const MeanSd s = mean_sd(cell);
        mr.push_back(s.mean);
        sr.push_back(s.sd);
      }
      mean.push_back(mr);
      sd.push_back(sr);
    }
    return json{{"mean", mean}, {"sd", sd}};
  };
  json names = json::array();
  for (Algorithm a : algos) names.push_back(to_string(a));
  json report = {{"scenario_sizes", sizes},
                 {"algorithms", names},
                 {"repetitions", cfg.repetitions},
                 {"largest_ora", table(ora_v)},
                 {"diverse_cost", table(cost_v)},
                 {"diverse_pec", table(pec_v)},
                 {"runs", runs}};
  write_file(out / "comparison.json", report.dump(2) + "\n");

  // Flat tables for plotting: one row per (size, algorithm).
  write_with(out / "comparison.csv", [&](std::ostream& o) {
    o << "scenarios,algorithm,ora_mean,ora_sd,diverse_cost_mean,diverse_cost_sd,diverse_pec_mean,"
         "diverse_pec_sd\n";
    for (std::size_t si = 0; si < sizes.size(); ++si)
      for (std::size_t ai = 0; ai < algos.size(); ++ai) {
        const MeanSd a = mean_sd(ora_v[si][ai]);
        const MeanSd c = mean_sd(cost_v[si][ai]);
        const MeanSd p = mean_sd(pec_v[si][ai]);
        o << sizes[si] << ',' << to_string(algos[ai]) << ',' << csv::format(a.mean) << ','
          << csv::format(a.sd) << ',' << csv::format(c.mean) << ',' << csv::format(c.sd) << ','
          << csv::format(p.mean) << ',' << csv::format(p.sd) << '\n';
      }
  });
  return report;
}

}  // namespace mgsizer
