// mgsizer: microgrid sizing experiments from the command line.
//
//   mgsizer scenarios --config cfg.json --out runs/s
//   mgsizer optimize  --config cfg.json --algorithm samoga --scenarios 10
//   mgsizer evaluate  --wt 31 --pv 748 --dg 8 --es 2
//   mgsizer compare   --repetitions 5
//
// Exit codes: 0 success, 2 invalid configuration, 3 invariant violation.

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "mgsizer/commands.hpp"
#include "mgsizer/errors.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> scenarios;
};

void add_common(CLI::App* cmd, Common& c, bool with_scenarios) {
  cmd->add_option("--config", c.config, "Experiment config (JSON); defaults when omitted")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Override the experiment seed");
  cmd->add_option("--out", c.out, "Output directory (overrides output_dir)");
  if (with_scenarios)
    cmd->add_option("--scenarios", c.scenarios, "Scenario count: 10, 20, 30 or 125")
        ->check(CLI::IsMember({10, 20, 30, 125}));
}

mgsizer::ExperimentConfig resolve(const Common& c) {
  mgsizer::ExperimentConfig cfg =
      c.config.empty() ? mgsizer::parse_config("{}") : mgsizer::load_config(c.config);
  if (c.seed) {
    cfg.seed = *c.seed;
    cfg.ga.seed = *c.seed;
  }
  if (c.scenarios) cfg.scenarios.active = *c.scenarios == 125 ? 0 : *c.scenarios;
  if (!c.out.empty()) cfg.output_dir = c.out;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic microgrid sizing with multi-objective genetic algorithms"};
  app.require_subcommand(1);

  Common sc_opts, opt_opts, ev_opts, cmp_opts;
  auto* scen = app.add_subcommand("scenarios", "Generate the reduced scenario set and subsamples");
  add_common(scen, sc_opts, false);

  auto* opt = app.add_subcommand("optimize", "Run one algorithm and export its frontier");
  add_common(opt, opt_opts, true);
  std::string algorithm;
  opt->add_option("--algorithm", algorithm, "samoga, nsga2, nsga-hs or aga");

  auto* ev = app.add_subcommand("evaluate", "Simulate one sizing and export traces");
  add_common(ev, ev_opts, true);
  mgsizer::SizingConfig sizing{31, 748, 8, 2};
  ev->add_option("--wt", sizing.n_wt, "Wind turbines")->capture_default_str();
  ev->add_option("--pv", sizing.n_pv, "PV panels")->capture_default_str();
  ev->add_option("--dg", sizing.n_dg, "Diesel generators")->capture_default_str();
  ev->add_option("--es", sizing.n_es, "Batteries")->capture_default_str();

  auto* cmp = app.add_subcommand("compare", "Compare all algorithms over scenario subsets");
  add_common(cmp, cmp_opts, false);
  std::optional<int> repetitions;
  cmp->add_option("--repetitions", repetitions, "Seeded repetitions per cell");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*scen) {
      const auto cfg = resolve(sc_opts);
      mgsizer::cmd_scenarios(cfg, cfg.output_dir);
      std::cout << "scenarios written to " << cfg.output_dir << "\n";
    } else if (*opt) {
      auto cfg = resolve(opt_opts);
      if (!algorithm.empty()) cfg.algorithm = mgsizer::parse_algorithm(algorithm);
      const auto r = mgsizer::cmd_optimize(cfg, cfg.algorithm, cfg.output_dir);
      std::printf("%s: %zu frontier points, largest ORA %.6g, diverse %zu/%zu -> %s\n",
                  std::string(mgsizer::to_string(cfg.algorithm)).c_str(),
                  r.run.frontier.points.size(), r.largest.empty ? 0.0 : r.largest.area,
                  r.diverse.n_cost, r.diverse.n_pec, cfg.output_dir.c_str());
    } else if (*ev) {
      const auto cfg = resolve(ev_opts);
      const auto e = mgsizer::cmd_evaluate(cfg, sizing, cfg.output_dir);
      std::printf("cost %.6g $, pec %.6g kg, lpsp %.4g (%s) -> %s\n", e.objectives.cost,
                  e.objectives.pec, e.objectives.lpsp,
                  e.objectives.feasible ? "feasible" : "infeasible", cfg.output_dir.c_str());
    } else if (*cmp) {
      auto cfg = resolve(cmp_opts);
      if (repetitions) cfg.repetitions = *repetitions;
      cfg.validate();
      mgsizer::cmd_compare(cfg, cfg.output_dir);
      std::cout << "comparison written to " << cfg.output_dir << "\n";
    }
  } catch (const mgsizer::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mgsizer::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
