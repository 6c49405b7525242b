#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mgsizer/commands.hpp"
#include "mgsizer/errors.hpp"

using namespace mgsizer;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "mgsizer_unit" / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("defaults mirror the case study") {
  const ExperimentConfig c = parse_config("{}");
  CHECK(c.ga.pop_size == 30);
  CHECK(c.ga.max_iter == 50);
  CHECK(c.model.bounds.max_pv == 16383);
  CHECK(c.model.bounds.lpsp_max == 0.4);
  CHECK(c.model.system.bess.kappa == 19300.0);
  CHECK(c.metrics.worst.cost_star == 1.6e7);
  CHECK(c.scenarios.subsample_sizes == std::vector<std::size_t>{10, 20, 30});
}

TEST_CASE("unknown keys and bad values are rejected") {
  CHECK_THROWS_AS(parse_config(R"({"sede": 3})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"devices": {"wt": {"rated": 3}}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"ga": {"pop_size": 31}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"ga": {"pop_size": "30"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"bounds": {"max_wt": 30}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 2})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"lps_basis": "both"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"tariff": {"buy": 0.01}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scenarios": {"templates": {"wind": []}}})"), ConfigError);
}

TEST_CASE("config round trip") {
  ExperimentConfig c = parse_config(R"({
    "seed": 77,
    "grid": {"import_cap": 500, "export_cap": null, "lps_basis": "delivered"},
    "tariff": {"buy": [0.08, 0.08, 0.08, 0.08, 0.08, 0.08, 0.12, 0.12, 0.12, 0.12, 0.12, 0.12,
                       0.12, 0.12, 0.12, 0.12, 0.12, 0.12, 0.15, 0.15, 0.15, 0.15, 0.08, 0.08],
               "sell": 0.04},
    "ga": {"algorithm": "nsga-hs", "group_fitness": "max", "max_iter": 7},
    "devices": {"bess": {"kappa": 0}}
  })");
  CHECK(c.seed == 77);
  CHECK(c.model.system.grid.import_cap == 500.0);
  CHECK(std::isinf(c.model.system.grid.export_cap));
  CHECK(c.algorithm == Algorithm::nsga_hs);
  CHECK(c.model.tariff.buy.front().size() == 24);
  const auto j = config_to_json(c);
  const ExperimentConfig back = config_from_json(j);
  CHECK(config_to_json(back) == j);
  CHECK(config_to_json(parse_config("{}")) == config_to_json(config_from_json(config_to_json(parse_config("{}")))));
}

TEST_CASE("scenario command writes the full set and subsamples") {
  ExperimentConfig c = parse_config(R"({"seed": 3})");
  const fs::path out = scratch("scenarios");
  cmd_scenarios(c, out);
  for (const char* f : {"scenarios_125.csv", "scenarios_10.csv", "scenarios_20.csv",
                        "scenarios_30.csv", "scenarios_125.json", "config.json"})
    CHECK(fs::exists(out / f));
  std::ifstream in(out / "scenarios_125.csv");
  const ScenarioSet s = read_scenarios_csv(in);
  CHECK(s.size() == 125);
  CHECK(std::abs(s.probability_sum() - 1.0) <= 1e-9);
  const std::string first = slurp(out / "scenarios_125.csv");
  cmd_scenarios(c, out);
  CHECK(slurp(out / "scenarios_125.csv") == first);
  // The echoed config reloads to the same experiment.
  CHECK(config_to_json(load_config(out / "config.json")) == config_to_json(c));
}

TEST_CASE("optimize and evaluate commands") {
  ExperimentConfig c = parse_config(R"({"ga": {"max_iter": 5, "threads": 1}, "scenarios": {"active": 10}})");
  const fs::path out = scratch("optimize");
  for (Algorithm a : kAllAlgorithms) {
    const auto r = cmd_optimize(c, a, out / std::string(to_string(a)));
    CHECK(r.run.frontier.is_nondominated());
    const std::string csv = slurp(out / std::string(to_string(a)) / "frontier.csv");
    CHECK(csv.rfind("solution,cost,pec,wt,dg,bess,pv\n", 0) == 0);
    CHECK(fs::exists(out / std::string(to_string(a)) / "metrics.json"));
    CHECK(fs::exists(out / std::string(to_string(a)) / "history.csv"));
  }

  const fs::path ev = scratch("evaluate");
  const Evaluation e = cmd_evaluate(c, SizingConfig{31, 748, 8, 2}, ev);
  CHECK(e.objectives.cost > 0.0);
  CHECK(fs::exists(ev / "traces" / "scenario_000.csv"));
  CHECK(fs::exists(ev / "traces" / "scenario_009.csv"));
  // Capacity falls between replacements.
  std::ifstream cap(ev / "bess_capacity.csv");
  std::string line;
  std::getline(cap, line);
  CHECK(line == "day,capacity_kwh,q_loss,replacements");
  double prev = 1e9;
  int prev_rep = 0;
  int rows = 0;
  while (std::getline(cap, line)) {
    std::stringstream ss(line);
    std::string day, capacity, q, rep;
    std::getline(ss, day, ',');
    std::getline(ss, capacity, ',');
    std::getline(ss, q, ',');
    std::getline(ss, rep, ',');
    const double v = std::stod(capacity);
    const int r = std::stoi(rep);
    if (r == prev_rep) CHECK(v <= prev + 1e-12);
    prev = v;
    prev_rep = r;
    ++rows;
  }
  CHECK(rows == 366);
  CHECK_THROWS_AS(cmd_evaluate(c, SizingConfig{40, 0, 0, 0}, ev), ConfigError);
}
