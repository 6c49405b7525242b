#include "mgsizer/objectives.hpp"

#include <algorithm>
#include <cmath>

#include "mgsizer/errors.hpp"

namespace mgsizer {
namespace {

double row_price(const std::vector<std::vector<double>>& table, std::size_t w, std::size_t t) {
  const auto& row = table.size() == 1 ? table.front() : table.at(w);
  return row.size() == 1 ? row.front() : row.at(t);
}

double bound_excess(int n, int max) {
  if (n < 0) return static_cast<double>(-n);
  return n > max ? static_cast<double>(n - max) / std::max(1, max) : 0.0;
}

}  // namespace

bool DeviceBounds::contains(const SizingConfig& c) const {
  return c.n_wt >= 0 && c.n_wt <= max_wt && c.n_pv >= 0 && c.n_pv <= max_pv && c.n_dg >= 0 &&
         c.n_dg <= max_dg && c.n_es >= 0 && c.n_es <= max_es;
}

void DeviceBounds::validate() const {
  if (max_wt < 0 || max_pv < 0 || max_dg < 0 || max_es < 0)
    throw ConfigError("bounds: maxima must be non-negative");
  if (!(lpsp_max >= 0.0 && lpsp_max <= 1.0)) throw ConfigError("bounds: lpsp_max must lie in [0, 1]");
}

double TariffSchedule::buy_price(std::size_t w, std::size_t t) const { return row_price(buy, w, t); }
double TariffSchedule::sell_price(std::size_t w, std::size_t t) const {
  return row_price(sell, w, t);
}

void TariffSchedule::validate(std::size_t scenarios, std::size_t horizon) const {
  auto check_shape = [&](const std::vector<std::vector<double>>& table, const char* name) {
    if (table.empty()) throw ConfigError(std::string("tariff: ") + name + " is empty");
    if (table.size() != 1 && table.size() != scenarios)
      throw ConfigError(std::string("tariff: ") + name + " needs 1 row or one row per scenario");
    for (const auto& row : table) {
      if (row.size() != 1 && row.size() != horizon)
        throw ConfigError(std::string("tariff: ") + name + " rows need 1 or horizon entries");
      for (double v : row)
        if (!(v >= 0.0)) throw ConfigError(std::string("tariff: ") + name + " must be >= 0");
    }
  };
  check_shape(buy, "buy");
  check_shape(sell, "sell");
  for (std::size_t w = 0; w < scenarios; ++w)
    for (std::size_t t = 0; t < horizon; ++t)
      if (sell_price(w, t) > buy_price(w, t))
        throw ConfigError("tariff: sell price may not exceed buy price");
}

void ModelParams::validate() const {
  system.validate();
  bounds.validate();
  if (!(periods_per_year > 0.0)) throw ConfigError("objectives: periods_per_year must be positive");
  if (!(dg_violation_weight >= 0.0))
    throw ConfigError("objectives: dg_violation_weight must be >= 0");
}

double cost_initial(const SizingConfig& c, const SystemParams& p) {
  return c.n_wt * p.wt.unit_cost + c.n_pv * p.pv.unit_cost + c.n_dg * p.dg.unit_cost +
         c.n_es * p.bess.unit_cost;
}

double cost_om(const SizingConfig& c, double hours, const SystemParams& p) {
  return hours * (c.n_wt * p.wt.om_cost_per_hour + c.n_pv * p.pv.om_cost_per_hour +
                  c.n_dg * p.dg.om_cost_per_hour);
}

double cost_dg_fuel(std::span<const OperationTrace> traces, std::span<const double> prob,
                    double diesel_price) {
  double total = 0.0;
  for (std::size_t w = 0; w < traces.size(); ++w)
    total += prob[w] * traces[w].diesel_liters * diesel_price;
  return total;
}

GridCost cost_grid(std::span<const OperationTrace> traces, std::span<const double> prob,
                   const TariffSchedule& tariff, double dt) {
  GridCost g;
  for (std::size_t w = 0; w < traces.size(); ++w) {
    double buy = 0.0;
    double sell = 0.0;
    for (std::size_t t = 0; t < traces[w].steps.size(); ++t) {
      const auto& s = traces[w].steps[t];
      buy += tariff.buy_price(w, t) * s.import_kw() * dt;
      sell += tariff.sell_price(w, t) * s.export_kw() * dt;
    }
    g.buy += prob[w] * buy;
    g.sell += prob[w] * sell;
  }
  return g;
}

double cost_degradation_expected(std::span<const std::vector<BatteryState>> finals,
                                 std::span<const double> prob, const BessParams& p) {
  double total = 0.0;
  for (std::size_t w = 0; w < finals.size(); ++w)
    total += prob[w] * degradation_cost(finals[w], p);
  return total;
}

double pec(std::span<const OperationTrace> traces, std::span<const double> prob, double co2_rate,
           double dt) {
  double total = 0.0;
  for (std::size_t w = 0; w < traces.size(); ++w) {
    double kwh = 0.0;
    for (const auto& s : traces[w].steps) kwh += s.p_dg * dt;
    total += prob[w] * co2_rate * kwh;
  }
  return total;
}

double renewable_proportion(std::span<const OperationTrace> traces, std::span<const double> prob) {
  double ren = 0.0;
  double load = 0.0;
  for (std::size_t w = 0; w < traces.size(); ++w) {
    ren += prob[w] * traces[w].renewable_energy;
    load += prob[w] * traces[w].load_energy;
  }
  return load > 0.0 ? ren / load : 0.0;
}

Evaluation evaluate_with_traces(const SizingConfig& config, const ScenarioSet& set,
                                const ModelParams& params, std::vector<OperationTrace>& traces) {
  const SystemParams& sys = params.system;
  const double periods = params.periods_per_year;
  traces.clear();
  traces.reserve(set.size());
  std::vector<double> prob;
  prob.reserve(set.size());

  // Counts below zero cannot be simulated; clamp for the simulation and let
  // the bound excess mark the point infeasible.
  const SizingConfig sim_config{std::max(config.n_wt, 0), std::max(config.n_pv, 0),
                                std::max(config.n_dg, 0), std::max(config.n_es, 0)};

  Evaluation ev;
  double worst_lpsp = 0.0;
  double lps_sum = 0.0;
  double load_sum = 0.0;
  for (const auto& sc : set.scenarios) {
    traces.push_back(simulate(sim_config, sc, sys));
    prob.push_back(sc.probability);
    const auto& tr = traces.back();
    worst_lpsp = std::max(worst_lpsp, lpsp(tr));
    ev.dg_violations += check_dg_feasibility(tr, sys.dg).size();
    double lps = 0.0;
    for (const auto& s : tr.steps) lps += s.lps * sys.dt;
    lps_sum += sc.probability * lps;
    load_sum += sc.probability * tr.load_energy;
  }

  std::vector<std::vector<BatteryState>> annual;
  annual.reserve(traces.size());
  for (const auto& tr : traces) {
    std::vector<BatteryState> row;
    row.reserve(tr.final_batteries.size());
    for (const auto& b : tr.final_batteries) row.push_back(extrapolate_battery(b, periods, sys.bess));
    annual.push_back(std::move(row));
  }

  const double hours = static_cast<double>(set.horizon()) * sys.dt * periods;
  CostBreakdown& cb = ev.breakdown;
  cb.c_init = cost_initial(sim_config, sys);
  cb.c_om = cost_om(sim_config, hours, sys);
  cb.c_dg_fuel = periods * cost_dg_fuel(traces, prob, sys.dg.diesel_price);
  const GridCost g = cost_grid(traces, prob, params.tariff, sys.dt);
  cb.c_grid_buy = periods * g.buy;
  cb.c_grid_sell = periods * g.sell;
  cb.c_degradation = cost_degradation_expected(annual, prob, sys.bess);
  cb.total = cb.identity_total();

  ObjectiveVector& ov = ev.objectives;
  ov.cost = cb.total;
  ov.pec = periods * pec(traces, prob, sys.dg.co2_rate, sys.dt);
  ov.lpsp = worst_lpsp;
  const auto& b = params.bounds;
  const double excess = std::max(0.0, worst_lpsp - b.lpsp_max) +
                        params.dg_violation_weight * static_cast<double>(ev.dg_violations) +
                        bound_excess(config.n_wt, b.max_wt) + bound_excess(config.n_pv, b.max_pv) +
                        bound_excess(config.n_dg, b.max_dg) + bound_excess(config.n_es, b.max_es);
  ov.feasible = worst_lpsp <= b.lpsp_max && ev.dg_violations == 0 && b.contains(config);
  ov.violation = ov.feasible ? 0.0 : std::max(excess, 1e-12);
  ev.renewable_proportion = renewable_proportion(traces, prob);
  ev.expected_lpsp = load_sum > 0.0 ? lps_sum / load_sum : 0.0;
  return ev;
}

Evaluation evaluate(const SizingConfig& config, const ScenarioSet& set, const ModelParams& params) {
  std::vector<OperationTrace> traces;
  return evaluate_with_traces(config, set, params, traces);
}

}  // namespace mgsizer
