#pragma once

#include <span>
#include <vector>

#include "mgsizer/dispatch.hpp"
#include "mgsizer/scenarios.hpp"

namespace mgsizer {

struct DeviceBounds {
  int max_wt = 31;
  int max_pv = 16383;
  int max_dg = 15;
  int max_es = 255;
  double lpsp_max = 0.40;

  bool contains(const SizingConfig& c) const;
  void validate() const;
};

// Hourly buy/sell prices ($/kWh). Either one row shared by every scenario or
// one row per scenario; a one-entry row is a flat price.
struct TariffSchedule {
  std::vector<std::vector<double>> buy{{0.10}};
  std::vector<std::vector<double>> sell{{0.05}};

  double buy_price(std::size_t scenario, std::size_t hour) const;
  double sell_price(std::size_t scenario, std::size_t hour) const;
  void validate(std::size_t scenarios, std::size_t horizon) const;
};

struct ModelParams {
  SystemParams system;
  DeviceBounds bounds;
  TariffSchedule tariff;
  // Operational terms are the expected daily result scaled by this factor.
  double periods_per_year = 365.0;
  // Constraint-violation weight per DG audit violation.
  double dg_violation_weight = 0.01;

  void validate() const;
};

struct CostBreakdown {
  double c_init = 0.0;
  double c_om = 0.0;
  double c_dg_fuel = 0.0;
  double c_grid_buy = 0.0;
  double c_grid_sell = 0.0;
  double c_degradation = 0.0;
  double total = 0.0;

  double identity_total() const {
    return c_init + c_om + c_dg_fuel + c_grid_buy - c_grid_sell + c_degradation;
  }
};

struct ObjectiveVector {
  double cost = 0.0;  // $
  double pec = 0.0;   // kg CO2
  double lpsp = 0.0;  // worst scenario
  bool feasible = true;
  // 0 when feasible; otherwise LPSP excess + weighted DG violations + bound
  // excess. Drives constraint-domination between infeasible points.
  double violation = 0.0;

  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

struct Evaluation {
  ObjectiveVector objectives;
  CostBreakdown breakdown;
  double renewable_proportion = 0.0;
  double expected_lpsp = 0.0;
  std::size_t dg_violations = 0;
};

double cost_initial(const SizingConfig& c, const SystemParams& p);
double cost_om(const SizingConfig& c, double hours, const SystemParams& p);
// Traces and probabilities are index-aligned.
double cost_dg_fuel(std::span<const OperationTrace> traces, std::span<const double> prob,
                    double diesel_price);
struct GridCost {
  double buy = 0.0;
  double sell = 0.0;
};
GridCost cost_grid(std::span<const OperationTrace> traces, std::span<const double> prob,
                   const TariffSchedule& tariff, double dt);
double cost_degradation_expected(std::span<const std::vector<BatteryState>> finals,
                                 std::span<const double> prob, const BessParams& p);
double pec(std::span<const OperationTrace> traces, std::span<const double> prob, double co2_rate,
           double dt);
// Expected renewable energy delivered over expected load energy.
double renewable_proportion(std::span<const OperationTrace> traces, std::span<const double> prob);

// Simulates every scenario and assembles both objectives, feasibility and
// the annual cost breakdown. Out-of-bound configs are flagged, never thrown.
Evaluation evaluate(const SizingConfig& config, const ScenarioSet& set, const ModelParams& params);

// Same as evaluate, also returning the per-scenario traces.
Evaluation evaluate_with_traces(const SizingConfig& config, const ScenarioSet& set,
                                const ModelParams& params, std::vector<OperationTrace>& traces);

}  // namespace mgsizer
