#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "mgsizer/device_models.hpp"
#include "mgsizer/scenarios.hpp"

namespace mgsizer {

struct SizingConfig {
  int n_wt = 0;
  int n_pv = 0;
  int n_dg = 0;
  int n_es = 0;

  friend auto operator<=>(const SizingConfig&, const SizingConfig&) = default;
};

// Which supply counts against loss of power supply.
//   local:     on-site generation only; grid imports count as LPS
//              (LPS_t = load - (renewables + BESS net + DG)).
//   delivered: everything that reaches the load, grid imports included;
//              LPS is then only the demand left unserved under an import cap.
enum class LpsBasis { local, delivered };

struct GridParams {
  double import_cap = std::numeric_limits<double>::infinity();  // kW
  double export_cap = std::numeric_limits<double>::infinity();  // kW
  LpsBasis lps_basis = LpsBasis::local;

  void validate() const;
};

struct SystemParams {
  WtParams wt;
  PvParams pv;
  DgParams dg;
  BessParams bess;
  GridParams grid;
  double dt = 1.0;  // h

  void validate() const;
};

struct HourInputs {
  double wt_per_unit = 0.0;  // kW available per turbine
  double pv_per_unit = 0.0;  // kW available per panel
  double load = 0.0;         // kW
};

struct DgUnitState {
  double output = 0.0;  // kW
  bool on = false;

  friend bool operator==(const DgUnitState&, const DgUnitState&) = default;
};

struct DispatchState {
  // The n_es batteries are identical and always receive equal shares of the
  // aggregate power, so one representative state describes the whole bank.
  BatteryState battery;
  std::vector<DgUnitState> dg;
};

DispatchState initial_dispatch_state(const SizingConfig& config, const SystemParams& params);

struct StepRecord {
  int t = 0;
  double p_wt = 0.0;    // kW delivered (after any curtailment)
  double p_pv = 0.0;
  double p_dg = 0.0;
  double p_ch = 0.0;    // kW, aggregate over the bank
  double p_dc = 0.0;
  double p_grid = 0.0;  // kW, positive = export
  double p_load = 0.0;  // kW demand
  double lps = 0.0;     // kW
  double unserved = 0.0;   // kW of demand not supplied at all
  double curtailed = 0.0;  // kW of renewable output spilled
  int dg_on = 0;
  std::vector<double> dg_output;   // per unit, kW
  std::vector<std::uint8_t> dg_status;  // per unit, 1 = committed

  double import_kw() const { return p_grid < 0.0 ? -p_grid : 0.0; }
  double export_kw() const { return p_grid > 0.0 ? p_grid : 0.0; }
  // Supply minus demand; zero up to rounding for every dispatched step.
  double balance_residual() const;
};

struct StepOutcome {
  StepRecord record;
  DispatchState state;
};

// One merit-order step.
//   surplus:  charge BESS, then export, then curtail renewables;
//   deficit:  discharge BESS, then DG (index order, within ramp and
//             commitment windows), then import; the rest is unserved.
// DG units that cannot shut down inside their ramp limits keep running; the
// surplus they create backs off BESS discharge first, then follows the
// surplus order.
StepOutcome dispatch_step(const SizingConfig& config, const HourInputs& in,
                          const DispatchState& state, const SystemParams& params, int t = 0);

struct OperationTrace {
  std::vector<StepRecord> steps;
  std::vector<BatteryState> final_batteries;  // one per installed battery
  double diesel_liters = 0.0;
  double dg_energy = 0.0;        // kWh
  double energy_bought = 0.0;    // kWh
  double energy_sold = 0.0;      // kWh
  double renewable_energy = 0.0; // kWh delivered
  double load_energy = 0.0;      // kWh
  // Bank capacity (kWh, whole bank) after each step.
  std::vector<double> bank_capacity;
};

OperationTrace simulate(const SizingConfig& config, const Scenario& scenario,
                        const SystemParams& params);

double lps_of_step(const StepRecord& record, LpsBasis basis);

// Unserved fraction of demand over the trace; 0 when there is no load.
double lpsp(const OperationTrace& trace);

struct DgViolation {
  int t = 0;
  int unit = 0;
  std::string kind;  // "bounds", "ramp_up", "ramp_down", "commitment"
};

// Audits per-unit DG outputs against generation bounds, ramp limits with
// start-up/shut-down ramps, and the commitment recursion. Units start off.
std::vector<DgViolation> check_dg_feasibility(const OperationTrace& trace, const DgParams& dg);

// t, p_wt, p_pv, p_dg, p_ch, p_dc, p_grid, p_load, lps
void write_trace_csv(std::ostream& out, const OperationTrace& trace);

}  // namespace mgsizer
