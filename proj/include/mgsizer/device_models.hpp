#pragma once

#include <span>

namespace mgsizer {

// Defaults follow the case-study parameter table. Fields the table leaves
// open (T_stc, ramps, p_min, BESS power ratings, fuel curve, end-of-life
// loss) carry documented engineering defaults.

struct WtParams {
  double v_cut_in = 3.0;          // m/s
  double v_cut_out = 25.0;        // m/s
  double v_rated = 12.0;          // m/s
  double p_rated = 100.0;         // kW
  double unit_cost = 100000.0;    // $
  double om_cost_per_hour = 1.14; // $/h

  void validate() const;
};

struct PvParams {
  double p_rated = 0.33;            // kW
  double g_stc = 1.0;               // kW/m^2
  double t_stc = 298.15;            // K
  double k_p = -0.004;              // 1/K
  double unit_cost = 400.0;         // $
  double om_cost_per_hour = 0.0057; // $/h

  void validate() const;
};

struct DgParams {
  double p_rated = 500.0;           // kW
  double p_min = 150.0;             // kW, lower bound while committed
  double ramp_up = 500.0;           // kW per step while on
  double ramp_down = 500.0;         // kW per step while on
  double startup_ramp = 500.0;      // kW reachable in the start-up step
  double shutdown_ramp = 500.0;     // kW droppable in the shut-down step
  double unit_cost = 40000.0;       // $
  double om_cost_per_hour = 0.0685; // $/h
  double fuel_rate = 0.25;          // L/kWh
  double co2_rate = 0.23204;        // kg/kWh
  double diesel_price = 1.11;       // $/L

  void validate() const;
};

struct BessParams {
  double e_nominal = 50.0;    // kWh
  double e_min = 5.0;         // kWh
  double p_ch_max = 25.0;     // kW
  double p_dc_max = 25.0;     // kW
  double eta_ch = 0.961;
  double eta_dc = 0.961;
  double voltage = 240.0;     // V
  double unit_cost = 10000.0; // $
  double kappa = 19300.0;
  double e_a = -31000.0;      // J/mol
  double gas_const = 8.314;   // J/(mol K)
  double z_exp = 0.554;
  double q_max_loss = 0.20;   // capacity-loss fraction at end of life
  double temp_env = 290.0;    // K
  // Initial (and post-replacement) energy as a fraction of the usable window.
  double initial_fraction = 0.5;

  double initial_energy() const { return e_min + initial_fraction * (e_nominal - e_min); }
  void validate() const;
};

struct BatteryState {
  double energy = 0.0;        // kWh
  double throughput_ah = 0.0; // Ah since last replacement
  double q_loss = 0.0;        // fraction of nominal capacity
  int n_replacements = 0;

  friend bool operator==(const BatteryState&, const BatteryState&) = default;
};

BatteryState fresh_battery(const BessParams& p);

// Four-piece turbine curve: cubic between cut-in and rated speed.
double wt_power(double wind_speed, const WtParams& p);

// Panel output with linear temperature derating, clamped at zero.
double pv_power(double irradiance, double temperature, const PvParams& p);

// Throughput-driven capacity fade kappa*exp(Ea/(R*T))*AH^z. The law yields
// percent; the returned value is a fraction of nominal capacity.
double capacity_loss(double throughput_ah, const BessParams& p);

// Throughput (Ah) at which capacity_loss reaches q_max_loss; +inf when the
// fade coefficient is zero.
double end_of_life_throughput(const BessParams& p);

// Adds (p_ch + p_dc) * dt converted from kW to A at the given voltage.
double step_throughput(double prev_ah, double p_ch, double p_dc, double dt, double voltage);

double actual_capacity(double q_loss, const BessParams& p);

// Advances one battery by one step. Power must already respect the ratings
// and the energy window; anything else is an InvariantViolation. Reaching
// q_max_loss replaces the battery: counters reset, energy returns to the
// initial level. Energy above the faded capacity after the step is lost.
BatteryState battery_step(const BatteryState& state, double p_ch, double p_dc, double dt,
                          const BessParams& p);

// Largest charge power (kW) that keeps the battery within its post-step
// faded capacity.
double charge_headroom(const BatteryState& state, double dt, const BessParams& p);
// Largest discharge power (kW) that keeps the battery above e_min.
double discharge_headroom(const BatteryState& state, double dt, const BessParams& p);

// Replacements at unit cost plus residual loss prorated against q_max_loss.
double degradation_cost(std::span<const BatteryState> states, const BessParams& p);

// Extends a one-period battery outcome (started fresh) to `periods`
// repetitions by accumulating throughput and reapplying the fade law,
// replacing at each end-of-life crossing.
BatteryState extrapolate_battery(const BatteryState& one_period, double periods,
                                 const BessParams& p);

}  // namespace mgsizer
