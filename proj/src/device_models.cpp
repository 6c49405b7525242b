#include "mgsizer/device_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mgsizer/errors.hpp"

namespace mgsizer {
namespace {

constexpr double kEnergyTolerance = 1e-9;  // kWh
constexpr double kPowerRelTolerance = 1e-12;

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

double fade_coefficient(const BessParams& p) {
  // Percent-per-Ah^z prefactor of the fade law.
  return p.kappa * std::exp(p.e_a / (p.gas_const * p.temp_env));
}

bool exceeds(double value, double limit) {
  return value > limit * (1.0 + kPowerRelTolerance) + kPowerRelTolerance;
}

}  // namespace

void WtParams::validate() const {
  require(0.0 < v_cut_in && v_cut_in < v_rated && v_rated < v_cut_out,
          "wt: require 0 < v_cut_in < v_rated < v_cut_out");
  require(p_rated > 0.0, "wt: p_rated must be positive");
  require(unit_cost >= 0.0 && om_cost_per_hour >= 0.0, "wt: costs must be non-negative");
}

void PvParams::validate() const {
  require(p_rated > 0.0, "pv: p_rated must be positive");
  require(g_stc > 0.0, "pv: g_stc must be positive");
  require(t_stc > 0.0, "pv: t_stc must be positive");
  require(unit_cost >= 0.0 && om_cost_per_hour >= 0.0, "pv: costs must be non-negative");
}

void DgParams::validate() const {
  require(p_rated > 0.0, "dg: p_rated must be positive");
  require(0.0 <= p_min && p_min <= p_rated, "dg: require 0 <= p_min <= p_rated");
  require(ramp_up >= 0.0 && ramp_down >= 0.0 && startup_ramp >= 0.0 && shutdown_ramp >= 0.0,
          "dg: ramp limits must be non-negative");
  require(unit_cost >= 0.0 && om_cost_per_hour >= 0.0 && fuel_rate >= 0.0 && co2_rate >= 0.0 &&
              diesel_price >= 0.0,
          "dg: costs and rates must be non-negative");
}

void BessParams::validate() const {
  require(0.0 <= e_min && e_min < e_nominal, "bess: require 0 <= e_min < e_nominal");
  require(p_ch_max >= 0.0 && p_dc_max >= 0.0, "bess: power ratings must be non-negative");
  require(0.0 < eta_ch && eta_ch <= 1.0 && 0.0 < eta_dc && eta_dc <= 1.0,
          "bess: efficiencies must lie in (0, 1]");
  require(voltage > 0.0, "bess: voltage must be positive");
  require(unit_cost >= 0.0, "bess: unit_cost must be non-negative");
  require(kappa >= 0.0, "bess: kappa must be non-negative");
  require(gas_const > 0.0 && temp_env > 0.0, "bess: gas_const and temp_env must be positive");
  require(z_exp > 0.0, "bess: z_exp must be positive");
  require(0.0 < q_max_loss && q_max_loss < 1.0, "bess: q_max_loss must lie in (0, 1)");
  require((1.0 - q_max_loss) * e_nominal > e_min,
          "bess: end-of-life capacity must stay above e_min");
  require(0.0 <= initial_fraction && initial_fraction <= 1.0,
          "bess: initial_fraction must lie in [0, 1]");
}

BatteryState fresh_battery(const BessParams& p) {
  return BatteryState{p.initial_energy(), 0.0, 0.0, 0};
}

double wt_power(double v, const WtParams& p) {
  if (v <= p.v_cut_in || v >= p.v_cut_out) return 0.0;
  if (v > p.v_rated) return p.p_rated;
  const double cin3 = p.v_cut_in * p.v_cut_in * p.v_cut_in;
  const double r3 = p.v_rated * p.v_rated * p.v_rated;
  return p.p_rated * (v * v * v - cin3) / (r3 - cin3);
}

double pv_power(double g, double t, const PvParams& p) {
  const double out = p.p_rated * (g / p.g_stc) * (1.0 + p.k_p * (t - p.t_stc));
  return std::max(0.0, out);
}

double capacity_loss(double ah, const BessParams& p) {
  if (ah <= 0.0) return 0.0;
  return fade_coefficient(p) * std::pow(ah, p.z_exp) / 100.0;
}

double end_of_life_throughput(const BessParams& p) {
  const double c = fade_coefficient(p);
  if (c <= 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(100.0 * p.q_max_loss / c, 1.0 / p.z_exp);
}

double step_throughput(double prev_ah, double p_ch, double p_dc, double dt, double voltage) {
  return prev_ah + (p_ch + p_dc) * 1000.0 * dt / voltage;
}

double actual_capacity(double q_loss, const BessParams& p) {
  return (1.0 - q_loss) * p.e_nominal;
}

BatteryState battery_step(const BatteryState& s, double p_ch, double p_dc, double dt,
                          const BessParams& p) {
  if (p_ch < 0.0 || p_dc < 0.0) throw InvariantViolation("battery_step: negative power");
  if (p_ch > 0.0 && p_dc > 0.0)
    throw InvariantViolation("battery_step: simultaneous charge and discharge");
  if (exceeds(p_ch, p.p_ch_max) || exceeds(p_dc, p.p_dc_max))
    throw InvariantViolation("battery_step: power rating exceeded");

  const double energy = s.energy + p.eta_ch * p_ch * dt - p_dc / p.eta_dc * dt;
  const double cap_now = actual_capacity(s.q_loss, p);
  if (energy < p.e_min - kEnergyTolerance || energy > cap_now + kEnergyTolerance)
    throw InvariantViolation("battery_step: energy leaves [e_min, actual capacity] (" +
                             std::to_string(energy) + " kWh)");

  BatteryState next = s;
  next.throughput_ah = step_throughput(s.throughput_ah, p_ch, p_dc, dt, p.voltage);
  next.q_loss = capacity_loss(next.throughput_ah, p);
  if (next.q_loss >= p.q_max_loss) {
    next.n_replacements += 1;
    next.throughput_ah = 0.0;
    next.q_loss = 0.0;
    next.energy = p.initial_energy();
    return next;
  }
  next.energy = std::clamp(energy, p.e_min, actual_capacity(next.q_loss, p));
  return next;
}

double charge_headroom(const BatteryState& s, double dt, const BessParams& p) {
  if (p.p_ch_max <= 0.0) return 0.0;
  const double cap_now = actual_capacity(s.q_loss, p);
  auto fits = [&](double pw) {
    const double e = s.energy + p.eta_ch * pw * dt;
    const double q = capacity_loss(step_throughput(s.throughput_ah, pw, 0.0, dt, p.voltage), p);
    const double cap = q >= p.q_max_loss ? cap_now : actual_capacity(q, p);
    return e <= cap;
  };
  if (fits(p.p_ch_max)) return p.p_ch_max;
  if (!fits(0.0)) return 0.0;
  double lo = 0.0;
  double hi = p.p_ch_max;
  for (int i = 0; i < 100 && hi - lo > 1e-12 * p.p_ch_max; ++i) {
    const double mid = 0.5 * (lo + hi);
    (fits(mid) ? lo : hi) = mid;
  }
  return lo;
}

double discharge_headroom(const BatteryState& s, double dt, const BessParams& p) {
  const double by_energy = std::max(0.0, s.energy - p.e_min) * p.eta_dc / dt;
  return std::min(p.p_dc_max, by_energy);
}

double degradation_cost(std::span<const BatteryState> states, const BessParams& p) {
  double total = 0.0;
  for (const auto& s : states)
    total += s.n_replacements * p.unit_cost + (s.q_loss / p.q_max_loss) * p.unit_cost;
  return total;
}

BatteryState extrapolate_battery(const BatteryState& one, double periods, const BessParams& p) {
  BatteryState out = one;
  const double eol = end_of_life_throughput(p);
  if (!std::isfinite(eol)) {
    out.n_replacements = static_cast<int>(std::llround(one.n_replacements * periods));
    out.throughput_ah = one.throughput_ah * periods;
    out.q_loss = 0.0;
    return out;
  }
  const double total = periods * (one.n_replacements * eol + one.throughput_ah);
  const double n = std::floor(total / eol);
  out.n_replacements = static_cast<int>(n);
  out.throughput_ah = std::max(0.0, total - n * eol);
  out.q_loss = capacity_loss(out.throughput_ah, p);
  return out;
}

}  // namespace mgsizer
