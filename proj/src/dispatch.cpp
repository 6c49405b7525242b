#include "mgsizer/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "mgsizer/csv.hpp"
#include "mgsizer/errors.hpp"

namespace mgsizer {
namespace {

constexpr double kDgTolerance = 1e-9;  // kW

struct DgWindow {
  bool can_off = true;
  bool can_on = true;
  double lo = 0.0;
  double hi = 0.0;
};

DgWindow window_for(const DgUnitState& u, const DgParams& p) {
  DgWindow w;
  if (u.on) {
    w.lo = std::max(p.p_min, u.output - p.ramp_down);
    w.hi = std::min(p.p_rated, u.output + p.ramp_up);
    w.can_off = u.output <= p.shutdown_ramp + kDgTolerance;
  } else {
    w.lo = p.p_min;
    w.hi = std::min(p.p_rated, p.startup_ramp);
    w.can_off = true;
  }
  w.can_on = w.lo <= w.hi + kDgTolerance && w.hi > 0.0;
  return w;
}

}  // namespace

void GridParams::validate() const {
  if (!(import_cap >= 0.0) || !(export_cap >= 0.0))
    throw ConfigError("grid: caps must be non-negative");
}

void SystemParams::validate() const {
  wt.validate();
  pv.validate();
  dg.validate();
  bess.validate();
  grid.validate();
  if (!(dt > 0.0)) throw ConfigError("dispatch: dt must be positive");
}

DispatchState initial_dispatch_state(const SizingConfig& config, const SystemParams& params) {
  DispatchState s;
  s.battery = fresh_battery(params.bess);
  s.dg.assign(static_cast<std::size_t>(std::max(config.n_dg, 0)), DgUnitState{});
  return s;
}

double StepRecord::balance_residual() const {
  return p_wt + p_pv + p_dg + p_dc - p_ch - p_grid - (p_load - unserved);
}

double lps_of_step(const StepRecord& r, LpsBasis basis) {
  if (basis == LpsBasis::delivered) return std::max(0.0, r.unserved);
  const double local = r.p_wt + r.p_pv + r.p_dg + r.p_dc - r.p_ch;
  const double short_kw = r.p_load - local;
  return short_kw > 1e-9 ? short_kw : 0.0;
}

StepOutcome dispatch_step(const SizingConfig& config, const HourInputs& in,
                          const DispatchState& state, const SystemParams& params, int t) {
  const double dt = params.dt;
  const auto& grid = params.grid;
  StepOutcome out;
  StepRecord& rec = out.record;
  DispatchState& next = out.state;
  next = state;
  rec.t = t;
  rec.p_load = in.load;

  const double wt_avail = config.n_wt * in.wt_per_unit;
  const double pv_avail = config.n_pv * in.pv_per_unit;
  const double renewables = wt_avail + pv_avail;
  const double residual = in.load - renewables;

  const double n_es = static_cast<double>(std::max(config.n_es, 0));
  const double ch_head = n_es > 0 ? n_es * charge_headroom(state.battery, dt, params.bess) : 0.0;
  const double dc_head = n_es > 0 ? n_es * discharge_headroom(state.battery, dt, params.bess) : 0.0;

  double p_dc = residual > 0.0 ? std::min(residual, dc_head) : 0.0;
  double gap = residual > 0.0 ? residual - p_dc : 0.0;

  const std::size_t units = state.dg.size();
  rec.dg_output.assign(units, 0.0);
  rec.dg_status.assign(units, 0);
  double p_dg = 0.0;
  std::vector<double> floor_kw(units, 0.0);
  for (std::size_t i = 0; i < units; ++i) {
    const DgUnitState& prev = state.dg[i];
    const DgWindow w = window_for(prev, params.dg);
    floor_kw[i] = w.lo;
    DgUnitState u;
    if (gap > 0.0 && w.can_on) {
      u = {std::clamp(gap, w.lo, w.hi), true};
    } else if (w.can_off) {
      u = {0.0, false};
    } else if (w.can_on) {
      u = {w.lo, true};  // must-run: cannot shut down within R^SD
    } else {
      // No ramp-feasible output exists; hold as close as possible. The
      // audit reports the step.
      u = {std::clamp(prev.output - params.dg.ramp_down, params.dg.p_min, params.dg.p_rated), true};
    }
    next.dg[i] = u;
    p_dg += u.output;
    gap -= u.output;
  }
  // A unit committed at its minimum can overshoot the need; take the excess
  // back from units running above their own lower bound.
  for (std::size_t i = 0; i < units && gap < 0.0; ++i) {
    if (!next.dg[i].on) continue;
    const double give = std::min(-gap, std::max(0.0, next.dg[i].output - floor_kw[i]));
    next.dg[i].output -= give;
    p_dg -= give;
    gap += give;
  }

  double net = renewables + p_dg + p_dc - in.load;  // > 0 surplus, < 0 deficit
  if (std::abs(net) < 1e-9) net = 0.0;              // rounding, not a real exchange
  double p_ch = 0.0;
  double p_import = 0.0;
  double p_export = 0.0;
  double curtailed = 0.0;
  double unserved = 0.0;
  if (net < 0.0) {
    p_import = std::min(-net, grid.import_cap);
    unserved = -net - p_import;
  } else if (net > 0.0) {
    const double back_off = std::min(net, p_dc);
    p_dc -= back_off;
    net -= back_off;
    p_ch = std::min(net, ch_head);
    net -= p_ch;
    p_export = std::min(net, grid.export_cap);
    net -= p_export;
    curtailed = std::min(net, renewables);
    net -= curtailed;
    // Must-run DG surplus nothing can absorb: back units off from the last.
    for (std::size_t i = units; i-- > 0 && net > 0.0;) {
      const double cut = std::min(net, next.dg[i].output);
      next.dg[i].output -= cut;
      next.dg[i].on = next.dg[i].output > 0.0;
      p_dg -= cut;
      net -= cut;
    }
  }

  for (std::size_t i = 0; i < units; ++i) {
    rec.dg_output[i] = next.dg[i].output;
    rec.dg_status[i] = next.dg[i].on ? 1 : 0;
    rec.dg_on += next.dg[i].on ? 1 : 0;
  }

  const double keep = renewables > 0.0 ? 1.0 - curtailed / renewables : 0.0;
  rec.p_wt = wt_avail * keep;
  rec.p_pv = pv_avail * keep;
  rec.curtailed = curtailed;
  rec.p_dg = p_dg;
  rec.p_ch = p_ch;
  rec.p_dc = p_dc;
  rec.p_grid = p_export - p_import;
  rec.unserved = unserved;
  rec.lps = lps_of_step(rec, grid.lps_basis);

  if (n_es > 0 && (p_ch > 0.0 || p_dc > 0.0))
    next.battery = battery_step(state.battery, p_ch / n_es, p_dc / n_es, dt, params.bess);
  return out;
}

OperationTrace simulate(const SizingConfig& config, const Scenario& scenario,
                        const SystemParams& params) {
  OperationTrace trace;
  DispatchState state = initial_dispatch_state(config, params);
  const std::size_t H = scenario.load.size();
  trace.steps.reserve(H);
  trace.bank_capacity.reserve(H);
  const double dt = params.dt;
  for (std::size_t t = 0; t < H; ++t) {
    const HourInputs in{scenario.wt[t], scenario.pv[t], scenario.load[t]};
    StepOutcome o = dispatch_step(config, in, state, params, static_cast<int>(t));
    const StepRecord& r = o.record;
    trace.dg_energy += r.p_dg * dt;
    trace.energy_bought += r.import_kw() * dt;
    trace.energy_sold += r.export_kw() * dt;
    trace.renewable_energy += (r.p_wt + r.p_pv) * dt;
    trace.load_energy += r.p_load * dt;
    state = std::move(o.state);
    trace.bank_capacity.push_back(std::max(config.n_es, 0) *
                                  actual_capacity(state.battery.q_loss, params.bess));
    trace.steps.push_back(std::move(o.record));
  }
  trace.diesel_liters = params.dg.fuel_rate * trace.dg_energy;
  trace.final_batteries.assign(static_cast<std::size_t>(std::max(config.n_es, 0)), state.battery);
  return trace;
}

double lpsp(const OperationTrace& trace) {
  double lps = 0.0;
  double load = 0.0;
  for (const auto& s : trace.steps) {
    lps += s.lps;
    load += s.p_load;
  }
  return load > 0.0 ? lps / load : 0.0;
}

std::vector<DgViolation> check_dg_feasibility(const OperationTrace& trace, const DgParams& dg) {
  std::vector<DgViolation> out;
  if (trace.steps.empty()) return out;
  const std::size_t units = trace.steps.front().dg_output.size();
  for (std::size_t i = 0; i < units; ++i) {
    double prev_p = 0.0;
    int prev_u = 0;
    for (const auto& s : trace.steps) {
      const double p = s.dg_output.at(i);
      const int u = s.dg_status.at(i);
      const int unit = static_cast<int>(i);
      const double lo = u * dg.p_min;
      const double hi = u * dg.p_rated;
      if (p < lo - kDgTolerance || p > hi + kDgTolerance) out.push_back({s.t, unit, "bounds"});
      if (p - prev_p > prev_u * dg.ramp_up + (1 - prev_u) * dg.startup_ramp + kDgTolerance)
        out.push_back({s.t, unit, "ramp_up"});
      if (prev_p - p > u * dg.ramp_down + (1 - u) * dg.shutdown_ramp + kDgTolerance)
        out.push_back({s.t, unit, "ramp_down"});
      const int v_su = std::max(0, u - prev_u);
      const int v_sd = std::max(0, prev_u - u);
      if (u < 0 || u > 1 || v_su + v_sd > 1 || u != prev_u + v_su - v_sd)
        out.push_back({s.t, unit, "commitment"});
      prev_p = p;
      prev_u = u;
    }
  }
  return out;
}

void write_trace_csv(std::ostream& out, const OperationTrace& trace) {
  out << "t,p_wt,p_pv,p_dg,p_ch,p_dc,p_grid,p_load,lps\n";
  for (const auto& s : trace.steps) {
    out << s.t << ',' << csv::format(s.p_wt) << ',' << csv::format(s.p_pv) << ','
        << csv::format(s.p_dg) << ',' << csv::format(s.p_ch) << ',' << csv::format(s.p_dc) << ','
        << csv::format(s.p_grid) << ',' << csv::format(s.p_load) << ',' << csv::format(s.lps)
        << '\n';
  }
}

}  // namespace mgsizer
