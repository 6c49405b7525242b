#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mgsizer/dispatch.hpp"
#include "mgsizer/rng.hpp"

using namespace mgsizer;

namespace {

Scenario flat_scenario(std::size_t hours, double wt, double pv, double load) {
  return Scenario{Profile(hours, wt), Profile(hours, pv), Profile(hours, load), 1.0};
}

}  // namespace

TEST_CASE("renewables match load exactly") {
  SystemParams p;
  const SizingConfig c{2, 0, 1, 1};
  const auto s = initial_dispatch_state(c, p);
  const auto o = dispatch_step(c, HourInputs{50.0, 0.0, 100.0}, s, p);
  CHECK(o.record.p_dg == 0.0);
  CHECK(o.record.p_grid == 0.0);
  CHECK(o.record.p_ch == 0.0);
  CHECK(o.record.p_dc == 0.0);
  CHECK(o.record.lps == 0.0);
}

TEST_CASE("surplus charges the battery before exporting") {
  SystemParams p;
  p.bess.p_ch_max = 10.0;
  const SizingConfig c{1, 0, 0, 1};
  const auto s = initial_dispatch_state(c, p);
  const auto o = dispatch_step(c, HourInputs{110.0, 0.0, 100.0}, s, p);
  CHECK(o.record.p_ch == doctest::Approx(10.0));
  CHECK(o.record.p_grid == doctest::Approx(0.0));
  const auto more = dispatch_step(c, HourInputs{130.0, 0.0, 100.0}, s, p);
  CHECK(more.record.p_ch == doctest::Approx(10.0));
  CHECK(more.record.p_grid == doctest::Approx(20.0));  // export
}

TEST_CASE("deficit walks BESS, DG, then grid") {
  SystemParams p;
  p.bess.e_nominal = 200.0;
  p.bess.p_dc_max = 50.0;
  p.bess.initial_fraction = 1.0;
  const SizingConfig c{0, 0, 1, 1};
  const auto s = initial_dispatch_state(c, p);

  p.grid.lps_basis = LpsBasis::delivered;
  const auto o = dispatch_step(c, HourInputs{0.0, 0.0, 700.0}, s, p);
  CHECK(o.record.p_dc == doctest::Approx(50.0));
  CHECK(o.record.p_dg == doctest::Approx(500.0));
  CHECK(o.record.import_kw() == doctest::Approx(150.0));
  CHECK(o.record.lps == doctest::Approx(0.0));
  CHECK(std::abs(o.record.balance_residual()) <= 1e-9);

  // Local basis: the imported 150 kW counts as loss of supply.
  p.grid.lps_basis = LpsBasis::local;
  const auto l = dispatch_step(c, HourInputs{0.0, 0.0, 700.0}, s, p);
  CHECK(l.record.lps == doctest::Approx(150.0));
}

TEST_CASE("import cap leaves demand unserved") {
  SystemParams p;
  p.grid.import_cap = 30.0;
  p.grid.lps_basis = LpsBasis::delivered;
  const SizingConfig c{0, 0, 0, 0};
  const auto o = dispatch_step(c, HourInputs{0.0, 0.0, 100.0}, initial_dispatch_state(c, p), p);
  CHECK(o.record.unserved == doctest::Approx(70.0));
  CHECK(o.record.lps == doctest::Approx(70.0));
  CHECK(lps_of_step(o.record, LpsBasis::delivered) == doctest::Approx(70.0));
  CHECK(lps_of_step(o.record, LpsBasis::local) == doctest::Approx(100.0));
}

TEST_CASE("surplus past export cap is curtailed") {
  SystemParams p;
  p.grid.export_cap = 5.0;
  const SizingConfig c{1, 0, 0, 0};
  const auto o = dispatch_step(c, HourInputs{100.0, 0.0, 50.0}, initial_dispatch_state(c, p), p);
  CHECK(o.record.export_kw() == doctest::Approx(5.0));
  CHECK(o.record.curtailed == doctest::Approx(45.0));
  CHECK(o.record.p_wt == doctest::Approx(55.0));
  CHECK(std::abs(o.record.balance_residual()) <= 1e-9);
}

TEST_CASE("zero trace and lpsp consistency") {
  SystemParams p;
  const SizingConfig c{3, 10, 1, 2};
  const auto tr = simulate(c, flat_scenario(24, 0.0, 0.0, 0.0), p);
  CHECK(tr.steps.size() == 24);
  for (const auto& s : tr.steps) {
    CHECK(s.p_dg == 0.0);
    CHECK(s.p_grid == 0.0);
    CHECK(s.lps == 0.0);
  }
  CHECK(lpsp(tr) == 0.0);
  CHECK(tr.diesel_liters == 0.0);

  const auto deficit = simulate(SizingConfig{0, 0, 0, 0}, flat_scenario(24, 0.0, 0.0, 100.0), p);
  double lps = 0.0;
  double load = 0.0;
  for (const auto& s : deficit.steps) {
    lps += s.lps;
    load += s.p_load;
  }
  CHECK(lpsp(deficit) == doctest::Approx(lps / load));
  CHECK(lpsp(deficit) == doctest::Approx(1.0));
}

TEST_CASE("diesel liters follow dg energy") {
  SystemParams p;
  const SizingConfig c{0, 0, 2, 0};
  const auto tr = simulate(c, flat_scenario(24, 0.0, 0.0, 600.0), p);
  CHECK(tr.dg_energy == doctest::Approx(24 * 600.0));
  CHECK(tr.diesel_liters == doctest::Approx(p.dg.fuel_rate * tr.dg_energy));
  CHECK(check_dg_feasibility(tr, p.dg).empty());
}

TEST_CASE("ramp limits bind between steps") {
  SystemParams p;
  p.dg.ramp_up = 100.0;
  p.dg.ramp_down = 100.0;
  p.dg.startup_ramp = 200.0;
  p.dg.shutdown_ramp = 200.0;
  Scenario sc{Profile(6, 0.0), Profile(6, 0.0), Profile{400, 400, 400, 0, 0, 0}, 1.0};
  const auto tr = simulate(SizingConfig{0, 0, 1, 0}, sc, p);
  CHECK(tr.steps[0].p_dg == doctest::Approx(200.0));
  CHECK(tr.steps[1].p_dg == doctest::Approx(300.0));
  CHECK(tr.steps[2].p_dg == doctest::Approx(400.0));
  // 400 kW cannot shut down in one step: must run at 300, then 200 -> off.
  CHECK(tr.steps[3].p_dg == doctest::Approx(300.0));
  CHECK(tr.steps[4].p_dg == doctest::Approx(200.0));
  CHECK(tr.steps[5].p_dg == doctest::Approx(0.0));
  CHECK(check_dg_feasibility(tr, p.dg).empty());
  for (const auto& s : tr.steps) CHECK(std::abs(s.balance_residual()) <= 1e-9);
}

TEST_CASE("dg audit flags a broken trace") {
  SystemParams p;
  p.dg.ramp_up = 100.0;
  p.dg.startup_ramp = 200.0;
  OperationTrace tr;
  StepRecord a;
  a.dg_output = {200.0};
  a.dg_status = {1};
  StepRecord b = a;
  b.t = 1;
  b.dg_output = {450.0};
  StepRecord c = a;
  c.t = 2;
  c.dg_output = {100.0};  // below p_min while committed
  tr.steps = {a, b, c};
  const auto v = check_dg_feasibility(tr, p.dg);
  bool ramp = false;
  bool bounds = false;
  for (const auto& x : v) {
    ramp |= x.kind == "ramp_up";
    bounds |= x.kind == "bounds";
  }
  CHECK(ramp);
  CHECK(bounds);
}

TEST_CASE("reference sizing keeps every trace invariant") {
  SystemParams p;
  const SizingConfig c{31, 748, 8, 2};
  Rng rng(3);
  Scenario sc;
  for (int h = 0; h < 24; ++h) {
    sc.wt.push_back(100.0 * rng.uniform());
    sc.pv.push_back(0.33 * rng.uniform());
    sc.load.push_back(1000.0 + 3000.0 * rng.uniform());
  }
  sc.probability = 1.0;
  const auto tr = simulate(c, sc, p);
  REQUIRE(tr.steps.size() == 24);
  double prev_ah = 0.0;
  for (std::size_t i = 0; i < tr.steps.size(); ++i) {
    const auto& s = tr.steps[i];
    CHECK(std::abs(s.balance_residual()) <= 1e-9);
    CHECK(s.p_ch * s.p_dc == 0.0);
    CHECK(s.lps >= 0.0);
    CHECK(s.p_ch <= c.n_es * p.bess.p_ch_max + 1e-9);
    CHECK(s.p_dc <= c.n_es * p.bess.p_dc_max + 1e-9);
  }
  for (const auto& b : tr.final_batteries) {
    CHECK(b.throughput_ah >= prev_ah);
    CHECK(b.energy >= p.bess.e_min - 1e-9);
  }
  CHECK(tr.final_batteries.size() == 2);
  CHECK(tr.bank_capacity.size() == 24);
  CHECK(check_dg_feasibility(tr, p.dg).empty());
}

TEST_CASE("trace csv header") {
  SystemParams p;
  const auto tr = simulate(SizingConfig{1, 1, 1, 1}, flat_scenario(2, 10.0, 0.1, 50.0), p);
  std::ostringstream out;
  write_trace_csv(out, tr);
  const std::string text = out.str();
  CHECK(text.rfind("t,p_wt,p_pv,p_dg,p_ch,p_dc,p_grid,p_load,lps\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
