// Constraint audit from decoded dispatch and raw scenario data only; it does
// not consult the LP layout or solver output.

#include <algorithm>
#include <cmath>

#include "bessplan/planner.hpp"

namespace bessplan {

namespace {

void worsen(double& slot, double v) { slot = std::max(slot, v); }

// Distance of v outside [lo, hi].
double outside(double v, double lo, double hi) { return std::max({lo - v, v - hi, 0.0}); }

}  // namespace

AuditReport audit_dispatch(const PlanProblem& p, const PlanSolution& s) {
  AuditReport a;
  const BatterySpec& b = p.battery;
  const int Y = p.horizon_years;
  const double dt = p.scenarios.step_minutes() / 60.0;
  const double p_lo = p.allow_export ? -p.congestion_limit_mw : 0.0;

  for (int y = 1; y <= Y; ++y) {
    double window = p.preinstalled_mwh;
    for (int k = std::max(1, y - b.life_years + 1); k <= y; ++k) {
      window += s.installs[k - 1];
      worsen(a.capacity_link, std::max(0.0, -s.installs[k - 1]));
      if (!p.allow_installs) worsen(a.capacity_link, std::abs(s.installs[k - 1]));
    }
    worsen(a.capacity_link, std::abs(s.capacity[y - 1] - window));
  }

  for (const DispatchDay& d : s.dispatch) {
    const ScenarioDay& raw = p.scenarios.day(d.year, d.scenario_id);
    const double cap = s.capacity[d.year - 1];
    const Index T = raw.micro_demand.size();
    for (Index t = 0; t < T; ++t) {
      const double load = raw.micro_demand.values[t] - p.gas_turbine_mw;
      const double solar = raw.micro_solar.values[t];
      const double curt = d.curtail[t];
      worsen(a.balance, std::abs(load - (solar - curt) - (d.discharge[t] - d.charge[t]) -
                                 d.purchase[t]));
      worsen(a.curtailment, p.allow_curtailment ? outside(curt, 0, std::max(solar, 0.0))
                                                : std::abs(curt));
      worsen(a.purchase_bounds, outside(d.purchase[t], p_lo, p.congestion_limit_mw));
      worsen(a.power_limits, outside(d.charge[t], 0, b.power_energy_ratio * cap));
      worsen(a.power_limits, outside(d.discharge[t], 0, b.power_energy_ratio * cap));
      worsen(a.soc_bounds, outside(d.soc[t], b.soc_min_frac * cap, b.soc_max_frac * cap));
      const double flow =
          (b.charge_efficiency * d.charge[t] - d.discharge[t] / b.discharge_efficiency) * dt;
      if (t > 0) worsen(a.soc_recursion, std::abs(d.soc[t] - d.soc[t - 1] - flow));
    }
    // Start-of-day energy implied by the first slot must equal end of day.
    const double start = d.soc[0] -
                         (b.charge_efficiency * d.charge[0] - d.discharge[0] / b.discharge_efficiency) * dt;
    worsen(a.daily_reset, std::abs(d.soc[T - 1] - start));
    if (b.initial_soc_frac) worsen(a.daily_reset, std::abs(start - *b.initial_soc_frac * cap));
    worsen(a.soc_bounds, outside(start, b.soc_min_frac * cap, b.soc_max_frac * cap));
  }
  return a;
}

}  // namespace bessplan
