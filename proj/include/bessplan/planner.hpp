#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bessplan/lp/lp.hpp"
#include "bessplan/market_model.hpp"
#include "bessplan/scenarios.hpp"

namespace bessplan {

struct BatterySpec {
  double soc_min_frac = 0.10;
  double soc_max_frac = 0.95;
  double power_energy_ratio = 2.0;  // P_max = ratio * E_max, 1/h
  int life_years = 10;
  double charge_efficiency = 1.0;
  double discharge_efficiency = 1.0;
  /// Start-of-day SOC as a fraction of capacity; empty leaves it free.
  std::optional<double> initial_soc_frac;

  void validate() const;
};

/// Battery purchase price by year (index 0 is year 1), $/kWh.
struct PricePath {
  std::string label;
  Vector cost_per_kwh;

  double at_year(int year) const { return cost_per_kwh[year - 1]; }
  PricePath scaled(double k) const;
};

enum class PriceCategory { A, B };

struct PricePathOptions {
  double start_min = 117.0;
  double start_max = 175.5;
  int cases = 10;
  double a_target = 100.0;  // category a reaches this at a_target_year, then holds
  int a_target_year = 15;
  double b_decay_percent = 1.0;
};

std::vector<PricePath> price_paths(PriceCategory category, int horizon,
                                   const PricePathOptions& opts = {});
/// Resolves labels such as "a-3" or "b-10".
PricePath price_path(const std::string& label, int horizon, const PricePathOptions& opts = {});

/// capacity_y = sum of installs from the last `life` years, year y included.
Vector capacity_schedule(const Vector& installs, int life, int horizon);

/// Undiscounted straight-line residual value, $.
double salvage_value(const Vector& installs, const PricePath& path, int life, int horizon);

/// (1 - rate)^year.
inline double discount_factor(double rate, int year) {
  double v = 1;
  for (int y = 0; y < year; ++y) v *= 1 - rate;
  return v;
}

struct FeedbackOptions {
  bool enabled = false;
  int max_iterations = 20;
  double tolerance = 1e-3;  // $/MWh on the largest price change
  double damping = 1.0;     // upper bound on the step toward each new LP solution
};

struct PlanProblem {
  int horizon_years = 15;
  ScenarioSet scenarios;
  BatterySpec battery;
  PricePath price_path;
  double discount_rate = 0.05;
  double congestion_limit_mw = 45.0;
  bool allow_export = false;
  bool allow_curtailment = true;
  double annualization_days = 365.0;
  double gas_turbine_mw = 0.0;
  /// Capacity available in every year at no cost.
  double preinstalled_mwh = 0.0;
  bool allow_installs = true;
  FeedbackOptions feedback;
  /// Slopes used by the feedback mode.
  PriceModelSchedule price_model;
  lp::SolveOptions solver;

  void validate() const;
  double step_hours() const;
  int slots() const { return scenarios.slots_per_day(); }
  /// Microgrid load seen at the battery bus, MW.
  Vector load(int year, int scenario_id) const;
};

enum class SlotVar { Charge, Discharge, Purchase, Soc, CapCopy, ChargeSlack, DischargeSlack,
                     SocHighSlack, SocLowSlack, Curtail };
enum class SlotRow { Balance, Soc, CapChain, ChargeLimit, DischargeLimit, SocHigh, SocLow };

/// Column and row positions of the planning LP.
struct PlanLayout {
  int years = 0;
  int n_scenarios = 0;
  int slots = 0;
  std::vector<int> scenario_ids;
  bool curtailment = false;
  bool fixed_initial_soc = false;

  Index install_col(int year) const { return year - 1; }
  Index capacity_col(int year) const { return years + year - 1; }
  Index col(SlotVar v, int year, int s, int t) const;
  Index link_row(int year) const { return year - 1; }
  Index row(SlotRow r, int year, int s, int t) const;
  Index initial_soc_row(int year, int s) const;

  int cols_per_slot() const { return curtailment ? 10 : 9; }
  static constexpr int kRowsPerSlot = 7;
  Index n_cols() const;
  Index n_rows() const;
  /// Installs plus charge, discharge, purchase and SOC per slot.
  Index structural_vars() const { return years + Index(years) * n_scenarios * slots * 4; }
  /// Balance, SOC recursion (cyclic, so it carries the reset) and capacity links.
  Index structural_rows() const { return Index(years) * n_scenarios * slots * 2 + years; }
};

struct PlanLp {
  lp::LpInstance lp;
  PlanLayout layout;
};

/// Energy prices are the composed scenario prices unless `prices` overrides
/// them, indexed like the layout's slot blocks.
PlanLp build_plan_lp(const PlanProblem& p, const std::vector<Vector>* prices = nullptr);

struct DispatchDay {
  int year = 0;
  int scenario_id = 0;
  double probability = 0;
  Vector load;       // MW
  Vector solar;      // MW
  Vector price;      // $/MWh applied
  Vector charge;     // MW
  Vector discharge;  // MW
  Vector purchase;   // MW
  Vector curtail;    // MW
  Vector soc;        // MWh at slot end
};

struct PlanCosts {
  Vector investment;   // per year, undiscounted $
  Vector energy;       // expected annual purchase cost per year, undiscounted $
  double salvage = 0;  // undiscounted $
  double discounted_total = 0;
};

struct FeedbackReport {
  bool enabled = false;
  int iterations = 0;
  bool converged = false;
  double max_price_change = 0;
};

struct PlanSolution {
  std::string label;
  Vector installs;  // MWh per year
  Vector capacity;  // MWh per year
  std::vector<DispatchDay> dispatch;
  PlanCosts costs;
  std::optional<double> baseline_cost;  // discounted, capacity 0
  double lp_objective = 0;
  lp::LpMethod method = lp::LpMethod::Simplex;
  std::int64_t iterations = 0;
  double solve_seconds = 0;
  FeedbackReport feedback;

  double savings() const { return baseline_cost ? *baseline_cost - costs.discounted_total : 0.0; }
  const DispatchDay& day(int year, int scenario_id) const;
};

/// Discounted cost of buying every slot's net load with no battery. Empty
/// when the congestion limit cannot cover it.
std::optional<double> baseline_cost(const PlanProblem& p);

PlanSolution solve_plan(const PlanProblem& p);
/// Price-feedback fixed point; see README for the iteration.
PlanSolution feedback_iterate(const PlanProblem& p);

/// Names the balance rows that cannot be met even with free slack elsewhere.
std::string diagnose_infeasibility(const PlanProblem& p);

struct AuditReport {
  double balance = 0;         // MW
  double soc_bounds = 0;      // MWh
  double soc_recursion = 0;   // MWh
  double daily_reset = 0;     // MWh
  double purchase_bounds = 0; // MW
  double power_limits = 0;    // MW
  double curtailment = 0;     // MW
  double capacity_link = 0;   // MWh

  double worst() const;
  bool ok(double tol = 1e-6) const { return worst() <= tol; }
};

/// Recomputes every constraint from the decoded solution, independent of the LP layout.
AuditReport audit_dispatch(const PlanProblem& p, const PlanSolution& s);

}  // namespace bessplan
