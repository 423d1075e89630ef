#include "bessplan/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "bessplan/error.hpp"
#include "text_util.hpp"

namespace bessplan {

using lp::kInf;
using lp::LpBuilder;
using lp::LpInstance;
using lp::LpResult;
using lp::LpStatus;

void BatterySpec::validate() const {
  if (!(soc_min_frac >= 0 && soc_min_frac < soc_max_frac && soc_max_frac <= 1))
    throw ConfigError("battery SOC limits must satisfy 0 <= min < max <= 1");
  if (!(power_energy_ratio > 0)) throw ConfigError("battery power/energy ratio must be positive");
  if (life_years < 1) throw ConfigError("battery life must be at least one year");
  for (double eta : {charge_efficiency, discharge_efficiency})
    if (!(eta > 0 && eta <= 1)) throw ConfigError("battery efficiencies must lie in (0, 1]");
  if (initial_soc_frac &&
      !(*initial_soc_frac >= soc_min_frac && *initial_soc_frac <= soc_max_frac))
    throw ConfigError("initial SOC fraction must lie within the SOC limits");
}

PricePath PricePath::scaled(double k) const {
  return {label, cost_per_kwh * k};
}

std::vector<PricePath> price_paths(PriceCategory category, int horizon,
                                   const PricePathOptions& opts) {
  if (horizon < 1) throw ConfigError("horizon must be at least one year");
  if (opts.cases < 1) throw ConfigError("need at least one price case");
  if (category == PriceCategory::A && opts.a_target_year < 2)
    throw ConfigError("category a target year must be at least 2");
  std::vector<PricePath> out;
  const char prefix = category == PriceCategory::A ? 'a' : 'b';
  for (int k = 1; k <= opts.cases; ++k) {
    const double p0 = opts.cases == 1 ? opts.start_min
                                      : opts.start_min + (k - 1) * (opts.start_max - opts.start_min) /
                                                             (opts.cases - 1);
    PricePath path;
    path.label = std::string(1, prefix) + "-" + std::to_string(k);
    path.cost_per_kwh.resize(horizon);
    for (int y = 1; y <= horizon; ++y) {
      if (category == PriceCategory::A) {
        const double f = std::min(y - 1, opts.a_target_year - 1) / double(opts.a_target_year - 1);
        path.cost_per_kwh[y - 1] = p0 + (opts.a_target - p0) * f;
      } else {
        path.cost_per_kwh[y - 1] = p0 * std::pow(1 - opts.b_decay_percent / 100, y - 1);
      }
    }
    out.push_back(std::move(path));
  }
  return out;
}

PricePath price_path(const std::string& label, int horizon, const PricePathOptions& opts) {
  const auto bad = [&] { return ConfigError("unknown price case '" + label + "'"); };
  if (label.size() < 3 || label[1] != '-' || (label[0] != 'a' && label[0] != 'b')) throw bad();
  int k = 0;
  try {
    std::size_t used = 0;
    k = std::stoi(label.substr(2), &used);
    if (used != label.size() - 2) throw bad();
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (k < 1 || k > opts.cases) throw bad();
  return price_paths(label[0] == 'a' ? PriceCategory::A : PriceCategory::B, horizon, opts)[k - 1];
}

Vector capacity_schedule(const Vector& installs, int life, int horizon) {
  Vector cap = Vector::Zero(horizon);
  for (int y = 1; y <= horizon; ++y)
    for (int k = std::max(1, y - life + 1); k <= y && k <= installs.size(); ++k)
      cap[y - 1] += installs[k - 1];
  return cap;
}

namespace {

double residual_fraction(int install_year, int life, int horizon) {
  return std::max(0, life - (horizon - install_year + 1)) / double(life);
}

}  // namespace

double salvage_value(const Vector& installs, const PricePath& path, int life, int horizon) {
  double total = 0;
  for (int y = 1; y <= horizon && y <= installs.size(); ++y)
    total += path.at_year(y) * 1000.0 * installs[y - 1] * residual_fraction(y, life, horizon);
  return total;
}

void PlanProblem::validate() const {
  if (horizon_years < 1) throw ConfigError("horizon must be at least one year");
  battery.validate();
  if (price_path.cost_per_kwh.size() < horizon_years)
    throw ConfigError("price path '" + price_path.label + "' is shorter than the horizon");
  for (Index y = 0; y < horizon_years; ++y)
    if (!(price_path.cost_per_kwh[y] >= 0) || !std::isfinite(price_path.cost_per_kwh[y]))
      throw ConfigError("battery prices must be finite and nonnegative");
  if (!(discount_rate >= 0 && discount_rate < 1))
    throw ConfigError("discount rate must lie in [0, 1)");
  if (!(congestion_limit_mw >= 0)) throw ConfigError("congestion limit must be nonnegative");
  if (!(annualization_days > 0)) throw ConfigError("annualization days must be positive");
  if (!(preinstalled_mwh >= 0)) throw ConfigError("preinstalled capacity must be nonnegative");
  if (feedback.enabled) {
    if (feedback.max_iterations < 1) throw ConfigError("feedback needs at least one iteration");
    if (!(feedback.tolerance > 0)) throw ConfigError("feedback tolerance must be positive");
    if (!(feedback.damping > 0 && feedback.damping <= 1))
      throw ConfigError("feedback damping must lie in (0, 1]");
  }
  if (scenarios.horizon < horizon_years)
    throw BuildError("scenario set covers " + std::to_string(scenarios.horizon) +
                     " years, plan needs " + std::to_string(horizon_years));
  if (scenarios.scenarios.empty()) throw BuildError("scenario set is empty");
  const auto issues = bessplan::validate(scenarios);
  if (!issues.empty()) throw BuildError("scenario set: " + issues.front());
}

double PlanProblem::step_hours() const { return scenarios.step_minutes() / 60.0; }

Vector PlanProblem::load(int year, int scenario_id) const {
  return scenarios.day(year, scenario_id).micro_demand.values.array() - gas_turbine_mw;
}

Index PlanLayout::col(SlotVar v, int year, int s, int t) const {
  const Index block = (Index(year - 1) * n_scenarios + s) * slots + t;
  return 2 * Index(years) + block * cols_per_slot() + static_cast<int>(v);
}

Index PlanLayout::row(SlotRow r, int year, int s, int t) const {
  const Index block = (Index(year - 1) * n_scenarios + s) * slots + t;
  return years + block * kRowsPerSlot + static_cast<int>(r);
}

Index PlanLayout::initial_soc_row(int year, int s) const {
  return years + Index(years) * n_scenarios * slots * kRowsPerSlot +
         Index(year - 1) * n_scenarios + s;
}

Index PlanLayout::n_cols() const {
  return 2 * Index(years) + Index(years) * n_scenarios * slots * cols_per_slot();
}

Index PlanLayout::n_rows() const {
  return years + Index(years) * n_scenarios * slots * kRowsPerSlot +
         (fixed_initial_soc ? Index(years) * n_scenarios : 0);
}

namespace {

std::string slot_tag(int y, int id, int t) {
  return "_y" + std::to_string(y) + "_s" + std::to_string(id) + "_t" + std::to_string(t + 1);
}

double purchase_floor(const PlanProblem& p) {
  return p.allow_export ? -p.congestion_limit_mw : 0.0;
}

// Objective weight of one MWh bought in (year, scenario): v_y * days * Pr.
double energy_weight(const PlanProblem& p, int year, const Scenario& s) {
  return discount_factor(p.discount_rate, year) * p.annualization_days * s.probability;
}

}  // namespace

PlanLp build_plan_lp(const PlanProblem& p, const std::vector<Vector>* prices) {
  p.validate();
  const int Y = p.horizon_years;
  const int S = static_cast<int>(p.scenarios.scenarios.size());
  const int T = p.slots();
  const double dt = p.step_hours();
  const BatterySpec& b = p.battery;

  PlanLayout layout;
  layout.years = Y;
  layout.n_scenarios = S;
  layout.slots = T;
  layout.curtailment = p.allow_curtailment;
  layout.fixed_initial_soc = b.initial_soc_frac.has_value();
  for (const auto& s : p.scenarios.scenarios) layout.scenario_ids.push_back(s.id);

  LpBuilder lb;
  const double vY = discount_factor(p.discount_rate, Y);
  for (int y = 1; y <= Y; ++y) {
    const double price = p.price_path.at_year(y) * 1000.0;  // $/MWh of capacity
    const double cost = discount_factor(p.discount_rate, y) * price -
                        vY * price * residual_fraction(y, b.life_years, Y);
    lb.add_variable(0, p.allow_installs ? kInf : 0, cost, "u_y" + std::to_string(y));
  }
  for (int y = 1; y <= Y; ++y) lb.add_variable(0, kInf, 0, "cap_y" + std::to_string(y));
  for (int y = 1; y <= Y; ++y) {
    const Index r = lb.add_row(p.preinstalled_mwh, "link_y" + std::to_string(y));
    lb.add_coefficient(r, layout.capacity_col(y), 1);
    for (int k = std::max(1, y - b.life_years + 1); k <= y; ++k)
      lb.add_coefficient(r, layout.install_col(k), -1);
  }

  const double plo = purchase_floor(p);
  Index price_block = 0;
  for (int y = 1; y <= Y; ++y)
    for (int s = 0; s < S; ++s) {
      const Scenario& sc = p.scenarios.scenarios[s];
      const ScenarioDay& day = p.scenarios.day(y, sc.id);
      const Vector load = p.load(y, sc.id);
      const Vector& solar = day.micro_solar.values;
      const Vector& lambda = prices ? (*prices)[price_block] : day.price.values;
      ++price_block;
      if (lambda.size() != T || solar.size() != T)
        throw BuildError("scenario " + std::to_string(sc.id) + " year " + std::to_string(y) +
                         " does not have " + std::to_string(T) + " slots");
      const double w = energy_weight(p, y, sc) * dt;
      for (int t = 0; t < T; ++t) {
        const std::string tag = slot_tag(y, sc.id, t);
        lb.add_variable(0, kInf, 0, "c" + tag);
        lb.add_variable(0, kInf, 0, "d" + tag);
        lb.add_variable(plo, p.congestion_limit_mw, w * lambda[t], "p" + tag);
        lb.add_variable(0, kInf, 0, "e" + tag);
        lb.add_variable(0, kInf, 0, "k" + tag);
        lb.add_variable(0, kInf, 0, "sc" + tag);
        lb.add_variable(0, kInf, 0, "sd" + tag);
        lb.add_variable(0, kInf, 0, "sh" + tag);
        lb.add_variable(0, kInf, 0, "sl" + tag);
        if (p.allow_curtailment) lb.add_variable(0, std::max(0.0, solar[t]), 0, "x" + tag);

        const auto col = [&](SlotVar v, int tt = -1) {
          return layout.col(v, y, s, tt < 0 ? t : tt);
        };
        const int prev = (t + T - 1) % T;

        Index r = lb.add_row(load[t] - solar[t], "bal" + tag);
        lb.add_coefficient(r, col(SlotVar::Discharge), 1);
        lb.add_coefficient(r, col(SlotVar::Charge), -1);
        lb.add_coefficient(r, col(SlotVar::Purchase), 1);
        if (p.allow_curtailment) lb.add_coefficient(r, col(SlotVar::Curtail), -1);

        r = lb.add_row(0, "soc" + tag);
        lb.add_coefficient(r, col(SlotVar::Soc), 1);
        lb.add_coefficient(r, col(SlotVar::Soc, prev), -1);
        lb.add_coefficient(r, col(SlotVar::Charge), -b.charge_efficiency * dt);
        lb.add_coefficient(r, col(SlotVar::Discharge), dt / b.discharge_efficiency);

        r = lb.add_row(0, "kch" + tag);
        lb.add_coefficient(r, col(SlotVar::CapCopy), 1);
        lb.add_coefficient(r, t == 0 ? layout.capacity_col(y) : col(SlotVar::CapCopy, t - 1), -1);

        r = lb.add_row(0, "cmax" + tag);
        lb.add_coefficient(r, col(SlotVar::Charge), 1);
        lb.add_coefficient(r, col(SlotVar::ChargeSlack), 1);
        lb.add_coefficient(r, col(SlotVar::CapCopy), -b.power_energy_ratio);

        r = lb.add_row(0, "dmax" + tag);
        lb.add_coefficient(r, col(SlotVar::Discharge), 1);
        lb.add_coefficient(r, col(SlotVar::DischargeSlack), 1);
        lb.add_coefficient(r, col(SlotVar::CapCopy), -b.power_energy_ratio);

        r = lb.add_row(0, "ehi" + tag);
        lb.add_coefficient(r, col(SlotVar::Soc), 1);
        lb.add_coefficient(r, col(SlotVar::SocHighSlack), 1);
        lb.add_coefficient(r, col(SlotVar::CapCopy), -b.soc_max_frac);

        r = lb.add_row(0, "elo" + tag);
        lb.add_coefficient(r, col(SlotVar::Soc), 1);
        lb.add_coefficient(r, col(SlotVar::SocLowSlack), -1);
        lb.add_coefficient(r, col(SlotVar::CapCopy), -b.soc_min_frac);
      }
    }
  if (b.initial_soc_frac)
    for (int y = 1; y <= Y; ++y)
      for (int s = 0; s < S; ++s) {
        const Index r = lb.add_row(0, "soc0_y" + std::to_string(y) + "_s" +
                                          std::to_string(layout.scenario_ids[s]));
        lb.add_coefficient(r, layout.col(SlotVar::Soc, y, s, T - 1), 1);
        lb.add_coefficient(r, layout.col(SlotVar::CapCopy, y, s, T - 1), -*b.initial_soc_frac);
      }

  PlanLp out{lb.build(), layout};
  if (out.lp.n_vars != layout.n_cols() || out.lp.n_rows != layout.n_rows())
    throw BuildError("internal layout mismatch");
  return out;
}

std::optional<double> baseline_cost(const PlanProblem& p) {
  p.validate();
  const double dt = p.step_hours();
  const double plo = purchase_floor(p);
  double total = 0;
  for (int y = 1; y <= p.horizon_years; ++y)
    for (const Scenario& sc : p.scenarios.scenarios) {
      const ScenarioDay& day = p.scenarios.day(y, sc.id);
      const Vector load = p.load(y, sc.id);
      const double w = energy_weight(p, y, sc) * dt;
      for (Index t = 0; t < load.size(); ++t) {
        const double re = std::max(0.0, day.micro_solar.values[t]);
        const double lo = std::max(load[t] - re, plo);
        const double hi = std::min(p.allow_curtailment ? load[t] : load[t] - re,
                                   p.congestion_limit_mw);
        if (lo > hi + 1e-9) return std::nullopt;
        const double lambda = day.price.values[t];
        total += w * lambda * (lambda >= 0 ? lo : hi);
      }
    }
  return total;
}

const DispatchDay& PlanSolution::day(int year, int scenario_id) const {
  for (const auto& d : dispatch)
    if (d.year == year && d.scenario_id == scenario_id) return d;
  throw LookupError("no dispatch for year " + std::to_string(year) + ", scenario " +
                    std::to_string(scenario_id));
}

namespace {

// Prices per (year, scenario) block in layout order.
std::vector<Vector> scenario_prices(const PlanProblem& p) {
  std::vector<Vector> out;
  for (int y = 1; y <= p.horizon_years; ++y)
    for (const auto& sc : p.scenarios.scenarios) out.push_back(p.scenarios.day(y, sc.id).price.values);
  return out;
}

PlanSolution decode(const PlanProblem& p, const PlanLp& plan, const Vector& x,
                    const std::vector<Vector>& prices) {
  const PlanLayout& L = plan.layout;
  PlanSolution sol;
  sol.label = p.price_path.label;
  sol.installs.resize(L.years);
  sol.capacity.resize(L.years);
  for (int y = 1; y <= L.years; ++y) {
    sol.installs[y - 1] = x[L.install_col(y)];
    sol.capacity[y - 1] = x[L.capacity_col(y)];
  }
  const double dt = p.step_hours();
  const bool lossless = p.battery.charge_efficiency == 1.0 && p.battery.discharge_efficiency == 1.0;
  sol.costs.investment.resize(L.years);
  sol.costs.energy = Vector::Zero(L.years);
  Index block = 0;
  for (int y = 1; y <= L.years; ++y) {
    sol.costs.investment[y - 1] = p.price_path.at_year(y) * 1000.0 * sol.installs[y - 1];
    for (int s = 0; s < L.n_scenarios; ++s, ++block) {
      const Scenario& sc = p.scenarios.scenarios[s];
      DispatchDay d;
      d.year = y;
      d.scenario_id = sc.id;
      d.probability = sc.probability;
      d.load = p.load(y, sc.id);
      d.solar = p.scenarios.day(y, sc.id).micro_solar.values;
      d.price = prices[block];
      const auto take = [&](SlotVar v) {
        Vector out(L.slots);
        for (int t = 0; t < L.slots; ++t) out[t] = x[L.col(v, y, s, t)];
        return out;
      };
      d.charge = take(SlotVar::Charge);
      d.discharge = take(SlotVar::Discharge);
      d.purchase = take(SlotVar::Purchase);
      d.soc = take(SlotVar::Soc);
      d.curtail = L.curtailment ? take(SlotVar::Curtail) : Vector(Vector::Zero(L.slots));
      if (lossless) {
        // Charging and discharging together is a free alternative optimum
        // when lossless; report the net flow.
        const Vector net = d.charge - d.discharge;
        d.charge = net.cwiseMax(0.0);
        d.discharge = (-net).cwiseMax(0.0);
      }
      sol.costs.energy[y - 1] += p.annualization_days * sc.probability * dt * d.price.dot(d.purchase);
      sol.dispatch.push_back(std::move(d));
    }
  }
  sol.costs.salvage =
      salvage_value(sol.installs, p.price_path, p.battery.life_years, p.horizon_years);
  double total = 0;
  for (int y = 1; y <= L.years; ++y)
    total += discount_factor(p.discount_rate, y) *
             (sol.costs.investment[y - 1] + sol.costs.energy[y - 1]);
  sol.costs.discounted_total =
      total - discount_factor(p.discount_rate, p.horizon_years) * sol.costs.salvage;
  return sol;
}

LpResult run_lp(const PlanProblem& p, const PlanLp& plan) {
  LpResult r = lp::solve(plan.lp, p.solver);
  if (r.status == LpStatus::Optimal) return r;
  std::string msg = std::string("planning LP ") + lp::to_string(r.status);
  if (!r.message.empty()) msg += " (" + r.message + ")";
  if (r.status == LpStatus::Infeasible) {
    if (r.infeasible_row >= 0) msg += "; solver flagged row " + plan.lp.row_name(r.infeasible_row);
    msg += "; " + diagnose_infeasibility(p);
  }
  throw PlanError(msg);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

PlanSolution solve_plan(const PlanProblem& p) {
  if (p.feedback.enabled) return feedback_iterate(p);
  const auto t0 = std::chrono::steady_clock::now();
  const PlanLp plan = build_plan_lp(p);
  const LpResult r = run_lp(p, plan);
  PlanSolution sol = decode(p, plan, r.x, scenario_prices(p));
  sol.lp_objective = r.objective_value;
  sol.method = r.method;
  sol.iterations = r.iterations;
  sol.baseline_cost = baseline_cost(p);
  sol.solve_seconds = seconds_since(t0);
  return sol;
}

PlanSolution feedback_iterate(const PlanProblem& p) {
  const auto t0 = std::chrono::steady_clock::now();
  PlanLp plan = build_plan_lp(p);
  const PlanLayout& L = plan.layout;
  const double dt = p.step_hours();

  // Per purchase column: objective weight, exogenous price and price slope.
  struct Slot {
    Index col;
    double weight, base, alpha;
  };
  std::vector<Slot> slots;
  std::vector<Vector> prices = scenario_prices(p);
  Index block = 0;
  for (int y = 1; y <= L.years; ++y)
    for (int s = 0; s < L.n_scenarios; ++s, ++block) {
      const Scenario& sc = p.scenarios.scenarios[s];
      const double alpha = p.price_model.for_year(y)[sc.day_type].alpha;
      if (alpha < 0) throw ModelRejectedError("feedback needs nonnegative price slopes");
      for (int t = 0; t < L.slots; ++t)
        slots.push_back({L.col(SlotVar::Purchase, y, s, t), energy_weight(p, y, sc) * dt,
                         prices[block][t], alpha});
    }
  const auto price_at = [&](const Vector& x) {
    Vector lam(slots.size());
    for (std::size_t k = 0; k < slots.size(); ++k)
      lam[k] = slots[k].base + slots[k].alpha * x[slots[k].col];
    return lam;
  };

  LpResult r = run_lp(p, plan);
  Vector x = r.x;
  std::int64_t lp_iterations = r.iterations;
  Vector lam_prev(slots.size());
  for (std::size_t k = 0; k < slots.size(); ++k) lam_prev[k] = slots[k].base;
  Vector lam = price_at(x);

  FeedbackReport fb;
  fb.enabled = true;
  fb.iterations = 1;
  fb.max_price_change = (lam - lam_prev).cwiseAbs().maxCoeff();
  fb.converged = fb.max_price_change < p.feedback.tolerance;
  while (!fb.converged && fb.iterations < p.feedback.max_iterations) {
    for (std::size_t k = 0; k < slots.size(); ++k)
      plan.lp.objective[slots[k].col] = slots[k].weight * lam[k];
    r = run_lp(p, plan);
    lp_iterations += r.iterations;
    // Exact line search on the merit whose gradient is the current LP cost.
    const Vector dir = r.x - x;
    const double slope = plan.lp.objective.dot(dir);
    double curvature = 0;
    for (const Slot& s : slots) curvature += s.weight * s.alpha * dir[s.col] * dir[s.col];
    double theta = 0;
    if (slope < 0) theta = curvature > 0 ? std::min(-slope / curvature, 1.0) : 1.0;
    theta = std::min(theta, p.feedback.damping);
    x += theta * dir;
    lam_prev = lam;
    lam = price_at(x);
    ++fb.iterations;
    fb.max_price_change = (lam - lam_prev).cwiseAbs().maxCoeff();
    fb.converged = fb.max_price_change < p.feedback.tolerance;
  }

  std::size_t k = 0;
  for (auto& v : prices)
    for (Index t = 0; t < v.size(); ++t) v[t] = lam[k++];
  for (std::size_t j = 0; j < slots.size(); ++j)
    plan.lp.objective[slots[j].col] = slots[j].weight * lam[j];

  PlanSolution sol = decode(p, plan, x, prices);
  sol.lp_objective = plan.lp.objective.dot(x);
  sol.method = r.method;
  sol.iterations = lp_iterations;
  sol.feedback = fb;
  sol.baseline_cost = baseline_cost(p);
  sol.solve_seconds = seconds_since(t0);
  return sol;
}

std::string diagnose_infeasibility(const PlanProblem& p) {
  PlanLp plan = build_plan_lp(p);
  LpInstance& lp = plan.lp;
  const PlanLayout& L = plan.layout;
  lp.objective.setZero();
  // Elastic columns on every balance row: shortfall and surplus, unit cost.
  std::vector<Index> rows;
  for (int y = 1; y <= L.years; ++y)
    for (int s = 0; s < L.n_scenarios; ++s)
      for (int t = 0; t < L.slots; ++t) rows.push_back(L.row(SlotRow::Balance, y, s, t));
  const Index n0 = lp.n_vars;
  const Index extra = 2 * static_cast<Index>(rows.size());
  lp.n_vars += extra;
  lp.objective.conservativeResize(lp.n_vars);
  lp.lower.conservativeResize(lp.n_vars);
  lp.upper.conservativeResize(lp.n_vars);
  lp.objective.tail(extra).setOnes();
  lp.lower.tail(extra).setZero();
  lp.upper.tail(extra).setConstant(kInf);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    lp.triplets.emplace_back(rows[k], n0 + 2 * Index(k), 1.0);
    lp.triplets.emplace_back(rows[k], n0 + 2 * Index(k) + 1, -1.0);
  }
  if (!lp.col_names.empty()) lp.col_names.resize(lp.n_vars, "elastic");

  const LpResult r = lp::solve(lp, p.solver);
  if (!r.optimal()) return "elastic diagnosis did not solve";
  Index worst = -1;
  double gap = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double v = r.x[n0 + 2 * Index(k)] - r.x[n0 + 2 * Index(k) + 1];
    if (std::abs(v) > std::abs(gap)) {
      gap = v;
      worst = static_cast<Index>(k);
    }
  }
  if (worst < 0 || std::abs(gap) <= 1e-7)
    return "balance rows can all be met; the conflict lies in the battery constraints";
  std::ostringstream msg;
  msg << "balance row " << lp.row_name(rows[worst]) << " cannot be met: "
      << detail::format_fixed(std::abs(gap), 6) << " MW " << (gap > 0 ? "short" : "in surplus")
      << " at congestion limit " << p.congestion_limit_mw << " MW";
  return msg.str();
}

double AuditReport::worst() const {
  return std::max({balance, soc_bounds, soc_recursion, daily_reset, purchase_bounds,
                   power_limits, curtailment, capacity_link});
}

}  // namespace bessplan
