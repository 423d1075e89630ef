#include "bessplan/io.hpp"

#include <fstream>
#include <sstream>
#include <unistd.h>

#include "bessplan/error.hpp"
#include "text_util.hpp"

namespace bessplan {

namespace fs = std::filesystem;

namespace {

const char* method_name(lp::LpMethod m) {
  switch (m) {
    case lp::LpMethod::Simplex: return "simplex";
    case lp::LpMethod::InteriorPoint: return "interior-point";
    default: return "auto";
  }
}

Profile daily_from_json(const Json& j, int step, ProfileKind kind, const std::string& what) {
  Profile p = make_daily(vector_from_json(j, what), kind, step);
  p.validate();
  return p;
}

}  // namespace

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw SchemaError(what + ": expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SchemaError(what + ": element " + std::to_string(i) + " is not a number");
    v[static_cast<Index>(i)] = j[i].get<double>();
  }
  return v;
}

Json to_json(const ClusterResult& r) {
  Json j;
  j["high"] = to_json(r.high.values);
  j["low"] = to_json(r.low.values);
  Json a = Json::array();
  for (Level l : r.assignments) a.push_back(std::string(1, level_char(l)));
  j["assignments"] = std::move(a);
  j["step_minutes"] = r.high.step_minutes;
  j["inertia"] = r.inertia;
  j["iterations"] = r.iterations;
  const LevelProbabilities lp = level_probabilities(r);
  j["probability"] = {{"high", lp.high}, {"low", lp.low}};
  return j;
}

ClusterResult cluster_from_json(const Json& j, int step_minutes, ProfileKind kind) {
  if (!j.is_object() || !j.contains("high") || !j.contains("low") || !j.contains("assignments"))
    throw SchemaError("cluster document needs high, low and assignments");
  ClusterResult r;
  r.high = daily_from_json(j["high"], step_minutes, kind, "cluster high");
  r.low = daily_from_json(j["low"], step_minutes, kind, "cluster low");
  for (const Json& a : j["assignments"]) {
    const std::string s = a.is_string() ? a.get<std::string>() : "";
    if (s != "H" && s != "L") throw SchemaError("cluster assignments must be \"H\" or \"L\"");
    r.assignments.push_back(s == "H" ? Level::High : Level::Low);
  }
  r.inertia = j.value("inertia", 0.0);
  r.iterations = j.value("iterations", 0);
  return r;
}

Json to_json(const DemandClusterSet& s) {
  Json j;
  for (DayType t : kAllDayTypes) j[std::string(to_string(t))] = to_json(s[t].values);
  return j;
}

DemandClusterSet demand_clusters_from_json(const Json& j, int step_minutes) {
  DemandClusterSet s;
  for (DayType t : kAllDayTypes) {
    const std::string key(to_string(t));
    if (!j.contains(key)) throw SchemaError("demand clusters missing " + key);
    at(s.representative, t) = daily_from_json(j[key], step_minutes, ProfileKind::Demand, "demand " + key);
  }
  return s;
}

Json to_json(const PriceModel& m) {
  Json j;
  for (DayType t : kAllDayTypes) {
    const auto& c = at(m.coefficients, t);
    if (!c) continue;
    j[std::string(to_string(t))] = {{"alpha", c->alpha}, {"beta", c->beta}, {"rmse", c->rmse}};
  }
  return j;
}

PriceModel price_model_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("price model must be a JSON object");
  PriceModel m;
  for (const auto& [key, v] : j.items()) {
    const DayType t = parse_day_type(key);
    if (!v.is_object() || !v.contains("alpha") || !v.contains("beta") || !v["alpha"].is_number() ||
        !v["beta"].is_number())
      throw SchemaError("price model entry " + key + " needs numeric alpha and beta");
    m.set(t, {v["alpha"].get<double>(), v["beta"].get<double>(), v.value("rmse", 0.0)});
  }
  m.validate();
  return m;
}

Json to_json(const ScenarioSet& s) {
  Json j;
  j["horizon_years"] = s.horizon;
  j["step_minutes"] = s.step_minutes();
  Json sc = Json::array();
  for (const Scenario& x : s.scenarios)
    sc.push_back({{"id", x.id},
                  {"label", x.label()},
                  {"day_type", std::string(to_string(x.day_type))},
                  {"solar", std::string(1, level_char(x.solar))},
                  {"wind", std::string(1, level_char(x.wind))},
                  {"probability", x.probability}});
  j["scenarios"] = std::move(sc);
  Json days = Json::array();
  for (const auto& [key, d] : s.per_year)
    days.push_back({{"year", key.first},
                    {"scenario", key.second},
                    {"market_demand_mw", to_json(d.demand.values)},
                    {"market_solar_mw", to_json(d.solar.values)},
                    {"market_wind_mw", to_json(d.wind.values)},
                    {"micro_demand_mw", to_json(d.micro_demand.values)},
                    {"micro_solar_mw", to_json(d.micro_solar.values)},
                    {"price_usd_per_mwh", to_json(d.price.values)}});
  j["days"] = std::move(days);
  return j;
}

Json to_json(const PlanProblem& p, const PlanSolution& s) {
  Json j;
  j["label"] = s.label;
  j["horizon_years"] = p.horizon_years;
  j["step_minutes"] = p.scenarios.step_minutes();
  j["discount_rate"] = p.discount_rate;
  j["congestion_limit_mw"] = p.congestion_limit_mw;
  j["gas_turbine_mw"] = p.gas_turbine_mw;
  j["battery"] = {{"soc_min", p.battery.soc_min_frac},
                  {"soc_max", p.battery.soc_max_frac},
                  {"power_energy_ratio", p.battery.power_energy_ratio},
                  {"life_years", p.battery.life_years},
                  {"charge_efficiency", p.battery.charge_efficiency},
                  {"discharge_efficiency", p.battery.discharge_efficiency}};
  j["battery_price_usd_per_kwh"] = to_json(p.price_path.cost_per_kwh);
  j["installs_mwh"] = to_json(s.installs);
  j["capacity_mwh"] = to_json(s.capacity);
  Json costs;
  costs["investment_usd"] = to_json(s.costs.investment);
  costs["energy_usd"] = to_json(s.costs.energy);
  costs["salvage_usd"] = s.costs.salvage;
  costs["discounted_total_usd"] = s.costs.discounted_total;
  costs["baseline_usd"] = s.baseline_cost ? Json(*s.baseline_cost) : Json();
  costs["savings_usd"] = s.savings();
  j["costs"] = std::move(costs);
  j["lp"] = {{"objective", s.lp_objective},
             {"method", method_name(s.method)},
             {"iterations", s.iterations}};
  j["feedback"] = {{"enabled", s.feedback.enabled},
                   {"iterations", s.feedback.iterations},
                   {"converged", s.feedback.converged},
                   {"max_price_change", s.feedback.max_price_change}};
  const AuditReport a = audit_dispatch(p, s);
  j["audit"] = {{"balance_mw", a.balance},
                {"soc_bounds_mwh", a.soc_bounds},
                {"soc_recursion_mwh", a.soc_recursion},
                {"daily_reset_mwh", a.daily_reset},
                {"purchase_bounds_mw", a.purchase_bounds},
                {"power_limits_mw", a.power_limits},
                {"curtailment_mw", a.curtailment},
                {"capacity_link_mwh", a.capacity_link}};
  Json days = Json::array();
  for (const DispatchDay& d : s.dispatch)
    days.push_back({{"year", d.year},
                    {"scenario", d.scenario_id},
                    {"probability", d.probability},
                    {"load_mw", to_json(d.load)},
                    {"solar_mw", to_json(d.solar)},
                    {"price_usd_per_mwh", to_json(d.price)},
                    {"charge_mw", to_json(d.charge)},
                    {"discharge_mw", to_json(d.discharge)},
                    {"purchase_mw", to_json(d.purchase)},
                    {"curtail_mw", to_json(d.curtail)},
                    {"soc_mwh", to_json(d.soc)}});
  j["dispatch"] = std::move(days);
  return j;
}

std::string dispatch_csv(const DispatchDay& d) {
  std::string out = kDispatchHeader;
  out += '\n';
  for (Index t = 0; t < d.load.size(); ++t) {
    out += std::to_string(t + 1);
    for (double v : {d.load[t], d.solar[t], d.charge[t], d.discharge[t], d.purchase[t], d.soc[t],
                     d.price[t]}) {
      out += ',';
      out += detail::format_fixed(v, 6);
    }
    out += '\n';
  }
  return out;
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(1) + "\n"; }

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ParseError(tmp.string() + ": cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw ParseError(tmp.string() + ": write failed");
  }
  fs::rename(tmp, path);
}

void commit_directory(const fs::path& staging, const fs::path& dest) {
  if (fs::exists(dest)) {
    // Swap the old bundle aside first so a crash never leaves neither.
    const fs::path old = dest.string() + ".old" + std::to_string(::getpid());
    fs::rename(dest, old);
    fs::rename(staging, dest);
    fs::remove_all(old);
  } else {
    fs::rename(staging, dest);
  }
}

}  // namespace bessplan
