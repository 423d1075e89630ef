#include "bessplan/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bessplan/error.hpp"
#include "text_util.hpp"

namespace bessplan {

namespace fs = std::filesystem;

namespace {

// Typed reads from one config section; unknown keys are rejected so that a
// misspelt --set does not silently do nothing.
class Section {
 public:
  Section(const Json& j, std::string name, std::set<std::string> keys) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw SchemaError(name_ + ": expected an object");
    for (const auto& [k, v] : j_.items())
      if (!keys.count(k)) throw SchemaError(name_ + ": unknown key '" + k + "'");
  }

  bool has(const std::string& k) const { return j_.contains(k) && !j_[k].is_null(); }
  const Json& raw(const std::string& k) const { return j_[k]; }
  std::string path(const std::string& k) const { return name_ + "." + k; }

  void read(const std::string& k, double& out) const {
    if (!has(k)) return;
    if (!j_[k].is_number()) throw SchemaError(path(k) + ": expected a number");
    out = j_[k].get<double>();
  }
  void read(const std::string& k, int& out) const {
    if (!has(k)) return;
    if (!j_[k].is_number_integer()) throw SchemaError(path(k) + ": expected an integer");
    out = j_[k].get<int>();
  }
  void read(const std::string& k, bool& out) const {
    if (!has(k)) return;
    if (!j_[k].is_boolean()) throw SchemaError(path(k) + ": expected true or false");
    out = j_[k].get<bool>();
  }
  void read(const std::string& k, std::string& out) const {
    if (!has(k)) return;
    if (!j_[k].is_string()) throw SchemaError(path(k) + ": expected a string");
    out = j_[k].get<std::string>();
  }

 private:
  const Json& j_;
  std::string name_;
};

Json section(const Json& doc, const char* key) {
  return doc.contains(key) && !doc[key].is_null() ? doc[key] : Json::object();
}

template <class T>
void read_day_map(const Section& s, const std::string& k, DayTypeMap<T>& out) {
  if (!s.has(k)) return;
  const Section m(s.raw(k), s.path(k), {"SWD", "SED", "NSWD", "NSED"});
  for (DayType t : kAllDayTypes) m.read(std::string(to_string(t)), at(out, t));
}

unsigned parse_weekday(const std::string& name) {
  static const char* names[] = {"Sun", "Mon", "Tue", "Wed", "Thu", "Fri", "Sat"};
  for (unsigned i = 0; i < 7; ++i)
    if (name == names[i]) return i;
  throw SchemaError("calendar.weekend_days: unknown day '" + name + "' (use Sun..Sat)");
}

lp::LpMethod parse_method(const std::string& s) {
  if (s == "auto") return lp::LpMethod::Auto;
  if (s == "simplex") return lp::LpMethod::Simplex;
  if (s == "interior-point") return lp::LpMethod::InteriorPoint;
  throw SchemaError("plan.solver: expected auto, simplex or interior-point");
}

// Arrays coarser than the ingest step (e.g. 24 hourly values) are held
// across the slots they cover.
DemandGrowth read_growth(const Json& j, const std::string& where, int slots) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_array()) throw SchemaError(where + ": expected a percent or an array of per-slot percents");
  const Vector v = vector_from_json(j, where);
  if (v.size() == 0 || slots % v.size() != 0)
    throw SchemaError(where + ": " + std::to_string(v.size()) + " values do not divide " +
                      std::to_string(slots) + " slots per day");
  const Index rep = slots / v.size();
  Vector out(slots);
  for (Index i = 0; i < slots; ++i) out[i] = v[i / rep];
  return out;
}

void parse_into(RunConfig& c, const Json& doc) {
  const Section top(doc, "config",
                    {"seed", "output_dir", "inputs", "calendar", "probabilities", "growth", "battery",
                     "plan", "price_paths", "feedback", "synth"});
  if (top.has("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw SchemaError("config.seed: expected a non-negative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (top.has("output_dir")) {
    std::string out;
    top.read("output_dir", out);
    c.output_dir = out;
  }

  {
    std::set<std::string> keys{"column_map", "step_minutes"};
    for (const char* n : kSeriesNames) keys.insert(n);
    const Json j = section(doc, "inputs");
    const Section s(j, "inputs", keys);
    for (const char* n : kSeriesNames) {
      std::string path;
      s.read(n, path);
      if (!path.empty()) c.inputs[n] = path;
    }
    if (s.has("column_map")) {
      if (!j["column_map"].is_object()) throw SchemaError("inputs.column_map: expected an object");
      for (const auto& [k, v] : j["column_map"].items()) {
        if (!v.is_string()) throw SchemaError("inputs.column_map." + k + ": expected a string");
        c.column_map[k] = v.get<std::string>();
      }
    }
    s.read("step_minutes", c.ingest_step_minutes);
  }

  {
    const Json j = section(doc, "calendar");
    const Section s(j, "calendar", {"summer_start", "summer_end", "weekend_days"});
    std::string v;
    if (s.has("summer_start")) {
      s.read("summer_start", v);
      c.calendar.summer_start = parse_month_day(v);
    }
    if (s.has("summer_end")) {
      s.read("summer_end", v);
      c.calendar.summer_end = parse_month_day(v);
    }
    if (s.has("weekend_days")) {
      if (!j["weekend_days"].is_array()) throw SchemaError("calendar.weekend_days: expected an array");
      c.calendar.weekend.fill(false);
      for (const Json& d : j["weekend_days"]) {
        if (!d.is_string()) throw SchemaError("calendar.weekend_days: expected day names");
        c.calendar.weekend[parse_weekday(d.get<std::string>())] = true;
      }
    }
  }

  if (doc.contains("probabilities") && !doc["probabilities"].is_null()) {
    const Section s(doc["probabilities"], "probabilities", {"solar_high", "wind_high", "day_counts"});
    ProbabilityOverride p;
    if (!s.has("solar_high") || !s.has("wind_high") || !s.has("day_counts"))
      throw SchemaError("probabilities: solar_high, wind_high and day_counts are all required");
    s.read("solar_high", p.solar_high);
    s.read("wind_high", p.wind_high);
    read_day_map(s, "day_counts", p.day_counts);
    c.probabilities = p;
  }

  {
    const Json j = section(doc, "growth");
    const Section s(j, "growth", {"asg_percent", "awg_percent", "adgp_percent", "microgrid_demand_percent",
                                  "microgrid_solar_percent"});
    const int slots = c.ingest_step_minutes > 0 ? kMinutesPerDay / c.ingest_step_minutes : 0;
    s.read("asg_percent", c.growth.asg_percent);
    s.read("awg_percent", c.growth.awg_percent);
    if (s.has("adgp_percent")) {
      const Json& a = j["adgp_percent"];
      if (a.is_object()) {
        const Section m(a, "growth.adgp_percent", {"SWD", "SED", "NSWD", "NSED"});
        for (DayType t : kAllDayTypes) {
          const std::string k(to_string(t));
          if (m.has(k)) at(c.growth.adgp, t) = read_growth(a[k], m.path(k), slots);
        }
      } else {
        const DemandGrowth g = read_growth(a, "growth.adgp_percent", slots);
        c.growth.adgp = {g, g, g, g};
      }
    }
    s.read("microgrid_demand_percent", c.micro_growth.demand_percent);
    s.read("microgrid_solar_percent", c.micro_growth.solar_percent);
  }

  {
    const Json j = section(doc, "battery");
    const Section s(j, "battery", {"soc_min", "soc_max", "power_energy_ratio", "life_years",
                                   "charge_efficiency", "discharge_efficiency", "initial_soc"});
    BatterySpec& b = c.plan.battery;
    s.read("soc_min", b.soc_min_frac);
    s.read("soc_max", b.soc_max_frac);
    s.read("power_energy_ratio", b.power_energy_ratio);
    s.read("life_years", b.life_years);
    s.read("charge_efficiency", b.charge_efficiency);
    s.read("discharge_efficiency", b.discharge_efficiency);
    if (s.has("initial_soc")) {
      double f = 0;
      s.read("initial_soc", f);
      b.initial_soc_frac = f;
    } else if (j.contains("initial_soc")) {
      b.initial_soc_frac.reset();
    }
  }

  {
    const Json j = section(doc, "plan");
    const Section s(j, "plan", {"horizon_years", "discount_rate", "congestion_limit_mw", "allow_export",
                                "allow_curtailment", "gas_turbine_mw", "annualization_days",
                                "preinstalled_mwh", "allow_installs", "step_minutes", "scenario_ids",
                                "solver"});
    PlanProblem& p = c.plan;
    s.read("horizon_years", p.horizon_years);
    s.read("discount_rate", p.discount_rate);
    s.read("congestion_limit_mw", p.congestion_limit_mw);
    s.read("allow_export", p.allow_export);
    s.read("allow_curtailment", p.allow_curtailment);
    s.read("gas_turbine_mw", p.gas_turbine_mw);
    s.read("annualization_days", p.annualization_days);
    s.read("preinstalled_mwh", p.preinstalled_mwh);
    s.read("allow_installs", p.allow_installs);
    s.read("step_minutes", c.plan_step_minutes);
    if (s.has("scenario_ids")) {
      if (!j["scenario_ids"].is_array()) throw SchemaError("plan.scenario_ids: expected an array");
      c.scenario_ids.clear();
      for (const Json& v : j["scenario_ids"]) {
        if (!v.is_number_integer()) throw SchemaError("plan.scenario_ids: expected integers");
        c.scenario_ids.push_back(v.get<int>());
      }
    }
    std::string method = "auto";
    s.read("solver", method);
    p.solver.method = parse_method(method);
  }

  {
    const Json j = section(doc, "price_paths");
    const Section s(j, "price_paths", {"cases", "start_min", "start_max", "cases_per_category", "a_target",
                                       "a_target_year", "b_decay_percent"});
    PricePathOptions& o = c.price_paths;
    s.read("start_min", o.start_min);
    s.read("start_max", o.start_max);
    s.read("cases_per_category", o.cases);
    s.read("a_target", o.a_target);
    s.read("a_target_year", o.a_target_year);
    s.read("b_decay_percent", o.b_decay_percent);
    if (s.has("cases")) {
      const Json& v = j["cases"];
      if (v.is_string()) {
        c.cases = expand_cases(v.get<std::string>());
      } else if (v.is_array()) {
        c.cases.clear();
        for (const Json& e : v) {
          if (!e.is_string()) throw SchemaError("price_paths.cases: expected labels");
          for (auto& l : expand_cases(e.get<std::string>())) c.cases.push_back(l);
        }
      } else {
        throw SchemaError("price_paths.cases: expected a list or a string");
      }
    }
  }

  {
    const Json j = section(doc, "feedback");
    const Section s(j, "feedback", {"enabled", "max_iterations", "tolerance", "damping"});
    FeedbackOptions& f = c.plan.feedback;
    s.read("enabled", f.enabled);
    s.read("max_iterations", f.max_iterations);
    s.read("tolerance", f.tolerance);
    s.read("damping", f.damping);
  }

  {
    const Json j = section(doc, "synth");
    const Section s(j, "synth", {"year", "step_minutes", "clear_probability", "windy_probability",
                                 "market_peak_mw", "market_base_fraction", "market_solar_mw",
                                 "market_wind_mw", "demand_noise", "micro_peak_mw", "micro_base_summer_mw",
                                 "micro_base_winter_mw", "micro_solar_mw", "price", "price_noise"});
    SynthOptions& o = c.synth;
    s.read("year", o.year);
    s.read("step_minutes", o.step_minutes);
    s.read("clear_probability", o.clear_probability);
    s.read("windy_probability", o.windy_probability);
    read_day_map(s, "market_peak_mw", o.market_peak_mw);
    s.read("market_base_fraction", o.market_base_fraction);
    s.read("market_solar_mw", o.market_solar_mw);
    s.read("market_wind_mw", o.market_wind_mw);
    s.read("demand_noise", o.demand_noise);
    read_day_map(s, "micro_peak_mw", o.micro_peak_mw);
    s.read("micro_base_summer_mw", o.micro_base_summer_mw);
    s.read("micro_base_winter_mw", o.micro_base_winter_mw);
    s.read("micro_solar_mw", o.micro_solar_mw);
    if (s.has("price")) o.price = price_model_from_json(j["price"]);
    s.read("price_noise", o.price_noise);
  }
  c.synth.seed = c.seed;
  c.synth.calendar = c.calendar;
}

}  // namespace

ProfileKind series_kind(const std::string& name) {
  if (name == "market_demand" || name == "micro_demand") return ProfileKind::Demand;
  if (name == "market_solar" || name == "micro_solar") return ProfileKind::Solar;
  if (name == "market_wind") return ProfileKind::Wind;
  if (name == "price") return ProfileKind::Price;
  throw SchemaError("unknown series '" + name + "'");
}

fs::path RunConfig::input_path(const std::string& name) const {
  auto it = inputs.find(name);
  if (it == inputs.end()) throw ConfigError("inputs." + name + " is not set");
  return it->second.is_absolute() ? it->second : base_dir / it->second;
}

void RunConfig::validate() const {
  for (const char* n : kSeriesNames)
    if (!inputs.count(n)) throw ConfigError(std::string("inputs.") + n + " is not set");
  if (ingest_step_minutes <= 0 || kMinutesPerDay % ingest_step_minutes != 0)
    throw ConfigError("inputs.step_minutes must divide a day");
  if (plan_step_minutes <= 0 || kMinutesPerDay % plan_step_minutes != 0 ||
      plan_step_minutes % ingest_step_minutes != 0)
    throw ConfigError("plan.step_minutes must divide a day and be a multiple of inputs.step_minutes");
  calendar.validate();
  if (probabilities) {
    const auto& p = *probabilities;
    if (p.solar_high < 0 || p.solar_high > 1 || p.wind_high < 0 || p.wind_high > 1)
      throw ConfigError("probabilities: level probabilities must lie in [0, 1]");
    for (int n : p.day_counts)
      if (n < 0) throw ConfigError("probabilities.day_counts must be non-negative");
  }
  growth.validate(kMinutesPerDay / ingest_step_minutes);
  micro_growth.validate();
  plan.battery.validate();
  if (plan.horizon_years < 1) throw ConfigError("plan.horizon_years must be at least 1");
  if (cases.empty()) throw ConfigError("price_paths.cases is empty");
  for (const auto& label : cases) price_path(label, plan.horizon_years, price_paths);
  std::set<std::string> seen;
  for (const auto& label : cases)
    if (!seen.insert(label).second) throw ConfigError("price case " + label + " listed twice");
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("--set expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;
  }
  Json* node = &doc;
  std::size_t pos = 0;
  while (true) {
    const auto dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot - pos);
    if (part.empty()) throw ConfigError("--set: empty path component in '" + key + "'");
    if (!node->is_object()) throw ConfigError("--set: '" + key + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = Json::object();
    pos = dot + 1;
  }
}

RunConfig parse_config(const Json& doc, const fs::path& base_dir) {
  RunConfig c;
  c.base_dir = base_dir;
  try {
    parse_into(c, doc);
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const fs::path& path, const std::vector<std::string>& overrides) {
  Json doc = read_json(path);
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_config(doc, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

std::vector<std::string> expand_cases(const std::string& list) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = list.find(',', pos);
    const std::string item(detail::trim(std::string_view(list).substr(pos, comma - pos)));
    pos = comma == std::string::npos ? list.size() + 1 : comma + 1;
    if (item.empty()) continue;
    const auto range = item.find("..");
    if (range == std::string::npos) {
      out.push_back(item);
      continue;
    }
    const std::string from(detail::trim(std::string_view(item).substr(0, range)));
    const std::string to(detail::trim(std::string_view(item).substr(range + 2)));
    const auto dash_a = from.find('-'), dash_b = to.find('-');
    if (dash_a == std::string::npos || dash_b == std::string::npos ||
        from.substr(0, dash_a) != to.substr(0, dash_b))
      throw ConfigError("bad case range '" + item + "'");
    double lo = 0, hi = 0;
    if (!detail::parse_double(from.substr(dash_a + 1), lo) || !detail::parse_double(to.substr(dash_b + 1), hi) ||
        lo != std::floor(lo) || hi != std::floor(hi) || lo > hi)
      throw ConfigError("bad case range '" + item + "'");
    for (int k = static_cast<int>(lo); k <= static_cast<int>(hi); ++k)
      out.push_back(from.substr(0, dash_a) + "-" + std::to_string(k));
  }
  if (out.empty()) throw ConfigError("no price cases in '" + list + "'");
  return out;
}

}  // namespace bessplan
