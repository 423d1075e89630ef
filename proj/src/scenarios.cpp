#include "bessplan/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bessplan/error.hpp"

namespace bessplan {

std::string Scenario::label() const {
  std::string s(to_string(day_type));
  s += '-';
  s += level_char(solar);
  s += "S-";
  s += level_char(wind);
  s += 'W';
  return s;
}

int scenario_id(DayType day, Level solar, Level wind) {
  return 4 * static_cast<int>(day) + 2 * (wind == Level::Low) + (solar == Level::Low) + 1;
}

DayTypeMap<double> day_probabilities(const DayTypeMap<int>& counts) {
  double total = 0;
  for (int c : counts) {
    if (c < 0) throw ValidationError("negative day count");
    total += c;
  }
  if (total <= 0) throw ValidationError("day counts sum to zero");
  DayTypeMap<double> p{};
  for (std::size_t i = 0; i < 4; ++i) p[i] = counts[i] / total;
  return p;
}

std::vector<Scenario> build_scenarios(const LevelProbabilities& solar,
                                      const LevelProbabilities& wind,
                                      const DayTypeMap<double>& day_probs) {
  auto check = [](double sum, const char* what) {
    if (std::abs(sum - 1.0) > 1e-9)
      throw ValidationError(std::string(what) + " probabilities sum to " + std::to_string(sum));
  };
  check(solar.high + solar.low, "solar level");
  check(wind.high + wind.low, "wind level");
  check(day_probs[0] + day_probs[1] + day_probs[2] + day_probs[3], "day type");
  for (double p : {solar.high, solar.low, wind.high, wind.low, day_probs[0], day_probs[1],
                   day_probs[2], day_probs[3]})
    if (p < 0 || p > 1) throw ValidationError("probability outside [0, 1]");

  std::vector<Scenario> out;
  for (DayType d : kAllDayTypes)
    for (Level w : {Level::High, Level::Low})
      for (Level s : {Level::High, Level::Low}) {
        Scenario sc;
        sc.id = scenario_id(d, s, w);
        sc.day_type = d;
        sc.solar = s;
        sc.wind = w;
        sc.probability = (s == Level::High ? solar.high : solar.low) *
                         (w == Level::High ? wind.high : wind.low) * at(day_probs, d);
        out.push_back(sc);
      }
  return out;
}

const ScenarioDay& ScenarioSet::day(int year, int id) const {
  auto it = per_year.find({year, id});
  if (it == per_year.end())
    throw CoverageError("scenario " + std::to_string(id) + " missing for year " +
                        std::to_string(year));
  return it->second;
}

int ScenarioSet::slots_per_day() const {
  if (per_year.empty()) return 0;
  return static_cast<int>(per_year.begin()->second.micro_demand.size());
}

int ScenarioSet::step_minutes() const {
  if (per_year.empty()) return 0;
  return per_year.begin()->second.micro_demand.step_minutes;
}

ScenarioSet ScenarioSet::resampled(int step) const {
  ScenarioSet out = *this;
  for (auto& [key, d] : out.per_year)
    for (Profile* p : {&d.demand, &d.solar, &d.wind, &d.micro_demand, &d.micro_solar, &d.price})
      *p = resample(*p, step);
  return out;
}

ScenarioSet ScenarioSet::subset(const std::vector<int>& ids) const {
  ScenarioSet out;
  out.horizon = horizon;
  double total = 0;
  for (int id : ids) {
    auto it = std::find_if(scenarios.begin(), scenarios.end(),
                           [id](const Scenario& s) { return s.id == id; });
    if (it == scenarios.end()) throw ConfigError("unknown scenario id " + std::to_string(id));
    out.scenarios.push_back(*it);
    total += it->probability;
  }
  if (!(total > 0)) throw ConfigError("selected scenarios have zero total probability");
  for (auto& s : out.scenarios) s.probability /= total;
  for (const auto& [key, d] : per_year)
    if (std::find(ids.begin(), ids.end(), key.second) != ids.end()) out.per_year.emplace(key, d);
  return out;
}

std::map<int, ScenarioDay> compose_year(int year, const std::vector<Scenario>& scenarios,
                                        const ScenarioInputs& in, const GrowthSpec& growth,
                                        const MicrogridGrowth& micro_growth,
                                        const PriceModel& price_model) {
  if (year < 1) throw ConfigError("years are numbered from 1");
  const int n = year - 1;
  std::map<int, ScenarioDay> out;
  for (const Scenario& sc : scenarios) {
    ScenarioDay d;
    d.demand = in.market_demand[sc.day_type];
    d.solar = in.market_solar[sc.solar];
    d.wind = in.market_wind[sc.wind];
    d.micro_demand = in.micro_demand[sc.day_type];
    d.micro_solar = in.micro_solar[sc.solar];
    for (int y = 0; y < n; ++y) {
      d.demand = grow_demand(d.demand, at(growth.adgp, sc.day_type));
      d.solar = grow_solar(d.solar, growth.asg_percent);
      d.wind = grow_wind(d.wind, growth.awg_percent);
      d.micro_demand = grow_demand(d.micro_demand, micro_growth.demand_percent);
      d.micro_solar = grow_solar(d.micro_solar, micro_growth.solar_percent);
    }
    d.price = eval_price(price_model, sc.day_type, net_demand({d.demand, d.solar, d.wind}));
    out.emplace(sc.id, std::move(d));
  }
  return out;
}

ScenarioSet compose_scenarios(int horizon, const std::vector<Scenario>& scenarios,
                              const ScenarioInputs& inputs, const GrowthSpec& growth,
                              const MicrogridGrowth& micro_growth,
                              const PriceModelSchedule& prices) {
  if (horizon < 1) throw ConfigError("horizon must be at least one year");
  ScenarioSet set;
  set.scenarios = scenarios;
  set.horizon = horizon;
  for (int y = 1; y <= horizon; ++y)
    for (auto& [id, day] :
         compose_year(y, scenarios, inputs, growth, micro_growth, prices.for_year(y)))
      set.per_year.emplace(std::make_pair(y, id), std::move(day));
  return set;
}

std::vector<std::string> validate(const ScenarioSet& set) {
  std::vector<std::string> issues;
  double total = 0;
  for (const auto& s : set.scenarios) {
    total += s.probability;
    if (s.probability < 0 || s.probability > 1)
      issues.push_back("scenario " + std::to_string(s.id) + ": probability outside [0, 1]");
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probability sum " << total << " != 1";
    issues.push_back(msg.str());
  }
  if (set.horizon < 1) issues.push_back("horizon < 1");
  const int slots = set.slots_per_day();
  for (int y = 1; y <= set.horizon; ++y)
    for (const auto& s : set.scenarios) {
      auto it = set.per_year.find({y, s.id});
      if (it == set.per_year.end()) {
        issues.push_back("missing (year " + std::to_string(y) + ", scenario " +
                         std::to_string(s.id) + ")");
        continue;
      }
      const ScenarioDay& d = it->second;
      for (const Profile* p :
           {&d.demand, &d.solar, &d.wind, &d.micro_demand, &d.micro_solar, &d.price})
        if (p->size() != slots || p->size() != p->samples_per_day()) {
          issues.push_back("(year " + std::to_string(y) + ", scenario " + std::to_string(s.id) +
                           "): profile is not a full day of " + std::to_string(slots) +
                           " slots");
          break;
        }
    }
  return issues;
}

}  // namespace bessplan
