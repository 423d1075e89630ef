#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bessplan/clustering.hpp"
#include "bessplan/growth.hpp"
#include "bessplan/market_model.hpp"
#include "bessplan/profiles.hpp"

namespace bessplan {

inline constexpr int kScenarioCount = 16;

/// One joint (day type, solar level, wind level) representative day.
struct Scenario {
  int id = 0;  // 1..16
  DayType day_type = DayType::SWD;
  Level solar = Level::High;
  Level wind = Level::High;
  double probability = 0;

  std::string label() const;  // e.g. "SWD-HS-HW"
};

/// Table ordering: day type major, then wind level, then solar level
/// (1 = SWD/HS/HW, 2 = SWD/LS/HW, 3 = SWD/HS/LW, 4 = SWD/LS/LW, ...).
int scenario_id(DayType day, Level solar, Level wind);

DayTypeMap<double> day_probabilities(const DayTypeMap<int>& counts);

/// Probabilities are products of the independent marginals.
std::vector<Scenario> build_scenarios(const LevelProbabilities& solar,
                                      const LevelProbabilities& wind,
                                      const DayTypeMap<double>& day_probs);

struct LevelProfiles {
  Profile high;
  Profile low;

  const Profile& operator[](Level l) const { return l == Level::High ? high : low; }
  static LevelProfiles from(const ClusterResult& r) { return {r.high, r.low}; }
};

/// Year-one representative days for the market and the microgrid.
struct ScenarioInputs {
  DemandClusterSet market_demand;
  LevelProfiles market_solar;
  LevelProfiles market_wind;
  DemandClusterSet micro_demand;
  LevelProfiles micro_solar;
};

struct ScenarioDay {
  Profile demand;  // market
  Profile solar;
  Profile wind;
  Profile micro_demand;
  Profile micro_solar;
  Profile price;
};

struct ScenarioSet {
  std::vector<Scenario> scenarios;
  int horizon = 0;  // years 1..horizon
  std::map<std::pair<int, int>, ScenarioDay> per_year;  // (year, scenario id)

  const ScenarioDay& day(int year, int id) const;
  int slots_per_day() const;
  int step_minutes() const;

  /// All profiles resampled to `step` minutes.
  ScenarioSet resampled(int step) const;
  /// Keeps the listed scenario ids, renormalising probabilities.
  ScenarioSet subset(const std::vector<int>& ids) const;
};

/// Scenario days for one year; growth is applied (year - 1) times.
std::map<int, ScenarioDay> compose_year(int year, const std::vector<Scenario>& scenarios,
                                        const ScenarioInputs& inputs, const GrowthSpec& growth,
                                        const MicrogridGrowth& micro_growth,
                                        const PriceModel& price_model);

ScenarioSet compose_scenarios(int horizon, const std::vector<Scenario>& scenarios,
                              const ScenarioInputs& inputs, const GrowthSpec& growth,
                              const MicrogridGrowth& micro_growth,
                              const PriceModelSchedule& prices);

/// Violated invariants; empty when the set is well formed.
std::vector<std::string> validate(const ScenarioSet& set);

}  // namespace bessplan
