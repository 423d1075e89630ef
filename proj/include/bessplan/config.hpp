#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bessplan/growth.hpp"
#include "bessplan/io.hpp"
#include "bessplan/planner.hpp"
#include "bessplan/synth.hpp"

namespace bessplan {

/// Input series by role: market_demand, market_solar, market_wind, price,
/// micro_demand, micro_solar.
inline constexpr const char* kSeriesNames[] = {"market_demand", "market_solar", "market_wind",
                                               "price",         "micro_demand", "micro_solar"};
ProfileKind series_kind(const std::string& name);

struct ProbabilityOverride {
  double solar_high = 0;
  double wind_high = 0;
  DayTypeMap<int> day_counts{};
};

struct RunConfig {
  std::filesystem::path base_dir;  // relative paths resolve against this
  std::map<std::string, std::filesystem::path> inputs;
  std::map<std::string, std::string> column_map;
  int ingest_step_minutes = 15;

  CalendarRule calendar;
  /// Empty derives level probabilities and day counts from the data.
  std::optional<ProbabilityOverride> probabilities;
  GrowthSpec growth;
  MicrogridGrowth micro_growth;

  PlanProblem plan;  // scenarios and price path are filled per run
  int plan_step_minutes = 15;
  std::vector<int> scenario_ids;  // empty keeps all 16
  PricePathOptions price_paths;
  std::vector<std::string> cases{"a-1"};
  /// Also writes each case's LP as problem.mps in its bundle.
  bool dump_lp = false;

  std::filesystem::path output_dir{"out"};
  std::uint64_t seed = 2015;
  SynthOptions synth;

  std::filesystem::path input_path(const std::string& name) const;
  void validate() const;
};

/// Applies `key.path=value` to the raw document; the value is read as JSON
/// when it parses, else as a string.
void apply_override(Json& doc, const std::string& assignment);

RunConfig parse_config(const Json& doc, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Expands "a-1..a-10,b-3" into labels.
std::vector<std::string> expand_cases(const std::string& list);

}  // namespace bessplan
