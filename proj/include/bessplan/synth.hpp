#pragma once

#include <cstdint>

#include "bessplan/market_model.hpp"
#include "bessplan/profiles.hpp"

namespace bessplan {

/// Generator for a year of market and microgrid series with clear/overcast
/// and windy/calm days, standing in for ISO downloads.
struct SynthOptions {
  int year = 2015;
  int step_minutes = 60;
  std::uint64_t seed = 2015;
  CalendarRule calendar;

  double clear_probability = 0.30;
  double windy_probability = 0.40;

  DayTypeMap<double> market_peak_mw{42000, 36000, 33000, 30000};
  double market_base_fraction = 0.60;
  double market_solar_mw = 8000;
  double market_wind_mw = 5000;
  double demand_noise = 0.01;  // relative

  DayTypeMap<double> micro_peak_mw{42, 36, 35, 32};
  double micro_base_summer_mw = 34;
  double micro_base_winter_mw = 30;
  double micro_solar_mw = 10;

  /// Price = alpha * net demand + beta + noise.
  PriceModel price;
  double price_noise = 1.5;  // $/MWh standard deviation

  SynthOptions();
};

struct SynthSeries {
  Profile market_demand;
  Profile market_solar;
  Profile market_wind;
  Profile price;
  Profile micro_demand;
  Profile micro_solar;
};

SynthSeries synthesize(const SynthOptions& opts);

}  // namespace bessplan
