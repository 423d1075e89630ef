#include <cmath>

#include "bessplan/error.hpp"
#include "bessplan/scenarios.hpp"
#include "doctest.h"

using namespace bessplan;

namespace {

const DayTypeMap<int> kTableCounts{96, 36, 165, 68};
const LevelProbabilities kSolar{0.30, 0.70};
const LevelProbabilities kWind{0.40, 0.60};

Profile daily(double base, double amp, ProfileKind kind) {
  Vector v(96);
  for (int k = 0; k < 96; ++k) v[k] = base + amp * std::sin(3.14159265358979 * k / 96.0);
  return make_daily(v, kind);
}

ScenarioInputs toy_inputs() {
  ScenarioInputs in;
  const double demand_base[4] = {30000, 26000, 24000, 21000};
  const double micro_base[4] = {36, 34, 31, 30};
  for (DayType t : kAllDayTypes) {
    const auto i = static_cast<std::size_t>(t);
    in.market_demand.representative[i] = daily(demand_base[i], 6000, ProfileKind::Demand);
    in.micro_demand.representative[i] = daily(micro_base[i], 6, ProfileKind::Demand);
  }
  in.market_solar = {daily(0, 9000, ProfileKind::Solar), daily(0, 3000, ProfileKind::Solar)};
  in.market_wind = {daily(4000, 500, ProfileKind::Wind), daily(1000, 200, ProfileKind::Wind)};
  in.micro_solar = {daily(0, 2.6, ProfileKind::Solar), daily(0, 0.8, ProfileKind::Solar)};
  return in;
}

PriceModel toy_prices() {
  PriceModel m;
  m.set(DayType::SWD, {0.0021, -10, 0});
  m.set(DayType::SED, {0.0019, -5, 0});
  m.set(DayType::NSWD, {0.0018, -3, 0});
  m.set(DayType::NSED, {0.0017, 0, 0});
  return m;
}

}  // namespace

TEST_CASE("scenario numbering") {
  CHECK(scenario_id(DayType::SWD, Level::High, Level::High) == 1);
  CHECK(scenario_id(DayType::SWD, Level::Low, Level::Low) == 4);
  CHECK(scenario_id(DayType::NSWD, Level::Low, Level::Low) == 12);
  CHECK(scenario_id(DayType::NSED, Level::Low, Level::Low) == 16);
  const auto sc = build_scenarios(kSolar, kWind, day_probabilities(kTableCounts));
  REQUIRE(sc.size() == 16);
  for (int i = 0; i < 16; ++i) CHECK(sc[i].id == i + 1);
  CHECK(sc[0].label() == "SWD-HS-HW");
  CHECK(sc[3].label() == "SWD-LS-LW");
}

TEST_CASE("probabilities match the reference percentages") {
  const auto sc = build_scenarios(kSolar, kWind, day_probabilities(kTableCounts));
  const double table[16] = {3.2, 7.4, 4.7, 11.0, 1.2, 2.8, 1.8, 4.1,
                            5.4, 12.7, 8.1, 19.0, 2.2, 5.2, 3.4, 7.8};
  for (int i = 0; i < 16; ++i) {
    CAPTURE(i + 1);
    CHECK(std::abs(100 * sc[i].probability - table[i]) <= 0.05 + 1e-12);
  }
  CHECK(sc[0].probability == doctest::Approx(0.30 * 0.40 * 96 / 365).epsilon(1e-15));
  CHECK(100 * sc[0].probability == doctest::Approx(3.156).epsilon(1e-3));
  CHECK(100 * sc[11].probability == doctest::Approx(18.99).epsilon(1e-3));
  double total = 0;
  for (const auto& s : sc) total += s.probability;
  CHECK(std::abs(total - 1) <= 1e-12);
}

TEST_CASE("each probability is the product of its marginals") {
  const auto days = day_probabilities(kTableCounts);
  for (const auto& s : build_scenarios(kSolar, kWind, days)) {
    const double ps = s.solar == Level::High ? 0.30 : 0.70;
    const double pw = s.wind == Level::High ? 0.40 : 0.60;
    CHECK(s.probability == ps * pw * at(days, s.day_type));
  }
}

TEST_CASE("bad marginals are rejected") {
  const auto days = day_probabilities(kTableCounts);
  CHECK_THROWS_AS(build_scenarios({0.3, 0.6}, kWind, days), ValidationError);
  CHECK_THROWS_AS(build_scenarios({1.2, -0.2}, kWind, days), ValidationError);
  DayTypeMap<double> short_days = days;
  short_days[0] -= 0.01;
  CHECK_THROWS_AS(build_scenarios(kSolar, kWind, short_days), ValidationError);
}

TEST_CASE("composition applies growth per year") {
  const auto sc = build_scenarios(kSolar, kWind, day_probabilities(kTableCounts));
  const ScenarioInputs in = toy_inputs();
  GrowthSpec g;
  const MicrogridGrowth mg;
  PriceModelSchedule prices{toy_prices(), {}};
  const ScenarioSet set = compose_scenarios(3, sc, in, g, mg, prices);
  CHECK(validate(set).empty());

  const ScenarioDay& y1 = set.day(1, 1);
  CHECK(y1.solar.values == in.market_solar.high.values);
  CHECK(y1.demand.values == in.market_demand[DayType::SWD].values);
  CHECK(y1.micro_solar.values == in.micro_solar.high.values);

  const ScenarioDay& y2 = set.day(2, 1);
  CHECK((y2.solar.values - in.market_solar.high.values * 1.07).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((y2.wind.values - in.market_wind.high.values * 1.07).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((y2.demand.values - in.market_demand[DayType::SWD].values * 1.02).cwiseAbs().maxCoeff() <=
        1e-9);
  CHECK((y2.micro_demand.values - in.micro_demand[DayType::SWD].values * 1.03)
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  // Price recomputed independently from the composed net demand.
  const PriceCoefficients c = toy_prices()[DayType::SWD];
  for (int k = 0; k < 96; ++k) {
    const double net = y2.demand.values[k] - y2.solar.values[k] - y2.wind.values[k];
    CHECK(y2.price.values[k] == doctest::Approx(c.alpha * net + c.beta).epsilon(1e-12));
  }
}

TEST_CASE("low-renewable summer weekday is the priciest summer-weekday scenario") {
  const auto sc = build_scenarios(kSolar, kWind, day_probabilities(kTableCounts));
  const ScenarioSet set =
      compose_scenarios(2, sc, toy_inputs(), GrowthSpec{}, MicrogridGrowth{}, {toy_prices(), {}});
  for (int y = 1; y <= 2; ++y) {
    const Vector& p1 = set.day(y, 1).price.values;
    const Vector& p4 = set.day(y, 4).price.values;
    for (int k = 0; k < 96; ++k) CHECK(p4[k] >= p1[k]);
  }
}

TEST_CASE("validation diagnostics") {
  const auto sc = build_scenarios(kSolar, kWind, day_probabilities(kTableCounts));
  ScenarioSet set =
      compose_scenarios(2, sc, toy_inputs(), GrowthSpec{}, MicrogridGrowth{}, {toy_prices(), {}});
  CHECK(validate(set).empty());

  ScenarioSet halved = set;
  for (auto& s : halved.scenarios) s.probability *= 0.5;
  auto issues = validate(halved);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].find("probability sum") != std::string::npos);

  ScenarioSet missing = set;
  missing.per_year.erase({2, 7});
  issues = validate(missing);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0] == "missing (year 2, scenario 7)");
  CHECK_THROWS_AS(missing.day(2, 7), CoverageError);
}

TEST_CASE("resampling and subsets") {
  const auto sc = build_scenarios(kSolar, kWind, day_probabilities(kTableCounts));
  const ScenarioSet set =
      compose_scenarios(2, sc, toy_inputs(), GrowthSpec{}, MicrogridGrowth{}, {toy_prices(), {}});
  const ScenarioSet hourly = set.resampled(60);
  CHECK(hourly.slots_per_day() == 24);
  CHECK(hourly.step_minutes() == 60);
  CHECK(hourly.day(1, 3).micro_demand.energy() ==
        doctest::Approx(set.day(1, 3).micro_demand.energy()).epsilon(1e-12));

  const ScenarioSet sub = set.subset({1, 4, 12});
  REQUIRE(sub.scenarios.size() == 3);
  double total = 0;
  for (const auto& s : sub.scenarios) total += s.probability;
  CHECK(total == doctest::Approx(1).epsilon(1e-15));
  CHECK(sub.scenarios[1].probability / sub.scenarios[0].probability ==
        doctest::Approx(sc[3].probability / sc[0].probability));
  CHECK(sub.per_year.size() == 6);
  CHECK_THROWS_AS(set.subset({17}), ConfigError);
}
