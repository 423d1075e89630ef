#include "bessplan/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "bessplan/error.hpp"

namespace bessplan {

namespace {

using std::numbers::pi;

// Morning shoulder and evening peak, scaled to a maximum of 1.
double demand_shape(double h) {
  auto bump = [](double x, double mid, double width) { return std::exp(-std::pow((x - mid) / width, 2)); };
  const double v = 0.55 * bump(h, 9.0, 2.5) + bump(h, 18.5, 3.0) + bump(h + 24, 18.5, 3.0);
  return std::min(v, 1.0);
}

double day_length_hours(unsigned day_of_year) {
  return 12.0 + 2.5 * std::cos(2 * pi * (static_cast<double>(day_of_year) - 172) / 365);
}

double sun_shape(double h, double length) {
  const double rise = 12.0 - length / 2;
  if (h <= rise || h >= rise + length) return 0.0;
  return std::sin(pi * (h - rise) / length);
}

unsigned day_of_year(std::chrono::year_month_day d) {
  using namespace std::chrono;
  const sys_days jan1 = d.year() / January / 1;
  return static_cast<unsigned>((sys_days(d) - jan1).count()) + 1;
}

Profile empty_profile(Timestamp start, int step, Index n, ProfileKind kind) {
  Profile p;
  p.start = start;
  p.step_minutes = step;
  p.kind = kind;
  p.values = Vector::Zero(n);
  return p;
}

}  // namespace

SynthOptions::SynthOptions() {
  price.set(DayType::SWD, {0.0016, -12.0, 0});
  price.set(DayType::SED, {0.0014, -10.0, 0});
  price.set(DayType::NSWD, {0.0015, -11.0, 0});
  price.set(DayType::NSED, {0.0013, -9.0, 0});
}

SynthSeries synthesize(const SynthOptions& opts) {
  using namespace std::chrono;
  if (opts.step_minutes <= 0 || kMinutesPerDay % opts.step_minutes != 0)
    throw ConfigError("synth step_minutes must divide a day");
  if (opts.clear_probability < 0 || opts.clear_probability > 1 || opts.windy_probability < 0 ||
      opts.windy_probability > 1)
    throw ConfigError("synth weather probabilities must lie in [0, 1]");
  opts.calendar.validate();
  opts.price.validate();

  const year_month_day jan1{year{opts.year}, January, day{1}};
  const int days = static_cast<int>((sys_days(year{opts.year + 1} / January / 1) - sys_days(jan1)).count());
  const int per_day = kMinutesPerDay / opts.step_minutes;
  const Index n = Index(days) * per_day;
  const Timestamp start = to_timestamp(jan1);

  SynthSeries s;
  s.market_demand = empty_profile(start, opts.step_minutes, n, ProfileKind::Demand);
  s.market_solar = empty_profile(start, opts.step_minutes, n, ProfileKind::Solar);
  s.market_wind = empty_profile(start, opts.step_minutes, n, ProfileKind::Wind);
  s.price = empty_profile(start, opts.step_minutes, n, ProfileKind::Price);
  s.micro_demand = empty_profile(start, opts.step_minutes, n, ProfileKind::Demand);
  s.micro_solar = empty_profile(start, opts.step_minutes, n, ProfileKind::Solar);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int d = 0; d < days; ++d) {
    const year_month_day date{sys_days(jan1) + std::chrono::days{d}};
    const DayType type = classify_day(date, opts.calendar);
    const double length = day_length_hours(day_of_year(date));
    const bool clear = unit(rng) < opts.clear_probability;
    const bool windy = unit(rng) < opts.windy_probability;
    const double sky = clear ? 0.85 + 0.15 * unit(rng) : 0.20 + 0.25 * unit(rng);
    const double wind_level = windy ? 0.50 + 0.20 * unit(rng) : 0.12 + 0.13 * unit(rng);
    const double market_peak = at(opts.market_peak_mw, type);
    const double micro_peak = at(opts.micro_peak_mw, type);
    const double micro_base = is_summer(type) ? opts.micro_base_summer_mw : opts.micro_base_winter_mw;
    const PriceCoefficients& pc = opts.price[type];

    for (int k = 0; k < per_day; ++k) {
      const Index i = Index(d) * per_day + k;
      const double h = (k + 0.5) * opts.step_minutes / 60.0;
      const double shape = demand_shape(h);
      const double sun = sun_shape(h, length);
      const double cloud = clear ? 1.0 : std::clamp(1.0 + 0.25 * gauss(rng), 0.3, 1.5);

      const double base = opts.market_base_fraction * market_peak;
      const double demand =
          (base + (market_peak - base) * shape) * (1.0 + opts.demand_noise * gauss(rng));
      const double solar = opts.market_solar_mw * sky * sun * cloud;
      const double wind = opts.market_wind_mw * wind_level *
                          std::max(0.0, 1.0 + 0.3 * std::cos(2 * pi * (h - 3) / 24) + 0.08 * gauss(rng));
      const double net = demand - solar - wind;

      s.market_demand.values[i] = demand;
      s.market_solar.values[i] = solar;
      s.market_wind.values[i] = wind;
      s.price.values[i] = pc.alpha * net + pc.beta + opts.price_noise * gauss(rng);
      s.micro_demand.values[i] =
          (micro_base + (micro_peak - micro_base) * shape) * (1.0 + opts.demand_noise * gauss(rng));
      s.micro_solar.values[i] = opts.micro_solar_mw * sky * sun * cloud;
    }
  }
  return s;
}

}  // namespace bessplan
