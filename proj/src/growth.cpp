#include "bessplan/growth.hpp"

#include <cmath>

#include "bessplan/error.hpp"

namespace bessplan {

namespace {

void check_rate(double percent, const char* what) {
  if (!(percent > -100.0) || !std::isfinite(percent))
    throw ConfigError(std::string(what) + " growth of " + std::to_string(percent) +
                      "% must exceed -100%");
}

Vector growth_vector(const DemandGrowth& g, Index slots) {
  if (const double* s = std::get_if<double>(&g)) return Vector::Constant(slots, *s);
  const Vector& v = std::get<Vector>(g);
  if (v.size() != slots)
    throw AlignmentError("demand growth profile has " + std::to_string(v.size()) +
                         " entries, profile has " + std::to_string(slots));
  return v;
}

}  // namespace

void GrowthSpec::validate(Index slots_per_day) const {
  check_rate(asg_percent, "solar");
  check_rate(awg_percent, "wind");
  for (DayType t : kAllDayTypes) {
    const Vector v = growth_vector(at(adgp, t), slots_per_day);
    for (double x : v) check_rate(x, "demand");
  }
}

void MicrogridGrowth::validate() const {
  check_rate(demand_percent, "microgrid demand");
  check_rate(solar_percent, "microgrid solar");
}

Profile grow_solar(const Profile& s, double asg_percent) {
  Profile out = s;
  out.values = grow(s.values, asg_percent);
  return out;
}

Profile grow_wind(const Profile& w, double awg_percent) {
  Profile out = w;
  out.values = grow(w.values, awg_percent);
  return out;
}

Profile grow_demand(const Profile& d, const DemandGrowth& adgp) {
  Profile out = d;
  const Vector g = growth_vector(adgp, d.size());
  out.values = d.values.cwiseProduct((1.0 + g.array() / 100.0).matrix());
  return out;
}

Vector compound_factor(const DemandGrowth& g, Index slots, int years) {
  const Vector rate = growth_vector(g, slots);
  Vector f = Vector::Ones(slots);
  for (int y = 0; y < years; ++y) f = f.cwiseProduct((1.0 + rate.array() / 100.0).matrix());
  return f;
}

}  // namespace bessplan
