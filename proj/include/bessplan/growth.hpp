#pragma once

#include <variant>

#include "bessplan/profiles.hpp"

namespace bessplan {

/// Annual demand growth: one percent for every slot, or one per slot.
using DemandGrowth = std::variant<double, Vector>;

struct GrowthSpec {
  double asg_percent = 7.0;  // solar
  double awg_percent = 7.0;  // wind
  DayTypeMap<DemandGrowth> adgp{2.0, 2.0, 2.0, 2.0};

  void validate(Index slots_per_day) const;
};

struct MicrogridGrowth {
  double demand_percent = 3.0;
  double solar_percent = 3.0;

  void validate() const;
};

/// Multiplies by (1 + percent/100)^years.
template <class Derived>
Vector grow(const Eigen::MatrixBase<Derived>& values, double percent, int years = 1) {
  Vector out = values;
  for (int y = 0; y < years; ++y) out *= 1.0 + percent / 100.0;
  return out;
}

Profile grow_solar(const Profile& s, double asg_percent);
Profile grow_wind(const Profile& w, double awg_percent);
/// Elementwise d_k * (1 + adgp_k/100); a scalar broadcasts.
Profile grow_demand(const Profile& d, const DemandGrowth& adgp);

/// Growth factor vector after `years` applications.
Vector compound_factor(const DemandGrowth& g, Index slots, int years);

}  // namespace bessplan
