#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "bessplan/profiles.hpp"

namespace bessplan {

/// Affine market-clearing price: price = alpha * net_demand + beta.
struct PriceCoefficients {
  double alpha = 0;  // $/MWh per MW
  double beta = 0;   // $/MWh
  double rmse = 0;
};

struct PriceModel {
  DayTypeMap<std::optional<PriceCoefficients>> coefficients;

  const PriceCoefficients& operator[](DayType t) const;
  void set(DayType t, PriceCoefficients c) { at(coefficients, t) = c; }
  /// All four entries present and alpha >= 0.
  void validate() const;
};

/// Constant model across the horizon unless a year carries its own entry.
struct PriceModelSchedule {
  PriceModel base;
  std::map<int, PriceModel> by_year;

  const PriceModel& for_year(int year) const {
    auto it = by_year.find(year);
    return it == by_year.end() ? base : it->second;
  }
};

struct MarketState {
  Profile demand;
  Profile solar;
  Profile wind;
};

/// demand - solar - wind; may be negative.
Profile net_demand(const MarketState& state);

/// Energy bought at the point of coupling with discharge-positive battery
/// injection: demand - renewable - injection.
Profile microgrid_net(const Profile& demand, const Profile& battery_net_injection,
                      const Profile& renewable);

struct PricePoint {
  double net_demand = 0;
  double price = 0;
};

/// Ordinary least squares. Throws FitError on rank deficiency and
/// ModelRejectedError when the slope is negative.
PriceCoefficients fit_price(const std::vector<PricePoint>& points, DayType cluster);

template <class Derived>
Vector eval_price(const PriceCoefficients& c, const Eigen::MatrixBase<Derived>& net) {
  return (c.alpha * net.array() + c.beta).matrix();
}

Profile eval_price(const PriceModel& model, DayType cluster, const Profile& net);

}  // namespace bessplan
