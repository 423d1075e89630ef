#include "bessplan/market_model.hpp"

#include <cmath>
#include <sstream>

#include "bessplan/error.hpp"

namespace bessplan {

namespace {

void require_aligned(const Profile& a, const Profile& b, const char* what) {
  if (a.size() != b.size() || a.step_minutes != b.step_minutes)
    throw AlignmentError(std::string(what) + ": profiles differ in length or step (" +
                         std::to_string(a.size()) + "x" + std::to_string(a.step_minutes) +
                         " vs " + std::to_string(b.size()) + "x" +
                         std::to_string(b.step_minutes) + ")");
}

}  // namespace

const PriceCoefficients& PriceModel::operator[](DayType t) const {
  const auto& c = at(coefficients, t);
  if (!c) throw LookupError("price model has no entry for " + std::string(to_string(t)));
  return *c;
}

void PriceModel::validate() const {
  for (DayType t : kAllDayTypes) {
    const auto& c = (*this)[t];
    if (!std::isfinite(c.alpha) || !std::isfinite(c.beta))
      throw ModelRejectedError("non-finite price coefficients for " + std::string(to_string(t)));
    if (c.alpha < 0)
      throw ModelRejectedError("negative price slope for " + std::string(to_string(t)));
  }
}

Profile net_demand(const MarketState& state) {
  require_aligned(state.demand, state.solar, "net_demand");
  require_aligned(state.demand, state.wind, "net_demand");
  Profile out = state.demand;
  out.values = state.demand.values - state.solar.values - state.wind.values;
  return out;
}

Profile microgrid_net(const Profile& demand, const Profile& battery_net_injection,
                      const Profile& renewable) {
  require_aligned(demand, battery_net_injection, "microgrid_net");
  require_aligned(demand, renewable, "microgrid_net");
  Profile out = demand;
  out.values = demand.values - renewable.values - battery_net_injection.values;
  return out;
}

PriceCoefficients fit_price(const std::vector<PricePoint>& points, DayType cluster) {
  const std::string name(to_string(cluster));
  if (points.size() < 2) throw FitError(name + ": need at least 2 points to fit a price model");
  const double n = static_cast<double>(points.size());
  double mx = 0, my = 0;
  for (const auto& p : points) {
    mx += p.net_demand;
    my += p.price;
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (const auto& p : points) {
    sxx += (p.net_demand - mx) * (p.net_demand - mx);
    sxy += (p.net_demand - mx) * (p.price - my);
  }
  if (!(sxx > 0)) throw FitError(name + ": all net-demand values are equal");

  PriceCoefficients c;
  c.alpha = sxy / sxx;
  c.beta = my - c.alpha * mx;
  double sse = 0;
  for (const auto& p : points) {
    const double r = p.price - (c.alpha * p.net_demand + c.beta);
    sse += r * r;
  }
  c.rmse = std::sqrt(sse / n);
  if (c.alpha < 0) {
    std::ostringstream msg;
    msg << name << ": fitted slope " << c.alpha << " $/MWh per MW (intercept " << c.beta
        << ", rmse " << c.rmse << ") is negative; price must not fall with net demand";
    throw ModelRejectedError(msg.str());
  }
  return c;
}

Profile eval_price(const PriceModel& model, DayType cluster, const Profile& net) {
  Profile out = net;
  out.kind = ProfileKind::Price;
  out.values = eval_price(model[cluster], net.values);
  return out;
}

}  // namespace bessplan
