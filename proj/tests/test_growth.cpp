#include <cmath>

#include "bessplan/error.hpp"
#include "bessplan/growth.hpp"
#include "doctest.h"

using namespace bessplan;

namespace {

Profile one(double v) {
  Profile p;
  p.values = Vector::Constant(1, v);
  return p;
}

double repeated(double base, double percent, int years) {
  double f = base;
  for (int y = 0; y < years; ++y) f *= 1 + percent / 100;
  return f;
}

}  // namespace

TEST_CASE("single-year solar and wind growth") {
  CHECK(grow_solar(one(10), 3).values[0] == doctest::Approx(10.3));
  CHECK(grow_solar(one(10), 0).values[0] == 10);
  CHECK(grow_wind(one(5), 7).values[0] == doctest::Approx(5.35));
  CHECK(grow_wind(one(5), -10).values[0] == doctest::Approx(4.5));
}

TEST_CASE("fifteen years at seven percent") {
  Profile s = one(1), w = one(1);
  for (int y = 0; y < 15; ++y) {
    s = grow_solar(s, 7);
    w = grow_wind(w, 7);
  }
  CHECK(s.values[0] == doctest::Approx(2.7590315407153363).epsilon(1e-14));
  CHECK(w.values[0] == doctest::Approx(repeated(1, 7, 15)).epsilon(1e-14));
}

TEST_CASE("demand growth per slot") {
  Profile d = make_daily(Vector::LinSpaced(96, 10, 960), ProfileKind::Demand);
  Vector adgp = Vector::Zero(96);
  adgp[0] = 10;
  const Profile g = grow_demand(d, adgp);
  CHECK(g.values[0] == doctest::Approx(11));
  CHECK(g.values[1] == d.values[1]);
  CHECK_THROWS_AS(grow_demand(d, Vector(Vector::Zero(95))), AlignmentError);

  const Profile s = grow_demand(d, 2.0);
  CHECK(((s.values.array() / d.values.array()) - 1.02).abs().maxCoeff() <= 1e-15);
}

TEST_CASE("peak/off-peak ratio compounds") {
  Profile d = make_daily(Vector::Constant(96, 100), ProfileKind::Demand);
  Vector adgp = Vector::Constant(96, 1.0);
  adgp.segment(68, 12).setConstant(4.0);
  for (int y = 0; y < 15; ++y) d = grow_demand(d, adgp);
  CHECK(d.values[70] / d.values[10] == doctest::Approx(1.5512417426639622).epsilon(1e-12));
}

TEST_CASE("compound factor equals repeated application") {
  Vector adgp = Vector::LinSpaced(96, -3, 6);
  Profile d = make_daily(Vector::LinSpaced(96, 1, 50), ProfileKind::Demand);
  Profile stepped = d;
  for (int y = 1; y <= 15; ++y) {
    stepped = grow_demand(stepped, adgp);
    const Vector once = d.values.cwiseProduct(compound_factor(adgp, 96, y));
    CHECK(((stepped.values - once).array() / once.array()).abs().maxCoeff() <= 1e-12);
  }
  CHECK(compound_factor(0.0, 96, 15) == Vector::Ones(96));
}

TEST_CASE("rates at or below -100 percent are rejected") {
  GrowthSpec g;
  g.validate(96);
  g.asg_percent = -100;
  CHECK_THROWS_AS(g.validate(96), ConfigError);
  GrowthSpec v;
  v.adgp[0] = Vector(Vector::Constant(95, 2.0));
  CHECK_THROWS_AS(v.validate(96), AlignmentError);
  MicrogridGrowth m;
  m.demand_percent = std::nan("");
  CHECK_THROWS_AS(m.validate(), ConfigError);
}

TEST_CASE("growth keeps nonnegative profiles nonnegative") {
  Profile s = make_daily(Vector::LinSpaced(96, 0, 5), ProfileKind::Solar);
  for (double rate : {-99.0, -50.0, 0.0, 7.0})
    CHECK(grow_solar(s, rate).values.minCoeff() >= 0);
}
