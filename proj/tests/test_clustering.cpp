#include <algorithm>
#include <cmath>
#include <random>

#include "bessplan/clustering.hpp"
#include "bessplan/error.hpp"
#include "doctest.h"

using namespace bessplan;
namespace chr = std::chrono;

namespace {

Profile flat(double v) { return make_daily(Vector::Constant(96, v), ProfileKind::Solar); }

// Gaussian bump centred at `center` slot with peak `height`, plus noise.
Profile bump(double height, double center, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0, 0.3);
  Vector v(96);
  for (int k = 0; k < 96; ++k)
    v[k] = std::max(0.0, height * std::exp(-std::pow((k - center) / 10.0, 2)) + noise(rng));
  return make_daily(v, ProfileKind::Solar);
}

// Sum of squared distances to the bucket means, computed slot by slot.
double sse(const std::vector<Profile>& days, unsigned mask) {
  double total = 0;
  for (int side = 0; side < 2; ++side) {
    std::vector<const Profile*> members;
    for (std::size_t i = 0; i < days.size(); ++i)
      if (((mask >> i) & 1u) == static_cast<unsigned>(side)) members.push_back(&days[i]);
    for (int k = 0; k < 96; ++k) {
      double mean = 0;
      for (const Profile* p : members) mean += p->values[k];
      mean /= static_cast<double>(members.size());
      for (const Profile* p : members) total += std::pow(p->values[k] - mean, 2);
    }
  }
  return total;
}

chr::year_month_day ymd(int y, unsigned m, unsigned d) {
  return chr::year_month_day{chr::year{y}, chr::month{m}, chr::day{d}};
}

}  // namespace

TEST_CASE("perfectly separated days") {
  const std::vector<Profile> days{flat(0), flat(10), flat(0), flat(10), flat(0), flat(10)};
  const ClusterResult r = kmeans_two(days, 1);
  CHECK(r.high.values == Vector::Constant(96, 10));
  CHECK(r.low.values == Vector::Zero(96));
  CHECK(r.inertia == 0);
  for (std::size_t i = 0; i < days.size(); ++i)
    CHECK(r.assignments[i] == (i % 2 ? Level::High : Level::Low));
}

TEST_CASE("degenerate inputs") {
  CHECK_THROWS_AS(kmeans_two({flat(3), flat(3), flat(3)}, 0), DegeneracyError);
  CHECK_THROWS_AS(kmeans_two({flat(3)}, 0), DegeneracyError);
}

TEST_CASE("six noisy days match the best bipartition") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<Profile> days;
    std::uniform_int_distribution<int> coin(0, 1);
    for (int i = 0; i < 6; ++i)
      days.push_back(coin(rng) ? bump(8, 48, rng) : bump(3, 52, rng));
    double best = INFINITY;
    for (unsigned mask = 1; mask < (1u << 6) - 1; ++mask) best = std::min(best, sse(days, mask));
    const ClusterResult r = kmeans_two(days, seed);
    unsigned got = 0;
    for (int i = 0; i < 6; ++i)
      if (r.assignments[i] == Level::High) got |= 1u << i;
    CAPTURE(seed);
    CHECK(sse(days, got) == doctest::Approx(best).epsilon(1e-12));
    CHECK(r.inertia == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("converged partitions are single-move optimal") {
  std::mt19937_64 rng(42);
  std::vector<Profile> days;
  std::uniform_real_distribution<double> h(2, 9), c(40, 56);
  for (int i = 0; i < 40; ++i) days.push_back(bump(h(rng), c(rng), rng));
  const ClusterResult r = kmeans_two(days, 3);
  CHECK(r.inertia == doctest::Approx(partition_inertia(days, r.assignments)).epsilon(1e-12));
  for (std::size_t i = 0; i < days.size(); ++i) {
    std::vector<Level> moved = r.assignments;
    moved[i] = moved[i] == Level::High ? Level::Low : Level::High;
    if (std::count(moved.begin(), moved.end(), Level::High) == 0 ||
        std::count(moved.begin(), moved.end(), Level::Low) == 0)
      continue;
    CHECK(partition_inertia(days, moved) >= r.inertia - 1e-9);
  }
  for (std::size_t k = 1; k < r.inertia_history.size(); ++k)
    CHECK(r.inertia_history[k] <= r.inertia_history[k - 1] + 1e-9);
  CHECK(r.high.values.sum() >= r.low.values.sum());
}

TEST_CASE("swapping initial centroids gives the same labels") {
  std::mt19937_64 rng(9);
  std::vector<Profile> days;
  for (int i = 0; i < 20; ++i) days.push_back(bump(i % 3 ? 7 : 2, 48, rng));
  KMeansOptions a, b;
  a.initial_centroids = {days[0].values, days[1].values};
  b.initial_centroids = {days[1].values, days[0].values};
  const ClusterResult ra = kmeans_two(days, 0, a), rb = kmeans_two(days, 0, b);
  CHECK(ra.high.values == rb.high.values);
  CHECK(ra.low.values == rb.low.values);
  CHECK(ra.assignments == rb.assignments);
}

TEST_CASE("same seed, same result") {
  std::mt19937_64 rng(2);
  std::vector<Profile> days;
  for (int i = 0; i < 30; ++i) days.push_back(bump(5 + (i % 4), 48, rng));
  const ClusterResult a = kmeans_two(days, 77), b = kmeans_two(days, 77);
  CHECK(a.assignments == b.assignments);
  CHECK(a.high.values == b.high.values);
}

TEST_CASE("demand representatives") {
  const CalendarRule rule;
  const auto mk = [](double v) { return make_daily(Vector::Constant(96, v), ProfileKind::Demand); };
  std::vector<DatedProfile> days{
      {ymd(2015, 7, 15), mk(10)}, {ymd(2015, 7, 16), mk(30)},  // SWD
      {ymd(2015, 7, 18), mk(5)},                               // SED
      {ymd(2015, 12, 7), mk(7)},                               // NSWD
      {ymd(2015, 12, 6), mk(9)},                               // NSED
  };
  const DemandClusterSet set = demand_clusters(days, rule);
  CHECK(set[DayType::SWD].values == Vector::Constant(96, 20));
  CHECK(set[DayType::SED].values == Vector::Constant(96, 5));
  CHECK(set[DayType::NSWD].values == Vector::Constant(96, 7));
  CHECK(set[DayType::NSED].values == Vector::Constant(96, 9));

  days.pop_back();
  CHECK_THROWS_AS(demand_clusters(days, rule), CoverageError);
}

TEST_CASE("a synthetic year averages per bucket and ignores order") {
  const CalendarRule rule;
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(100, 900);
  std::vector<DatedProfile> days;
  chr::sys_days d = chr::sys_days{ymd(2015, 1, 1)};
  for (int i = 0; i < 365; ++i, d += chr::days{1})
    days.emplace_back(chr::year_month_day{d},
                      make_daily(Vector::NullaryExpr(96, [&] { return u(rng); }), ProfileKind::Demand));

  DayTypeMap<Vector> sum;
  DayTypeMap<int> count{};
  for (auto& s : sum) s = Vector::Zero(96);
  for (const auto& [date, p] : days) {
    const DayType t = classify_day(date, rule);
    for (int k = 0; k < 96; ++k) at(sum, t)[k] += p.values[k];
    ++at(count, t);
  }
  const DemandClusterSet set = demand_clusters(days, rule);
  for (DayType t : kAllDayTypes) {
    const Vector expect = at(sum, t) / at(count, t);
    CHECK((set[t].values - expect).cwiseAbs().maxCoeff() <= 1e-9);
  }

  std::shuffle(days.begin(), days.end(), rng);
  const DemandClusterSet shuffled = demand_clusters(days, rule);
  for (DayType t : kAllDayTypes) CHECK(shuffled[t].values == set[t].values);
}

TEST_CASE("level probabilities are label frequencies") {
  ClusterResult r;
  r.assignments.assign(30, Level::High);
  r.assignments.resize(100, Level::Low);
  LevelProbabilities p = level_probabilities(r);
  CHECK(p.high == 0.30);
  CHECK(p.low == 0.70);

  r.assignments.assign(40, Level::High);
  r.assignments.resize(100, Level::Low);
  p = level_probabilities(r);
  CHECK(p.high == 0.40);
  CHECK(p.low == 0.60);

  r.assignments.assign(12, Level::High);
  p = level_probabilities(r);
  CHECK(p.high == 1.0);
  CHECK(p.low == 0.0);
}

TEST_CASE("daily slicing") {
  Profile series;
  series.values = Vector::LinSpaced(96 * 3, 0, 287);
  series.kind = ProfileKind::Wind;
  series.start = to_timestamp(ymd(2015, 2, 27));
  const auto slices = dated_daily_slices(series);
  REQUIRE(slices.size() == 3);
  CHECK(slices[2].first == ymd(2015, 3, 1));
  CHECK(slices[1].second.values[0] == 96);
  CHECK(daily_slices(series).size() == 3);
}
