#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bessplan/profiles.hpp"

namespace bessplan {

enum class Level { High, Low };

inline char level_char(Level l) { return l == Level::High ? 'H' : 'L'; }

struct KMeansOptions {
  int max_iterations = 100;
  double tolerance = 1e-6;  // on centroid movement
  /// Overrides farthest-point seeding; used to check relabeling invariance.
  std::optional<std::pair<Vector, Vector>> initial_centroids;
};

/// Two-way k-means on daily profiles. `high` is the centroid with the larger
/// mean daily energy.
struct ClusterResult {
  Profile high;
  Profile low;
  std::vector<Level> assignments;
  double inertia = 0;
  int iterations = 0;
  std::vector<double> inertia_history;  // after each Lloyd assignment step

  Index count(Level l) const;
};

ClusterResult kmeans_two(const std::vector<Profile>& days, std::uint64_t seed,
                         const KMeansOptions& opts = {});

/// Within-cluster sum of squared distances of `days` under `labels`, with
/// centroids recomputed from the labels.
double partition_inertia(const std::vector<Profile>& days, const std::vector<Level>& labels);

struct DemandClusterSet {
  DayTypeMap<Profile> representative;

  const Profile& operator[](DayType t) const { return at(representative, t); }
};

using DatedProfile = std::pair<std::chrono::year_month_day, Profile>;

DemandClusterSet demand_clusters(const std::vector<DatedProfile>& days, const CalendarRule& rule);

/// Splits a multi-day series into its complete daily slices.
std::vector<Profile> daily_slices(const Profile& series);
std::vector<DatedProfile> dated_daily_slices(const Profile& series);

struct LevelProbabilities {
  double high = 0;
  double low = 0;
};

LevelProbabilities level_probabilities(const ClusterResult& result);

}  // namespace bessplan
