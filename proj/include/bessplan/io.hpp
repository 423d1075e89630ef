#pragma once

#include <filesystem>
#include <string>

#include "bessplan/clustering.hpp"
#include "bessplan/market_model.hpp"
#include "bessplan/planner.hpp"
#include "bessplan/scenarios.hpp"
#include "json.hpp"

namespace bessplan {

using Json = nlohmann::ordered_json;

Json to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& what);

Json to_json(const ClusterResult& r);
Json to_json(const DemandClusterSet& s);
DemandClusterSet demand_clusters_from_json(const Json& j, int step_minutes);
/// Rebuilds the high/low centroids; assignments are kept as counts only.
ClusterResult cluster_from_json(const Json& j, int step_minutes, ProfileKind kind);

Json to_json(const PriceModel& m);
PriceModel price_model_from_json(const Json& j);

Json to_json(const ScenarioSet& s);

/// The bundle written for one price case; wall-clock timings are left out so
/// reruns are byte-identical.
Json to_json(const PlanProblem& p, const PlanSolution& s);

/// Dispatch table with the fixed plot-data header; load is net of on-site gas turbines.
std::string dispatch_csv(const DispatchDay& d);
inline constexpr const char* kDispatchHeader =
    "slot,load_mw,solar_mw,charge_mw,discharge_mw,purchase_mw,soc_mwh,price_usd_per_mwh";

Json read_json(const std::filesystem::path& path);
std::string dump(const Json& j);

/// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);
/// Replaces directory `dest` with the fully written `staging` directory.
void commit_directory(const std::filesystem::path& staging, const std::filesystem::path& dest);

}  // namespace bessplan
