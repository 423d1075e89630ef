#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bessplan/config.hpp"
#include "bessplan/error.hpp"

namespace bessplan {

/// 0 success, 2 input/schema, 3 modeling/fit, 4 optimization.
int exit_code(ErrorClass cls);

/// Output layout under RunConfig::output_dir.
struct OutputLayout {
  std::filesystem::path root;

  std::filesystem::path series(const std::string& name) const { return root / "series" / (name + ".csv"); }
  std::filesystem::path clusters(const std::string& name) const { return root / "clusters" / (name + ".json"); }
  std::filesystem::path price_model() const { return root / "price_model.json"; }
  std::filesystem::path scenarios() const { return root / "scenarios.json"; }
  std::filesystem::path plans() const { return root / "plans"; }
  std::filesystem::path bundle(const std::string& label) const { return plans() / label; }
  std::filesystem::path summary() const { return plans() / "summary.csv"; }
};

/// Writes the configured input files from the synthetic generator.
void cmd_synth(const RunConfig& cfg, std::ostream& log);
void cmd_ingest(const RunConfig& cfg, std::ostream& log);
void cmd_cluster(const RunConfig& cfg, std::ostream& log);
void cmd_fit_price(const RunConfig& cfg, std::ostream& log);
/// One bundle per price case; nothing is written unless every case solves.
void cmd_plan(const RunConfig& cfg, int jobs, std::ostream& log);
/// `bundle` is a bundle directory or its solution.json.
void cmd_report(const std::filesystem::path& bundle, std::ostream& log);

/// Scenario set composed from the cluster and price-model outputs.
ScenarioSet load_scenario_set(const RunConfig& cfg);
PlanProblem case_problem(const RunConfig& cfg, const ScenarioSet& set, const PriceModel& model,
                         const std::string& label);

/// Renders the bundle's per-year table and savings line.
std::string report_text(const Json& solution);
/// Year x case install grid.
std::string summary_csv(const std::vector<std::string>& labels, const std::vector<Vector>& installs);

}  // namespace bessplan
