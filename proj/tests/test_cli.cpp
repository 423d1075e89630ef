#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "bessplan/commands.hpp"
#include "bessplan/config.hpp"
#include "bessplan/error.hpp"
#include "bessplan/synth.hpp"
#include "doctest.h"
#include "plan_fixtures.hpp"

namespace fs = std::filesystem;
using namespace bessplan;

namespace {

Json example_config() {
  return read_json(fs::path(BESSPLAN_SOURCE_DIR) / "config" / "caiso-2015.example.json");
}

struct ScratchDir {
  fs::path root;
  explicit ScratchDir(const std::string& tag)
      : root(fs::temp_directory_path() / ("bessplan-cli-" + tag + "-" + std::to_string(::getpid()))) {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(root, ec);
  }
};

// Example config with inputs and outputs under `dir`.
RunConfig scratch_config(const fs::path& dir, std::vector<std::string> overrides = {}) {
  Json doc = example_config();
  doc["output_dir"] = "out";
  for (const char* n : kSeriesNames) doc["inputs"][n] = std::string("data/") + n + ".csv";
  for (const auto& o : overrides) apply_override(doc, o);
  RunConfig cfg = parse_config(doc, dir);
  cfg.output_dir = dir / "out";
  return cfg;
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST_CASE("case lists expand ranges") {
  CHECK(expand_cases("a-1") == std::vector<std::string>{"a-1"});
  CHECK(expand_cases("a-1..a-3,b-10") == std::vector<std::string>{"a-1", "a-2", "a-3", "b-10"});
  CHECK(expand_cases(" b-2 .. b-4 ") == std::vector<std::string>{"b-2", "b-3", "b-4"});
  CHECK_THROWS_AS(expand_cases("a-3..a-1"), ConfigError);
  CHECK_THROWS_AS(expand_cases("a-1..b-3"), ConfigError);
  CHECK_THROWS_AS(expand_cases(""), ConfigError);
}

TEST_CASE("overrides write typed values into nested keys") {
  Json doc = example_config();
  apply_override(doc, "plan.horizon_years=3");
  apply_override(doc, "battery.life_years=4");
  apply_override(doc, "plan.solver=simplex");
  apply_override(doc, "plan.scenario_ids=[1,4]");
  CHECK(doc["plan"]["horizon_years"] == 3);
  CHECK(doc["plan"]["solver"] == "simplex");
  const RunConfig cfg = parse_config(doc, ".");
  CHECK(cfg.plan.horizon_years == 3);
  CHECK(cfg.plan.battery.life_years == 4);
  CHECK(cfg.plan.solver.method == lp::LpMethod::Simplex);
  CHECK(cfg.scenario_ids == std::vector<int>{1, 4});
  CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), ConfigError);
}

TEST_CASE("unknown configuration keys are rejected") {
  Json doc = example_config();
  doc["plan"]["horizon"] = 15;
  CHECK_THROWS_AS(parse_config(doc, "."), SchemaError);
  Json top = example_config();
  top["extra"] = 1;
  CHECK_THROWS_AS(parse_config(top, "."), SchemaError);
  Json typed = example_config();
  typed["plan"]["horizon_years"] = "fifteen";
  CHECK_THROWS_AS(parse_config(typed, "."), SchemaError);
}

TEST_CASE("example config reads back the documented defaults") {
  const RunConfig cfg = parse_config(example_config(), "/cfg");
  CHECK(cfg.plan.horizon_years == 15);
  CHECK(cfg.plan.congestion_limit_mw == 45);
  CHECK(cfg.plan.gas_turbine_mw == 20);
  CHECK(cfg.plan.battery.soc_min_frac == doctest::Approx(0.10));
  CHECK(cfg.plan.battery.soc_max_frac == doctest::Approx(0.95));
  CHECK(cfg.plan.battery.power_energy_ratio == 2);
  CHECK(cfg.plan.battery.life_years == 10);
  REQUIRE(cfg.probabilities);
  CHECK(cfg.probabilities->day_counts[0] == 96);
  CHECK(cfg.input_path("price") == fs::path("/cfg/../data/price.csv"));
}

TEST_CASE("report of the toy bundle shows the arbitrage savings") {
  const PlanProblem p = fixtures::toy_arbitrage();
  const PlanSolution s = solve_plan(p);
  const std::string text = report_text(to_json(p, s));
  CHECK(text.find("savings: 20.00") != std::string::npos);
}

TEST_CASE("report with no battery shows zero savings") {
  PlanProblem p = fixtures::toy_arbitrage();
  p.preinstalled_mwh = 0;
  const PlanSolution s = solve_plan(p);
  const std::string text = report_text(to_json(p, s));
  CHECK(text.find("savings: 0.00") != std::string::npos);
  CHECK(text.find("-0.00") == std::string::npos);
}

TEST_CASE("dispatch CSV has the fixed header and one row per slot") {
  const PlanProblem p = fixtures::toy_arbitrage();
  const PlanSolution s = solve_plan(p);
  const std::string csv = dispatch_csv(s.day(1, 1));
  CHECK(first_line(csv) ==
        "slot,load_mw,solar_mw,charge_mw,discharge_mw,purchase_mw,soc_mwh,price_usd_per_mwh");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("synthetic series depend only on the seed") {
  SynthOptions o;
  o.seed = 11;
  const SynthSeries a = synthesize(o), b = synthesize(o);
  CHECK(a.price.values == b.price.values);
  CHECK(a.micro_demand.values == b.micro_demand.values);
  CHECK(a.market_demand.size() == 365 * 24);
  o.seed = 12;
  const SynthSeries c = synthesize(o);
  CHECK(a.price.values != c.price.values);
}

TEST_CASE("pipeline separates clear and overcast days") {
  ScratchDir dir("cluster");
  const RunConfig cfg = scratch_config(dir.root);
  std::ostringstream log;
  cmd_synth(cfg, log);
  cmd_ingest(cfg, log);
  cmd_cluster(cfg, log);
  const Json solar = read_json(OutputLayout{cfg.output_dir}.clusters("solar"));
  const Vector high = vector_from_json(solar["high"], "high");
  const Vector low = vector_from_json(solar["low"], "low");
  CHECK(high.sum() > 1.5 * low.sum());
  const double p_high = solar["probability"]["high"].get<double>();
  CHECK(p_high == doctest::Approx(0.30).epsilon(0.25));
  CHECK(solar["assignments"].size() == 365);
}

TEST_CASE("a missing row is reported with its line number") {
  ScratchDir dir("gap");
  const RunConfig cfg = scratch_config(dir.root);
  std::ostringstream log;
  cmd_synth(cfg, log);
  const fs::path price = cfg.input_path("price");
  std::ifstream in(price);
  std::string text, line;
  for (int row = 1; std::getline(in, line); ++row)
    if (row != 11) text += line + "\n";
  in.close();
  std::ofstream(price) << text;
  try {
    cmd_ingest(cfg, log);
    FAIL("ingest accepted a gap");
  } catch (const Error& e) {
    CHECK(exit_code(e.error_class()) == 2);
    CHECK(std::string(e.what()).find("row 11") != std::string::npos);
  }
  CHECK_FALSE(fs::exists(OutputLayout{cfg.output_dir}.series("price")));
}

TEST_CASE("command line exit codes") {
  ScratchDir dir("exit");
  const std::string cli = std::string("\"") + BESSPLAN_CLI + "\"";
  const std::string quiet = " > /dev/null 2>&1";
  auto run = [&](const std::string& args) {
    const int rc = std::system((cli + " " + args + quiet).c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  CHECK(run("report \"" + (dir.root / "missing").string() + "\"") == 2);
  CHECK(run("plan") == 2);
  CHECK(run("frobnicate") == 2);

  Json doc = example_config();
  doc["output_dir"] = "out";
  for (const char* n : kSeriesNames) doc["inputs"][n] = std::string("data/") + n + ".csv";
  doc["bogus"] = true;
  const fs::path config = dir.root / "config.json";
  write_atomic(config, dump(doc));
  CHECK(run("synth --config \"" + config.string() + "\"") == 2);
}
