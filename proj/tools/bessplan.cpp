// bessplan: synth | ingest | cluster | fit-price | plan | report

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "bessplan/commands.hpp"

namespace fs = std::filesystem;
using namespace bessplan;

int main(int argc, char** argv) {
  CLI::App app{"Battery storage investment planner"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::string cases, out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool dump_lp = false;
  std::string bundle;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--set", sets, "override a config value, key.path=value")->take_all();
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--out", out_dir, "output directory");
  };
  CLI::App* synth = app.add_subcommand("synth", "write synthetic input series");
  CLI::App* ingest = app.add_subcommand("ingest", "validate and resample input series");
  CLI::App* cluster = app.add_subcommand("cluster", "cluster daily profiles");
  CLI::App* fit = app.add_subcommand("fit-price", "fit the price model");
  CLI::App* plan = app.add_subcommand("plan", "solve the planning LP for each price case");
  for (CLI::App* c : {synth, ingest, cluster, fit, plan}) common(c);
  plan->add_option("--cases", cases, "price cases, e.g. a-1..a-10,b-1");
  plan->add_option("--jobs", jobs, "parallel price cases")->check(CLI::NonNegativeNumber);
  plan->add_flag("--dump-lp", dump_lp, "write each case's LP as problem.mps in its bundle");
  CLI::App* report = app.add_subcommand("report", "summarise a solution bundle");
  report->add_option("bundle", bundle, "bundle directory or solution.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*report) {
      cmd_report(bundle, std::cout);
      return 0;
    }
    std::vector<std::string> overrides = sets;
    CLI::App* cmd = app.get_subcommands().front();
    if (cmd->count("--seed")) overrides.push_back("seed=" + std::to_string(seed));
    if (cmd == plan && plan->count("--cases")) overrides.push_back("price_paths.cases=" + Json(cases).dump());
    RunConfig cfg = load_config(config_path, overrides);
    cfg.dump_lp = dump_lp;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    else if (cfg.output_dir.is_relative()) cfg.output_dir = cfg.base_dir / cfg.output_dir;

    if (*synth) cmd_synth(cfg, std::cout);
    if (*ingest) cmd_ingest(cfg, std::cout);
    if (*cluster) cmd_cluster(cfg, std::cout);
    if (*fit) cmd_fit_price(cfg, std::cout);
    if (*plan) cmd_plan(cfg, jobs, std::cout);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.error_class());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
