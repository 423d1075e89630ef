#include "bessplan/commands.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "bessplan/clustering.hpp"
#include "bessplan/io.hpp"
#include "bessplan/market_model.hpp"
#include "bessplan/synth.hpp"
#include "text_util.hpp"

namespace bessplan {

namespace fs = std::filesystem;

namespace {

std::string timeseries_text(const Profile& p) {
  std::ostringstream s;
  write_timeseries(s, p);
  return s.str();
}

std::string fixed(double v, int digits, std::size_t width = 0) {
  std::string s = detail::format_fixed(v, digits);
  return s.size() < width ? std::string(width - s.size(), ' ') + s : s;
}

std::map<std::string, Profile> load_series(const RunConfig& cfg) {
  const OutputLayout out{cfg.output_dir};
  std::map<std::string, Profile> s;
  for (const char* n : kSeriesNames) {
    const fs::path path = out.series(n);
    if (!fs::exists(path)) throw ParseError(path.string() + ": missing; run ingest first");
    s[n] = load_timeseries(path.string(), {}, series_kind(n));
  }
  return s;
}

ClusterResult load_cluster(const OutputLayout& out, const std::string& name, ProfileKind kind) {
  const Json j = read_json(out.clusters(name));
  return cluster_from_json(j, j.value("step_minutes", 15), kind);
}

PriceModel load_price_model(const OutputLayout& out) { return price_model_from_json(read_json(out.price_model())); }

DayTypeMap<int> counted_days(const Profile& series, const CalendarRule& rule) {
  DayTypeMap<int> n{};
  for (Index d = 0; d < series.num_days(); ++d) ++at(n, classify_day(series.date_of_day(d), rule));
  return n;
}

Json day_counts_json(const DayTypeMap<int>& n) {
  Json j;
  for (DayType t : kAllDayTypes) j[std::string(to_string(t))] = at(n, t);
  return j;
}

}  // namespace

int exit_code(ErrorClass cls) {
  switch (cls) {
    case ErrorClass::Input: return 2;
    case ErrorClass::Modeling: return 3;
    case ErrorClass::Optimization: return 4;
  }
  return 1;
}

void cmd_synth(const RunConfig& cfg, std::ostream& log) {
  const SynthSeries s = synthesize(cfg.synth);
  const std::pair<const char*, const Profile*> files[] = {
      {"market_demand", &s.market_demand}, {"market_solar", &s.market_solar},
      {"market_wind", &s.market_wind},     {"price", &s.price},
      {"micro_demand", &s.micro_demand},   {"micro_solar", &s.micro_solar}};
  for (const auto& [name, p] : files) {
    const fs::path path = cfg.input_path(name);
    write_atomic(path, timeseries_text(*p));
    log << "synth " << name << ": " << p->size() << " samples -> " << path.string() << "\n";
  }
}

void cmd_ingest(const RunConfig& cfg, std::ostream& log) {
  std::map<std::string, Profile> series;
  for (const char* n : kSeriesNames) {
    const Profile raw = load_timeseries(cfg.input_path(n).string(), cfg.column_map, series_kind(n));
    series[n] = resample(raw, cfg.ingest_step_minutes);
  }
  const Profile& ref = series.at("market_demand");
  for (const auto& [name, p] : series) {
    if (p.start != ref.start || p.size() != ref.size())
      throw AlignmentError(name + " covers " + format_timestamp(p.start) + " + " + std::to_string(p.size()) +
                           " samples; market_demand covers " + format_timestamp(ref.start) + " + " +
                           std::to_string(ref.size()));
    if (p.size() % p.samples_per_day() != 0)
      throw AlignmentError(name + ": series does not end on a day boundary");
  }
  const OutputLayout out{cfg.output_dir};
  for (const char* n : kSeriesNames) {
    const Profile& p = series.at(n);
    write_atomic(out.series(n), timeseries_text(p));
    log << n << ": " << p.size() << " rows, min " << detail::format_fixed(p.values.minCoeff(), 3) << ", max "
        << detail::format_fixed(p.values.maxCoeff(), 3) << "\n";
  }
}

void cmd_cluster(const RunConfig& cfg, std::ostream& log) {
  const auto series = load_series(cfg);
  const ClusterResult solar = kmeans_two(daily_slices(series.at("market_solar")), cfg.seed);
  const ClusterResult wind = kmeans_two(daily_slices(series.at("market_wind")), cfg.seed + 1);
  const ClusterResult micro_solar = kmeans_two(daily_slices(series.at("micro_solar")), cfg.seed + 2);
  const DemandClusterSet market = demand_clusters(dated_daily_slices(series.at("market_demand")), cfg.calendar);
  const DemandClusterSet micro = demand_clusters(dated_daily_slices(series.at("micro_demand")), cfg.calendar);

  Json demand;
  demand["step_minutes"] = cfg.ingest_step_minutes;
  demand["day_counts"] = day_counts_json(counted_days(series.at("market_demand"), cfg.calendar));
  demand["market"] = to_json(market);
  demand["microgrid"] = to_json(micro);

  const OutputLayout out{cfg.output_dir};
  write_atomic(out.clusters("solar"), dump(to_json(solar)));
  write_atomic(out.clusters("wind"), dump(to_json(wind)));
  write_atomic(out.clusters("micro_solar"), dump(to_json(micro_solar)));
  write_atomic(out.clusters("demand"), dump(demand));
  for (const auto& [name, r] : {std::pair{"solar", &solar}, {"wind", &wind}, {"micro_solar", &micro_solar}})
    log << name << ": " << r->count(Level::High) << " high / " << r->count(Level::Low) << " low days, "
        << r->iterations << " iterations\n";
}

void cmd_fit_price(const RunConfig& cfg, std::ostream& log) {
  const auto series = load_series(cfg);
  const Profile net = net_demand({series.at("market_demand"), series.at("market_solar"), series.at("market_wind")});
  const Profile& price = series.at("price");
  DayTypeMap<std::vector<PricePoint>> points;
  for (Index d = 0; d < net.num_days(); ++d) {
    auto& bucket = at(points, classify_day(net.date_of_day(d), cfg.calendar));
    const Index spd = net.samples_per_day();
    for (Index k = d * spd; k < (d + 1) * spd; ++k) bucket.push_back({net.values[k], price.values[k]});
  }
  PriceModel model;
  for (DayType t : kAllDayTypes) model.set(t, fit_price(at(points, t), t));
  write_atomic(OutputLayout{cfg.output_dir}.price_model(), dump(to_json(model)));
  for (DayType t : kAllDayTypes) {
    const PriceCoefficients& c = model[t];
    log << to_string(t) << ": alpha " << c.alpha << ", beta " << c.beta << ", rmse " << c.rmse << "\n";
  }
}

ScenarioSet load_scenario_set(const RunConfig& cfg) {
  const OutputLayout out{cfg.output_dir};
  const ClusterResult solar = load_cluster(out, "solar", ProfileKind::Solar);
  const ClusterResult wind = load_cluster(out, "wind", ProfileKind::Wind);
  const ClusterResult micro_solar = load_cluster(out, "micro_solar", ProfileKind::Solar);
  const Json demand = read_json(out.clusters("demand"));
  const int step = demand.value("step_minutes", 15);
  if (!demand.contains("market") || !demand.contains("microgrid") || !demand.contains("day_counts"))
    throw SchemaError(out.clusters("demand").string() + ": needs market, microgrid and day_counts");
  const PriceModel model = load_price_model(out);

  LevelProbabilities ps, pw;
  DayTypeMap<int> counts{};
  if (cfg.probabilities) {
    ps = {cfg.probabilities->solar_high, 1 - cfg.probabilities->solar_high};
    pw = {cfg.probabilities->wind_high, 1 - cfg.probabilities->wind_high};
    counts = cfg.probabilities->day_counts;
  } else {
    ps = level_probabilities(solar);
    pw = level_probabilities(wind);
    for (DayType t : kAllDayTypes) {
      const Json& v = demand["day_counts"][std::string(to_string(t))];
      if (!v.is_number_integer()) throw SchemaError("demand day_counts needs integer " + std::string(to_string(t)));
      at(counts, t) = v.get<int>();
    }
  }
  const std::vector<Scenario> scenarios = build_scenarios(ps, pw, day_probabilities(counts));

  ScenarioInputs in;
  in.market_demand = demand_clusters_from_json(demand["market"], step);
  in.market_solar = LevelProfiles::from(solar);
  in.market_wind = LevelProfiles::from(wind);
  in.micro_demand = demand_clusters_from_json(demand["microgrid"], step);
  in.micro_solar = LevelProfiles::from(micro_solar);

  PriceModelSchedule schedule;
  schedule.base = model;
  ScenarioSet set = compose_scenarios(cfg.plan.horizon_years, scenarios, in, cfg.growth, cfg.micro_growth, schedule);
  if (!cfg.scenario_ids.empty()) set = set.subset(cfg.scenario_ids);
  if (cfg.plan_step_minutes != set.step_minutes()) set = set.resampled(cfg.plan_step_minutes);
  const auto problems = validate(set);
  if (!problems.empty()) throw CoverageError("scenario set: " + problems.front());
  return set;
}

PlanProblem case_problem(const RunConfig& cfg, const ScenarioSet& set, const PriceModel& model,
                         const std::string& label) {
  PlanProblem p = cfg.plan;
  p.scenarios = set;
  p.price_path = price_path(label, p.horizon_years, cfg.price_paths);
  p.price_model.base = model;
  return p;
}

std::string summary_csv(const std::vector<std::string>& labels, const std::vector<Vector>& installs) {
  std::string out = "year";
  for (const auto& l : labels) out += "," + l;
  out += "\n";
  const Index years = installs.empty() ? 0 : installs.front().size();
  for (Index y = 0; y < years; ++y) {
    out += std::to_string(y + 1);
    for (const Vector& u : installs) out += "," + detail::format_fixed(u[y], 6);
    out += "\n";
  }
  out += "total";
  for (const Vector& u : installs) out += "," + detail::format_fixed(u.sum(), 6);
  out += "\n";
  return out;
}

void cmd_plan(const RunConfig& cfg, int jobs, std::ostream& log) {
  const OutputLayout out{cfg.output_dir};
  const ScenarioSet set = load_scenario_set(cfg);
  const PriceModel model = load_price_model(out);
  log << "scenarios: " << set.scenarios.size() << " x " << set.horizon << " years x " << set.slots_per_day()
      << " slots\n";

  const std::size_t n = cfg.cases.size();
  std::vector<PlanProblem> problems;
  for (const auto& label : cfg.cases) problems.push_back(case_problem(cfg, set, model, label));
  std::vector<PlanSolution> solutions(n);
  std::vector<std::exception_ptr> errors(n);
  std::vector<double> seconds(n);
  std::atomic<std::size_t> next{0};
  std::mutex log_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        solutions[i] = solve_plan(problems[i]);
        solutions[i].label = cfg.cases[i];
      } catch (...) {
        errors[i] = std::current_exception();
        continue;
      }
      seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const std::lock_guard lock(log_mu);
      log << "case " << cfg.cases[i] << ": installs " << detail::format_fixed(solutions[i].installs.sum(), 3)
          << " MWh, savings $" << detail::format_fixed(solutions[i].savings(), 2) << ", "
          << detail::format_fixed(seconds[i], 2) << " s\n";
    }
  };
  const int workers = std::max(1, std::min<int>(jobs > 0 ? jobs : std::thread::hardware_concurrency(), int(n)));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw PlanError("case " + cfg.cases[i] + ": " + e.what());
    }
  }

  write_atomic(out.scenarios(), dump(to_json(set)));
  std::vector<Vector> installs;
  for (std::size_t i = 0; i < n; ++i) {
    const fs::path dest = out.bundle(cfg.cases[i]);
    const fs::path staging = out.plans() / ("." + cfg.cases[i] + ".staging");
    fs::remove_all(staging);
    write_atomic(staging / "solution.json", dump(to_json(problems[i], solutions[i])));
    if (cfg.dump_lp) {
      std::ostringstream mps;
      lp::write_mps(mps, build_plan_lp(problems[i]).lp, cfg.cases[i]);
      write_atomic(staging / "problem.mps", mps.str());
    }
    commit_directory(staging, dest);
    installs.push_back(solutions[i].installs);
  }
  write_atomic(out.summary(), summary_csv(cfg.cases, installs));
  log << "wrote " << n << " bundle" << (n == 1 ? "" : "s") << " under " << out.plans().string() << "\n";
}

std::string report_text(const Json& s) {
  const Vector price = vector_from_json(s.at("battery_price_usd_per_kwh"), "battery_price_usd_per_kwh");
  const Vector installs = vector_from_json(s.at("installs_mwh"), "installs_mwh");
  const Vector capacity = vector_from_json(s.at("capacity_mwh"), "capacity_mwh");
  const Json& costs = s.at("costs");
  const Vector invest = vector_from_json(costs.at("investment_usd"), "investment_usd");
  const Vector energy = vector_from_json(costs.at("energy_usd"), "energy_usd");
  const double rate = s.at("discount_rate").get<double>();

  std::string out = "case " + s.at("label").get<std::string>() + "\n";
  char line[256];
  std::snprintf(line, sizeof line, "%4s %10s %12s %12s %16s %16s %8s\n", "year", "$/kWh", "install MWh",
                "capacity MWh", "investment $", "energy $", "factor");
  out += line;
  for (Index y = 0; y < installs.size(); ++y) {
    out += fixed(double(y + 1), 0, 4) + " " + fixed(price[y], 2, 10) + " " + fixed(installs[y], 3, 12) + " " +
           fixed(capacity[y], 3, 12) + " " + fixed(invest[y], 2, 16) + " " + fixed(energy[y], 2, 16) + " " +
           fixed(discount_factor(rate, int(y + 1)), 4, 8) + "\n";
  }
  const Json& base = costs.at("baseline_usd");
  out += "salvage: " + fixed(costs.at("salvage_usd").get<double>(), 2) + "\n";
  out += "plan total: " + fixed(costs.at("discounted_total_usd").get<double>(), 2) + "\n";
  out += "baseline: " + (base.is_null() ? std::string("n/a") : fixed(base.get<double>(), 2)) + "\n";
  out += "savings: " + fixed(costs.at("savings_usd").get<double>(), 2) + "\n";
  return out;
}

void cmd_report(const fs::path& bundle, std::ostream& log) {
  const fs::path file = fs::is_directory(bundle) ? bundle / "solution.json" : bundle;
  if (!fs::exists(file)) throw ParseError(file.string() + ": no solution bundle");
  const fs::path dir = file.parent_path();
  const Json s = read_json(file);
  std::string text;
  try {
    text = report_text(s);
  } catch (const Json::exception& e) {
    throw SchemaError(file.string() + ": " + e.what());
  }

  const fs::path staging = dir / ".report.staging";
  fs::remove_all(staging);
  write_atomic(staging / "summary.txt", text);
  for (const Json& d : s.at("dispatch")) {
    DispatchDay day;
    day.year = d.at("year").get<int>();
    day.scenario_id = d.at("scenario").get<int>();
    day.load = vector_from_json(d.at("load_mw"), "load_mw");
    day.solar = vector_from_json(d.at("solar_mw"), "solar_mw");
    day.price = vector_from_json(d.at("price_usd_per_mwh"), "price_usd_per_mwh");
    day.charge = vector_from_json(d.at("charge_mw"), "charge_mw");
    day.discharge = vector_from_json(d.at("discharge_mw"), "discharge_mw");
    day.purchase = vector_from_json(d.at("purchase_mw"), "purchase_mw");
    day.soc = vector_from_json(d.at("soc_mwh"), "soc_mwh");
    write_atomic(staging / "dispatch" /
                     ("y" + std::to_string(day.year) + "_s" + std::to_string(day.scenario_id) + ".csv"),
                 dispatch_csv(day));
  }
  commit_directory(staging, dir / "report");
  log << text;
}

}  // namespace bessplan
