#include "mgplan/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mgplan/config.hpp"
#include "mgplan/dispatch.hpp"
#include "mgplan/milp.hpp"
#include "mgplan/planner.hpp"
#include "mgplan/report.hpp"

namespace mgplan::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::pair<Mode, std::string_view> kModes[] = {
    {Mode::plan, "plan"},
    {Mode::autonomy, "autonomy"},
    {Mode::evaluate, "evaluate"},
    {Mode::export_milp, "export-milp"},
    {Mode::synth_load, "synth-load"},
    {Mode::synth_weather, "synth-weather"},
    {Mode::compare, "compare"},
    {Mode::validate, "validate"},
};

struct Inputs {
  Catalog catalog;
  ProjectParams params;
  ScenarioSeries series;
  AvailabilitySeries availability;
};

Inputs load_inputs(const RunConfig& cfg) {
  Inputs in;
  const auto catalog_doc = read_json_file(cfg.catalog);
  in.catalog = catalog_from_json(catalog_doc);
  if (catalog_doc.contains("project")) in.params = params_from_json(catalog_doc);
  if (!cfg.params.empty()) apply_params_json(read_json_file(cfg.params), in.params);
  if (cfg.unmet_cap) in.params.max_unserved_fraction = *cfg.unmet_cap;
  if (cfg.reserve_cap) in.params.max_unmet_reserve_fraction = *cfg.reserve_cap;

  in.series = read_scenario(cfg.weather, cfg.load);
  // The simulation step always follows the scenario's timestamps.
  in.params.step_hours = in.series.time.step_hours();
  in.params.validate();
  const PowerCurve curve = cfg.curve.empty() ? PowerCurve::gv2kw() : read_power_curve(cfg.curve);
  in.availability = availability(in.series, in.params.pv_derate, curve);
  return in;
}

SearchSpace search_space(const RunConfig& cfg, const Catalog& catalog) {
  SearchSpace space = SearchSpace::from_catalog(catalog);
  space.fixed_pv = cfg.fix_pv;
  space.fixed_wt = cfg.no_wt ? std::optional<int>(0) : cfg.fix_wt;
  space.fixed_bess = cfg.fix_bess;
  return space;
}

Sizing fixed_sizing(const RunConfig& cfg) {
  return {*cfg.fix_pv, cfg.no_wt ? 0 : *cfg.fix_wt, *cfg.fix_bess};
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InputError("write failed for '" + path.string() + "'");
}

std::string default_label(const RunConfig& cfg) {
  const std::string stem = cfg.catalog.stem().string();
  return stem.empty() ? std::string(to_string(cfg.mode)) : stem;
}

// solution.json, table.txt/csv, dispatch.csv; returns the exit code.
int emit_solution(const RunConfig& cfg, const Inputs& in, const PlanSolution& sol,
                  std::ostream& out, std::ostream& err) {
  fs::create_directories(cfg.out);
  write_text(cfg.out / "solution.json", to_json(sol, false).dump(2) + "\n");
  const auto report = compare_report({sol}, {cfg.labels.empty() ? default_label(cfg) : cfg.labels[0]});
  write_text(cfg.out / "table.txt", report.text);
  write_text(cfg.out / "table.csv", report.csv);
  const auto trace = simulate_greedy(sol.sizing, in.series, in.availability, in.catalog, in.params);
  write_dispatch_csv(trace, in.series, cfg.out / "dispatch.csv");

  err << "sizing: n_pv=" << sol.sizing.n_pv << " n_wt=" << sol.sizing.n_wt
      << " n_bess=" << sol.sizing.n_bess << ", candidates evaluated: "
      << sol.candidates_evaluated << ", wall time " << sol.wall_time_s << " s\n";
  if (!sol.feasible) {
    out << "infeasible\n";
    return kInfeasible;
  }
  out << report.text;
  return kOk;
}

int run_planning(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(cfg);
  PlanOptions options;
  options.jobs = cfg.jobs;
  Planner planner(in.catalog, in.series, in.availability, in.params, options);
  PlanSolution sol;
  switch (cfg.mode) {
    case Mode::plan: {
      const SearchSpace space = search_space(cfg, in.catalog);
      sol = cfg.brute_force ? planner.brute_force(space) : planner.optimal(space);
      break;
    }
    case Mode::autonomy: {
      RunConfig pinned = cfg;
      pinned.fix_bess.reset();
      sol = planner.autonomy(*cfg.fix_bess, search_space(pinned, in.catalog));
      break;
    }
    case Mode::evaluate:
      sol = planner.evaluate(fixed_sizing(cfg));
      break;
    default:
      throw std::logic_error("not a planning mode");
  }
  return emit_solution(cfg, in, sol, out, err);
}

int run_export(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(cfg);
  const auto start = std::chrono::steady_clock::now();
  const auto model = milp::build_model(in.catalog, in.series, in.availability,
                                       search_space(cfg, in.catalog), in.params,
                                       {.max_rows = cfg.max_rows});
  fs::create_directories(cfg.out);
  write_text(cfg.out / "model.lp", milp::export_lp(model));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  err << "variables: " << model.count(milp::VarKind::integer) << " integer, "
      << model.count(milp::VarKind::continuous) << " continuous, "
      << model.count(milp::VarKind::binary) << " binary; rows: " << model.constraints().size()
      << "; written in " << secs << " s\n";
  out << (cfg.out / "model.lp").string() << '\n';
  return kOk;
}

int run_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  milp::LinearModel model;
  std::optional<Inputs> in;
  if (!cfg.model.empty()) {
    model = milp::parse_lp(read_text(cfg.model));
  } else {
    in = load_inputs(cfg);
    model = milp::build_model(in->catalog, in->series, in->availability,
                              search_space(cfg, in->catalog), in->params,
                              {.max_rows = cfg.max_rows});
  }
  milp::SolutionAssignment assignment;
  if (!cfg.solutions.empty()) {
    assignment = milp::parse_solution(read_text(cfg.solutions.front()));
  } else {
    if (!in) in = load_inputs(cfg);
    const Sizing sizing = fixed_sizing(cfg);
    check_bounds(sizing, in->catalog);
    assignment = milp::assignment_from_dispatch(
        sizing, simulate_greedy(sizing, in->series, in->availability, in->catalog, in->params));
  }
  const auto report = milp::validate_solution(model, assignment, cfg.tolerance);

  fs::create_directories(cfg.out);
  std::string csv = "row,residual,violation\n";
  for (const auto* group : {&report.rows, &report.bounds}) {
    for (const auto& r : *group) {
      std::ostringstream line;
      line.precision(17);
      line << r.name << ',' << r.residual << ',' << r.violation << '\n';
      csv += line.str();
    }
  }
  write_text(cfg.out / "residuals.csv", csv);

  out.precision(12);
  out << (report.feasible ? "feasible" : "violated") << "\nmax violation: " << report.max_violation
      << (report.worst.empty() ? "" : " (" + report.worst + ")") << "\nobjective: "
      << report.objective << '\n';
  if (!report.feasible) err << "assignment violates the model beyond " << cfg.tolerance << '\n';
  return report.feasible ? kOk : kInfeasible;
}

int run_compare(const RunConfig& cfg, std::ostream& out) {
  std::vector<PlanSolution> sols;
  std::vector<std::string> labels = cfg.labels;
  for (const auto& path : cfg.solutions) {
    sols.push_back(solution_from_json(read_json_file(path)));
    if (labels.size() < sols.size()) labels.push_back(path.parent_path().filename().string().empty()
                                                         ? path.stem().string()
                                                         : path.parent_path().filename().string());
  }
  const auto report = compare_report(sols, labels);
  fs::create_directories(cfg.out);
  write_text(cfg.out / "table.txt", report.text);
  write_text(cfg.out / "table.csv", report.csv);
  out << report.text;
  return kOk;
}

int run_synth_load(const RunConfig& cfg, std::ostream& out) {
  const auto load = synthesize_load(cfg.load_profile, cfg.days);
  fs::create_directories(cfg.out);
  write_load_csv(TimeAxis::hourly_index(load.size()), load, cfg.out / "load.csv");
  out.precision(6);
  out << "daily energy: " << daily_energy_kwh(cfg.load_profile) << " kWh\n";
  return kOk;
}

int run_synth_weather(const RunConfig& cfg, std::ostream& out) {
  WeatherSynthesis opts;
  opts.days = cfg.days;
  opts.seed = cfg.seed;
  opts.gap_start_day = cfg.gap_start_day;
  opts.gap_days = cfg.gap_days;
  auto series = synthesize_weather(opts);
  fs::create_directories(cfg.out);
  write_weather_csv(series, cfg.out / "weather.csv");
  out << (cfg.out / "weather.csv").string() << '\n';
  return kOk;
}

}  // namespace

std::optional<Mode> parse_mode(std::string_view text) {
  for (const auto& [mode, name] : kModes) {
    if (name == text) return mode;
  }
  return std::nullopt;
}

std::string_view to_string(Mode mode) {
  for (const auto& [m, name] : kModes) {
    if (m == mode) return name;
  }
  return "?";
}

void RunConfig::validate() const {
  auto need = [&](bool ok, const char* what) {
    if (!ok) throw UsageError(std::string(to_string(mode)) + " mode requires " + what);
  };
  const bool needs_scenario = mode == Mode::plan || mode == Mode::autonomy ||
                              mode == Mode::evaluate || mode == Mode::export_milp;
  if (needs_scenario) {
    need(!weather.empty(), "--weather");
    need(!catalog.empty(), "--catalog");
  }
  if (mode == Mode::autonomy) need(fix_bess.has_value(), "--fix-bess");
  if (mode == Mode::evaluate) {
    need(fix_pv && fix_bess && (fix_wt || no_wt), "--fix-pv, --fix-wt (or --no-wt) and --fix-bess");
  }
  if (mode == Mode::compare) need(!solutions.empty(), "at least one --solution");
  if (mode == Mode::validate) {
    if (model.empty()) {
      need(!weather.empty() && !catalog.empty(), "--model or --weather and --catalog");
    }
    if (solutions.empty()) {
      need(fix_pv && fix_bess && (fix_wt || no_wt),
           "--solution or a fixed sizing (--fix-pv, --fix-wt, --fix-bess)");
      need(!weather.empty() && !catalog.empty(), "--weather and --catalog for a fixed sizing");
    }
  }
  for (const auto* cap : {&unmet_cap, &reserve_cap}) {
    if (*cap && !(**cap >= 0.0 && **cap <= 1.0)) throw UsageError("caps must lie in [0, 1]");
  }
  for (const auto* n : {&fix_pv, &fix_wt, &fix_bess}) {
    if (*n && **n < 0) throw UsageError("fixed counts must be non-negative");
  }
  if (jobs < 1) throw UsageError("--jobs must be at least 1");
  if ((mode == Mode::synth_load || mode == Mode::synth_weather) && days < 1) {
    throw UsageError("--days must be at least 1");
  }
  if (tolerance < 0.0) throw UsageError("--tolerance must be non-negative");
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig cfg;
  CLI::App app{"Islanded PV/wind/battery microgrid sizing"};
  app.set_config("--config", "", "TOML/INI file supplying any flag; explicit flags win");
  app.option_defaults()->always_capture_default();

  std::string mode = "plan";
  std::string weather, load, curve, catalog, params, out_dir = ".", model;
  std::vector<std::string> solutions;
  std::optional<double> unmet_cap, reserve_cap;
  std::optional<int> fix_pv, fix_wt, fix_bess;

  app.add_option("--mode", mode, "plan | autonomy | evaluate | export-milp | synth-load | "
                                 "synth-weather | compare | validate");
  app.add_option("--weather", weather, "weather CSV (timestamp, ghi_wm2, wind_ms[, load_kw])");
  app.add_option("--load", load, "load CSV (timestamp, load_kw); default: weather file column");
  app.add_option("--curve", curve, "turbine power curve CSV (speed_ms, power_kw)");
  app.add_option("--catalog", catalog, "component catalog JSON");
  app.add_option("--params", params, "project parameter JSON overrides");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--unmet-cap", unmet_cap, "max unserved fraction of load");
  app.add_option("--reserve-cap", reserve_cap, "max unmet reserve fraction of load");
  app.add_option("--fix-pv", fix_pv, "pin the PV unit count");
  app.add_option("--fix-wt", fix_wt, "pin the turbine count");
  app.add_option("--fix-bess", fix_bess, "pin the battery string count");
  app.add_flag("--no-wt", cfg.no_wt, "exclude wind turbines");
  app.add_flag("--brute-force", cfg.brute_force, "exhaustive lattice scan instead of search");
  app.add_option("--jobs", cfg.jobs, "concurrent candidate evaluations");
  app.add_option("--seed", cfg.seed, "seed for synthetic scenarios");
  app.add_option("--base-kw", cfg.load_profile.base_kw, "synth-load base power");
  app.add_option("--peak-kw", cfg.load_profile.peak_kw, "synth-load window power");
  app.add_option("--window-start", cfg.load_profile.window_start_hour, "synth-load window start hour");
  app.add_option("--window-hours", cfg.load_profile.window_hours, "synth-load window length");
  app.add_option("--days", cfg.days, "days to synthesise");
  app.add_option("--gap-start-day", cfg.gap_start_day, "synth-weather first zero-resource day");
  app.add_option("--gap-days", cfg.gap_days, "synth-weather zero-resource days");
  app.add_option("--solution", solutions, "solution JSON (compare) or assignment file (validate)");
  app.add_option("--label", cfg.labels, "column labels for the table");
  app.add_option("--model", model, "LP file to validate against");
  app.add_option("--tolerance", cfg.tolerance, "validate: max allowed violation");
  app.add_option("--max-rows", cfg.max_rows, "MILP size limit in rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  const auto parsed = parse_mode(mode);
  if (!parsed) throw UsageError("unknown mode '" + mode + "'");
  cfg.mode = *parsed;
  cfg.weather = weather;
  cfg.load = load;
  cfg.curve = curve;
  cfg.catalog = catalog;
  cfg.params = params;
  cfg.out = out_dir;
  cfg.model = model;
  cfg.solutions.assign(solutions.begin(), solutions.end());
  cfg.unmet_cap = unmet_cap;
  cfg.reserve_cap = reserve_cap;
  cfg.fix_pv = fix_pv;
  cfg.fix_wt = fix_wt;
  cfg.fix_bess = fix_bess;
  cfg.validate();
  return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  switch (cfg.mode) {
    case Mode::plan:
    case Mode::autonomy:
    case Mode::evaluate:
      return run_planning(cfg, out, err);
    case Mode::export_milp:
      return run_export(cfg, out, err);
    case Mode::validate:
      return run_validate(cfg, out, err);
    case Mode::compare:
      return run_compare(cfg, out);
    case Mode::synth_load:
      return run_synth_load(cfg, out);
    case Mode::synth_weather:
      return run_synth_weather(cfg, out);
  }
  return kUsage;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = parse_args(argc, argv, out);
    if (!cfg) return kOk;
    return run(*cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << '\n';
    return kResourceLimit;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::bad_alloc&) {
    err << "resource limit: out of memory\n";
    return kResourceLimit;
  }
}

}  // namespace mgplan::cli
