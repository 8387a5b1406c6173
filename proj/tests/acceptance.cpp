// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mgplan/catalog.hpp"
#include "mgplan/dispatch.hpp"
#include "mgplan/milp.hpp"
#include "mgplan/planner.hpp"
#include "mgplan/resources.hpp"
#include "test_support.hpp"

using namespace mgplan;
using mgplan::test::Instance;
using mgplan::test::random_instance;
using mgplan::test::table_catalog;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Planner-accepted solutions gathered by the other criteria, checked by #7.
struct Accepted {
  Instance instance;
  PlanSolution solution;
};
std::vector<Accepted> g_accepted;

void accept(const Instance& in, const PlanSolution& sol) {
  if (sol.feasible && sol.status == PlanStatus::optimal) g_accepted.push_back({in, sol});
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

PlanSolution plan(const Instance& in, const SearchSpace& space) {
  return plan_optimal(in.catalog, in.series, in.availability, space, in.params);
}

PlanSolution plan(const Instance& in) { return plan(in, SearchSpace::from_catalog(in.catalog)); }

// ---------------------------------------------------------------------------

constexpr double kAnnualLoad = 19.01 * 365.0;

Outcome lcoe_pairs() {
  const ProjectParams p;
  // Optimal-planning table (six columns) and the lead-acid columns of the
  // chemistry comparison, which repeat four of those NPCs.
  const std::pair<double, double> pairs[] = {
      {123412, 0.711}, {100416, 0.579}, {125432, 0.723}, {90542, 0.522}, {132616, 0.764},
      {101530, 0.585}, {132616, 0.764}, {101530, 0.585}, {125432, 0.723}, {90542, 0.522}};
  double worst = 0.0;
  for (const auto& [npc, printed] : pairs) {
    worst = std::max(worst, std::fabs(lcoe(npc, kAnnualLoad, p) - printed));
  }
  return {worst <= 0.001, fmt("10 pairs, max |error| %.5f $/kWh (tol 0.001)", worst)};
}

Outcome unit_oracle() {
  const ProjectParams p;
  const Catalog la = table_catalog(false);
  const Catalog lfp = table_catalog(true);
  double worst = 0.0;
  bool counts = true;
  for (const ComponentSpec* spec : {&la.pv, &la.wt, &la.bess, &lfp.bess}) {
    const auto e = unit_economics(*spec, p);
    const auto o = mgplan::test::cash_flow_oracle(spec->capital_per_unit, spec->replacement_cost(),
                                                  spec->om_fraction, spec->lifespan_years,
                                                  p.horizon_years, p.discount_rate);
    const std::pair<double, double> parts[] = {{e.capital, o.capital},
                                               {e.replacement_npv, o.replacement},
                                               {e.om_npv, o.om},
                                               {e.salvage_npv, o.salvage},
                                               {e.unit_npc, o.npc()}};
    for (const auto& [a, b] : parts) worst = std::max(worst, std::fabs(a - b) / o.npc());
    counts = counts && e.n_replacements == o.replacements &&
             replacement_years(*spec, p) == o.replacement_years;
  }
  const bool schedules = replacement_years(la.bess, p) == std::vector<int>{4, 8, 12, 16, 20, 24} &&
                         replacement_years(lfp.bess, p) == std::vector<int>{10, 20};
  return {worst <= 1e-6 && counts && schedules,
          fmt("4 rows, max rel diff %.2e (tol 1e-6), schedules %s", worst,
              schedules && counts ? "match" : "differ")};
}

Outcome autonomy() {
  const ComponentSpec la = table_catalog(false).bess;
  const std::pair<int, double> rows[] = {{1, 6.96}, {3, 20.9}, {6, 41.8}, {7, 48.7}, {9, 62.6}};
  double worst = 0.0;
  std::string got;
  for (const auto& [n, printed] : rows) {
    const double h = autonomy_hours(la, n, 19.01);
    worst = std::max(worst, std::fabs(h - printed) / printed);
    got += fmt(" %.2f", h);
  }
  return {worst <= 0.02, fmt("hours%s, max rel diff %.2f%% (tol 2%%)", got.c_str(), 100 * worst)};
}

Outcome dispatch_optimality() {
  constexpr int kLevels = 2001;
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> steps(1, 48);
  int ok = 0;
  double worst_gap = 0.0;
  double worst_below = 0.0;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    const Instance in = random_instance(rng, steps(rng), 8);
    const double greedy =
        simulate_totals(in.sizing, in.series, in.availability, in.catalog, in.params).unserved_energy;
    const double dp = dp_oracle(in.sizing, in.series, in.availability, in.catalog, in.params, kLevels);
    const double e_rate = in.sizing.n_bess * in.catalog.bess.unit_energy_kwh;
    const double bound = static_cast<double>(in.series.size()) * e_rate / (kLevels - 1);
    // The lattice is a restriction of the continuous problem, so dp >= optimum.
    const double below = greedy - dp;
    const double gap = dp - greedy;
    worst_below = std::max(worst_below, below);
    worst_gap = std::max(worst_gap, bound > 0 ? gap / bound : std::fabs(gap));
    if (below <= 1e-9 && gap <= bound + 1e-9) ++ok;
  }
  return {ok == n, fmt("%d/%d within bound, levels %d, max gap/bound %.3f, greedy-dp %.1e", ok, n,
                       kLevels, worst_gap, worst_below)};
}

Outcome planner_optimality() {
  std::mt19937_64 rng(20240602);
  std::uniform_int_distribution<int> steps(24, 168);
  int feasible = 0, agree = 0;
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    const Instance in = random_instance(rng, steps(rng), 15);  // counts 0..15: lattice <= 16^3
    const SearchSpace space = SearchSpace::from_catalog(in.catalog);
    const auto got = plan(in, space);
    const auto brute =
        brute_force_plan(in.catalog, in.series, in.availability, space, in.params);
    const bool same = got.feasible == brute.feasible &&
                      (!got.feasible || (got.npc == brute.npc && got.sizing == brute.sizing));
    agree += same;
    feasible += got.feasible;
    accept(in, got);
  }
  return {agree == n && feasible > 0,
          fmt("%d/%d identical (NPC exact, sizing), %d feasible", agree, n, feasible)};
}

Outcome monotonicity() {
  std::mt19937_64 rng(20240603);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int dim_cases[3] = {0, 0, 0};
  int dim_bad = 0;
  while (std::min({dim_cases[0], dim_cases[1], dim_cases[2]}) < 150) {
    const Instance in = random_instance(rng, 48, 8);
    const int d = static_cast<int>(rng() % 3);
    Sizing up = in.sizing;
    int& c = d == 0 ? up.n_pv : d == 1 ? up.n_wt : up.n_bess;
    const int cap = d == 0 ? in.catalog.pv.n_max : d == 1 ? in.catalog.wt.n_max : in.catalog.bess.n_max;
    if (c >= cap) continue;
    ++c;
    const Planner p(in.catalog, in.series, in.availability, in.params);
    if (!p.is_feasible(in.sizing)) continue;
    ++dim_cases[d];
    dim_bad += !p.is_feasible(up);
  }

  int ul_cases = 0, ur_cases = 0, cap_bad = 0;
  while (ul_cases < 120 || ur_cases < 120) {
    Instance in = random_instance(rng, 48, 8);
    const bool vary_ul = ul_cases < 120 && (ur_cases >= 120 || rng() % 2 == 0);
    in.params.max_unserved_fraction = 0.03 * u(rng);
    in.params.max_unmet_reserve_fraction = 0.2 * u(rng);
    const auto base = plan(in);
    if (!base.feasible) continue;
    accept(in, base);
    Instance loose = in;
    if (vary_ul) {
      loose.params.max_unserved_fraction += 0.03 * u(rng);
      ++ul_cases;
    } else {
      loose.params.max_unmet_reserve_fraction += 0.2 * u(rng);
      ++ur_cases;
    }
    const auto relaxed = plan(loose);
    accept(loose, relaxed);
    cap_bad += !relaxed.feasible || relaxed.npc > base.npc;
  }
  return {dim_bad == 0 && cap_bad == 0,
          fmt("feasibility up-steps pv/wt/bess %d/%d/%d (%d violations); NPC vs k_UL %d, vs "
              "k_UR %d (%d violations)",
              dim_cases[0], dim_cases[1], dim_cases[2], dim_bad, ul_cases, ur_cases, cap_bad)};
}

struct YearResult {
  PlanSolution la0, la5, lfp0, lfp5;          // PV + WT
  PlanSolution la0_pv, la5_pv, lfp0_pv, lfp5_pv;  // PV only
  double full_year_seconds = 0.0;
};
YearResult g_year;

Instance bundled_year(bool lfp, double unmet_cap) {
  Instance in;
  in.catalog = table_catalog(lfp);
  const auto dir = mgplan::test::data_dir();
  in.series = read_scenario(dir / "desert_weather.csv", dir / "load.csv");
  in.params.max_unserved_fraction = unmet_cap;
  in.availability = availability(in.series, in.params.pv_derate, PowerCurve::gv2kw());
  return in;
}

Outcome full_year_trends() {
  auto run = [](bool lfp, double cap, bool wt) {
    const Instance in = bundled_year(lfp, cap);
    SearchSpace space = SearchSpace::from_catalog(in.catalog);
    if (!wt) space.fixed_wt = 0;
    const auto t0 = std::chrono::steady_clock::now();
    const auto sol = plan(in, space);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    g_year.full_year_seconds = std::max(g_year.full_year_seconds, secs);
    accept(in, sol);
    return sol;
  };
  YearResult& y = g_year;
  y.la0 = run(false, 0.0, true);
  y.la5 = run(false, 0.0005, true);
  y.lfp0 = run(true, 0.0, true);
  y.lfp5 = run(true, 0.0005, true);
  y.la0_pv = run(false, 0.0, false);
  y.la5_pv = run(false, 0.0005, false);
  y.lfp0_pv = run(true, 0.0, false);
  y.lfp5_pv = run(true, 0.0005, false);

  const bool all = y.la0.feasible && y.la5.feasible && y.lfp0.feasible && y.lfp5.feasible &&
                   y.la0_pv.feasible && y.la5_pv.feasible && y.lfp0_pv.feasible && y.lfp5_pv.feasible;
  const bool a = y.la5.npc < y.la0.npc && y.lfp5.npc < y.lfp0.npc && y.la5_pv.npc < y.la0_pv.npc &&
                 y.lfp5_pv.npc < y.lfp0_pv.npc;
  const bool b = y.la0.npc <= y.la0_pv.npc && y.la5.npc <= y.la5_pv.npc &&
                 y.lfp0.npc <= y.lfp0_pv.npc && y.lfp5.npc <= y.lfp5_pv.npc;
  const bool c = y.lfp0.npc < y.la0.npc && y.lfp5.npc < y.la5.npc &&
                 y.lfp0_pv.npc < y.la0_pv.npc && y.lfp5_pv.npc < y.la5_pv.npc;
  return {all && a && b && c,
          fmt("(a) 0.05%% cheaper %s: LA %.0f->%.0f, LFP %.0f->%.0f; (b) WT never dearer %s: LA "
              "PV %.0f vs PV+WT %.0f; (c) LFP cheaper %s: %.0f vs LA %.0f",
              a ? "yes" : "no", y.la0.npc, y.la5.npc, y.lfp0.npc, y.lfp5.npc, b ? "yes" : "no",
              y.la0_pv.npc, y.la0.npc, c ? "yes" : "no", y.lfp0.npc, y.la0.npc)};
}

Outcome full_year_runtime() {
  // Reuses the timings from the trend runs (T = 8760, pv <= 200, wt <= 10, bess <= 10).
  const Instance in = bundled_year(false, 0.0);
  const bool bounds = in.catalog.pv.n_max == 200 && in.catalog.wt.n_max == 10 &&
                      in.catalog.bess.n_max == 10 && in.series.size() == 8760;
  return {bounds && g_year.la0.feasible && g_year.full_year_seconds < 300.0,
          fmt("T=%zu, slowest of 8 plans %.2f s (budget 300 s)", in.series.size(),
              g_year.full_year_seconds)};
}

Outcome milp_consistency() {
  std::size_t ok = 0;
  double worst_violation = 0.0;
  double worst_objective = 0.0;
  for (const auto& [in, sol] : g_accepted) {
    const auto model = milp::build_model(in.catalog, in.series, in.availability,
                                         SearchSpace::from_catalog(in.catalog), in.params);
    const auto trace = simulate_greedy(sol.sizing, in.series, in.availability, in.catalog, in.params);
    const auto r = milp::validate_solution(model, milp::assignment_from_dispatch(sol.sizing, trace), 1e-6);
    const auto econ = catalog_economics(in.catalog, in.params);
    const double npc = total_npc(sol.sizing.n_pv, sol.sizing.n_wt, sol.sizing.n_bess, econ);
    const double obj_err = std::fabs(r.objective - npc) / std::max(1.0, npc);
    worst_violation = std::max(worst_violation, r.max_violation);
    worst_objective = std::max(worst_objective, obj_err);
    ok += r.feasible && obj_err <= 1e-9;
  }
  return {ok == g_accepted.size() && !g_accepted.empty(),
          fmt("%zu/%zu accepted solutions valid, max violation %.2e (tol 1e-6), max objective rel "
              "diff %.1e (tol 1e-9)",
              ok, g_accepted.size(), worst_violation, worst_objective)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> fn;
  };
  // #7 runs last: it checks every solution the other criteria accepted.
  const std::vector<Criterion> criteria = {
      {1, "LCOE reproduction", 1.0, lcoe_pairs},
      {2, "unit-economics oracle", 1.0, unit_oracle},
      {3, "autonomy hours", 1.0, autonomy},
      {4, "dispatch optimality", 60.0, dispatch_optimality},
      {5, "planner optimality", 300.0, planner_optimality},
      {6, "monotonicity", 0.0, monotonicity},
      {8, "full-year trends", 0.0, full_year_trends},
      {9, "full-year runtime", 0.0, full_year_runtime},
      {7, "MILP cross-check", 0.0, milp_consistency},
  };
  std::vector<std::string> lines(10);
  bool all = true;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.budget_s <= 0.0 || secs < c.budget_s;
    const bool pass = o.pass && in_time;
    all = all && pass;
    std::string budget = c.budget_s > 0.0 ? fmt(" / %.0f s", c.budget_s) : "";
    lines[c.id] = fmt("%s  #%d %-22s %s [%.2f s%s]", pass ? "PASS" : "FAIL", c.id, c.name,
                      o.detail.c_str(), secs, budget.c_str());
    std::fprintf(stderr, "finished #%d\n", c.id);
  }
  for (int i = 1; i <= 9; ++i) std::printf("%s\n", lines[i].c_str());
  std::printf("%s\n", all ? "ALL PASS" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}
