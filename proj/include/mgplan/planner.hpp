#pragma once

#include <cstddef>
#include <optional>

#include "json.hpp"
#include "mgplan/catalog.hpp"
#include "mgplan/dispatch.hpp"
#include "mgplan/resources.hpp"

namespace mgplan {

struct CountRange {
  int min = 0;
  int max = 0;
};

/// Per-component count ranges, with optional pinned counts.
struct SearchSpace {
  CountRange pv;
  CountRange wt;
  CountRange bess;
  std::optional<int> fixed_pv;
  std::optional<int> fixed_wt;
  std::optional<int> fixed_bess;

  static SearchSpace from_catalog(const Catalog& catalog);

  // Effective ranges after pinning; InputError if a pin is out of range.
  CountRange effective_pv() const;
  CountRange effective_wt() const;
  CountRange effective_bess() const;
  void validate() const;
  double volume() const;
};

enum class PlanStatus { optimal, infeasible, evaluated };

struct ComponentCost {
  int count = 0;
  UnitEconomics unit;
  double total = 0.0;
};

struct PlanSolution {
  PlanStatus status = PlanStatus::evaluated;
  bool feasible = false;
  Sizing sizing;
  Ratings rating;
  double npc = 0.0;
  std::optional<double> lcoe;  // empty when nothing is served
  std::optional<double> lcoe_annualized;
  ComponentCost pv_cost;
  ComponentCost wt_cost;
  ComponentCost bess_cost;
  double real_unserved_fraction = 0.0;
  double real_unmet_reserve_fraction = 0.0;
  DispatchTotals dispatch;
  std::optional<double> autonomy_hours;
  std::size_t candidates_evaluated = 0;
  double wall_time_s = 0.0;
};

struct PlanOptions {
  int jobs = 1;                       // concurrent candidate evaluations
  std::size_t max_visited = 5'000'000;  // best-first memory bound
  double brute_force_limit = 5e6;     // lattice volume cap for brute_force_plan
};

/// NPC-minimal integer sizing search. One plan at a time per instance.
class Planner {
 public:
  Planner(Catalog catalog, ScenarioSeries series, AvailabilitySeries availability,
          ProjectParams params, PlanOptions options = {});

  /// Cost-ordered best-first search from the lower corner of the lattice.
  /// Feasibility is monotone in every count and unit costs are positive, so
  /// the first feasible candidate popped is optimal. Ties go to the smallest
  /// (n_wt, n_bess, n_pv).
  PlanSolution optimal(const SearchSpace& space);

  /// Exhaustive lattice scan with the same feasibility test and tie-break.
  PlanSolution brute_force(const SearchSpace& space);

  /// optimal() with the battery count pinned; reports autonomy hours.
  PlanSolution autonomy(int n_bess, const SearchSpace& space);

  /// Full economics and dispatch for one sizing, feasible or not.
  PlanSolution evaluate(const Sizing& sizing) const;

  bool is_feasible(const Sizing& sizing) const;
  double cost(const Sizing& sizing) const;

  const CatalogEconomics& economics() const { return econ_; }
  const Catalog& catalog() const { return catalog_; }
  const ScenarioSeries& series() const { return series_; }
  const AvailabilitySeries& availability() const { return availability_; }
  const ProjectParams& params() const { return params_; }

 private:
  PlanSolution infeasible_result(const SearchSpace& space, std::size_t evaluated) const;

  Catalog catalog_;
  ScenarioSeries series_;
  AvailabilitySeries availability_;
  ProjectParams params_;
  PlanOptions options_;
  CatalogEconomics econ_;
  double annual_scale_ = 1.0;  // simulated energy -> per-year energy
};

PlanSolution plan_optimal(const Catalog& catalog, const ScenarioSeries& series,
                          const AvailabilitySeries& availability, const SearchSpace& space,
                          const ProjectParams& params, PlanOptions options = {});
PlanSolution brute_force_plan(const Catalog& catalog, const ScenarioSeries& series,
                              const AvailabilitySeries& availability,
                              const SearchSpace& space, const ProjectParams& params,
                              PlanOptions options = {});
PlanSolution plan_autonomy(const Catalog& catalog, const ScenarioSeries& series,
                           const AvailabilitySeries& availability, int n_bess_fixed,
                           const SearchSpace& space, const ProjectParams& params,
                           PlanOptions options = {});
PlanSolution evaluate(const Sizing& sizing, const Catalog& catalog,
                      const ScenarioSeries& series, const AvailabilitySeries& availability,
                      const ProjectParams& params);

/// Hours the usable battery window covers the average daily load.
double autonomy_hours(const ComponentSpec& bess, int n_bess, double daily_load_kwh);

std::string_view to_string(PlanStatus status);
nlohmann::json to_json(const PlanSolution& solution, bool include_wall_time = true);
PlanSolution solution_from_json(const nlohmann::json& doc);

}  // namespace mgplan
