#pragma once

#include <filesystem>
#include <tuple>
#include <vector>

#include "mgplan/catalog.hpp"
#include "mgplan/resources.hpp"

namespace mgplan {

/// Integer unit counts. Ratings are always derived from the catalog.
struct Sizing {
  int n_pv = 0;
  int n_wt = 0;
  int n_bess = 0;

  friend bool operator==(const Sizing&, const Sizing&) = default;
  // Tie-break order among equal-cost candidates: (n_wt, n_bess, n_pv).
  auto tie_key() const { return std::tuple(n_wt, n_bess, n_pv); }
};

struct Ratings {
  double pv_kw = 0.0;
  double wt_kw = 0.0;
  double bess_kwh = 0.0;
  double bess_kw = 0.0;
};

Ratings ratings(const Sizing& sizing, const Catalog& catalog);

// InputError when a count is outside its catalog bounds.
void check_bounds(const Sizing& sizing, const Catalog& catalog);

struct DispatchTotals {
  double load_energy = 0.0;
  double served_energy = 0.0;
  double unserved_energy = 0.0;
  double unmet_reserve_energy = 0.0;
  double curtailed_energy = 0.0;
  double pv_energy = 0.0;
  double wt_energy = 0.0;
  double charge_energy = 0.0;
  double discharge_energy = 0.0;
  double initial_stored = 0.0;
  double final_stored = 0.0;
};

struct DispatchResult {
  std::vector<double> pv_used;
  std::vector<double> wt_used;
  std::vector<double> charge;
  std::vector<double> discharge;
  std::vector<bool> discharging;
  std::vector<double> bess_power;  // discharge - charge
  std::vector<double> stored_energy;
  std::vector<double> unserved;
  std::vector<double> unmet_reserve;
  std::vector<double> curtailed;
  DispatchTotals totals;

  std::size_t size() const { return stored_energy.size(); }
};

/// Chronological rule-based operation: renewables serve load first, surplus
/// charges the battery up to its rating and SoC ceiling, deficits draw the
/// battery down to its SoC floor, and whatever remains is unserved or
/// curtailed. This policy minimises total unserved energy for a fixed sizing.
DispatchResult simulate_greedy(const Sizing& sizing, const ScenarioSeries& series,
                               const AvailabilitySeries& availability,
                               const Catalog& catalog, const ProjectParams& params);

/// Same policy without per-step traces.
DispatchTotals simulate_totals(const Sizing& sizing, const ScenarioSeries& series,
                               const AvailabilitySeries& availability,
                               const Catalog& catalog, const ProjectParams& params);

/// Per-step reserve shortfall: predicted renewables plus battery power
/// rating against (1 + k_res) * load.
std::vector<double> unmet_reserve_profile(const Sizing& sizing, const ScenarioSeries& series,
                                          const AvailabilitySeries& availability,
                                          const Catalog& catalog,
                                          const ProjectParams& params);

struct FeasibilityVerdict {
  bool feasible = false;
  double unserved_fraction = 0.0;
  double unmet_reserve_fraction = 0.0;
  // cap minus actual, in kWh; negative means violated
  double unserved_slack = 0.0;
  double unmet_reserve_slack = 0.0;
  bool terminal_ok = true;
};

FeasibilityVerdict check_feasible(const DispatchTotals& totals, const ProjectParams& params);
FeasibilityVerdict check_feasible(const DispatchResult& result, const ScenarioSeries& series,
                                  const ProjectParams& params);

/// Exhaustive dynamic program over stored-energy levels k * E_rate /
/// (soc_levels - 1) that lie inside the SoC window. Returns the minimal total
/// unserved energy (kWh) reachable on that lattice under the same operating
/// constraints as simulate_greedy, which exceeds the true optimum by at most
/// E_rate / (soc_levels - 1) per step. Independent of the greedy rule.
double dp_oracle(const Sizing& sizing, const ScenarioSeries& series,
                 const AvailabilitySeries& availability, const Catalog& catalog,
                 const ProjectParams& params, int soc_levels,
                 double max_work = 2e10);

/// One row per step with the DispatchResult per-step columns.
void write_dispatch_csv(const DispatchResult& result, const ScenarioSeries& series,
                        const std::filesystem::path& path);

}  // namespace mgplan
