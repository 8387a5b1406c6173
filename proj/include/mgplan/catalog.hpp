#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "mgplan/errors.hpp"

namespace mgplan {

enum class ComponentKind { pv, wt, bess };

std::string_view to_string(ComponentKind kind);

/// One purchasable unit (a PV string, a turbine, a battery string) and its
/// cost/lifetime data. Power-rated kinds use unit_power_kw, storage uses
/// unit_energy_kwh plus the SoC window, charge time and one-way efficiency.
struct ComponentSpec {
  ComponentKind kind = ComponentKind::pv;
  double unit_power_kw = 0.0;
  double unit_energy_kwh = 0.0;
  double capital_per_unit = 0.0;
  std::optional<double> replacement_per_unit = std::nullopt;  // defaults to capital_per_unit
  double om_fraction = 0.0;                    // of capital, per year
  int lifespan_years = 1;
  int n_min = 0;
  int n_max = 0;

  // storage only
  double soc_min = 0.0;
  double soc_max = 1.0;
  double full_charge_hours = 1.0;
  double one_way_efficiency = 1.0;

  double replacement_cost() const {
    return replacement_per_unit.value_or(capital_per_unit);
  }
  // kW delivered by one battery unit at its power rating.
  double unit_bess_power_kw() const {
    return unit_energy_kwh / full_charge_hours;
  }

  // Throws InputError when an invariant does not hold.
  void validate() const;
};

struct ProjectParams {
  int horizon_years = 25;
  double discount_rate = 0.05;
  double reserve_factor = 0.15;
  double max_unserved_fraction = 0.0;
  double max_unmet_reserve_fraction = 0.0;
  double step_hours = 1.0;

  double pv_derate = 1.0;
  // Fraction of rated energy stored at t = 0; unset means soc_max.
  std::optional<double> initial_soc = std::nullopt;
  // Require the stored energy at the end of the horizon to be >= the initial value.
  bool cyclic_soc = false;

  void validate() const;
};

struct Catalog {
  ComponentSpec pv{.kind = ComponentKind::pv};
  ComponentSpec wt{.kind = ComponentKind::wt};
  ComponentSpec bess{.kind = ComponentKind::bess};

  const ComponentSpec& operator[](ComponentKind kind) const;
  void validate() const;
};

struct UnitEconomics {
  double capital = 0.0;
  double replacement_npv = 0.0;
  double om_npv = 0.0;
  double salvage_npv = 0.0;
  double unit_npc = 0.0;
  int n_replacements = 0;
};

struct CatalogEconomics {
  UnitEconomics pv;
  UnitEconomics wt;
  UnitEconomics bess;
};

/// Years k*l (k >= 1) strictly before the horizon at which a unit is replaced.
std::vector<int> replacement_years(const ComponentSpec& spec,
                                   const ProjectParams& params);

/// Discounted per-unit capital, replacement, O&M and salvage. Rejects specs
/// whose unit NPC is not strictly positive, since the planner's search
/// relies on positive unit costs.
UnitEconomics unit_economics(const ComponentSpec& spec,
                             const ProjectParams& params);

CatalogEconomics catalog_economics(const Catalog& catalog,
                                   const ProjectParams& params);

double total_npc(int n_pv, int n_wt, int n_bess, const CatalogEconomics& econ);

/// Annuity factor; empty for a zero discount rate (use 1/Y there).
std::optional<double> capital_recovery_factor(const ProjectParams& params);

/// NPC spread over undiscounted lifetime served energy.
double lcoe(double npc, double annual_served_energy_kwh,
            const ProjectParams& params);

/// Annualised cost (NPC * CRF, or NPC / Y at zero discount) per served kWh.
double lcoe_annualized(double npc, double annual_served_energy_kwh,
                       const ProjectParams& params);

}  // namespace mgplan
