#include "mgplan/catalog.hpp"

#include <cmath>
#include <string>

namespace mgplan {

namespace {

void require(bool condition, const std::string& what) {
  if (!condition) throw InputError(what);
}

double discount(double rate, int year) {
  return std::pow(1.0 + rate, -static_cast<double>(year));
}

}  // namespace

std::string_view to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::pv:
      return "pv";
    case ComponentKind::wt:
      return "wt";
    case ComponentKind::bess:
      return "bess";
  }
  return "?";
}

void ComponentSpec::validate() const {
  const std::string name(to_string(kind));
  require(std::isfinite(capital_per_unit) && capital_per_unit >= 0.0,
          name + ": capital_per_unit must be finite and >= 0");
  require(replacement_cost() >= 0.0 && std::isfinite(replacement_cost()),
          name + ": replacement_per_unit must be finite and >= 0");
  require(om_fraction >= 0.0 && std::isfinite(om_fraction),
          name + ": om_fraction must be >= 0");
  require(lifespan_years >= 1, name + ": lifespan_years must be >= 1");
  require(n_min >= 0 && n_min <= n_max, name + ": need 0 <= n_min <= n_max");
  if (kind == ComponentKind::bess) {
    require(unit_energy_kwh > 0.0 && std::isfinite(unit_energy_kwh),
            name + ": unit_energy_kwh must be > 0");
    require(unit_power_kw == 0.0, name + ": unit_power_kw must not be set for storage");
    require(soc_min >= 0.0 && soc_min < soc_max && soc_max <= 1.0,
            name + ": need 0 <= soc_min < soc_max <= 1");
    require(full_charge_hours > 0.0, name + ": full_charge_hours must be > 0");
    require(one_way_efficiency > 0.0 && one_way_efficiency <= 1.0,
            name + ": one_way_efficiency must be in (0, 1]");
  } else {
    require(unit_power_kw > 0.0 && std::isfinite(unit_power_kw),
            name + ": unit_power_kw must be > 0");
    require(unit_energy_kwh == 0.0, name + ": unit_energy_kwh is for storage only");
  }
}

void ProjectParams::validate() const {
  require(horizon_years >= 1, "horizon_years must be >= 1");
  require(discount_rate >= 0.0 && std::isfinite(discount_rate),
          "discount_rate must be >= 0");
  require(reserve_factor >= 0.0, "reserve_factor must be >= 0");
  require(max_unserved_fraction >= 0.0, "max_unserved_fraction must be >= 0");
  require(max_unmet_reserve_fraction >= 0.0,
          "max_unmet_reserve_fraction must be >= 0");
  require(step_hours > 0.0 && std::isfinite(step_hours), "step_hours must be > 0");
  require(pv_derate > 0.0 && pv_derate <= 1.2, "pv_derate must be in (0, 1.2]");
  if (initial_soc) {
    require(*initial_soc >= 0.0 && *initial_soc <= 1.0,
            "initial_soc must be in [0, 1]");
  }
}

const ComponentSpec& Catalog::operator[](ComponentKind kind) const {
  switch (kind) {
    case ComponentKind::pv:
      return pv;
    case ComponentKind::wt:
      return wt;
    case ComponentKind::bess:
      return bess;
  }
  return pv;
}

void Catalog::validate() const {
  require(pv.kind == ComponentKind::pv, "catalog pv entry has wrong kind");
  require(wt.kind == ComponentKind::wt, "catalog wt entry has wrong kind");
  require(bess.kind == ComponentKind::bess, "catalog bess entry has wrong kind");
  pv.validate();
  wt.validate();
  bess.validate();
}

std::vector<int> replacement_years(const ComponentSpec& spec,
                                   const ProjectParams& params) {
  std::vector<int> years;
  for (int y = spec.lifespan_years; y < params.horizon_years;
       y += spec.lifespan_years) {
    years.push_back(y);
  }
  return years;
}

UnitEconomics unit_economics(const ComponentSpec& spec,
                             const ProjectParams& params) {
  spec.validate();
  params.validate();

  const double rate = params.discount_rate;
  const int horizon = params.horizon_years;
  const int life = spec.lifespan_years;

  UnitEconomics out;
  out.capital = spec.capital_per_unit;

  const auto years = replacement_years(spec, params);
  out.n_replacements = static_cast<int>(years.size());
  for (int y : years) out.replacement_npv += spec.replacement_cost() * discount(rate, y);

  const double om_per_year = spec.om_fraction * spec.capital_per_unit;
  for (int y = 1; y <= horizon; ++y) out.om_npv += om_per_year * discount(rate, y);

  // Unused life of the last purchase, credited at the end of the horizon.
  const int remaining = (1 + out.n_replacements) * life - horizon;
  out.salvage_npv = std::max(0.0, spec.capital_per_unit * remaining /
                                      (life * std::pow(1.0 + rate, horizon)));

  out.unit_npc = out.capital + out.replacement_npv + out.om_npv - out.salvage_npv;
  if (!(out.unit_npc > 0.0)) {
    throw InputError(std::string(to_string(spec.kind)) +
                     ": unit NPC must be strictly positive");
  }
  return out;
}

CatalogEconomics catalog_economics(const Catalog& catalog,
                                   const ProjectParams& params) {
  return {unit_economics(catalog.pv, params), unit_economics(catalog.wt, params),
          unit_economics(catalog.bess, params)};
}

double total_npc(int n_pv, int n_wt, int n_bess, const CatalogEconomics& econ) {
  return n_pv * econ.pv.unit_npc + n_wt * econ.wt.unit_npc +
         n_bess * econ.bess.unit_npc;
}

std::optional<double> capital_recovery_factor(const ProjectParams& params) {
  const double a = params.discount_rate;
  if (!(a > 0.0)) return std::nullopt;
  const double growth = std::pow(1.0 + a, params.horizon_years);
  return a * growth / (growth - 1.0);
}

double lcoe(double npc, double annual_served_energy_kwh,
            const ProjectParams& params) {
  if (!(annual_served_energy_kwh > 0.0)) {
    throw InputError("LCOE needs strictly positive served energy");
  }
  return npc / (params.horizon_years * annual_served_energy_kwh);
}

double lcoe_annualized(double npc, double annual_served_energy_kwh,
                       const ProjectParams& params) {
  if (!(annual_served_energy_kwh > 0.0)) {
    throw InputError("LCOE needs strictly positive served energy");
  }
  const double factor =
      capital_recovery_factor(params).value_or(1.0 / params.horizon_years);
  return npc * factor / annual_served_energy_kwh;
}

}  // namespace mgplan
