#include "mgplan/config.hpp"

#include <fstream>
#include <set>
#include <string>

namespace mgplan {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw InputError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T required(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) {
    throw InputError(std::string("missing key '") + key + "' in " + where);
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("bad value for '") + key + "' in " + where +
                     ": " + e.what());
  }
}

template <typename T>
void optional_into(const json& obj, const char* key, T& out,
                   const std::string& where) {
  if (obj.contains(key)) out = required<T>(obj, key, where);
}

ComponentSpec component_from_json(const json& obj, ComponentKind kind) {
  const std::string where(to_string(kind));
  if (!obj.is_object()) throw InputError("component '" + where + "' must be an object");

  ComponentSpec spec{.kind = kind};
  if (kind == ComponentKind::bess) {
    reject_unknown(obj,
                   {"unit_energy_kwh", "capital_per_unit", "replacement_per_unit",
                    "om_fraction", "lifespan_years", "n_min", "n_max", "soc_min",
                    "soc_max", "full_charge_hours", "one_way_efficiency"},
                   where);
    spec.unit_energy_kwh = required<double>(obj, "unit_energy_kwh", where);
    spec.soc_min = required<double>(obj, "soc_min", where);
    spec.soc_max = required<double>(obj, "soc_max", where);
    spec.full_charge_hours = required<double>(obj, "full_charge_hours", where);
    spec.one_way_efficiency = required<double>(obj, "one_way_efficiency", where);
  } else {
    reject_unknown(obj,
                   {"unit_power_kw", "capital_per_unit", "replacement_per_unit",
                    "om_fraction", "lifespan_years", "n_min", "n_max"},
                   where);
    spec.unit_power_kw = required<double>(obj, "unit_power_kw", where);
  }
  spec.capital_per_unit = required<double>(obj, "capital_per_unit", where);
  if (obj.contains("replacement_per_unit") && !obj["replacement_per_unit"].is_null()) {
    spec.replacement_per_unit = required<double>(obj, "replacement_per_unit", where);
  }
  spec.om_fraction = required<double>(obj, "om_fraction", where);
  spec.lifespan_years = required<int>(obj, "lifespan_years", where);
  optional_into(obj, "n_min", spec.n_min, where);
  spec.n_max = required<int>(obj, "n_max", where);
  spec.validate();
  return spec;
}

}  // namespace

Catalog catalog_from_json(const json& doc) {
  if (!doc.is_object()) throw InputError("catalog must be a JSON object");
  reject_unknown(doc, {"pv", "wt", "bess", "project"}, "catalog");
  for (const char* key : {"pv", "wt", "bess"}) {
    if (!doc.contains(key)) throw InputError(std::string("catalog lacks '") + key + "'");
  }
  Catalog catalog;
  catalog.pv = component_from_json(doc["pv"], ComponentKind::pv);
  catalog.wt = component_from_json(doc["wt"], ComponentKind::wt);
  catalog.bess = component_from_json(doc["bess"], ComponentKind::bess);
  return catalog;
}

void apply_params_json(const json& doc, ProjectParams& params) {
  const json& obj = doc.contains("project") ? doc["project"] : doc;
  if (!obj.is_object()) throw InputError("project parameters must be a JSON object");
  const std::string where = "project";
  reject_unknown(obj,
                 {"horizon_years", "discount_rate", "reserve_factor",
                  "max_unserved_fraction", "max_unmet_reserve_fraction", "step_hours",
                  "pv_derate", "initial_soc", "cyclic_soc"},
                 where);
  optional_into(obj, "horizon_years", params.horizon_years, where);
  optional_into(obj, "discount_rate", params.discount_rate, where);
  optional_into(obj, "reserve_factor", params.reserve_factor, where);
  optional_into(obj, "max_unserved_fraction", params.max_unserved_fraction, where);
  optional_into(obj, "max_unmet_reserve_fraction", params.max_unmet_reserve_fraction,
                where);
  optional_into(obj, "step_hours", params.step_hours, where);
  optional_into(obj, "pv_derate", params.pv_derate, where);
  if (obj.contains("initial_soc")) {
    if (obj["initial_soc"].is_null()) {
      params.initial_soc.reset();
    } else {
      params.initial_soc = required<double>(obj, "initial_soc", where);
    }
  }
  optional_into(obj, "cyclic_soc", params.cyclic_soc, where);
  params.validate();
}

ProjectParams params_from_json(const json& doc) {
  ProjectParams params;
  apply_params_json(doc, params);
  return params;
}

json to_json(const ComponentSpec& spec) {
  json out;
  if (spec.kind == ComponentKind::bess) {
    out["unit_energy_kwh"] = spec.unit_energy_kwh;
  } else {
    out["unit_power_kw"] = spec.unit_power_kw;
  }
  out["capital_per_unit"] = spec.capital_per_unit;
  if (spec.replacement_per_unit) out["replacement_per_unit"] = *spec.replacement_per_unit;
  out["om_fraction"] = spec.om_fraction;
  out["lifespan_years"] = spec.lifespan_years;
  out["n_min"] = spec.n_min;
  out["n_max"] = spec.n_max;
  if (spec.kind == ComponentKind::bess) {
    out["soc_min"] = spec.soc_min;
    out["soc_max"] = spec.soc_max;
    out["full_charge_hours"] = spec.full_charge_hours;
    out["one_way_efficiency"] = spec.one_way_efficiency;
  }
  return out;
}

json to_json(const Catalog& catalog) {
  return {{"pv", to_json(catalog.pv)},
          {"wt", to_json(catalog.wt)},
          {"bess", to_json(catalog.bess)}};
}

json to_json(const ProjectParams& params) {
  json out = {{"horizon_years", params.horizon_years},
              {"discount_rate", params.discount_rate},
              {"reserve_factor", params.reserve_factor},
              {"max_unserved_fraction", params.max_unserved_fraction},
              {"max_unmet_reserve_fraction", params.max_unmet_reserve_fraction},
              {"step_hours", params.step_hours},
              {"pv_derate", params.pv_derate},
              {"cyclic_soc", params.cyclic_soc}};
  out["initial_soc"] = params.initial_soc ? json(*params.initial_soc) : json(nullptr);
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace mgplan
