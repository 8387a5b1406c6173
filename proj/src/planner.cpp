#include "mgplan/planner.hpp"

#include <chrono>
#include <queue>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace mgplan {

using nlohmann::json;

namespace {

struct Node {
  double cost;
  Sizing sizing;

  // Min-heap order: cost, then (n_wt, n_bess, n_pv).
  friend bool operator>(const Node& a, const Node& b) {
    if (a.cost != b.cost) return a.cost > b.cost;
    return a.sizing.tie_key() > b.sizing.tie_key();
  }
  friend bool operator<(const Node& a, const Node& b) { return b > a; }
};

std::uint64_t encode(const Sizing& s) {
  return (static_cast<std::uint64_t>(s.n_pv) << 42) |
         (static_cast<std::uint64_t>(s.n_wt) << 21) | static_cast<std::uint64_t>(s.n_bess);
}

CountRange effective(const CountRange& range, const std::optional<int>& fixed,
                     const char* name) {
  if (range.min < 0 || range.min > range.max) {
    throw InputError(std::string("search range for ") + name + " must satisfy 0 <= min <= max");
  }
  if (!fixed) return range;
  if (*fixed < range.min || *fixed > range.max) {
    throw InputError(std::string("fixed ") + name + " count " + std::to_string(*fixed) +
                     " outside its range");
  }
  return {*fixed, *fixed};
}

void check_inside(const CountRange& range, const ComponentSpec& spec) {
  if (range.min < spec.n_min || range.max > spec.n_max) {
    throw InputError(std::string("search range for ") + std::string(to_string(spec.kind)) +
                     " exceeds catalog bounds");
  }
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json cost_json(const ComponentCost& c) {
  return {{"count", c.count},
          {"capital", c.unit.capital},
          {"replacement_npv", c.unit.replacement_npv},
          {"om_npv", c.unit.om_npv},
          {"salvage_npv", c.unit.salvage_npv},
          {"unit_npc", c.unit.unit_npc},
          {"n_replacements", c.unit.n_replacements},
          {"total", c.total}};
}

ComponentCost cost_from_json(const json& j) {
  ComponentCost c;
  c.count = j.at("count").get<int>();
  c.unit.capital = j.at("capital").get<double>();
  c.unit.replacement_npv = j.at("replacement_npv").get<double>();
  c.unit.om_npv = j.at("om_npv").get<double>();
  c.unit.salvage_npv = j.at("salvage_npv").get<double>();
  c.unit.unit_npc = j.at("unit_npc").get<double>();
  c.unit.n_replacements = j.at("n_replacements").get<int>();
  c.total = j.at("total").get<double>();
  return c;
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

}  // namespace

SearchSpace SearchSpace::from_catalog(const Catalog& catalog) {
  SearchSpace space;
  space.pv = {catalog.pv.n_min, catalog.pv.n_max};
  space.wt = {catalog.wt.n_min, catalog.wt.n_max};
  space.bess = {catalog.bess.n_min, catalog.bess.n_max};
  return space;
}

CountRange SearchSpace::effective_pv() const { return effective(pv, fixed_pv, "pv"); }
CountRange SearchSpace::effective_wt() const { return effective(wt, fixed_wt, "wt"); }
CountRange SearchSpace::effective_bess() const {
  return effective(bess, fixed_bess, "bess");
}

void SearchSpace::validate() const {
  effective_pv();
  effective_wt();
  effective_bess();
  if (pv.max >= (1 << 21) || wt.max >= (1 << 21) || bess.max >= (1 << 21)) {
    throw InputError("search range too large");
  }
}

double SearchSpace::volume() const {
  auto len = [](CountRange r) { return static_cast<double>(r.max - r.min + 1); };
  return len(effective_pv()) * len(effective_wt()) * len(effective_bess());
}

Planner::Planner(Catalog catalog, ScenarioSeries series, AvailabilitySeries availability,
                 ProjectParams params, PlanOptions options)
    : catalog_(std::move(catalog)),
      series_(std::move(series)),
      availability_(std::move(availability)),
      params_(std::move(params)),
      options_(options) {
  catalog_.validate();
  params_.validate();
  series_.validate();
  if (availability_.pv_per_kw.size() != series_.size() ||
      availability_.wt_per_unit.size() != series_.size()) {
    throw InputError("availability length does not match the scenario");
  }
  econ_ = catalog_economics(catalog_, params_);
  annual_scale_ = 8760.0 / (static_cast<double>(series_.size()) * params_.step_hours);
  if (options_.jobs < 1) options_.jobs = 1;
}

double Planner::cost(const Sizing& sizing) const {
  return total_npc(sizing.n_pv, sizing.n_wt, sizing.n_bess, econ_);
}

bool Planner::is_feasible(const Sizing& sizing) const {
  const auto totals = simulate_totals(sizing, series_, availability_, catalog_, params_);
  return check_feasible(totals, params_).feasible;
}

PlanSolution Planner::evaluate(const Sizing& sizing) const {
  check_bounds(sizing, catalog_);
  const Stopwatch watch;
  PlanSolution sol;
  sol.status = PlanStatus::evaluated;
  sol.sizing = sizing;
  sol.rating = ratings(sizing, catalog_);
  sol.dispatch = simulate_totals(sizing, series_, availability_, catalog_, params_);
  const auto verdict = check_feasible(sol.dispatch, params_);
  sol.feasible = verdict.feasible;
  sol.real_unserved_fraction = verdict.unserved_fraction;
  sol.real_unmet_reserve_fraction = verdict.unmet_reserve_fraction;
  sol.pv_cost = {sizing.n_pv, econ_.pv, sizing.n_pv * econ_.pv.unit_npc};
  sol.wt_cost = {sizing.n_wt, econ_.wt, sizing.n_wt * econ_.wt.unit_npc};
  sol.bess_cost = {sizing.n_bess, econ_.bess, sizing.n_bess * econ_.bess.unit_npc};
  sol.npc = cost(sizing);
  const double annual_served = sol.dispatch.served_energy * annual_scale_;
  if (annual_served > 0.0) {
    sol.lcoe = lcoe(sol.npc, annual_served, params_);
    sol.lcoe_annualized = lcoe_annualized(sol.npc, annual_served, params_);
  }
  sol.candidates_evaluated = 1;
  sol.wall_time_s = watch.seconds();
  return sol;
}

PlanSolution Planner::infeasible_result(const SearchSpace& space,
                                        std::size_t evaluated) const {
  const Sizing top{space.effective_pv().max, space.effective_wt().max,
                   space.effective_bess().max};
  PlanSolution sol = evaluate(top);
  sol.status = PlanStatus::infeasible;
  sol.candidates_evaluated = evaluated;
  return sol;
}

PlanSolution Planner::optimal(const SearchSpace& space) {
  const Stopwatch watch;
  space.validate();
  const CountRange pv = space.effective_pv();
  const CountRange wt = space.effective_wt();
  const CountRange bess = space.effective_bess();
  check_inside(pv, catalog_.pv);
  check_inside(wt, catalog_.wt);
  check_inside(bess, catalog_.bess);

  // Monotone feasibility: an infeasible upper corner certifies the whole box.
  const Sizing top{pv.max, wt.max, bess.max};
  std::size_t committed = 1;
  if (!is_feasible(top)) {
    PlanSolution sol = infeasible_result(space, committed);
    sol.wall_time_s = watch.seconds();
    return sol;
  }

  std::priority_queue<Node, std::vector<Node>, std::greater<>> frontier;
  std::unordered_set<std::uint64_t> seen;
  std::unordered_map<std::uint64_t, bool> verdicts;
  verdicts[encode(top)] = true;

  auto push = [&](const Sizing& s) {
    if (!seen.insert(encode(s)).second) return;
    if (seen.size() > options_.max_visited) {
      throw ResourceLimitError("best-first search exceeded " +
                               std::to_string(options_.max_visited) + " visited candidates");
    }
    frontier.push({cost(s), s});
  };
  push({pv.min, wt.min, bess.min});

  const auto jobs = static_cast<std::size_t>(options_.jobs);
  std::vector<Node> batch;
  std::vector<char> batch_feasible;
  while (!frontier.empty()) {
    batch.clear();
    while (!frontier.empty() && batch.size() < jobs) {
      batch.push_back(frontier.top());
      frontier.pop();
    }

    batch_feasible.assign(batch.size(), 0);
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto it = verdicts.find(encode(batch[i].sizing));
      if (it != verdicts.end()) {
        batch_feasible[i] = it->second;
      } else {
        todo.push_back(i);
      }
    }
    if (todo.size() <= 1) {
      for (auto i : todo) batch_feasible[i] = is_feasible(batch[i].sizing);
    } else {
      std::vector<std::jthread> workers;
      workers.reserve(todo.size());
      for (auto i : todo) {
        workers.emplace_back(
            [&, i] { batch_feasible[i] = is_feasible(batch[i].sizing); });
      }
    }
    for (auto i : todo) verdicts[encode(batch[i].sizing)] = batch_feasible[i];

    // Commit in key order; neighbours pushed along the way may undercut the
    // rest of the batch, which then goes back on the frontier.
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (!frontier.empty() && frontier.top() < batch[i]) {
        for (std::size_t k = i; k < batch.size(); ++k) frontier.push(batch[k]);
        break;
      }
      ++committed;
      const Sizing& s = batch[i].sizing;
      if (batch_feasible[i]) {
        PlanSolution sol = evaluate(s);
        sol.status = PlanStatus::optimal;
        sol.candidates_evaluated = committed;
        sol.wall_time_s = watch.seconds();
        return sol;
      }
      if (s.n_pv < pv.max) push({s.n_pv + 1, s.n_wt, s.n_bess});
      if (s.n_wt < wt.max) push({s.n_pv, s.n_wt + 1, s.n_bess});
      if (s.n_bess < bess.max) push({s.n_pv, s.n_wt, s.n_bess + 1});
    }
  }
  // Unreachable while feasibility is monotone: the top corner is feasible.
  PlanSolution sol = infeasible_result(space, committed);
  sol.wall_time_s = watch.seconds();
  return sol;
}

PlanSolution Planner::brute_force(const SearchSpace& space) {
  const Stopwatch watch;
  space.validate();
  const CountRange pv = space.effective_pv();
  const CountRange wt = space.effective_wt();
  const CountRange bess = space.effective_bess();
  check_inside(pv, catalog_.pv);
  check_inside(wt, catalog_.wt);
  check_inside(bess, catalog_.bess);
  if (space.volume() > options_.brute_force_limit) {
    throw ResourceLimitError("brute-force lattice volume exceeds the configured limit");
  }

  std::optional<Node> best;
  std::size_t evaluated = 0;
  for (int w = wt.min; w <= wt.max; ++w) {
    for (int b = bess.min; b <= bess.max; ++b) {
      for (int p = pv.min; p <= pv.max; ++p) {
        const Sizing s{p, w, b};
        ++evaluated;
        if (!is_feasible(s)) continue;
        const Node node{cost(s), s};
        if (!best || node < *best) best = node;
      }
    }
  }
  if (!best) {
    PlanSolution sol = infeasible_result(space, evaluated);
    sol.wall_time_s = watch.seconds();
    return sol;
  }
  PlanSolution sol = evaluate(best->sizing);
  sol.status = PlanStatus::optimal;
  sol.candidates_evaluated = evaluated;
  sol.wall_time_s = watch.seconds();
  return sol;
}

PlanSolution Planner::autonomy(int n_bess, const SearchSpace& space) {
  SearchSpace pinned = space;
  pinned.fixed_bess = n_bess;
  PlanSolution sol = optimal(pinned);
  const double days = static_cast<double>(series_.size()) * params_.step_hours / 24.0;
  double load_energy = 0.0;
  for (double p : series_.load_kw) load_energy += p * params_.step_hours;
  const double daily_load = load_energy / days;
  if (daily_load > 0.0) sol.autonomy_hours = autonomy_hours(catalog_.bess, n_bess, daily_load);
  return sol;
}

PlanSolution plan_optimal(const Catalog& catalog, const ScenarioSeries& series,
                          const AvailabilitySeries& availability, const SearchSpace& space,
                          const ProjectParams& params, PlanOptions options) {
  return Planner(catalog, series, availability, params, options).optimal(space);
}

PlanSolution brute_force_plan(const Catalog& catalog, const ScenarioSeries& series,
                              const AvailabilitySeries& availability,
                              const SearchSpace& space, const ProjectParams& params,
                              PlanOptions options) {
  return Planner(catalog, series, availability, params, options).brute_force(space);
}

PlanSolution plan_autonomy(const Catalog& catalog, const ScenarioSeries& series,
                           const AvailabilitySeries& availability, int n_bess_fixed,
                           const SearchSpace& space, const ProjectParams& params,
                           PlanOptions options) {
  return Planner(catalog, series, availability, params, options).autonomy(n_bess_fixed, space);
}

PlanSolution evaluate(const Sizing& sizing, const Catalog& catalog,
                      const ScenarioSeries& series, const AvailabilitySeries& availability,
                      const ProjectParams& params) {
  return Planner(catalog, series, availability, params).evaluate(sizing);
}

double autonomy_hours(const ComponentSpec& bess, int n_bess, double daily_load_kwh) {
  if (!(daily_load_kwh > 0.0)) throw InputError("autonomy hours need a positive daily load");
  const double e_rated = n_bess * bess.unit_energy_kwh;
  return 24.0 * (bess.soc_max - bess.soc_min) * e_rated / daily_load_kwh;
}

std::string_view to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::optimal:
      return "optimal";
    case PlanStatus::infeasible:
      return "infeasible";
    case PlanStatus::evaluated:
      return "evaluated";
  }
  return "?";
}

json to_json(const PlanSolution& s, bool include_wall_time) {
  json out;
  out["status"] = to_string(s.status);
  out["feasible"] = s.feasible;
  out["sizing"] = {{"n_pv", s.sizing.n_pv}, {"n_wt", s.sizing.n_wt}, {"n_bess", s.sizing.n_bess}};
  out["ratings"] = {{"pv_kw", s.rating.pv_kw},
                    {"wt_kw", s.rating.wt_kw},
                    {"bess_kwh", s.rating.bess_kwh},
                    {"bess_kw", s.rating.bess_kw}};
  out["npc"] = s.npc;
  out["lcoe"] = s.lcoe ? json(*s.lcoe) : json(nullptr);
  out["lcoe_annualized"] = s.lcoe_annualized ? json(*s.lcoe_annualized) : json(nullptr);
  out["components"] = {{"pv", cost_json(s.pv_cost)},
                       {"wt", cost_json(s.wt_cost)},
                       {"bess", cost_json(s.bess_cost)}};
  out["real_unserved_fraction"] = s.real_unserved_fraction;
  out["real_unmet_reserve_fraction"] = s.real_unmet_reserve_fraction;
  const DispatchTotals& d = s.dispatch;
  out["dispatch"] = {{"load_energy_kwh", d.load_energy},
                     {"served_energy_kwh", d.served_energy},
                     {"unserved_energy_kwh", d.unserved_energy},
                     {"unmet_reserve_energy_kwh", d.unmet_reserve_energy},
                     {"curtailed_energy_kwh", d.curtailed_energy},
                     {"pv_energy_kwh", d.pv_energy},
                     {"wt_energy_kwh", d.wt_energy},
                     {"charge_energy_kwh", d.charge_energy},
                     {"discharge_energy_kwh", d.discharge_energy},
                     {"initial_stored_kwh", d.initial_stored},
                     {"final_stored_kwh", d.final_stored}};
  out["autonomy_hours"] = s.autonomy_hours ? json(*s.autonomy_hours) : json(nullptr);
  out["candidates_evaluated"] = s.candidates_evaluated;
  if (include_wall_time) out["wall_time_s"] = s.wall_time_s;
  return out;
}

PlanSolution solution_from_json(const json& doc) {
  try {
    PlanSolution s;
    const std::string status = doc.at("status").get<std::string>();
    if (status == "optimal") {
      s.status = PlanStatus::optimal;
    } else if (status == "infeasible") {
      s.status = PlanStatus::infeasible;
    } else if (status == "evaluated") {
      s.status = PlanStatus::evaluated;
    } else {
      throw InputError("unknown solution status '" + status + "'");
    }
    s.feasible = doc.at("feasible").get<bool>();
    const auto& sz = doc.at("sizing");
    s.sizing = {sz.at("n_pv").get<int>(), sz.at("n_wt").get<int>(), sz.at("n_bess").get<int>()};
    const auto& r = doc.at("ratings");
    s.rating = {r.at("pv_kw").get<double>(), r.at("wt_kw").get<double>(),
                r.at("bess_kwh").get<double>(), r.at("bess_kw").get<double>()};
    s.npc = doc.at("npc").get<double>();
    s.lcoe = optional_number(doc, "lcoe");
    s.lcoe_annualized = optional_number(doc, "lcoe_annualized");
    const auto& c = doc.at("components");
    s.pv_cost = cost_from_json(c.at("pv"));
    s.wt_cost = cost_from_json(c.at("wt"));
    s.bess_cost = cost_from_json(c.at("bess"));
    s.real_unserved_fraction = doc.at("real_unserved_fraction").get<double>();
    s.real_unmet_reserve_fraction = doc.at("real_unmet_reserve_fraction").get<double>();
    const auto& d = doc.at("dispatch");
    s.dispatch.load_energy = d.at("load_energy_kwh").get<double>();
    s.dispatch.served_energy = d.at("served_energy_kwh").get<double>();
    s.dispatch.unserved_energy = d.at("unserved_energy_kwh").get<double>();
    s.dispatch.unmet_reserve_energy = d.at("unmet_reserve_energy_kwh").get<double>();
    s.dispatch.curtailed_energy = d.at("curtailed_energy_kwh").get<double>();
    s.dispatch.pv_energy = d.at("pv_energy_kwh").get<double>();
    s.dispatch.wt_energy = d.at("wt_energy_kwh").get<double>();
    s.dispatch.charge_energy = d.at("charge_energy_kwh").get<double>();
    s.dispatch.discharge_energy = d.at("discharge_energy_kwh").get<double>();
    s.dispatch.initial_stored = d.at("initial_stored_kwh").get<double>();
    s.dispatch.final_stored = d.at("final_stored_kwh").get<double>();
    s.autonomy_hours = optional_number(doc, "autonomy_hours");
    s.candidates_evaluated = doc.at("candidates_evaluated").get<std::size_t>();
    s.wall_time_s = doc.value("wall_time_s", 0.0);
    return s;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed solution JSON: ") + e.what());
  }
}

}  // namespace mgplan
