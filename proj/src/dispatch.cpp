#include "mgplan/dispatch.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

namespace mgplan {

namespace {

struct BatteryLimits {
  double e_min = 0.0;
  double e_max = 0.0;
  double e_init = 0.0;
  double power = 0.0;
  double eta = 1.0;
};

BatteryLimits battery_limits(const Sizing& sizing, const Catalog& catalog,
                             const ProjectParams& params) {
  const ComponentSpec& bess = catalog.bess;
  const double e_rate = sizing.n_bess * bess.unit_energy_kwh;
  const double init = params.initial_soc.value_or(bess.soc_max);
  if (init < bess.soc_min || init > bess.soc_max) {
    throw InputError("initial_soc must lie inside [soc_min, soc_max]");
  }
  return {bess.soc_min * e_rate, bess.soc_max * e_rate, init * e_rate,
          sizing.n_bess * bess.unit_bess_power_kw(), bess.one_way_efficiency};
}

void check_inputs(const ScenarioSeries& series, const AvailabilitySeries& availability) {
  const std::size_t n = series.load_kw.size();
  if (availability.pv_per_kw.size() != n || availability.wt_per_unit.size() != n) {
    throw InputError("availability length does not match the scenario");
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (!std::isfinite(series.load_kw[t]) || !std::isfinite(availability.pv_per_kw[t]) ||
        !std::isfinite(availability.wt_per_unit[t])) {
      throw InputError("non-finite input at step " + std::to_string(t));
    }
  }
}

struct NoTrace {
  void reserve(std::size_t) {}
  void step(double, double, double, double, double, double, double) {}
};

struct FullTrace {
  DispatchResult* out;
  void reserve(std::size_t n) {
    out->pv_used.reserve(n);
    out->wt_used.reserve(n);
    out->charge.reserve(n);
    out->discharge.reserve(n);
    out->discharging.reserve(n);
    out->bess_power.reserve(n);
    out->stored_energy.reserve(n);
    out->unserved.reserve(n);
    out->curtailed.reserve(n);
  }
  void step(double pv, double wt, double ch, double dch, double stored, double unserved,
            double curtailed) {
    out->pv_used.push_back(pv);
    out->wt_used.push_back(wt);
    out->charge.push_back(ch);
    out->discharge.push_back(dch);
    out->discharging.push_back(dch > 0.0);
    out->bess_power.push_back(dch - ch);
    out->stored_energy.push_back(stored);
    out->unserved.push_back(unserved);
    out->curtailed.push_back(curtailed);
  }
};

template <typename Trace>
DispatchTotals run_greedy(const Sizing& sizing, const ScenarioSeries& series,
                          const AvailabilitySeries& availability, const Catalog& catalog,
                          const ProjectParams& params, Trace& trace) {
  check_inputs(series, availability);
  check_bounds(sizing, catalog);
  const BatteryLimits bat = battery_limits(sizing, catalog, params);
  const double dt = params.step_hours;
  const double pv_kw = sizing.n_pv * catalog.pv.unit_power_kw;
  const double n_wt = sizing.n_wt;

  DispatchTotals totals;
  totals.initial_stored = bat.e_init;
  double stored = bat.e_init;
  const std::size_t n = series.load_kw.size();
  trace.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double load = series.load_kw[t];
    const double pv_avail = pv_kw * availability.pv_per_kw[t];
    const double wt_avail = n_wt * availability.wt_per_unit[t];
    const double renewable = pv_avail + wt_avail;

    double ch = 0.0, dch = 0.0, unserved = 0.0, curtailed = 0.0;
    double pv_used = pv_avail, wt_used = wt_avail;
    if (renewable >= load) {
      const double surplus = renewable - load;
      const double headroom = std::max(0.0, (bat.e_max - stored) / (bat.eta * dt));
      ch = std::min({surplus, bat.power, headroom});
      stored += bat.eta * ch * dt;
      curtailed = surplus - ch;
      // PV is taken first; wind is curtailed first.
      pv_used = std::min(pv_avail, load + ch);
      wt_used = std::min(wt_avail, load + ch - pv_used);
    } else {
      const double deficit = load - renewable;
      const double available = std::max(0.0, (stored - bat.e_min) * bat.eta / dt);
      dch = std::min({deficit, bat.power, available});
      stored -= dch / bat.eta * dt;
      unserved = deficit - dch;
    }
    trace.step(pv_used, wt_used, ch, dch, stored, unserved, curtailed);

    totals.load_energy += load * dt;
    totals.served_energy += (load - unserved) * dt;
    totals.unserved_energy += unserved * dt;
    totals.curtailed_energy += curtailed * dt;
    totals.pv_energy += pv_used * dt;
    totals.wt_energy += wt_used * dt;
    totals.charge_energy += ch * dt;
    totals.discharge_energy += dch * dt;
  }
  totals.final_stored = stored;

  const auto reserve = unmet_reserve_profile(sizing, series, availability, catalog, params);
  for (double r : reserve) totals.unmet_reserve_energy += r * dt;
  if constexpr (std::is_same_v<Trace, FullTrace>) trace.out->unmet_reserve = reserve;
  return totals;
}

std::string num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

Ratings ratings(const Sizing& sizing, const Catalog& catalog) {
  const double e = sizing.n_bess * catalog.bess.unit_energy_kwh;
  return {sizing.n_pv * catalog.pv.unit_power_kw, sizing.n_wt * catalog.wt.unit_power_kw, e,
          e / catalog.bess.full_charge_hours};
}

void check_bounds(const Sizing& sizing, const Catalog& catalog) {
  auto check = [](int n, const ComponentSpec& spec) {
    if (n < spec.n_min || n > spec.n_max) {
      throw InputError(std::string(to_string(spec.kind)) + " count " + std::to_string(n) +
                       " outside [" + std::to_string(spec.n_min) + ", " +
                       std::to_string(spec.n_max) + "]");
    }
  };
  check(sizing.n_pv, catalog.pv);
  check(sizing.n_wt, catalog.wt);
  check(sizing.n_bess, catalog.bess);
}

DispatchResult simulate_greedy(const Sizing& sizing, const ScenarioSeries& series,
                               const AvailabilitySeries& availability,
                               const Catalog& catalog, const ProjectParams& params) {
  DispatchResult result;
  FullTrace trace{&result};
  result.totals = run_greedy(sizing, series, availability, catalog, params, trace);
  return result;
}

DispatchTotals simulate_totals(const Sizing& sizing, const ScenarioSeries& series,
                               const AvailabilitySeries& availability,
                               const Catalog& catalog, const ProjectParams& params) {
  NoTrace trace;
  return run_greedy(sizing, series, availability, catalog, params, trace);
}

std::vector<double> unmet_reserve_profile(const Sizing& sizing, const ScenarioSeries& series,
                                          const AvailabilitySeries& availability,
                                          const Catalog& catalog,
                                          const ProjectParams& params) {
  check_inputs(series, availability);
  const Ratings r = ratings(sizing, catalog);
  std::vector<double> out(series.load_kw.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    const double required = (1.0 + params.reserve_factor) * series.load_kw[t];
    const double credited = r.pv_kw * availability.pv_per_kw[t] +
                            sizing.n_wt * availability.wt_per_unit[t] + r.bess_kw;
    out[t] = std::max(0.0, required - credited);
  }
  return out;
}

FeasibilityVerdict check_feasible(const DispatchTotals& totals, const ProjectParams& params) {
  FeasibilityVerdict v;
  const double load = totals.load_energy;
  v.unserved_fraction = load > 0.0 ? totals.unserved_energy / load : 0.0;
  v.unmet_reserve_fraction = load > 0.0 ? totals.unmet_reserve_energy / load : 0.0;
  v.unserved_slack = params.max_unserved_fraction * load - totals.unserved_energy;
  v.unmet_reserve_slack = params.max_unmet_reserve_fraction * load - totals.unmet_reserve_energy;
  if (params.cyclic_soc) {
    v.terminal_ok = totals.final_stored >=
                    totals.initial_stored - 1e-9 * std::max(1.0, totals.initial_stored);
  }
  v.feasible = totals.unserved_energy <= params.max_unserved_fraction * load &&
               totals.unmet_reserve_energy <= params.max_unmet_reserve_fraction * load &&
               v.terminal_ok;
  return v;
}

FeasibilityVerdict check_feasible(const DispatchResult& result, const ScenarioSeries& series,
                                  const ProjectParams& params) {
  if (result.size() != series.size() || result.unmet_reserve.size() != series.size()) {
    throw InputError("dispatch result length does not match the scenario");
  }
  return check_feasible(result.totals, params);
}

double dp_oracle(const Sizing& sizing, const ScenarioSeries& series,
                 const AvailabilitySeries& availability, const Catalog& catalog,
                 const ProjectParams& params, int soc_levels, double max_work) {
  check_inputs(series, availability);
  check_bounds(sizing, catalog);
  if (soc_levels < 2) throw InputError("dp_oracle needs soc_levels >= 2");
  const BatteryLimits bat = battery_limits(sizing, catalog, params);
  const double dt = params.step_hours;
  const double pv_kw = sizing.n_pv * catalog.pv.unit_power_kw;
  // Lattice: multiples of e_rate / (soc_levels - 1) inside [e_min, e_max].
  constexpr double kSlack = 1e-9;
  const double e_rate = sizing.n_bess * catalog.bess.unit_energy_kwh;
  const double delta = e_rate > 0.0 ? e_rate / (soc_levels - 1) : 0.0;
  int lo = 0;
  int levels = 1;
  if (delta > 0.0) {
    lo = static_cast<int>(std::ceil(bat.e_min / delta - kSlack));
    const int hi = static_cast<int>(std::floor(bat.e_max / delta + kSlack));
    levels = std::max(1, hi - lo + 1);
  }
  // Largest level jumps the power rating allows in one step.
  const int up = levels > 1 ? static_cast<int>(std::floor(
                                  bat.power * bat.eta * dt / delta + kSlack))
                            : 0;
  const int down = levels > 1 ? static_cast<int>(std::floor(
                                    bat.power * dt / (bat.eta * delta) + kSlack))
                              : 0;
  const int span = std::min(up, levels - 1) + std::min(down, levels - 1) + 1;
  const double work = static_cast<double>(series.size()) * levels * span;
  if (work > max_work) {
    throw ResourceLimitError("dp_oracle instance too large (" + num(work) +
                             " transitions)");
  }
  const int kc = std::min(up, levels - 1);
  const int kd = std::min(down, levels - 1);

  // Start on the highest level not above the initial energy.
  int start = 0;
  if (levels > 1) {
    start = static_cast<int>(std::floor(bat.e_init / delta + kSlack)) - lo;
    start = std::clamp(start, 0, levels - 1);
  }

  constexpr double kUnreachable = 1e300;
  std::vector<double> cost(levels, kUnreachable), next(levels);
  cost[start] = 0.0;
  // kernel[m] is the step cost of moving by k = kc - m levels.
  std::vector<double> kernel(kc + kd + 1);

  for (std::size_t t = 0; t < series.size(); ++t) {
    const double net = series.load_kw[t] - pv_kw * availability.pv_per_kw[t] -
                       sizing.n_wt * availability.wt_per_unit[t];
    for (int m = 0; m <= kc + kd; ++m) {
      const int k = kc - m;
      double battery_out = 0.0;  // kW delivered (+) or absorbed (-) by the battery
      if (k > 0) battery_out = -(k * delta) / (bat.eta * dt);
      if (k < 0) battery_out = (-k * delta) * bat.eta / dt;
      kernel[m] = std::max(0.0, net - battery_out) * dt;
    }
    for (int j = 0; j < levels; ++j) {
      // source level i = j - k, k in [-kd, kc]
      const int i_lo = std::max(0, j - kc);
      const int i_hi = std::min(levels - 1, j + kd);
      const double* src = cost.data();
      const double* ker = kernel.data() + (i_lo - (j - kc));
      double best = kUnreachable;
#pragma omp simd reduction(min : best)
      for (int i = i_lo; i <= i_hi; ++i) {
        best = std::min(best, src[i] + ker[i - i_lo]);
      }
      next[j] = best;
    }
    cost.swap(next);
  }

  double best = kUnreachable;
  for (int j = 0; j < levels; ++j) {
    if (params.cyclic_soc && j < start) continue;
    best = std::min(best, cost[j]);
  }
  return best;
}

void write_dispatch_csv(const DispatchResult& result, const ScenarioSeries& series,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << "timestamp,pv_used_kw,wt_used_kw,charge_kw,discharge_kw,discharging,"
         "bess_power_kw,stored_energy_kwh,unserved_kw,unmet_reserve_kw,curtailed_kw\n";
  for (std::size_t t = 0; t < result.size(); ++t) {
    out << format_timestamp(series.time, t) << ',' << num(result.pv_used[t]) << ','
        << num(result.wt_used[t]) << ',' << num(result.charge[t]) << ','
        << num(result.discharge[t]) << ',' << (result.discharging[t] ? 1 : 0) << ','
        << num(result.bess_power[t]) << ',' << num(result.stored_energy[t]) << ','
        << num(result.unserved[t]) << ',' << num(result.unmet_reserve[t]) << ','
        << num(result.curtailed[t]) << '\n';
  }
}

}  // namespace mgplan
