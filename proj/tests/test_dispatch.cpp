#include <gtest/gtest.h>

#include <fstream>
#include <numeric>
#include <random>

#include "mgplan/dispatch.hpp"
#include "test_support.hpp"

using namespace mgplan;
using mgplan::test::Instance;
using mgplan::test::random_instance;

namespace {

// 10 kWh battery, SoC in [0.4, 1], 5 h charge time (2 kW), lossless;
// one 3 kW PV unit; load [1, 1, 5] with PV [0, 3, 0].
Instance toy() {
  Instance in;
  in.catalog = mgplan::test::table_catalog();
  in.catalog.pv.unit_power_kw = 3.0;
  in.catalog.bess.unit_energy_kwh = 10.0;
  in.catalog.bess.soc_min = 0.4;
  in.catalog.bess.soc_max = 1.0;
  in.catalog.bess.full_charge_hours = 5.0;
  in.catalog.bess.one_way_efficiency = 1.0;
  in.series = mgplan::test::series_from_load({1, 1, 5});
  in.availability = {{0, 1, 0}, {0, 0, 0}};
  in.sizing = {1, 0, 1};
  return in;
}

DispatchResult run(const Instance& in) {
  return simulate_greedy(in.sizing, in.series, in.availability, in.catalog, in.params);
}

double dp(const Instance& in, int levels) {
  return dp_oracle(in.sizing, in.series, in.availability, in.catalog, in.params, levels);
}

}  // namespace

TEST(Greedy, ToyTrace) {
  const auto r = run(toy());
  EXPECT_EQ(r.discharge, (std::vector<double>{1, 0, 2}));
  EXPECT_EQ(r.charge, (std::vector<double>{0, 1, 0}));
  EXPECT_EQ(r.stored_energy, (std::vector<double>{9, 10, 8}));
  EXPECT_EQ(r.curtailed, (std::vector<double>{0, 1, 0}));
  EXPECT_EQ(r.unserved, (std::vector<double>{0, 0, 3}));
  EXPECT_EQ(r.discharging, (std::vector<bool>{true, false, true}));
  EXPECT_DOUBLE_EQ(r.totals.unserved_energy, 3.0);
  EXPECT_DOUBLE_EQ(r.totals.initial_stored, 10.0);
}

TEST(Greedy, TotalsMatchTrace) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const Instance in = random_instance(rng, 1 + i % 48);
    const auto full = run(in);
    const auto totals = simulate_totals(in.sizing, in.series, in.availability, in.catalog, in.params);
    EXPECT_EQ(totals.unserved_energy, full.totals.unserved_energy);
    EXPECT_EQ(totals.served_energy, full.totals.served_energy);
    EXPECT_EQ(totals.unmet_reserve_energy, full.totals.unmet_reserve_energy);
    EXPECT_EQ(totals.final_stored, full.totals.final_stored);
  }
}

TEST(Greedy, ZeroLoadKeepsBatteryFull) {
  Instance in = toy();
  in.series.load_kw = {0, 0, 0};
  const auto r = run(in);
  EXPECT_EQ(r.totals.unserved_energy, 0.0);
  for (double e : r.stored_energy) EXPECT_EQ(e, 10.0);
}

TEST(Greedy, NoBatteryPassThrough) {
  Instance in = toy();
  in.sizing.n_bess = 0;
  in.availability.pv_per_kw = {1, 2, 2};  // 3, 6, 6 kW against 1, 1, 5
  const auto r = run(in);
  EXPECT_EQ(r.totals.unserved_energy, 0.0);
  EXPECT_DOUBLE_EQ(r.totals.curtailed_energy, 2 + 5 + 1);
}

TEST(Greedy, PvUsedBeforeWind) {
  Instance in = toy();
  in.sizing = {1, 1, 0};
  in.availability = {{1, 1, 1}, {2, 2, 2}};
  const auto r = run(in);
  EXPECT_EQ(r.pv_used, (std::vector<double>{1, 1, 3}));
  EXPECT_EQ(r.wt_used, (std::vector<double>{0, 0, 2}));
}

TEST(Greedy, RejectsBadInputs) {
  Instance in = toy();
  in.availability.pv_per_kw.pop_back();
  EXPECT_THROW(run(in), InputError);
  Instance nan = toy();
  nan.availability.wt_per_unit[1] = std::nan("");
  EXPECT_THROW(run(nan), InputError);
  Instance big = toy();
  big.sizing.n_bess = big.catalog.bess.n_max + 1;
  EXPECT_THROW(run(big), InputError);
}

TEST(Greedy, InvariantsOnRandomInstances) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 300; ++i) {
    const Instance in = random_instance(rng, 1 + i % 48);
    const auto r = run(in);
    const Ratings rate = ratings(in.sizing, in.catalog);
    const auto& b = in.catalog.bess;
    const double eta = b.one_way_efficiency;
    const double e_min = b.soc_min * rate.bess_kwh;
    const double e_max = b.soc_max * rate.bess_kwh;
    double prev = r.totals.initial_stored;
    double flow = 0.0;
    for (std::size_t t = 0; t < r.size(); ++t) {
      const double load = in.series.load_kw[t];
      ASSERT_EQ(r.charge[t] * r.discharge[t], 0.0);
      ASSERT_GE(r.pv_used[t], 0.0);
      ASSERT_LE(r.pv_used[t], rate.pv_kw * in.availability.pv_per_kw[t] + 1e-12);
      ASSERT_GE(r.wt_used[t], 0.0);
      ASSERT_LE(r.wt_used[t], in.sizing.n_wt * in.availability.wt_per_unit[t] + 1e-12);
      ASSERT_GE(r.charge[t], 0.0);
      ASSERT_GE(r.discharge[t], 0.0);
      ASSERT_LE(r.charge[t], rate.bess_kw + 1e-12);
      ASSERT_LE(r.discharge[t], rate.bess_kw + 1e-12);
      ASSERT_NEAR(r.stored_energy[t], prev + eta * r.charge[t] - r.discharge[t] / eta, 1e-9);
      ASSERT_GE(r.stored_energy[t], e_min - 1e-9);
      ASSERT_LE(r.stored_energy[t], e_max + 1e-9);
      ASSERT_NEAR(r.bess_power[t], r.discharge[t] - r.charge[t], 1e-15);
      ASSERT_NEAR(r.pv_used[t] + r.wt_used[t] + r.bess_power[t] + r.unserved[t], load, 1e-9);
      ASSERT_GE(r.unserved[t], 0.0);
      ASSERT_GE(r.unmet_reserve[t], 0.0);
      flow += eta * r.charge[t] - r.discharge[t] / eta;
      prev = r.stored_energy[t];
    }
    const auto& tot = r.totals;
    EXPECT_NEAR(tot.served_energy + tot.unserved_energy, tot.load_energy, 1e-9);
    EXPECT_NEAR(tot.pv_energy + tot.wt_energy + tot.discharge_energy - tot.charge_energy,
                tot.served_energy, 1e-9);
    EXPECT_NEAR(tot.final_stored - tot.initial_stored, flow, 1e-9);
    EXPECT_EQ(r.unmet_reserve,
              unmet_reserve_profile(in.sizing, in.series, in.availability, in.catalog, in.params));
  }
}

TEST(UnmetReserve, Examples) {
  Instance in = toy();
  in.params.reserve_factor = 0.15;
  in.series.load_kw = {1, 1, 0};
  in.availability = {{0, 0, 0}, {0, 0, 0}};
  // 5 kWh / 5 h = 1 kW of battery power credited
  in.catalog.bess.unit_energy_kwh = 5.0;
  const auto ur = unmet_reserve_profile(in.sizing, in.series, in.availability, in.catalog, in.params);
  EXPECT_NEAR(ur[0], 0.15, 1e-12);
  EXPECT_EQ(ur[2], 0.0);
  in.availability.pv_per_kw = {1, 1, 1};
  const auto covered = unmet_reserve_profile(in.sizing, in.series, in.availability, in.catalog, in.params);
  for (double v : covered) EXPECT_EQ(v, 0.0);
}

TEST(Feasibility, Thresholds) {
  ProjectParams p;
  DispatchTotals t;
  t.load_energy = 10000.0;
  EXPECT_TRUE(check_feasible(t, p).feasible);
  EXPECT_EQ(check_feasible(t, p).unserved_fraction, 0.0);

  p.max_unserved_fraction = 0.0005;
  t.unserved_energy = 6.0;
  EXPECT_FALSE(check_feasible(t, p).feasible);
  EXPECT_NEAR(check_feasible(t, p).unserved_fraction, 0.0006, 1e-15);
  EXPECT_LT(check_feasible(t, p).unserved_slack, 0.0);

  p.max_unserved_fraction = 0.5;
  t.load_energy = 10.0;
  t.unserved_energy = 5.0;
  EXPECT_TRUE(check_feasible(t, p).feasible);

  t.unserved_energy = 0.0;
  t.unmet_reserve_energy = 1.0;
  p.max_unmet_reserve_fraction = 0.05;
  EXPECT_FALSE(check_feasible(t, p).feasible);
  p.max_unmet_reserve_fraction = 0.1;
  EXPECT_TRUE(check_feasible(t, p).feasible);
}

TEST(Feasibility, CyclicTerminalCondition) {
  Instance in = toy();
  in.params.max_unserved_fraction = 1.0;
  in.params.max_unmet_reserve_fraction = 1.0;
  EXPECT_TRUE(check_feasible(run(in), in.series, in.params).feasible);
  in.params.cyclic_soc = true;
  const auto v = check_feasible(run(in), in.series, in.params);
  EXPECT_FALSE(v.terminal_ok);
  EXPECT_FALSE(v.feasible);
}

TEST(DpOracle, ToyAndZeroLoad) {
  EXPECT_NEAR(dp(toy(), 1001), 3.0, 1e-9);
  Instance zero = toy();
  zero.series.load_kw = {0, 0, 0};
  EXPECT_EQ(dp(zero, 11), 0.0);
  EXPECT_THROW(dp(toy(), 1), InputError);
  EXPECT_THROW(dp_oracle(toy().sizing, toy().series, toy().availability, toy().catalog,
                         toy().params, 1001, 100.0),
               ResourceLimitError);
}

TEST(DpOracle, ClosedFormLossless) {
  // Lossless battery, rating above any net flow, starting full: deficits
  // before the first surplus can only be covered by the usable window.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    Instance in = toy();
    in.catalog.bess.full_charge_hours = 0.5;
    in.catalog.bess.unit_energy_kwh = 2.0 + 8.0 * u(rng);
    const int steps = 2 + i % 10;
    std::vector<double> load(steps), pv(steps);
    double deficits = 0.0;
    for (int t = 0; t < steps; ++t) {
      if (t < steps / 2) {
        load[t] = 2.0 * u(rng);
        deficits += load[t];
      } else {
        pv[t] = u(rng);  // surplus after the deficits
      }
    }
    in.series = mgplan::test::series_from_load(load);
    in.availability = {pv, std::vector<double>(steps, 0.0)};
    const double window = 0.6 * in.catalog.bess.unit_energy_kwh;
    const double expected = std::max(0.0, deficits - window);
    const double spacing = window / 2000.0;
    EXPECT_NEAR(run(in).totals.unserved_energy, expected, 1e-9);
    const double d = dp(in, 2001);
    EXPECT_GE(d, expected - 1e-9);
    EXPECT_LE(d, expected + steps * spacing + 1e-9);
  }
}

TEST(DpOracle, GreedyIsOptimal) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 60; ++i) {
    const Instance in = random_instance(rng, 1 + i % 24);
    const int levels = 401;
    const double greedy = run(in).totals.unserved_energy;
    const double oracle = dp(in, levels);
    const double bound =
        in.series.size() * ratings(in.sizing, in.catalog).bess_kwh / (levels - 1);
    EXPECT_LE(greedy, oracle + 1e-9) << i;
    EXPECT_LE(oracle - greedy, bound + 1e-9) << i;
  }
}

TEST(Greedy, StoredEnergyDominatesEqualServicePolicies) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int compared_steps = 0;
  for (int i = 0; i < 200; ++i) {
    const Instance in = random_instance(rng, 48);
    const auto g = run(in);
    const Ratings rate = ratings(in.sizing, in.catalog);
    const auto& b = in.catalog.bess;
    const double eta = b.one_way_efficiency;
    const double e_min = b.soc_min * rate.bess_kwh;
    const double e_max = b.soc_max * rate.bess_kwh;
    double e = g.totals.initial_stored;
    for (std::size_t t = 0; t < g.size(); ++t) {
      const double ren = rate.pv_kw * in.availability.pv_per_kw[t] +
                         in.sizing.n_wt * in.availability.wt_per_unit[t];
      const double net = in.series.load_kw[t] - ren;
      if (net <= 0.0) {
        // any admissible charge, full load served
        const double cap = std::min({-net, rate.bess_kw, (e_max - e) / eta});
        e += eta * cap * u(rng);
      } else {
        // must discharge at least what greedy did to serve as much
        const double cap = std::min({net, rate.bess_kw, (e - e_min) * eta});
        if (cap < g.discharge[t]) break;  // cannot match greedy's service
        e -= (g.discharge[t] + (cap - g.discharge[t]) * u(rng)) / eta;
      }
      ASSERT_LE(e, g.stored_energy[t] + 1e-9) << "instance " << i << " step " << t;
      ++compared_steps;
    }
  }
  EXPECT_GT(compared_steps, 1000);
}

TEST(Feasibility, MonotoneInEachCount) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> bump(0, 3);
  int feasible_pairs = 0;
  for (int i = 0; i < 2000; ++i) {
    Instance in = random_instance(rng, 48);
    const auto small = simulate_totals(in.sizing, in.series, in.availability, in.catalog, in.params);
    Sizing big = in.sizing;
    big.n_pv = std::min(in.catalog.pv.n_max, big.n_pv + bump(rng));
    big.n_wt = std::min(in.catalog.wt.n_max, big.n_wt + bump(rng));
    big.n_bess = std::min(in.catalog.bess.n_max, big.n_bess + bump(rng));
    const auto large = simulate_totals(big, in.series, in.availability, in.catalog, in.params);
    EXPECT_LE(large.unserved_energy, small.unserved_energy + 1e-9);
    EXPECT_LE(large.unmet_reserve_energy, small.unmet_reserve_energy + 1e-12);
    if (check_feasible(small, in.params).feasible) {
      ++feasible_pairs;
      EXPECT_TRUE(check_feasible(large, in.params).feasible) << i;
    }
  }
  EXPECT_GT(feasible_pairs, 100);
}

TEST(DispatchCsv, HeaderAndRows) {
  mgplan::test::TempDir dir;
  const Instance in = toy();
  write_dispatch_csv(run(in), in.series, dir.path() / "d.csv");
  std::ifstream f(dir.path() / "d.csv");
  std::string header, row;
  std::getline(f, header);
  EXPECT_EQ(header,
            "timestamp,pv_used_kw,wt_used_kw,charge_kw,discharge_kw,discharging,bess_power_kw,"
            "stored_energy_kwh,unserved_kw,unmet_reserve_kw,curtailed_kw");
  int rows = 0;
  while (std::getline(f, row)) ++rows;
  EXPECT_EQ(rows, 3);
}
