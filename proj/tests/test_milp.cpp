#include <gtest/gtest.h>

#include <random>

#include "mgplan/milp.hpp"
#include "mgplan/planner.hpp"
#include "test_support.hpp"

using namespace mgplan;
using namespace mgplan::milp;
using mgplan::test::Instance;
using mgplan::test::random_instance;
using mgplan::test::series_from_load;
using mgplan::test::table_catalog;

namespace {

LinearModel model_for(const Instance& in) {
  return build_model(in.catalog, in.series, in.availability, SearchSpace::from_catalog(in.catalog),
                     in.params);
}

const RowResidual* row(const ResidualReport& r, std::string_view name) {
  for (const auto& x : r.rows) {
    if (x.name == name) return &x;
  }
  return nullptr;
}

LinearModel two_var_toy() {
  LinearModel m;
  const auto x = m.add_variable("x", VarKind::integer, 0, 10);
  const auto y = m.add_variable("y", VarKind::continuous, 0, std::numeric_limits<double>::infinity());
  m.set_objective({{x, 3.0}, {y, 1.5}});
  m.add_constraint("c1", {{x, 1.0}, {y, 1.0}}, Sense::ge, 2.0);
  m.add_constraint("c2", {{x, 1.0}, {y, -2.0}}, Sense::le, 4.5);
  return m;
}

}  // namespace

TEST(Model, SingleStepCounts) {
  std::mt19937_64 rng(1);
  Instance in = random_instance(rng, 1);
  const auto m = model_for(in);
  // 11 per-step rows + soc_init, unserved_cap, reserve_cap.
  EXPECT_EQ(m.constraints().size(), kRowsPerStep + 3);
  EXPECT_EQ(m.count(VarKind::integer), 3u);
  EXPECT_EQ(m.count(VarKind::continuous), 1u + 7u);
  EXPECT_EQ(m.count(VarKind::binary), 1u);
  in.params.cyclic_soc = true;
  EXPECT_EQ(model_for(in).constraints().size(), kRowsPerStep + 4);
}

TEST(Model, ClassBreakdownScalesWithSteps) {
  std::mt19937_64 rng(2);
  for (int steps : {2, 7, 48}) {
    const auto m = model_for(random_instance(rng, steps));
    EXPECT_EQ(m.count(VarKind::integer), 3u);
    EXPECT_EQ(m.count(VarKind::continuous), 1u + 7u * steps);
    EXPECT_EQ(m.count(VarKind::binary), static_cast<std::size_t>(steps));
    EXPECT_EQ(m.constraints().size(), kRowsPerStep * steps + 3);
    EXPECT_NO_THROW(m.validate());
  }
}

TEST(Model, ObjectiveIsUnitNpcPerCount) {
  const Catalog c = table_catalog();
  Instance in;
  in.catalog = c;
  in.series = series_from_load({1.0, 2.0});
  in.availability.pv_per_kw = {0.5, 0.0};
  in.availability.wt_per_unit = {0.1, 0.2};
  const auto m = model_for(in);
  const auto econ = catalog_economics(c, in.params);
  ASSERT_EQ(m.objective().size(), 3u);
  EXPECT_EQ(m.objective()[0].coef, econ.pv.unit_npc);
  EXPECT_EQ(m.objective()[1].coef, econ.wt.unit_npc);
  EXPECT_EQ(m.objective()[2].coef, econ.bess.unit_npc);
  EXPECT_EQ(m.variables()[m.index("n_bess")].upper, 10.0);
  EXPECT_EQ(m.variables()[m.index("udch_2")].kind, VarKind::binary);
  EXPECT_THROW(m.index("udch_3"), InputError);
}

TEST(Model, RowLimit) {
  std::mt19937_64 rng(3);
  const Instance in = random_instance(rng, 10);
  EXPECT_THROW(build_model(in.catalog, in.series, in.availability,
                           SearchSpace::from_catalog(in.catalog), in.params, {.max_rows = 50}),
               ResourceLimitError);
}

TEST(Model, RejectsDuplicatesAndNonFinite) {
  LinearModel m;
  m.add_variable("x", VarKind::continuous, 0, 1);
  EXPECT_THROW(m.add_variable("x", VarKind::integer, 0, 1), InputError);
  EXPECT_THROW(m.add_constraint("r", {{0, std::nan("")}}, Sense::le, 1.0), InputError);
  EXPECT_THROW(m.add_constraint("r", {{0, 1.0}}, Sense::le, std::numeric_limits<double>::infinity()),
               InputError);
  m.add_constraint("z", {{0, 0.0}}, Sense::le, 1.0);
  EXPECT_TRUE(m.constraints().back().terms.empty());
}

TEST(LpFormat, TwoVariableToy) {
  const std::string want =
      "\\ islanded microgrid sizing model\n"
      "\\ variables: 1 integer, 1 continuous, 0 binary; rows: 2\n"
      "Minimize\n"
      " obj: 3 x + 1.5 y\n"
      "Subject To\n"
      " c1: 1 x + 1 y >= 2\n"
      " c2: 1 x - 2 y <= 4.5\n"
      "Bounds\n"
      " 0 <= x <= 10\n"
      " y >= 0\n"
      "Generals\n"
      " x\n"
      "End\n";
  EXPECT_EQ(export_lp(two_var_toy()), want);
  EXPECT_EQ(parse_lp(want), two_var_toy());
}

TEST(LpFormat, RoundTripIsExact) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    Instance in = random_instance(rng, 1 + static_cast<int>(rng() % 30));
    in.params.cyclic_soc = i % 2 == 0;
    const auto m = model_for(in);
    const std::string text = export_lp(m);
    const auto back = parse_lp(text);
    EXPECT_TRUE(back == m) << i;
    EXPECT_EQ(export_lp(back), text) << i;
  }
}

TEST(LpFormat, ReadsHandWrittenVariants) {
  const auto m = parse_lp(
      "\\ comment\n"
      "minimize\n"
      "  2 a - b + 0.5 c\n"
      "st\n"
      "  a + b >= 1\n"
      "  lim: c <= 3\n"
      "bounds\n"
      "  -1 <= a <= 4\n"
      "  b free\n"
      "  c = 2\n"
      "binaries\n"
      "  d\n"
      "end\n");
  ASSERT_EQ(m.variables().size(), 4u);
  EXPECT_EQ(m.variables()[0].lower, -1.0);
  EXPECT_EQ(m.variables()[1].lower, -std::numeric_limits<double>::infinity());
  EXPECT_EQ(m.variables()[2].lower, 2.0);
  EXPECT_EQ(m.variables()[2].upper, 2.0);
  EXPECT_EQ(m.variables()[3].kind, VarKind::binary);
  EXPECT_EQ(m.constraints()[0].name, "R1");
  EXPECT_EQ(m.constraints()[1].name, "lim");
  EXPECT_EQ(m.objective()[1].coef, -1.0);
  EXPECT_THROW(parse_lp("Maximize\n obj: x\nEnd\n"), InputError);
  EXPECT_THROW(parse_lp("Minimize\n obj: x\nSubject To\n c: x <=\nEnd\n"), InputError);
}

TEST(Validate, ToyResiduals) {
  const auto m = two_var_toy();
  auto ok = validate_solution(m, {{"x", 2.0}, {"y", 0.0}}, 1e-9);
  EXPECT_TRUE(ok.feasible);
  EXPECT_EQ(ok.objective, 6.0);
  auto bad = validate_solution(m, {{"x", 0.5}, {"y", 0.5}}, 1e-9);
  EXPECT_FALSE(bad.feasible);
  EXPECT_NEAR(row(bad, "c1")->residual, 1.0, 1e-12);
  EXPECT_EQ(bad.worst, "c1");
  ASSERT_FALSE(bad.bounds.empty());
  EXPECT_EQ(bad.bounds.front().name, "integrality:x");
  EXPECT_THROW(validate_solution(m, {{"x", 1.0}}, 1e-6), InputError);
}

TEST(Validate, OverfullBatteryNamesSocMaxRow) {
  // One step, one battery string (9.32 kWh), stored energy 0.5 kWh above the ceiling.
  Instance in;
  in.catalog = table_catalog();
  in.series = series_from_load({0.0});
  in.availability.pv_per_kw = {0.0};
  in.availability.wt_per_unit = {0.0};
  in.params.max_unmet_reserve_fraction = 1.0;
  const auto m = model_for(in);
  const Sizing s{0, 0, 1};
  auto a = assignment_from_dispatch(s, simulate_greedy(s, in.series, in.availability, in.catalog, in.params));
  ASSERT_TRUE(validate_solution(m, a, 1e-9).feasible);
  a["soc_1"] += 0.5;
  a["soc_0"] += 0.5;
  const auto r = validate_solution(m, a, 1e-6);
  EXPECT_FALSE(r.feasible);
  EXPECT_NEAR(row(r, "soc_max_1")->violation, 0.5, 1e-12);
  EXPECT_NEAR(r.max_violation, 0.5, 1e-12);
}

TEST(Validate, ZeroLoadAllZeroAssignment) {
  Instance in;
  in.catalog = table_catalog();
  in.series = series_from_load(std::vector<double>(6, 0.0));
  in.availability.pv_per_kw.assign(6, 0.4);
  in.availability.wt_per_unit.assign(6, 1.0);
  const auto m = model_for(in);
  SolutionAssignment zero;
  for (const auto& v : m.variables()) zero[v.name] = 0.0;
  const auto r = validate_solution(m, zero, 1e-9);
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.objective, 0.0);
}

TEST(Validate, GreedyDispatchSatisfiesModel) {
  std::mt19937_64 rng(6);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    Instance in = random_instance(rng, 1 + static_cast<int>(rng() % 72), 8);
    in.params.cyclic_soc = false;
    const auto sol = plan_optimal(in.catalog, in.series, in.availability,
                                  SearchSpace::from_catalog(in.catalog), in.params);
    if (!sol.feasible) continue;
    ++checked;
    const auto m = model_for(in);
    const auto d = simulate_greedy(sol.sizing, in.series, in.availability, in.catalog, in.params);
    const auto r = validate_solution(m, assignment_from_dispatch(sol.sizing, d), 1e-6);
    EXPECT_TRUE(r.feasible) << i << " worst " << r.worst << " " << r.max_violation;
    EXPECT_NEAR(r.objective, sol.npc, 1e-9 * std::max(1.0, sol.npc)) << i;
  }
  EXPECT_GT(checked, 30);
}

TEST(Validate, InfeasibleSizingViolatesCaps) {
  // A sizing the greedy rejects must break a cap row when mapped.
  std::mt19937_64 rng(8);
  int seen = 0;
  for (int i = 0; i < 100 && seen < 20; ++i) {
    const Instance in = random_instance(rng, 24);
    const auto d = simulate_greedy(in.sizing, in.series, in.availability, in.catalog, in.params);
    if (check_feasible(d, in.series, in.params).feasible) continue;
    ++seen;
    const auto r = validate_solution(model_for(in), assignment_from_dispatch(in.sizing, d), 1e-6);
    EXPECT_FALSE(r.feasible);
    EXPECT_TRUE(r.worst == "unserved_cap" || r.worst == "reserve_cap") << r.worst;
  }
  EXPECT_GT(seen, 0);
}

TEST(SolutionFile, Formats) {
  const auto a = parse_solution(R"({"values": {"x": 1, "y": 2.5}})");
  EXPECT_EQ(a.at("x"), 1.0);
  EXPECT_EQ(a.at("y"), 2.5);
  const auto b = parse_solution(R"({"x": 3})");
  EXPECT_EQ(b.at("x"), 3.0);
  const auto c = parse_solution("# header\nx 4\ny -1e-3  # tail\n");
  EXPECT_EQ(c.at("x"), 4.0);
  EXPECT_EQ(c.at("y"), -1e-3);
  EXPECT_THROW(parse_solution("x\n"), InputError);
  EXPECT_THROW(parse_solution(R"({"x": "one"})"), InputError);
}
