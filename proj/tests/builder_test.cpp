// Copyright 2026 The egplan Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <set>
#include <string>

#include <gtest/gtest.h>

#include "egplan/builder.hpp"
#include "support/fixtures.hpp"
#include "support/vertex_oracle.hpp"

namespace egplan {
namespace {

std::set<std::string> row_families(const lp::LinearProgram& lp) {
  std::set<std::string> out;
  for (const auto& r : lp.rows()) out.insert(r.name.substr(0, r.name.find("__")));
  return out;
}

int count_prefix(const lp::LinearProgram& lp, const std::string& prefix) {
  int k = 0;
  for (const auto& v : lp.variables()) k += v.name.rfind(prefix, 0) == 0;
  return k;
}

double row_activity(const lp::LinearProgram& lp, const lp::LpSolution& s, int r) {
  double a = 0.0;
  for (const auto& t : lp.row(r).terms) a += t.value * s.primal[t.column];
  return a;
}

TEST(BuildTest, SingleInvestableTechStructure) {
  auto m = testing::single_node();
  m.time = TimeGrid::custom({2025, 2030}, {0, 1}, {4380.0, 4380.0});
  m.electricity_nodes[0].new_capacity_max["base"] = {10.0, 10.0};
  for (auto& b : m.branches) {
    b.electricity_demand["N1"] = {5.0, 4.0, 6.0, 5.0};
    b.prices.fuel["fuel"] = {1.0, 1.0};
    b.prices.co2 = {0.0, 0.0};
  }
  const auto built = build(m);
  EXPECT_EQ(built.index.cap.size(), 2u);
  EXPECT_EQ(count_prefix(built.lp, "cap__"), 2);
  EXPECT_EQ(row_families(built.lp),
            (std::set<std::string>{"eq12", "eq13", "eq14", "eq15", "eq17"}));
  EXPECT_TRUE(built.lp.find_row("eq12__N1_2_2030_B1").has_value());
  EXPECT_TRUE(built.lp.find_variable("g__base_N1_1_2025_B1").has_value());
  EXPECT_TRUE(built.lp.find_variable("cap__base_N1_2030").has_value());
}

TEST(BuildTest, BranchesShareFirstStage) {
  const auto one = build(testing::coupled_system(1));
  const auto three = build(testing::coupled_system(3));
  EXPECT_EQ(one.index.cap.size(), three.index.cap.size());
  EXPECT_EQ(count_prefix(one.lp, "cap__"), count_prefix(three.lp, "cap__"));
  EXPECT_EQ(3 * one.index.g.size(), three.index.g.size());
  EXPECT_EQ(3 * count_prefix(one.lp, "g__"), count_prefix(three.lp, "g__"));
  EXPECT_EQ(3 * one.index.pvol.size(), three.index.pvol.size());
  for (const auto& [key, col] : three.index.g) {
    EXPECT_LT(key[4], 3);
  }
}

TEST(BuildTest, AllRowFamiliesOfCoupledSystem) {
  const auto built = build(testing::coupled_system(1));
  const std::set<std::string> expected = {
      "eq12", "eq13", "eq14", "eq15", "eq16", "eq17", "eq18", "eq19", "eq20",
      "eq21", "eq22", "eq23", "eq24", "eq25", "eq26", "eq27", "eq28", "eq29",
      "eq30", "eq31", "eq32", "eq33", "eq34", "eq35", "eq36"};
  EXPECT_EQ(row_families(built.lp), expected);
}

TEST(BuildTest, ToyMatchesVertexOracle) {
  const auto m = testing::single_node();
  const auto built = build(m);
  const auto oracle = testing::enumerate_vertices(built.lp);
  ASSERT_EQ(oracle.status, lp::SolveStatus::kOptimal);
  EXPECT_NEAR(oracle.objective, 55.0, 1e-9);
  const auto solved = solve_model(m, {});
  EXPECT_NEAR(solved.objective, 55.0, 1e-6);
  EXPECT_NEAR(solved.objective, oracle.objective, 1e-6);
  EXPECT_NEAR(solved.cap.at({0, 0, 0}), 5.0, 1e-6);
  EXPECT_NEAR(solved.solution.primal[solved.index.shed.at({0, 0, 0, 0})], 0.0, 1e-9);
  EXPECT_NEAR(solved.costs.investment, 50.0, 1e-9);
  EXPECT_NEAR(solved.costs.generation, 5.0, 1e-9);
}

TEST(ExtractTest, SheddingAtMarginPricesAtVola) {
  auto m = testing::single_node();
  m.technologies[0].investable = false;
  m.electricity_nodes[0].existing["base"] = {4.5};
  const auto s = solve_model(m, {});
  EXPECT_NEAR(s.electricity_price.at({0, 0, 0, 0}), 1000.0, 1e-6);
  EXPECT_NEAR(s.costs.shedding, 500.0, 1e-6);
}

TEST(ExtractTest, SlackSystemPricesAtMarginalTech) {
  auto m = testing::single_node();
  m.technologies[0].investable = false;
  m.electricity_nodes[0].existing["base"] = {10.0};
  Technology peak = m.technologies[0];
  peak.id = "peak";
  peak.efficiency = 0.4;
  m.technologies.push_back(peak);
  m.electricity_nodes[0].existing["peak"] = {10.0};
  m.branches[0].prices.fuel["fuel"] = {12.0};
  m.branches[0].prices.co2 = {0.0};
  const auto s = solve_model(m, {});
  EXPECT_NEAR(s.electricity_price.at({0, 0, 0, 0}),
              variable_cost(m.technologies[0], "N1", 0, m.branches[0]), 1e-9);
  m.electricity_nodes[0].existing["base"] = {3.0};
  const auto s2 = solve_model(m, {});
  EXPECT_NEAR(s2.electricity_price.at({0, 0, 0, 0}), 30.0, 1e-9);
}

TEST(ExtractTest, ZeroDemand) {
  auto m = testing::single_node({0.0});
  const auto s = solve_model(m, {});
  EXPECT_EQ(s.objective, 0.0);
  for (const auto& [k, p] : s.electricity_price) EXPECT_EQ(p, 0.0);
}

TEST(ExtractTest, NonOptimalThrows) {
  auto m = testing::single_node();
  m.electricity_nodes[0].new_capacity_max["base"] = {1.0};
  m.electricity_nodes[0].shed_max = 0.0;
  try {
    solve_model(m, {});
    FAIL();
  } catch (const NotOptimalError& e) {
    EXPECT_EQ(e.status(), lp::SolveStatus::kInfeasible);
  }
}

class CoupledSystemTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    model_ = new EnergyModel(testing::coupled_system(3));
    built_ = new BuiltProblem(build(*model_));
    const auto sol = lp::solve(built_->lp);
    ASSERT_EQ(sol.status, lp::SolveStatus::kOptimal);
    solved_ = new SolvedModel(extract(built_->lp, built_->index, sol, *model_));
  }
  static void TearDownTestSuite() {
    delete solved_;
    delete built_;
    delete model_;
  }
  static EnergyModel* model_;
  static BuiltProblem* built_;
  static SolvedModel* solved_;
};

EnergyModel* CoupledSystemTest::model_ = nullptr;
BuiltProblem* CoupledSystemTest::built_ = nullptr;
SolvedModel* CoupledSystemTest::solved_ = nullptr;

TEST_F(CoupledSystemTest, KernelResiduals) {
  EXPECT_LE(solved_->residuals.primal_infeasibility, 1e-6);
  EXPECT_LE(solved_->residuals.dual_infeasibility, 1e-6);
  EXPECT_LE(solved_->residuals.complementary_slackness, 1e-6);
}

TEST_F(CoupledSystemTest, BalanceRowsHold) {
  const auto& lp = built_->lp;
  int checked = 0;
  for (int r = 0; r < lp.num_rows(); ++r) {
    const auto& row = lp.row(r);
    const std::string fam = row.name.substr(0, row.name.find("__"));
    static const std::set<std::string> balances = {"eq12", "eq24", "eq27", "eq29",
                                                   "eq30", "eq31", "eq36"};
    if (!balances.count(fam)) continue;
    ++checked;
    EXPECT_LE(std::abs(row_activity(lp, solved_->solution, r) - row.rhs),
              1e-6 * (1.0 + std::abs(row.rhs)))
        << row.name;
  }
  EXPECT_GT(checked, 100);
}

TEST_F(CoupledSystemTest, SheddingAndFlowLimits) {
  const auto& m = *model_;
  const auto& x = solved_->solution.primal;
  for (const auto& [k, col] : solved_->index.shed) {
    const auto& b = solved_->index.branches[k[3]];
    const double d = b.electricity_demand.at(m.electricity_nodes[k[0]].id)
                         [k[2] * m.time.num_hours() + k[1]];
    EXPECT_LE(x[col], m.electricity_nodes[k[0]].shed_max * d + 1e-7);
  }
  for (const auto& [k, col] : solved_->index.flow) {
    EXPECT_LE(x[col], m.electricity_arcs[k[0]].ntc[k[2]] + 1e-7);
  }
  for (const auto& [k, col] : solved_->index.g) EXPECT_GE(x[col], -1e-7);
}

TEST_F(CoupledSystemTest, CouplingUsesHourWeights) {
  const auto& m = *model_;
  const auto& x = solved_->solution.primal;
  for (const auto& [k, col] : solved_->index.pgdem) {
    const int n = *m.electricity_node_index(m.gas_nodes[k[0]].id);
    double expected = 0.0;
    for (const auto& [gk, gcol] : solved_->index.g) {
      if (gk[1] != n || gk[3] != k[2] || gk[4] != k[3]) continue;
      const auto& tech = m.technologies[gk[0]];
      if (!tech.is_gas() || m.time.hour_month[gk[2]] != k[1]) continue;
      expected += m.time.hour_weight[gk[2]] * x[gcol] / tech.efficiency;
    }
    EXPECT_NEAR(x[col], expected, 1e-6 * (1.0 + expected));
  }
}

TEST_F(CoupledSystemTest, PumpedStorageLosesOnDischarge) {
  const auto& x = solved_->solution.primal;
  std::map<std::array<int, 4>, double> charged, discharged;
  for (const auto& [k, col] : solved_->index.charge) {
    charged[{k[0], k[1], k[3], k[4]}] += x[col];
    discharged[{k[0], k[1], k[3], k[4]}] +=
        x[solved_->index.g.at(k)] / model_->technologies[k[0]].efficiency;
  }
  for (const auto& [k, c] : charged) EXPECT_NEAR(c, discharged[k], 1e-6 * (1 + c));
}

TEST_F(CoupledSystemTest, TakeOrPayAndStorageFloor) {
  const auto& m = *model_;
  const auto& x = solved_->solution.primal;
  for (int s = 0; s < 3; ++s) {
    for (int y = 0; y < 2; ++y) {
      for (int mo = 0; mo < 12; ++mo) {
        EXPECT_GE(x[solved_->index.pvol.at({0, 0, mo, y, s})],
                  0.7 * 100000.0 - 1e-6);
      }
    }
    EXPECT_GE(x[solved_->index.level.at({1, 11, 1, s})],
              m.gas_nodes[1].storage->end_level - 1e-6);
  }
}

TEST_F(CoupledSystemTest, PricesAreDeweightedDuals) {
  const auto& m = *model_;
  for (const auto& [k, row] : solved_->index.power_balance) {
    const double w = solved_->index.branches[k[3]].probability * m.time.discount[k[2]] *
                     m.time.year_weight[k[2]] * m.time.hour_weight[k[1]];
    EXPECT_NEAR(solved_->electricity_price.at(k) * w, solved_->solution.row_duals[row],
                1e-9 * (1 + std::abs(solved_->solution.row_duals[row])));
    EXPECT_GE(solved_->electricity_price.at(k), -1e-6);
    EXPECT_LE(solved_->electricity_price.at(k), 3000.0 + 1e-6);
  }
  for (const auto& [k, p] : solved_->gas_price) {
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 3000.0);
  }
}

TEST_F(CoupledSystemTest, BranchCostsAverageToExpectation) {
  double op = 0.0;
  for (const auto& bc : solved_->branch_costs) op += (bc.total() - bc.investment) / 3.0;
  EXPECT_NEAR(solved_->costs.investment + op, solved_->objective,
              1e-7 * solved_->objective);
}

TEST(BuildTest, FixedFirstStageReproducesOptimum) {
  const auto m = testing::coupled_system(2);
  const auto free_solve = solve_model(m, {});
  BuildOptions fixed;
  fixed.fixed_first_stage = free_solve.cap;
  const auto again = solve_model(m, fixed);
  EXPECT_NEAR(again.objective, free_solve.objective, 1e-6 * free_solve.objective);
  for (const auto& [k, v] : again.cap) EXPECT_EQ(v, std::max(0.0, free_solve.cap.at(k)));
}

TEST(BuildTest, FixedFirstStageErrors) {
  const auto m = testing::coupled_system(1);
  BuildOptions opt;
  opt.fixed_first_stage = CapacityPlan{};
  EXPECT_THROW(build(m, opt), ModelError);
  const auto built = build(m);
  CapacityPlan plan;
  for (const auto& [k, col] : built.index.cap) plan[k] = k[2] == 0 ? 10.0 : 5.0;
  opt.fixed_first_stage = plan;
  try {
    build(m, opt);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("decreases"), std::string::npos);
  }
}

TEST(BuildTest, MissingSurfaceNamesSymbol) {
  auto m = testing::coupled_system(1);
  BuildOptions opt;
  opt.branches = m.branches;
  opt.branches[0].gas_demand.erase("B");
  try {
    build(m, opt);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("NPGDEM missing for B"), std::string::npos);
  }
}

TEST(BuildTest, GasSlackCoversUnreachableDemand) {
  auto m = testing::coupled_system(1);
  for (auto& v : m.gas_suppliers) v.capacity.assign(24, 0.0);
  m.gas_arcs[0].contract.clear();
  EXPECT_THROW(solve_model(m, {}), NotOptimalError);
  BuildOptions opt;
  opt.gas_slack_penalty = 500.0;
  const auto s = solve_model(m, opt);
  EXPECT_GT(s.costs.gas_slack, 0.0);
}

TEST(BuildTest, LiteralPumpedStorageFormIsSelectable) {
  auto m = testing::coupled_system(1);
  BuildOptions literal;
  literal.literal_psp_balance = true;
  const auto a = build(m);
  const auto b = build(m, literal);
  const auto r = *a.lp.find_row("eq19__psp_A_1_2020_EUCO");
  const auto rb = *b.lp.find_row("eq19__psp_A_1_2020_EUCO");
  const int g = a.index.g.at({4, 0, 0, 0, 0});
  auto coef = [&](const lp::Row& row) {
    for (const auto& t : row.terms) if (t.column == g) return t.value;
    return 0.0;
  };
  EXPECT_NEAR(coef(a.lp.row(r)), 1.0 / 0.8, 1e-15);
  EXPECT_NEAR(coef(b.lp.row(rb)), 1.0, 1e-15);
}

// The electricity-only and gas-only halves of a system without gas-fired
// plants solve independently.
TEST(BuildTest, DecouplesWithoutGasFiredPlants) {
  auto m = testing::coupled_system(1);
  m.technologies[1].investable = false;
  m.technologies[2].investable = false;
  m.electricity_nodes[0].new_capacity_max.erase("coal");
  // Without power-sector gas the take-or-pay floor exceeds summer demand at A.
  m.gas_arcs[0].contract.clear();
  for (auto& n : m.electricity_nodes) {
    n.existing.erase("ccgt");
    n.existing.erase("ocgt");
    n.chp.clear();
  }
  const auto both = solve_model(m, {});

  auto elec = m;
  elec.gas_nodes.clear();
  elec.gas_suppliers.clear();
  elec.gas_arcs.clear();
  for (auto& b : elec.branches) b.gas_demand.clear();
  const auto e = solve_model(elec, {});

  auto gas = m;
  gas.technologies.clear();
  gas.electricity_arcs.clear();
  for (auto& n : gas.electricity_nodes) {
    n.existing.clear();
    n.new_capacity_max.clear();
    n.production_factor.clear();
  }
  for (auto& b : gas.branches) {
    for (auto& [k, v] : b.electricity_demand) v.assign(v.size(), 0.0);
    b.res_capacity.clear();
  }
  const auto g = solve_model(gas, {});

  EXPECT_NEAR(both.objective, e.objective + g.objective, 1e-6 * both.objective);
  EXPECT_NEAR(both.costs.investment + both.costs.shedding + both.costs.generation,
              e.objective, 1e-6 * e.objective);
}

TEST(BuildTest, MonotoneInVolaAndNetworkCapacity) {
  auto m = testing::coupled_system(1);
  m.technologies[0].investment_cost *= 4.0;
  m.technologies[1].investment_cost *= 4.0;
  m.technologies[2].investment_cost *= 4.0;
  const double base = solve_model(m, {}).objective;

  auto vola = m;
  for (auto& n : vola.electricity_nodes) n.vola *= 1.5;
  EXPECT_GE(solve_model(vola, {}).objective, base - 1e-9 * base);

  auto ntc = m;
  for (auto& a : ntc.electricity_arcs) for (auto& v : a.ntc) v *= 2.0;
  EXPECT_LE(solve_model(ntc, {}).objective, base + 1e-9 * base);

  auto arccap = m;
  for (auto& a : arccap.gas_arcs) for (auto& v : a.capacity) v *= 2.0;
  EXPECT_LE(solve_model(arccap, {}).objective, base + 1e-9 * base);
}

}  // namespace
}  // namespace egplan
