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

#include "egplan/stochastic.hpp"

#include <algorithm>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"

namespace egplan {
namespace {

double cap_of(const CapacityPlan& plan) {
  double c = 0.0;
  for (const auto& [k, v] : plan) c += v;
  return c;
}

const ReferenceResult& ref(const UncertaintyReport& r, const std::string& id) {
  for (const auto& x : r.references) {
    if (x.reference == id) return x;
  }
  throw std::out_of_range(id);
}

// Demands 5 and 6 at equal probability, IC 10, VC 1, VOLA 1000, SF 0.2.
// Worked by hand: SS builds 6 and pays 60 + (5 + 6) / 2. B1's plan builds 5
// and sheds 1 MWh at 1000 in B2.
TEST(StochasticToy, HandWorkedValues) {
  const auto m = testing::single_node({5.0, 6.0});
  const auto report = run_mode(m, ModeSpec{});
  EXPECT_NEAR(report.ss, 65.5, 1e-7);
  EXPECT_NEAR(cap_of(report.ss_cap), 6.0, 1e-7);
  ASSERT_EQ(report.references.size(), 3u);

  const auto& b1 = ref(report, "B1");
  EXPECT_NEAR(b1.nps, 55.0, 1e-7);
  EXPECT_NEAR(cap_of(b1.cap), 5.0, 1e-7);
  EXPECT_NEAR(b1.eev, 555.0, 1e-7);
  EXPECT_NEAR(b1.eciu.value, 489.5, 1e-7);
  EXPECT_NEAR(b1.eciu.percent, 100.0 * 489.5 / 60.0, 1e-7);
  EXPECT_NEAR(b1.delta.shedding, 500.0, 1e-7);
  EXPECT_NEAR(b1.delta.investment, -10.0, 1e-7);
  EXPECT_NEAR(b1.delta.other, -0.5, 1e-7);
  EXPECT_NEAR(b1.delta.closure, 0.0, 1e-7);

  const auto& b2 = ref(report, "B2");
  EXPECT_NEAR(b2.nps, 66.0, 1e-7);
  EXPECT_NEAR(b2.eciu.value, 0.0, 1e-7);

  const auto& evp = ref(report, kExpectedBranchId);
  EXPECT_NEAR(cap_of(evp.cap), 5.5, 1e-7);
  EXPECT_NEAR(evp.nps, 60.5, 1e-7);
  EXPECT_NEAR(evp.eev, 310.25, 1e-7);
  EXPECT_NEAR(evp.eciu.value, 244.75, 1e-7);

  ASSERT_EQ(report.ss_branch_recourse.size(), 2u);
  EXPECT_NEAR(report.ss_branch_recourse[0], 5.0, 1e-7);
  EXPECT_NEAR(report.ss_branch_recourse[1], 6.0, 1e-7);
  ASSERT_EQ(b1.branch_recourse.size(), 2u);
  EXPECT_NEAR(b1.branch_recourse[1], 1005.0, 1e-7);
}

TEST(StochasticToy, NaiveByIdMatchesNaiveByBranch) {
  const auto m = testing::single_node({5.0, 6.0});
  EXPECT_NEAR(solve_naive(m, "B2").nps, 66.0, 1e-7);
  EXPECT_NEAR(solve_naive(m, "EVP").nps, 60.5, 1e-7);
  EXPECT_THROW(solve_naive(m, "nope"), std::exception);
}

TEST(StochasticToy, InfeasibleNaiveProblemNamesTheBindingLimit) {
  auto m = testing::single_node({5.0});
  m.electricity_nodes[0].shed_max = 0.0;
  m.electricity_nodes[0].new_capacity_max["base"] = {2.0};
  try {
    solve_naive(m, "B1");
    FAIL() << "expected NotOptimalError";
  } catch (const NotOptimalError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("naive problem B1 is infeasible: shedding limit exhausted at branch B1 node N1"),
              std::string::npos)
        << msg;
  }
}

TEST(StochasticToy, FixedPlanBeyondSheddingLimitNamesBranchAndHour) {
  const auto m = testing::single_node({5.0, 10.0});
  const auto b1 = solve_naive(m, "B1");
  try {
    evaluate_eev(m, m.branches, b1.cap);
    FAIL() << "expected NotOptimalError";
  } catch (const NotOptimalError& e) {
    EXPECT_EQ(e.status(), lp::SolveStatus::kInfeasible);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("branch B2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("node N1 hour 1"), std::string::npos) << msg;
  }
}

TEST(StochasticToy, EevOfStochasticPlanEqualsSs) {
  const auto m = testing::single_node({5.0, 6.0, 7.5});
  const auto ss = solve_stochastic(m, m.branches);
  const auto eev = evaluate_eev(m, m.branches, ss.cap);
  EXPECT_NEAR(eev.eev, ss.ss, 1e-6 * (1.0 + std::abs(ss.ss)));
}

TEST(StochasticToy, DuplicatedBranchLeavesSsUnchanged) {
  auto m = testing::single_node({5.0, 6.0});
  const double ss = solve_stochastic(m, m.branches).ss;
  auto split = m.branches;
  auto copy = split[1];
  copy.id = "B2bis";
  split[1].probability = 0.25;
  copy.probability = 0.25;
  split.push_back(copy);
  EXPECT_NEAR(solve_stochastic(m, split).ss, ss, 1e-7);
}

TEST(StochasticToy, IdenticalBranchesHaveZeroEciu) {
  const auto m = testing::single_node({7.0, 7.0, 7.0});
  const auto report = run_mode(m, ModeSpec{});
  for (const auto& r : report.references) {
    EXPECT_NEAR(r.eciu.value, 0.0, 1e-6) << r.reference;
    EXPECT_NEAR(r.nps, report.ss, 1e-6) << r.reference;
  }
}

TEST(StochasticToy, ProbabilitiesMustSumToOne) {
  auto m = testing::single_node({5.0, 6.0});
  auto branches = m.branches;
  branches[0].probability = 0.4;
  EXPECT_THROW(solve_stochastic(m, branches), ModelError);
  EXPECT_THROW(solve_stochastic(m, {}), ModelError);
}

TEST(Eciu, NegativeBeyondToleranceThrows) {
  EXPECT_THROW(compute_eciu(100.0, 99.0, 10.0), ModelError);
  // Inside 1e-6 (1 + |SS|) is solver noise.
  EXPECT_NO_THROW(compute_eciu(100.0, 100.0 - 5e-5, 10.0));
  const auto e = compute_eciu(100.0, 112.0, 40.0);
  EXPECT_DOUBLE_EQ(e.value, 12.0);
  EXPECT_DOUBLE_EQ(e.percent, 30.0);
  EXPECT_DOUBLE_EQ(compute_eciu(100.0, 112.0, 0.0).percent, 0.0);
}

TEST(ModeBranches, IsolatedVariesOnlyTheChosenParameter) {
  const auto m = testing::coupled_system();
  ModeSpec spec;
  spec.mode = Mode::kIsolated;
  spec.parameter = UncertainParameter::kCo2Price;
  spec.known_path = "ST";
  const auto branches = mode_branches(m, spec);
  ASSERT_EQ(branches.size(), m.branches.size());
  const auto& known = m.branch("ST");
  for (std::size_t s = 0; s < branches.size(); ++s) {
    EXPECT_EQ(branches[s].id, m.branches[s].id);
    EXPECT_EQ(branches[s].prices.co2, m.branches[s].prices.co2);
    EXPECT_EQ(branches[s].prices.fuel, known.prices.fuel);
    EXPECT_EQ(branches[s].gas_demand, known.gas_demand);
    EXPECT_EQ(branches[s].electricity_demand, known.electricity_demand);
    EXPECT_EQ(branches[s].res_capacity, known.res_capacity);
  }
}

TEST(ModeBranches, ExpectedKnownPathUsesMeanSurfaces) {
  const auto m = testing::coupled_system();
  ModeSpec spec;
  spec.mode = Mode::kIsolated;
  spec.parameter = UncertainParameter::kGasDemand;
  spec.known_path = kExpectedBranchId;
  const auto branches = mode_branches(m, spec);
  const auto evp = expected_branch(m.branches);
  for (const auto& b : branches) EXPECT_EQ(b.prices, evp.prices);
}

TEST(ModeBranches, Errors) {
  const auto m = testing::coupled_system();
  ModeSpec spec;
  spec.mode = Mode::kIsolated;
  spec.known_path = "EUCO";
  EXPECT_THROW(mode_branches(m, spec), ModelError);
  spec.parameter = UncertainParameter::kFuelPrice;
  spec.known_path = "missing";
  EXPECT_THROW(mode_branches(m, spec), ModelError);
}

class CoupledStochasticTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    model_ = new EnergyModel(testing::coupled_system());
    report_ = new UncertaintyReport(run_mode(*model_, ModeSpec{}));
  }
  static void TearDownTestSuite() {
    delete report_;
    delete model_;
  }
  static EnergyModel* model_;
  static UncertaintyReport* report_;
};

EnergyModel* CoupledStochasticTest::model_ = nullptr;
UncertaintyReport* CoupledStochasticTest::report_ = nullptr;

TEST_F(CoupledStochasticTest, QualityCoversEverySolve) {
  const auto& q = report_->quality;
  // SS, then per reference one naive solve and one fixed solve per branch.
  EXPECT_EQ(q.solves, 1 + 4 * (1 + 3));
  EXPECT_LE(q.worst_kernel(), 1e-6);
  EXPECT_LE(q.balance_residual, 1e-6);
}

TEST_F(CoupledStochasticTest, EveryReferenceHasNonNegativeEciu) {
  ASSERT_EQ(report_->references.size(), 4u);
  const double tol = 1e-6 * (1.0 + std::abs(report_->ss));
  for (const auto& r : report_->references) {
    EXPECT_GE(r.eev, report_->ss - tol) << r.reference;
    EXPECT_GE(r.eciu.value, -tol) << r.reference;
  }
}

TEST_F(CoupledStochasticTest, CostDeltasCloseOnEciu) {
  for (const auto& r : report_->references) {
    EXPECT_NEAR(r.delta.closure, 0.0, 1e-6 * (1.0 + std::abs(report_->ss)))
        << r.reference;
    EXPECT_NEAR(r.delta.shedding + r.delta.investment + r.delta.other,
                r.eciu.value, 1e-6 * (1.0 + std::abs(report_->ss)));
  }
}

TEST_F(CoupledStochasticTest, BranchPermutationLeavesSsUnchanged) {
  auto branches = model_->branches;
  std::reverse(branches.begin(), branches.end());
  const double ss = solve_stochastic(*model_, branches).ss;
  EXPECT_NEAR(ss, report_->ss, 1e-6 * (1.0 + std::abs(report_->ss)));
}

TEST_F(CoupledStochasticTest, ExpectedRecourseMatchesObjective) {
  double expected = report_->ss_costs.investment;
  for (std::size_t s = 0; s < model_->branches.size(); ++s) {
    expected += model_->branches[s].probability * report_->ss_branch_recourse[s];
  }
  EXPECT_NEAR(expected, report_->ss, 1e-6 * (1.0 + std::abs(report_->ss)));
}

TEST_F(CoupledStochasticTest, DecomposedEevMatchesDeterministicEquivalent) {
  const auto& euco = ref(*report_, "EUCO");
  AnalysisOptions mono;
  mono.decompose_eev = false;
  const auto whole = evaluate_eev(*model_, model_->branches, euco.cap, mono);
  const double tol = 1e-6 * (1.0 + std::abs(whole.eev));
  EXPECT_NEAR(euco.eev, whole.eev, tol);
  EXPECT_NEAR(euco.eev_costs.shedding, whole.costs.shedding, tol);
  EXPECT_NEAR(euco.eev_costs.investment, whole.costs.investment, tol);
  ASSERT_EQ(euco.branch_recourse.size(), whole.branch_recourse.size());
  for (std::size_t s = 0; s < whole.branch_recourse.size(); ++s) {
    EXPECT_NEAR(euco.branch_recourse[s], whole.branch_recourse[s], tol);
  }
}

TEST_F(CoupledStochasticTest, IsolatedCellIsConsistent) {
  ModeSpec spec;
  spec.mode = Mode::kIsolated;
  spec.parameter = UncertainParameter::kElectricityDemand;
  spec.known_path = "EUCO";
  const auto cell = run_mode(*model_, spec);
  const double tol = 1e-6 * (1.0 + std::abs(cell.ss));
  for (const auto& r : cell.references) {
    EXPECT_GE(r.eciu.value, -tol) << r.reference;
    EXPECT_NEAR(r.delta.closure, 0.0, tol);
  }
}

}  // namespace
}  // namespace egplan
