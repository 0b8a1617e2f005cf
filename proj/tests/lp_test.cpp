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

#include <algorithm>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "egplan/lp.hpp"
#include "support/random_lp.hpp"
#include "support/vertex_oracle.hpp"

namespace egplan::lp {
namespace {

LinearProgram one_variable_lp() {
  LinearProgram lp;
  const int x = lp.add_variable("x", 1.0);
  lp.add_row("floor", RowSense::kGreaterEqual, 1.0, {{x, 1.0}});
  return lp;
}

double dual_objective(const LinearProgram& lp, const LpSolution& s) {
  double v = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) v += lp.row(i).rhs * s.row_duals[i];
  for (int j = 0; j < lp.num_variables(); ++j) {
    const double d = s.reduced_costs[j];
    if (d > 0.0) v += d * lp.variable(j).lower;
    if (d < 0.0) v += d * lp.variable(j).upper;
  }
  return v;
}

TEST(SimplexTest, OneVariable) {
  const auto lp = one_variable_lp();
  const auto s = solve(lp);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_DOUBLE_EQ(s.objective, 1.0);
  EXPECT_DOUBLE_EQ(s.primal[0], 1.0);
  EXPECT_DOUBLE_EQ(s.row_duals[0], 1.0);
  const auto r = residuals(lp, s);
  EXPECT_EQ(r.primal_infeasibility, 0.0);
  EXPECT_EQ(r.dual_infeasibility, 0.0);
  EXPECT_EQ(r.complementary_slackness, 0.0);
}

TEST(SimplexTest, DegenerateFaceBreaksTiesByLowestIndex) {
  LinearProgram lp;
  const int x = lp.add_variable("x", -1.0);
  const int y = lp.add_variable("y", -1.0);
  lp.add_row("cap", RowSense::kLessEqual, 1.0, {{x, 1.0}, {y, 1.0}});
  const auto s = solve(lp);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_NEAR(s.objective, -1.0, 1e-12);
  EXPECT_NEAR(s.primal[0], 1.0, 1e-12);
  EXPECT_NEAR(s.primal[1], 0.0, 1e-12);
  EXPECT_NEAR(s.row_duals[0], -1.0, 1e-12);
}

TEST(SimplexTest, ReportsInfeasible) {
  LinearProgram lp;
  const int x = lp.add_variable("x", 1.0);
  const int y = lp.add_variable("y", 1.0);
  lp.add_row("a", RowSense::kGreaterEqual, 3.0, {{x, 1.0}, {y, 1.0}});
  lp.add_row("b", RowSense::kLessEqual, 1.0, {{x, 1.0}, {y, 1.0}});
  EXPECT_EQ(solve(lp).status, SolveStatus::kInfeasible);
}

TEST(SimplexTest, ReportsInfeasibleFromCrossingSingletonBounds) {
  LinearProgram lp;
  const int x = lp.add_variable("x", 1.0, 0.0, 2.0);
  lp.add_row("lo", RowSense::kGreaterEqual, 3.0, {{x, 1.0}});
  EXPECT_EQ(solve(lp).status, SolveStatus::kInfeasible);
}

TEST(SimplexTest, ReportsUnbounded) {
  LinearProgram lp;
  const int x = lp.add_variable("x", -1.0);
  const int y = lp.add_variable("y", 0.0);
  lp.add_row("a", RowSense::kGreaterEqual, 1.0, {{x, 1.0}, {y, -1.0}});
  EXPECT_EQ(solve(lp).status, SolveStatus::kUnbounded);
}

TEST(SimplexTest, FreeAndNegativeBoundedColumns) {
  // min x + 2y  s.t. x - y = -3, y in [-1, 4], x free.
  LinearProgram lp;
  const int x = lp.add_variable("x", 1.0, -kInfinity, kInfinity);
  const int y = lp.add_variable("y", 2.0, -1.0, 4.0);
  lp.add_row("link", RowSense::kEqual, -3.0, {{x, 1.0}, {y, -1.0}});
  const auto s = solve(lp);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_NEAR(s.objective, -4.0 - 2.0, 1e-9);
  EXPECT_NEAR(s.primal[x], -4.0, 1e-9);
  EXPECT_NEAR(s.primal[y], -1.0, 1e-9);
}

TEST(SimplexTest, SingletonRowDualsAreRecovered) {
  // min 3x + y  s.t. x >= 2 (singleton), x + y >= 5.
  LinearProgram lp;
  const int x = lp.add_variable("x", 3.0);
  const int y = lp.add_variable("y", 1.0);
  lp.add_row("xmin", RowSense::kGreaterEqual, 2.0, {{x, 1.0}});
  lp.add_row("total", RowSense::kGreaterEqual, 5.0, {{x, 1.0}, {y, 1.0}});
  const auto s = solve(lp);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_NEAR(s.objective, 9.0, 1e-12);
  EXPECT_NEAR(s.row_duals[1], 1.0, 1e-12);
  EXPECT_NEAR(s.row_duals[0], 2.0, 1e-12);
  EXPECT_NEAR(s.reduced_costs[x], 0.0, 1e-12);
  const auto r = residuals(lp, s);
  EXPECT_LE(r.dual_infeasibility, 1e-12);
  EXPECT_LE(r.complementary_slackness, 1e-12);
}

TEST(SimplexTest, IterationLimitCarriesBasis) {
  std::mt19937 rng(7);
  LinearProgram lp;
  for (int j = 0; j < 12; ++j) lp.add_variable("x" + std::to_string(j), -1.0 - j);
  for (int i = 0; i < 10; ++i) {
    std::vector<Term> terms;
    for (int j = 0; j < 12; ++j) terms.push_back({j, 1.0 + (i * j) % 5});
    lp.add_row("r" + std::to_string(i), RowSense::kLessEqual, 10.0 + i, terms);
  }
  Tolerances tol;
  tol.iteration_limit = 1;
  try {
    solve(lp, tol);
    FAIL() << "expected IterationLimitError";
  } catch (const IterationLimitError& e) {
    EXPECT_EQ(e.basis().size(), 10u);
    EXPECT_EQ(e.primal().size(), 12u);
  }
}

TEST(SimplexTest, MatchesVertexEnumerationOnRandomLps) {
  std::mt19937 rng(20240611);
  int optimal = 0;
  for (int k = 0; k < 150; ++k) {
    const auto lp = testing::random_lp(rng);
    const auto expected = testing::enumerate_vertices(lp);
    const auto got = solve(lp);
    ASSERT_EQ(got.status, expected.status) << "instance " << k;
    if (got.status != SolveStatus::kOptimal) continue;
    ++optimal;
    EXPECT_NEAR(got.objective, expected.objective, 1e-6) << "instance " << k;
    const auto r = residuals(lp, got);
    EXPECT_LE(r.primal_infeasibility, 1e-6) << "instance " << k;
    EXPECT_LE(r.dual_infeasibility, 1e-6) << "instance " << k;
    EXPECT_LE(r.complementary_slackness, 1e-6) << "instance " << k;
    EXPECT_NEAR(got.objective, dual_objective(lp, got),
                1e-6 * (1.0 + std::abs(got.objective)));
  }
  EXPECT_GE(optimal, 60);
}

TEST(SimplexTest, ObjectiveScalesWithCostVector) {
  std::mt19937 rng(99);
  for (int k = 0; k < 40; ++k) {
    auto lp = testing::random_lp(rng);
    const auto base = solve(lp);
    if (base.status != SolveStatus::kOptimal) continue;
    for (int j = 0; j < lp.num_variables(); ++j) {
      lp.set_cost(j, 3.5 * lp.variable(j).cost);
    }
    const auto scaled = solve(lp);
    ASSERT_EQ(scaled.status, SolveStatus::kOptimal);
    EXPECT_NEAR(scaled.objective, 3.5 * base.objective,
                1e-9 * (1.0 + std::abs(base.objective)));
  }
}

TEST(SimplexTest, RelaxingGreaterEqualRowNeverIncreasesObjective) {
  std::mt19937 rng(1234);
  for (int k = 0; k < 40; ++k) {
    const auto lp = testing::random_lp(rng);
    const auto base = solve(lp);
    if (base.status != SolveStatus::kOptimal) continue;
    for (int i = 0; i < lp.num_rows(); ++i) {
      if (lp.row(i).sense != RowSense::kGreaterEqual) continue;
      LinearProgram relaxed;
      for (const auto& v : lp.variables()) {
        relaxed.add_variable(v.name, v.cost, v.lower, v.upper);
      }
      for (int r = 0; r < lp.num_rows(); ++r) {
        const auto& row = lp.row(r);
        relaxed.add_row(row.name, row.sense, r == i ? row.rhs - 2.0 : row.rhs,
                        row.terms);
      }
      const auto s = solve(relaxed);
      if (s.status == SolveStatus::kUnbounded) continue;
      ASSERT_EQ(s.status, SolveStatus::kOptimal);
      EXPECT_LE(s.objective, base.objective + 1e-9);
    }
  }
}

TEST(ResidualsTest, PerturbedPrimalShowsUp) {
  const auto lp = one_variable_lp();
  auto s = solve(lp);
  s.primal[0] -= 1e-3;
  EXPECT_GE(residuals(lp, s).primal_infeasibility, 1e-3 - 1e-7);
}

TEST(ResidualsTest, DimensionMismatchThrows) {
  const auto lp = one_variable_lp();
  auto s = solve(lp);
  s.row_duals.push_back(0.0);
  EXPECT_THROW(residuals(lp, s), LpError);
}

TEST(LinearProgramTest, RejectsBadInput) {
  LinearProgram lp;
  lp.add_variable("x");
  EXPECT_THROW(lp.add_variable("x"), LpError);
  lp.add_row("r", RowSense::kEqual, 1.0, {{3, 1.0}});
  EXPECT_THROW(lp.check(), LpError);
}

TEST(MpsTest, OneVariableStructure) {
  const std::string text = export_mps(one_variable_lp());
  EXPECT_EQ(text, R"(NAME          EGPLAN
ROWS
 N  OBJ
 G  floor
COLUMNS
    x         OBJ       1
    x         floor     1
RHS
    RHS       floor     1
BOUNDS
ENDATA
)");
}

TEST(MpsTest, EmptyLp) {
  LinearProgram lp;
  EXPECT_EQ(export_mps(lp, "EMPTY"),
            "NAME          EMPTY\nROWS\n N  OBJ\nCOLUMNS\nRHS\nBOUNDS\nENDATA\n");
  const auto back = import_mps(export_mps(lp));
  EXPECT_EQ(back.num_rows(), 0);
  EXPECT_EQ(back.num_variables(), 0);
}

TEST(MpsTest, LongNamesAreHashedDeterministically) {
  LinearProgram lp;
  const int x = lp.add_variable("generation_long_name", 1.0, -2.5, 4.0);
  lp.add_row("balance_row_long", RowSense::kEqual, 1.0, {{x, 1.0}});
  const auto names = mps_name_map(lp);
  EXPECT_EQ(names.at("generation_long_name").size(), 8u);
  EXPECT_EQ(names.at("generation_long_name")[0], 'C');
  EXPECT_EQ(names.at("balance_row_long")[0], 'R');
  EXPECT_EQ(export_mps(lp), export_mps(lp));
}

TEST(MpsTest, CollisionIsReported) {
  LinearProgram lp;
  const int x = lp.add_variable("x", 1.0);
  lp.add_row("OBJ", RowSense::kEqual, 1.0, {{x, 1.0}});
  try {
    export_mps(lp);
    FAIL() << "expected a collision";
  } catch (const LpError& e) {
    EXPECT_NE(std::string(e.what()).find("OBJ"), std::string::npos);
  }
}

TEST(MpsTest, RoundTripPreservesOptimum) {
  std::mt19937 rng(5);
  int checked = 0;
  for (int k = 0; k < 60 && checked < 20; ++k) {
    auto lp = testing::random_lp(rng, 5, 5);
    const auto before = solve(lp);
    const auto back = import_mps(export_mps(lp));
    ASSERT_EQ(back.num_variables(), lp.num_variables());
    ASSERT_EQ(back.num_rows(), lp.num_rows());
    const auto after = solve(back);
    ASSERT_EQ(after.status, before.status);
    if (before.status == SolveStatus::kOptimal) {
      EXPECT_NEAR(after.objective, before.objective, 1e-9);
      ++checked;
    }
  }
  EXPECT_GT(checked, 5);
}

TEST(MpsTest, ImportsBoundTypes) {
  const std::string text = R"(NAME          TESTPROB
ROWS
 N  COST
 L  LIM1
 G  LIM2
 E  MYEQN
COLUMNS
    XONE      COST         1   LIM1         1
    XONE      LIM2         1
    YTWO      COST         2   LIM1         1
    YTWO      MYEQN       -1
    ZTHREE    COST         3   LIM2         1
    ZTHREE    MYEQN        1
RHS
    RHS1      LIM1         4   LIM2         1
    RHS1      MYEQN        7
BOUNDS
 UP BND1      XONE         4
 LO BND1      YTWO        -1
 UP BND1      YTWO         1
ENDATA
)";
  const auto lp = import_mps(text);
  ASSERT_EQ(lp.num_variables(), 3);
  ASSERT_EQ(lp.num_rows(), 3);
  EXPECT_EQ(lp.variable(1).lower, -1.0);
  EXPECT_EQ(lp.variable(0).upper, 4.0);
  const auto s = solve(lp);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  // y = -1 forces z = 6; x = 0 keeps LIM2 satisfied.
  EXPECT_NEAR(s.objective, -2.0 + 18.0, 1e-9);
}

}  // namespace
}  // namespace egplan::lp
