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

// Assembly of the capacity-expansion LP and mapping of its solution back to
// named decision variables. With several branches the LP is the deterministic
// equivalent of the two-stage problem: cap columns are shared, everything
// else carries the branch position s.

#ifndef EGPLAN_BUILDER_HPP_
#define EGPLAN_BUILDER_HPP_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "egplan/lp.hpp"
#include "egplan/model.hpp"

namespace egplan {

template <std::size_t N>
using Key = std::array<int, N>;
template <std::size_t N>
using Block = std::map<Key<N>, int>;

// Cumulative new capacity per (technology, electricity node, year), all
// positions into the model vectors.
using CapacityPlan = std::map<Key<3>, double>;

struct VariableIndex {
  std::vector<ScenarioBranch> branches;  // position s

  // Columns.
  Block<3> cap;      // (i, n, y)
  Block<5> g;        // (i, n, t, y, s)
  Block<4> shed;     // (n, t, y, s)
  Block<5> charge;   // (i, n, t, y, s), psp only
  Block<5> sl;       // (i, n, t, y, s), psp only
  Block<4> flow;     // (electricity arc, t, y, s)
  Block<5> pvol;     // (supplier, gas node delivered to, m, y, s)
  Block<5> gflow;    // (supplier, gas arc, m, y, s)
  Block<4> arcflow;  // (gas arc, m, y, s)
  Block<4> inj;      // (gas node, m, y, s)
  Block<4> with;     // (gas node, m, y, s)
  Block<4> level;    // (gas node, m, y, s)
  Block<4> pgdem;    // (gas node, m, y, s)
  Block<4> gas_slack;  // (gas node, m, y, s), only with a slack penalty
  double gas_slack_penalty = 0.0;

  // Rows whose duals are prices.
  Block<4> power_balance;  // (n, t, y, s)
  Block<4> gas_balance;    // (gas node, m, y, s)
};

struct BuildOptions {
  // Branches in the problem; empty means the model's own branches. Their
  // probabilities weight the objective as given.
  std::vector<ScenarioBranch> branches;
  // Fixes every cap column to the plan value.
  std::optional<CapacityPlan> fixed_first_stage;
  // Positive: every gas balance gets a slack column priced at this value.
  double gas_slack_penalty = 0.0;
  // Overrides the model option when set.
  std::optional<bool> literal_psp_balance;
};

struct BuiltProblem {
  lp::LinearProgram lp;
  VariableIndex index;
};

BuiltProblem build(const EnergyModel& model, const BuildOptions& options = {});

// Cost totals in EUR; discounted and year-weighted.
struct CostBreakdown {
  double investment = 0.0;
  double shedding = 0.0;
  double generation = 0.0;      // fuel, CO2 and O&M of electricity generation
  double gas_production = 0.0;
  double gas_transport = 0.0;
  double gas_storage = 0.0;
  double gas_slack = 0.0;

  double operating() const {
    return generation + gas_production + gas_transport + gas_storage + gas_slack;
  }
  double total() const { return investment + shedding + operating(); }
};

// An infeasible or unbounded LP; `detail` names what binds when known.
class NotOptimalError : public ModelError {
 public:
  explicit NotOptimalError(lp::SolveStatus status, const std::string& detail = "");
  lp::SolveStatus status() const { return status_; }

 private:
  lp::SolveStatus status_;
};

struct SolvedModel {
  double objective = 0.0;
  VariableIndex index;
  lp::LpSolution solution;
  lp::Residuals residuals;
  // Worst |a'x - b| / (1 + |b|) (violation only for inequalities) over the
  // power, gas, storage and coupling balance rows.
  double balance_residual = 0.0;
  int balance_rows = 0;
  CapacityPlan cap;
  CostBreakdown costs;                      // expectation over branches
  std::vector<CostBreakdown> branch_costs;  // per branch, not probability weighted
  std::map<Key<4>, double> electricity_price;  // (n, t, y, s), EUR/MWh_el
  std::map<Key<4>, double> gas_price;          // (gas node, m, y, s), EUR/MWh_th

  template <std::size_t N>
  std::map<Key<N>, double> values(const Block<N>& block) const {
    std::map<Key<N>, double> out;
    for (const auto& [key, col] : block) out.emplace(key, solution.primal[col]);
    return out;
  }
};

// Recomputes every cost term from the model data and checks the total
// against the LP objective (1e-6 relative).
SolvedModel extract(const lp::LinearProgram& lp, const VariableIndex& index,
                    const lp::LpSolution& solution, const EnergyModel& model);

// build + solve + extract.
SolvedModel solve_model(const EnergyModel& model, const BuildOptions& options,
                        const lp::Tolerances& tolerances = {});

}  // namespace egplan

#endif  // EGPLAN_BUILDER_HPP_
