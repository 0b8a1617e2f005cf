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

// Stochastic solution, naive solutions, EEV and the expected cost of ignoring
// uncertainty, for the composite and the isolated scenario modes.

#ifndef EGPLAN_STOCHASTIC_HPP_
#define EGPLAN_STOCHASTIC_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "egplan/builder.hpp"
#include "egplan/model.hpp"

namespace egplan {

struct AnalysisOptions {
  lp::Tolerances tolerances;
  double gas_slack_penalty = 0.0;
  // Solve EEV one branch at a time; exact since the fixed plan is the only
  // link between branches. Off: one deterministic-equivalent solve.
  bool decompose_eev = true;
};

// Worst kernel and balance residuals over the solves behind a result.
struct SolveQuality {
  int solves = 0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double complementary_slackness = 0.0;
  double balance_residual = 0.0;

  void add(const SolvedModel& s);
  void merge(const SolveQuality& q);
  double worst_kernel() const;
};

struct NaiveResult {
  std::string reference;
  double nps = 0.0;
  CapacityPlan cap;
  CostBreakdown costs;
  std::map<Key<4>, double> electricity_price;  // (n, t, y, 0)
  std::map<Key<4>, double> gas_price;          // (gas node, m, y, 0)
  SolveQuality quality;
};

struct StochasticResult {
  double ss = 0.0;
  CapacityPlan cap;
  CostBreakdown costs;
  std::vector<std::string> branch_ids;
  std::vector<double> branch_recourse;  // operating + shedding per branch
  std::map<Key<4>, double> electricity_price;  // (n, t, y, s)
  std::map<Key<4>, double> gas_price;          // (gas node, m, y, s)
  SolveQuality quality;
};

struct EevResult {
  double eev = 0.0;
  CostBreakdown costs;
  std::vector<double> branch_recourse;
  SolveQuality quality;
};

struct Eciu {
  double value = 0.0;    // EUR
  double percent = 0.0;  // of the stochastic solution's investment cost
};

// `reference` is a branch id or "EVP".
NaiveResult solve_naive(const EnergyModel& model, const std::string& reference,
                        const AnalysisOptions& options = {});
NaiveResult solve_naive(const EnergyModel& model, const ScenarioBranch& reference,
                        const AnalysisOptions& options = {});

StochasticResult solve_stochastic(const EnergyModel& model,
                                  const std::vector<ScenarioBranch>& branches,
                                  const AnalysisOptions& options = {});

// A plan that exhausts the shedding limit throws NotOptimalError naming the
// branch, node and hour, found by re-solving with SF_max = 1.
EevResult evaluate_eev(const EnergyModel& model,
                       const std::vector<ScenarioBranch>& branches,
                       const CapacityPlan& cap, const AnalysisOptions& options = {});

// tol = 1e-6 (1 + |SS|); a more negative value throws.
Eciu compute_eciu(double ss, double eev, double ss_investment);

enum class Mode { kAllParameters, kIsolated };

struct ModeSpec {
  Mode mode = Mode::kAllParameters;
  std::optional<UncertainParameter> parameter;  // isolated only
  std::string known_path;                       // branch id or "EVP"
  bool include_expected = true;                 // EVP in the reference set
};

struct CostDelta {
  double shedding = 0.0;
  double investment = 0.0;
  double other = 0.0;
  double closure = 0.0;  // (EEV - SS) minus the three deltas
};

struct ReferenceResult {
  std::string reference;
  double nps = 0.0;
  CapacityPlan cap;
  double eev = 0.0;
  Eciu eciu;
  CostBreakdown eev_costs;
  CostDelta delta;
  std::vector<double> branch_recourse;
  std::map<Key<4>, double> gas_price;  // of the naive solve, s = 0
};

struct UncertaintyReport {
  ModeSpec spec;
  std::vector<std::string> branch_ids;
  double ss = 0.0;
  CapacityPlan ss_cap;
  CostBreakdown ss_costs;
  std::vector<double> ss_branch_recourse;
  std::vector<ReferenceResult> references;
  SolveQuality quality;  // every solve of the run
};

// Branches seen by a mode: the model's own for all_parameters; for isolated,
// every path varies only `parameter` and takes the rest from `known_path`.
std::vector<ScenarioBranch> mode_branches(const EnergyModel& model,
                                          const ModeSpec& spec);

UncertaintyReport run_mode(const EnergyModel& model, const ModeSpec& spec,
                           const AnalysisOptions& options = {});

// Every isolated cell: parameters x (branches + EVP).
std::vector<UncertaintyReport> run_all_cells(const EnergyModel& model,
                                             const AnalysisOptions& options = {});

}  // namespace egplan

#endif  // EGPLAN_STOCHASTIC_HPP_
