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

// Plot-ready result tables: investment mix, cost totals, ECIU matrix and its
// cost decomposition, prices, residual load and variable-cost hull points.
// Column contracts are listed in docs/dataset_format.md.

#ifndef EGPLAN_REPORT_HPP_
#define EGPLAN_REPORT_HPP_

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "egplan/builder.hpp"
#include "egplan/io.hpp"
#include "egplan/model.hpp"
#include "egplan/stochastic.hpp"

namespace egplan {

// "all" for the composite mode, the parameter name otherwise.
std::string mode_label(const ModeSpec& spec);
// "-" for the composite mode, the known path otherwise.
std::string known_label(const ModeSpec& spec);

// One row per (plan, tech, node, year) cap entry.
ResultTable investment_table(
    const EnergyModel& model,
    const std::vector<std::pair<std::string, CapacityPlan>>& plans);

ResultTable cost_table(const std::vector<std::pair<std::string, CostBreakdown>>& costs);

// Per report: an "SS" row (NPS and EEV equal SS, ECIU 0) and one row per
// reference.
ResultTable eciu_table(const std::vector<UncertaintyReport>& reports);

// EEV - SS split into shedding, investment and operating deltas.
ResultTable decomposition_table(const std::vector<UncertaintyReport>& reports);

// Prices per branch position s, labelled with the ids in `branch_ids`.
ResultTable electricity_price_table(const EnergyModel& model, const std::string& plan,
                                    const std::vector<std::string>& branch_ids,
                                    const std::map<Key<4>, double>& prices);
ResultTable gas_price_table(const EnergyModel& model, const std::string& plan,
                            const std::vector<std::string>& branch_ids,
                            const std::map<Key<4>, double>& prices);

// System residual load per representative hour of `year`:
// sum over nodes of demand minus RES capacity times production factor.
// Throws ModelError for a year outside the grid.
std::vector<double> residual_load(const EnergyModel& model, const ScenarioBranch& branch,
                                  int year);

// Linear-interpolation quantile (R type 7) of unsorted values.
double quantile(std::vector<double> values, double p);

// Hourly series and min/quartiles/median/max per branch. Pure data
// arithmetic, no solve.
ResultTable residual_load_series(const EnergyModel& model,
                                 const std::vector<ScenarioBranch>& branches, int year);
ResultTable residual_load_stats(const EnergyModel& model,
                                const std::vector<ScenarioBranch>& branches, int year);

// Annual gas price, EUR/MWh_th, keyed by (branch id, gas node id, year).
using GasPriceMap = std::map<std::tuple<std::string, std::string, int>, double>;

// Month-length weighted mean of the monthly prices of branch position s.
void add_annual_gas_prices(const EnergyModel& model, const std::string& branch_id, int s,
                           const std::map<Key<4>, double>& monthly, GasPriceMap* out);

// Variable cost per (year, tech, node, branch). Gas-fired technologies add
// the annual gas price at the node over eta; a missing price throws
// ModelError asking for a solve. Empty `techs` picks every gas-fired
// technology and every thermal one with carbon content.
ResultTable hull_points(const EnergyModel& model, const std::vector<ScenarioBranch>& branches,
                        const GasPriceMap& gas_prices,
                        const std::vector<std::string>& techs = {});

}  // namespace egplan

#endif  // EGPLAN_REPORT_HPP_
