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

#include "egplan/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace egplan {
namespace {

std::string num(double v) { return format_number(v); }
std::string num(int v) { return std::to_string(v); }

const std::string& branch_label(const std::vector<std::string>& ids, int s) {
  if (s < 0 || s >= static_cast<int>(ids.size())) {
    throw ModelError(fmt::format("no branch id for position {}", s));
  }
  return ids[s];
}

int require_year(const EnergyModel& model, int year) {
  auto y = model.time.year_index(year);
  if (!y) {
    throw ModelError(fmt::format("year {} is not a representative year ({})", year,
                                 fmt::join(model.time.years, ", ")));
  }
  return *y;
}

}  // namespace

std::string mode_label(const ModeSpec& spec) {
  if (spec.mode == Mode::kAllParameters || !spec.parameter) return "all";
  return to_string(*spec.parameter);
}

std::string known_label(const ModeSpec& spec) {
  return spec.mode == Mode::kAllParameters ? "-" : spec.known_path;
}

ResultTable investment_table(
    const EnergyModel& model,
    const std::vector<std::pair<std::string, CapacityPlan>>& plans) {
  ResultTable t{"investment", {"plan", "tech", "node", "year", "new_capacity[MW_el]"}, 4, {}};
  for (const auto& [plan, cap] : plans) {
    for (const auto& [k, v] : cap) {
      t.add_row({plan, model.technologies.at(k[0]).id, model.electricity_nodes.at(k[1]).id,
                 num(model.time.years.at(k[2])), num(v)});
    }
  }
  return t;
}

ResultTable cost_table(const std::vector<std::pair<std::string, CostBreakdown>>& costs) {
  ResultTable t{"costs",
                {"plan", "investment[EUR]", "shedding[EUR]", "generation[EUR]",
                 "gas_production[EUR]", "gas_transport[EUR]", "gas_storage[EUR]",
                 "gas_slack[EUR]", "total[EUR]"},
                1,
                {}};
  for (const auto& [plan, c] : costs) {
    t.add_row({plan, num(c.investment), num(c.shedding), num(c.generation),
               num(c.gas_production), num(c.gas_transport), num(c.gas_storage),
               num(c.gas_slack), num(c.total())});
  }
  return t;
}

ResultTable eciu_table(const std::vector<UncertaintyReport>& reports) {
  ResultTable t{"eciu",
                {"parameter", "known", "reference", "nps[EUR]", "eev[EUR]", "ss[EUR]",
                 "eciu[EUR]", "eciu_share[%]"},
                3,
                {}};
  for (const auto& r : reports) {
    const auto p = mode_label(r.spec);
    const auto k = known_label(r.spec);
    t.add_row({p, k, "SS", num(r.ss), num(r.ss), num(r.ss), "0", "0"});
    for (const auto& ref : r.references) {
      t.add_row({p, k, ref.reference, num(ref.nps), num(ref.eev), num(r.ss),
                 num(ref.eciu.value), num(ref.eciu.percent)});
    }
  }
  return t;
}

ResultTable decomposition_table(const std::vector<UncertaintyReport>& reports) {
  ResultTable t{"decomposition",
                {"parameter", "known", "reference", "ss_shedding[EUR]", "eev_shedding[EUR]",
                 "ss_investment[EUR]", "eev_investment[EUR]", "delta_shedding[EUR]",
                 "delta_investment[EUR]", "delta_other[EUR]", "eev_minus_ss[EUR]",
                 "closure[EUR]"},
                3,
                {}};
  for (const auto& r : reports) {
    for (const auto& ref : r.references) {
      t.add_row({mode_label(r.spec), known_label(r.spec), ref.reference,
                 num(r.ss_costs.shedding), num(ref.eev_costs.shedding),
                 num(r.ss_costs.investment), num(ref.eev_costs.investment),
                 num(ref.delta.shedding), num(ref.delta.investment), num(ref.delta.other),
                 num(ref.eev - r.ss), num(ref.delta.closure)});
    }
  }
  return t;
}

ResultTable electricity_price_table(const EnergyModel& model, const std::string& plan,
                                    const std::vector<std::string>& branch_ids,
                                    const std::map<Key<4>, double>& prices) {
  ResultTable t{"electricity_prices",
                {"plan", "branch", "node", "year", "hour", "price[EUR/MWh_el]"},
                5,
                {}};
  for (const auto& [k, v] : prices) {
    t.add_row({plan, branch_label(branch_ids, k[3]), model.electricity_nodes.at(k[0]).id,
               num(model.time.years.at(k[2])), num(k[1] + 1), num(v)});
  }
  return t;
}

ResultTable gas_price_table(const EnergyModel& model, const std::string& plan,
                            const std::vector<std::string>& branch_ids,
                            const std::map<Key<4>, double>& prices) {
  ResultTable t{"gas_prices",
                {"plan", "branch", "node", "year", "month", "price[EUR/MWh_th]"},
                5,
                {}};
  for (const auto& [k, v] : prices) {
    t.add_row({plan, branch_label(branch_ids, k[3]), model.gas_nodes.at(k[0]).id,
               num(model.time.years.at(k[2])), num(k[1] + 1), num(v)});
  }
  return t;
}

std::vector<double> residual_load(const EnergyModel& model, const ScenarioBranch& branch,
                                  int year) {
  const int y = require_year(model, year);
  const int H = model.time.num_hours();
  std::vector<double> out(H, 0.0);
  for (const auto& node : model.electricity_nodes) {
    auto d = branch.electricity_demand.find(node.id);
    if (d != branch.electricity_demand.end()) {
      for (int t = 0; t < H; ++t) out[t] += d->second.at(y * H + t);
    }
    for (const auto& tech : model.technologies) {
      if (!tech.is_res()) continue;
      auto pf = node.production_factor.find(tech.id);
      if (pf == node.production_factor.end()) continue;
      const double cap = model.existing_capacity(tech, node, y, branch);
      for (int t = 0; t < H; ++t) out[t] -= cap * pf->second.at(t);
    }
  }
  return out;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw ModelError("quantile of an empty series");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ResultTable residual_load_series(const EnergyModel& model,
                                 const std::vector<ScenarioBranch>& branches, int year) {
  ResultTable t{"residual_load", {"branch", "year", "hour", "residual_load[MW_el]"}, 3, {}};
  for (const auto& b : branches) {
    const auto r = residual_load(model, b, year);
    for (std::size_t k = 0; k < r.size(); ++k) {
      t.add_row({b.id, num(year), num(static_cast<int>(k) + 1), num(r[k])});
    }
  }
  return t;
}

ResultTable residual_load_stats(const EnergyModel& model,
                                const std::vector<ScenarioBranch>& branches, int year) {
  ResultTable t{"residual_load_stats",
                {"branch", "year", "min[MW_el]", "q1[MW_el]", "median[MW_el]", "q3[MW_el]",
                 "max[MW_el]"},
                2,
                {}};
  for (const auto& b : branches) {
    const auto r = residual_load(model, b, year);
    if (r.empty()) throw ModelError("time grid has no hours");
    t.add_row({b.id, num(year), num(quantile(r, 0.0)), num(quantile(r, 0.25)),
               num(quantile(r, 0.5)), num(quantile(r, 0.75)), num(quantile(r, 1.0))});
  }
  return t;
}

void add_annual_gas_prices(const EnergyModel& model, const std::string& branch_id, int s,
                           const std::map<Key<4>, double>& monthly, GasPriceMap* out) {
  // (gas node, y) -> (weighted sum, weight)
  std::map<std::pair<int, int>, std::pair<double, double>> acc;
  for (const auto& [k, v] : monthly) {
    if (k[3] != s) continue;
    auto& a = acc[{k[0], k[2]}];
    a.first += kMonthDays.at(k[1]) * v;
    a.second += kMonthDays.at(k[1]);
  }
  for (const auto& [key, a] : acc) {
    (*out)[{branch_id, model.gas_nodes.at(key.first).id, model.time.years.at(key.second)}] =
        a.first / a.second;
  }
}

ResultTable hull_points(const EnergyModel& model, const std::vector<ScenarioBranch>& branches,
                        const GasPriceMap& gas_prices, const std::vector<std::string>& techs) {
  std::vector<const Technology*> selected;
  if (techs.empty()) {
    for (const auto& tech : model.technologies) {
      if (tech.is_gas() || (tech.kind == TechClass::kThermal && tech.carbon_content > 0.0)) {
        selected.push_back(&tech);
      }
    }
  } else {
    for (const auto& id : techs) {
      auto i = model.technology_index(id);
      if (!i) throw ModelError(fmt::format("hull technology '{}' is not in the model", id));
      selected.push_back(&model.technologies[*i]);
    }
  }
  ResultTable t{"hull_points",
                {"year", "tech", "node", "branch", "variable_cost[EUR/MWh_el]"},
                4,
                {}};
  for (int y = 0; y < model.time.num_years(); ++y) {
    const int year = model.time.years[y];
    for (const auto* tech : selected) {
      for (const auto& node : model.electricity_nodes) {
        // A gas-fired plant burns gas from the gas node of the same name.
        if (tech->is_gas() && !model.gas_node_index(node.id)) continue;
        for (const auto& b : branches) {
          double cost = variable_cost(*tech, node.id, y, b);
          if (tech->is_gas()) {
            auto p = gas_prices.find({b.id, node.id, year});
            if (p == gas_prices.end()) {
              throw ModelError(fmt::format(
                  "no gas price for branch {} at node {} in {}; run solve first", b.id,
                  node.id, year));
            }
            cost += p->second / tech->eta(node.id, y);
          }
          t.add_row({num(year), tech->id, node.id, b.id, num(cost)});
        }
      }
    }
  }
  return t;
}

}  // namespace egplan
