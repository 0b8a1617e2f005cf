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

#include "egplan/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace egplan {
namespace {

std::vector<double> default_year_weights(const std::vector<int>& years) {
  std::vector<double> w(years.size(), 1.0);
  for (std::size_t k = 0; k + 1 < years.size(); ++k) {
    w[k] = years[k + 1] - years[k];
  }
  return w;
}

template <typename Key>
std::string key_text(const Key& k) {
  if constexpr (std::is_same_v<Key, std::string>) {
    return k;
  } else {
    return k.first + "/" + k.second;
  }
}

// Weighted mean of one element; exact when every branch agrees.
template <typename Value>
double mean_at(const std::vector<ScenarioBranch>& branches, Value value) {
  const double first = value(branches.front());
  bool same = true;
  double acc = 0.0;
  for (const auto& b : branches) {
    const double v = value(b);
    same = same && v == first;
    acc += b.probability * v;
  }
  return same ? first : acc;
}

template <typename Get>
std::vector<double> mean_vector(const std::vector<ScenarioBranch>& branches,
                                Get get, const std::string& name) {
  const auto& first = get(branches.front());
  for (const auto& b : branches) {
    if (get(b).size() != first.size()) {
      throw ModelError(fmt::format("{} has length {} in branch {}, {} in {}",
                                   name, get(b).size(), b.id, first.size(),
                                   branches.front().id));
    }
  }
  std::vector<double> out(first.size());
  for (std::size_t k = 0; k < first.size(); ++k) {
    out[k] = mean_at(branches, [&](const ScenarioBranch& b) { return get(b)[k]; });
  }
  return out;
}

// Element-wise weighted mean over one map-valued surface.
template <typename Get>
auto mean_map(const std::vector<ScenarioBranch>& branches, Get get,
              const char* name) {
  const auto& first = get(branches.front());
  std::decay_t<decltype(first)> out;
  for (const auto& b : branches) {
    if (get(b).size() != first.size()) {
      throw ModelError(fmt::format("{}: branch {} has {} entries, branch {} has {}",
                                   name, b.id, get(b).size(),
                                   branches.front().id, first.size()));
    }
    for (const auto& entry : first) {
      if (!get(b).count(entry.first)) {
        throw ModelError(fmt::format("{}: branch {} lacks {}", name, b.id,
                                     key_text(entry.first)));
      }
    }
  }
  for (const auto& entry : first) {
    const auto& key = entry.first;
    out.emplace(key, mean_vector(
                         branches,
                         [&](const ScenarioBranch& b) -> const std::vector<double>& {
                           return get(b).at(key);
                         },
                         fmt::format("{} {}", name, key_text(key))));
  }
  return out;
}

}  // namespace

std::optional<int> TimeGrid::year_index(int year) const {
  auto it = std::find(years.begin(), years.end(), year);
  if (it == years.end()) return std::nullopt;
  return static_cast<int>(it - years.begin());
}

TimeGrid TimeGrid::make(std::vector<int> years, int hours, double discount_rate,
                        std::vector<double> year_weight) {
  if (hours < kMonths) {
    throw ModelError(fmt::format("need at least 12 hours per year, got {}", hours));
  }
  std::array<int, kMonths> count{};
  std::array<double, kMonths> frac{};
  int assigned = 0;
  for (int m = 0; m < kMonths; ++m) {
    const double quota = static_cast<double>(hours) * kMonthDays[m] / 365.0;
    count[m] = static_cast<int>(std::floor(quota));
    frac[m] = quota - count[m];
    assigned += count[m];
  }
  std::array<int, kMonths> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return frac[a] > frac[b]; });
  for (int k = 0; assigned < hours; ++k, ++assigned) ++count[order[k]];

  std::vector<int> hour_month;
  std::vector<double> hour_weight;
  for (int m = 0; m < kMonths; ++m) {
    if (count[m] == 0) {
      throw ModelError(fmt::format("month {} receives no hours", m + 1));
    }
    const double w = 24.0 * kMonthDays[m] / count[m];
    for (int k = 0; k < count[m]; ++k) {
      hour_month.push_back(m);
      hour_weight.push_back(w);
    }
  }
  return custom(std::move(years), std::move(hour_month), std::move(hour_weight),
                discount_rate, std::move(year_weight));
}

TimeGrid TimeGrid::custom(std::vector<int> years, std::vector<int> hour_month,
                          std::vector<double> hour_weight, double discount_rate,
                          std::vector<double> year_weight) {
  TimeGrid g;
  g.years = std::move(years);
  g.hour_month = std::move(hour_month);
  g.hour_weight = std::move(hour_weight);
  g.discount_rate = discount_rate;
  g.year_weight = year_weight.empty() ? default_year_weights(g.years)
                                      : std::move(year_weight);
  g.discount.resize(g.years.size());
  for (std::size_t k = 0; k < g.years.size(); ++k) {
    g.discount[k] = std::pow(1.0 + discount_rate, -(g.years[k] - g.years[0]));
  }
  return g;
}

std::string to_string(TechClass c) {
  switch (c) {
    case TechClass::kThermal: return "thermal";
    case TechClass::kGasFired: return "gas";
    case TechClass::kRes: return "res";
    case TechClass::kPsp: return "psp";
    case TechClass::kReservoir: return "reservoir";
  }
  return "?";
}

std::optional<TechClass> parse_tech_class(const std::string& s) {
  for (auto c : {TechClass::kThermal, TechClass::kGasFired, TechClass::kRes,
                 TechClass::kPsp, TechClass::kReservoir}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

double Technology::eta(const std::string& node, int y) const {
  auto it = node_efficiency.find(node);
  if (it != node_efficiency.end() && y < static_cast<int>(it->second.size())) {
    return it->second[y];
  }
  return efficiency;
}

std::string to_string(UncertainParameter p) {
  switch (p) {
    case UncertainParameter::kGasDemand: return "gas_demand";
    case UncertainParameter::kElectricityDemand: return "electricity_demand";
    case UncertainParameter::kResCapacity: return "res_capacity";
    case UncertainParameter::kFuelPrice: return "fuel_price";
    case UncertainParameter::kCo2Price: return "co2_price";
  }
  return "?";
}

std::optional<UncertainParameter> parse_uncertain_parameter(
    const std::string& s) {
  for (auto p : kUncertainParameters) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

namespace {

template <typename T>
std::optional<int> find_by_id(const std::vector<T>& v, const std::string& id) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].id == id) return static_cast<int>(k);
  }
  return std::nullopt;
}

}  // namespace

std::optional<int> EnergyModel::technology_index(const std::string& id) const {
  return find_by_id(technologies, id);
}

std::optional<int> EnergyModel::electricity_node_index(
    const std::string& id) const {
  return find_by_id(electricity_nodes, id);
}

std::optional<int> EnergyModel::gas_node_index(const std::string& id) const {
  return find_by_id(gas_nodes, id);
}

std::optional<int> EnergyModel::branch_index(const std::string& id) const {
  return find_by_id(branches, id);
}

const ScenarioBranch& EnergyModel::branch(const std::string& id) const {
  auto k = branch_index(id);
  if (!k) throw ModelError("unknown branch " + id);
  return branches[*k];
}

double EnergyModel::existing_capacity(const Technology& tech,
                                      const ElectricityNode& node, int y,
                                      const ScenarioBranch& branch) const {
  if (tech.is_res()) {
    auto it = branch.res_capacity.find({tech.id, node.id});
    if (it == branch.res_capacity.end()) return 0.0;
    return it->second.at(y);
  }
  auto it = node.existing.find(tech.id);
  if (it == node.existing.end()) return 0.0;
  return it->second.at(y);
}

double EnergyModel::new_capacity_max(const Technology& tech,
                                     const ElectricityNode& node, int y) const {
  if (!tech.investable) return 0.0;
  auto it = node.new_capacity_max.find(tech.id);
  if (it == node.new_capacity_max.end()) {
    return std::numeric_limits<double>::infinity();
  }
  return it->second.at(y);
}

std::string to_string(const Diagnostic& d) {
  std::string where = d.type + " " + d.id;
  if (!d.index.empty()) where += " [" + d.index + "]";
  return fmt::format("{}: {}: {}",
                     d.severity == Severity::kError ? "error" : "warning",
                     where, d.message);
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(), [](const auto& d) {
    return d.severity == Severity::kError;
  });
}

ScenarioBranch expected_branch(const std::vector<ScenarioBranch>& branches) {
  if (branches.empty()) throw ModelError("expected branch of an empty set");
  double total = 0.0;
  for (const auto& b : branches) total += b.probability;
  if (std::abs(total - 1.0) > 1e-9) {
    throw ModelError(fmt::format("probabilities sum to {:g}", total));
  }
  ScenarioBranch out;
  out.id = kExpectedBranchId;
  out.probability = 1.0;
  out.gas_demand = mean_map(
      branches, [](const ScenarioBranch& b) -> const auto& { return b.gas_demand; },
      "gas_demand");
  out.electricity_demand = mean_map(
      branches,
      [](const ScenarioBranch& b) -> const auto& { return b.electricity_demand; },
      "electricity_demand");
  out.res_capacity = mean_map(
      branches,
      [](const ScenarioBranch& b) -> const auto& { return b.res_capacity; },
      "res_capacity");
  out.prices.fuel = mean_map(
      branches, [](const ScenarioBranch& b) -> const auto& { return b.prices.fuel; },
      "fuel_price");
  out.prices.co2 = mean_vector(
      branches, [](const ScenarioBranch& b) -> const auto& { return b.prices.co2; },
      "co2_price");
  return out;
}

ScenarioBranch compose_branch(const ScenarioBranch& varying,
                              const ScenarioBranch& known,
                              UncertainParameter parameter) {
  ScenarioBranch out = known;
  out.id = varying.id;
  out.probability = varying.probability;
  switch (parameter) {
    case UncertainParameter::kGasDemand:
      out.gas_demand = varying.gas_demand;
      break;
    case UncertainParameter::kElectricityDemand:
      out.electricity_demand = varying.electricity_demand;
      break;
    case UncertainParameter::kResCapacity:
      out.res_capacity = varying.res_capacity;
      break;
    case UncertainParameter::kFuelPrice:
      out.prices.fuel = varying.prices.fuel;
      break;
    case UncertainParameter::kCo2Price:
      out.prices.co2 = varying.prices.co2;
      break;
  }
  return out;
}

double variable_cost(const Technology& tech, const std::string& node, int y,
                     const ScenarioBranch& branch) {
  const double eta = tech.eta(node, y);
  if (y < 0 || y >= static_cast<int>(branch.prices.co2.size())) {
    throw ModelError(fmt::format("branch {} has no CO2 price for year index {}",
                                 branch.id, y));
  }
  double fuel = 0.0;
  if (!tech.is_gas() && !tech.fuel.empty()) {
    auto it = branch.prices.fuel.find(tech.fuel);
    if (it == branch.prices.fuel.end()) {
      throw ModelError(fmt::format("technology {}: branch {} has no price for fuel {}",
                                   tech.id, branch.id, tech.fuel));
    }
    fuel = it->second.at(y);
  }
  return fuel / eta + tech.carbon_content * branch.prices.co2[y] / eta +
         tech.vom;
}

}  // namespace egplan
