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

#include <cmath>
#include <set>

#include <fmt/format.h>

#include "egplan/model.hpp"

namespace egplan {
namespace {

class Checker {
 public:
  explicit Checker(const EnergyModel& model)
      : model_(model),
        years_(model.time.num_years()),
        hours_(model.time.num_hours()) {}

  std::vector<Diagnostic> run() {
    check_time();
    check_technologies();
    check_electricity_nodes();
    check_electricity_arcs();
    check_gas_nodes();
    check_gas_suppliers();
    check_gas_arcs();
    check_branches();
    return std::move(out_);
  }

 private:
  void error(std::string type, std::string id, std::string index,
             std::string message) {
    out_.push_back({Severity::kError, std::move(type), std::move(id),
                    std::move(index), std::move(message)});
  }
  void warning(std::string type, std::string id, std::string index,
               std::string message) {
    out_.push_back({Severity::kWarning, std::move(type), std::move(id),
                    std::move(index), std::move(message)});
  }

  std::string year_text(int y) const {
    return fmt::format("y={}", model_.time.years.at(y));
  }

  // Length check plus an element predicate; reports the first failing entry.
  template <typename Pred>
  void check_surface(const std::string& type, const std::string& id,
                     const std::string& name, const std::vector<double>& v,
                     std::size_t expected, Pred ok, const char* rule) {
    if (v.size() != expected) {
      error(type, id, "",
            fmt::format("{} has {} values, expected {}", name, v.size(), expected));
      return;
    }
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!std::isfinite(v[k]) || !ok(v[k])) {
        error(type, id, fmt::format("{}[{}]", name, k),
              fmt::format("{} = {:g} violates {}", name, v[k], rule));
        return;
      }
    }
  }

  static bool nonneg(double v) { return v >= 0.0; }
  static bool unit(double v) { return v >= 0.0 && v <= 1.0; }

  void check_time() {
    const auto& t = model_.time;
    if (years_ == 0) error("TimeGrid", "", "", "no representative years");
    if (hours_ == 0) error("TimeGrid", "", "", "no representative hours");
    for (int y = 1; y < years_; ++y) {
      if (t.years[y] <= t.years[y - 1]) {
        error("TimeGrid", "", year_text(y), "years must be strictly increasing");
      }
    }
    if (t.hour_weight.size() != t.hour_month.size()) {
      error("TimeGrid", "", "", "hour weights and hour map differ in length");
      return;
    }
    if (static_cast<int>(t.year_weight.size()) != years_ ||
        static_cast<int>(t.discount.size()) != years_) {
      error("TimeGrid", "", "", "year weights or discount factors missing");
      return;
    }
    std::vector<double> month_sum(kMonths, 0.0);
    double total = 0.0;
    for (int h = 0; h < hours_; ++h) {
      const int m = t.hour_month[h];
      if (m < 0 || m >= kMonths) {
        error("TimeGrid", "", fmt::format("t={}", h), "hour maps to no month");
        continue;
      }
      if (!(t.hour_weight[h] > 0.0)) {
        error("TimeGrid", "", fmt::format("t={}", h), "hour weight must be positive");
      }
      month_sum[m] += t.hour_weight[h];
      total += t.hour_weight[h];
    }
    if (std::abs(total - kHoursPerYear) > 1e-6) {
      warning("TimeGrid", "", "",
              fmt::format("hour weights sum to {:g}, not 8760", total));
    } else {
      for (int m = 0; m < kMonths; ++m) {
        if (std::abs(month_sum[m] - 24.0 * kMonthDays[m]) > 1e-6) {
          warning("TimeGrid", "", fmt::format("m={}", m + 1),
                  fmt::format("month weights sum to {:g}, not {}", month_sum[m],
                              24 * kMonthDays[m]));
        }
      }
    }
    for (int y = 0; y < years_; ++y) {
      if (!(t.discount[y] > 0.0 && t.discount[y] <= 1.0)) {
        error("TimeGrid", "", year_text(y), "discount factor outside (0, 1]");
      }
      if (y > 0 && t.discount[y] > t.discount[y - 1]) {
        error("TimeGrid", "", year_text(y), "discount factor increases");
      }
      if (!(t.year_weight[y] > 0.0)) {
        error("TimeGrid", "", year_text(y), "year weight must be positive");
      }
    }
  }

  void check_technologies() {
    std::set<std::string> seen;
    for (const auto& tech : model_.technologies) {
      if (!seen.insert(tech.id).second) {
        error("Technology", tech.id, "", "duplicate id");
      }
      auto eta_ok = [](double e) { return e > 0.0 && e <= 1.0; };
      if (!eta_ok(tech.efficiency)) {
        error("Technology", tech.id, "", "efficiency outside (0, 1]");
      }
      for (const auto& [node, values] : tech.node_efficiency) {
        if (!model_.electricity_node_index(node)) {
          error("Technology", tech.id, node, "efficiency for unknown node");
        }
        check_surface("Technology", tech.id, "efficiency " + node, values,
                      years_, eta_ok, "0 < eta <= 1");
      }
      if (!unit(tech.availability)) {
        error("Technology", tech.id, "", "availability outside [0, 1]");
      }
      if (!(tech.investment_cost >= 0.0)) {
        error("Technology", tech.id, "", "negative investment cost");
      }
      if (!(tech.carbon_content >= 0.0)) {
        error("Technology", tech.id, "", "negative carbon content");
      }
      if (!(tech.vom >= 0.0)) {
        error("Technology", tech.id, "", "negative variable O&M");
      }
      if (tech.kind == TechClass::kPsp && !(tech.capacity_power_factor > 0.0)) {
        error("Technology", tech.id, "", "pumped storage needs a positive CPF");
      }
      if (tech.kind == TechClass::kReservoir && !(tech.full_load_hours >= 0.0)) {
        error("Technology", tech.id, "", "negative full load hours");
      }
      if (tech.is_res() && tech.investable) {
        error("Technology", tech.id, "", "RES capacity is exogenous");
      }
    }
  }

  bool gas_capacity_possible(const ElectricityNode& node) const {
    for (const auto& tech : model_.technologies) {
      if (!tech.is_gas()) continue;
      if (model_.new_capacity_max(tech, node, years_ - 1) > 0.0) return true;
      auto it = node.existing.find(tech.id);
      if (it == node.existing.end()) continue;
      for (double v : it->second) {
        if (v > 0.0) return true;
      }
    }
    return false;
  }

  void check_electricity_nodes() {
    std::set<std::string> seen;
    for (const auto& node : model_.electricity_nodes) {
      const std::string type = "ElectricityNode";
      if (!seen.insert(node.id).second) error(type, node.id, "", "duplicate id");
      if (!(node.vola >= 0.0)) error(type, node.id, "", "negative VOLA");
      if (!unit(node.shed_max)) error(type, node.id, "", "SF_max outside [0, 1]");
      for (const auto& [tech_id, values] : node.existing) {
        auto k = model_.technology_index(tech_id);
        if (!k) {
          error(type, node.id, tech_id, "existing capacity for unknown technology");
          continue;
        }
        if (model_.technologies[*k].is_res()) {
          error(type, node.id, tech_id, "RES capacity belongs to the branches");
        }
        check_surface(type, node.id, "existing " + tech_id, values, years_,
                      nonneg, ">= 0");
      }
      for (const auto& [tech_id, values] : node.new_capacity_max) {
        auto k = model_.technology_index(tech_id);
        if (!k) {
          error(type, node.id, tech_id, "capacity limit for unknown technology");
          continue;
        }
        check_surface(type, node.id, "new_max " + tech_id, values, years_,
                      nonneg, ">= 0");
        if (!model_.technologies[*k].investable) {
          for (double v : values) {
            if (v != 0.0) {
              error(type, node.id, tech_id,
                    "non-investable technology with a positive new-capacity limit");
              break;
            }
          }
        }
      }
      for (const auto& [tech_id, values] : node.production_factor) {
        auto k = model_.technology_index(tech_id);
        if (!k || !model_.technologies[*k].is_res()) {
          error(type, node.id, tech_id, "production factor for a non-RES technology");
          continue;
        }
        check_surface(type, node.id, "PF " + tech_id, values, hours_, unit,
                      "0 <= PF <= 1");
      }
      if (gas_capacity_possible(node) && !model_.gas_node_index(node.id)) {
        error(type, node.id, "", "gas-fired capacity without a gas node of the same id");
      }
      if (!node.chp.empty()) {
        check_surface(type, node.id, "CHP", node.chp,
                      static_cast<std::size_t>(years_) * hours_, nonneg, ">= 0");
        check_chp(node);
      }
    }
  }

  void check_chp(const ElectricityNode& node) {
    if (node.chp.size() != static_cast<std::size_t>(years_) * hours_) return;
    double peak = 0.0;
    for (double v : node.chp) peak = std::max(peak, v);
    if (peak <= 0.0) return;
    if (!gas_capacity_possible(node)) {
      error("ElectricityNode", node.id, "",
            "CHP requirement without any gas-fired capacity");
      return;
    }
    for (int y = 0; y < years_; ++y) {
      double available = 0.0;
      bool unbounded = false;
      for (const auto& tech : model_.technologies) {
        if (!tech.is_gas()) continue;
        auto it = node.existing.find(tech.id);
        double cap = it == node.existing.end() ? 0.0 : it->second.at(y);
        const double extra = model_.new_capacity_max(tech, node, y);
        if (std::isinf(extra)) unbounded = true;
        available += (cap + (unbounded ? 0.0 : extra)) * tech.availability;
      }
      if (unbounded) continue;
      for (int t = 0; t < hours_; ++t) {
        if (node.chp[y * hours_ + t] > available + 1e-9) {
          warning("ElectricityNode", node.id,
                  fmt::format("{},t={}", year_text(y), t),
                  fmt::format("CHP {:g} exceeds available gas-fired capacity {:g}",
                              node.chp[y * hours_ + t], available));
          break;
        }
      }
    }
  }

  void check_electricity_arcs() {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& arc : model_.electricity_arcs) {
      const std::string id = arc.from + "->" + arc.to;
      if (!model_.electricity_node_index(arc.from) ||
          !model_.electricity_node_index(arc.to)) {
        error("ElectricityArc", id, "", "endpoint does not resolve");
      }
      if (arc.from == arc.to) error("ElectricityArc", id, "", "self loop");
      if (!seen.insert({arc.from, arc.to}).second) {
        error("ElectricityArc", id, "", "duplicate arc");
      }
      check_surface("ElectricityArc", id, "NTC", arc.ntc, years_, nonneg, ">= 0");
    }
  }

  void check_gas_nodes() {
    std::set<std::string> seen;
    const std::size_t monthly = static_cast<std::size_t>(years_) * kMonths;
    for (const auto& node : model_.gas_nodes) {
      const std::string type = "GasNode";
      if (!seen.insert(node.id).second) error(type, node.id, "", "duplicate id");
      if (!node.storage) continue;
      if (node.supply_only) {
        error(type, node.id, "", "supply-only node with storage");
      }
      const auto& st = *node.storage;
      check_surface(type, node.id, "WGV", st.working_volume, monthly, nonneg, ">= 0");
      check_surface(type, node.id, "ICAP", st.injection_cap, monthly, nonneg, ">= 0");
      check_surface(type, node.id, "WCAP", st.withdrawal_cap, monthly, nonneg, ">= 0");
      if (!(st.injection_cost >= 0.0) || !(st.withdrawal_cost >= 0.0)) {
        error(type, node.id, "", "negative storage cost");
      }
      if (!(st.loss >= 0.0 && st.loss < 1.0)) {
        error(type, node.id, "", "storage loss outside [0, 1)");
      }
      if (st.working_volume.size() == monthly && monthly > 0) {
        if (!(st.start_level >= 0.0 && st.start_level <= st.working_volume.front())) {
          error(type, node.id, "", "StLEVEL outside [0, WGV]");
        }
        if (!(st.end_level >= 0.0 && st.end_level <= st.working_volume.back())) {
          error(type, node.id, "", "EndLEVEL outside [0, WGV]");
        }
      }
    }
  }

  void check_gas_suppliers() {
    std::set<std::string> seen;
    const std::size_t monthly = static_cast<std::size_t>(years_) * kMonths;
    for (const auto& s : model_.gas_suppliers) {
      if (!seen.insert(s.id).second) error("GasSupplier", s.id, "", "duplicate id");
      if (!model_.gas_node_index(s.node)) {
        error("GasSupplier", s.id, s.node, "unknown gas node");
      }
      check_surface("GasSupplier", s.id, "PCAP", s.capacity, monthly, nonneg, ">= 0");
      if (!(s.cost >= 0.0)) error("GasSupplier", s.id, "", "negative PCOST");
    }
  }

  void check_gas_arcs() {
    std::set<std::pair<std::string, std::string>> seen;
    const std::size_t monthly = static_cast<std::size_t>(years_) * kMonths;
    for (const auto& arc : model_.gas_arcs) {
      const std::string type = "GasArc";
      const std::string id = arc.from + "->" + arc.to;
      if (!model_.gas_node_index(arc.from) || !model_.gas_node_index(arc.to)) {
        error(type, id, "", "endpoint does not resolve");
      }
      if (arc.from == arc.to) error(type, id, "", "self loop");
      if (!seen.insert({arc.from, arc.to}).second) error(type, id, "", "duplicate arc");
      check_surface(type, id, "ARCCAP", arc.capacity, years_, nonneg, ">= 0");
      if (!(arc.cost >= 0.0)) error(type, id, "", "negative TCOST");
      if (!unit(arc.take_or_pay)) error(type, id, "", "TOP outside [0, 1]");
      if (arc.contract.empty()) continue;
      check_surface(type, id, "LTC", arc.contract, monthly, nonneg, ">= 0");
      if (arc.contract.size() != monthly ||
          arc.capacity.size() != static_cast<std::size_t>(years_)) {
        continue;
      }
      bool any = false;
      for (std::size_t k = 0; k < monthly; ++k) {
        const double floor = arc.take_or_pay * arc.contract[k];
        any = any || floor > 0.0;
        const int y = static_cast<int>(k) / kMonths;
        if (floor > arc.capacity[y] + 1e-9) {
          error(type, id,
                fmt::format("{},m={}", year_text(y), k % kMonths + 1),
                fmt::format("TOP*LTC = {:g} exceeds ARCCAP = {:g}", floor,
                            arc.capacity[y]));
          break;
        }
      }
      if (any) {
        bool supplied = false;
        for (const auto& s : model_.gas_suppliers) supplied |= s.node == arc.from;
        if (!supplied) {
          error(type, id, "", "long-term contract without a supplier at its source");
        }
      }
    }
  }

  void check_branches() {
    if (model_.branches.empty()) {
      error("EnergyModel", "", "", "at least one scenario branch is required");
      return;
    }
    double total = 0.0;
    std::set<std::string> seen;
    for (const auto& b : model_.branches) {
      if (!seen.insert(b.id).second) error("ScenarioBranch", b.id, "", "duplicate id");
      if (b.id == kExpectedBranchId) {
        error("ScenarioBranch", b.id, "", "id is reserved for the expected branch");
      }
      if (!(b.probability >= 0.0 && b.probability <= 1.0)) {
        error("ScenarioBranch", b.id, "", "probability outside [0, 1]");
      }
      total += b.probability;
      check_branch(b);
    }
    if (std::abs(total - 1.0) > 1e-12) {
      error("EnergyModel", "", "", fmt::format("probabilities sum to {:g}", total));
    }
    for (std::size_t k = 1; k < model_.branches.size(); ++k) {
      const auto& a = model_.branches.front();
      const auto& b = model_.branches[k];
      if (a.res_capacity.size() != b.res_capacity.size() ||
          a.prices.fuel.size() != b.prices.fuel.size()) {
        error("ScenarioBranch", b.id, "", "index domain differs from branch " + a.id);
        continue;
      }
      for (const auto& entry : a.res_capacity) {
        if (!b.res_capacity.count(entry.first)) {
          error("ScenarioBranch", b.id, entry.first.first + "/" + entry.first.second,
                "RES capacity missing");
        }
      }
      for (const auto& entry : a.prices.fuel) {
        if (!b.prices.fuel.count(entry.first)) {
          error("ScenarioBranch", b.id, entry.first, "fuel price missing");
        }
      }
    }
  }

  void check_branch(const ScenarioBranch& b) {
    const std::string type = "ScenarioBranch";
    const std::size_t hourly = static_cast<std::size_t>(years_) * hours_;
    const std::size_t monthly = static_cast<std::size_t>(years_) * kMonths;
    for (const auto& node : model_.electricity_nodes) {
      auto it = b.electricity_demand.find(node.id);
      if (it == b.electricity_demand.end()) {
        error(type, b.id, node.id, "electricity demand missing");
        continue;
      }
      check_surface(type, b.id, "DEMAND " + node.id, it->second, hourly, nonneg,
                    ">= 0");
    }
    for (const auto& [id, v] : b.electricity_demand) {
      if (!model_.electricity_node_index(id)) {
        error(type, b.id, id, "electricity demand for unknown node");
      }
    }
    for (const auto& node : model_.gas_nodes) {
      auto it = b.gas_demand.find(node.id);
      if (it == b.gas_demand.end()) {
        if (!node.supply_only) error(type, b.id, node.id, "gas demand missing");
        continue;
      }
      check_surface(type, b.id, "NPGDEM " + node.id, it->second, monthly, nonneg,
                    ">= 0");
      if (node.supply_only) {
        for (double v : it->second) {
          if (v != 0.0) {
            error(type, b.id, node.id, "supply-only node with gas demand");
            break;
          }
        }
      }
    }
    for (const auto& [id, v] : b.gas_demand) {
      if (!model_.gas_node_index(id)) {
        error(type, b.id, id, "gas demand for unknown node");
      }
    }
    for (const auto& [key, values] : b.res_capacity) {
      auto k = model_.technology_index(key.first);
      if (!k || !model_.technologies[*k].is_res()) {
        error(type, b.id, key.first, "RES capacity for a non-RES technology");
      }
      if (!model_.electricity_node_index(key.second)) {
        error(type, b.id, key.second, "RES capacity for unknown node");
      }
      check_surface(type, b.id, "RES " + key.first + "/" + key.second, values,
                    years_, nonneg, ">= 0");
    }
    check_surface(type, b.id, "CO2", b.prices.co2, years_, nonneg, ">= 0");
    for (const auto& [fuel, values] : b.prices.fuel) {
      check_surface(type, b.id, "fuel " + fuel, values, years_, nonneg, ">= 0");
    }
    for (const auto& tech : model_.technologies) {
      if (tech.is_gas() || tech.fuel.empty()) continue;
      if (!b.prices.fuel.count(tech.fuel)) {
        error(type, b.id, tech.fuel,
              fmt::format("no price for fuel of technology {}", tech.id));
      }
    }
  }

  const EnergyModel& model_;
  int years_;
  int hours_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate(const EnergyModel& model) {
  return Checker(model).run();
}

}  // namespace egplan
