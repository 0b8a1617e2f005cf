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

// Small programmatic models shared by the tests.

#ifndef EGPLAN_TESTS_SUPPORT_FIXTURES_HPP_
#define EGPLAN_TESTS_SUPPORT_FIXTURES_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "egplan/model.hpp"

namespace egplan::testing {

// One node, one investable plant (IC 10, VC 1), one hour of weight 1,
// VOLA 1000, SF_max 0.2. Demand per branch as given.
inline EnergyModel single_node(std::vector<double> demands = {5.0},
                               double investment_cost = 10.0) {
  EnergyModel m;
  m.time = TimeGrid::custom({2030}, {0}, {1.0}, 0.05);
  Technology plant;
  plant.id = "base";
  plant.kind = TechClass::kThermal;
  plant.fuel = "fuel";
  plant.efficiency = 1.0;
  plant.availability = 1.0;
  plant.investment_cost = investment_cost;
  plant.investable = true;
  m.technologies.push_back(plant);
  ElectricityNode node;
  node.id = "N1";
  node.vola = 1000.0;
  node.shed_max = 0.2;
  m.electricity_nodes.push_back(node);
  for (std::size_t k = 0; k < demands.size(); ++k) {
    ScenarioBranch b;
    b.id = "B" + std::to_string(k + 1);
    b.probability = 1.0 / static_cast<double>(demands.size());
    b.electricity_demand["N1"] = {demands[k]};
    b.prices.fuel["fuel"] = {1.0};
    b.prices.co2 = {0.0};
    m.branches.push_back(b);
  }
  return m;
}

// Two electricity nodes A and B, a gas network with an exporter X, gas
// storage at B, a take-or-pay contract on X->A, CHP at A, pumped storage and
// a reservoir. Years 2020 and 2030, 12 hours.
inline EnergyModel coupled_system(int branches = 3) {
  EnergyModel m;
  const int H = 12;
  m.time = TimeGrid::make({2020, 2030}, H, 0.05);
  const int Y = 2;

  auto tech = [](std::string id, TechClass kind, std::string fuel, double eta,
                 double cc, double ic, bool investable) {
    Technology t;
    t.id = std::move(id);
    t.kind = kind;
    t.fuel = std::move(fuel);
    t.efficiency = eta;
    t.carbon_content = cc;
    t.investment_cost = ic;
    t.investable = investable;
    t.availability = 0.95;
    return t;
  };
  m.technologies.push_back(tech("coal", TechClass::kThermal, "hard_coal", 0.42, 0.34, 150000, true));
  m.technologies.push_back(tech("ccgt", TechClass::kGasFired, "", 0.58, 0.2, 80000, true));
  m.technologies.push_back(tech("ocgt", TechClass::kGasFired, "", 0.38, 0.2, 45000, true));
  m.technologies.push_back(tech("wind", TechClass::kRes, "", 1.0, 0.0, 0, false));
  auto psp = tech("psp", TechClass::kPsp, "", 0.8, 0.0, 0, false);
  psp.capacity_power_factor = 6.0;
  m.technologies.push_back(psp);
  auto res = tech("reservoir", TechClass::kReservoir, "", 1.0, 0.0, 0, false);
  res.full_load_hours = 2500.0;
  m.technologies.push_back(res);

  ElectricityNode a;
  a.id = "A";
  a.vola = 3000.0;
  a.shed_max = 0.25;
  a.existing["coal"] = {300.0, 150.0};
  a.existing["ccgt"] = {200.0, 200.0};
  a.existing["psp"] = {50.0, 50.0};
  a.new_capacity_max["coal"] = {100.0, 100.0};
  a.chp.assign(Y * H, 60.0);
  a.production_factor["wind"].resize(H);
  ElectricityNode b;
  b.id = "B";
  b.vola = 3000.0;
  b.shed_max = 0.25;
  b.existing["reservoir"] = {120.0, 120.0};
  b.existing["ocgt"] = {50.0, 50.0};
  b.production_factor["wind"].resize(H);
  for (int t = 0; t < H; ++t) {
    a.production_factor["wind"][t] = 0.2 + 0.5 * std::abs(std::sin(0.7 * t));
    b.production_factor["wind"][t] = 0.15 + 0.6 * std::abs(std::cos(0.5 * t));
  }
  m.electricity_nodes = {a, b};
  m.electricity_arcs = {{"A", "B", {150.0, 150.0}}, {"B", "A", {150.0, 150.0}}};

  GasNode ga{"A", false, std::nullopt};
  GasNode gb{"B", false, std::nullopt};
  GasStorage st;
  st.working_volume.assign(Y * kMonths, 60000.0);
  st.injection_cap.assign(Y * kMonths, 20000.0);
  st.withdrawal_cap.assign(Y * kMonths, 25000.0);
  st.injection_cost = 0.5;
  st.withdrawal_cost = 0.3;
  st.start_level = 20000.0;
  st.end_level = 20000.0;
  st.loss = 0.01;
  gb.storage = st;
  GasNode gx{"X", true, std::nullopt};
  m.gas_nodes = {ga, gb, gx};
  GasSupplier sx{"X_prod", "X", std::vector<double>(Y * kMonths, 900000.0), 18.0};
  GasSupplier sa{"A_prod", "A", std::vector<double>(Y * kMonths, 30000.0), 24.0};
  m.gas_suppliers = {sx, sa};
  GasArc xa;
  xa.from = "X";
  xa.to = "A";
  xa.capacity = {800000.0, 800000.0};
  xa.cost = 1.5;
  xa.contract.assign(Y * kMonths, 100000.0);
  xa.take_or_pay = 0.7;
  GasArc ab{"A", "B", {500000.0, 500000.0}, 0.8, {}, 0.7};
  GasArc ba{"B", "A", {200000.0, 200000.0}, 0.8, {}, 0.7};
  m.gas_arcs = {xa, ab, ba};

  const std::vector<std::string> ids = {"EUCO", "ST", "DG"};
  for (int s = 0; s < branches; ++s) {
    ScenarioBranch br;
    br.id = s < 3 ? ids[s] : "S" + std::to_string(s);
    br.probability = 1.0 / branches;
    const double scale = 1.0 + 0.08 * s;
    for (const char* n : {"A", "B"}) {
      auto& d = br.electricity_demand[n];
      for (int y = 0; y < Y; ++y) {
        for (int t = 0; t < H; ++t) {
          const double base = std::string(n) == "A" ? 520.0 : 260.0;
          d.push_back(scale * base * (1.0 + 0.1 * y) * (1.0 + 0.25 * std::sin(0.9 * t)));
        }
      }
    }
    for (const char* c : {"A", "B"}) {
      auto& d = br.gas_demand[c];
      for (int y = 0; y < Y; ++y) {
        for (int mo = 0; mo < kMonths; ++mo) {
          const double winter = 1.0 + 0.4 * std::cos(2.0 * M_PI * mo / 12.0);
          d.push_back((2.0 - 0.3 * s) * 40000.0 * winter);
        }
      }
    }
    br.gas_demand["X"].assign(Y * kMonths, 0.0);
    br.res_capacity[{"wind", "A"}] = {200.0 + 20 * s, 260.0 + 40 * s};
    br.res_capacity[{"wind", "B"}] = {100.0, 140.0 + 30 * s};
    br.prices.fuel["hard_coal"] = {8.27, 15.47 - 3.0 * s};
    br.prices.co2 = {18.0, 27.0 + 28.0 * s};
    m.branches.push_back(br);
  }
  return m;
}

}  // namespace egplan::testing

#endif  // EGPLAN_TESTS_SUPPORT_FIXTURES_HPP_
