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

// Domain types of the coupled electricity and gas system. Every surface that
// varies per representative year is a vector indexed by year position; hourly
// surfaces are indexed y * H + t and monthly surfaces y * 12 + m.

#ifndef EGPLAN_MODEL_HPP_
#define EGPLAN_MODEL_HPP_

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace egplan {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMonths = 12;
inline constexpr double kHoursPerYear = 8760.0;
inline constexpr std::array<int, kMonths> kMonthDays = {31, 28, 31, 30, 31, 30,
                                                        31, 31, 30, 31, 30, 31};

struct TimeGrid {
  std::vector<int> years;
  std::vector<int> hour_month;       // tm: representative hour -> month 0..11
  std::vector<double> hour_weight;   // real hours represented by each hour
  std::vector<double> year_weight;   // calendar years represented
  std::vector<double> discount;      // DF per year
  double discount_rate = 0.05;

  int num_years() const { return static_cast<int>(years.size()); }
  int num_hours() const { return static_cast<int>(hour_month.size()); }
  std::optional<int> year_index(int year) const;

  // Spreads `hours` over the months in proportion to month length (largest
  // remainder) and gives every hour of month m the weight
  // real_hours(m) / count(m). Needs hours >= 12.
  static TimeGrid make(std::vector<int> years, int hours,
                       double discount_rate = 0.05,
                       std::vector<double> year_weight = {});

  // Explicit hour map and weights. Empty year_weight means the gap to the
  // next representative year, with 1 for the last.
  static TimeGrid custom(std::vector<int> years, std::vector<int> hour_month,
                         std::vector<double> hour_weight,
                         double discount_rate = 0.05,
                         std::vector<double> year_weight = {});

  bool operator==(const TimeGrid&) const = default;
};

enum class TechClass { kThermal, kGasFired, kRes, kPsp, kReservoir };

std::string to_string(TechClass c);
std::optional<TechClass> parse_tech_class(const std::string& s);

struct Technology {
  std::string id;
  TechClass kind = TechClass::kThermal;
  std::string fuel;                // key into the branch fuel prices; empty = free
  double efficiency = 1.0;         // eta, fraction
  // Optional per-node overrides of eta, one value per year.
  std::map<std::string, std::vector<double>> node_efficiency;
  double availability = 1.0;       // AF
  double carbon_content = 0.0;     // CC, tCO2/MWh_th
  double investment_cost = 0.0;    // IC, EUR/MW_el per year
  double capacity_power_factor = 0.0;  // CPF, h
  double full_load_hours = 0.0;        // FLH, h
  double vom = 0.0;                    // EUR/MWh_el
  bool investable = false;

  double eta(const std::string& node, int y) const;
  bool is_gas() const { return kind == TechClass::kGasFired; }
  bool is_res() const { return kind == TechClass::kRes; }

  bool operator==(const Technology&) const = default;
};

struct ElectricityNode {
  std::string id;
  double vola = 0.0;                    // EUR/MWh_el
  double shed_max = 0.0;                // SF_max, fraction of demand
  std::vector<double> chp;              // MW_el, y * H + t; empty = none
  // Existing capacity of non-RES technologies, MW_el per year. RES capacity
  // is a branch surface.
  std::map<std::string, std::vector<double>> existing;
  // Ceiling on cumulative new capacity, MW_el per year. Missing entries are
  // unbounded for investable technologies and zero otherwise.
  std::map<std::string, std::vector<double>> new_capacity_max;
  // Hourly production factor of RES technologies, indexed by t.
  std::map<std::string, std::vector<double>> production_factor;

  bool operator==(const ElectricityNode&) const = default;
};

struct ElectricityArc {
  std::string from;
  std::string to;
  std::vector<double> ntc;  // MW_el per year

  bool operator==(const ElectricityArc&) const = default;
};

struct GasStorage {
  std::vector<double> working_volume;     // WGV, MWh_th, y * 12 + m
  std::vector<double> injection_cap;      // ICAP, MWh_th/month
  std::vector<double> withdrawal_cap;     // WCAP, MWh_th/month
  double injection_cost = 0.0;            // EUR/MWh_th
  double withdrawal_cost = 0.0;           // EUR/MWh_th
  double start_level = 0.0;               // MWh_th
  double end_level = 0.0;                 // MWh_th
  double loss = 0.0;                      // fraction of injection lost

  bool operator==(const GasStorage&) const = default;
};

struct GasNode {
  std::string id;
  bool supply_only = false;
  std::optional<GasStorage> storage;

  bool operator==(const GasNode&) const = default;
};

struct GasSupplier {
  std::string id;
  std::string node;
  std::vector<double> capacity;  // PCAP, MWh_th/month, y * 12 + m
  double cost = 0.0;             // PCOST, EUR/MWh_th

  bool operator==(const GasSupplier&) const = default;
};

struct GasArc {
  std::string from;
  std::string to;
  std::vector<double> capacity;   // ARCCAP, MWh_th/month per year
  double cost = 0.0;              // TCOST, EUR/MWh_th
  std::vector<double> contract;   // LTC, MWh_th/month, y * 12 + m; empty = none
  double take_or_pay = 0.70;      // TOP, fraction

  bool operator==(const GasArc&) const = default;
};

struct PriceSet {
  std::map<std::string, std::vector<double>> fuel;  // EUR/MWh_th per year
  std::vector<double> co2;                          // EUR/t per year

  bool operator==(const PriceSet&) const = default;
};

using TechNode = std::pair<std::string, std::string>;

struct ScenarioBranch {
  std::string id;
  double probability = 1.0;
  std::map<std::string, std::vector<double>> gas_demand;          // y*12+m
  std::map<std::string, std::vector<double>> electricity_demand;  // y*H+t
  std::map<TechNode, std::vector<double>> res_capacity;           // per year
  PriceSet prices;

  bool operator==(const ScenarioBranch&) const = default;
};

inline constexpr const char* kExpectedBranchId = "EVP";

enum class UncertainParameter {
  kGasDemand,
  kElectricityDemand,
  kResCapacity,
  kFuelPrice,
  kCo2Price,
};

inline constexpr std::array<UncertainParameter, 5> kUncertainParameters = {
    UncertainParameter::kGasDemand, UncertainParameter::kElectricityDemand,
    UncertainParameter::kResCapacity, UncertainParameter::kFuelPrice,
    UncertainParameter::kCo2Price};

std::string to_string(UncertainParameter p);
std::optional<UncertainParameter> parse_uncertain_parameter(
    const std::string& s);

struct ModelOptions {
  // Credit g_psp / eta to the balance and debit g from the basin, as written
  // in the original formulation. Off: credit g, debit g / eta.
  bool literal_psp_balance = false;

  bool operator==(const ModelOptions&) const = default;
};

struct EnergyModel {
  TimeGrid time;
  std::vector<Technology> technologies;
  std::vector<ElectricityNode> electricity_nodes;
  std::vector<ElectricityArc> electricity_arcs;
  std::vector<GasNode> gas_nodes;
  std::vector<GasSupplier> gas_suppliers;
  std::vector<GasArc> gas_arcs;
  std::vector<ScenarioBranch> branches;
  ModelOptions options;

  std::optional<int> technology_index(const std::string& id) const;
  std::optional<int> electricity_node_index(const std::string& id) const;
  std::optional<int> gas_node_index(const std::string& id) const;
  std::optional<int> branch_index(const std::string& id) const;
  const ScenarioBranch& branch(const std::string& id) const;

  // Existing capacity of tech at node in year y under branch: the branch RES
  // surface for RES technologies, the node table otherwise. Zero if absent.
  double existing_capacity(const Technology& tech, const ElectricityNode& node,
                           int y, const ScenarioBranch& branch) const;
  // Zero for non-investable technologies, infinity if not limited.
  double new_capacity_max(const Technology& tech, const ElectricityNode& node,
                          int y) const;

  bool operator==(const EnergyModel&) const = default;
};

enum class Severity { kError, kWarning };

struct Diagnostic {
  Severity severity = Severity::kError;
  std::string type;   // e.g. "GasArc"
  std::string id;     // e.g. "RU->DE"
  std::string index;  // e.g. "y=2030,m=1"; may be empty
  std::string message;
};

std::string to_string(const Diagnostic& d);

std::vector<Diagnostic> validate(const EnergyModel& model);
bool has_errors(const std::vector<Diagnostic>& diagnostics);

// Probability-weighted mean of every surface; id "EVP", probability 1.
ScenarioBranch expected_branch(const std::vector<ScenarioBranch>& branches);

// Branch taking `parameter` from `varying` and every other surface from
// `known`. Id and probability come from `varying`.
ScenarioBranch compose_branch(const ScenarioBranch& varying,
                              const ScenarioBranch& known,
                              UncertainParameter parameter);

// EUR/MWh_el. Gas-fired technologies get only the CO2 and O&M terms since
// their fuel is priced by the gas system.
double variable_cost(const Technology& tech, const std::string& node, int y,
                     const ScenarioBranch& branch);

}  // namespace egplan

#endif  // EGPLAN_MODEL_HPP_
