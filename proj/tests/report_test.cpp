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
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "egplan/io.hpp"
#include "egplan/report.hpp"
#include "egplan/stochastic.hpp"
#include "support/fixtures.hpp"

namespace egplan {
namespace {

namespace fs = std::filesystem;

const fs::path kToy = fs::path(EGPLAN_SOURCE_DIR) / "data" / "toy";

// Plain comma split; the toy tables hold no quoted cells.
std::vector<std::vector<std::string>> read_rows(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

const std::vector<std::string>* find_row(const std::vector<std::vector<std::string>>& rows,
                                         const std::vector<std::string>& key) {
  for (const auto& r : rows) {
    if (std::equal(key.begin(), key.end(), r.begin())) return &r;
  }
  return nullptr;
}

TEST(Quantile, MatchesLinearInterpolation) {
  const std::vector<double> v = {4.0, 1.0, 3.0, 2.0};
  EXPECT_DOUBLE_EQ(quantile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile(v, 0.75), 3.25);
  EXPECT_DOUBLE_EQ(quantile(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile({7.0}, 0.3), 7.0);
  EXPECT_THROW(quantile({}, 0.5), ModelError);
}

TEST(ResidualLoad, WithoutResEqualsDemand) {
  const auto m = testing::single_node({5.0, 6.0});
  EXPECT_EQ(residual_load(m, m.branches[1], 2030), std::vector<double>{6.0});
  auto coupled = testing::coupled_system();
  for (auto& b : coupled.branches) {
    for (auto& [k, v] : b.res_capacity) std::fill(v.begin(), v.end(), 0.0);
  }
  const auto r = residual_load(coupled, coupled.branches[0], 2030);
  const int H = coupled.time.num_hours();
  for (int t = 0; t < H; ++t) {
    EXPECT_EQ(r[t], coupled.branches[0].electricity_demand.at("A")[H + t] +
                        coupled.branches[0].electricity_demand.at("B")[H + t]);
  }
}

TEST(ResidualLoad, UnknownYearThrows) {
  const auto m = testing::coupled_system();
  EXPECT_THROW(residual_load(m, m.branches[0], 2025), ModelError);
  EXPECT_THROW(residual_load_stats(m, m.branches, 2040), ModelError);
}

// Recomputes the toy residual load straight from the CSV text.
TEST(ResidualLoad, ToyMatchesRecomputationFromCsv) {
  const auto demand = read_rows(kToy / "electricity_demand.csv");
  const auto res = read_rows(kToy / "res_capacity.csv");
  const auto pf = read_rows(kToy / "production_factor.csv");
  const std::vector<std::string> branches = {"EUCO", "ST", "DG"};
  const auto m = load_dataset(kToy);
  const auto stats = residual_load_stats(m, m.branches, 2030);
  ASSERT_EQ(stats.rows.size(), 3u);
  for (std::size_t s = 0; s < branches.size(); ++s) {
    std::vector<double> series;
    for (int h = 1; h <= 12; ++h) {
      double v = 0.0;
      for (const std::string n : {"A", "B"}) {
        v += std::stod(find_row(demand, {n, "2030", std::to_string(h)})->at(3 + s));
        v -= std::stod(find_row(res, {"wind", n, "2030"})->at(3 + s)) *
             std::stod(find_row(pf, {"wind", n, std::to_string(h)})->at(3));
      }
      series.push_back(v);
    }
    std::sort(series.begin(), series.end());
    const auto& row = stats.rows[s];
    EXPECT_EQ(row[0], branches[s]);
    const double q1 = series[2] + 0.75 * (series[3] - series[2]);
    const double med = 0.5 * (series[5] + series[6]);
    const double q3 = series[8] + 0.25 * (series[9] - series[8]);
    EXPECT_NEAR(std::stod(row[2]), series.front(), 1e-9);
    EXPECT_NEAR(std::stod(row[3]), q1, 1e-9);
    EXPECT_NEAR(std::stod(row[4]), med, 1e-9);
    EXPECT_NEAR(std::stod(row[5]), q3, 1e-9);
    EXPECT_NEAR(std::stod(row[6]), series.back(), 1e-9);
  }
  const auto series = residual_load_series(m, m.branches, 2030);
  EXPECT_EQ(series.rows.size(), 36u);
}

EnergyModel hull_model() {
  auto m = testing::single_node({5.0, 5.0, 5.0});
  m.time = TimeGrid::custom({2030}, {0}, {1.0}, 0.05);
  Technology coal;
  coal.id = "hard_coal";
  coal.fuel = "hard_coal";
  coal.efficiency = 0.46;
  coal.carbon_content = 0.34;
  Technology ccgt;
  ccgt.id = "ccgt";
  ccgt.kind = TechClass::kGasFired;
  ccgt.efficiency = 0.6;
  ccgt.carbon_content = 0.2;
  Technology nuclear;
  nuclear.id = "nuclear";
  nuclear.fuel = "nuclear";
  nuclear.efficiency = 0.33;
  m.technologies = {coal, ccgt, nuclear};
  m.gas_nodes = {GasNode{"N1", false, std::nullopt}};
  const std::vector<std::string> ids = {"EUCO", "ST", "DG"};
  for (int s = 0; s < 3; ++s) {
    auto& b = m.branches[s];
    b.id = ids[s];
    b.prices.fuel = {{"hard_coal", {s == 0 ? 15.47 : 9.71}}, {"nuclear", {1.69}}};
    b.prices.co2 = {s == 0 ? 27.0 : (s == 1 ? 84.3 : 50.0)};
  }
  return m;
}

TEST(HullPoints, HardCoalDotAndGasPrice) {
  const auto m = hull_model();
  GasPriceMap gas;
  for (const auto& b : m.branches) gas[{b.id, "N1", 2030}] = 20.0;
  const auto t = hull_points(m, m.branches, gas);
  // nuclear has no carbon content and is left out.
  ASSERT_EQ(t.rows.size(), 6u);
  std::map<std::pair<std::string, std::string>, double> dots;
  for (const auto& r : t.rows) dots[{r[1], r[3]}] = std::stod(r[4]);
  EXPECT_NEAR(dots.at({"hard_coal", "EUCO"}), 53.59, 5e-3);
  EXPECT_NEAR(dots.at({"ccgt", "ST"}), 20.0 / 0.6 + 0.2 * 84.3 / 0.6, 1e-9);
}

TEST(HullPoints, IdenticalBranchesCoincide) {
  auto m = hull_model();
  for (auto& b : m.branches) b.prices = m.branches[0].prices;
  GasPriceMap gas;
  for (const auto& b : m.branches) gas[{b.id, "N1", 2030}] = 20.0;
  const auto t = hull_points(m, m.branches, gas, {"hard_coal", "ccgt"});
  std::map<std::string, std::vector<std::string>> by_tech;
  for (const auto& r : t.rows) by_tech[r[1]].push_back(r[4]);
  for (const auto& [tech, v] : by_tech) {
    ASSERT_EQ(v.size(), 3u);
    EXPECT_EQ(v[0], v[1]);
    EXPECT_EQ(v[1], v[2]);
  }
}

TEST(HullPoints, MissingGasPriceAsksForSolve) {
  const auto m = hull_model();
  try {
    hull_points(m, m.branches, {});
    FAIL() << "expected ModelError";
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("run solve first"), std::string::npos);
  }
  EXPECT_THROW(hull_points(m, m.branches, {}, {"lignite"}), ModelError);
}

TEST(HullPoints, AnnualGasPriceWeighsMonthLength) {
  const auto m = hull_model();
  std::map<Key<4>, double> monthly;
  for (int mo = 0; mo < kMonths; ++mo) monthly[{0, mo, 0, 0}] = mo == 1 ? 100.0 : 10.0;
  monthly[{0, 0, 0, 1}] = 999.0;  // another branch position
  GasPriceMap out;
  add_annual_gas_prices(m, "EUCO", 0, monthly, &out);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NEAR(out.at({"EUCO", "N1", 2030}), (337.0 * 10.0 + 28.0 * 100.0) / 365.0, 1e-12);
}

TEST(Tables, EciuCsvMatchesReport) {
  const auto m = testing::coupled_system();
  const auto report = run_mode(m, {});
  const auto dir = fs::temp_directory_path() / "egplan_report_eciu";
  fs::remove_all(dir);
  ResultTables tables;
  tables.tables = {eciu_table({report}), decomposition_table({report})};
  write_results(tables, dir);

  const auto rows = read_rows(dir / "eciu.csv");
  ASSERT_EQ(rows.size(), 1 + 1 + report.references.size());
  EXPECT_EQ(rows[0][3], "nps[EUR]");
  const auto* ss = find_row(rows, {"all", "-", "SS"});
  ASSERT_NE(ss, nullptr);
  EXPECT_EQ(std::stod(ss->at(5)), report.ss);
  for (const auto& ref : report.references) {
    const auto* r = find_row(rows, {"all", "-", ref.reference});
    ASSERT_NE(r, nullptr) << ref.reference;
    EXPECT_EQ(std::stod(r->at(3)), ref.nps);
    EXPECT_EQ(std::stod(r->at(4)), ref.eev);
    EXPECT_EQ(std::stod(r->at(6)), ref.eciu.value);
    EXPECT_EQ(std::stod(r->at(7)), ref.eciu.percent);
  }

  const auto dec = read_rows(dir / "decomposition.csv");
  const double tol = 1e-6 * (1.0 + std::abs(report.ss));
  for (const auto& ref : report.references) {
    const auto* r = find_row(dec, {"all", "-", ref.reference});
    ASSERT_NE(r, nullptr);
    const double sum = std::stod(r->at(7)) + std::stod(r->at(8)) + std::stod(r->at(9));
    EXPECT_NEAR(std::stod(r->at(10)), sum, tol);
    EXPECT_EQ(std::stod(r->at(10)), ref.eev - report.ss);
  }
}

TEST(Tables, InvestmentAndPriceRowsAreLabelled) {
  const auto m = testing::coupled_system(1);
  const auto naive = solve_naive(m, "EUCO");
  const auto inv = investment_table(m, {{"EUCO", naive.cap}});
  EXPECT_EQ(inv.rows.size(), naive.cap.size());
  for (const auto& r : inv.rows) EXPECT_EQ(r[0], "EUCO");
  const auto gas = gas_price_table(m, "EUCO", {"EUCO"}, naive.gas_price);
  EXPECT_EQ(gas.rows.size(), naive.gas_price.size());
  EXPECT_THROW(gas_price_table(m, "EUCO", {}, naive.gas_price), ModelError);
  const auto costs = cost_table({{"EUCO", naive.costs}});
  EXPECT_EQ(std::stod(costs.rows[0][8]), naive.costs.total());
}

}  // namespace
}  // namespace egplan
