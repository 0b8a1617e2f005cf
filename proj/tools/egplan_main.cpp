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

// egplan command line: solve, eciu, report, export.
// Exit codes: 0 optimal, 1 usage or data error, 2 infeasible or unbounded.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "egplan/builder.hpp"
#include "egplan/io.hpp"
#include "egplan/lp.hpp"
#include "egplan/model.hpp"
#include "egplan/report.hpp"
#include "egplan/stochastic.hpp"

namespace fs = std::filesystem;
using namespace egplan;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNotOptimal = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string dataset;
  std::string out;
  std::string scenario;
  bool stochastic = false;
  std::string mode = "all";
  std::string param;
  std::string known;
  bool all_cells = false;
  std::optional<int> year;
  std::optional<double> tol_feas;
  std::optional<double> tol_opt;
  std::uint64_t seed = 0;
};

struct Context {
  EnergyModel model;
  DatasetInfo info;
  AnalysisOptions options;
};

Context load(const RunConfig& cfg) {
  Context c;
  c.model = load_dataset(cfg.dataset, &c.info);
  for (const auto& w : c.info.warnings) fmt::print(stderr, "warning: {}\n", to_string(w));
  if (cfg.tol_feas) c.options.tolerances.feasibility = *cfg.tol_feas;
  if (cfg.tol_opt) c.options.tolerances.optimality = *cfg.tol_opt;
  return c;
}

std::map<std::string, std::string> metadata(const RunConfig& cfg, const Context& c,
                                            const std::string& command) {
  const auto& tol = c.options.tolerances;
  return {{"command", command},
          {"dataset", c.info.name},
          {"dataset_root", fs::absolute(c.info.root).lexically_normal().string()},
          {"dataset_hash", c.info.hash},
          {"tol_feasibility", format_number(tol.feasibility)},
          {"tol_optimality", format_number(tol.optimality)},
          {"tol_complementarity", format_number(tol.complementarity)},
          {"refactor_interval", std::to_string(tol.refactor_interval)},
          {"decompose_eev", c.options.decompose_eev ? "true" : "false"},
          {"literal_psp_balance", c.model.options.literal_psp_balance ? "true" : "false"},
          {"seed", std::to_string(cfg.seed)}};
}

std::string available(const EnergyModel& m) {
  std::vector<std::string> ids;
  for (const auto& b : m.branches) ids.push_back(b.id);
  ids.push_back(kExpectedBranchId);
  return fmt::format("{}", fmt::join(ids, ", "));
}

void require_scenario(const EnergyModel& m, const std::string& id) {
  if (id != kExpectedBranchId && !m.branch_index(id)) {
    throw UsageError(fmt::format("unknown scenario '{}'; available: {}", id, available(m)));
  }
}

ModeSpec mode_spec(const RunConfig& cfg, const EnergyModel& m) {
  ModeSpec spec;
  if (cfg.mode == "all") {
    if (!cfg.param.empty() || !cfg.known.empty()) {
      throw UsageError("--param and --known need --mode isolated");
    }
    return spec;
  }
  spec.mode = Mode::kIsolated;
  if (cfg.param.empty() || cfg.known.empty()) {
    throw UsageError("--mode isolated needs --param and --known (or --all-cells)");
  }
  spec.parameter = parse_uncertain_parameter(cfg.param);
  if (!spec.parameter) {
    throw UsageError(fmt::format(
        "unknown parameter '{}'; one of gas_demand, electricity_demand, res_capacity, "
        "fuel_price, co2_price",
        cfg.param));
  }
  require_scenario(m, cfg.known);
  spec.known_path = cfg.known;
  return spec;
}

// Plan names carry the isolated cell so several cells share one file.
std::string plan_label(const ModeSpec& spec, const std::string& name) {
  if (spec.mode == Mode::kAllParameters) return name;
  return fmt::format("{}:{}:{}", mode_label(spec), known_label(spec), name);
}

void append(ResultTable& into, const ResultTable& from) {
  into.rows.insert(into.rows.end(), from.rows.begin(), from.rows.end());
}

void print_written(const std::vector<fs::path>& paths) {
  for (const auto& p : paths) fmt::print("wrote {}\n", p.string());
}

int cmd_solve(const RunConfig& cfg) {
  if (cfg.stochastic == !cfg.scenario.empty()) {
    throw UsageError("solve needs exactly one of --scenario or --stochastic");
  }
  auto c = load(cfg);
  ResultTables out;
  out.metadata = metadata(cfg, c, "solve");
  if (cfg.stochastic) {
    const auto ss = solve_stochastic(c.model, c.model.branches, c.options);
    out.tables = {investment_table(c.model, {{"SS", ss.cap}}), cost_table({{"SS", ss.costs}}),
                  electricity_price_table(c.model, "SS", ss.branch_ids, ss.electricity_price),
                  gas_price_table(c.model, "SS", ss.branch_ids, ss.gas_price)};
    out.metadata["objective"] = format_number(ss.ss);
    fmt::print("SS = {}\n", format_number(ss.ss));
  } else {
    require_scenario(c.model, cfg.scenario);
    const auto naive = solve_naive(c.model, cfg.scenario, c.options);
    const std::vector<std::string> ids = {naive.reference};
    out.tables = {investment_table(c.model, {{naive.reference, naive.cap}}),
                  cost_table({{naive.reference, naive.costs}}),
                  electricity_price_table(c.model, naive.reference, ids, naive.electricity_price),
                  gas_price_table(c.model, naive.reference, ids, naive.gas_price)};
    out.metadata["scenario"] = naive.reference;
    out.metadata["objective"] = format_number(naive.nps);
    fmt::print("NPS({}) = {}\n", naive.reference, format_number(naive.nps));
  }
  out.metadata["stochastic"] = cfg.stochastic ? "true" : "false";
  print_written(write_results(out, cfg.out));
  return kOk;
}

int cmd_eciu(const RunConfig& cfg) {
  auto c = load(cfg);
  std::vector<UncertaintyReport> reports;
  if (cfg.all_cells) {
    if (cfg.mode != "isolated") throw UsageError("--all-cells needs --mode isolated");
    if (!cfg.param.empty() || !cfg.known.empty()) {
      throw UsageError("--all-cells replaces --param and --known");
    }
    reports = run_all_cells(c.model, c.options);
  } else {
    reports.push_back(run_mode(c.model, mode_spec(cfg, c.model), c.options));
  }

  std::vector<std::pair<std::string, CapacityPlan>> plans;
  std::vector<std::pair<std::string, CostBreakdown>> costs;
  ResultTable gas{"gas_prices", {}, 5, {}};
  for (const auto& r : reports) {
    plans.emplace_back(plan_label(r.spec, "SS"), r.ss_cap);
    costs.emplace_back(plan_label(r.spec, "SS"), r.ss_costs);
    for (const auto& ref : r.references) {
      const auto label = plan_label(r.spec, ref.reference);
      plans.emplace_back(label, ref.cap);
      costs.emplace_back(plan_label(r.spec, "EEV_" + ref.reference), ref.eev_costs);
      const auto t = gas_price_table(c.model, label, {ref.reference}, ref.gas_price);
      gas.header = t.header;
      append(gas, t);
    }
    for (const auto& ref : r.references) {
      fmt::print("{:<24} {:<6} NPS {:>14.6g}  EEV {:>14.6g}  ECIU {:>12.6g} ({:.2f}%)\n",
                 fmt::format("{}/{}", mode_label(r.spec), known_label(r.spec)),
                 ref.reference, ref.nps, ref.eev, ref.eciu.value, ref.eciu.percent);
    }
  }
  ResultTables out;
  out.tables = {eciu_table(reports), decomposition_table(reports),
                investment_table(c.model, plans), cost_table(costs)};
  if (!gas.header.empty()) out.tables.push_back(gas);
  out.metadata = metadata(cfg, c, "eciu");
  out.metadata["mode"] = cfg.mode;
  out.metadata["cells"] = std::to_string(reports.size());
  out.metadata["eciu_tolerance"] = "1e-6*(1+|SS|)";
  out.metadata["gas_prices"] = "duals of the naive solve of each reference";
  print_written(write_results(out, cfg.out));
  return kOk;
}

// Annual gas prices of the naive solves recorded in <out>/gas_prices.csv.
GasPriceMap read_gas_prices(const EnergyModel& m, const ModeSpec& spec,
                            const std::vector<ScenarioBranch>& branches, const fs::path& file) {
  GasPriceMap out;
  if (!fs::exists(file)) return out;
  const auto t = read_result_table(file);
  auto col = [&t](const std::string& h) {
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      if (t.header[c] == h) return c;
    }
    throw DataError(fmt::format("{}: missing column '{}'", t.name, h));
  };
  const auto plan = col("plan"), branch = col("branch"), node = col("node"), year = col("year"),
             month = col("month"), price = col("price[EUR/MWh_th]");
  for (const auto& b : branches) {
    std::map<Key<4>, double> monthly;
    for (const auto& r : t.rows) {
      if (r[plan] != plan_label(spec, b.id) || r[branch] != b.id) continue;
      auto n = m.gas_node_index(r[node]);
      auto y = m.time.year_index(std::stoi(r[year]));
      if (!n || !y) continue;
      monthly[{*n, std::stoi(r[month]) - 1, *y, 0}] = std::stod(r[price]);
    }
    add_annual_gas_prices(m, b.id, 0, monthly, &out);
  }
  return out;
}

int cmd_report(const RunConfig& cfg) {
  auto c = load(cfg);
  const auto spec = mode_spec(cfg, c.model);
  const auto branches = mode_branches(c.model, spec);
  std::vector<int> years = c.model.time.years;
  if (cfg.year) years = {*cfg.year};

  ResultTable series{"residual_load", {}, 3, {}};
  ResultTable stats{"residual_load_stats", {}, 2, {}};
  for (int y : years) {
    auto s = residual_load_series(c.model, branches, y);
    auto q = residual_load_stats(c.model, branches, y);
    series.header = s.header;
    stats.header = q.header;
    append(series, s);
    append(stats, q);
  }
  const auto gas_file = fs::path(cfg.out) / "gas_prices.csv";
  ResultTable hull;
  try {
    hull = hull_points(c.model, branches, read_gas_prices(c.model, spec, branches, gas_file));
  } catch (const ModelError& e) {
    throw UsageError(fmt::format("{} (looked in {}; `egplan eciu` with the same --mode, "
                                 "--param, --known and --out writes it)",
                                 e.what(), gas_file.string()));
  }
  ResultTables out;
  out.tables = {series, stats, hull};
  out.metadata = metadata(cfg, c, "report");
  out.metadata["mode"] = cfg.mode;
  if (spec.parameter) {
    out.metadata["parameter"] = cfg.param;
    out.metadata["known"] = cfg.known;
  }
  out.metadata["hull_gas_price"] =
      "month-length weighted mean of the naive-solve gas balance duals at the consuming node";
  out.metadata["residual_load"] = "demand minus RES capacity times production factor, all nodes";
  print_written(write_results(out, cfg.out));
  return kOk;
}

int cmd_export(const RunConfig& cfg) {
  if (cfg.stochastic == !cfg.scenario.empty()) {
    throw UsageError("export needs exactly one of --scenario or --stochastic");
  }
  auto c = load(cfg);
  if (c.model.branches.empty()) throw UsageError("dataset declares no branches");
  BuildOptions opts;
  if (cfg.stochastic) {
    opts.branches = c.model.branches;
  } else {
    require_scenario(c.model, cfg.scenario);
    auto b = cfg.scenario == kExpectedBranchId ? expected_branch(c.model.branches)
                                               : c.model.branch(cfg.scenario);
    b.probability = 1.0;
    opts.branches = {b};
  }
  const auto built = build(c.model, opts);
  fs::create_directories(cfg.out);
  const auto mps = fs::path(cfg.out) / "problem.mps";
  {
    std::ofstream f(mps, std::ios::binary);
    f << lp::export_mps(built.lp);
    if (!f) throw DataError(fmt::format("{}: write failed", mps.string()));
  }
  ResultTable names{"mps_names", {"name", "mps_name"}, 1, {}};
  for (const auto& [name, alias] : lp::mps_name_map(built.lp)) names.add_row({name, alias});
  ResultTables out;
  out.tables = {names};
  out.metadata = metadata(cfg, c, "export");
  out.metadata["problem"] = cfg.stochastic ? "deterministic equivalent" : cfg.scenario;
  out.metadata["rows"] = std::to_string(built.lp.num_rows());
  out.metadata["columns"] = std::to_string(built.lp.num_variables());
  auto written = write_results(out, cfg.out);
  written.insert(written.begin(), mps);
  print_written(written);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic gas-electricity capacity planning: naive, stochastic and "
               "EEV solves, ECIU tables and plot-ready reports."};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&cfg](CLI::App* sub, bool with_out) {
    sub->add_option("--dataset", cfg.dataset, "Dataset directory")
        ->envname("EGPLAN_DATASET")
        ->required();
    if (with_out) sub->add_option("--out", cfg.out, "Output directory")->required();
    sub->add_option("--tol-feas", cfg.tol_feas, "Primal feasibility tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol-opt", cfg.tol_opt, "Optimality (reduced cost) tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Seed recorded in run metadata");
  };
  auto mode_flags = [&cfg](CLI::App* sub) {
    sub->add_option("--mode", cfg.mode, "Scenario composition")
        ->check(CLI::IsMember({"all", "isolated"}));
    sub->add_option("--param", cfg.param,
                    "Uncertain parameter of an isolated cell: gas_demand, electricity_demand, "
                    "res_capacity, fuel_price, co2_price");
    sub->add_option("--known", cfg.known, "Known path of the other parameters: branch id or EVP");
  };

  auto* solve = app.add_subcommand("solve", "Solve a naive problem or the stochastic problem");
  common(solve, true);
  solve->add_option("--scenario", cfg.scenario, "Branch id or EVP");
  solve->add_flag("--stochastic", cfg.stochastic, "Solve the deterministic equivalent");

  auto* eciu = app.add_subcommand("eciu", "SS, NPS, EEV and ECIU per reference");
  common(eciu, true);
  mode_flags(eciu);
  eciu->add_flag("--all-cells", cfg.all_cells, "Every parameter x known path cell");

  auto* report = app.add_subcommand(
      "report", "Residual load statistics and variable-cost hull points");
  common(report, true);
  mode_flags(report);
  report->add_option("--year", cfg.year, "Only this representative year");

  auto* exp = app.add_subcommand("export", "Write the assembled LP as MPS");
  common(exp, true);
  exp->add_option("--scenario", cfg.scenario, "Branch id or EVP");
  exp->add_flag("--stochastic", cfg.stochastic, "Export the deterministic equivalent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(cfg);
    if (eciu->parsed()) return cmd_eciu(cfg);
    if (report->parsed()) return cmd_report(cfg);
    if (exp->parsed()) return cmd_export(cfg);
  } catch (const NotOptimalError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kNotOptimal;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsage;
  }
  return kUsage;
}
