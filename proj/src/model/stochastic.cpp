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

#include "egplan/stochastic.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace egplan {
namespace {

std::vector<double> recourse(const SolvedModel& s) {
  std::vector<double> out;
  for (const auto& bc : s.branch_costs) out.push_back(bc.total() - bc.investment);
  return out;
}

BuildOptions build_options(std::vector<ScenarioBranch> branches,
                           const AnalysisOptions& options) {
  BuildOptions b;
  b.branches = std::move(branches);
  b.gas_slack_penalty = options.gas_slack_penalty;
  return b;
}

// Re-solves with every node allowed to shed its whole demand and returns the
// first (branch, node, hour) whose shedding breaks the real limit.
std::string shedding_excess(const EnergyModel& model, const BuildOptions& options,
                            const lp::Tolerances& tol) {
  EnergyModel relaxed = model;
  for (auto& n : relaxed.electricity_nodes) n.shed_max = 1.0;
  SolvedModel solved;
  try {
    solved = solve_model(relaxed, options, tol);
  } catch (const NotOptimalError&) {
    return "";
  }
  const int H = model.time.num_hours();
  for (const auto& [k, v] : solved.values(solved.index.shed)) {
    const auto& node = model.electricity_nodes[k[0]];
    const auto& branch = options.branches[k[3]];
    const double d = branch.electricity_demand.at(node.id)[k[2] * H + k[1]];
    if (v > node.shed_max * d + 1e-6 * (1.0 + d)) {
      return fmt::format("branch {} node {} hour {} year {} (shed {:.6g} of {:.6g} > SF_max {:g})",
                         branch.id, node.id, k[1] + 1, model.time.years[k[2]], v, d,
                         node.shed_max);
    }
  }
  return "";
}

// solve_model with an infeasibility message that names the exhausted
// shedding limit or, failing that, the validation warnings.
SolvedModel solve_explained(const EnergyModel& model, const BuildOptions& options,
                            const lp::Tolerances& tol, const std::string& what) {
  try {
    return solve_model(model, options, tol);
  } catch (const NotOptimalError& e) {
    if (e.status() != lp::SolveStatus::kInfeasible) throw;
    const auto where = shedding_excess(model, options, tol);
    if (!where.empty()) {
      throw NotOptimalError(e.status(),
                            what + " is infeasible: shedding limit exhausted at " + where);
    }
    std::string msg = what + " is infeasible";
    for (const auto& d : validate(model)) msg += "\n  hint: " + to_string(d);
    throw NotOptimalError(e.status(), msg);
  }
}

}  // namespace

void SolveQuality::add(const SolvedModel& s) {
  ++solves;
  primal_infeasibility = std::max(primal_infeasibility, s.residuals.primal_infeasibility);
  dual_infeasibility = std::max(dual_infeasibility, s.residuals.dual_infeasibility);
  complementary_slackness =
      std::max(complementary_slackness, s.residuals.complementary_slackness);
  balance_residual = std::max(balance_residual, s.balance_residual);
}

void SolveQuality::merge(const SolveQuality& q) {
  solves += q.solves;
  primal_infeasibility = std::max(primal_infeasibility, q.primal_infeasibility);
  dual_infeasibility = std::max(dual_infeasibility, q.dual_infeasibility);
  complementary_slackness = std::max(complementary_slackness, q.complementary_slackness);
  balance_residual = std::max(balance_residual, q.balance_residual);
}

double SolveQuality::worst_kernel() const {
  return std::max({primal_infeasibility, dual_infeasibility, complementary_slackness});
}

NaiveResult solve_naive(const EnergyModel& model, const ScenarioBranch& reference,
                        const AnalysisOptions& options) {
  ScenarioBranch b = reference;
  b.probability = 1.0;
  const auto solved = solve_explained(model, build_options({b}, options), options.tolerances,
                                      "naive problem " + reference.id);
  NaiveResult out;
  out.reference = reference.id;
  out.nps = solved.objective;
  out.cap = solved.cap;
  out.costs = solved.costs;
  out.electricity_price = solved.electricity_price;
  out.gas_price = solved.gas_price;
  out.quality.add(solved);
  return out;
}

NaiveResult solve_naive(const EnergyModel& model, const std::string& reference,
                        const AnalysisOptions& options) {
  if (reference == kExpectedBranchId) {
    return solve_naive(model, expected_branch(model.branches), options);
  }
  return solve_naive(model, model.branch(reference), options);
}

StochasticResult solve_stochastic(const EnergyModel& model,
                                  const std::vector<ScenarioBranch>& branches,
                                  const AnalysisOptions& options) {
  if (branches.empty()) throw ModelError("stochastic problem without branches");
  double total = 0.0;
  for (const auto& b : branches) total += b.probability;
  if (std::abs(total - 1.0) > 1e-9) {
    throw ModelError(fmt::format("probabilities sum to {:g}", total));
  }
  const auto solved = solve_explained(model, build_options(branches, options),
                                      options.tolerances, "stochastic problem");
  StochasticResult out;
  out.ss = solved.objective;
  out.cap = solved.cap;
  out.costs = solved.costs;
  for (const auto& b : branches) out.branch_ids.push_back(b.id);
  out.branch_recourse = recourse(solved);
  out.electricity_price = solved.electricity_price;
  out.gas_price = solved.gas_price;
  out.quality.add(solved);
  return out;
}

EevResult evaluate_eev(const EnergyModel& model,
                       const std::vector<ScenarioBranch>& branches,
                       const CapacityPlan& cap, const AnalysisOptions& options) {
  auto solve_fixed = [&](std::vector<ScenarioBranch> subset) {
    auto opts = build_options(std::move(subset), options);
    opts.fixed_first_stage = cap;
    return solve_explained(model, opts, options.tolerances, "fixed first stage");
  };

  if (!options.decompose_eev) {
    const auto solved = solve_fixed(branches);
    EevResult out;
    out.eev = solved.objective;
    out.costs = solved.costs;
    out.branch_recourse = recourse(solved);
    out.quality.add(solved);
    return out;
  }
  // With every cap pinned the branches share no variable, so the
  // deterministic equivalent is a probability-weighted sum of independent
  // single-branch problems.
  EevResult out;
  for (const auto& b : branches) {
    ScenarioBranch alone = b;
    alone.probability = 1.0;
    const auto solved = solve_fixed({alone});
    const auto& c = solved.costs;
    const double rho = b.probability;
    out.costs.investment = c.investment;
    out.costs.shedding += rho * c.shedding;
    out.costs.generation += rho * c.generation;
    out.costs.gas_production += rho * c.gas_production;
    out.costs.gas_transport += rho * c.gas_transport;
    out.costs.gas_storage += rho * c.gas_storage;
    out.costs.gas_slack += rho * c.gas_slack;
    out.branch_recourse.push_back(solved.objective - c.investment);
    out.eev += rho * out.branch_recourse.back();
    out.quality.add(solved);
  }
  out.eev += out.costs.investment;
  return out;
}

Eciu compute_eciu(double ss, double eev, double ss_investment) {
  const double value = eev - ss;
  const double tol = 1e-6 * (1.0 + std::abs(ss));
  if (value < -tol) {
    throw ModelError(fmt::format(
        "EEV {:.10g} below SS {:.10g}: negative cost of ignoring uncertainty",
        eev, ss));
  }
  Eciu out;
  out.value = value;
  out.percent = ss_investment > 0.0 ? 100.0 * value / ss_investment : 0.0;
  return out;
}

std::vector<ScenarioBranch> mode_branches(const EnergyModel& model,
                                          const ModeSpec& spec) {
  if (spec.mode == Mode::kAllParameters) return model.branches;
  if (!spec.parameter) throw ModelError("isolated mode needs an uncertain parameter");
  ScenarioBranch known;
  if (spec.known_path == kExpectedBranchId) {
    known = expected_branch(model.branches);
  } else {
    auto k = model.branch_index(spec.known_path);
    if (!k) throw ModelError("unknown known path " + spec.known_path);
    known = model.branches[*k];
  }
  std::vector<ScenarioBranch> out;
  for (const auto& b : model.branches) {
    out.push_back(compose_branch(b, known, *spec.parameter));
  }
  return out;
}

UncertaintyReport run_mode(const EnergyModel& model, const ModeSpec& spec,
                           const AnalysisOptions& options) {
  const auto branches = mode_branches(model, spec);
  UncertaintyReport report;
  report.spec = spec;
  const auto ss = solve_stochastic(model, branches, options);
  report.branch_ids = ss.branch_ids;
  report.ss = ss.ss;
  report.ss_cap = ss.cap;
  report.ss_costs = ss.costs;
  report.ss_branch_recourse = ss.branch_recourse;
  report.quality = ss.quality;

  std::vector<ScenarioBranch> references = branches;
  if (spec.include_expected) references.push_back(expected_branch(branches));
  for (const auto& ref : references) {
    ReferenceResult r;
    r.reference = ref.id;
    const auto naive = solve_naive(model, ref, options);
    report.quality.merge(naive.quality);
    r.nps = naive.nps;
    r.cap = naive.cap;
    r.gas_price = naive.gas_price;
    const auto eev = evaluate_eev(model, branches, naive.cap, options);
    report.quality.merge(eev.quality);
    r.eev = eev.eev;
    r.eev_costs = eev.costs;
    r.branch_recourse = eev.branch_recourse;
    r.eciu = compute_eciu(report.ss, r.eev, report.ss_costs.investment);
    r.delta.shedding = eev.costs.shedding - report.ss_costs.shedding;
    r.delta.investment = eev.costs.investment - report.ss_costs.investment;
    r.delta.other = eev.costs.operating() - report.ss_costs.operating();
    r.delta.closure =
        (r.eev - report.ss) - (r.delta.shedding + r.delta.investment + r.delta.other);
    report.references.push_back(std::move(r));
  }
  return report;
}

std::vector<UncertaintyReport> run_all_cells(const EnergyModel& model,
                                             const AnalysisOptions& options) {
  std::vector<std::string> known;
  for (const auto& b : model.branches) known.push_back(b.id);
  known.push_back(kExpectedBranchId);
  std::vector<UncertaintyReport> out;
  for (auto p : kUncertainParameters) {
    for (const auto& k : known) {
      ModeSpec spec;
      spec.mode = Mode::kIsolated;
      spec.parameter = p;
      spec.known_path = k;
      out.push_back(run_mode(model, spec, options));
    }
  }
  return out;
}

}  // namespace egplan
