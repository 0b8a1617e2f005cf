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
#include <cmath>
#include <unordered_set>

#include <fmt/format.h>

#include "egplan/lp.hpp"

namespace egplan::lp {

int LinearProgram::add_variable(std::string name, double cost, double lower,
                                double upper) {
  const int index = num_variables();
  auto [it, inserted] = variable_index_.emplace(name, index);
  if (!inserted) throw LpError(fmt::format("duplicate variable '{}'", name));
  variables_.push_back({std::move(name), lower, upper, cost});
  return index;
}

int LinearProgram::add_row(std::string name, RowSense sense, double rhs,
                           std::vector<Term> terms) {
  const int index = num_rows();
  auto [it, inserted] = row_index_.emplace(name, index);
  if (!inserted) throw LpError(fmt::format("duplicate row '{}'", name));
  rows_.push_back({std::move(name), sense, rhs, std::move(terms)});
  return index;
}

void LinearProgram::set_cost(int column, double cost) {
  variables_.at(column).cost = cost;
}

void LinearProgram::set_bounds(int column, double lower, double upper) {
  auto& v = variables_.at(column);
  v.lower = lower;
  v.upper = upper;
}

std::int64_t LinearProgram::num_nonzeros() const {
  std::int64_t total = 0;
  for (const auto& r : rows_) total += static_cast<std::int64_t>(r.terms.size());
  return total;
}

std::optional<int> LinearProgram::find_variable(std::string_view name) const {
  auto it = variable_index_.find(std::string(name));
  if (it == variable_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> LinearProgram::find_row(std::string_view name) const {
  auto it = row_index_.find(std::string(name));
  if (it == row_index_.end()) return std::nullopt;
  return it->second;
}

void LinearProgram::check() const {
  const int n = num_variables();
  for (const auto& v : variables_) {
    if (!std::isfinite(v.cost)) {
      throw LpError(fmt::format("variable '{}' has non-finite cost", v.name));
    }
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower == kInfinity ||
        v.upper == -kInfinity || v.lower > v.upper) {
      throw LpError(fmt::format("variable '{}' has invalid bounds [{}, {}]",
                                v.name, v.lower, v.upper));
    }
  }
  std::vector<int> seen(n, -1);
  for (int i = 0; i < num_rows(); ++i) {
    const auto& r = rows_[i];
    if (!std::isfinite(r.rhs)) {
      throw LpError(fmt::format("row '{}' has non-finite rhs", r.name));
    }
    for (const auto& t : r.terms) {
      if (t.column < 0 || t.column >= n) {
        throw LpError(fmt::format("row '{}' references undeclared column {}",
                                  r.name, t.column));
      }
      if (!std::isfinite(t.value)) {
        throw LpError(fmt::format("row '{}' has a non-finite coefficient on '{}'",
                                  r.name, variables_[t.column].name));
      }
      if (seen[t.column] == i) {
        throw LpError(fmt::format("row '{}' lists column '{}' twice", r.name,
                                  variables_[t.column].name));
      }
      seen[t.column] = i;
    }
  }
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

IterationLimitError::IterationLimitError(std::int64_t iterations,
                                         std::vector<int> basis,
                                         std::vector<double> primal)
    : LpError(fmt::format("simplex iteration limit reached after {} iterations",
                          iterations)),
      iterations_(iterations),
      basis_(std::move(basis)),
      primal_(std::move(primal)) {}

Residuals residuals(const LinearProgram& lp, const LpSolution& solution) {
  const int n = lp.num_variables();
  const int m = lp.num_rows();
  if (static_cast<int>(solution.primal.size()) != n ||
      static_cast<int>(solution.row_duals.size()) != m ||
      static_cast<int>(solution.reduced_costs.size()) != n) {
    throw LpError(fmt::format(
        "solution dimensions ({} primal, {} duals, {} reduced costs) do not "
        "match the LP ({} columns, {} rows)",
        solution.primal.size(), solution.row_duals.size(),
        solution.reduced_costs.size(), n, m));
  }
  Residuals res;
  const auto& x = solution.primal;
  const auto& y = solution.row_duals;

  // Column side: bounds, sign of the reduced cost, complementarity as the
  // min-map residual min(|d|, distance to the bound d points at).
  std::vector<double> d(n);
  for (int j = 0; j < n; ++j) d[j] = lp.variable(j).cost;
  for (int i = 0; i < m; ++i) {
    for (const auto& t : lp.row(i).terms) d[t.column] -= t.value * y[i];
  }
  for (int j = 0; j < n; ++j) {
    const auto& v = lp.variable(j);
    res.primal_infeasibility =
        std::max({res.primal_infeasibility, v.lower - x[j], x[j] - v.upper});
    const bool has_lower = v.lower > -kInfinity;
    const bool has_upper = v.upper < kInfinity;
    double dual_violation = 0.0;
    if (!has_lower && !has_upper) {
      dual_violation = std::abs(d[j]);
    } else if (!has_lower) {
      dual_violation = std::max(0.0, d[j]);
    } else if (!has_upper) {
      dual_violation = std::max(0.0, -d[j]);
    }
    res.dual_infeasibility = std::max(res.dual_infeasibility, dual_violation);
    double comp = 0.0;
    if (d[j] > 0.0 && has_lower) {
      comp = std::min(d[j], std::abs(x[j] - v.lower));
    } else if (d[j] < 0.0 && has_upper) {
      comp = std::min(-d[j], std::abs(v.upper - x[j]));
    }
    res.complementary_slackness = std::max(res.complementary_slackness, comp);
  }

  for (int i = 0; i < m; ++i) {
    const auto& r = lp.row(i);
    double activity = 0.0;
    for (const auto& t : r.terms) activity += t.value * x[t.column];
    const double gap = activity - r.rhs;
    double violation = 0.0;
    double sign_violation = 0.0;
    switch (r.sense) {
      case RowSense::kLessEqual:
        violation = std::max(0.0, gap);
        sign_violation = std::max(0.0, y[i]);
        break;
      case RowSense::kGreaterEqual:
        violation = std::max(0.0, -gap);
        sign_violation = std::max(0.0, -y[i]);
        break;
      case RowSense::kEqual:
        violation = std::abs(gap);
        break;
    }
    res.primal_infeasibility = std::max(res.primal_infeasibility, violation);
    res.dual_infeasibility = std::max(res.dual_infeasibility, sign_violation);
    if (r.sense != RowSense::kEqual) {
      res.complementary_slackness = std::max(
          res.complementary_slackness, std::min(std::abs(y[i]), std::abs(gap)));
    }
  }
  return res;
}

}  // namespace egplan::lp
