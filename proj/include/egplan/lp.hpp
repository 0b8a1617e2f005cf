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

#ifndef EGPLAN_LP_HPP_
#define EGPLAN_LP_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace egplan::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

struct Term {
  int column = 0;
  double value = 0.0;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  double cost = 0.0;
};

struct Row {
  std::string name;
  RowSense sense = RowSense::kGreaterEqual;
  double rhs = 0.0;
  std::vector<Term> terms;
};

// Minimisation LP with named columns and rows. Rows are stored sparsely; a
// column may appear at most once per row.
class LinearProgram {
 public:
  int add_variable(std::string name, double cost = 0.0, double lower = 0.0,
                   double upper = kInfinity);
  int add_row(std::string name, RowSense sense, double rhs,
              std::vector<Term> terms);

  void set_cost(int column, double cost);
  void set_bounds(int column, double lower, double upper);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const Variable& variable(int j) const { return variables_.at(j); }
  const Row& row(int i) const { return rows_.at(i); }
  std::span<const Variable> variables() const { return variables_; }
  std::span<const Row> rows() const { return rows_; }
  std::int64_t num_nonzeros() const;

  std::optional<int> find_variable(std::string_view name) const;
  std::optional<int> find_row(std::string_view name) const;

  // Throws LpError when a nonzero references an undeclared column, a name is
  // duplicated, a coefficient is not finite or a bound pair is inverted.
  void check() const;

 private:
  std::vector<Variable> variables_;
  std::vector<Row> rows_;
  std::unordered_map<std::string, int> variable_index_;
  std::unordered_map<std::string, int> row_index_;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded };

std::string_view to_string(SolveStatus status);

struct Tolerances {
  double feasibility = 1e-7;
  double optimality = 1e-7;
  double complementarity = 1e-6;
  // 0 selects 50 * (rows + columns).
  std::int64_t iteration_limit = 0;
  int refactor_interval = 64;
};

// Duals follow the Lagrangian convention for minimisation: a >= row has a
// nonnegative dual, a <= row a nonpositive one, and the reduced cost of a
// column is c_j - a_j' y.
struct LpSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> primal;
  std::vector<double> row_duals;
  std::vector<double> reduced_costs;
  std::int64_t iterations = 0;
};

class IterationLimitError : public LpError {
 public:
  IterationLimitError(std::int64_t iterations, std::vector<int> basis,
                      std::vector<double> primal);

  std::int64_t iterations() const { return iterations_; }
  // Indices into [0, columns + rows); values >= columns denote row logicals.
  const std::vector<int>& basis() const { return basis_; }
  const std::vector<double>& primal() const { return primal_; }

 private:
  std::int64_t iterations_;
  std::vector<int> basis_;
  std::vector<double> primal_;
};

// Bounded two-phase primal simplex. Deterministic for a fixed input.
LpSolution solve(const LinearProgram& lp, const Tolerances& tolerances = {});

struct Residuals {
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double complementary_slackness = 0.0;
};

Residuals residuals(const LinearProgram& lp, const LpSolution& solution);

// Fixed-format MPS. Names longer than eight characters, or containing
// blanks, are replaced by a hashed alias.
std::string export_mps(const LinearProgram& lp,
                       std::string_view problem_name = "EGPLAN");

// Maps each original name to the name written by export_mps.
std::unordered_map<std::string, std::string> mps_name_map(
    const LinearProgram& lp);

// Reads fixed or whitespace-separated MPS (single RHS and BOUNDS set).
LinearProgram import_mps(std::string_view text);

}  // namespace egplan::lp

#endif  // EGPLAN_LP_HPP_
