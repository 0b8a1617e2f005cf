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

// Bounded primal simplex on the sparse form  A x + s = b,  l <= (x, s) <= u.
//
// Rows are turned into equalities through one logical column per row whose
// bounds encode the row sense. Phase 1 minimises the sum of bound violations
// of the basic variables (composite costs of +-1), phase 2 the true costs.
// The basis is held as a sparse LU factorisation plus a product-form eta
// file that is folded back into a fresh factorisation every
// `refactor_interval` pivots. Pricing is Dantzig's rule with lowest-index
// tie-breaking; after a run of degenerate pivots the solver switches to
// Bland's rule until the objective moves again.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <fmt/format.h>

#include "egplan/lp.hpp"

namespace egplan::lp {
namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr int kDegenerateRunBeforeBland = 50;
constexpr int kMaxBasisResets = 3;

enum class State : std::uint8_t { kBasic, kAtLower, kAtUpper, kFreeZero };

// Result of folding singleton rows into bounds.
struct Reduction {
  std::vector<double> lower;
  std::vector<double> upper;
  // -1 when the bound is the column's own, otherwise the source row.
  std::vector<int> lower_source;
  std::vector<int> upper_source;
  std::vector<int> kept_rows;
  bool infeasible = false;
};

Reduction reduce(const LinearProgram& lp, double feas_tol) {
  const int n = lp.num_variables();
  Reduction red;
  red.lower.resize(n);
  red.upper.resize(n);
  red.lower_source.assign(n, -1);
  red.upper_source.assign(n, -1);
  for (int j = 0; j < n; ++j) {
    red.lower[j] = lp.variable(j).lower;
    red.upper[j] = lp.variable(j).upper;
  }
  auto tighten_lower = [&](int j, double value, int row) {
    if (value > red.lower[j]) {
      red.lower[j] = value;
      red.lower_source[j] = row;
    }
  };
  auto tighten_upper = [&](int j, double value, int row) {
    if (value < red.upper[j]) {
      red.upper[j] = value;
      red.upper_source[j] = row;
    }
  };
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& r = lp.row(i);
    int count = 0;
    Term single;
    for (const auto& t : r.terms) {
      if (t.value != 0.0) {
        ++count;
        single = t;
      }
    }
    if (count == 0) {
      const bool ok = (r.sense == RowSense::kLessEqual && r.rhs >= -feas_tol) ||
                      (r.sense == RowSense::kGreaterEqual && r.rhs <= feas_tol) ||
                      (r.sense == RowSense::kEqual && std::abs(r.rhs) <= feas_tol);
      if (!ok) red.infeasible = true;
      continue;
    }
    if (count > 1) {
      red.kept_rows.push_back(i);
      continue;
    }
    const double bound = r.rhs / single.value;
    const bool positive = single.value > 0.0;
    const bool gives_upper = r.sense == RowSense::kEqual ||
                             (r.sense == RowSense::kLessEqual) == positive;
    const bool gives_lower = r.sense == RowSense::kEqual ||
                             (r.sense == RowSense::kGreaterEqual) == positive;
    if (gives_upper) tighten_upper(single.column, bound, i);
    if (gives_lower) tighten_lower(single.column, bound, i);
  }
  for (int j = 0; j < n; ++j) {
    if (red.lower[j] > red.upper[j]) {
      const double scale = 1.0 + std::max(std::abs(red.lower[j]),
                                          std::abs(red.upper[j]));
      if (red.lower[j] - red.upper[j] > feas_tol * scale) {
        red.infeasible = true;
      } else {
        red.upper[j] = red.lower[j];
      }
    }
  }
  return red;
}

double power_of_two(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) return 1.0;
  return std::exp2(std::round(std::log2(v)));
}

class SimplexEngine {
 public:
  SimplexEngine(const LinearProgram& lp, const Reduction& red,
                const Tolerances& tol)
      : lp_(lp), red_(red), tol_(tol) {
    n_ = lp.num_variables();
    m_ = static_cast<int>(red.kept_rows.size());
    total_ = n_ + m_;
    build_matrix();
    scale();
    iteration_limit_ =
        tol.iteration_limit > 0
            ? tol.iteration_limit
            : std::max<std::int64_t>(
                  100, 50 * static_cast<std::int64_t>(lp.num_rows() + n_));
  }

  LpSolution run();

 private:
  void build_matrix();
  void scale();
  void crash_basis();
  void refactor();
  void recompute_basics();
  Eigen::VectorXd ftran_column(int j) const;
  void ftran(Eigen::VectorXd& v) const;
  void btran(Eigen::VectorXd& v) const;
  double dot_column(int j, const Eigen::VectorXd& y) const;
  double max_basic_violation() const;
  LpSolution finish(SolveStatus status);
  std::vector<int> external_basis() const;
  std::vector<double> unscaled_primal() const;

  const LinearProgram& lp_;
  const Reduction& red_;
  Tolerances tol_;
  int n_ = 0;
  int m_ = 0;
  int total_ = 0;
  std::int64_t iteration_limit_ = 0;
  std::int64_t iterations_ = 0;

  // Scaled structural matrix in compressed column form.
  std::vector<int> col_start_;
  std::vector<int> row_index_;
  std::vector<double> values_;
  std::vector<double> rhs_;
  std::vector<double> row_scale_;
  std::vector<double> col_scale_;

  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> cost_;
  std::vector<double> x_;
  std::vector<State> state_;
  std::vector<int> basis_;
  std::vector<int> position_;

  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  struct Eta {
    int pivot_row;
    double pivot;
    std::vector<int> index;
    std::vector<double> value;
  };
  std::vector<Eta> etas_;
  int basis_resets_ = 0;
};

void SimplexEngine::build_matrix() {
  std::vector<int> kept_position(lp_.num_rows(), -1);
  for (int k = 0; k < m_; ++k) kept_position[red_.kept_rows[k]] = k;
  std::vector<int> counts(n_, 0);
  for (int k = 0; k < m_; ++k) {
    for (const auto& t : lp_.row(red_.kept_rows[k]).terms) {
      if (t.value != 0.0) ++counts[t.column];
    }
  }
  col_start_.assign(n_ + 1, 0);
  for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + counts[j];
  row_index_.resize(col_start_[n_]);
  values_.resize(col_start_[n_]);
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (int k = 0; k < m_; ++k) {
    for (const auto& t : lp_.row(red_.kept_rows[k]).terms) {
      if (t.value == 0.0) continue;
      row_index_[fill[t.column]] = k;
      values_[fill[t.column]] = t.value;
      ++fill[t.column];
    }
  }
  rhs_.resize(m_);
  for (int k = 0; k < m_; ++k) rhs_[k] = lp_.row(red_.kept_rows[k]).rhs;

  lower_.assign(total_, 0.0);
  upper_.assign(total_, 0.0);
  cost_.assign(total_, 0.0);
  for (int j = 0; j < n_; ++j) {
    lower_[j] = red_.lower[j];
    upper_[j] = red_.upper[j];
    cost_[j] = lp_.variable(j).cost;
  }
  for (int k = 0; k < m_; ++k) {
    switch (lp_.row(red_.kept_rows[k]).sense) {
      case RowSense::kLessEqual:
        lower_[n_ + k] = 0.0;
        upper_[n_ + k] = kInfinity;
        break;
      case RowSense::kGreaterEqual:
        lower_[n_ + k] = -kInfinity;
        upper_[n_ + k] = 0.0;
        break;
      case RowSense::kEqual:
        break;
    }
  }
}

// Geometric-mean scaling by powers of two, so scaling itself is exact.
void SimplexEngine::scale() {
  row_scale_.assign(m_, 1.0);
  col_scale_.assign(n_, 1.0);
  if (m_ == 0) return;
  for (int pass = 0; pass < 4; ++pass) {
    std::vector<double> row_min(m_, kInfinity), row_max(m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
        const double a = std::abs(values_[p]) * col_scale_[j];
        const int i = row_index_[p];
        row_min[i] = std::min(row_min[i], a);
        row_max[i] = std::max(row_max[i], a);
      }
    }
    for (int i = 0; i < m_; ++i) {
      if (row_max[i] > 0.0) {
        row_scale_[i] = power_of_two(1.0 / std::sqrt(row_min[i] * row_max[i]));
      }
    }
    for (int j = 0; j < n_; ++j) {
      double lo = kInfinity, hi = 0.0;
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
        const double a = std::abs(values_[p]) * row_scale_[row_index_[p]];
        lo = std::min(lo, a);
        hi = std::max(hi, a);
      }
      if (hi > 0.0) col_scale_[j] = power_of_two(1.0 / std::sqrt(lo * hi));
    }
  }
  for (int j = 0; j < n_; ++j) {
    for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
      values_[p] *= row_scale_[row_index_[p]] * col_scale_[j];
    }
    lower_[j] /= col_scale_[j];
    upper_[j] /= col_scale_[j];
    cost_[j] *= col_scale_[j];
  }
  for (int i = 0; i < m_; ++i) rhs_[i] *= row_scale_[i];
}

void SimplexEngine::crash_basis() {
  x_.assign(total_, 0.0);
  state_.assign(total_, State::kAtLower);
  basis_.resize(m_);
  position_.assign(total_, -1);
  for (int j = 0; j < n_; ++j) {
    if (lower_[j] > -kInfinity) {
      state_[j] = State::kAtLower;
      x_[j] = lower_[j];
    } else if (upper_[j] < kInfinity) {
      state_[j] = State::kAtUpper;
      x_[j] = upper_[j];
    } else {
      state_[j] = State::kFreeZero;
      x_[j] = 0.0;
    }
  }
  for (int k = 0; k < m_; ++k) {
    basis_[k] = n_ + k;
    position_[n_ + k] = k;
    state_[n_ + k] = State::kBasic;
  }
  refactor();
  recompute_basics();
}

void SimplexEngine::refactor() {
  etas_.clear();
  if (m_ == 0) return;
  std::vector<Eigen::Triplet<double>> triplets;
  for (int k = 0; k < m_; ++k) {
    const int j = basis_[k];
    if (j >= n_) {
      triplets.emplace_back(j - n_, k, 1.0);
    } else {
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
        triplets.emplace_back(row_index_[p], k, values_[p]);
      }
    }
  }
  Eigen::SparseMatrix<double> basis_matrix(m_, m_);
  basis_matrix.setFromTriplets(triplets.begin(), triplets.end());
  basis_matrix.makeCompressed();
  lu_.compute(basis_matrix);
  if (lu_.info() != Eigen::Success) {
    if (++basis_resets_ > kMaxBasisResets) {
      throw LpError("basis factorisation failed repeatedly");
    }
    // Fall back to the all-logical basis; structurals leave at a bound.
    for (int k = 0; k < m_; ++k) {
      const int j = basis_[k];
      position_[j] = -1;
      if (lower_[j] > -kInfinity &&
          (upper_[j] == kInfinity ||
           std::abs(x_[j] - lower_[j]) <= std::abs(x_[j] - upper_[j]))) {
        state_[j] = State::kAtLower;
        x_[j] = lower_[j];
      } else if (upper_[j] < kInfinity) {
        state_[j] = State::kAtUpper;
        x_[j] = upper_[j];
      } else {
        state_[j] = State::kFreeZero;
        x_[j] = 0.0;
      }
    }
    for (int k = 0; k < m_; ++k) {
      basis_[k] = n_ + k;
      position_[n_ + k] = k;
      state_[n_ + k] = State::kBasic;
    }
    refactor();
  }
}

void SimplexEngine::ftran(Eigen::VectorXd& v) const {
  if (m_ == 0) return;
  v = lu_.solve(v);
  for (const auto& eta : etas_) {
    const double pivot_value = v[eta.pivot_row] / eta.pivot;
    if (pivot_value != 0.0) {
      for (std::size_t k = 0; k < eta.index.size(); ++k) {
        v[eta.index[k]] -= eta.value[k] * pivot_value;
      }
    }
    v[eta.pivot_row] = pivot_value;
  }
}

void SimplexEngine::btran(Eigen::VectorXd& v) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double sum = v[it->pivot_row];
    for (std::size_t k = 0; k < it->index.size(); ++k) {
      sum -= it->value[k] * v[it->index[k]];
    }
    v[it->pivot_row] = sum / it->pivot;
  }
  v = lu_.transpose().solve(v);
}

Eigen::VectorXd SimplexEngine::ftran_column(int j) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m_);
  if (j >= n_) {
    v[j - n_] = 1.0;
  } else {
    for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
      v[row_index_[p]] = values_[p];
    }
  }
  ftran(v);
  return v;
}

double SimplexEngine::dot_column(int j, const Eigen::VectorXd& y) const {
  if (j >= n_) return y[j - n_];
  double s = 0.0;
  for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
    s += values_[p] * y[row_index_[p]];
  }
  return s;
}

void SimplexEngine::recompute_basics() {
  if (m_ == 0) return;
  Eigen::VectorXd r(m_);
  for (int i = 0; i < m_; ++i) r[i] = rhs_[i];
  for (int j = 0; j < total_; ++j) {
    if (state_[j] == State::kBasic || x_[j] == 0.0) continue;
    if (j >= n_) {
      r[j - n_] -= x_[j];
    } else {
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
        r[row_index_[p]] -= values_[p] * x_[j];
      }
    }
  }
  ftran(r);
  for (int k = 0; k < m_; ++k) x_[basis_[k]] = r[k];
}

double SimplexEngine::max_basic_violation() const {
  double worst = 0.0;
  for (int k = 0; k < m_; ++k) {
    const int j = basis_[k];
    worst = std::max({worst, lower_[j] - x_[j], x_[j] - upper_[j]});
  }
  return worst;
}

std::vector<int> SimplexEngine::external_basis() const {
  std::vector<int> out;
  out.reserve(m_);
  for (int k = 0; k < m_; ++k) {
    const int j = basis_[k];
    out.push_back(j < n_ ? j : n_ + red_.kept_rows[j - n_]);
  }
  return out;
}

std::vector<double> SimplexEngine::unscaled_primal() const {
  std::vector<double> x(n_);
  for (int j = 0; j < n_; ++j) x[j] = x_[j] * col_scale_[j];
  return x;
}

LpSolution SimplexEngine::run() {
  crash_basis();
  const double feas = tol_.feasibility;
  const double opt = tol_.optimality;
  bool bland = false;
  int degenerate_run = 0;
  int verify_attempts = 0;
  Eigen::VectorXd y(m_);
  std::vector<double> phase_cost(total_, 0.0);

  while (true) {
    if (iterations_ >= iteration_limit_) {
      throw IterationLimitError(iterations_, external_basis(), unscaled_primal());
    }
    if (static_cast<int>(etas_.size()) >= tol_.refactor_interval) {
      refactor();
      recompute_basics();
    }

    // Composite phase-1 costs on infeasible basics; true costs otherwise.
    bool phase_one = false;
    for (int k = 0; k < m_; ++k) {
      const int j = basis_[k];
      if (x_[j] < lower_[j] - feas || x_[j] > upper_[j] + feas) {
        phase_one = true;
        break;
      }
    }
    for (int k = 0; k < m_; ++k) {
      const int j = basis_[k];
      if (phase_one) {
        phase_cost[j] = x_[j] < lower_[j] - feas   ? -1.0
                        : x_[j] > upper_[j] + feas ? 1.0
                                                   : 0.0;
      } else {
        phase_cost[j] = cost_[j];
      }
      y[k] = phase_cost[j];
    }
    btran(y);

    // Pricing.
    int entering = -1;
    double best = 0.0;
    double entering_d = 0.0;
    for (int j = 0; j < total_; ++j) {
      const State s = state_[j];
      if (s == State::kBasic || lower_[j] == upper_[j]) continue;
      const double c = phase_one ? 0.0 : cost_[j];
      const double d = c - dot_column(j, y);
      bool eligible = false;
      switch (s) {
        case State::kAtLower:
          eligible = d < -opt;
          break;
        case State::kAtUpper:
          eligible = d > opt;
          break;
        case State::kFreeZero:
          eligible = std::abs(d) > opt;
          break;
        case State::kBasic:
          break;
      }
      if (!eligible) continue;
      if (bland) {
        entering = j;
        entering_d = d;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        entering = j;
        entering_d = d;
      }
    }

    if (entering < 0) {
      // Candidate termination: confirm on a fresh factorisation.
      if (!etas_.empty() && verify_attempts < 3) {
        ++verify_attempts;
        refactor();
        recompute_basics();
        continue;
      }
      if (phase_one) {
        if (max_basic_violation() > feas) return finish(SolveStatus::kInfeasible);
      } else {
        return finish(SolveStatus::kOptimal);
      }
      continue;
    }
    verify_attempts = 0;

    Eigen::VectorXd alpha = ftran_column(entering);
    const double dir = entering_d < 0.0 ? 1.0 : -1.0;

    // Ratio test (Harris two-pass; exact minimum with lowest index in
    // Bland mode).
    // Step length at which basic k reaches the bound it is heading for;
    // `to_upper` reports which bound that is.
    auto limit_for = [&](int k, bool relaxed, bool* to_upper) -> double {
      const double a = alpha[k];
      if (std::abs(a) <= kPivotTolerance) return kInfinity;
      const int j = basis_[k];
      const double delta = -dir * a;
      const double slack = relaxed ? feas : 0.0;
      if (delta < 0.0) {
        if (x_[j] > upper_[j] + feas) {
          *to_upper = true;
          return (x_[j] - upper_[j] + slack) / -delta;
        }
        if (x_[j] < lower_[j] - feas || lower_[j] == -kInfinity) return kInfinity;
        *to_upper = false;
        return (x_[j] - lower_[j] + slack) / -delta;
      }
      if (x_[j] < lower_[j] - feas) {
        *to_upper = false;
        return (lower_[j] - x_[j] + slack) / delta;
      }
      if (x_[j] > upper_[j] + feas || upper_[j] == kInfinity) return kInfinity;
      *to_upper = true;
      return (upper_[j] - x_[j] + slack) / delta;
    };

    int leave = -1;
    bool leave_to_upper = false;
    double theta = kInfinity;
    bool side = false;
    if (bland) {
      for (int k = 0; k < m_; ++k) {
        const double t = limit_for(k, false, &side);
        if (t == kInfinity) continue;
        if (leave < 0 || t < theta - 1e-12 ||
            (t <= theta + 1e-12 && basis_[k] < basis_[leave])) {
          theta = leave < 0 ? t : std::min(theta, t);
          leave = k;
          leave_to_upper = side;
        }
      }
    } else {
      double theta_max = kInfinity;
      for (int k = 0; k < m_; ++k) {
        theta_max = std::min(theta_max, limit_for(k, true, &side));
      }
      if (theta_max < kInfinity) {
        double best_pivot = 0.0;
        for (int k = 0; k < m_; ++k) {
          const double t = limit_for(k, false, &side);
          if (t == kInfinity || t > theta_max) continue;
          const double piv = std::abs(alpha[k]);
          if (piv > best_pivot ||
              (piv == best_pivot && leave >= 0 && basis_[k] < basis_[leave])) {
            best_pivot = piv;
            leave = k;
            leave_to_upper = side;
            theta = t;
          }
        }
      }
    }
    if (leave >= 0) theta = std::max(theta, 0.0);

    const double range = upper_[entering] - lower_[entering];
    const bool flip = range < kInfinity && (leave < 0 || range <= theta);
    if (leave < 0 && !flip) {
      if (!etas_.empty()) {
        refactor();
        recompute_basics();
        continue;
      }
      if (phase_one) throw LpError("phase 1 ray detected; numerical trouble");
      return finish(SolveStatus::kUnbounded);
    }
    if (flip) theta = range;

    ++iterations_;
    const double progress = theta * std::abs(entering_d);
    if (progress <= 1e-12) {
      if (++degenerate_run >= kDegenerateRunBeforeBland) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }

    x_[entering] += dir * theta;
    for (int k = 0; k < m_; ++k) {
      if (alpha[k] != 0.0) x_[basis_[k]] -= dir * theta * alpha[k];
    }

    if (flip) {
      if (dir > 0) {
        state_[entering] = State::kAtUpper;
        x_[entering] = upper_[entering];
      } else {
        state_[entering] = State::kAtLower;
        x_[entering] = lower_[entering];
      }
      continue;
    }

    const int leaving = basis_[leave];
    if (leave_to_upper) {
      state_[leaving] = State::kAtUpper;
      x_[leaving] = upper_[leaving];
    } else {
      state_[leaving] = State::kAtLower;
      x_[leaving] = lower_[leaving];
    }
    if (lower_[leaving] == -kInfinity && upper_[leaving] == kInfinity) {
      state_[leaving] = State::kFreeZero;
      x_[leaving] = 0.0;
    }
    position_[leaving] = -1;
    basis_[leave] = entering;
    position_[entering] = leave;
    state_[entering] = State::kBasic;

    Eta eta;
    eta.pivot_row = leave;
    eta.pivot = alpha[leave];
    for (int k = 0; k < m_; ++k) {
      if (k != leave && alpha[k] != 0.0) {
        eta.index.push_back(k);
        eta.value.push_back(alpha[k]);
      }
    }
    etas_.push_back(std::move(eta));
  }
}

LpSolution SimplexEngine::finish(SolveStatus status) {
  LpSolution sol;
  sol.status = status;
  sol.iterations = iterations_;
  sol.primal = unscaled_primal();
  sol.row_duals.assign(lp_.num_rows(), 0.0);
  sol.reduced_costs.assign(n_, 0.0);
  if (status != SolveStatus::kOptimal) {
    if (status == SolveStatus::kUnbounded) {
      for (int j = 0; j < n_; ++j) sol.objective += lp_.variable(j).cost * sol.primal[j];
    }
    return sol;
  }

  // Snap nonbasic structurals to their exact bounds.
  for (int j = 0; j < n_; ++j) {
    if (state_[j] == State::kAtLower) sol.primal[j] = red_.lower[j];
    if (state_[j] == State::kAtUpper) sol.primal[j] = red_.upper[j];
  }

  Eigen::VectorXd y(m_);
  for (int k = 0; k < m_; ++k) y[k] = cost_[basis_[k]];
  btran(y);
  for (int k = 0; k < m_; ++k) {
    sol.row_duals[red_.kept_rows[k]] = y[k] * row_scale_[k];
  }

  std::vector<double> d(n_);
  for (int j = 0; j < n_; ++j) d[j] = lp_.variable(j).cost;
  for (int i = 0; i < lp_.num_rows(); ++i) {
    const double yi = sol.row_duals[i];
    if (yi == 0.0) continue;
    for (const auto& t : lp_.row(i).terms) d[t.column] -= t.value * yi;
  }

  // Duals of folded singleton rows come from the reduced cost of the column
  // sitting at the bound that row produced.
  for (int j = 0; j < n_; ++j) {
    if (state_[j] == State::kBasic) continue;
    int source = -1;
    if (d[j] > 0.0 && red_.lower_source[j] >= 0 &&
        sol.primal[j] == red_.lower[j]) {
      source = red_.lower_source[j];
    } else if (d[j] < 0.0 && red_.upper_source[j] >= 0 &&
               sol.primal[j] == red_.upper[j]) {
      source = red_.upper_source[j];
    }
    if (source < 0) continue;
    double a = 0.0;
    for (const auto& t : lp_.row(source).terms) {
      if (t.column == j) a += t.value;
    }
    sol.row_duals[source] = d[j] / a;
    d[j] = 0.0;
  }
  for (int j = 0; j < n_; ++j) {
    if (state_[j] == State::kBasic) d[j] = std::abs(d[j]) <= tol_.optimality ? 0.0 : d[j];
  }
  sol.reduced_costs = std::move(d);
  for (int j = 0; j < n_; ++j) sol.objective += lp_.variable(j).cost * sol.primal[j];
  return sol;
}

}  // namespace

LpSolution solve(const LinearProgram& lp, const Tolerances& tolerances) {
  lp.check();
  const Reduction red = reduce(lp, tolerances.feasibility);
  if (red.infeasible) {
    LpSolution sol;
    sol.status = SolveStatus::kInfeasible;
    sol.primal.assign(lp.num_variables(), 0.0);
    sol.row_duals.assign(lp.num_rows(), 0.0);
    sol.reduced_costs.assign(lp.num_variables(), 0.0);
    return sol;
  }
  SimplexEngine engine(lp, red, tolerances);
  return engine.run();
}

}  // namespace egplan::lp
