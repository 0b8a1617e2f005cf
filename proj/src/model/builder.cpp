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

#include "egplan/builder.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string_view>

#include <fmt/format.h>

namespace egplan {
namespace {

using lp::RowSense;
using lp::Term;

// Sorts by column, merges duplicates and drops exact zeros.
std::vector<Term> merged(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.column < b.column; });
  std::vector<Term> out;
  for (const auto& t : terms) {
    if (!out.empty() && out.back().column == t.column) {
      out.back().value += t.value;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const Term& t) { return t.value == 0.0; });
  return out;
}

template <typename Map>
const std::vector<double>& surface(const Map& map, const std::string& key,
                                   const char* symbol, const std::string& owner,
                                   std::size_t expected) {
  auto it = map.find(key);
  if (it == map.end()) {
    throw ModelError(fmt::format("{} missing for {} in {}", symbol, key, owner));
  }
  if (it->second.size() != expected) {
    throw ModelError(fmt::format("{} for {} in {} has {} values, expected {}",
                                 symbol, key, owner, it->second.size(), expected));
  }
  return it->second;
}

class Builder {
 public:
  Builder(const EnergyModel& model, const BuildOptions& options)
      : m_(model),
        opt_(options),
        Y_(model.time.num_years()),
        H_(model.time.num_hours()),
        literal_psp_(options.literal_psp_balance.value_or(
            model.options.literal_psp_balance)) {
    index_.branches = options.branches.empty() ? model.branches : options.branches;
    if (index_.branches.empty()) throw ModelError("no branches to build");
    index_.gas_slack_penalty = options.gas_slack_penalty;
  }

  BuiltProblem run() {
    classify();
    add_capacity();
    for (int s = 0; s < num_branches(); ++s) {
      for (int y = 0; y < Y_; ++y) {
        add_electricity(y, s);
        add_gas(y, s);
        add_coupling(y, s);
      }
    }
    return {std::move(lp_), std::move(index_)};
  }

 private:
  int num_branches() const { return static_cast<int>(index_.branches.size()); }
  const ScenarioBranch& branch(int s) const { return index_.branches[s]; }
  const std::string& tag(int s) const { return branch(s).id; }
  int year(int y) const { return m_.time.years[y]; }

  double weight(int y, int s) const {
    return branch(s).probability * m_.time.discount[y] * m_.time.year_weight[y];
  }

  // Which (technology, node) pairs get columns, and which gas nodes are
  // reachable from each supplier.
  void classify() {
    const int T = static_cast<int>(m_.technologies.size());
    const int N = static_cast<int>(m_.electricity_nodes.size());
    present_.assign(T, std::vector<bool>(N, false));
    investable_.assign(T, std::vector<bool>(N, false));
    for (int i = 0; i < T; ++i) {
      const auto& tech = m_.technologies[i];
      for (int n = 0; n < N; ++n) {
        const auto& node = m_.electricity_nodes[n];
        bool inv = false;
        for (int y = 0; y < Y_; ++y) inv |= m_.new_capacity_max(tech, node, y) > 0.0;
        investable_[i][n] = inv;
        bool any = inv;
        for (int s = 0; s < num_branches() && !any; ++s) {
          for (int y = 0; y < Y_ && !any; ++y) {
            any = m_.existing_capacity(tech, node, y, branch(s)) > 0.0;
          }
        }
        present_[i][n] = any;
        if (any && tech.is_res() && !node.production_factor.count(tech.id)) {
          throw ModelError(fmt::format("PF missing for {} at {}", tech.id, node.id));
        }
        if (any && tech.is_gas() && !m_.gas_node_index(node.id)) {
          throw ModelError(fmt::format(
              "gas-fired generation at {} has no gas node of that id", node.id));
        }
      }
    }
    const int G = static_cast<int>(m_.gas_nodes.size());
    reach_.assign(m_.gas_suppliers.size(), std::vector<bool>(G, false));
    for (std::size_t p = 0; p < m_.gas_suppliers.size(); ++p) {
      auto start = m_.gas_node_index(m_.gas_suppliers[p].node);
      if (!start) throw ModelError("unknown gas node " + m_.gas_suppliers[p].node);
      std::vector<int> stack = {*start};
      reach_[p][*start] = true;
      while (!stack.empty()) {
        const int k = stack.back();
        stack.pop_back();
        for (const auto& arc : m_.gas_arcs) {
          if (arc.from != m_.gas_nodes[k].id) continue;
          const int to = *m_.gas_node_index(arc.to);
          if (!reach_[p][to]) {
            reach_[p][to] = true;
            stack.push_back(to);
          }
        }
      }
    }
  }

  void add_capacity() {
    for (std::size_t i = 0; i < m_.technologies.size(); ++i) {
      const auto& tech = m_.technologies[i];
      for (std::size_t n = 0; n < m_.electricity_nodes.size(); ++n) {
        if (!investable_[i][n]) continue;
        const auto& node = m_.electricity_nodes[n];
        for (int y = 0; y < Y_; ++y) {
          const Key<3> key = {static_cast<int>(i), static_cast<int>(n), y};
          const double cost =
              m_.time.discount[y] * m_.time.year_weight[y] * tech.investment_cost;
          double lo = 0.0;
          double hi = lp::kInfinity;
          if (opt_.fixed_first_stage) {
            auto it = opt_.fixed_first_stage->find(key);
            if (it == opt_.fixed_first_stage->end()) {
              throw ModelError(fmt::format("fixed first stage lacks cap {} {} {}",
                                           tech.id, node.id, year(y)));
            }
            if (y > 0) {
              auto prev = opt_.fixed_first_stage->find({key[0], key[1], y - 1});
              if (prev != opt_.fixed_first_stage->end() &&
                  prev->second > it->second + 1e-9) {
                throw ModelError(fmt::format(
                    "fixed first stage decreases cap {} {} in {}", tech.id,
                    node.id, year(y)));
              }
            }
            lo = hi = std::max(0.0, it->second);
          }
          const int col = lp_.add_variable(
              fmt::format("cap__{}_{}_{}", tech.id, node.id, year(y)), cost, lo, hi);
          index_.cap.emplace(key, col);
          if (y > 0) {
            lp_.add_row(fmt::format("eq14__{}_{}_{}", tech.id, node.id, year(y)),
                        RowSense::kLessEqual, 0.0,
                        {{index_.cap.at({key[0], key[1], y - 1}), 1.0}, {col, -1.0}});
          }
          const double limit = m_.new_capacity_max(tech, node, y);
          if (std::isfinite(limit)) {
            lp_.add_row(fmt::format("eq17__{}_{}_{}", tech.id, node.id, year(y)),
                        RowSense::kLessEqual, limit, {{col, 1.0}});
          }
        }
      }
    }
  }

  std::optional<int> cap_column(int i, int n, int y) const {
    auto it = index_.cap.find({i, n, y});
    if (it == index_.cap.end()) return std::nullopt;
    return it->second;
  }

  // Adds `lhs <= factor * (existing + cap)` as `lhs - factor*cap <= factor*existing`.
  void add_capacity_row(const std::string& name, std::vector<Term> lhs, int i,
                        int n, int y, double existing, double factor) {
    if (auto c = cap_column(i, n, y); c && factor != 0.0) {
      lhs.push_back({*c, -factor});
    }
    lp_.add_row(name, RowSense::kLessEqual, factor * existing, merged(std::move(lhs)));
  }

  void add_electricity(int y, int s) {
    const auto& b = branch(s);
    const auto& time = m_.time;
    const double w = weight(y, s);
    const int N = static_cast<int>(m_.electricity_nodes.size());
    const int T = static_cast<int>(m_.technologies.size());
    const std::size_t hourly = static_cast<std::size_t>(Y_) * H_;

    for (int a = 0; a < static_cast<int>(m_.electricity_arcs.size()); ++a) {
      const auto& arc = m_.electricity_arcs[a];
      for (int t = 0; t < H_; ++t) {
        const int col = lp_.add_variable(
            fmt::format("flow__{}_{}_{}_{}_{}", arc.from, arc.to, t + 1, year(y), tag(s)));
        index_.flow.emplace(Key<4>{a, t, y, s}, col);
        lp_.add_row(fmt::format("eq23__{}_{}_{}_{}_{}", arc.from, arc.to, t + 1,
                                year(y), tag(s)),
                    RowSense::kLessEqual, arc.ntc.at(y), {{col, 1.0}});
      }
    }

    for (int n = 0; n < N; ++n) {
      const auto& node = m_.electricity_nodes[n];
      const auto& demand = surface(b.electricity_demand, node.id, "DEMAND",
                                   "branch " + b.id, hourly);
      for (int t = 0; t < H_; ++t) {
        const double hw = time.hour_weight[t];
        const std::string idx = fmt::format("{}_{}_{}_{}", node.id, t + 1, year(y), tag(s));
        std::vector<Term> balance;
        std::vector<Term> gas_gen;
        for (int i = 0; i < T; ++i) {
          if (!present_[i][n]) continue;
          const auto& tech = m_.technologies[i];
          const double vc = variable_cost(tech, node.id, y, b);
          const int col = lp_.add_variable(
              fmt::format("g__{}_{}_{}_{}_{}", tech.id, node.id, t + 1, year(y), tag(s)),
              w * hw * vc);
          index_.g.emplace(Key<5>{i, n, t, y, s}, col);
          const double existing = m_.existing_capacity(tech, node, y, b);
          const std::string tidx = tech.id + "_" + idx;
          add_capacity_row("eq15__" + tidx, {{col, 1.0}}, i, n, y, existing,
                           tech.availability);
          if (tech.is_res()) {
            const double pf = node.production_factor.at(tech.id).at(t);
            lp_.add_row("eq16__" + tidx, RowSense::kLessEqual, existing * pf,
                        {{col, 1.0}});
          }
          if (tech.is_gas()) gas_gen.push_back({col, 1.0});
          if (tech.kind == TechClass::kPsp) {
            const double eta = tech.eta(node.id, y);
            balance.push_back({col, literal_psp_ ? 1.0 / eta : 1.0});
            const int ch = lp_.add_variable("charge__" + tidx);
            const int lv = lp_.add_variable("sl__" + tidx);
            index_.charge.emplace(Key<5>{i, n, t, y, s}, ch);
            index_.sl.emplace(Key<5>{i, n, t, y, s}, lv);
            balance.push_back({ch, -1.0});
            add_capacity_row("eq18__" + tidx, {{lv, 1.0}}, i, n, y, existing,
                             tech.capacity_power_factor);
            add_capacity_row("eq20__" + tidx, {{ch, 1.0}}, i, n, y, existing,
                             tech.availability);
          } else {
            balance.push_back({col, 1.0});
          }
        }
        const int shed = lp_.add_variable("shed__" + idx, w * hw * node.vola);
        index_.shed.emplace(Key<4>{n, t, y, s}, shed);
        balance.push_back({shed, 1.0});
        const double d = demand[y * H_ + t];
        lp_.add_row("eq13__" + idx, RowSense::kLessEqual, d * node.shed_max,
                    {{shed, 1.0}});
        for (int a = 0; a < static_cast<int>(m_.electricity_arcs.size()); ++a) {
          const auto& arc = m_.electricity_arcs[a];
          if (arc.to == node.id) balance.push_back({index_.flow.at({a, t, y, s}), 1.0});
          if (arc.from == node.id) balance.push_back({index_.flow.at({a, t, y, s}), -1.0});
        }
        const int row = lp_.add_row("eq12__" + idx, RowSense::kEqual, d,
                                    merged(std::move(balance)));
        index_.power_balance.emplace(Key<4>{n, t, y, s}, row);
        if (!node.chp.empty() && node.chp.at(y * H_ + t) > 0.0) {
          lp_.add_row("eq22__" + idx, RowSense::kGreaterEqual, node.chp[y * H_ + t],
                      merged(std::move(gas_gen)));
        }
      }

      // Storage chaining and the reservoir budget need every hour's columns.
      for (int i = 0; i < T; ++i) {
        if (!present_[i][n]) continue;
        const auto& tech = m_.technologies[i];
        const std::string yidx = fmt::format("{}_{}_{}_{}", tech.id, node.id, year(y), tag(s));
        if (tech.kind == TechClass::kPsp) {
          const double eta = tech.eta(node.id, y);
          for (int t = 0; t < H_; ++t) {
            const int prev = (t + H_ - 1) % H_;
            lp_.add_row(
                fmt::format("eq19__{}_{}_{}_{}_{}", tech.id, node.id, t + 1, year(y), tag(s)),
                RowSense::kEqual, 0.0,
                merged({{index_.sl.at({i, n, t, y, s}), 1.0},
                        {index_.sl.at({i, n, prev, y, s}), -1.0},
                        {index_.g.at({i, n, t, y, s}), literal_psp_ ? 1.0 : 1.0 / eta},
                        {index_.charge.at({i, n, t, y, s}), -1.0}}));
          }
        }
        if (tech.kind == TechClass::kReservoir) {
          std::vector<Term> terms;
          for (int t = 0; t < H_; ++t) {
            terms.push_back({index_.g.at({i, n, t, y, s}), time.hour_weight[t]});
          }
          lp_.add_row("eq21__" + yidx, RowSense::kLessEqual,
                      m_.existing_capacity(tech, node, y, b) * tech.full_load_hours,
                      merged(std::move(terms)));
        }
      }
    }
  }

  bool is_consumer(int c) const { return !m_.gas_nodes[c].supply_only; }

  void add_gas(int y, int s) {
    const auto& b = branch(s);
    const double w = weight(y, s);
    const int G = static_cast<int>(m_.gas_nodes.size());
    const int P = static_cast<int>(m_.gas_suppliers.size());
    const int A = static_cast<int>(m_.gas_arcs.size());
    const std::size_t monthly = static_cast<std::size_t>(Y_) * kMonths;

    for (int mo = 0; mo < kMonths; ++mo) {
      const int ym = y * kMonths + mo;
      auto sfx = [&](const std::string& head) {
        return fmt::format("{}_{}_{}_{}", head, mo + 1, year(y), tag(s));
      };
      for (int p = 0; p < P; ++p) {
        const auto& sup = m_.gas_suppliers[p];
        for (int c = 0; c < G; ++c) {
          if (!reach_[p][c] || !is_consumer(c)) continue;
          const int col = lp_.add_variable(
              "pvol__" + sfx(sup.id + "_" + m_.gas_nodes[c].id), w * sup.cost);
          index_.pvol.emplace(Key<5>{p, c, mo, y, s}, col);
        }
        for (int a = 0; a < A; ++a) {
          const auto& arc = m_.gas_arcs[a];
          if (!reach_[p][*m_.gas_node_index(arc.from)]) continue;
          const int col = lp_.add_variable(
              "gflow__" + sfx(sup.id + "_" + arc.from + "_" + arc.to), w * arc.cost);
          index_.gflow.emplace(Key<5>{p, a, mo, y, s}, col);
        }
      }
      for (int a = 0; a < A; ++a) {
        const auto& arc = m_.gas_arcs[a];
        std::vector<Term> def;
        for (int p = 0; p < P; ++p) {
          auto it = index_.gflow.find({p, a, mo, y, s});
          if (it != index_.gflow.end()) def.push_back({it->second, -1.0});
        }
        if (def.empty()) continue;
        const std::string aidx = sfx(arc.from + "_" + arc.to);
        const int col = lp_.add_variable("arcflow__" + aidx);
        index_.arcflow.emplace(Key<4>{a, mo, y, s}, col);
        def.push_back({col, 1.0});
        lp_.add_row("eq26__def_" + aidx, RowSense::kEqual, 0.0, merged(std::move(def)));
        lp_.add_row("eq26__cap_" + aidx, RowSense::kLessEqual, arc.capacity.at(y),
                    {{col, 1.0}});
      }

      for (int c = 0; c < G; ++c) {
        const auto& gn = m_.gas_nodes[c];
        if (!is_consumer(c)) continue;
        const std::string cidx = sfx(gn.id);
        const auto& npgdem = surface(b.gas_demand, gn.id, "NPGDEM", "branch " + b.id,
                                     monthly);
        std::vector<Term> balance;
        for (int p = 0; p < P; ++p) {
          auto it = index_.pvol.find({p, c, mo, y, s});
          if (it != index_.pvol.end()) balance.push_back({it->second, 1.0});
        }
        if (consumes_power_gas(c)) {
          const int col = lp_.add_variable("pgdem__" + cidx);
          index_.pgdem.emplace(Key<4>{c, mo, y, s}, col);
          balance.push_back({col, -1.0});
        }
        if (gn.storage) {
          const auto& st = *gn.storage;
          const int inj = lp_.add_variable("inj__" + cidx, w * st.injection_cost);
          const int wd = lp_.add_variable("with__" + cidx, w * st.withdrawal_cost);
          const int lv = lp_.add_variable("level__" + cidx);
          index_.inj.emplace(Key<4>{c, mo, y, s}, inj);
          index_.with.emplace(Key<4>{c, mo, y, s}, wd);
          index_.level.emplace(Key<4>{c, mo, y, s}, lv);
          balance.push_back({inj, -1.0});
          balance.push_back({wd, 1.0});
          add_storage_rows(c, mo, y, s, cidx);
        }
        if (opt_.gas_slack_penalty > 0.0) {
          const int col = lp_.add_variable("gslack__" + cidx, w * opt_.gas_slack_penalty);
          index_.gas_slack.emplace(Key<4>{c, mo, y, s}, col);
          balance.push_back({col, 1.0});
        }
        const int row = lp_.add_row("eq24__" + cidx, RowSense::kEqual, npgdem[ym],
                                    merged(std::move(balance)));
        index_.gas_balance.emplace(Key<4>{c, mo, y, s}, row);
      }

      for (int p = 0; p < P; ++p) {
        const auto& sup = m_.gas_suppliers[p];
        std::vector<Term> out;
        for (int c = 0; c < G; ++c) {
          auto it = index_.pvol.find({p, c, mo, y, s});
          if (it != index_.pvol.end()) out.push_back({it->second, 1.0});
        }
        lp_.add_row("eq25__" + sfx(sup.id), RowSense::kLessEqual, sup.capacity.at(ym),
                    merged(std::move(out)));
        const int home = *m_.gas_node_index(sup.node);
        for (int k = 0; k < G; ++k) {
          if (!reach_[p][k]) continue;
          std::vector<Term> cons;
          if (k == home) {
            for (int c = 0; c < G; ++c) {
              if (c == home) continue;
              auto it = index_.pvol.find({p, c, mo, y, s});
              if (it != index_.pvol.end()) cons.push_back({it->second, 1.0});
            }
          } else if (auto it = index_.pvol.find({p, k, mo, y, s});
                     it != index_.pvol.end()) {
            cons.push_back({it->second, -1.0});
          }
          for (int a = 0; a < A; ++a) {
            auto it = index_.gflow.find({p, a, mo, y, s});
            if (it == index_.gflow.end()) continue;
            if (m_.gas_arcs[a].from == m_.gas_nodes[k].id) cons.push_back({it->second, -1.0});
            if (m_.gas_arcs[a].to == m_.gas_nodes[k].id) cons.push_back({it->second, 1.0});
          }
          cons = merged(std::move(cons));
          if (cons.empty()) continue;
          lp_.add_row("eq27__" + sfx(sup.id + "_" + m_.gas_nodes[k].id),
                      RowSense::kEqual, 0.0, std::move(cons));
        }
      }

      for (int a = 0; a < A; ++a) {
        const auto& arc = m_.gas_arcs[a];
        if (arc.contract.empty()) continue;
        const double floor = arc.take_or_pay * arc.contract.at(ym);
        if (floor <= 0.0) continue;
        const int to = *m_.gas_node_index(arc.to);
        std::vector<Term> terms;
        for (int p = 0; p < P; ++p) {
          if (m_.gas_suppliers[p].node != arc.from) continue;
          auto it = index_.pvol.find({p, to, mo, y, s});
          if (it != index_.pvol.end()) terms.push_back({it->second, 1.0});
        }
        lp_.add_row("eq28__" + sfx(arc.from + "_" + arc.to), RowSense::kGreaterEqual,
                    floor, merged(std::move(terms)));
      }
    }
  }

  bool consumes_power_gas(int c) const {
    auto n = m_.electricity_node_index(m_.gas_nodes[c].id);
    if (!n) return false;
    for (std::size_t i = 0; i < m_.technologies.size(); ++i) {
      if (m_.technologies[i].is_gas() && present_[i][*n]) return true;
    }
    return false;
  }

  void add_storage_rows(int c, int mo, int y, int s, const std::string& cidx) {
    const auto& st = *m_.gas_nodes[c].storage;
    const int ym = y * kMonths + mo;
    const int inj = index_.inj.at({c, mo, y, s});
    const int wd = index_.with.at({c, mo, y, s});
    const int lv = index_.level.at({c, mo, y, s});
    std::vector<Term> dyn = {{lv, 1.0}, {inj, -(1.0 - st.loss)}, {wd, 1.0}};
    if (mo > 0) {
      dyn.push_back({index_.level.at({c, mo - 1, y, s}), -1.0});
      lp_.add_row("eq29__" + cidx, RowSense::kEqual, 0.0, merged(std::move(dyn)));
    } else if (y > 0) {
      dyn.push_back({index_.level.at({c, kMonths - 1, y - 1, s}), -1.0});
      lp_.add_row("eq30__" + cidx, RowSense::kEqual, 0.0, merged(std::move(dyn)));
    } else {
      lp_.add_row("eq31__" + cidx, RowSense::kEqual, st.start_level,
                  merged(std::move(dyn)));
    }
    if (mo == kMonths - 1 && y == Y_ - 1) {
      lp_.add_row("eq32__" + cidx, RowSense::kGreaterEqual, st.end_level, {{lv, 1.0}});
    }
    lp_.add_row("eq33__" + cidx, RowSense::kLessEqual, st.working_volume.at(ym),
                {{lv, 1.0}});
    lp_.add_row("eq34__" + cidx, RowSense::kLessEqual, st.injection_cap.at(ym),
                {{inj, 1.0}});
    lp_.add_row("eq35__" + cidx, RowSense::kLessEqual, st.withdrawal_cap.at(ym),
                {{wd, 1.0}});
  }

  void add_coupling(int y, int s) {
    for (const auto& [key, col] : index_.pgdem) {
      if (key[2] != y || key[3] != s) continue;
      const int c = key[0];
      const int mo = key[1];
      const int n = *m_.electricity_node_index(m_.gas_nodes[c].id);
      const auto& node = m_.electricity_nodes[n];
      std::vector<Term> terms = {{col, 1.0}};
      for (std::size_t i = 0; i < m_.technologies.size(); ++i) {
        const auto& tech = m_.technologies[i];
        if (!tech.is_gas() || !present_[i][n]) continue;
        const double eta = tech.eta(node.id, y);
        for (int t = 0; t < H_; ++t) {
          if (m_.time.hour_month[t] != mo) continue;
          terms.push_back({index_.g.at({static_cast<int>(i), n, t, y, s}),
                           -m_.time.hour_weight[t] / eta});
        }
      }
      lp_.add_row(fmt::format("eq36__{}_{}_{}_{}", node.id, mo + 1, year(y), tag(s)),
                  RowSense::kEqual, 0.0, merged(std::move(terms)));
    }
  }

  const EnergyModel& m_;
  const BuildOptions& opt_;
  const int Y_;
  const int H_;
  const bool literal_psp_;
  std::vector<std::vector<bool>> present_;
  std::vector<std::vector<bool>> investable_;
  std::vector<std::vector<bool>> reach_;
  lp::LinearProgram lp_;
  VariableIndex index_;
};

}  // namespace

BuiltProblem build(const EnergyModel& model, const BuildOptions& options) {
  return Builder(model, options).run();
}

NotOptimalError::NotOptimalError(lp::SolveStatus status, const std::string& detail)
    : ModelError(detail.empty() ? "LP is " + std::string(lp::to_string(status)) : detail),
      status_(status) {}

SolvedModel extract(const lp::LinearProgram& lp, const VariableIndex& index,
                    const lp::LpSolution& solution, const EnergyModel& model) {
  if (solution.status != lp::SolveStatus::kOptimal) {
    throw NotOptimalError(solution.status);
  }
  const auto& time = model.time;
  const int S = static_cast<int>(index.branches.size());
  SolvedModel out;
  out.objective = solution.objective;
  out.index = index;
  out.solution = solution;
  out.residuals = lp::residuals(lp, solution);
  out.branch_costs.assign(S, CostBreakdown{});
  auto x = [&](int col) { return solution.primal[col]; };
  auto dfy = [&](int y) { return time.discount[y] * time.year_weight[y]; };

  double investment = 0.0;
  for (const auto& [key, col] : index.cap) {
    out.cap.emplace(key, x(col));
    investment += dfy(key[2]) * model.technologies[key[0]].investment_cost * x(col);
  }
  for (auto& bc : out.branch_costs) bc.investment = investment;

  for (const auto& [key, col] : index.g) {
    const auto& tech = model.technologies[key[0]];
    const auto& node = model.electricity_nodes[key[1]];
    const int t = key[2], y = key[3], s = key[4];
    const auto& b = index.branches[s];
    const double eta = tech.eta(node.id, y);
    double per_mwh = tech.carbon_content * b.prices.co2.at(y) / eta + tech.vom;
    if (!tech.is_gas() && !tech.fuel.empty()) per_mwh += b.prices.fuel.at(tech.fuel).at(y) / eta;
    out.branch_costs[s].generation += dfy(y) * time.hour_weight[t] * per_mwh * x(col);
  }
  for (const auto& [key, col] : index.shed) {
    const int t = key[1], y = key[2], s = key[3];
    out.branch_costs[s].shedding +=
        dfy(y) * time.hour_weight[t] * model.electricity_nodes[key[0]].vola * x(col);
  }
  for (const auto& [key, col] : index.pvol) {
    out.branch_costs[key[4]].gas_production +=
        dfy(key[3]) * model.gas_suppliers[key[0]].cost * x(col);
  }
  for (const auto& [key, col] : index.gflow) {
    out.branch_costs[key[4]].gas_transport +=
        dfy(key[3]) * model.gas_arcs[key[1]].cost * x(col);
  }
  for (const auto& [key, col] : index.inj) {
    out.branch_costs[key[3]].gas_storage +=
        dfy(key[2]) * model.gas_nodes[key[0]].storage->injection_cost * x(col);
  }
  for (const auto& [key, col] : index.with) {
    out.branch_costs[key[3]].gas_storage +=
        dfy(key[2]) * model.gas_nodes[key[0]].storage->withdrawal_cost * x(col);
  }
  for (const auto& [key, col] : index.gas_slack) {
    out.branch_costs[key[3]].gas_slack +=
        dfy(key[2]) * index.gas_slack_penalty * x(col);
  }

  out.costs.investment = investment;
  for (int s = 0; s < S; ++s) {
    const double rho = index.branches[s].probability;
    const auto& bc = out.branch_costs[s];
    out.costs.shedding += rho * bc.shedding;
    out.costs.generation += rho * bc.generation;
    out.costs.gas_production += rho * bc.gas_production;
    out.costs.gas_transport += rho * bc.gas_transport;
    out.costs.gas_storage += rho * bc.gas_storage;
    out.costs.gas_slack += rho * bc.gas_slack;
  }
  const double total = out.costs.total();
  if (std::abs(total - solution.objective) >
      1e-6 * std::max(1.0, std::abs(solution.objective))) {
    throw ModelError(fmt::format("recomputed cost {:.10g} differs from LP objective {:.10g}",
                                 total, solution.objective));
  }

  // Balance and conservation families, by row name prefix.
  static const std::array<std::string_view, 7> kBalance = {"eq12__", "eq24__", "eq27__",
                                                           "eq29__", "eq30__", "eq31__",
                                                           "eq36__"};
  for (int r = 0; r < lp.num_rows(); ++r) {
    const auto& row = lp.row(r);
    if (std::none_of(kBalance.begin(), kBalance.end(),
                     [&](std::string_view f) { return row.name.starts_with(f); })) {
      continue;
    }
    double a = 0.0;
    for (const auto& term : row.terms) a += term.value * x(term.column);
    double v = a - row.rhs;
    if (row.sense == lp::RowSense::kLessEqual) v = std::max(v, 0.0);
    if (row.sense == lp::RowSense::kGreaterEqual) v = std::max(-v, 0.0);
    out.balance_residual = std::max(out.balance_residual, std::abs(v) / (1.0 + std::abs(row.rhs)));
    ++out.balance_rows;
  }

  for (const auto& [key, row] : index.power_balance) {
    const int t = key[1], y = key[2], s = key[3];
    const double w =
        index.branches[s].probability * dfy(y) * time.hour_weight[t];
    out.electricity_price.emplace(key, w > 0.0 ? solution.row_duals[row] / w : 0.0);
  }
  for (const auto& [key, row] : index.gas_balance) {
    const int y = key[2], s = key[3];
    const double w = index.branches[s].probability * dfy(y);
    out.gas_price.emplace(key, w > 0.0 ? solution.row_duals[row] / w : 0.0);
  }
  return out;
}

SolvedModel solve_model(const EnergyModel& model, const BuildOptions& options,
                        const lp::Tolerances& tolerances) {
  auto built = build(model, options);
  const auto solution = lp::solve(built.lp, tolerances);
  if (solution.status != lp::SolveStatus::kOptimal) {
    throw NotOptimalError(solution.status);
  }
  return extract(built.lp, built.index, solution, model);
}

}  // namespace egplan
