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

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "egplan/lp.hpp"

namespace egplan::lp {
namespace {

constexpr std::string_view kObjectiveRow = "OBJ";

bool fits_fixed_field(std::string_view name) {
  if (name.empty() || name.size() > 8 || name.front() == '*' ||
      name.front() == '$') {
    return false;
  }
  for (char c : name) {
    if (c <= ' ' || c > '~') return false;
  }
  return true;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string alias(char prefix, std::string_view name) {
  static constexpr char kDigits[] = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  std::uint64_t h = fnv1a(name);
  std::string out(8, '0');
  out[0] = prefix;
  for (int k = 7; k >= 1; --k) {
    out[k] = kDigits[h % 36];
    h /= 36;
  }
  return out;
}

std::string format_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

struct NameTable {
  std::vector<std::string> rows;
  std::vector<std::string> columns;
};

NameTable sanitise(const LinearProgram& lp) {
  NameTable table;
  std::map<std::string, std::string> taken;  // written name -> original
  std::vector<std::string> clashes;
  auto claim = [&](const std::string& written, const std::string& original,
                   bool row) {
    const std::string key = (row ? "R:" : "C:") + written;
    auto [it, inserted] = taken.emplace(key, original);
    if (!inserted) {
      clashes.push_back(fmt::format("'{}' and '{}' both map to '{}'",
                                    it->second, original, written));
    }
  };
  claim(std::string(kObjectiveRow), "<objective>", true);
  for (const auto& r : lp.rows()) {
    std::string w = fits_fixed_field(r.name) ? r.name : alias('R', r.name);
    claim(w, r.name, true);
    table.rows.push_back(std::move(w));
  }
  for (const auto& v : lp.variables()) {
    std::string w = fits_fixed_field(v.name) ? v.name : alias('C', v.name);
    claim(w, v.name, false);
    table.columns.push_back(std::move(w));
  }
  if (!clashes.empty()) {
    std::string msg = "MPS name collision after sanitisation:";
    for (const auto& c : clashes) msg += " " + c + ";";
    throw LpError(msg);
  }
  return table;
}

void entry_line(std::string& out, std::string_view f1, std::string_view f2,
                std::string_view f3, std::string_view f4) {
  fmt::format_to(std::back_inserter(out), " {:<2} {:<8}  {:<8}  {}\n", f1, f2,
                 f3, f4);
}

}  // namespace

std::unordered_map<std::string, std::string> mps_name_map(
    const LinearProgram& lp) {
  const NameTable table = sanitise(lp);
  std::unordered_map<std::string, std::string> out;
  for (int i = 0; i < lp.num_rows(); ++i) out[lp.row(i).name] = table.rows[i];
  for (int j = 0; j < lp.num_variables(); ++j) {
    out[lp.variable(j).name] = table.columns[j];
  }
  return out;
}

std::string export_mps(const LinearProgram& lp, std::string_view problem_name) {
  lp.check();
  const NameTable names = sanitise(lp);
  std::string out;
  fmt::format_to(std::back_inserter(out), "NAME          {}\n", problem_name);
  out += "ROWS\n";
  fmt::format_to(std::back_inserter(out), " N  {}\n", kObjectiveRow);
  for (int i = 0; i < lp.num_rows(); ++i) {
    const char type = lp.row(i).sense == RowSense::kLessEqual   ? 'L'
                      : lp.row(i).sense == RowSense::kEqual     ? 'E'
                                                                : 'G';
    fmt::format_to(std::back_inserter(out), " {}  {}\n", type, names.rows[i]);
  }

  std::vector<std::vector<Term>> by_column(lp.num_variables());
  for (int i = 0; i < lp.num_rows(); ++i) {
    for (const auto& t : lp.row(i).terms) {
      if (t.value != 0.0) by_column[t.column].push_back({i, t.value});
    }
  }
  out += "COLUMNS\n";
  for (int j = 0; j < lp.num_variables(); ++j) {
    const double c = lp.variable(j).cost;
    if (c != 0.0 || by_column[j].empty()) {
      entry_line(out, "", names.columns[j], kObjectiveRow, format_number(c));
    }
    for (const auto& t : by_column[j]) {
      entry_line(out, "", names.columns[j], names.rows[t.column],
                 format_number(t.value));
    }
  }
  out += "RHS\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    if (lp.row(i).rhs != 0.0) {
      entry_line(out, "", "RHS", names.rows[i], format_number(lp.row(i).rhs));
    }
  }
  out += "BOUNDS\n";
  for (int j = 0; j < lp.num_variables(); ++j) {
    const auto& v = lp.variable(j);
    const auto& name = names.columns[j];
    const bool has_lower = v.lower > -kInfinity;
    const bool has_upper = v.upper < kInfinity;
    if (has_lower && has_upper && v.lower == v.upper) {
      entry_line(out, "FX", "BND", name, format_number(v.lower));
      continue;
    }
    if (!has_lower && !has_upper) {
      entry_line(out, "FR", "BND", name, "");
      continue;
    }
    if (!has_lower) entry_line(out, "MI", "BND", name, "");
    if (has_lower && (v.lower != 0.0 || (has_upper && v.upper < 0.0))) {
      entry_line(out, "LO", "BND", name, format_number(v.lower));
    }
    if (has_upper) entry_line(out, "UP", "BND", name, format_number(v.upper));
  }
  out += "ENDATA\n";
  return out;
}

LinearProgram import_mps(std::string_view text) {
  enum class Section { kNone, kName, kRows, kColumns, kRhs, kBounds, kEnd };
  Section section = Section::kNone;
  LinearProgram lp;
  std::string objective_row;
  std::map<std::string, int> row_of;
  std::vector<std::vector<Term>> row_terms;
  struct PendingRow {
    std::string name;
    RowSense sense;
  };
  std::vector<PendingRow> pending_rows;
  std::vector<double> rhs;
  // Columns are collected first, rows are materialised at the end.
  std::vector<std::string> column_names;
  std::map<std::string, int> column_of;
  std::vector<double> costs, lowers, uppers;
  std::vector<bool> lower_set;

  auto parse_number = [](const std::string& token, int line) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && token.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      throw LpError(fmt::format("MPS line {}: bad number '{}'", line, token));
    }
    return v;
  };

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '*') continue;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (line[0] != ' ' && line[0] != '\t') {
      const std::string& head = tok[0];
      if (head == "NAME") section = Section::kName;
      else if (head == "ROWS") section = Section::kRows;
      else if (head == "COLUMNS") section = Section::kColumns;
      else if (head == "RHS") section = Section::kRhs;
      else if (head == "BOUNDS") section = Section::kBounds;
      else if (head == "ENDATA") section = Section::kEnd;
      else
        throw LpError(fmt::format("MPS line {}: unsupported section '{}'",
                                  line_no, head));
      continue;
    }
    switch (section) {
      case Section::kRows: {
        if (tok.size() != 2) throw LpError(fmt::format("MPS line {}: bad row", line_no));
        if (tok[0] == "N") {
          if (objective_row.empty()) objective_row = tok[1];
          continue;
        }
        RowSense sense;
        if (tok[0] == "L") sense = RowSense::kLessEqual;
        else if (tok[0] == "G") sense = RowSense::kGreaterEqual;
        else if (tok[0] == "E") sense = RowSense::kEqual;
        else throw LpError(fmt::format("MPS line {}: bad row type", line_no));
        row_of[tok[1]] = static_cast<int>(pending_rows.size());
        pending_rows.push_back({tok[1], sense});
        row_terms.emplace_back();
        rhs.push_back(0.0);
        break;
      }
      case Section::kColumns: {
        if (tok.size() != 3 && tok.size() != 5) {
          throw LpError(fmt::format("MPS line {}: bad COLUMNS entry", line_no));
        }
        auto [it, inserted] = column_of.emplace(
            tok[0], static_cast<int>(column_names.size()));
        if (inserted) {
          column_names.push_back(tok[0]);
          costs.push_back(0.0);
          lowers.push_back(0.0);
          uppers.push_back(kInfinity);
          lower_set.push_back(false);
        }
        const int j = it->second;
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          const double v = parse_number(tok[k + 1], line_no);
          if (tok[k] == objective_row) {
            costs[j] += v;
            continue;
          }
          auto r = row_of.find(tok[k]);
          if (r == row_of.end()) {
            throw LpError(fmt::format("MPS line {}: unknown row '{}'", line_no, tok[k]));
          }
          row_terms[r->second].push_back({j, v});
        }
        break;
      }
      case Section::kRhs: {
        // Optional set name: an odd token count means it is present.
        const std::size_t start = tok.size() % 2 == 1 ? 1 : 0;
        for (std::size_t k = start; k + 1 < tok.size(); k += 2) {
          if (tok[k] == objective_row) continue;
          auto r = row_of.find(tok[k]);
          if (r == row_of.end()) {
            throw LpError(fmt::format("MPS line {}: unknown row '{}'", line_no, tok[k]));
          }
          rhs[r->second] = parse_number(tok[k + 1], line_no);
        }
        break;
      }
      case Section::kBounds: {
        if (tok.size() < 3) throw LpError(fmt::format("MPS line {}: bad bound", line_no));
        const std::string& type = tok[0];
        auto c = column_of.find(tok[2]);
        if (c == column_of.end()) {
          throw LpError(fmt::format("MPS line {}: unknown column '{}'", line_no, tok[2]));
        }
        const int j = c->second;
        const bool needs_value = type == "UP" || type == "LO" || type == "FX";
        if (needs_value && tok.size() < 4) {
          throw LpError(fmt::format("MPS line {}: bound without value", line_no));
        }
        const double v = needs_value ? parse_number(tok[3], line_no) : 0.0;
        if (type == "UP") {
          uppers[j] = v;
          if (v < 0.0 && !lower_set[j] && lowers[j] == 0.0) lowers[j] = -kInfinity;
        } else if (type == "LO") {
          lowers[j] = v;
          lower_set[j] = true;
        } else if (type == "FX") {
          lowers[j] = uppers[j] = v;
          lower_set[j] = true;
        } else if (type == "FR") {
          lowers[j] = -kInfinity;
          uppers[j] = kInfinity;
        } else if (type == "MI") {
          lowers[j] = -kInfinity;
          lower_set[j] = true;
        } else if (type == "PL") {
          uppers[j] = kInfinity;
        } else {
          throw LpError(fmt::format("MPS line {}: unsupported bound type '{}'",
                                    line_no, type));
        }
        break;
      }
      case Section::kName:
      case Section::kNone:
      case Section::kEnd:
        throw LpError(fmt::format("MPS line {}: data outside a section", line_no));
    }
  }
  if (section != Section::kEnd) throw LpError("MPS text lacks ENDATA");
  for (std::size_t j = 0; j < column_names.size(); ++j) {
    lp.add_variable(column_names[j], costs[j], lowers[j], uppers[j]);
  }
  for (std::size_t i = 0; i < pending_rows.size(); ++i) {
    lp.add_row(pending_rows[i].name, pending_rows[i].sense, rhs[i],
               std::move(row_terms[i]));
  }
  return lp;
}

}  // namespace egplan::lp
