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

#include "csv.hpp"

#include <charconv>
#include <fstream>

#include <fmt/format.h>

namespace egplan::io {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line, const CsvTable& t, int n) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      out.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  if (quoted) {
    throw DataError(fmt::format("{}:{}: unterminated quote", t.file.string(), n));
  }
  out.push_back(was_quoted ? cur : trim(cur));
  return out;
}

}  // namespace

std::pair<std::string, std::string> split_header(const std::string& cell) {
  const auto open = cell.find('[');
  if (open == std::string::npos || cell.back() != ']') return {cell, ""};
  return {trim(cell.substr(0, open)), cell.substr(open + 1, cell.size() - open - 2)};
}

CsvTable read_csv(const std::filesystem::path& file) {
  CsvTable t;
  t.file = file;
  std::ifstream in(file);
  if (!in) throw DataError(fmt::format("{}: cannot open", file.string()));
  std::string line;
  int n = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    auto cells = split_line(line, t, n);
    if (header) {
      for (const auto& c : cells) {
        auto [name, unit] = split_header(c);
        for (const auto& prev : t.names) {
          if (prev == name) {
            throw DataError(fmt::format("{}:{}: duplicate column '{}'", file.string(), n, name));
          }
        }
        t.names.push_back(name);
        t.units.push_back(unit);
      }
      t.header_line = n;
      header = false;
      continue;
    }
    if (cells.size() != t.names.size()) {
      throw DataError(fmt::format("{}:{}: expected {} cells, found {}", file.string(), n,
                                  t.names.size(), cells.size()));
    }
    t.rows.push_back(std::move(cells));
    t.lines.push_back(n);
  }
  if (header) throw DataError(fmt::format("{}: no header row", file.string()));
  return t;
}

double CsvTable::number(int row, int col) const {
  const auto& s = rows[row][col];
  double v = 0.0;
  const char* b = s.data();
  if (!s.empty() && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    throw error(row, fmt::format("column '{}': '{}' is not a number", names[col], s));
  }
  return v;
}

bool CsvTable::boolean(int row, int col) const {
  const auto& s = rows[row][col];
  if (s == "true") return true;
  if (s == "false") return false;
  throw error(row, fmt::format("column '{}': expected true or false, found '{}'", names[col], s));
}

std::optional<int> CsvTable::find(const std::string& name, const std::string& unit) const {
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (names[c] != name) continue;
    if (units[c] != unit) {
      throw error(-1, fmt::format("column '{}' has unit '{}', expected '{}'", name, units[c],
                                  unit));
    }
    return static_cast<int>(c);
  }
  return std::nullopt;
}

int CsvTable::column(const std::string& name, const std::string& unit) const {
  auto c = find(name, unit);
  if (!c) {
    throw error(-1, unit.empty() ? fmt::format("missing column '{}'", name)
                                 : fmt::format("missing column '{}[{}]'", name, unit));
  }
  return *c;
}

DataError CsvTable::error(int row, const std::string& msg) const {
  const int line = row >= 0 && row < num_rows() ? lines[row] : header_line;
  return DataError(fmt::format("{}:{}: {}", file.string(), line, msg));
}

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos &&
      (cell.empty() || (cell.front() != ' ' && cell.back() != ' '))) {
    return cell;
  }
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace egplan::io
