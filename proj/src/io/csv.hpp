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

// Minimal CSV dialect: comma separated, '.' decimals, optional double quotes,
// '#' comment lines, header cells "name[unit]".

#ifndef EGPLAN_SRC_IO_CSV_HPP_
#define EGPLAN_SRC_IO_CSV_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "egplan/io.hpp"

namespace egplan::io {

struct CsvTable {
  std::filesystem::path file;
  std::vector<std::string> names;
  std::vector<std::string> units;  // empty for key and text columns
  std::vector<std::vector<std::string>> rows;
  std::vector<int> lines;          // source line of each row
  int header_line = 1;

  int num_rows() const { return static_cast<int>(rows.size()); }
  const std::string& cell(int row, int col) const { return rows[row][col]; }
  double number(int row, int col) const;
  bool boolean(int row, int col) const;

  // Column `name` whose header unit must equal `unit`; throws if absent or
  // the unit differs.
  int column(const std::string& name, const std::string& unit = "") const;
  std::optional<int> find(const std::string& name, const std::string& unit = "") const;

  // row < 0 points at the header.
  DataError error(int row, const std::string& msg) const;
};

CsvTable read_csv(const std::filesystem::path& file);

std::string quote(const std::string& cell);

// Splits "name[unit]"; unit is empty without brackets.
std::pair<std::string, std::string> split_header(const std::string& cell);

}  // namespace egplan::io

#endif  // EGPLAN_SRC_IO_CSV_HPP_
