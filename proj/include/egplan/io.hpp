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

// Dataset directories (manifest.txt plus CSV tables, see
// docs/dataset_format.md) and CSV result tables.

#ifndef EGPLAN_IO_HPP_
#define EGPLAN_IO_HPP_

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "egplan/model.hpp"

namespace egplan {

// Carries "<file>:<line>: ..." or "<file>: ..." in what().
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetInfo {
  std::string name;
  std::filesystem::path root;
  std::string hash;                   // FNV-1a 64 over manifest and tables, hex
  std::vector<Diagnostic> warnings;   // validation warnings
};

// Parses, assembles and validates. Validation errors become a DataError
// listing every diagnostic.
EnergyModel load_dataset(const std::filesystem::path& root,
                         DatasetInfo* info = nullptr);

// Writes every surface of `model` in the format load_dataset reads; the
// reloaded model compares equal.
void write_dataset(const EnergyModel& model, const std::filesystem::path& dir,
                   const std::string& name = "dataset");

std::string dataset_hash(const std::filesystem::path& root);

// Shortest text that parses back to the same double. Throws DataError on
// NaN or infinity.
std::string format_number(double v);

struct ResultTable {
  std::string name;              // file stem
  std::vector<std::string> header;  // "name[unit]" for numeric columns
  int key_columns = 0;           // leading columns that index a row
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

struct ResultTables {
  std::vector<ResultTable> tables;
  std::map<std::string, std::string> metadata;  // run_metadata.txt entries
};

// One <name>.csv per table with rows sorted by their key columns (numbers
// compare numerically) and run_metadata.txt with a trailing timestamp line.
// Returns the written paths.
std::vector<std::filesystem::path> write_results(
    const ResultTables& tables, const std::filesystem::path& out_dir);

// Reads a table written by write_results; key_columns stays 0.
ResultTable read_result_table(const std::filesystem::path& file);

}  // namespace egplan

#endif  // EGPLAN_IO_HPP_
