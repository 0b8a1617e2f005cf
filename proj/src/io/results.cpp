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
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "csv.hpp"
#include "egplan/io.hpp"

namespace egplan {
namespace fs = std::filesystem;
namespace {

std::optional<double> as_number(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

// Numbers before text, numbers by value, text lexicographically.
bool key_less(const std::string& a, const std::string& b) {
  auto x = as_number(a), y = as_number(b);
  if (x && y) return *x < *y;
  if (x || y) return x.has_value();
  return a < b;
}

void check(const ResultTable& t) {
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) {
      throw DataError(fmt::format("table {}: row has {} cells, header has {}", t.name,
                                  row.size(), t.header.size()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (io::split_header(t.header[c]).second.empty()) continue;
      auto v = as_number(row[c]);
      if (!v || !std::isfinite(*v)) {
        throw DataError(fmt::format("table {}: column {} holds non-finite or non-numeric '{}'",
                                    t.name, t.header[c], row[c]));
      }
    }
  }
}

}  // namespace

void ResultTable::add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }

std::vector<fs::path> write_results(const ResultTables& tables, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw DataError(fmt::format("{}: {}", out_dir.string(), ec.message()));
  std::vector<fs::path> written;
  for (const auto& t : tables.tables) {
    check(t);
    auto rows = t.rows;
    const int keys = t.key_columns;
    std::stable_sort(rows.begin(), rows.end(), [keys](const auto& a, const auto& b) {
      for (int c = 0; c < keys; ++c) {
        if (key_less(a[c], b[c])) return true;
        if (key_less(b[c], a[c])) return false;
      }
      return false;
    });
    const auto path = out_dir / (t.name + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(fmt::format("{}: cannot open for writing", path.string()));
    auto line = [&out](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c) out << ',';
        out << io::quote(cells[c]);
      }
      out << '\n';
    };
    line(t.header);
    for (const auto& r : rows) line(r);
    out.close();
    if (!out) throw DataError(fmt::format("{}: write failed", path.string()));
    written.push_back(path);
  }

  const auto meta = out_dir / "run_metadata.txt";
  std::ofstream out(meta, std::ios::binary);
  if (!out) throw DataError(fmt::format("{}: cannot open for writing", meta.string()));
  for (const auto& [k, v] : tables.metadata) out << k << " = " << v << '\n';
  // Kept last so that diffs of two runs differ in one line only.
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  out << "timestamp = " << fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", now) << '\n';
  out.close();
  if (!out) throw DataError(fmt::format("{}: write failed", meta.string()));
  written.push_back(meta);
  return written;
}

ResultTable read_result_table(const fs::path& file) {
  const auto csv = io::read_csv(file);
  ResultTable t;
  t.name = file.stem().string();
  for (std::size_t c = 0; c < csv.names.size(); ++c) {
    t.header.push_back(csv.units[c].empty() ? csv.names[c]
                                            : csv.names[c] + "[" + csv.units[c] + "]");
  }
  t.rows = csv.rows;
  return t;
}

}  // namespace egplan
