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
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "egplan/io.hpp"
#include "csv.hpp"

namespace egplan {
namespace fs = std::filesystem;
namespace {

using io::CsvTable;
using io::read_csv;

// Table names, default file names and whether a dataset must ship them.
struct TableSpec {
  const char* name;
  bool required;
};

constexpr TableSpec kTables[] = {
    {"technologies", true},       {"efficiency_overrides", false},
    {"electricity_nodes", true},  {"existing_capacity", false},
    {"new_capacity_max", false},  {"production_factor", false},
    {"chp", false},               {"electricity_arcs", false},
    {"gas_nodes", false},         {"gas_storage", false},
    {"gas_storage_caps", false},  {"gas_suppliers", false},
    {"gas_supply_caps", false},   {"gas_arcs", false},
    {"gas_arc_caps", false},      {"gas_contracts", false},
    {"time_grid", false},         {"electricity_demand", true},
    {"gas_demand", false},        {"res_capacity", false},
    {"fuel_prices", false},       {"co2_prices", true},
};

const std::set<std::string> kManifestKeys = {
    "name",          "years",         "hours",         "discount_rate",
    "year_weights",  "branches",      "probabilities", "literal_psp_balance",
    "storage_loss"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  s = std::string_view(s.data(), s.size());
  while (!s.empty() && (s.front() == ' ' || s.front() == '+')) s.remove_prefix(1);
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

// Accepts "a/b" so probabilities such as 1/3 load exactly.
std::optional<double> parse_ratio(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return parse_double(s);
  auto a = parse_double(trim(s.substr(0, slash)));
  auto b = parse_double(trim(s.substr(slash + 1)));
  if (!a || !b || *b == 0.0) return std::nullopt;
  return *a / *b;
}

struct Manifest {
  fs::path file;
  std::map<std::string, std::string> values;
  std::map<std::string, int> lines;
  std::map<std::string, fs::path> tables;

  const std::string& get(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) {
      throw DataError(fmt::format("{}: missing required key '{}'", file.string(), key));
    }
    return it->second;
  }
  DataError error(const std::string& key, const std::string& msg) const {
    auto it = lines.find(key);
    return DataError(fmt::format("{}:{}: {}", file.string(),
                                 it == lines.end() ? 0 : it->second, msg));
  }
};

Manifest read_manifest(const fs::path& root) {
  Manifest m;
  m.file = root / "manifest.txt";
  std::ifstream in(m.file);
  if (!in) throw DataError(fmt::format("{}: cannot open manifest", m.file.string()));
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError(fmt::format("{}:{}: expected 'key = value'", m.file.string(), n));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.starts_with("table.")) {
      m.tables[key.substr(6)] = value;
    } else if (!kManifestKeys.contains(key)) {
      throw DataError(fmt::format("{}:{}: unknown key '{}'", m.file.string(), n, key));
    }
    if (m.values.contains(key)) {
      throw DataError(fmt::format("{}:{}: duplicate key '{}'", m.file.string(), n, key));
    }
    m.values[key] = value;
    m.lines[key] = n;
  }
  for (const auto& [name, path] : m.tables) {
    bool known = false;
    for (const auto& t : kTables) known = known || name == t.name;
    if (!known) throw m.error("table." + name, "unknown table '" + name + "'");
  }
  return m;
}

fs::path table_path(const fs::path& root, const Manifest& m, const std::string& name) {
  auto it = m.tables.find(name);
  return root / (it == m.tables.end() ? fs::path(name + ".csv") : it->second);
}

// Fills a dense vector and remembers which slots were set, so that a missing
// row is reported with its index instead of defaulting to zero.
class Surface {
 public:
  Surface(std::vector<double>& v, std::size_t n) : v_(v), seen_(n, false) {
    v_.assign(n, 0.0);
  }
  void set(std::size_t k, double value, const CsvTable& t, int row) {
    if (seen_[k]) throw t.error(row, "duplicate row");
    seen_[k] = true;
    v_[k] = value;
  }
  // describe(k) gives the index of slot k, e.g. "year=2030,hour=4".
  void require(const CsvTable& t, const std::string& what,
               const std::function<std::string(std::size_t)>& describe) const {
    for (std::size_t k = 0; k < seen_.size(); ++k) {
      if (!seen_[k]) {
        throw DataError(fmt::format("{}: missing row for {} {}", t.file.string(), what,
                                    describe(k)));
      }
    }
  }

 private:
  std::vector<double>& v_;
  std::vector<bool> seen_;
};

class Loader {
 public:
  explicit Loader(fs::path root) : root_(std::move(root)) {}

  EnergyModel run(DatasetInfo* info) {
    manifest_ = read_manifest(root_);
    for (const auto& t : kTables) {
      const auto p = table_path(root_, manifest_, t.name);
      if (t.required && !fs::exists(p)) {
        throw DataError(fmt::format("{}: required table is missing", p.string()));
      }
      if (manifest_.tables.contains(t.name) && !fs::exists(p)) {
        throw manifest_.error(std::string("table.") + t.name,
                              "file " + p.string() + " does not exist");
      }
    }
    read_settings();
    read_technologies();
    read_electricity();
    read_gas();
    read_branches();

    auto diagnostics = validate(m_);
    if (has_errors(diagnostics)) {
      std::string msg = fmt::format("{}: dataset fails validation", root_.string());
      for (const auto& d : diagnostics) {
        if (d.severity == Severity::kError) msg += "\n  " + to_string(d);
      }
      throw DataError(msg);
    }
    if (info) {
      info->name = name_;
      info->root = root_;
      info->hash = dataset_hash(root_);
      info->warnings.clear();
      for (auto& d : diagnostics) info->warnings.push_back(std::move(d));
    }
    return std::move(m_);
  }

 private:
  std::optional<CsvTable> open(const std::string& name) {
    const auto p = table_path(root_, manifest_, name);
    if (!fs::exists(p)) return std::nullopt;
    return read_csv(p);
  }

  int year(const CsvTable& t, int row, int col) const {
    const double y = t.number(row, col);
    auto k = m_.time.year_index(static_cast<int>(y));
    if (!k || y != std::floor(y)) {
      throw t.error(row, fmt::format("year {} is not a representative year",
                                     t.cell(row, col)));
    }
    return *k;
  }
  int hour(const CsvTable& t, int row, int col) const {
    const double h = t.number(row, col);
    if (h != std::floor(h) || h < 1 || h > m_.time.num_hours()) {
      throw t.error(row, fmt::format("hour {} outside 1..{}", t.cell(row, col),
                                     m_.time.num_hours()));
    }
    return static_cast<int>(h) - 1;
  }
  int month(const CsvTable& t, int row, int col) const {
    const double mo = t.number(row, col);
    if (mo != std::floor(mo) || mo < 1 || mo > kMonths) {
      throw t.error(row, fmt::format("month {} outside 1..12", t.cell(row, col)));
    }
    return static_cast<int>(mo) - 1;
  }
  std::string year_label(std::size_t y) const {
    return std::to_string(m_.time.years[y]);
  }
  std::function<std::string(std::size_t)> per_year() const {
    return [this](std::size_t k) { return "year=" + year_label(k); };
  }
  std::function<std::string(std::size_t)> per_year_month() const {
    return [this](std::size_t k) {
      return fmt::format("year={},month={}", year_label(k / kMonths), k % kMonths + 1);
    };
  }
  std::function<std::string(std::size_t)> per_year_hour() const {
    const std::size_t H = m_.time.num_hours();
    return [this, H](std::size_t k) {
      return fmt::format("year={},hour={}", year_label(k / H), k % H + 1);
    };
  }

  const Technology& technology(const CsvTable& t, int row, int col) const {
    auto i = m_.technology_index(t.cell(row, col));
    if (!i) throw t.error(row, "unknown technology '" + t.cell(row, col) + "'");
    return m_.technologies[*i];
  }
  const std::string& electricity_node(const CsvTable& t, int row, int col) const {
    if (!m_.electricity_node_index(t.cell(row, col))) {
      throw t.error(row, "unknown electricity node '" + t.cell(row, col) + "'");
    }
    return t.cell(row, col);
  }
  int gas_node(const CsvTable& t, int row, int col) const {
    auto i = m_.gas_node_index(t.cell(row, col));
    if (!i) throw t.error(row, "unknown gas node '" + t.cell(row, col) + "'");
    return *i;
  }
  int gas_arc(const CsvTable& t, int row, int from, int to) const {
    for (std::size_t a = 0; a < m_.gas_arcs.size(); ++a) {
      if (m_.gas_arcs[a].from == t.cell(row, from) && m_.gas_arcs[a].to == t.cell(row, to)) {
        return static_cast<int>(a);
      }
    }
    throw t.error(row, fmt::format("unknown gas arc {}->{}", t.cell(row, from),
                                   t.cell(row, to)));
  }

  void read_settings() {
    name_ = manifest_.values.contains("name") ? manifest_.get("name") : root_.filename().string();
    std::vector<int> years;
    for (const auto& y : split_list(manifest_.get("years"))) {
      auto v = parse_double(y);
      if (!v || *v != std::floor(*v)) throw manifest_.error("years", "bad year '" + y + "'");
      years.push_back(static_cast<int>(*v));
    }
    if (years.empty()) throw manifest_.error("years", "no representative years");
    if (!std::is_sorted(years.begin(), years.end()) ||
        std::adjacent_find(years.begin(), years.end()) != years.end()) {
      throw manifest_.error("years", "years must be strictly increasing");
    }
    double rate = 0.05;
    if (manifest_.values.contains("discount_rate")) {
      auto r = parse_double(manifest_.get("discount_rate"));
      if (!r) throw manifest_.error("discount_rate", "not a number");
      rate = *r;
    }
    std::vector<double> year_weights;
    if (manifest_.values.contains("year_weights")) {
      for (const auto& w : split_list(manifest_.get("year_weights"))) {
        auto v = parse_double(w);
        if (!v) throw manifest_.error("year_weights", "bad weight '" + w + "'");
        year_weights.push_back(*v);
      }
      if (year_weights.size() != years.size()) {
        throw manifest_.error("year_weights", "need one weight per year");
      }
    }
    try {
      if (auto grid = open("time_grid")) {
        const int ch = grid->column("hour");
        const int cm = grid->column("month");
        const int cw = grid->column("weight", "h");
        std::vector<int> months(grid->rows.size());
        std::vector<double> weights(grid->rows.size());
        std::vector<bool> seen(grid->rows.size(), false);
        for (int r = 0; r < grid->num_rows(); ++r) {
          const double h = grid->number(r, ch);
          if (h != std::floor(h) || h < 1 || h > grid->num_rows()) {
            throw grid->error(r, fmt::format("hour {} outside 1..{}", grid->cell(r, ch),
                                             grid->num_rows()));
          }
          const auto k = static_cast<std::size_t>(h) - 1;
          if (seen[k]) throw grid->error(r, "duplicate row");
          seen[k] = true;
          months[k] = month(*grid, r, cm);
          weights[k] = grid->number(r, cw);
        }
        if (manifest_.values.contains("hours") &&
            parse_double(manifest_.get("hours")) != static_cast<double>(months.size())) {
          throw manifest_.error("hours", "disagrees with the time_grid table");
        }
        m_.time = TimeGrid::custom(years, months, weights, rate, year_weights);
      } else {
        auto h = parse_double(manifest_.get("hours"));
        if (!h || *h != std::floor(*h)) throw manifest_.error("hours", "not an integer");
        m_.time = TimeGrid::make(years, static_cast<int>(*h), rate, year_weights);
      }
    } catch (const ModelError& e) {
      throw DataError(fmt::format("{}: {}", manifest_.file.string(), e.what()));
    }

    if (manifest_.values.contains("literal_psp_balance")) {
      const auto& v = manifest_.get("literal_psp_balance");
      if (v != "true" && v != "false") {
        throw manifest_.error("literal_psp_balance", "expected true or false");
      }
      m_.options.literal_psp_balance = v == "true";
    }
    if (manifest_.values.contains("storage_loss") &&
        manifest_.get("storage_loss") != "injection") {
      throw manifest_.error("storage_loss",
                            "only 'injection' (loss charged on injected volume) is supported");
    }
  }

  void read_technologies() {
    auto t = *open("technologies");
    const int cid = t.column("id"), ckind = t.column("kind"), cfuel = t.column("fuel");
    const int ceta = t.column("efficiency", "fraction");
    const int caf = t.column("availability", "fraction");
    const int ccc = t.column("carbon_content", "tCO2/MWh_th");
    const int cic = t.column("investment_cost", "EUR/MW_el/a");
    const int ccpf = t.column("capacity_power_factor", "h");
    const int cflh = t.column("full_load_hours", "h");
    const int cvom = t.column("vom", "EUR/MWh_el");
    const int cinv = t.column("investable");
    for (int r = 0; r < t.num_rows(); ++r) {
      Technology tech;
      tech.id = t.cell(r, cid);
      if (m_.technology_index(tech.id)) throw t.error(r, "duplicate technology " + tech.id);
      auto kind = parse_tech_class(t.cell(r, ckind));
      if (!kind) {
        throw t.error(r, "kind '" + t.cell(r, ckind) +
                             "' is not one of thermal, gas, res, psp, reservoir");
      }
      tech.kind = *kind;
      tech.fuel = t.cell(r, cfuel);
      tech.efficiency = t.number(r, ceta);
      tech.availability = t.number(r, caf);
      tech.carbon_content = t.number(r, ccc);
      tech.investment_cost = t.number(r, cic);
      tech.capacity_power_factor = t.number(r, ccpf);
      tech.full_load_hours = t.number(r, cflh);
      tech.vom = t.number(r, cvom);
      tech.investable = t.boolean(r, cinv);
      m_.technologies.push_back(std::move(tech));
    }
  }

  // Rows (tech, node, year, value) into a per-year vector chosen by `slot`.
  template <class Slot>
  void read_tech_node_year(CsvTable& t, const std::string& value, const std::string& unit,
                           Slot slot) {
    const int ct = t.column("tech"), cn = t.column("node"), cy = t.column("year");
    const int cv = t.column(value, unit);
    std::map<std::pair<std::string, std::string>, Surface> surfaces;
    for (int r = 0; r < t.num_rows(); ++r) {
      auto& tech = m_.technologies[*m_.technology_index(technology(t, r, ct).id)];
      const auto& node_id = electricity_node(t, r, cn);
      auto& node = m_.electricity_nodes[*m_.electricity_node_index(node_id)];
      auto key = std::make_pair(tech.id, node_id);
      auto it = surfaces.find(key);
      if (it == surfaces.end()) {
        it = surfaces
                 .emplace(key, Surface(slot(tech, &node, node_id),
                                       static_cast<std::size_t>(m_.time.num_years())))
                 .first;
      }
      it->second.set(year(t, r, cy), t.number(r, cv), t, r);
    }
    for (const auto& [key, s] : surfaces) {
      s.require(t, fmt::format("tech={},node={}", key.first, key.second), per_year());
    }
  }

  void read_electricity() {
    auto nodes = *open("electricity_nodes");
    const int cid = nodes.column("id");
    const int cvola = nodes.column("vola", "EUR/MWh_el");
    const int csf = nodes.column("shed_max", "fraction");
    for (int r = 0; r < nodes.num_rows(); ++r) {
      ElectricityNode n;
      n.id = nodes.cell(r, cid);
      if (m_.electricity_node_index(n.id)) throw nodes.error(r, "duplicate node " + n.id);
      n.vola = nodes.number(r, cvola);
      n.shed_max = nodes.number(r, csf);
      m_.electricity_nodes.push_back(std::move(n));
    }
    if (auto o = open("efficiency_overrides")) {
      read_tech_node_year(*o, "efficiency", "fraction",
                          [](Technology& tech, ElectricityNode* node, const std::string&)
                              -> std::vector<double>& { return tech.node_efficiency[node->id]; });
    }
    if (auto t = open("existing_capacity")) {
      read_tech_node_year(*t, "capacity", "MW_el",
                          [&](Technology& tech, ElectricityNode* node, const std::string&)
                              -> std::vector<double>& {
                            if (tech.is_res()) {
                              throw DataError(fmt::format(
                                  "{}: RES capacity of {} belongs in res_capacity.csv",
                                  t->file.string(), tech.id));
                            }
                            return node->existing[tech.id];
                          });
    }
    if (auto t = open("new_capacity_max")) {
      read_tech_node_year(*t, "capacity", "MW_el",
                          [](Technology& tech, ElectricityNode* node, const std::string&)
                              -> std::vector<double>& { return node->new_capacity_max[tech.id]; });
    }
    const std::size_t H = m_.time.num_hours();
    const std::size_t Y = m_.time.num_years();
    if (auto t = open("production_factor")) {
      const int ct = t->column("tech"), cn = t->column("node"), ch = t->column("hour");
      const int cv = t->column("factor", "fraction");
      std::map<std::pair<std::string, std::string>, Surface> surfaces;
      for (int r = 0; r < t->num_rows(); ++r) {
        const auto& tech = technology(*t, r, ct);
        if (!tech.is_res()) throw t->error(r, tech.id + " is not a RES technology");
        const auto& node_id = electricity_node(*t, r, cn);
        auto& node = m_.electricity_nodes[*m_.electricity_node_index(node_id)];
        auto key = std::make_pair(tech.id, node_id);
        auto it = surfaces.find(key);
        if (it == surfaces.end()) {
          it = surfaces.emplace(key, Surface(node.production_factor[tech.id], H)).first;
        }
        it->second.set(hour(*t, r, ch), t->number(r, cv), *t, r);
      }
      for (const auto& [key, s] : surfaces) {
        s.require(*t, fmt::format("tech={},node={}", key.first, key.second),
                  [](std::size_t k) { return fmt::format("hour={}", k + 1); });
      }
    }
    if (auto t = open("chp")) {
      const int cn = t->column("node"), cy = t->column("year"), ch = t->column("hour");
      const int cv = t->column("chp", "MW_el");
      std::map<std::string, Surface> surfaces;
      for (int r = 0; r < t->num_rows(); ++r) {
        const auto& node_id = electricity_node(*t, r, cn);
        auto& node = m_.electricity_nodes[*m_.electricity_node_index(node_id)];
        auto it = surfaces.find(node_id);
        if (it == surfaces.end()) it = surfaces.emplace(node_id, Surface(node.chp, Y * H)).first;
        it->second.set(year(*t, r, cy) * H + hour(*t, r, ch), t->number(r, cv), *t, r);
      }
      for (const auto& [id, s] : surfaces) s.require(*t, "node=" + id, per_year_hour());
    }
    if (auto t = open("electricity_arcs")) {
      const int cf = t->column("from"), ct = t->column("to"), cy = t->column("year");
      const int cv = t->column("ntc", "MW_el");
      std::map<std::pair<std::string, std::string>, std::size_t> pos;
      std::vector<Surface> surfaces;
      m_.electricity_arcs.reserve(t->rows.size());
      for (int r = 0; r < t->num_rows(); ++r) {
        auto key = std::make_pair(electricity_node(*t, r, cf), electricity_node(*t, r, ct));
        auto it = pos.find(key);
        if (it == pos.end()) {
          m_.electricity_arcs.push_back({key.first, key.second, {}});
          surfaces.emplace_back(m_.electricity_arcs.back().ntc, Y);
          it = pos.emplace(key, surfaces.size() - 1).first;
        }
        surfaces[it->second].set(year(*t, r, cy), t->number(r, cv), *t, r);
      }
      for (const auto& [key, k] : pos) {
        surfaces[k].require(*t, fmt::format("from={},to={}", key.first, key.second), per_year());
      }
    }
  }

  void read_gas() {
    const std::size_t Y = m_.time.num_years();
    auto nodes = open("gas_nodes");
    if (!nodes) return;
    const int cid = nodes->column("id"), cso = nodes->column("supply_only");
    for (int r = 0; r < nodes->num_rows(); ++r) {
      GasNode g;
      g.id = nodes->cell(r, cid);
      if (m_.gas_node_index(g.id)) throw nodes->error(r, "duplicate gas node " + g.id);
      g.supply_only = nodes->boolean(r, cso);
      m_.gas_nodes.push_back(std::move(g));
    }
    if (auto t = open("gas_storage")) {
      const int cn = t->column("node");
      const int cic = t->column("injection_cost", "EUR/MWh_th");
      const int cwc = t->column("withdrawal_cost", "EUR/MWh_th");
      const int csl = t->column("start_level", "MWh_th");
      const int cel = t->column("end_level", "MWh_th");
      const int cl = t->column("loss", "fraction");
      for (int r = 0; r < t->num_rows(); ++r) {
        auto& node = m_.gas_nodes[gas_node(*t, r, cn)];
        if (node.storage) throw t->error(r, "duplicate storage at " + node.id);
        GasStorage st;
        st.injection_cost = t->number(r, cic);
        st.withdrawal_cost = t->number(r, cwc);
        st.start_level = t->number(r, csl);
        st.end_level = t->number(r, cel);
        st.loss = t->number(r, cl);
        node.storage = st;
      }
      auto caps = open("gas_storage_caps");
      if (!caps) {
        throw DataError(fmt::format("{}: storage rows need gas_storage_caps.csv",
                                    t->file.string()));
      }
      const int kn = caps->column("node"), ky = caps->column("year"), km = caps->column("month");
      const int cw = caps->column("working_volume", "MWh_th");
      const int ci = caps->column("injection_cap", "MWh_th/month");
      const int co = caps->column("withdrawal_cap", "MWh_th/month");
      std::map<std::string, std::array<Surface, 3>> surfaces;
      for (int r = 0; r < caps->num_rows(); ++r) {
        auto& node = m_.gas_nodes[gas_node(*caps, r, kn)];
        if (!node.storage) throw caps->error(r, "no storage declared at " + node.id);
        auto it = surfaces.find(node.id);
        if (it == surfaces.end()) {
          auto& st = *node.storage;
          it = surfaces
                   .emplace(node.id, std::array<Surface, 3>{
                                         Surface(st.working_volume, Y * kMonths),
                                         Surface(st.injection_cap, Y * kMonths),
                                         Surface(st.withdrawal_cap, Y * kMonths)})
                   .first;
        }
        const std::size_t k = year(*caps, r, ky) * kMonths + month(*caps, r, km);
        it->second[0].set(k, caps->number(r, cw), *caps, r);
        it->second[1].set(k, caps->number(r, ci), *caps, r);
        it->second[2].set(k, caps->number(r, co), *caps, r);
      }
      for (const auto& node : m_.gas_nodes) {
        if (!node.storage) continue;
        auto it = surfaces.find(node.id);
        if (it == surfaces.end()) {
          throw DataError(fmt::format("{}: missing rows for storage at {}",
                                      caps->file.string(), node.id));
        }
        it->second[0].require(*caps, "node=" + node.id, per_year_month());
      }
    }
    if (auto t = open("gas_suppliers")) {
      const int cid = t->column("id"), cn = t->column("node");
      const int cc = t->column("cost", "EUR/MWh_th");
      for (int r = 0; r < t->num_rows(); ++r) {
        GasSupplier p;
        p.id = t->cell(r, cid);
        for (const auto& q : m_.gas_suppliers) {
          if (q.id == p.id) throw t->error(r, "duplicate supplier " + p.id);
        }
        p.node = m_.gas_nodes[gas_node(*t, r, cn)].id;
        p.cost = t->number(r, cc);
        m_.gas_suppliers.push_back(std::move(p));
      }
      auto caps = open("gas_supply_caps");
      if (!caps) {
        throw DataError(fmt::format("{}: suppliers need gas_supply_caps.csv", t->file.string()));
      }
      const int ks = caps->column("supplier"), ky = caps->column("year"), km = caps->column("month");
      const int cv = caps->column("capacity", "MWh_th/month");
      std::vector<Surface> surfaces;
      for (auto& p : m_.gas_suppliers) surfaces.emplace_back(p.capacity, Y * kMonths);
      for (int r = 0; r < caps->num_rows(); ++r) {
        std::size_t p = 0;
        while (p < m_.gas_suppliers.size() && m_.gas_suppliers[p].id != caps->cell(r, ks)) ++p;
        if (p == m_.gas_suppliers.size()) {
          throw caps->error(r, "unknown supplier '" + caps->cell(r, ks) + "'");
        }
        surfaces[p].set(year(*caps, r, ky) * kMonths + month(*caps, r, km),
                        caps->number(r, cv), *caps, r);
      }
      for (std::size_t p = 0; p < surfaces.size(); ++p) {
        surfaces[p].require(*caps, "supplier=" + m_.gas_suppliers[p].id, per_year_month());
      }
    }
    if (auto t = open("gas_arcs")) {
      const int cf = t->column("from"), ct = t->column("to");
      const int cc = t->column("cost", "EUR/MWh_th");
      const auto ctop = t->find("take_or_pay", "fraction");
      for (int r = 0; r < t->num_rows(); ++r) {
        GasArc a;
        a.from = m_.gas_nodes[gas_node(*t, r, cf)].id;
        a.to = m_.gas_nodes[gas_node(*t, r, ct)].id;
        for (const auto& b : m_.gas_arcs) {
          if (b.from == a.from && b.to == a.to) {
            throw t->error(r, fmt::format("duplicate gas arc {}->{}", a.from, a.to));
          }
        }
        a.cost = t->number(r, cc);
        // An empty cell keeps the 70 % default.
        if (ctop && !t->cell(r, *ctop).empty()) a.take_or_pay = t->number(r, *ctop);
        m_.gas_arcs.push_back(std::move(a));
      }
      auto caps = open("gas_arc_caps");
      if (!caps) {
        throw DataError(fmt::format("{}: arcs need gas_arc_caps.csv", t->file.string()));
      }
      const int kf = caps->column("from"), kt = caps->column("to"), ky = caps->column("year");
      const int cv = caps->column("capacity", "MWh_th/month");
      std::vector<Surface> surfaces;
      for (auto& a : m_.gas_arcs) surfaces.emplace_back(a.capacity, Y);
      for (int r = 0; r < caps->num_rows(); ++r) {
        surfaces[gas_arc(*caps, r, kf, kt)].set(year(*caps, r, ky), caps->number(r, cv), *caps, r);
      }
      for (std::size_t a = 0; a < surfaces.size(); ++a) {
        surfaces[a].require(*caps,
                            fmt::format("from={},to={}", m_.gas_arcs[a].from, m_.gas_arcs[a].to),
                            per_year());
      }
      if (auto ltc = open("gas_contracts")) {
        const int lf = ltc->column("from"), lt = ltc->column("to");
        const int ly = ltc->column("year"), lm = ltc->column("month");
        const int lv = ltc->column("volume", "MWh_th/month");
        std::map<int, Surface> contracts;
        for (int r = 0; r < ltc->num_rows(); ++r) {
          const int a = gas_arc(*ltc, r, lf, lt);
          auto it = contracts.find(a);
          if (it == contracts.end()) {
            it = contracts.emplace(a, Surface(m_.gas_arcs[a].contract, Y * kMonths)).first;
          }
          it->second.set(year(*ltc, r, ly) * kMonths + month(*ltc, r, lm), ltc->number(r, lv),
                         *ltc, r);
        }
        for (const auto& [a, s] : contracts) {
          s.require(*ltc, fmt::format("from={},to={}", m_.gas_arcs[a].from, m_.gas_arcs[a].to),
                    per_year_month());
        }
      }
    }
  }

  // Scenario tables: key columns followed by one "<branch>[unit]" column per
  // declared branch, no more and no fewer.
  std::vector<int> branch_columns(const CsvTable& t, std::size_t keys, const std::string& unit) {
    std::vector<int> cols;
    for (const auto& b : m_.branches) cols.push_back(t.column(b.id, unit));
    if (t.names.size() != keys + cols.size()) {
      for (std::size_t c = keys; c < t.names.size(); ++c) {
        if (!m_.branch_index(t.names[c])) {
          throw t.error(-1, "column '" + t.names[c] + "' is not a declared branch");
        }
      }
    }
    return cols;
  }

  void read_branches() {
    const auto ids = split_list(manifest_.get("branches"));
    if (ids.empty()) throw manifest_.error("branches", "no branches declared");
    std::vector<double> probs(ids.size(), 1.0 / static_cast<double>(ids.size()));
    if (manifest_.values.contains("probabilities")) {
      const auto list = split_list(manifest_.get("probabilities"));
      if (list.size() != ids.size()) {
        throw manifest_.error("probabilities", "need one probability per branch");
      }
      for (std::size_t k = 0; k < list.size(); ++k) {
        auto p = parse_ratio(list[k]);
        if (!p) throw manifest_.error("probabilities", "bad probability '" + list[k] + "'");
        probs[k] = *p;
      }
    }
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (m_.branch_index(ids[k])) throw manifest_.error("branches", "duplicate branch " + ids[k]);
      ScenarioBranch b;
      b.id = ids[k];
      b.probability = probs[k];
      m_.branches.push_back(std::move(b));
    }
    const std::size_t Y = m_.time.num_years();
    const std::size_t H = m_.time.num_hours();
    const std::size_t S = m_.branches.size();

    {
      auto t = *open("electricity_demand");
      const int cn = t.column("node"), cy = t.column("year"), ch = t.column("hour");
      const auto cols = branch_columns(t, 3, "MWh_el/h");
      std::map<std::string, std::vector<Surface>> surfaces;
      for (int r = 0; r < t.num_rows(); ++r) {
        const auto& node = electricity_node(t, r, cn);
        auto it = surfaces.find(node);
        if (it == surfaces.end()) {
          std::vector<Surface> v;
          for (auto& b : m_.branches) v.emplace_back(b.electricity_demand[node], Y * H);
          it = surfaces.emplace(node, std::move(v)).first;
        }
        const std::size_t k = year(t, r, cy) * H + hour(t, r, ch);
        for (std::size_t s = 0; s < S; ++s) it->second[s].set(k, t.number(r, cols[s]), t, r);
      }
      for (const auto& node : m_.electricity_nodes) {
        auto it = surfaces.find(node.id);
        if (it == surfaces.end()) {
          throw DataError(fmt::format("{}: missing rows for node={}", t.file.string(), node.id));
        }
        it->second[0].require(t, "node=" + node.id, per_year_hour());
      }
    }
    if (auto t = open("gas_demand")) {
      const int cn = t->column("node"), cy = t->column("year"), cm = t->column("month");
      const auto cols = branch_columns(*t, 3, "MWh_th/month");
      std::map<std::string, std::vector<Surface>> surfaces;
      for (int r = 0; r < t->num_rows(); ++r) {
        const auto& node = m_.gas_nodes[gas_node(*t, r, cn)].id;
        auto it = surfaces.find(node);
        if (it == surfaces.end()) {
          std::vector<Surface> v;
          for (auto& b : m_.branches) v.emplace_back(b.gas_demand[node], Y * kMonths);
          it = surfaces.emplace(node, std::move(v)).first;
        }
        const std::size_t k = year(*t, r, cy) * kMonths + month(*t, r, cm);
        for (std::size_t s = 0; s < S; ++s) it->second[s].set(k, t->number(r, cols[s]), *t, r);
      }
      for (const auto& [node, v] : surfaces) v[0].require(*t, "node=" + node, per_year_month());
      for (const auto& g : m_.gas_nodes) {
        if (!g.supply_only && !surfaces.contains(g.id)) {
          throw DataError(fmt::format("{}: missing rows for node={}", t->file.string(), g.id));
        }
      }
    } else {
      for (const auto& g : m_.gas_nodes) {
        if (!g.supply_only) {
          throw DataError(fmt::format("{}: gas node {} consumes gas but gas_demand.csv is missing",
                                      root_.string(), g.id));
        }
      }
    }
    if (auto t = open("res_capacity")) {
      const int ct = t->column("tech"), cn = t->column("node"), cy = t->column("year");
      const auto cols = branch_columns(*t, 3, "MW_el");
      std::map<TechNode, std::vector<Surface>> surfaces;
      for (int r = 0; r < t->num_rows(); ++r) {
        const auto& tech = technology(*t, r, ct);
        if (!tech.is_res()) throw t->error(r, tech.id + " is not a RES technology");
        const TechNode key{tech.id, electricity_node(*t, r, cn)};
        auto it = surfaces.find(key);
        if (it == surfaces.end()) {
          std::vector<Surface> v;
          for (auto& b : m_.branches) v.emplace_back(b.res_capacity[key], Y);
          it = surfaces.emplace(key, std::move(v)).first;
        }
        const std::size_t y = year(*t, r, cy);
        for (std::size_t s = 0; s < S; ++s) it->second[s].set(y, t->number(r, cols[s]), *t, r);
      }
      for (const auto& [key, v] : surfaces) {
        v[0].require(*t, fmt::format("tech={},node={}", key.first, key.second), per_year());
      }
    }
    if (auto t = open("fuel_prices")) {
      const int cf = t->column("fuel"), cy = t->column("year");
      const auto cols = branch_columns(*t, 2, "EUR/MWh_th");
      std::map<std::string, std::vector<Surface>> surfaces;
      for (int r = 0; r < t->num_rows(); ++r) {
        const auto& fuel = t->cell(r, cf);
        auto it = surfaces.find(fuel);
        if (it == surfaces.end()) {
          std::vector<Surface> v;
          for (auto& b : m_.branches) v.emplace_back(b.prices.fuel[fuel], Y);
          it = surfaces.emplace(fuel, std::move(v)).first;
        }
        const std::size_t y = year(*t, r, cy);
        for (std::size_t s = 0; s < S; ++s) it->second[s].set(y, t->number(r, cols[s]), *t, r);
      }
      for (const auto& [fuel, v] : surfaces) v[0].require(*t, "fuel=" + fuel, per_year());
    }
    {
      auto t = *open("co2_prices");
      const int cy = t.column("year");
      const auto cols = branch_columns(t, 1, "EUR/t");
      std::vector<Surface> v;
      for (auto& b : m_.branches) v.emplace_back(b.prices.co2, Y);
      for (int r = 0; r < t.num_rows(); ++r) {
        const std::size_t y = year(t, r, cy);
        for (std::size_t s = 0; s < S; ++s) v[s].set(y, t.number(r, cols[s]), t, r);
      }
      v[0].require(t, "co2", per_year());
    }
  }

  fs::path root_;
  Manifest manifest_;
  std::string name_;
  EnergyModel m_;
};

// --- writing -------------------------------------------------------------

class Writer {
 public:
  explicit Writer(fs::path path) : path_(std::move(path)), out_(path_) {
    if (!out_) throw DataError(fmt::format("{}: cannot open for writing", path_.string()));
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out_ << ',';
      out_ << io::quote(cells[k]);
    }
    out_ << '\n';
    if (!out_) throw DataError(fmt::format("{}: write failed", path_.string()));
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

std::string num(double v) { return format_number(v); }

}  // namespace

EnergyModel load_dataset(const fs::path& root, DatasetInfo* info) {
  return Loader(root).run(info);
}

std::string format_number(double v) {
  if (!std::isfinite(v)) throw DataError(fmt::format("non-finite value {}", v));
  if (v == 0.0) return "0";  // also folds -0
  return fmt::format("{}", v);
}

std::string dataset_hash(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    const auto ext = e.path().extension();
    if (ext == ".csv" || e.path().filename() == "manifest.txt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& f : files) {
    mix(f.filename().string());
    mix(std::string(1, '\0'));
    std::ifstream in(f, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    mix(ss.str());
  }
  return fmt::format("{:016x}", h);
}

void write_dataset(const EnergyModel& m, const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  const auto& T = m.time;
  const int Y = T.num_years(), H = T.num_hours();
  auto yr = [&](int y) { return std::to_string(T.years[y]); };
  std::vector<std::string> branch_ids;
  for (const auto& b : m.branches) branch_ids.push_back(b.id);
  auto branch_header = [&](std::vector<std::string> keys, const std::string& unit) {
    for (const auto& id : branch_ids) keys.push_back(id + "[" + unit + "]");
    return keys;
  };

  {
    std::ofstream out(dir / "manifest.txt");
    if (!out) throw DataError(fmt::format("{}: cannot open for writing", (dir / "manifest.txt").string()));
    std::vector<std::string> years, yw, probs;
    for (int y = 0; y < Y; ++y) {
      years.push_back(yr(y));
      yw.push_back(num(T.year_weight[y]));
    }
    for (const auto& b : m.branches) probs.push_back(num(b.probability));
    out << "name = " << name << '\n'
        << "years = " << fmt::format("{}", fmt::join(years, ", ")) << '\n'
        << "hours = " << H << '\n'
        << "discount_rate = " << num(T.discount_rate) << '\n'
        << "year_weights = " << fmt::format("{}", fmt::join(yw, ", ")) << '\n'
        << "branches = " << fmt::format("{}", fmt::join(branch_ids, ", ")) << '\n'
        << "probabilities = " << fmt::format("{}", fmt::join(probs, ", ")) << '\n'
        << "literal_psp_balance = " << (m.options.literal_psp_balance ? "true" : "false") << '\n'
        << "storage_loss = injection\n";
  }
  {
    Writer w(dir / "time_grid.csv");
    w.row({"hour", "month", "weight[h]"});
    for (int t = 0; t < H; ++t) {
      w.row({std::to_string(t + 1), std::to_string(T.hour_month[t] + 1), num(T.hour_weight[t])});
    }
  }
  {
    Writer w(dir / "technologies.csv");
    w.row({"id", "kind", "fuel", "efficiency[fraction]", "availability[fraction]",
           "carbon_content[tCO2/MWh_th]", "investment_cost[EUR/MW_el/a]",
           "capacity_power_factor[h]", "full_load_hours[h]", "vom[EUR/MWh_el]", "investable"});
    for (const auto& t : m.technologies) {
      w.row({t.id, to_string(t.kind), t.fuel, num(t.efficiency), num(t.availability),
             num(t.carbon_content), num(t.investment_cost), num(t.capacity_power_factor),
             num(t.full_load_hours), num(t.vom), t.investable ? "true" : "false"});
    }
  }
  {
    Writer w(dir / "efficiency_overrides.csv");
    w.row({"tech", "node", "year", "efficiency[fraction]"});
    for (const auto& t : m.technologies) {
      for (const auto& [node, v] : t.node_efficiency) {
        for (int y = 0; y < Y; ++y) w.row({t.id, node, yr(y), num(v.at(y))});
      }
    }
  }
  {
    Writer w(dir / "electricity_nodes.csv");
    w.row({"id", "vola[EUR/MWh_el]", "shed_max[fraction]"});
    for (const auto& n : m.electricity_nodes) w.row({n.id, num(n.vola), num(n.shed_max)});
  }
  auto tech_node_year = [&](const std::string& file,
                            std::map<std::string, std::vector<double>> ElectricityNode::*field) {
    Writer w(dir / file);
    w.row({"tech", "node", "year", "capacity[MW_el]"});
    for (const auto& n : m.electricity_nodes) {
      for (const auto& [tech, v] : n.*field) {
        for (int y = 0; y < Y; ++y) w.row({tech, n.id, yr(y), num(v.at(y))});
      }
    }
  };
  tech_node_year("existing_capacity.csv", &ElectricityNode::existing);
  tech_node_year("new_capacity_max.csv", &ElectricityNode::new_capacity_max);
  {
    Writer w(dir / "production_factor.csv");
    w.row({"tech", "node", "hour", "factor[fraction]"});
    for (const auto& n : m.electricity_nodes) {
      for (const auto& [tech, v] : n.production_factor) {
        for (int t = 0; t < H; ++t) w.row({tech, n.id, std::to_string(t + 1), num(v.at(t))});
      }
    }
  }
  {
    Writer w(dir / "chp.csv");
    w.row({"node", "year", "hour", "chp[MW_el]"});
    for (const auto& n : m.electricity_nodes) {
      if (n.chp.empty()) continue;
      for (int y = 0; y < Y; ++y) {
        for (int t = 0; t < H; ++t) {
          w.row({n.id, yr(y), std::to_string(t + 1), num(n.chp.at(y * H + t))});
        }
      }
    }
  }
  {
    Writer w(dir / "electricity_arcs.csv");
    w.row({"from", "to", "year", "ntc[MW_el]"});
    for (const auto& a : m.electricity_arcs) {
      for (int y = 0; y < Y; ++y) w.row({a.from, a.to, yr(y), num(a.ntc.at(y))});
    }
  }
  {
    Writer w(dir / "gas_nodes.csv");
    w.row({"id", "supply_only"});
    for (const auto& g : m.gas_nodes) w.row({g.id, g.supply_only ? "true" : "false"});
  }
  {
    Writer w(dir / "gas_storage.csv");
    Writer c(dir / "gas_storage_caps.csv");
    w.row({"node", "injection_cost[EUR/MWh_th]", "withdrawal_cost[EUR/MWh_th]",
           "start_level[MWh_th]", "end_level[MWh_th]", "loss[fraction]"});
    c.row({"node", "year", "month", "working_volume[MWh_th]", "injection_cap[MWh_th/month]",
           "withdrawal_cap[MWh_th/month]"});
    for (const auto& g : m.gas_nodes) {
      if (!g.storage) continue;
      const auto& st = *g.storage;
      w.row({g.id, num(st.injection_cost), num(st.withdrawal_cost), num(st.start_level),
             num(st.end_level), num(st.loss)});
      for (int y = 0; y < Y; ++y) {
        for (int mo = 0; mo < kMonths; ++mo) {
          const int k = y * kMonths + mo;
          c.row({g.id, yr(y), std::to_string(mo + 1), num(st.working_volume.at(k)),
                 num(st.injection_cap.at(k)), num(st.withdrawal_cap.at(k))});
        }
      }
    }
  }
  {
    Writer w(dir / "gas_suppliers.csv");
    Writer c(dir / "gas_supply_caps.csv");
    w.row({"id", "node", "cost[EUR/MWh_th]"});
    c.row({"supplier", "year", "month", "capacity[MWh_th/month]"});
    for (const auto& p : m.gas_suppliers) {
      w.row({p.id, p.node, num(p.cost)});
      for (int y = 0; y < Y; ++y) {
        for (int mo = 0; mo < kMonths; ++mo) {
          c.row({p.id, yr(y), std::to_string(mo + 1), num(p.capacity.at(y * kMonths + mo))});
        }
      }
    }
  }
  {
    Writer w(dir / "gas_arcs.csv");
    Writer c(dir / "gas_arc_caps.csv");
    Writer l(dir / "gas_contracts.csv");
    w.row({"from", "to", "cost[EUR/MWh_th]", "take_or_pay[fraction]"});
    c.row({"from", "to", "year", "capacity[MWh_th/month]"});
    l.row({"from", "to", "year", "month", "volume[MWh_th/month]"});
    for (const auto& a : m.gas_arcs) {
      w.row({a.from, a.to, num(a.cost), num(a.take_or_pay)});
      for (int y = 0; y < Y; ++y) c.row({a.from, a.to, yr(y), num(a.capacity.at(y))});
      if (a.contract.empty()) continue;
      for (int y = 0; y < Y; ++y) {
        for (int mo = 0; mo < kMonths; ++mo) {
          l.row({a.from, a.to, yr(y), std::to_string(mo + 1),
                 num(a.contract.at(y * kMonths + mo))});
        }
      }
    }
  }

  // Scenario tables. Keys come from the first branch; validation guarantees
  // the others share them.
  if (m.branches.empty()) throw DataError("write_dataset: model has no branches");
  const auto& first = m.branches.front();
  {
    Writer w(dir / "electricity_demand.csv");
    w.row(branch_header({"node", "year", "hour"}, "MWh_el/h"));
    for (const auto& [node, v] : first.electricity_demand) {
      for (int y = 0; y < Y; ++y) {
        for (int t = 0; t < H; ++t) {
          std::vector<std::string> row = {node, yr(y), std::to_string(t + 1)};
          for (const auto& b : m.branches) row.push_back(num(b.electricity_demand.at(node).at(y * H + t)));
          w.row(row);
        }
      }
    }
  }
  {
    Writer w(dir / "gas_demand.csv");
    w.row(branch_header({"node", "year", "month"}, "MWh_th/month"));
    for (const auto& [node, v] : first.gas_demand) {
      for (int y = 0; y < Y; ++y) {
        for (int mo = 0; mo < kMonths; ++mo) {
          std::vector<std::string> row = {node, yr(y), std::to_string(mo + 1)};
          for (const auto& b : m.branches) row.push_back(num(b.gas_demand.at(node).at(y * kMonths + mo)));
          w.row(row);
        }
      }
    }
  }
  {
    Writer w(dir / "res_capacity.csv");
    w.row(branch_header({"tech", "node", "year"}, "MW_el"));
    for (const auto& [key, v] : first.res_capacity) {
      for (int y = 0; y < Y; ++y) {
        std::vector<std::string> row = {key.first, key.second, yr(y)};
        for (const auto& b : m.branches) row.push_back(num(b.res_capacity.at(key).at(y)));
        w.row(row);
      }
    }
  }
  {
    Writer w(dir / "fuel_prices.csv");
    w.row(branch_header({"fuel", "year"}, "EUR/MWh_th"));
    for (const auto& [fuel, v] : first.prices.fuel) {
      for (int y = 0; y < Y; ++y) {
        std::vector<std::string> row = {fuel, yr(y)};
        for (const auto& b : m.branches) row.push_back(num(b.prices.fuel.at(fuel).at(y)));
        w.row(row);
      }
    }
  }
  {
    Writer w(dir / "co2_prices.csv");
    w.row(branch_header({"year"}, "EUR/t"));
    for (int y = 0; y < Y; ++y) {
      std::vector<std::string> row = {yr(y)};
      for (const auto& b : m.branches) row.push_back(num(b.prices.co2.at(y)));
      w.row(row);
    }
  }
}

}  // namespace egplan
