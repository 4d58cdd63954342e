// Copyright 2026 The qpctl Authors
//
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

#include "qpctl/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace qpctl {

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw Error(fmt::format("not a number: '{}'", text));
  return value;
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> row;
  row.reserve(values.size());
  for (double v : values) row.push_back(format_double(v));
  rows.push_back(std::move(row));
}

int CsvTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(fmt::format("CSV has no column '{}'", name));
  return static_cast<int>(it - header.begin());
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  return parse_double(rows.at(row).at(column(name)));
}

namespace {

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  return line;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream stream(line);
  std::string cell;
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  if (table.rows.empty()) throw Error(fmt::format("{}: refusing to write an empty table", path.string()));
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("{}: cannot open for writing", path.string()));
  out << join(table.header) << '\n';
  for (const auto& row : table.rows) out << join(row) << '\n';
  if (!out) throw Error(fmt::format("{}: write failed", path.string()));
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("{}: cannot open for reading", path.string()));
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(fmt::format("{}: empty file", path.string()));
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split(line);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw Error(fmt::format("{}:{}: expected {} cells, found {}", path.string(), lineno,
                              table.header.size(), cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

CsvTable iterations_table(const std::vector<IterationRecord>& records,
                          const std::vector<ControlField>& fields) {
  CsvTable table;
  table.header = {"n", "F", "J_d", "J", "purity", "coherence", "sigma"};
  for (const auto& f : fields) table.header.push_back("max_update_" + f.label);
  for (const auto& r : records) {
    std::vector<double> row{static_cast<double>(r.n), r.F, r.J_d, r.J, r.purity, r.coherence,
                            r.sigma};
    for (std::size_t m = 0; m < fields.size(); ++m) row.push_back(r.max_update.at(m));
    table.add_row(row);
  }
  return table;
}

CsvTable fields_table(const std::vector<ControlField>& fields, const TimeGrid& grid) {
  CsvTable table;
  table.header = {"t_us"};
  for (const auto& f : fields) table.header.push_back("eps_" + f.label);
  for (int k = 0; k < grid.steps(); ++k) {
    std::vector<double> row{grid.midpoint(k)};
    for (const auto& f : fields) row.push_back(f.values.at(k));
    table.add_row(row);
  }
  return table;
}

std::vector<ControlField> fields_from_table(const CsvTable& table,
                                            const std::vector<ControlField>& fields) {
  std::vector<ControlField> out = fields;
  for (auto& f : out) {
    if (table.rows.size() != f.values.size()) {
      throw Error(fmt::format("field table has {} rows, the grid has {} intervals",
                              table.rows.size(), f.values.size()));
    }
    const std::string name = "eps_" + f.label;
    for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] = table.number(k, name);
  }
  return out;
}

}  // namespace qpctl
