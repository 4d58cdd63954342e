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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qpctl/krotov.hpp"

namespace qpctl {

/// Comma-separated table with a header row. Cells are stored as text;
/// numbers are written with 17 significant digits so they re-parse exactly.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<double>& values);
  int column(const std::string& name) const;  // throws Error if absent
  double number(std::size_t row, const std::string& name) const;
};

std::string format_double(double value);
double parse_double(const std::string& text);

/// UTF-8, LF line endings. Throws Error naming the path on I/O failure or
/// when the table has no rows.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

/// Columns n, F, J_d, J, purity, coherence, sigma, then max_update_<label> per field.
CsvTable iterations_table(const std::vector<IterationRecord>& records,
                          const std::vector<ControlField>& fields);

/// Columns t_us, eps_<label>...; t_us is the interval midpoint.
CsvTable fields_table(const std::vector<ControlField>& fields, const TimeGrid& grid);

/// Replaces the samples of `fields` with the eps_<label> columns of `table`;
/// row count must equal the number of grid intervals.
std::vector<ControlField> fields_from_table(const CsvTable& table,
                                            const std::vector<ControlField>& fields);

}  // namespace qpctl
