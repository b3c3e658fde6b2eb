// Copyright 2026 The midbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef MIDBENCH_CSV_H_
#define MIDBENCH_CSV_H_

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "midbench/dataset.h"
#include "midbench/error.h"
#include "midbench/schema.h"

namespace midbench {

// Canonical number formatting: 17 significant digits, enough for exact
// double round trips.
inline std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace internal {

inline std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

inline double ParseCell(const std::string& cell, std::size_t row,
                        const std::string& column) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\r')) --end;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw DataError("csv: unparseable cell at row " + std::to_string(row) +
                    ", column '" + column + "': \"" + cell + "\"");
  return value;
}

}  // namespace internal

// Loads a dataset whose header is the schema's feature names, in order,
// followed by a column named "label". Errors carry the offending row and
// column. Dataset invariants (code ranges, finiteness) are enforced on the
// way in.
inline Dataset LoadCsv(const std::string& path, const FeatureSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("csv: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = internal::SplitCsvLine(line);
  const std::size_t d = schema.num_features();
  if (header.size() != d + 1)
    throw DataError("csv: expected " + std::to_string(d + 1) +
                    " columns, found " + std::to_string(header.size()));
  for (std::size_t c = 0; c < d; ++c) {
    if (header[c] != schema.features()[c].name)
      throw DataError("csv: header column " + std::to_string(c) + " is '" +
                      header[c] + "', schema expects '" +
                      schema.features()[c].name + "'");
  }
  if (header.back() != "label")
    throw DataError("csv: last column must be 'label', found '" +
                    header.back() + "'");

  std::vector<double> values;
  std::vector<double> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = internal::SplitCsvLine(line);
    if (cells.size() != d + 1)
      throw DataError("csv: row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(d + 1));
    for (std::size_t c = 0; c < d; ++c) {
      const double v =
          internal::ParseCell(cells[c], row, schema.features()[c].name);
      const std::string bad = schema.CheckValue(c, v);
      if (!bad.empty())
        throw DataError("csv: row " + std::to_string(row) + ", column '" +
                        schema.features()[c].name + "': " + bad);
      values.push_back(v);
    }
    labels.push_back(internal::ParseCell(cells[d], row, "label"));
    ++row;
  }
  return Dataset(schema, std::move(values), std::move(labels));
}

// Writes the canonical CSV form: integer codes for categoricals and class
// labels, 17-significant-digit reals otherwise, '\n' line endings. Loading
// and re-writing a canonical file reproduces its bytes.
inline void WriteCsv(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("csv: cannot write " + path);
  const FeatureSchema& schema = data.schema();
  for (const Feature& f : schema.features()) out << f.name << ',';
  out << "label\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c < schema.num_features(); ++c) {
      const double v = data.value(r, c);
      if (schema.features()[c].kind == FeatureKind::kCategorical) {
        out << static_cast<long long>(v);
      } else {
        out << FormatDouble(v);
      }
      out << ',';
    }
    if (schema.is_classification()) {
      out << data.class_label(r);
    } else {
      out << FormatDouble(data.label(r));
    }
    out << '\n';
  }
}

}  // namespace midbench

#endif  // MIDBENCH_CSV_H_
