// Copyright 2026 The dcpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dcpriv/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "dcpriv/error.h"

namespace dcpriv {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> ParseFinite(std::string_view cell) {
  cell = Trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

const Column& Dataset::column(std::string_view name) const {
  return columns[column_index(name)];
}

size_t Dataset::column_index(std::string_view name) const {
  for (size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].name == name) return j;
  }
  throw UsageError("unknown column \"" + std::string(name) + "\"");
}

std::vector<double> Dataset::Row(size_t i) const {
  std::vector<double> row;
  row.reserve(columns.size());
  for (const Column& c : columns) row.push_back(c.values[i]);
  return row;
}

std::vector<std::string> Dataset::FeatureNames() const {
  std::vector<std::string> names;
  names.reserve(columns.size());
  for (const Column& c : columns) names.push_back(c.name);
  return names;
}

std::vector<std::string> Dataset::Classes() const {
  if (!has_labels()) throw UsageError("dataset has no label column");
  std::set<std::string> distinct(labels.begin(), labels.end());
  return {distinct.begin(), distinct.end()};
}

void Dataset::Validate() const {
  if (columns.empty()) throw DomainError("dataset has no numeric columns");
  const size_t rows = n();
  if (rows == 0) throw DomainError("dataset has no records");
  for (const Column& c : columns) {
    if (c.values.size() != rows) {
      throw DomainError("column \"" + c.name + "\" has " +
                        std::to_string(c.values.size()) + " values, expected " +
                        std::to_string(rows));
    }
    if (!(c.bounds.lower < c.bounds.upper)) {
      throw DomainError("column \"" + c.name + "\" has bounds with lower >= upper");
    }
  }
  if (has_labels() && labels.size() != rows) {
    throw DomainError("label column length does not match record count");
  }
  if (!has_labels() && !labels.empty()) {
    throw DomainError("labels present without a label column name");
  }
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

Dataset ParseCsv(std::istream& in, const IngestOptions& options,
                 std::string_view source_name) {
  const std::string src(source_name);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(src + ": missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  std::vector<std::string> header = SplitCsvLine(line);
  for (std::string& h : header) h = std::string(Trim(h));

  std::optional<size_t> label_pos;
  Dataset data;
  std::vector<size_t> feature_pos;
  for (size_t j = 0; j < header.size(); ++j) {
    if (options.label_column && header[j] == *options.label_column) {
      label_pos = j;
      continue;
    }
    for (const Column& c : data.columns) {
      if (c.name == header[j]) throw ParseError(src + ": duplicate column \"" + header[j] + "\"");
    }
    feature_pos.push_back(j);
    data.columns.push_back(Column{header[j], {}, {}, false});
  }
  if (options.label_column && !label_pos) {
    throw UsageError(src + ": label column \"" + *options.label_column + "\" not found");
  }
  for (const auto& [name, b] : options.bounds) {
    bool found = false;
    for (Column& c : data.columns) {
      if (c.name == name) {
        if (!(b.lower < b.upper)) {
          throw DomainError("bounds for column \"" + name + "\" must satisfy lower < upper");
        }
        c.bounds = b;
        c.bounds_declared = true;
        found = true;
      }
    }
    if (!found) throw UsageError("bounds given for unknown column \"" + name + "\"");
  }
  if (label_pos) data.label_name = header[*label_pos];

  size_t row = 0;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    ++row;
    const std::vector<std::string> cells = SplitCsvLine(line);
    if (cells.size() != header.size()) {
      throw ParseError(src + ": row " + std::to_string(row) + " has " +
                       std::to_string(cells.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    for (size_t k = 0; k < feature_pos.size(); ++k) {
      Column& col = data.columns[k];
      const std::optional<double> v = ParseFinite(cells[feature_pos[k]]);
      if (!v) {
        throw ParseError(src + ": row " + std::to_string(row) + ", column \"" +
                         col.name + "\": not a finite number: \"" +
                         cells[feature_pos[k]] + "\"");
      }
      double value = *v;
      if (col.bounds_declared && !col.bounds.Contains(value)) {
        if (!options.clip) {
          throw DomainError(src + ": row " + std::to_string(row) + ", column \"" +
                            col.name + "\": value " + FormatDouble(value) +
                            " outside bounds [" + FormatDouble(col.bounds.lower) +
                            ", " + FormatDouble(col.bounds.upper) + "]");
        }
        value = col.bounds.Clip(value);
      }
      col.values.push_back(value);
    }
    if (label_pos) data.labels.push_back(std::string(Trim(cells[*label_pos])));
  }
  if (row == 0) throw ParseError(src + ": no data rows");

  for (Column& c : data.columns) {
    if (c.bounds_declared) continue;
    const auto [lo, hi] = std::minmax_element(c.values.begin(), c.values.end());
    c.bounds = *lo < *hi ? Bounds{*lo, *hi} : Bounds{*lo - 0.5, *hi + 0.5};
  }
  data.Validate();
  return data;
}

Dataset IngestCsv(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file " + path.string());
  return ParseCsv(in, options, path.string());
}

void WriteCsv(std::ostream& out, const Dataset& data) {
  for (size_t j = 0; j < data.columns.size(); ++j) {
    if (j) out << ',';
    out << data.columns[j].name;
  }
  if (data.has_labels()) out << ',' << *data.label_name;
  out << '\n';
  for (size_t i = 0; i < data.n(); ++i) {
    for (size_t j = 0; j < data.columns.size(); ++j) {
      if (j) out << ',';
      out << FormatDouble(data.columns[j].values[i]);
    }
    if (data.has_labels()) out << ',' << data.labels[i];
    out << '\n';
  }
}

void WriteCsvFile(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file " + path.string());
  WriteCsv(out, data);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace dcpriv
