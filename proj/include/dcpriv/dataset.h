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

#ifndef DCPRIV_DATASET_H_
#define DCPRIV_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dcpriv {

// Declared lower/upper record bounds for one column; lower < upper.
struct Bounds {
  double lower = 0.0;
  double upper = 1.0;

  bool Contains(double v) const { return lower <= v && v <= upper; }
  double Clip(double v) const {
    return v < lower ? lower : (v > upper ? upper : v);
  }
  bool operator==(const Bounds&) const = default;
};

struct Column {
  std::string name;
  std::vector<double> values;
  Bounds bounds;
  // False when bounds were inferred from the observed range because none were
  // declared. Calibration refuses such columns.
  bool bounds_declared = false;
};

// Column-oriented numeric table with an optional categorical label column.
struct Dataset {
  std::vector<Column> columns;
  std::optional<std::string> label_name;
  std::vector<std::string> labels;  // empty iff label_name is unset

  size_t n() const { return columns.empty() ? 0 : columns.front().values.size(); }
  size_t num_features() const { return columns.size(); }
  bool has_labels() const { return label_name.has_value(); }

  // Throws UsageError when no column has this name.
  const Column& column(std::string_view name) const;
  size_t column_index(std::string_view name) const;

  std::vector<double> Row(size_t i) const;
  std::vector<std::string> FeatureNames() const;

  // Sorted distinct labels. Requires labels.
  std::vector<std::string> Classes() const;

  // Checks the structural invariants: at least one column, n >= 1, equal
  // lengths, lower < upper, labels sized n when present. Throws DomainError.
  void Validate() const;
};

struct IngestOptions {
  std::map<std::string, Bounds> bounds;
  std::optional<std::string> label_column;
  bool clip = false;
};

// Parses comma-separated text with a header row. Every non-label cell must be
// a finite real. Columns without declared bounds get the observed [min, max]
// (widened by 0.5 on each side when min == max).
Dataset ParseCsv(std::istream& in, const IngestOptions& options,
                 std::string_view source_name = "<stream>");

Dataset IngestCsv(const std::filesystem::path& path,
                  const IngestOptions& options);

// Writes features in column order followed by the label column (if any).
// Values use 17 significant digits.
void WriteCsv(std::ostream& out, const Dataset& data);
void WriteCsvFile(const std::filesystem::path& path, const Dataset& data);

// Splits "a,b" style CSV lines; handles double-quoted fields.
std::vector<std::string> SplitCsvLine(std::string_view line);

}  // namespace dcpriv

#endif  // DCPRIV_DATASET_H_
