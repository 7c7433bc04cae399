//
// Copyright 2026 The Lipschitz DP Authors
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
//

#ifndef LIPDP_CSV_H_
#define LIPDP_CSV_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace lipdp {

// RFC 4180 text: comma separated, optional double quotes with "" escapes,
// LF or CRLF line ends. The first record is the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Every row must have as many fields as the header. Errors name the 1-based
// line and column. Blank lines are skipped.
absl::StatusOr<CsvTable> ParseCsv(std::string_view text);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string WriteCsv(const CsvTable& table);

enum class CsvLayout { kWide, kLong };

// Long layout: the header holds user_id, dim and value columns. Wide
// layout: one row per user; every column whose first data cell is numeric
// holds one coordinate, the rest are metadata. Columns named id, user or
// user_id (any case) are always metadata.
struct NumericView {
  CsvLayout layout = CsvLayout::kWide;
  int users = 0;
  int dims = 0;
  // Row-major users x dims matrix of values and the (row, column) cell of
  // each entry in the table.
  std::vector<double> values;
  std::vector<std::pair<int, int>> cells;
};

// InvalidArgument with a 1-based data row/column location for non-numeric or
// non-finite cells, duplicate or missing (user, dim) pairs, or an input
// with no numeric columns.
absl::StatusOr<NumericView> ExtractNumeric(const CsvTable& table);

// Writes values back into their cells with 17 significant digits.
void ReplaceNumeric(const NumericView& view, const std::vector<double>& values,
                    CsvTable& table);

}  // namespace lipdp

#endif  // LIPDP_CSV_H_
