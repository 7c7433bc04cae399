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

#include "lipdp/csv.h"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>

#include "absl/strings/str_cat.h"
#include "lipdp/format.h"

namespace lipdp {
namespace {

std::optional<double> ParseNumber(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || errno == ERANGE) return std::nullopt;
  return v;
}

// 1-based data row (header excluded) and column.
std::string Location(int row, int col) {
  return absl::StrCat("row ", row + 1, ", column ", col + 1);
}

int FindColumn(const std::vector<std::string>& header, std::string_view name) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

absl::StatusOr<CsvTable> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false, field_quoted = false, record_open = false;
  int line = 1;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_quoted = false;
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field += ch;
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field.empty() || field_quoted) {
          return absl::InvalidArgumentError(absl::StrCat(
              "CSV parse error at line ", line, ", column ", record.size() + 1,
              ": stray quote inside an unquoted field"));
        }
        in_quotes = field_quoted = record_open = true;
        break;
      case ',':
        end_field();
        record_open = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        if (record_open || !field.empty()) {
          end_field();
          records.push_back(std::move(record));
          record.clear();
        }
        record_open = false;
        ++line;
        break;
      default:
        if (field_quoted) {
          return absl::InvalidArgumentError(absl::StrCat(
              "CSV parse error at line ", line, ", column ", record.size() + 1,
              ": text after a closing quote"));
        }
        field += ch;
        record_open = true;
    }
  }
  if (in_quotes) {
    return absl::InvalidArgumentError(
        absl::StrCat("CSV parse error at line ", line, ": unterminated quote"));
  }
  if (record_open || !field.empty()) {
    end_field();
    records.push_back(std::move(record));
  }
  if (records.empty()) return absl::InvalidArgumentError("CSV input is empty");
  CsvTable table;
  table.header = std::move(records.front());
  for (size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "CSV parse error at line ", r + 1, ": expected ",
          table.header.size(), " fields, found ", records[r].size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

std::string WriteCsv(const CsvTable& table) {
  std::string out;
  auto write_record = [&](const std::vector<std::string>& record) {
    for (size_t i = 0; i < record.size(); ++i) {
      if (i > 0) out += ',';
      const std::string& f = record[i];
      if (f.find_first_of(",\"\r\n") == std::string::npos) {
        out += f;
        continue;
      }
      out += '"';
      for (char ch : f) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    }
    out += '\n';
  };
  write_record(table.header);
  for (const auto& row : table.rows) write_record(row);
  return out;
}

// Identifier columns stay metadata even when numeric.
static bool IsIdentifier(const std::string& name) {
  std::string lower = name;
  for (char& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return lower == "id" || lower == "user_id" || lower == "user";
}

absl::StatusOr<NumericView> ExtractNumeric(const CsvTable& table) {
  NumericView view;
  if (table.rows.empty()) {
    return absl::InvalidArgumentError("CSV input has a header but no data rows");
  }
  const int user_col = FindColumn(table.header, "user_id");
  const int dim_col = FindColumn(table.header, "dim");
  const int value_col = FindColumn(table.header, "value");
  if (user_col >= 0 && dim_col >= 0 && value_col >= 0) {
    view.layout = CsvLayout::kLong;
    std::map<std::string, int> users, dims;
    std::vector<std::string> user_order, dim_order;
    for (const auto& row : table.rows) {
      if (users.emplace(row[user_col], users.size()).second) {
        user_order.push_back(row[user_col]);
      }
      if (dims.emplace(row[dim_col], dims.size()).second) {
        dim_order.push_back(row[dim_col]);
      }
    }
    view.users = static_cast<int>(users.size());
    view.dims = static_cast<int>(dims.size());
    const size_t total = static_cast<size_t>(view.users) * view.dims;
    if (total != table.rows.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "long CSV has ", table.rows.size(), " rows but ", view.users,
          " users x ", view.dims, " dims; every (user_id, dim) pair must "
          "appear exactly once"));
    }
    view.values.assign(total, 0.0);
    view.cells.assign(total, {-1, -1});
    for (int r = 0; r < static_cast<int>(table.rows.size()); ++r) {
      const auto& row = table.rows[r];
      const size_t idx =
          static_cast<size_t>(users[row[user_col]]) * view.dims +
          dims[row[dim_col]];
      if (view.cells[idx].first >= 0) {
        return absl::InvalidArgumentError(absl::StrCat(
            "duplicate (user_id, dim) pair at ", Location(r, user_col)));
      }
      std::optional<double> v = ParseNumber(row[value_col]);
      if (!v || !std::isfinite(*v)) {
        return absl::InvalidArgumentError(
            absl::StrCat("non-numeric or non-finite value '", row[value_col],
                         "' at ", Location(r, value_col)));
      }
      view.values[idx] = *v;
      view.cells[idx] = {r, value_col};
    }
    return view;
  }

  view.layout = CsvLayout::kWide;
  std::vector<int> numeric_cols;
  for (int c = 0; c < static_cast<int>(table.header.size()); ++c) {
    if (IsIdentifier(table.header[c])) continue;
    if (ParseNumber(table.rows[0][c])) numeric_cols.push_back(c);
  }
  if (numeric_cols.empty()) {
    return absl::InvalidArgumentError(
        "wide CSV has no numeric columns in its first data row");
  }
  view.users = static_cast<int>(table.rows.size());
  view.dims = static_cast<int>(numeric_cols.size());
  for (int r = 0; r < view.users; ++r) {
    for (int c : numeric_cols) {
      std::optional<double> v = ParseNumber(table.rows[r][c]);
      if (!v || !std::isfinite(*v)) {
        return absl::InvalidArgumentError(
            absl::StrCat("non-numeric or non-finite value '",
                         table.rows[r][c], "' at ", Location(r, c)));
      }
      view.values.push_back(*v);
      view.cells.emplace_back(r, c);
    }
  }
  return view;
}

void ReplaceNumeric(const NumericView& view, const std::vector<double>& values,
                    CsvTable& table) {
  for (size_t i = 0; i < view.cells.size(); ++i) {
    const auto [r, c] = view.cells[i];
    table.rows[r][c] = FormatDouble(values[i]);
  }
}

}  // namespace lipdp
