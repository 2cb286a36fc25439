//
// Copyright 2026 The dpkit Authors.
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

#ifndef DPKIT_TOOLS_CLI_CSV_H_
#define DPKIT_TOOLS_CLI_CSV_H_

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace dpkit::cli {

// A rectangular CSV document with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Throws DataError if `name` is not a column.
  size_t ColumnIndex(std::string_view name) const;
  std::vector<std::string> StringColumn(std::string_view name) const;
  // Every field must parse as a finite double.
  std::vector<double> NumericColumn(std::string_view name) const;
};

// RFC 4180: comma separated, double-quoted fields may contain commas,
// newlines and doubled quotes; CRLF or LF line endings. Throws DataError on
// ragged rows, unterminated quotes, a missing header or duplicate names.
CsvTable ParseCsv(std::istream& in);

// Locale-independent strict parse of a finite double.
double ParseDouble(std::string_view text);

}  // namespace dpkit::cli

#endif  // DPKIT_TOOLS_CLI_CSV_H_
