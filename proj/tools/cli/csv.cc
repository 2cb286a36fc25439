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

#include "cli/csv.h"

#include <charconv>
#include <cmath>
#include <iterator>
#include <set>
#include <sstream>

#include "dpkit/errors.h"

namespace dpkit::cli {
namespace {

std::vector<std::vector<std::string>> ParseRecords(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  size_t line = 1;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    records.push_back(std::move(record));
    record.clear();
    field_started = false;
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          throw DataError("stray quote in CSV field on line " +
                          std::to_string(line));
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) throw DataError("unterminated quoted CSV field");
  if (field_started || !record.empty() || !field.empty()) end_record();
  return records;
}

}  // namespace

CsvTable ParseCsv(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  std::vector<std::vector<std::string>> records = ParseRecords(text);
  if (records.empty()) throw DataError("CSV input has no header row");
  CsvTable table;
  table.header = std::move(records.front());
  std::set<std::string> seen;
  for (const std::string& name : table.header) {
    if (!seen.insert(name).second) {
      throw DataError("duplicate CSV column '" + name + "'");
    }
  }
  for (size_t r = 1; r < records.size(); ++r) {
    // Blank lines carry no record.
    if (records[r].size() == 1 && records[r][0].empty()) continue;
    if (records[r].size() != table.header.size()) {
      std::ostringstream msg;
      msg << "CSV row " << r << " has " << records[r].size()
          << " fields, expected " << table.header.size();
      throw DataError(msg.str());
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

size_t CsvTable::ColumnIndex(std::string_view name) const {
  for (size_t j = 0; j < header.size(); ++j) {
    if (header[j] == name) return j;
  }
  throw DataError("no CSV column named '" + std::string(name) + "'");
}

std::vector<std::string> CsvTable::StringColumn(std::string_view name) const {
  const size_t j = ColumnIndex(name);
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[j]);
  return out;
}

std::vector<double> CsvTable::NumericColumn(std::string_view name) const {
  const size_t j = ColumnIndex(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    try {
      out.push_back(ParseDouble(rows[r][j]));
    } catch (const DataError& e) {
      std::ostringstream msg;
      msg << "column '" << name << "', row " << r + 1 << ": " << e.what();
      throw DataError(msg.str());
    }
  }
  return out;
}

double ParseDouble(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
      !std::isfinite(value)) {
    throw DataError("'" + std::string(text) + "' is not a finite number");
  }
  return value;
}

}  // namespace dpkit::cli
