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

#include <sstream>

#include "dpkit/errors.h"
#include "gtest/gtest.h"

namespace dpkit::cli {
namespace {

CsvTable Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseCsv(in);
}

TEST(CsvTest, ParsesHeaderAndRows) {
  const CsvTable t = Parse("a,b\n1,2\n3,4\n");
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.NumericColumn("b"), (std::vector<double>{2, 4}));
  EXPECT_EQ(t.ColumnIndex("b"), 1u);
}

TEST(CsvTest, HandlesQuotesCrlfAndBlankLines) {
  const CsvTable t =
      Parse("name,\"note\"\r\n\"x, y\",\"say \"\"hi\"\"\"\r\n\r\nz,\"two\nlines\"");
  EXPECT_EQ(t.header[1], "note");
  EXPECT_EQ(t.StringColumn("name"), (std::vector<std::string>{"x, y", "z"}));
  EXPECT_EQ(t.StringColumn("note"),
            (std::vector<std::string>{"say \"hi\"", "two\nlines"}));
}

TEST(CsvTest, RejectsMalformedDocuments) {
  EXPECT_THROW(Parse(""), DataError);
  EXPECT_THROW(Parse("a,b\n1\n"), DataError);
  EXPECT_THROW(Parse("a,a\n1,2\n"), DataError);
  EXPECT_THROW(Parse("a\n\"open\n"), DataError);
  EXPECT_THROW(Parse("a\n1\n").ColumnIndex("b"), DataError);
  EXPECT_THROW(Parse("a\nfoo\n").NumericColumn("a"), DataError);
}

TEST(ParseDoubleTest, StrictFiniteNumbers) {
  EXPECT_EQ(ParseDouble("1.5"), 1.5);
  EXPECT_EQ(ParseDouble(" -2e3 "), -2000);
  EXPECT_EQ(ParseDouble("+0.25"), 0.25);
  EXPECT_THROW(ParseDouble(""), DataError);
  EXPECT_THROW(ParseDouble("1.5x"), DataError);
  EXPECT_THROW(ParseDouble("nan"), DataError);
  EXPECT_THROW(ParseDouble("inf"), DataError);
  EXPECT_THROW(ParseDouble("1e999"), DataError);
}

}  // namespace
}  // namespace dpkit::cli
