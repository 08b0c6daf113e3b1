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

#include <sstream>

#include "gtest/gtest.h"
#include "dcpriv/error.h"
#include "test_util.h"

namespace dcpriv {
namespace {

using testing::ParseText;

IngestOptions UnitBounds(bool clip) {
  IngestOptions opt;
  opt.bounds["v"] = {0.0, 1.0};
  opt.clip = clip;
  return opt;
}

TEST(IngestTest, InBoundsValuesUnchanged) {
  const Dataset d = ParseText("v\n0.2\n0.5\n0.9\n", UnitBounds(false));
  ASSERT_EQ(d.n(), 3u);
  EXPECT_EQ(d.columns[0].values, (std::vector<double>{0.2, 0.5, 0.9}));
  EXPECT_TRUE(d.columns[0].bounds_declared);
  EXPECT_FALSE(d.has_labels());
}

TEST(IngestTest, ClippingForcesEndpoints) {
  const Dataset d = ParseText("v\n-0.5\n1.5\n", UnitBounds(true));
  EXPECT_EQ(d.columns[0].values, (std::vector<double>{0.0, 1.0}));
}

TEST(IngestTest, OutOfBoundsWithoutClipNamesRowAndColumn) {
  try {
    ParseText("v\n-0.5\n", UnitBounds(false));
    FAIL() << "expected a domain error";
  } catch (const DomainError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("\"v\""), std::string::npos) << msg;
  }
}

TEST(IngestTest, NonNumericCellIsParseErrorWithLocation) {
  try {
    ParseText("a,b\n1,2\n3,abc\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("\"b\""), std::string::npos) << msg;
  }
  EXPECT_THROW(ParseText("a\nnan\n"), ParseError);
  EXPECT_THROW(ParseText("a\ninf\n"), ParseError);
  EXPECT_THROW(ParseText("a\n\n"), ParseError);
}

TEST(IngestTest, MissingFileIsIoError) {
  EXPECT_THROW(IngestCsv("/nonexistent/dir/file.csv", {}), IoError);
}

TEST(IngestTest, LabelColumnAndInferredBounds) {
  IngestOptions opt;
  opt.label_column = "cls";
  const Dataset d = ParseText("x,cls,y\n1,a,5\n3,b,5\n2,a,5\n", opt);
  EXPECT_EQ(d.FeatureNames(), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(d.labels, (std::vector<std::string>{"a", "b", "a"}));
  EXPECT_EQ(d.Classes(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(d.columns[0].bounds, (Bounds{1, 3}));
  EXPECT_FALSE(d.columns[0].bounds_declared);
  // Constant column widens so that lower < upper still holds.
  EXPECT_EQ(d.columns[1].bounds, (Bounds{4.5, 5.5}));
}

TEST(IngestTest, UnknownLabelOrBoundsColumnIsUsageError) {
  IngestOptions opt;
  opt.label_column = "nope";
  EXPECT_THROW(ParseText("x\n1\n", opt), UsageError);
  IngestOptions opt2;
  opt2.bounds["nope"] = {0, 1};
  EXPECT_THROW(ParseText("x\n1\n", opt2), UsageError);
}

TEST(IngestTest, QuotedFieldsAndCrLf) {
  IngestOptions opt;
  opt.label_column = "name";
  const Dataset d = ParseText("x,name\r\n1.5,\"a, b\"\r\n", opt);
  EXPECT_EQ(d.columns[0].values[0], 1.5);
  EXPECT_EQ(d.labels[0], "a, b");
}

TEST(WriteCsvTest, RoundTripsBitExactly) {
  const Dataset d = testing::TwoGaussians(50, 3);
  std::ostringstream out;
  WriteCsv(out, d);
  IngestOptions opt;
  opt.label_column = "label";
  const Dataset back = ParseText(out.str(), opt);
  ASSERT_EQ(back.n(), d.n());
  for (size_t j = 0; j < d.columns.size(); ++j) {
    EXPECT_EQ(back.columns[j].values, d.columns[j].values);
  }
  EXPECT_EQ(back.labels, d.labels);
}

}  // namespace
}  // namespace dcpriv
