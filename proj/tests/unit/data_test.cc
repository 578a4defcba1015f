// Copyright 2026 The EUPG Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "eupg/common/error.h"
#include "eupg/data/csv.h"
#include "eupg/data/dataset.h"
#include "eupg/data/encoding.h"
#include "eupg/data/forget.h"
#include "eupg/data/schema.h"
#include "support/fixtures.h"

namespace eupg::data {
namespace {

const char* kPeopleSchema =
    "# people\n"
    "age,numeric,quasi_identifier,0,100\n"
    "city,categorical,qi\n"
    "note,categorical,other,a|b|c\n"
    "label,categorical,class,n|y\n";

TabularDataset ReadText(const std::string& csv, const Schema& schema) {
  std::istringstream in(csv);
  return ReadCsv(in, schema, "fixture.csv");
}

TEST(SchemaTest, ParsesRolesKindsAndRanges) {
  const auto s = Schema::Parse(kPeopleSchema);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_TRUE(s[0].is_numeric());
  EXPECT_TRUE(s[0].range_declared);
  EXPECT_EQ(s[0].range->min, 0.0);
  EXPECT_EQ(s[0].range->max, 100.0);
  EXPECT_EQ(s[1].role, AttributeRole::kQuasiIdentifier);
  EXPECT_TRUE(s[1].categories.empty());
  EXPECT_EQ(s[2].role, AttributeRole::kOther);
  EXPECT_EQ(s[2].categories, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(s.class_index(), 3u);
  EXPECT_EQ(s.QuasiIdentifierIndices(), (std::vector<size_t>{0, 1}));
  EXPECT_EQ(s.NonClassIndices(), (std::vector<size_t>{0, 1, 2}));
}

TEST(SchemaTest, TextRoundTrip) {
  const auto s = Schema::Parse(kPeopleSchema);
  EXPECT_EQ(Schema::Parse(s.ToText()), s);
}

TEST(SchemaTest, RejectsInvalidSchemas) {
  EXPECT_THROW(Schema::Parse("a,numeric,qi\n"), DataError);  // no class
  EXPECT_THROW(Schema::Parse("a,categorical,class,x|y\nb,categorical,class,x|y\n"),
               DataError);
  EXPECT_THROW(Schema::Parse("a,numeric,qi,5,1\nc,categorical,class,x|y\n"),
               DataError);
  EXPECT_THROW(Schema::Parse("a,categorical,qi,x|x\nc,categorical,class,x|y\n"),
               DataError);
  EXPECT_THROW(Schema::Parse("a,numeric,qi\na,numeric,qi\nc,categorical,class\n"),
               DataError);
  EXPECT_THROW(Schema::Parse("a,text,qi\nc,categorical,class\n"), DataError);
  EXPECT_THROW(Schema::Parse("a,numeric,class\n"), DataError);
}

TEST(CsvTest, LoadsRowsAndAppendsOpenCategories) {
  const auto ds = ReadText(
      "age,city,note,label\n30,Oslo,a,y\n40,Rome,c,n\n50,Oslo,b,n\n",
      Schema::Parse(kPeopleSchema));
  EXPECT_EQ(ds.rows(), 3u);
  EXPECT_EQ(ds.provenance().kind, DatasetProvenance::Kind::kRaw);
  EXPECT_EQ(ds.schema()[1].categories,
            (std::vector<std::string>{"Oslo", "Rome"}));
  EXPECT_EQ(ds.at(1, 1), 1.0);
  EXPECT_EQ(ds.at(1, 2), 2.0);
  EXPECT_EQ(ds.Labels(), (std::vector<int>{1, 0, 0}));
}

TEST(CsvTest, HeaderOnlyGivesEmptyDataset) {
  const auto ds = ReadText("age,city,note,label\n", Schema::Parse(kPeopleSchema));
  EXPECT_EQ(ds.rows(), 0u);
}

TEST(CsvTest, BadNumericCellNamesRowAndColumn) {
  const auto schema = Schema::Parse(kPeopleSchema);
  try {
    ReadText("age,city,note,label\n30,Oslo,a,y\nabc,Rome,b,n\n", schema);
    FAIL() << "expected a parse error";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("\"age\""), std::string::npos) << msg;
    EXPECT_NE(msg.find("abc"), std::string::npos) << msg;
  }
}

TEST(CsvTest, RejectsHeaderMismatchMissingCellsAndUnknownCategories) {
  const auto schema = Schema::Parse(kPeopleSchema);
  EXPECT_THROW(ReadText("age,town,note,label\n", schema), DataError);
  EXPECT_THROW(ReadText("age,city,note,label\n30,,a,y\n", schema), DataError);
  EXPECT_THROW(ReadText("age,city,note,label\n30,Oslo,a\n", schema), DataError);
  EXPECT_THROW(ReadText("age,city,note,label\n30,Oslo,z,y\n", schema),
               DataError);
  EXPECT_THROW(LoadCsv("/nonexistent/file.csv", schema), IoError);
}

TEST(CsvTest, QuotedCategoricalFields) {
  const auto ds = ReadText(
      "age,city,note,label\n1,\"New York, NY\",a,y\n2,\"say \"\"hi\"\"\",b,n\n",
      Schema::Parse(kPeopleSchema));
  EXPECT_EQ(ds.schema()[1].categories[0], "New York, NY");
  EXPECT_EQ(ds.schema()[1].categories[1], "say \"hi\"");
}

TEST(CsvTest, WriteReadRoundTripIsExact) {
  const auto ds = testing::MixedDataset(200, 3, 2, 5);
  std::stringstream buf;
  WriteCsv(ds, buf);
  const auto back = ReadCsv(buf, ds.schema());
  EXPECT_EQ(back.cells(), ds.cells());
}

TEST(CsvTest, InfersMissingNumericRange) {
  const auto ds = ReadText("age,city,note,label\n30,Oslo,a,y\n70,Rome,c,n\n",
                           Schema::Parse("age,numeric,qi\ncity,categorical,qi\n"
                                         "note,categorical,other\n"
                                         "label,categorical,class\n"));
  ASSERT_TRUE(ds.schema()[0].range.has_value());
  EXPECT_FALSE(ds.schema()[0].range_declared);
  EXPECT_EQ(ds.schema()[0].range->min, 30.0);
  EXPECT_EQ(ds.schema()[0].range->max, 70.0);
}

TEST(DatasetTest, RejectsInvalidCells) {
  const auto schema = testing::MixedSchema(1, 1, 3);
  EXPECT_THROW(TabularDataset(schema, {1.0, 0.0}), DataError);  // ragged
  EXPECT_THROW(TabularDataset(schema, {1.0, 3.0, 0.0}), DataError);
  EXPECT_THROW(TabularDataset(schema, {NAN, 0.0, 0.0}), DataError);
  EXPECT_THROW(TabularDataset(schema, {1.0, 0.5, 0.0}), DataError);
  EXPECT_THROW(TabularDataset(schema, {1.0, 0.0, 0.0, 2.0, 1.0, 1.0},
                              DatasetProvenance::Raw(),
                              std::vector<size_t>{4, 4}),
               DataError);
}

TEST(EncodeTest, OneHotAndMinMax) {
  const auto schema = Schema::Parse(
      "x,numeric,qi,0,100\nc,categorical,qi,a|b|c\ny,categorical,class,n|y\n");
  const TabularDataset ds(schema, {50.0, 1.0, 1.0, 0.0, 2.0, 0.0});
  const auto m = Encode(ds);
  ASSERT_EQ(m.width, 4u);
  EXPECT_EQ(std::vector<double>(m.features.begin(), m.features.begin() + 4),
            (std::vector<double>{0.5, 0.0, 1.0, 0.0}));
  EXPECT_EQ(std::vector<double>(m.features.begin() + 4, m.features.end()),
            (std::vector<double>{0.0, 0.0, 0.0, 1.0}));
  EXPECT_EQ(m.labels, (std::vector<int>{1, 0}));
  EXPECT_EQ(m.num_classes, 2u);
  ASSERT_EQ(m.column_map.size(), 2u);
  EXPECT_EQ(m.column_map[1].offset, 1u);
  EXPECT_EQ(m.column_map[1].width, 3u);
}

TEST(EncodeTest, DeclaredRangeViolationIsAnErrorUnlessClamped) {
  const auto schema = Schema::Parse(
      "x,numeric,qi,0,10\ny,categorical,class,n|y\n");
  const TabularDataset ds(schema, {12.0, 0.0});
  EXPECT_THROW(Encode(ds), DataError);
  EncodeOptions opts;
  opts.clamp_declared_range = true;
  const auto m = Encode(ds, opts);
  EXPECT_EQ(m.features[0], 1.0);
  EXPECT_EQ(m.clamped_cells, 1u);
}

TEST(EncodeTest, DecodeRoundTripOnRandomRawData) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto ds = testing::MixedDataset(150, 4, 3, seed, 2 + seed % 5);
    const auto back = Decode(Encode(ds), ds.schema());
    ASSERT_EQ(back.rows(), ds.rows());
    for (size_t i = 0; i < ds.cells().size(); ++i) {
      const double a = ds.cells()[i];
      const double b = back.cells()[i];
      EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a)))
          << "cell " << i << " seed " << seed;
    }
  }
}

TEST(EncodeTest, NormalizedColumnsStayInUnitInterval) {
  const auto ds = testing::MixedDataset(300, 5, 2, 3);
  const auto m = Encode(ds);
  for (double v : m.features) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(ForgetTest, RatioUsesFloor) {
  EXPECT_EQ(ForgetRequest::FromRatio(96215, 0.05, 1).forget_indices.size(),
            4810u);
  EXPECT_EQ(ForgetRequest::FromRatio(10, 0.19, 1).forget_indices.size(), 1u);
  EXPECT_EQ(ForgetRequest::FromRatio(10, 0.0, 1).forget_indices.size(), 0u);
  EXPECT_EQ(ForgetRequest::FromRatio(10, 1.0, 1).forget_indices.size(), 10u);
  EXPECT_THROW(ForgetRequest::FromRatio(10, -0.1, 1), InvalidArgumentError);
  EXPECT_THROW(ForgetRequest::FromRatio(10, 1.5, 1), InvalidArgumentError);
}

TEST(ForgetTest, DeterministicUnderSeed) {
  EXPECT_EQ(ForgetRequest::FromRatio(1000, 0.2, 42).forget_indices,
            ForgetRequest::FromRatio(1000, 0.2, 42).forget_indices);
  EXPECT_NE(ForgetRequest::FromRatio(1000, 0.2, 42).forget_indices,
            ForgetRequest::FromRatio(1000, 0.2, 43).forget_indices);
}

TEST(ForgetTest, ExplicitIndicesAreValidated) {
  EXPECT_THROW(ForgetRequest::FromIndices({1, 10}, 10), InvalidArgumentError);
  EXPECT_THROW(ForgetRequest::FromIndices({3, 3}, 10), InvalidArgumentError);
  EXPECT_EQ(ForgetRequest::FromIndices({7, 2}, 10).forget_indices,
            (std::vector<size_t>{2, 7}));
}

TEST(ForgetTest, RatioZeroKeepsEverything) {
  const auto ds = testing::MixedDataset(50, 2, 1, 9);
  const auto split = SplitForget(ds, ForgetRequest::FromRatio(50, 0.0, 1));
  EXPECT_EQ(split.forget.rows(), 0u);
  EXPECT_EQ(split.retain.cells(), ds.cells());
  EXPECT_EQ(split.retain.provenance().kind, DatasetProvenance::Kind::kRetainSubset);
}

TEST(ForgetTest, PartitionPropertyOverRandomDatasets) {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const size_t n = 1 + rng.UniformIndex(300);
    const double ratio = rng.Uniform();
    const auto ds = testing::MixedDataset(n, 2, 1, trial);
    const auto req = ForgetRequest::FromRatio(n, ratio, trial);
    const auto split = SplitForget(ds, req);
    ASSERT_EQ(split.forget.rows(),
              static_cast<size_t>(std::floor(ratio * static_cast<double>(n))));
    ASSERT_TRUE(split.retain.source_indices().has_value());
    ASSERT_TRUE(split.forget.source_indices().has_value());
    std::set<size_t> seen;
    for (size_t i : *split.retain.source_indices()) {
      ASSERT_TRUE(seen.insert(i).second);
      for (size_t c = 0; c < ds.cols(); ++c) {
        ASSERT_EQ(split.retain.at(seen.size() - 1, c), ds.at(i, c));
      }
    }
    for (size_t i : *split.forget.source_indices()) {
      ASSERT_TRUE(seen.insert(i).second) << "retain and forget overlap";
    }
    ASSERT_EQ(seen.size(), n);
    EXPECT_EQ(*split.retain.source_indices(), split.retain_indices);
  }
}

TEST(ForgetTest, SplitRequiresRawData) {
  const auto ds = testing::MixedDataset(20, 2, 1, 1);
  const auto sub = ds.Select(std::vector<size_t>{0, 1, 2},
                             DatasetProvenance::Retain());
  EXPECT_THROW(SplitForget(sub, ForgetRequest::FromRatio(3, 0.5, 1)),
               InvalidArgumentError);
}

class AdultTest : public ::testing::Test {
 protected:
  static std::string Path(const char* name) {
    return std::string(EUPG_DATA_DIR) + "/adult/" + name;
  }
};

TEST_F(AdultTest, SplitsLoadWithExpectedShape) {
  const auto schema = Schema::LoadFile(Path("adult.schema"));
  const auto train = LoadCsv(Path("adult_train.csv"), schema);
  const auto test = LoadCsv(Path("adult_test.csv"), train.schema());
  EXPECT_EQ(train.rows(), 32561u);
  EXPECT_EQ(test.rows(), 16281u);
  size_t numeric = 0;
  size_t one_hot = 0;
  for (size_t j : train.schema().NonClassIndices()) {
    if (train.schema()[j].is_numeric()) {
      ++numeric;
    } else {
      one_hot += train.schema()[j].categories.size();
    }
  }
  EXPECT_EQ(numeric, 6u);
  // Independently counted distinct values of the eight categorical columns:
  // 9 + 16 + 7 + 15 + 6 + 5 + 2 + 42.
  EXPECT_EQ(one_hot, 102u);
  const auto m = Encode(train);
  EXPECT_EQ(m.width, 108u);
  EXPECT_EQ(m.width, numeric + one_hot);
  // One test fnlwgt value exceeds the training maximum.
  EXPECT_EQ(Encode(test).clamped_cells, 1u);
}

}  // namespace
}  // namespace eupg::data
