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
#include <filesystem>
#include <fstream>
#include <limits>

#include "eupg/common/error.h"
#include "eupg/common/rng.h"
#include "eupg/dpanon/dp_pix.h"
#include "eupg/dpanon/dp_table.h"
#include "eupg/dpanon/mechanisms.h"
#include "support/fixtures.h"
#include "support/stats.h"

namespace eupg::dpanon {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(LaplaceTest, InverseCdfFormula) {
  EXPECT_EQ(LaplaceFromUniform(0.0, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(LaplaceFromUniform(0.25, 2.0), -2.0 * std::log(0.5));
  EXPECT_DOUBLE_EQ(LaplaceFromUniform(-0.25, 2.0), 2.0 * std::log(0.5));
}

TEST(LaplaceTest, ScaleIsSensitivityOverEpsilon) {
  EXPECT_EQ(LaplaceScale(1.0, 0.5), 2.0);
  EXPECT_EQ(LaplaceScale(100.0, 0.1), 1000.0);
  EXPECT_THROW(LaplaceScale(0.0, 1.0), InvalidArgumentError);
  EXPECT_THROW(LaplaceScale(1.0, 0.0), InvalidArgumentError);
  Rng rng(1);
  EXPECT_THROW(SampleLaplace(0.0, rng), InvalidArgumentError);
}

TEST(LaplaceTest, VarianceAndDistribution) {
  Rng rng(123);
  const double b = 1.5;
  std::vector<double> s(1'000'000);
  for (double& x : s) x = SampleLaplace(b, rng);
  const double var = testing::SampleVariance(s);
  EXPECT_NEAR(var / (2 * b * b), 1.0, 0.02);
  EXPECT_LT(testing::KsStatisticLaplace(s, b), 0.01);
}

TEST(PerturbNumericTest, TinyNoiseAtHugeEpsilon) {
  Rng rng(3);
  const std::vector<double> col = {1.0, 50.0, 99.0};
  const auto out = PerturbNumeric(col, 100.0, 1e6, rng);
  for (size_t i = 0; i < col.size(); ++i) {
    EXPECT_LT(std::abs(out.values[i] - col[i]), 0.01);
  }
}

TEST(PerturbNumericTest, ClampsAndCounts) {
  Rng rng(4);
  const std::vector<double> col(1000, 50.0);
  const auto out = PerturbNumeric(col, 100.0, 0.1, rng, data::NumericRange{0, 100});
  size_t at_bounds = 0;
  for (double v : out.values) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 100.0);
    if (v == 0.0 || v == 100.0) ++at_bounds;
  }
  EXPECT_EQ(out.clamped_cells, at_bounds);
  EXPECT_GT(out.clamped_cells, 500u);  // scale 1000 around 50
  EXPECT_THROW(PerturbNumeric(col, -1.0, 1.0, rng), InvalidArgumentError);
  EXPECT_THROW(PerturbNumeric(col, 1.0, 0.0, rng), InvalidArgumentError);
}

TEST(ExponentialTest, ClosedFormProbabilities) {
  CategoricalMechanism mech;
  mech.categories = 2;
  mech.utility = {1, 0, 0, 1};
  mech.sensitivity = 1.0;
  const auto p = ExponentialProbabilities(mech, 0, 2.0);
  EXPECT_NEAR(p[0], std::exp(1.0) / (std::exp(1.0) + 1.0), 1e-15);
  EXPECT_NEAR(p[0], 0.7311, 1e-4);
}

TEST(ExponentialTest, BestCandidateFrequency) {
  const auto mech = CategoricalMechanism::Identity(2);
  Rng rng(9);
  size_t best = 0;
  const size_t n = 100000;
  for (size_t i = 0; i < n; ++i) best += ExponentialSelect(0, mech, 2.0, rng) == 0;
  EXPECT_NEAR(static_cast<double>(best) / n, std::exp(1.0) / (std::exp(1.0) + 1.0),
              0.01);
}

TEST(ExponentialTest, EqualUtilitiesAreUniform) {
  CategoricalMechanism mech;
  mech.categories = 2;
  mech.utility = {0.3, 0.3, 0.3, 0.3};
  Rng rng(10);
  const size_t n = 100000;
  size_t first = 0;
  for (size_t i = 0; i < n; ++i) first += ExponentialSelect(1, mech, 1.0, rng) == 0;
  const double sigma = std::sqrt(0.25 / n);
  EXPECT_NEAR(static_cast<double>(first) / n, 0.5, 3 * sigma);
}

TEST(ExponentialTest, FourCandidateChiSquare) {
  CategoricalMechanism mech;
  mech.categories = 4;
  mech.utility = {1.0, 0.5, 0.2, 0.0, 0.5, 1.0, 0.5, 0.2,
                  0.2, 0.5, 1.0, 0.5, 0.0, 0.2, 0.5, 1.0};
  mech.sensitivity = 1.0;
  const double eps = 3.0;
  const auto p = ExponentialProbabilities(mech, 0, eps);
  double z = 0.0;
  for (double u : {1.0, 0.5, 0.2, 0.0}) z += std::exp(eps * u / 2.0);
  EXPECT_NEAR(p[2], std::exp(eps * 0.2 / 2.0) / z, 1e-15);
  Rng rng(77);
  std::vector<size_t> counts(4, 0);
  for (int i = 0; i < 100000; ++i) ++counts[ExponentialSelect(0, mech, eps, rng)];
  EXPECT_GT(testing::ChiSquarePValue(counts, p), 0.001);
}

TEST(ExponentialTest, LargeEpsilonPicksArgmax) {
  const auto mech = CategoricalMechanism::Identity(5);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(ExponentialSelect(3, mech, 200.0, rng), 3u);
}

TEST(ExponentialTest, MinusInfinityExcludesCandidates) {
  CategoricalMechanism mech;
  mech.categories = 3;
  mech.utility = {0, -kInf, 0, -kInf, -kInf, -kInf, 0, 0, 0};
  const auto p = ExponentialProbabilities(mech, 0, 1.0);
  EXPECT_EQ(p[1], 0.0);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_THROW(ExponentialProbabilities(mech, 1, 1.0), DataError);
}

TEST(DpTableTest, BudgetSplitAndComposition) {
  const auto ds = testing::MixedDataset(300, 6, 8, 2);
  const auto res = DpProtectTable(ds, 0.5, {}, 42);
  EXPECT_EQ(res.budget.protected_attribute_count, 14u);
  EXPECT_NEAR(res.budget.per_attribute_epsilon, 0.5 / 14, 1e-15);
  EXPECT_NEAR(res.budget.per_attribute_epsilon, 0.035714, 1e-6);
  ASSERT_EQ(res.budget.entries.size(), 14u);
  EXPECT_EQ(res.budget.Spent(), 0.5);
  for (double eps : {0.5, 2.5, 5.0, 25.0, 50.0, 100.0, 0.3, 0.7, 1.1}) {
    EXPECT_EQ(DpProtectTable(ds, eps, {}, 1).budget.Spent(), eps) << eps;
  }
  for (const auto& e : res.budget.entries) {
    EXPECT_NEAR(e.epsilon, 0.5 / 14, 1e-15);
    EXPECT_EQ(e.mechanism, e.attribute[0] == 'n' ? "laplace" : "exponential");
  }
}

TEST(DpTableTest, ShapeSchemaAndLabelsPreserved) {
  const auto ds = testing::MixedDataset(300, 3, 3, 2);
  const auto res = DpProtectTable(ds, 1.0, {}, 42);
  EXPECT_EQ(res.data.rows(), ds.rows());
  EXPECT_EQ(res.data.cols(), ds.cols());
  EXPECT_EQ(res.data.schema(), ds.schema());
  EXPECT_EQ(res.data.Labels(), ds.Labels());
  EXPECT_EQ(res.data.provenance().kind, data::DatasetProvenance::Kind::kDpProtected);
  EXPECT_EQ(res.seed, 42u);
  EXPECT_NE(res.data.cells(), ds.cells());
  for (size_t r = 0; r < ds.rows(); ++r) {
    for (size_t c = 0; c < 3; ++c) {
      EXPECT_GE(res.data.at(r, c), 0.0);
      EXPECT_LE(res.data.at(r, c), 100.0);
    }
  }
}

TEST(DpTableTest, DeterministicUnderSeed) {
  const auto ds = testing::MixedDataset(200, 3, 3, 2);
  EXPECT_EQ(DpProtectTable(ds, 1.0, {}, 5).data.cells(),
            DpProtectTable(ds, 1.0, {}, 5).data.cells());
  EXPECT_NE(DpProtectTable(ds, 1.0, {}, 5).data.cells(),
            DpProtectTable(ds, 1.0, {}, 6).data.cells());
}

TEST(DpTableTest, RejectsNonRawInput) {
  const auto ds = testing::MixedDataset(20, 2, 1, 2);
  const auto dp = DpProtectTable(ds, 1.0, {}, 5).data;
  EXPECT_THROW(DpProtectTable(dp, 1.0, {}, 5), InvalidArgumentError);
  EXPECT_THROW(DpProtectTable(ds, 0.0, {}, 5), InvalidArgumentError);
}

TEST(DpTableTest, UtilityFileIsReorderedIntoSchemaOrder) {
  const auto ds = testing::MixedDataset(50, 1, 1, 2, 3);
  const auto path =
      (std::filesystem::temp_directory_path() / "eupg_utility_test.json").string();
  {
    std::ofstream out(path);
    out << R"({"format": "eupg-utility/1", "attributes": {"c0": {
      "categories": ["v2", "v0", "v1"], "sensitivity": 2.0,
      "utility": [[1, 0.5, null], [0.5, 1, 0], [null, 0, 1]]}}})";
  }
  const auto spec = LoadUtilityFile(path, ds.schema());
  std::filesystem::remove(path);
  const auto& m = spec.categorical.at("c0");
  EXPECT_EQ(m.sensitivity, 2.0);
  // Schema order v0, v1, v2: u(v0,v2) = 0.5, u(v1,v2) = -inf, u(v0,v1) = 0.
  EXPECT_EQ(m.utility[0 * 3 + 2], 0.5);
  EXPECT_EQ(m.utility[1 * 3 + 2], -kInf);
  EXPECT_EQ(m.utility[0 * 3 + 1], 0.0);
  EXPECT_EQ(m.utility[0 * 3 + 0], 1.0);
}

TEST(DpPixTest, ScaleFollowsSensitivity) {
  EXPECT_EQ(DpPixScale(4, 16, 1.0), 255.0);
  EXPECT_EQ(DpPixScale(4, 16, 0.5), 510.0);
  EXPECT_EQ(DpPixScale(2, 1, 1.0), 255.0 / 4.0);
}

PixelImage RandomImage(size_t w, size_t h, size_t channels, Rng& rng) {
  PixelImage img;
  img.width = w;
  img.height = h;
  img.channels = channels;
  img.pixels.resize(w * h * channels);
  for (auto& p : img.pixels) p = static_cast<uint8_t>(rng.UniformIndex(256));
  return img;
}

TEST(DpPixTest, BlocksAreUniform) {
  Rng rng(2);
  const auto img = RandomImage(8, 8, 1, rng);
  EXPECT_EQ(BlockMeans(img, 4).size(), 4u);
  const auto out = DpPix(img, 4, 16, 1.0, rng);
  for (size_t by = 0; by < 2; ++by) {
    for (size_t bx = 0; bx < 2; ++bx) {
      const uint8_t v = out.at(bx * 4, by * 4, 0);
      for (size_t y = 0; y < 4; ++y) {
        for (size_t x = 0; x < 4; ++x) EXPECT_EQ(out.at(bx * 4 + x, by * 4 + y, 0), v);
      }
    }
  }
}

TEST(DpPixTest, ConstantImageSurvivesHugeEpsilon) {
  PixelImage img;
  img.width = img.height = 16;
  img.channels = 3;
  img.pixels.assign(16 * 16 * 3, 77);
  Rng rng(1);
  EXPECT_EQ(DpPix(img, 4, 16, 1e6, rng).pixels, img.pixels);
}

TEST(DpPixTest, RejectsIndivisibleDimensions) {
  Rng rng(1);
  const auto img = RandomImage(10, 8, 1, rng);
  EXPECT_THROW(DpPix(img, 4, 16, 1.0, rng), InvalidArgumentError);
}

TEST(DpPixTest, PnmRoundTrip) {
  Rng rng(5);
  for (size_t channels : {1u, 3u}) {
    const auto img = RandomImage(12, 8, channels, rng);
    const auto path = (std::filesystem::temp_directory_path() /
                       ("eupg_pnm_test" + std::to_string(channels)))
                          .string();
    WritePnm(img, path);
    const auto back = ReadPnm(path);
    std::filesystem::remove(path);
    EXPECT_EQ(back.width, img.width);
    EXPECT_EQ(back.height, img.height);
    EXPECT_EQ(back.channels, channels);
    EXPECT_EQ(back.pixels, img.pixels);
  }
}

}  // namespace
}  // namespace eupg::dpanon
