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
#include <sstream>

#include "eupg/common/error.h"
#include "eupg/common/rng.h"
#include "eupg/kernels/kernels.h"
#include "eupg/mlp/metrics.h"
#include "eupg/mlp/model.h"
#include "eupg/mlp/model_io.h"
#include "eupg/mlp/train.h"
#include "support/fixtures.h"
#include "support/gradcheck.h"

namespace eupg::mlp {
namespace {

TEST(InitTest, DeterministicGlorotWithZeroBiases) {
  const auto a = MlpModel::Init({108, 128, 2}, 7);
  const auto b = MlpModel::Init({108, 128, 2}, 7);
  EXPECT_EQ(testing::ModelBytes(a), testing::ModelBytes(b));
  EXPECT_NE(testing::ModelBytes(a),
            testing::ModelBytes(MlpModel::Init({108, 128, 2}, 8)));
  const double limit = std::sqrt(6.0 / (108 + 128));
  for (double w : a.layers()[0].weights) EXPECT_LE(std::abs(w), limit);
  for (const auto& layer : a.layers()) {
    for (double bias : layer.biases) EXPECT_EQ(bias, 0.0);
  }
  EXPECT_EQ(a.ParameterCount(), 108u * 128 + 128 + 128 * 2 + 2);
  EXPECT_EQ(a.provenance(), OriginalProvenance());
}

TEST(InitTest, RejectsInvalidDims) {
  EXPECT_THROW(MlpModel::Init({4}, 1), InvalidArgumentError);
  EXPECT_THROW(MlpModel::Init({4, 0, 2}, 1), InvalidArgumentError);
}

TEST(ForwardTest, RowsSumToOne) {
  Rng rng(3);
  const auto model = MlpModel::Init({6, 9, 4}, 3);
  const auto x = testing::RandomPoints(50, 6, rng);
  const auto p = Forward(model, x, 50);
  for (size_t r = 0; r < 50; ++r) {
    double s = 0.0;
    for (size_t c = 0; c < 4; ++c) s += p[r * 4 + c];
    EXPECT_NEAR(s, 1.0, 1e-9);
  }
}

TEST(ForwardTest, ZeroWeightsGiveUniformProbabilities) {
  auto model = MlpModel::Init({3, 5, 4}, 1);
  std::vector<double> zeros(model.ParameterCount(), 0.0);
  model.SetFlatParameters(zeros);
  const std::vector<double> x = {0.3, 0.1, 0.9};
  for (double p : Forward(model, x, 1)) EXPECT_EQ(p, 0.25);
}

TEST(ForwardTest, BatchedEqualsPerRow) {
  Rng rng(4);
  const auto model = MlpModel::Init({10, 16, 3}, 4);
  const auto x = testing::RandomPoints(64, 10, rng);
  const auto all = Forward(model, x, 64);
  for (size_t r = 0; r < 64; ++r) {
    const auto one = Forward(model, std::span(x).subspan(r * 10, 10), 1);
    for (size_t c = 0; c < 3; ++c) EXPECT_NEAR(all[r * 3 + c], one[c], 1e-12);
  }
}

TEST(ForwardTest, ShapeMismatchThrows) {
  const auto model = MlpModel::Init({3, 2, 2}, 1);
  const std::vector<double> x(5, 0.0);
  EXPECT_THROW(Forward(model, x, 2), InvalidArgumentError);
}

TEST(GradientTest, MatchesFiniteDifferences) {
  Rng rng(11);
  for (int draw = 0; draw < 5; ++draw) {
    const auto model = MlpModel::Init({5, 4, 3}, 100 + draw);
    const auto x = testing::RandomPoints(8, 5, rng);
    std::vector<int> y(8);
    for (int& v : y) v = static_cast<int>(rng.UniformIndex(3));
    EXPECT_LT(testing::MaxRelativeGradientError(model, x, y, 8), 1e-5);
  }
}

TEST(GradientTest, DeeperNetwork) {
  Rng rng(12);
  const auto model = MlpModel::Init({4, 6, 5, 3}, 9);
  const auto x = testing::RandomPoints(10, 4, rng);
  std::vector<int> y(10);
  for (int& v : y) v = static_cast<int>(rng.UniformIndex(3));
  EXPECT_LT(testing::MaxRelativeGradientError(model, x, y, 10), 1e-5);
}

TrainConfig SmallConfig(size_t epochs, uint64_t seed) {
  TrainConfig cfg;
  cfg.batch_size = 32;
  cfg.epochs = epochs;
  cfg.seed = seed;
  return cfg;
}

TEST(TrainTest, ZeroEpochsIsIdentity) {
  const auto data = testing::Blobs(50, 3, 1);
  const auto model = MlpModel::Init({3, 4, 2}, 1);
  const auto out = Train(model, data, SmallConfig(0, 1));
  EXPECT_TRUE(SameParameters(out, model));
}

TEST(TrainTest, SeparableBlobsReachHighAccuracy) {
  const auto data = testing::Blobs(200, 2, 3);
  const auto model = MlpModel::Init({2, 16, 2}, 3);
  const auto trained = Train(model, data, SmallConfig(50, 3));
  EXPECT_GE(Accuracy(trained, data), 0.99);
  // The input model is not modified.
  EXPECT_TRUE(SameParameters(model, MlpModel::Init({2, 16, 2}, 3)));
}

TEST(TrainTest, LossDecreases) {
  const auto ds = testing::MixedDataset(400, 3, 2, 8);
  const auto data = data::Encode(ds);
  const auto model = MlpModel::Init(LayerDimsFor(data, {16}), 2);
  TrainConfig cfg = SmallConfig(30, 2);
  cfg.batch_size = data.rows;  // full batch
  cfg.learning_rate = 1e-3;
  std::vector<double> losses;
  Train(model, data, cfg, &losses);
  ASSERT_EQ(losses.size(), 30u);
  for (size_t e = 1; e < losses.size(); ++e) {
    EXPECT_LT(losses[e], losses[e - 1]) << "epoch " << e;
  }
}

TEST(TrainTest, BitIdenticalAcrossRunsAndThreadCounts) {
  const auto data = data::Encode(testing::MixedDataset(700, 4, 3, 5));
  const auto model = MlpModel::Init(LayerDimsFor(data, {32}), 5);
  const int saved = kernels::MaxThreads();
  std::vector<std::string> bytes;
  for (int threads : {1, 3, 1, 4}) {
    kernels::SetThreads(threads);
    bytes.push_back(testing::ModelBytes(Train(model, data, SmallConfig(5, 9))));
  }
  kernels::SetThreads(saved);
  for (const auto& b : bytes) EXPECT_EQ(b, bytes.front());
}

TEST(TrainTest, LabelOutOfRangeIsRejected) {
  auto data = testing::Blobs(10, 2, 1);
  data.labels[3] = 2;
  EXPECT_THROW(Train(MlpModel::Init({2, 3, 2}, 1), data, SmallConfig(1, 1)),
               InvalidArgumentError);
}

TEST(TrainTest, NonFiniteLossAborts) {
  auto data = testing::Blobs(20, 2, 1);
  data.features[4] = std::nan("");
  const TrainConfig cfg = SmallConfig(3, 1);
  EXPECT_THROW(Train(MlpModel::Init({2, 8, 2}, 1), data, cfg), NumericError);
}

TEST(TrainTest, ConfigValidation) {
  TrainConfig cfg;
  cfg.batch_size = 0;
  EXPECT_THROW(cfg.Validate(), InvalidArgumentError);
  cfg = TrainConfig{};
  cfg.learning_rate = 0;
  EXPECT_THROW(cfg.Validate(), InvalidArgumentError);
}

TEST(FinetuneTest, ProvenanceAndIdentity) {
  const auto data = testing::Blobs(64, 3, 2);
  auto base = MlpModel::Init({3, 4, 2}, 1);
  base.set_provenance(ProtectedProvenance("k=10"));
  const auto same = Finetune(base, data, 0, SmallConfig(100, 1));
  EXPECT_TRUE(SameParameters(same, base));
  EXPECT_EQ(same.provenance(), base.provenance());
  const auto tuned = Finetune(base, data, 5, SmallConfig(100, 1));
  EXPECT_FALSE(SameParameters(tuned, base));
  EXPECT_EQ(tuned.provenance(), "finetuned(protected(k=10);epochs=5)");
  EXPECT_TRUE(DescendsFrom(tuned.provenance(), base.provenance()));
  EXPECT_TRUE(DescendsFrom(Finetune(tuned, data, 2, SmallConfig(1, 1)).provenance(),
                           base.provenance()));
  EXPECT_FALSE(DescendsFrom(tuned.provenance(), OriginalProvenance()));
}

TEST(FinetuneTest, UsesItsOwnStreamAndLearningRate) {
  const auto data = testing::Blobs(64, 3, 2);
  const auto base = MlpModel::Init({3, 4, 2}, 1);
  TrainConfig cfg = SmallConfig(3, 1);
  const auto trained = Train(base, data, cfg);
  const auto tuned = Finetune(base, data, 3, cfg);
  EXPECT_FALSE(SameParameters(trained, tuned));
  cfg.finetune_learning_rate = 1e-4;
  EXPECT_FALSE(SameParameters(Finetune(base, data, 3, cfg), tuned));
}

TEST(MetricsTest, LossEntropyAccuracy) {
  const std::vector<double> p = {0.9, 0.1, 0.5, 0.5, 0.2, 0.8};
  const std::vector<int> y = {0, 1, 0};
  const auto loss = LossPerExample(p, y, 2);
  EXPECT_DOUBLE_EQ(loss[0], -std::log(0.9));
  EXPECT_DOUBLE_EQ(loss[2], -std::log(0.2));
  const auto h = EntropyPerExample(p, 2);
  EXPECT_DOUBLE_EQ(h[1], std::log(2.0));
  // Row 1 ties; the lowest index wins, which is wrong for label 1.
  EXPECT_DOUBLE_EQ(Accuracy(p, y, 2), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(AucUtility(p, std::vector<int>{0, 1, 1}, 2), 1.0);
}

TEST(ModelIoTest, RoundTripIsBitExact) {
  auto model = MlpModel::Init({7, 5, 3}, 42);
  model.set_provenance("finetuned(protected(epsilon=0.5);epochs=5)");
  model.set_train_seed(99);
  std::stringstream buf;
  WriteModel(model, buf);
  const auto back = ReadModel(buf);
  EXPECT_TRUE(SameParameters(back, model));
  EXPECT_EQ(back.provenance(), model.provenance());
  EXPECT_EQ(back.train_seed(), 99u);
  EXPECT_EQ(back.layer_dims(), model.layer_dims());
}

TEST(ModelIoTest, RejectsCorruptFiles) {
  const auto bytes = testing::ModelBytes(MlpModel::Init({3, 2, 2}, 1));
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return ReadModel(in);
  };
  EXPECT_THROW(parse(bytes.substr(0, bytes.size() - 3)), DataError);
  EXPECT_THROW(parse(bytes + "x"), DataError);
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(parse(bad_magic), DataError);
  std::string bad_version = bytes;
  bad_version[8] = 2;
  EXPECT_THROW(parse(bad_version), DataError);
}

}  // namespace
}  // namespace eupg::mlp
