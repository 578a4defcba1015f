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
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eupg/common/error.h"
#include "eupg/data/csv.h"
#include "eupg/experiment/config.h"
#include "eupg/experiment/pipeline.h"
#include "support/fixtures.h"

namespace eupg::experiment {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("eupg_experiment_" + std::to_string(::getpid()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string FileBytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(ConfigTest, DefaultsRoundTrip) {
  const ExperimentConfig d;
  const auto back = ExperimentConfig::FromJson(d.ToJson());
  EXPECT_EQ(back.ToJson(), d.ToJson());
  EXPECT_EQ(back.method, Method::kOriginal);
  EXPECT_EQ(back.k, 10u);
  EXPECT_EQ(back.finetune_epochs, 5u);
  EXPECT_EQ(back.ForgetEpochs(), 5u);
  EXPECT_EQ(back.hidden, (std::vector<size_t>{128}));
}

TEST(ConfigTest, PartialJsonMergesOverDefaults) {
  const auto c = ExperimentConfig::FromJson(
      json::parse(R"({"method": {"name": "eupg_dp", "epsilon": 2.5},
                      "train": {"epochs": 7}, "forget": {"epochs": 0}})"));
  EXPECT_EQ(c.method, Method::kEupgDp);
  EXPECT_EQ(c.epsilon, 2.5);
  EXPECT_EQ(c.k, 10u);
  EXPECT_EQ(c.train.epochs, 7u);
  EXPECT_EQ(c.ForgetEpochs(), 0u);
}

TEST(ConfigTest, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(ExperimentConfig::FromJson(json::parse(R"({"methd": {}})")),
               InvalidArgumentError);
  EXPECT_THROW(
      ExperimentConfig::FromJson(json::parse(R"({"method": {"kk": 3}})")),
      InvalidArgumentError);
  EXPECT_THROW(
      ExperimentConfig::FromJson(json::parse(R"({"train": {"epochs": -1}})")),
      InvalidArgumentError);
  EXPECT_THROW(
      ExperimentConfig::FromJson(json::parse(R"({"model": {"hidden": [8, -2]}})")),
      InvalidArgumentError);
  EXPECT_THROW(ExperimentConfig::FromJson(
                   json::parse(R"({"method": {"name": "magic"}})")),
               InvalidArgumentError);
  EXPECT_THROW(
      ExperimentConfig::FromJson(json::parse(R"({"forget": {"ratio": 1.5}})")),
      InvalidArgumentError);
}

TEST(ConfigTest, SeedsDifferPerRepetitionAndPurpose) {
  ExperimentConfig c;
  c.seed = 4;
  EXPECT_EQ(c.TrainSeed(1), 5u);
  EXPECT_NE(c.PrivacySeed(0), c.PrivacySeed(1));
  EXPECT_NE(c.PrivacySeed(0), c.AttackSeed(0));
  EXPECT_NE(c.ForgetSeed(0), c.AttackSeed(0));
  c.forget_seed = 100;
  EXPECT_EQ(c.ForgetSeed(2), 102u);
  EXPECT_EQ(c.TrainFor(3).seed, 7u);
}

TEST(ConfigTest, OverridesBeatFileAndPathsResolveAgainstFile) {
  TempDir tmp;
  const auto file = tmp.path() / "cfg.json";
  std::ofstream(file) << R"({"data": {"train": "a.csv", "schema": "/abs/s"},
                            "method": {"name": "eupg_k", "k": 5}, "seed": 3})";
  json patch = json::object();
  AddOverride(patch, "method.k=20");
  AddOverride(patch, "output_dir=runs/x");
  AddOverride(patch, "model.hidden=[16,8]");
  const auto c = LoadConfig(file.string(), patch);
  EXPECT_EQ(c.k, 20u);
  EXPECT_EQ(c.seed, 3u);
  EXPECT_EQ(c.method, Method::kEupgK);
  EXPECT_EQ(c.output_dir, "runs/x");
  EXPECT_EQ(c.hidden, (std::vector<size_t>{16, 8}));
  EXPECT_EQ(fs::path(c.train_csv), fs::absolute(tmp.path() / "a.csv"));
  EXPECT_EQ(c.schema, "/abs/s");
  json bad = json::object();
  EXPECT_THROW(AddOverride(bad, "no_equals_sign"), InvalidArgumentError);
  EXPECT_THROW(LoadConfig((tmp.path() / "missing.json").string(), json::object()),
               InvalidArgumentError);
}

TEST(ConfigTest, OutputRootAppliesToRelativeDirs) {
  ExperimentConfig c;
  c.output_dir = "out/a";
  ::unsetenv(kOutputRootEnv);
  EXPECT_EQ(ResolveOutputDir(c), "out/a");
  ::setenv(kOutputRootEnv, "/tmp/root", 1);
  EXPECT_EQ(ResolveOutputDir(c), "/tmp/root/out/a");
  c.output_dir = "/abs/dir";
  EXPECT_EQ(ResolveOutputDir(c), "/abs/dir");
  ::unsetenv(kOutputRootEnv);
}

TEST(SweepTest, GridsAndPointNames) {
  EXPECT_EQ(DefaultGrid("k"), (std::vector<double>{3, 5, 10, 20, 80}));
  EXPECT_EQ(DefaultGrid("epsilon"),
            (std::vector<double>{0.5, 2.5, 5, 25, 50, 100}));
  EXPECT_EQ(DefaultGrid("epochs"), (std::vector<double>{0, 5, 10, 20}));
  EXPECT_EQ(DefaultGrid("ratio"), (std::vector<double>{0.05, 0.1, 0.2, 0.5}));
  EXPECT_THROW(DefaultGrid("depth"), InvalidArgumentError);
  const auto pts = SweepPoints("epsilon", {0.5, 25});
  EXPECT_EQ(pts[0].name, "epsilon-0.5");
  EXPECT_EQ(pts[1].name, "epsilon-25");
  ExperimentConfig base;
  const auto c = ConfigForPoint(base, pts[0], "/o");
  EXPECT_EQ(c.method, Method::kEupgDp);
  EXPECT_EQ(c.epsilon, 0.5);
  EXPECT_EQ(c.output_dir, "/o/sweep/epsilon-0.5");
  EXPECT_THROW(ConfigForPoint(base, SweepPoints("epochs", {5})[0], "/o"),
               InvalidArgumentError);
  EXPECT_THROW(ConfigForPoint(base, SweepPoints("k", {2.5})[0], "/o"),
               InvalidArgumentError);
}

json FakeReport(double train_seconds, double acc, double auc) {
  return {{"command", "run"},
          {"method", "original"},
          {"parameters", json::object()},
          {"config", json::object()},
          {"timings", {{"train_seconds", train_seconds}}},
          {"utility", {{"metric", "accuracy"}, {"value", acc}}},
          {"mia",
           {{{"population", "train_vs_test"},
             {"attack", "loss_based"},
             {"auc", auc}}}}};
}

TEST(SummarizeTest, MeanAndSampleStd) {
  const auto s = Summarize(
      {FakeReport(1, 0.8, 0.5), FakeReport(2, 0.9, 0.6), FakeReport(3, 1.0, 0.7)});
  EXPECT_EQ(s["format"], kSummaryFormat);
  EXPECT_EQ(s["repetitions"], 3);
  const auto& t = s["metrics"]["timings.train_seconds"];
  EXPECT_DOUBLE_EQ(t["mean"].get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(t["std"].get<double>(), 1.0);
  EXPECT_EQ(t["n"], 3);
  EXPECT_NEAR(s["metrics"]["mia.train_vs_test.loss_based"]["mean"].get<double>(),
              0.6, 1e-12);
  EXPECT_FALSE(s["metrics"].contains("utility.metric"));
  EXPECT_EQ(Summarize({FakeReport(1, 0.8, 0.5)})["metrics"]["utility.value"]["std"],
            0.0);
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto train = testing::MixedDataset(240, 3, 2, 1);
    const auto test = testing::MixedDataset(120, 3, 2, 2);
    data::SaveCsv(train, (tmp_.path() / "train.csv").string());
    data::SaveCsv(test, (tmp_.path() / "test.csv").string());
    std::ofstream(tmp_.path() / "data.schema") << train.schema().ToText();
    cfg_.train_csv = (tmp_.path() / "train.csv").string();
    cfg_.test_csv = (tmp_.path() / "test.csv").string();
    cfg_.schema = (tmp_.path() / "data.schema").string();
    cfg_.hidden = {8};
    cfg_.train.epochs = 3;
    cfg_.train.batch_size = 32;
    cfg_.finetune_epochs = 2;
    cfg_.k = 5;
    cfg_.shards = 2;
    cfg_.slices = 3;
    cfg_.forget_ratio = 0.1;
  }
  ExperimentConfig WithOutput(Method m, const std::string& name) const {
    ExperimentConfig c = cfg_;
    c.method = m;
    c.output_dir = (tmp_.path() / name).string();
    return c;
  }
  TempDir tmp_;
  ExperimentConfig cfg_;
};

TEST_F(PipelineTest, RunAndForgetEveryMethod) {
  for (Method m : {Method::kOriginal, Method::kSisa, Method::kEupgK,
                   Method::kEupgDp}) {
    SCOPED_TRACE(std::string(MethodName(m)));
    auto c = WithOutput(m, std::string(MethodName(m)));
    c.compare_retrain = true;
    const auto run = RunCommand(c);
    EXPECT_EQ(run["repetitions"], 1);
    const fs::path out = c.output_dir;
    EXPECT_TRUE(fs::exists(out / "run_summary.json"));
    const auto report = ReadJsonFile((out / "rep0" / "run.json").string());
    EXPECT_EQ(report["format"], kReportFormat);
    EXPECT_EQ(report["method"], MethodName(m));
    const double acc = report["utility"]["value"].get<double>();
    EXPECT_GE(acc, 0.0);
    EXPECT_LE(acc, 1.0);
    ForgetCommand(c, std::nullopt);
    const auto forget = ReadJsonFile((out / "rep0" / "forget.json").string());
    EXPECT_EQ(forget["forget"]["count"], 24);
    EXPECT_EQ(forget["forget"]["retain_count"], 216);
    EXPECT_EQ(forget.contains("baseline"), m != Method::kOriginal);
    EXPECT_TRUE(fs::exists(out / "forget_summary.json"));
  }
}

TEST_F(PipelineTest, RerunsAreBitIdentical) {
  const auto a = WithOutput(Method::kEupgDp, "a");
  const auto b = WithOutput(Method::kEupgDp, "b");
  RunCommand(a);
  RunCommand(b);
  ForgetCommand(a, std::nullopt);
  ForgetCommand(b, std::nullopt);
  for (const char* f : {"rep0/state/deployed_model.bin",
                        "rep0/state/base_model.bin",
                        "rep0/state/protected.csv",
                        "rep0/forget/state/deployed_model.bin"}) {
    SCOPED_TRACE(f);
    ASSERT_TRUE(fs::exists(fs::path(a.output_dir) / f));
    EXPECT_EQ(FileBytes(fs::path(a.output_dir) / f),
              FileBytes(fs::path(b.output_dir) / f));
  }
  const auto ra = ReadJsonFile(a.output_dir + "/rep0/forget.json");
  const auto rb = ReadJsonFile(b.output_dir + "/rep0/forget.json");
  EXPECT_EQ(ra["utility"], rb["utility"]);
  EXPECT_EQ(ra["mia"], rb["mia"]);
}

TEST_F(PipelineTest, MissingInputFails) {
  auto c = WithOutput(Method::kOriginal, "x");
  c.test_csv = (tmp_.path() / "nope.csv").string();
  EXPECT_THROW(RunCommand(c), InvalidArgumentError);
  auto multi = WithOutput(Method::kOriginal, "y");
  multi.repetitions = 2;
  EXPECT_THROW(ForgetCommand(multi, std::string("somewhere")),
               InvalidArgumentError);
}

TEST_F(PipelineTest, SweepSkipsCompletedPoints) {
  const auto c = WithOutput(Method::kEupgK, "sw");
  const auto first = SweepCommand(c, {{"k", {3, 5}}});
  ASSERT_EQ(first["points"].size(), 2u);
  EXPECT_EQ(first["points"][0]["status"], "completed");
  EXPECT_EQ(first["points"][1]["name"], "k-5");
  const fs::path marker = fs::path(c.output_dir) / "sweep" / "k-3" / "complete.json";
  ASSERT_TRUE(fs::exists(marker));
  const auto before = FileBytes(marker);
  fs::remove(fs::path(c.output_dir) / "sweep" / "k-5" / "complete.json");
  const auto second = SweepCommand(c, {{"k", {3, 5}}});
  EXPECT_EQ(second["points"][0]["status"], "skipped");
  EXPECT_EQ(second["points"][1]["status"], "completed");
  EXPECT_EQ(FileBytes(marker), before);
}

TEST_F(PipelineTest, FlattenReportsHasOneRowPerReport) {
  const auto c = WithOutput(Method::kOriginal, "flat");
  RunCommand(c);
  ForgetCommand(c, std::nullopt);
  const auto csv = FlattenReports({c.output_dir});
  size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  EXPECT_EQ(lines, 3u);  // header + run + forget
  EXPECT_NE(csv.find("mia_"), std::string::npos);
}

}  // namespace
}  // namespace eupg::experiment
