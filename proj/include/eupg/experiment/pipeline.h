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

#ifndef EUPG_EXPERIMENT_PIPELINE_H_
#define EUPG_EXPERIMENT_PIPELINE_H_

#include <optional>
#include <string>
#include <vector>

#include "eupg/data/dataset.h"
#include "eupg/data/encoding.h"
#include "eupg/experiment/config.h"
#include "json.hpp"

namespace eupg::experiment {

// Training and test splits loaded against one schema, plus encodings.
struct Inputs {
  data::TabularDataset train;
  data::TabularDataset test;
  data::EncodedMatrix train_encoded;
  data::EncodedMatrix test_encoded;
};

Inputs LoadInputs(const ExperimentConfig& cfg);

// Output layout under ResolveOutputDir(cfg):
//
//   rep<i>/state/           trained artifacts (method dependent)
//   rep<i>/run.json         pre-forget report
//   rep<i>/forget/state/    artifacts after forgetting
//   rep<i>/forget.json      post-forget report
//   rep<i>/attack.json      standalone attack report
//   run_summary.json, forget_summary.json
std::string RepetitionDir(const ExperimentConfig& cfg, size_t rep);

// Prepare phase: protect/train/fine-tune, save the state, evaluate utility
// and membership inference on (training rows vs test rows).
nlohmann::json RunRepetition(const ExperimentConfig& cfg, const Inputs& in,
                             size_t rep);

// Forget phase on the state in `state_dir` (default rep<i>/state). The
// post-forget report carries MIA over (forget rows vs test) and (retain rows
// vs test), compute and I/O time, and optionally a retrain-from-scratch
// baseline on the same retain set.
nlohmann::json ForgetRepetition(const ExperimentConfig& cfg, const Inputs& in,
                                size_t rep,
                                const std::optional<std::string>& state_dir);

struct AttackTarget {
  std::optional<std::string> model_path;  // single model file
  std::optional<std::string> state_dir;   // default rep<i>/state
  std::optional<std::string> members_csv;
  std::optional<std::string> nonmembers_csv;
};

nlohmann::json AttackRepetition(const ExperimentConfig& cfg, const Inputs& in,
                                size_t rep, const AttackTarget& target);

// Writes the protected training set and a ledger (k-anonymity check or DP
// budget) into `dir`; returns the ledger.
nlohmann::json AnonymizeTable(const ExperimentConfig& cfg, const Inputs& in,
                              const std::string& dir);

struct ImageAnonymization {
  std::string input;
  std::string output;
  size_t block = 4;
  size_t m = 16;
  double epsilon = 0.5;
  uint64_t seed = 0;
};

nlohmann::json AnonymizeImage(const ImageAnonymization& job);

// Mean and sample standard deviation of every numeric measurement shared
// by the reports.
nlohmann::json Summarize(const std::vector<nlohmann::json>& reports);

struct SweepPoint {
  std::string axis;
  double value = 0.0;
  std::string name;  // "<axis>-<value>"
};

// Default grids: k {3,5,10,20,80}, epsilon {0.5,2.5,5,25,50,100},
// epochs {0,5,10,20}, ratio {0.05,0.1,0.2,0.5}.
std::vector<double> DefaultGrid(const std::string& axis);
std::vector<SweepPoint> SweepPoints(const std::string& axis,
                                    const std::vector<double>& values);
// Config for one grid point; its output_dir is <dir>/sweep/<name>.
ExperimentConfig ConfigForPoint(const ExperimentConfig& base,
                                const SweepPoint& point,
                                const std::string& base_dir);

// Flattens report files (searched recursively under each path) into a CSV
// table, one row per report.
std::string FlattenReports(const std::vector<std::string>& paths);

// Every repetition of the run / forget phase plus the summary file;
// returns the summary.
nlohmann::json RunCommand(const ExperimentConfig& cfg);
nlohmann::json ForgetCommand(const ExperimentConfig& cfg,
                             const std::optional<std::string>& state_dir);

// Runs every point of the given axes (run phase; the ratio axis also runs
// the forget phase). A point whose directory holds complete.json is
// skipped. Returns the sweep index, also written to <out>/sweep/index.json.
struct SweepAxis {
  std::string name;
  std::vector<double> values;
};
nlohmann::json SweepCommand(const ExperimentConfig& cfg,
                            const std::vector<SweepAxis>& axes);

void WriteJsonFile(const std::string& path, const nlohmann::json& j);
nlohmann::json ReadJsonFile(const std::string& path);

inline constexpr const char* kReportFormat = "eupg-report/1";
inline constexpr const char* kSummaryFormat = "eupg-summary/1";

}  // namespace eupg::experiment

#endif  // EUPG_EXPERIMENT_PIPELINE_H_
