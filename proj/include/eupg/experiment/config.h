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

#ifndef EUPG_EXPERIMENT_CONFIG_H_
#define EUPG_EXPERIMENT_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eupg/attack/mia.h"
#include "eupg/mlp/train.h"
#include "json.hpp"

namespace eupg::experiment {

enum class Method { kOriginal, kSisa, kEupgK, kEupgDp };

std::string_view MethodName(Method m);
Method ParseMethod(std::string_view name);

// One experiment, as read from a JSON config file. Layout and defaults:
//
//   {"data": {"train": "", "test": "", "schema": "", "utility": null},
//    "method": {"name": "original", "k": 10, "epsilon": 0.5,
//               "shards": 5, "slices": 10},
//    "model": {"hidden": [128]},
//    "train": {"batch_size": 512, "learning_rate": 0.01,
//              "finetune_learning_rate": null, "epochs": 100},
//    "finetune_epochs": 5,
//    "forget": {"ratio": 0.05, "seed": null, "epochs": null},
//    "attacks": ["loss_based", "entropy_based"],
//    "utility_metric": "accuracy",
//    "output_dir": "eupg_out",
//    "seed": 0, "repetitions": 1, "compare_retrain": false, "threads": 0}
struct ExperimentConfig {
  std::string train_csv;
  std::string test_csv;
  std::string schema;
  std::optional<std::string> utility_file;

  Method method = Method::kOriginal;
  size_t k = 10;
  double epsilon = 0.5;
  size_t shards = 5;
  size_t slices = 10;

  std::vector<size_t> hidden{128};
  mlp::TrainConfig train;  // seed is per repetition, see TrainSeed
  size_t finetune_epochs = 5;

  double forget_ratio = 0.05;
  std::optional<uint64_t> forget_seed;
  std::optional<size_t> forget_epochs;  // defaults to finetune_epochs

  std::vector<attack::AttackKind> attacks{attack::AttackKind::kLossBased,
                                          attack::AttackKind::kEntropyBased};
  std::string utility_metric = "accuracy";
  std::string output_dir = "eupg_out";
  uint64_t seed = 0;
  size_t repetitions = 1;
  bool compare_retrain = false;
  size_t threads = 0;  // 0 keeps the OpenMP default

  // Seeds of repetition `rep`; all derive from seed + rep.
  uint64_t RepetitionSeed(size_t rep) const { return seed + rep; }
  uint64_t TrainSeed(size_t rep) const { return RepetitionSeed(rep); }
  uint64_t PrivacySeed(size_t rep) const;
  uint64_t ForgetSeed(size_t rep) const;
  uint64_t AttackSeed(size_t rep) const;
  mlp::TrainConfig TrainFor(size_t rep) const;
  size_t ForgetEpochs() const {
    return forget_epochs ? *forget_epochs : finetune_epochs;
  }

  nlohmann::json ToJson() const;
  // Throws InvalidArgumentError on malformed or out-of-range values and
  // unknown keys.
  static ExperimentConfig FromJson(const nlohmann::json& j);
  // Range checks; with check_files, also that the data files exist.
  void Validate(bool check_files) const;
};

// Builds a config from defaults, then the file (if any), then `overrides`,
// each merged over the previous one. Relative data paths in the file are
// resolved against the file's directory.
ExperimentConfig LoadConfig(const std::optional<std::string>& path,
                            const nlohmann::json& overrides);

// Turns "a.b.c=value" into {"a": {"b": {"c": value}}} merged into `patch`.
// The value is parsed as JSON when possible and taken as a string otherwise.
void AddOverride(nlohmann::json& patch, const std::string& assignment);

// output_dir resolved against $EUPG_OUTPUT_ROOT when it is relative and the
// variable is set.
std::string ResolveOutputDir(const ExperimentConfig& cfg);

inline constexpr const char* kOutputRootEnv = "EUPG_OUTPUT_ROOT";

}  // namespace eupg::experiment

#endif  // EUPG_EXPERIMENT_CONFIG_H_
