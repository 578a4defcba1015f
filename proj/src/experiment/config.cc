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

#include "eupg/experiment/config.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <type_traits>

#include "eupg/common/error.h"
#include "eupg/common/rng.h"

namespace eupg::experiment {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr uint64_t kPrivacyStream = 0x70726976ULL;  // "priv"
constexpr uint64_t kForgetStream = 0x666f7267ULL;   // "forg"
constexpr uint64_t kAttackStream = 0x61747461ULL;   // "atta"

// Objects merge key by key; anything else replaces.
void DeepMerge(json& base, const json& patch) {
  if (!base.is_object() || !patch.is_object()) {
    base = patch;
    return;
  }
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    if (base.contains(it.key())) {
      DeepMerge(base[it.key()], it.value());
    } else {
      base[it.key()] = it.value();
    }
  }
}

void CheckKnownKeys(const json& j, const json& reference,
                    const std::string& prefix) {
  if (!j.is_object()) return;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!reference.contains(it.key())) {
      throw InvalidArgumentError("unknown config key '" + key + "'");
    }
    const json& ref = reference[it.key()];
    if (ref.is_object()) {
      if (!it.value().is_object()) {
        throw InvalidArgumentError("config key '" + key +
                                   "' must be an object");
      }
      CheckKnownKeys(it.value(), ref, key);
    }
  }
}

std::string ResolveAgainst(const fs::path& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (base / p).lexically_normal().string();
}

template <typename T>
T Get(const json& j, const char* key) {
  if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (j.contains(key) && !j.at(key).is_number_unsigned()) {
      throw InvalidArgumentError(std::string("config key '") + key +
                                 "' must be a non-negative integer");
    }
  }
  if constexpr (std::is_same_v<T, std::vector<size_t>>) {
    if (j.contains(key) && j.at(key).is_array()) {
      for (const auto& v : j.at(key)) {
        if (!v.is_number_unsigned()) {
          throw InvalidArgumentError(std::string("config key '") + key +
                                     "' must hold non-negative integers");
        }
      }
    }
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgumentError(std::string("config key '") + key +
                               "': " + e.what());
  }
}

template <typename T>
std::optional<T> GetOptional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return Get<T>(j, key);
}

void RequireFile(const std::string& what, const std::string& path) {
  if (path.empty()) throw InvalidArgumentError(what + " path is not set");
  if (!fs::is_regular_file(path)) {
    throw InvalidArgumentError(what + " file not found: " + path);
  }
}

}  // namespace

std::string_view MethodName(Method m) {
  switch (m) {
    case Method::kOriginal:
      return "original";
    case Method::kSisa:
      return "sisa";
    case Method::kEupgK:
      return "eupg_k";
    case Method::kEupgDp:
      return "eupg_dp";
  }
  return "original";
}

Method ParseMethod(std::string_view name) {
  for (Method m :
       {Method::kOriginal, Method::kSisa, Method::kEupgK, Method::kEupgDp}) {
    if (name == MethodName(m)) return m;
  }
  throw InvalidArgumentError("unknown method '" + std::string(name) +
                             "' (expected original, sisa, eupg_k or eupg_dp)");
}

uint64_t ExperimentConfig::PrivacySeed(size_t rep) const {
  return MixSeed(RepetitionSeed(rep), kPrivacyStream);
}

uint64_t ExperimentConfig::ForgetSeed(size_t rep) const {
  return forget_seed ? *forget_seed + rep
                     : MixSeed(RepetitionSeed(rep), kForgetStream);
}

uint64_t ExperimentConfig::AttackSeed(size_t rep) const {
  return MixSeed(RepetitionSeed(rep), kAttackStream);
}

mlp::TrainConfig ExperimentConfig::TrainFor(size_t rep) const {
  mlp::TrainConfig cfg = train;
  cfg.seed = TrainSeed(rep);
  return cfg;
}

json ExperimentConfig::ToJson() const {
  auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
  json attack_names = json::array();
  for (auto a : attacks) attack_names.push_back(std::string(attack::AttackName(a)));
  return json{
      {"data",
       {{"train", train_csv},
        {"test", test_csv},
        {"schema", schema},
        {"utility", opt(utility_file)}}},
      {"method",
       {{"name", std::string(MethodName(method))},
        {"k", k},
        {"epsilon", epsilon},
        {"shards", shards},
        {"slices", slices}}},
      {"model", {{"hidden", hidden}}},
      {"train",
       {{"batch_size", train.batch_size},
        {"learning_rate", train.learning_rate},
        {"finetune_learning_rate", opt(train.finetune_learning_rate)},
        {"epochs", train.epochs}}},
      {"finetune_epochs", finetune_epochs},
      {"forget",
       {{"ratio", forget_ratio},
        {"seed", opt(forget_seed)},
        {"epochs", opt(forget_epochs)}}},
      {"attacks", attack_names},
      {"utility_metric", utility_metric},
      {"output_dir", output_dir},
      {"seed", seed},
      {"repetitions", repetitions},
      {"compare_retrain", compare_retrain},
      {"threads", threads},
  };
}

ExperimentConfig ExperimentConfig::FromJson(const json& j) {
  if (!j.is_object()) throw InvalidArgumentError("config must be a JSON object");
  json merged = ExperimentConfig().ToJson();
  CheckKnownKeys(j, merged, "");
  DeepMerge(merged, j);

  ExperimentConfig c;
  const json& d = merged["data"];
  c.train_csv = Get<std::string>(d, "train");
  c.test_csv = Get<std::string>(d, "test");
  c.schema = Get<std::string>(d, "schema");
  c.utility_file = GetOptional<std::string>(d, "utility");

  const json& m = merged["method"];
  c.method = ParseMethod(Get<std::string>(m, "name"));
  c.k = Get<size_t>(m, "k");
  c.epsilon = Get<double>(m, "epsilon");
  c.shards = Get<size_t>(m, "shards");
  c.slices = Get<size_t>(m, "slices");

  c.hidden = Get<std::vector<size_t>>(merged["model"], "hidden");
  const json& t = merged["train"];
  c.train.batch_size = Get<size_t>(t, "batch_size");
  c.train.learning_rate = Get<double>(t, "learning_rate");
  c.train.finetune_learning_rate =
      GetOptional<double>(t, "finetune_learning_rate");
  c.train.epochs = Get<size_t>(t, "epochs");
  c.finetune_epochs = Get<size_t>(merged, "finetune_epochs");

  const json& f = merged["forget"];
  c.forget_ratio = Get<double>(f, "ratio");
  c.forget_seed = GetOptional<uint64_t>(f, "seed");
  c.forget_epochs = GetOptional<size_t>(f, "epochs");

  c.attacks.clear();
  for (const auto& name : Get<std::vector<std::string>>(merged, "attacks")) {
    try {
      c.attacks.push_back(attack::ParseAttack(name));
    } catch (const Error& e) {
      throw InvalidArgumentError(e.what());
    }
  }
  c.utility_metric = Get<std::string>(merged, "utility_metric");
  c.output_dir = Get<std::string>(merged, "output_dir");
  c.seed = Get<uint64_t>(merged, "seed");
  c.repetitions = Get<size_t>(merged, "repetitions");
  c.compare_retrain = Get<bool>(merged, "compare_retrain");
  c.threads = Get<size_t>(merged, "threads");
  c.Validate(false);
  return c;
}

void ExperimentConfig::Validate(bool check_files) const {
  if (k < 2) throw InvalidArgumentError("method.k must be at least 2");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgumentError("method.epsilon must be positive and finite");
  }
  if (shards == 0 || slices == 0) {
    throw InvalidArgumentError("method.shards and method.slices must be positive");
  }
  if (hidden.empty()) {
    throw InvalidArgumentError("model.hidden needs at least one layer");
  }
  for (size_t h : hidden) {
    if (h == 0) throw InvalidArgumentError("model.hidden sizes must be positive");
  }
  try {
    train.Validate();
  } catch (const Error& e) {
    throw InvalidArgumentError(std::string("train: ") + e.what());
  }
  if (!(forget_ratio >= 0.0 && forget_ratio < 1.0)) {
    throw InvalidArgumentError("forget.ratio must be in [0, 1)");
  }
  if (attacks.empty()) throw InvalidArgumentError("attacks must not be empty");
  if (utility_metric != "accuracy" && utility_metric != "auc") {
    throw InvalidArgumentError("utility_metric must be accuracy or auc");
  }
  if (output_dir.empty()) throw InvalidArgumentError("output_dir must be set");
  if (repetitions == 0) {
    throw InvalidArgumentError("repetitions must be at least 1");
  }
  if (check_files) {
    RequireFile("schema", schema);
    RequireFile("training data", train_csv);
    RequireFile("test data", test_csv);
    if (utility_file) RequireFile("utility", *utility_file);
  }
}

ExperimentConfig LoadConfig(const std::optional<std::string>& path,
                            const json& overrides) {
  json j = json::object();
  if (path) {
    std::ifstream in(*path);
    if (!in) throw InvalidArgumentError("cannot open config " + *path);
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw InvalidArgumentError(*path + ": " + e.what());
    }
    if (!j.is_object()) {
      throw InvalidArgumentError(*path + ": config must be a JSON object");
    }
    const fs::path base = fs::absolute(*path).parent_path();
    if (j.contains("data") && j["data"].is_object()) {
      for (auto& [key, value] : j["data"].items()) {
        if (value.is_string()) value = ResolveAgainst(base, value.get<std::string>());
      }
    }
  }
  DeepMerge(j, overrides);
  return ExperimentConfig::FromJson(j);
}

void AddOverride(json& patch, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw InvalidArgumentError("override '" + assignment +
                               "' must look like key.path=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &patch;
  size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) {
      throw InvalidArgumentError("override '" + assignment + "' has an empty key");
    }
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    json& child = (*node)[key];
    if (!child.is_object()) child = json::object();
    node = &child;
    start = dot + 1;
  }
}

std::string ResolveOutputDir(const ExperimentConfig& cfg) {
  const char* root = std::getenv(kOutputRootEnv);
  if (root && *root && !fs::path(cfg.output_dir).is_absolute()) {
    return (fs::path(root) / cfg.output_dir).lexically_normal().string();
  }
  return cfg.output_dir;
}

}  // namespace eupg::experiment
