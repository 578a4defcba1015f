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

#include "eupg/unlearn/persist.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "eupg/common/error.h"
#include "eupg/data/csv.h"
#include "eupg/mlp/model_io.h"

namespace eupg::unlearn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kEupgFormat = "eupg-state/1";
constexpr const char* kSisaFormat = "eupg-sisa/1";

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json ReadManifest(const fs::path& dir, const char* format) {
  json m;
  try {
    m = json::parse(ReadText(dir / "manifest.json"));
  } catch (const json::exception& e) {
    throw DataError((dir / "manifest.json").string() + ": " + e.what());
  }
  if (m.value("format", "") != format) {
    throw DataError((dir / "manifest.json").string() + ": expected format " +
                    format);
  }
  return m;
}

template <typename Fn>
auto Field(const std::string& what, Fn fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw DataError(what + ": " + e.what());
  }
}

json SpecToJson(const PrivacySpec& spec) {
  json j;
  if (spec.model == PrivacySpec::Model::kKAnonymity) {
    j["model"] = "k_anonymity";
    j["k"] = spec.k;
  } else {
    j["model"] = "differential_privacy";
    j["epsilon"] = spec.epsilon;
    j["seed"] = spec.seed;
  }
  return j;
}

PrivacySpec SpecFromJson(const json& j) {
  const std::string model = j.at("model").get<std::string>();
  if (model == "k_anonymity") {
    return PrivacySpec::KAnonymity(j.at("k").get<size_t>());
  }
  if (model == "differential_privacy") {
    return PrivacySpec::DifferentialPrivacy(j.at("epsilon").get<double>(),
                                            j.at("seed").get<uint64_t>());
  }
  throw DataError("unknown privacy model '" + model + "'");
}

json EventToJson(const ForgetEvent& e) {
  json j;
  j["forget_indices"] = e.forget_indices;
  j["ratio"] = e.ratio ? json(*e.ratio) : json(nullptr);
  j["request_seed"] = e.request_seed;
  j["epochs"] = e.epochs;
  j["runtime_seconds"] = e.runtime_seconds;
  return j;
}

ForgetEvent EventFromJson(const json& j) {
  ForgetEvent e;
  e.forget_indices = j.at("forget_indices").get<std::vector<size_t>>();
  if (!j.at("ratio").is_null()) e.ratio = j.at("ratio").get<double>();
  e.request_seed = j.at("request_seed").get<uint64_t>();
  e.epochs = j.at("epochs").get<size_t>();
  e.runtime_seconds = j.at("runtime_seconds").get<double>();
  return e;
}

std::string CheckpointName(size_t s, size_t r) {
  return "shard" + std::to_string(s) + "_slice" + std::to_string(r) + ".bin";
}

}  // namespace

json TrainConfigToJson(const mlp::TrainConfig& cfg) {
  json j;
  j["batch_size"] = cfg.batch_size;
  j["learning_rate"] = cfg.learning_rate;
  j["finetune_learning_rate"] = cfg.finetune_learning_rate
                                    ? json(*cfg.finetune_learning_rate)
                                    : json(nullptr);
  j["epochs"] = cfg.epochs;
  j["beta1"] = cfg.beta1;
  j["beta2"] = cfg.beta2;
  j["adam_epsilon"] = cfg.adam_epsilon;
  j["seed"] = cfg.seed;
  return j;
}

mlp::TrainConfig TrainConfigFromJson(const json& j) {
  return Field("training config", [&] {
    mlp::TrainConfig cfg;
    cfg.batch_size = j.at("batch_size").get<size_t>();
    cfg.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("finetune_learning_rate") &&
        !j["finetune_learning_rate"].is_null()) {
      cfg.finetune_learning_rate = j["finetune_learning_rate"].get<double>();
    }
    cfg.epochs = j.at("epochs").get<size_t>();
    cfg.beta1 = j.at("beta1").get<double>();
    cfg.beta2 = j.at("beta2").get<double>();
    cfg.adam_epsilon = j.at("adam_epsilon").get<double>();
    cfg.seed = j.at("seed").get<uint64_t>();
    return cfg;
  });
}

void SaveEupgState(const EupgState& state, const std::string& dir) {
  const fs::path root(dir);
  fs::create_directories(root);
  const auto& schema = state.protected_data.schema();

  json m;
  m["format"] = kEupgFormat;
  m["privacy"] = SpecToJson(state.spec);
  m["hidden"] = state.hidden;
  m["timings"] = {{"anonymize_seconds", state.timings.anonymize_seconds},
                  {"train_seconds", state.timings.train_seconds},
                  {"finetune_seconds", state.timings.finetune_seconds}};
  json inferred = json::array();
  for (size_t j = 0; j < schema.size(); ++j) {
    if (schema[j].is_numeric() && schema[j].range && !schema[j].range_declared) {
      inferred.push_back(schema[j].name);
    }
  }
  m["inferred_ranges"] = inferred;
  json log = json::array();
  for (const auto& e : state.audit_log) log.push_back(EventToJson(e));
  m["audit_log"] = log;
  if (state.k_anonymity) {
    const auto& r = *state.k_anonymity;
    m["k_anonymity"] = {
        {"ok", r.ok},
        {"violating_combination_count", r.violating_combination_count},
        {"min_class_size", r.min_class_size},
        {"equivalence_classes", r.equivalence_classes}};
  }
  if (state.budget) {
    const auto& b = *state.budget;
    json entries = json::array();
    for (const auto& e : b.entries) {
      entries.push_back({{"attribute", e.attribute},
                         {"mechanism", e.mechanism},
                         {"epsilon", e.epsilon},
                         {"sensitivity", e.sensitivity}});
    }
    m["budget"] = {{"epsilon_total", b.epsilon_total},
                   {"protected_attribute_count", b.protected_attribute_count},
                   {"per_attribute_epsilon", b.per_attribute_epsilon},
                   {"entries", entries}};
  }

  WriteText(root / "protected.schema", schema.ToText());
  data::SaveCsv(state.protected_data, (root / "protected.csv").string());
  mlp::SaveModel(state.base_model, (root / "base_model.bin").string());
  mlp::SaveModel(state.deployed_model, (root / "deployed_model.bin").string());
  WriteText(root / "manifest.json", m.dump(2) + "\n");
}

EupgState LoadEupgState(const std::string& dir) {
  const fs::path root(dir);
  const json m = ReadManifest(root, kEupgFormat);
  return Field((root / "manifest.json").string(), [&] {
    EupgState state;
    state.spec = SpecFromJson(m.at("privacy"));
    state.hidden = m.at("hidden").get<std::vector<size_t>>();
    const auto& t = m.at("timings");
    state.timings.anonymize_seconds = t.at("anonymize_seconds").get<double>();
    state.timings.train_seconds = t.at("train_seconds").get<double>();
    state.timings.finetune_seconds = t.at("finetune_seconds").get<double>();
    for (const auto& e : m.at("audit_log")) {
      state.audit_log.push_back(EventFromJson(e));
    }
    if (m.contains("k_anonymity")) {
      const auto& r = m["k_anonymity"];
      kanon::KAnonymityReport rep;
      rep.ok = r.at("ok").get<bool>();
      rep.violating_combination_count =
          r.at("violating_combination_count").get<size_t>();
      rep.min_class_size = r.at("min_class_size").get<size_t>();
      rep.equivalence_classes = r.at("equivalence_classes").get<size_t>();
      state.k_anonymity = rep;
    }
    if (m.contains("budget")) {
      const auto& b = m["budget"];
      dpanon::DpBudget budget;
      budget.epsilon_total = b.at("epsilon_total").get<double>();
      budget.protected_attribute_count =
          b.at("protected_attribute_count").get<size_t>();
      budget.per_attribute_epsilon = b.at("per_attribute_epsilon").get<double>();
      for (const auto& e : b.at("entries")) {
        budget.entries.push_back({e.at("attribute").get<std::string>(),
                                  e.at("mechanism").get<std::string>(),
                                  e.at("epsilon").get<double>(),
                                  e.at("sensitivity").get<double>()});
      }
      state.budget = budget;
    }

    data::Schema schema =
        data::Schema::Parse(ReadText(root / "protected.schema"));
    for (const auto& name : m.at("inferred_ranges")) {
      const auto idx = schema.FindAttribute(name.get<std::string>());
      if (!idx) throw DataError("inferred range for unknown attribute");
      schema.mutable_attribute(*idx).range_declared = false;
    }
    const auto loaded =
        data::LoadCsv((root / "protected.csv").string(), schema);
    const auto provenance =
        state.spec.model == PrivacySpec::Model::kKAnonymity
            ? data::DatasetProvenance::KAnonymized(state.spec.k)
            : data::DatasetProvenance::DpProtected(state.spec.epsilon);
    state.protected_data =
        data::TabularDataset(schema, loaded.cells(), provenance);
    state.base_model = mlp::LoadModel((root / "base_model.bin").string());
    state.deployed_model =
        mlp::LoadModel((root / "deployed_model.bin").string());
    return state;
  });
}

void SaveShardStore(const ShardStore& store, const std::string& dir) {
  const fs::path root(dir);
  fs::create_directories(root / "checkpoints");
  json m;
  m["format"] = kSisaFormat;
  m["shards"] = store.shards;
  m["slices"] = store.slices;
  m["layer_dims"] = store.layer_dims;
  m["train_config"] = TrainConfigToJson(store.cfg);
  m["epochs_per_slice"] = store.epochs_per_slice;
  m["seed"] = store.seed;
  m["total_rows"] = store.total_rows;
  m["shard_of"] = store.shard_of;
  m["slice_of"] = store.slice_of;
  m["forgotten"] = store.forgotten;
  for (size_t s = 0; s < store.shards; ++s) {
    for (size_t r = 0; r < store.slices; ++r) {
      mlp::SaveModel(store.checkpoints[s][r],
                     (root / "checkpoints" / CheckpointName(s, r)).string());
    }
  }
  WriteText(root / "manifest.json", m.dump() + "\n");
}

ShardStore LoadShardStore(const std::string& dir) {
  const fs::path root(dir);
  const json m = ReadManifest(root, kSisaFormat);
  ShardStore store = Field((root / "manifest.json").string(), [&] {
    ShardStore st;
    st.shards = m.at("shards").get<size_t>();
    st.slices = m.at("slices").get<size_t>();
    st.layer_dims = m.at("layer_dims").get<std::vector<size_t>>();
    st.cfg = TrainConfigFromJson(m.at("train_config"));
    st.epochs_per_slice = m.at("epochs_per_slice").get<size_t>();
    st.seed = m.at("seed").get<uint64_t>();
    st.total_rows = m.at("total_rows").get<size_t>();
    st.shard_of = m.at("shard_of").get<std::vector<size_t>>();
    st.slice_of = m.at("slice_of").get<std::vector<size_t>>();
    st.forgotten = m.at("forgotten").get<std::vector<size_t>>();
    return st;
  });
  if (store.shards == 0 || store.slices == 0 ||
      store.shard_of.size() != store.total_rows ||
      store.slice_of.size() != store.total_rows) {
    throw DataError((root / "manifest.json").string() +
                    ": inconsistent shard assignment");
  }
  store.slice_rows.assign(store.shards,
                          std::vector<std::vector<size_t>>(store.slices));
  size_t next_forgotten = 0;
  for (size_t row = 0; row < store.total_rows; ++row) {
    if (next_forgotten < store.forgotten.size() &&
        store.forgotten[next_forgotten] == row) {
      ++next_forgotten;
      continue;
    }
    const size_t s = store.shard_of[row];
    const size_t r = store.slice_of[row];
    if (s >= store.shards || r >= store.slices) {
      throw DataError((root / "manifest.json").string() +
                      ": shard assignment out of range");
    }
    store.slice_rows[s][r].push_back(row);
  }
  store.checkpoints.assign(store.shards,
                           std::vector<mlp::MlpModel>(store.slices));
  for (size_t s = 0; s < store.shards; ++s) {
    for (size_t r = 0; r < store.slices; ++r) {
      store.checkpoints[s][r] = mlp::LoadModel(
          (root / "checkpoints" / CheckpointName(s, r)).string());
    }
  }
  return store;
}

}  // namespace eupg::unlearn
