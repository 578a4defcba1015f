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

#include "eupg/experiment/pipeline.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "eupg/attack/mia.h"
#include "eupg/common/error.h"
#include "eupg/common/rng.h"
#include "eupg/common/stopwatch.h"
#include "eupg/data/csv.h"
#include "eupg/data/forget.h"
#include "eupg/dpanon/dp_pix.h"
#include "eupg/dpanon/dp_table.h"
#include "eupg/kanon/k_anonymity.h"
#include "eupg/kanon/mdav.h"
#include "eupg/kernels/kernels.h"
#include "eupg/mlp/metrics.h"
#include "eupg/mlp/model_io.h"
#include "eupg/unlearn/eupg.h"
#include "eupg/unlearn/persist.h"
#include "eupg/unlearn/sisa.h"

namespace eupg::experiment {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kOriginalFormat = "eupg-original/1";

// Probability matrix for an encoded dataset.
using Predictor = std::function<std::vector<double>(const data::EncodedMatrix&)>;

Predictor ModelPredictor(const mlp::MlpModel& model) {
  return [&model](const data::EncodedMatrix& m) {
    return mlp::Forward(model, m.features, m.rows);
  };
}

Predictor SisaPredictor(const unlearn::ShardStore& store) {
  return [&store](const data::EncodedMatrix& m) {
    return unlearn::SisaPredict(store, m.features, m.rows);
  };
}

std::string FormatNumber(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json Utility(const ExperimentConfig& cfg, const Predictor& predict,
             const data::EncodedMatrix& test) {
  const auto probs = predict(test);
  const size_t classes = test.num_classes;
  const double acc = mlp::Accuracy(probs, test.labels, classes);
  json auc = nullptr;
  if (classes == 2) {
    const bool both = std::find(test.labels.begin(), test.labels.end(), 0) !=
                          test.labels.end() &&
                      std::find(test.labels.begin(), test.labels.end(), 1) !=
                          test.labels.end();
    if (both) auc = mlp::AucUtility(probs, test.labels, classes);
  }
  if (cfg.utility_metric == "auc" && auc.is_null()) {
    throw InvalidArgumentError(
        "utility_metric auc needs a binary class with both labels in the test set");
  }
  return {{"metric", cfg.utility_metric},
          {"value", cfg.utility_metric == "auc" ? auc : json(acc)},
          {"accuracy", acc},
          {"auc", auc}};
}

// MIA entries for one (members, non-members) pair, balanced by seeded
// subsampling of the larger population.
json Mia(const ExperimentConfig& cfg, const Predictor& predict,
         const data::EncodedMatrix& members,
         const data::EncodedMatrix& nonmembers, const std::string& population,
         uint64_t seed) {
  json out = json::array();
  if (members.rows == 0 || nonmembers.rows == 0) return out;
  const auto bal =
      attack::BalancePopulations(members.rows, nonmembers.rows, seed);
  const auto mem = data::SelectRows(members, bal.member_rows);
  const auto non = data::SelectRows(nonmembers, bal.nonmember_rows);
  const auto mem_probs = predict(mem);
  const auto non_probs = predict(non);
  for (auto kind : cfg.attacks) {
    const auto r = attack::MiaFromProbabilities(kind, mem_probs, mem.labels,
                                                non_probs, non.labels,
                                                members.num_classes);
    out.push_back({{"population", population},
                   {"attack", std::string(attack::AttackName(kind))},
                   {"auc", r.auc},
                   {"member_count", r.member_count},
                   {"nonmember_count", r.nonmember_count}});
  }
  return out;
}

void Append(json& arr, const json& more) {
  for (const auto& e : more) arr.push_back(e);
}

json Parameters(const ExperimentConfig& cfg) {
  json p = {{"hidden", cfg.hidden},
            {"epochs", cfg.train.epochs},
            {"batch_size", cfg.train.batch_size},
            {"learning_rate", cfg.train.learning_rate}};
  switch (cfg.method) {
    case Method::kOriginal:
      break;
    case Method::kSisa:
      p["shards"] = cfg.shards;
      p["slices"] = cfg.slices;
      break;
    case Method::kEupgK:
      p["k"] = cfg.k;
      p["finetune_epochs"] = cfg.finetune_epochs;
      break;
    case Method::kEupgDp:
      p["epsilon"] = cfg.epsilon;
      p["finetune_epochs"] = cfg.finetune_epochs;
      break;
  }
  return p;
}

json BaseReport(const ExperimentConfig& cfg, const Inputs& in, size_t rep,
                const std::string& command) {
  return {{"format", kReportFormat},
          {"command", command},
          {"method", std::string(MethodName(cfg.method))},
          {"parameters", Parameters(cfg)},
          {"repetition", rep},
          {"seeds",
           {{"global", cfg.RepetitionSeed(rep)},
            {"train", cfg.TrainSeed(rep)},
            {"privacy", cfg.PrivacySeed(rep)},
            {"forget", cfg.ForgetSeed(rep)},
            {"attack", cfg.AttackSeed(rep)}}},
          {"dataset",
           {{"train_rows", in.train.rows()},
            {"test_rows", in.test.rows()},
            {"features", in.train_encoded.width},
            {"classes", in.train_encoded.num_classes},
            {"test_clamped_cells", in.test_encoded.clamped_cells}}},
          {"mia", json::array()},
          {"config", cfg.ToJson()}};
}

json Artifacts(const std::string& dir) {
  json files = json::array();
  std::vector<std::string> names;
  if (fs::is_directory(dir)) {
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (e.is_regular_file()) {
        names.push_back(fs::relative(e.path(), dir).generic_string());
      }
    }
  }
  std::sort(names.begin(), names.end());
  for (auto& n : names) files.push_back(n);
  return {{"state_dir", dir}, {"files", files}};
}

unlearn::PrivacySpec SpecFor(const ExperimentConfig& cfg, const Inputs& in,
                             size_t rep) {
  if (cfg.method == Method::kEupgK) return unlearn::PrivacySpec::KAnonymity(cfg.k);
  dpanon::MechanismSpec mech;
  if (cfg.utility_file) {
    mech = dpanon::LoadUtilityFile(*cfg.utility_file, in.train.schema());
  }
  return unlearn::PrivacySpec::DifferentialPrivacy(cfg.epsilon,
                                                   cfg.PrivacySeed(rep), mech);
}

json KReportJson(const kanon::KAnonymityReport& r) {
  return {{"ok", r.ok},
          {"violating_combination_count", r.violating_combination_count},
          {"min_class_size", r.min_class_size},
          {"equivalence_classes", r.equivalence_classes}};
}

json BudgetJson(const dpanon::DpBudget& b) {
  json entries = json::array();
  for (const auto& e : b.entries) {
    entries.push_back({{"attribute", e.attribute},
                       {"mechanism", e.mechanism},
                       {"epsilon", e.epsilon},
                       {"sensitivity", e.sensitivity}});
  }
  return {{"epsilon_total", b.epsilon_total},
          {"protected_attribute_count", b.protected_attribute_count},
          {"per_attribute_epsilon", b.per_attribute_epsilon},
          {"spent", b.Spent()},
          {"entries", entries}};
}

json PrivacyJson(const unlearn::EupgState& st) {
  json p = {{"model", st.spec.model == unlearn::PrivacySpec::Model::kKAnonymity
                          ? "k_anonymity"
                          : "differential_privacy"},
            {"description", st.spec.Describe()}};
  if (st.k_anonymity) p["k_anonymity"] = KReportJson(*st.k_anonymity);
  if (st.budget) p["budget"] = BudgetJson(*st.budget);
  return p;
}

void SaveOriginal(const mlp::MlpModel& model, const ExperimentConfig& cfg,
                  size_t rep, const std::string& dir) {
  fs::create_directories(dir);
  mlp::SaveModel(model, (fs::path(dir) / "model.bin").string());
  json m = {{"format", kOriginalFormat},
            {"hidden", cfg.hidden},
            {"train_config", unlearn::TrainConfigToJson(cfg.TrainFor(rep))}};
  WriteJsonFile((fs::path(dir) / "manifest.json").string(), m);
}

mlp::MlpModel LoadOriginal(const std::string& dir) {
  const json m = ReadJsonFile((fs::path(dir) / "manifest.json").string());
  if (m.value("format", "") != kOriginalFormat) {
    throw DataError(dir + ": not a model directory of method original");
  }
  return mlp::LoadModel((fs::path(dir) / "model.bin").string());
}

void CheckStateMatches(const unlearn::EupgState& st,
                       const ExperimentConfig& cfg, const std::string& dir) {
  const bool k = st.spec.model == unlearn::PrivacySpec::Model::kKAnonymity;
  if (k != (cfg.method == Method::kEupgK) ||
      (k && st.spec.k != cfg.k) || (!k && st.spec.epsilon != cfg.epsilon)) {
    throw InvalidArgumentError(dir + " was prepared with " +
                               st.spec.Describe() +
                               ", which does not match the config");
  }
}

void ResetDir(const std::string& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
}

std::string Join(const fs::path& a, const std::string& b) {
  return (a / b).string();
}

}  // namespace

Inputs LoadInputs(const ExperimentConfig& cfg) {
  cfg.Validate(true);
  if (cfg.threads > 0) kernels::SetThreads(static_cast<int>(cfg.threads));
  const auto schema = data::Schema::LoadFile(cfg.schema);
  Inputs in;
  in.train = data::LoadCsv(cfg.train_csv, schema);
  in.test = data::LoadCsv(cfg.test_csv, in.train.schema());
  if (in.train.rows() == 0) throw DataError(cfg.train_csv + ": no rows");
  if (in.test.rows() == 0) throw DataError(cfg.test_csv + ": no rows");
  in.train_encoded = data::Encode(in.train);
  data::EncodeOptions clamp;
  clamp.clamp_declared_range = true;
  in.test_encoded = data::Encode(in.test, clamp);
  return in;
}

std::string RepetitionDir(const ExperimentConfig& cfg, size_t rep) {
  return (fs::path(ResolveOutputDir(cfg)) / ("rep" + std::to_string(rep)))
      .string();
}

json RunRepetition(const ExperimentConfig& cfg, const Inputs& in, size_t rep) {
  const fs::path dir = RepetitionDir(cfg, rep);
  const std::string state_dir = (dir / "state").string();
  ResetDir(state_dir);
  const auto tcfg = cfg.TrainFor(rep);
  json report = BaseReport(cfg, in, rep, "run");
  json timings = {{"anonymize_seconds", 0.0},
                  {"train_seconds", 0.0},
                  {"finetune_seconds", 0.0},
                  {"io_seconds", 0.0}};
  Stopwatch sw;

  std::optional<mlp::MlpModel> model;
  std::optional<unlearn::ShardStore> store;
  std::optional<unlearn::EupgState> state;
  switch (cfg.method) {
    case Method::kOriginal:
      model = unlearn::TrainFromScratch(in.train, cfg.hidden, tcfg);
      timings["train_seconds"] = sw.ElapsedSeconds();
      sw.Restart();
      SaveOriginal(*model, cfg, rep, state_dir);
      break;
    case Method::kSisa:
      store = unlearn::SisaTrain(in.train_encoded, cfg.shards, cfg.slices,
                                 cfg.hidden, tcfg);
      timings["train_seconds"] = sw.ElapsedSeconds();
      sw.Restart();
      unlearn::SaveShardStore(*store, state_dir);
      break;
    case Method::kEupgK:
    case Method::kEupgDp:
      state = unlearn::EupgPrepare(in.train, SpecFor(cfg, in, rep), cfg.hidden,
                                   tcfg, cfg.finetune_epochs);
      timings["anonymize_seconds"] = state->timings.anonymize_seconds;
      timings["train_seconds"] = state->timings.train_seconds;
      timings["finetune_seconds"] = state->timings.finetune_seconds;
      sw.Restart();
      unlearn::SaveEupgState(*state, state_dir);
      report["privacy"] = PrivacyJson(*state);
      break;
  }
  timings["io_seconds"] = sw.ElapsedSeconds();

  const Predictor predict = store   ? SisaPredictor(*store)
                            : state ? ModelPredictor(state->deployed_model)
                                    : ModelPredictor(*model);
  report["utility"] = Utility(cfg, predict, in.test_encoded);
  if (state) {
    report["base_utility"] =
        Utility(cfg, ModelPredictor(state->base_model), in.test_encoded);
  }
  report["mia"] = Mia(cfg, predict, in.train_encoded, in.test_encoded,
                      "train_vs_test", cfg.AttackSeed(rep));
  report["timings"] = timings;
  report["artifacts"] = Artifacts(state_dir);
  WriteJsonFile(Join(dir, "run.json"), report);
  return report;
}

json ForgetRepetition(const ExperimentConfig& cfg, const Inputs& in,
                      size_t rep, const std::optional<std::string>& state_dir) {
  const fs::path dir = RepetitionDir(cfg, rep);
  const std::string from = state_dir ? *state_dir : (dir / "state").string();
  const std::string to = (dir / "forget" / "state").string();
  if (!fs::is_directory(from)) {
    throw InvalidArgumentError("state directory not found: " + from +
                               " (run the run command first)");
  }
  const auto tcfg = cfg.TrainFor(rep);
  const auto req = data::ForgetRequest::FromRatio(in.train.rows(),
                                                  cfg.forget_ratio,
                                                  cfg.ForgetSeed(rep));
  const auto split = data::SplitForget(in.train, req);
  if (split.retain.rows() == 0) {
    throw InvalidArgumentError("forget request leaves no training rows");
  }
  const auto forget_enc = data::Encode(split.forget);
  const auto retain_enc = data::SelectRows(in.train_encoded, split.retain_indices);

  json report = BaseReport(cfg, in, rep, "forget");
  json forget = {{"ratio", cfg.forget_ratio},
                 {"seed", cfg.ForgetSeed(rep)},
                 {"count", req.forget_indices.size()},
                 {"retain_count", split.retain.rows()},
                 {"source_state", from}};
  double io = 0.0;
  double compute = 0.0;
  Stopwatch sw;

  std::optional<mlp::MlpModel> model;
  std::optional<unlearn::ShardStore> store;
  std::optional<unlearn::EupgState> state;
  switch (cfg.method) {
    case Method::kOriginal: {
      LoadOriginal(from);
      io += sw.ElapsedSeconds();
      sw.Restart();
      model = unlearn::TrainFromScratch(split.retain, cfg.hidden, tcfg);
      compute = sw.ElapsedSeconds();
      forget["epochs"] = tcfg.epochs;
      sw.Restart();
      ResetDir(to);
      SaveOriginal(*model, cfg, rep, to);
      io += sw.ElapsedSeconds();
      break;
    }
    case Method::kSisa: {
      auto loaded = unlearn::LoadShardStore(from);
      io += sw.ElapsedSeconds();
      sw.Restart();
      unlearn::SisaForgetStats stats;
      store = unlearn::SisaForget(loaded, in.train_encoded, req.forget_indices,
                                  &stats);
      compute = sw.ElapsedSeconds();
      forget["epochs"] = store->epochs_per_slice;
      forget["retrained_shards"] = stats.retrained_shards;
      forget["retrained_slices"] = stats.retrained_slices;
      sw.Restart();
      ResetDir(to);
      unlearn::SaveShardStore(*store, to);
      io += sw.ElapsedSeconds();
      break;
    }
    case Method::kEupgK:
    case Method::kEupgDp: {
      auto loaded = unlearn::LoadEupgState(from);
      CheckStateMatches(loaded, cfg, from);
      io += sw.ElapsedSeconds();
      sw.Restart();
      state = unlearn::EupgForget(loaded, in.train, req, cfg.ForgetEpochs(),
                                  tcfg);
      compute = sw.ElapsedSeconds();
      forget["epochs"] = cfg.ForgetEpochs();
      forget["audit_log_length"] = state->audit_log.size();
      sw.Restart();
      ResetDir(to);
      unlearn::SaveEupgState(*state, to);
      io += sw.ElapsedSeconds();
      report["privacy"] = PrivacyJson(*state);
      break;
    }
  }

  const Predictor predict = store   ? SisaPredictor(*store)
                            : state ? ModelPredictor(state->deployed_model)
                                    : ModelPredictor(*model);
  report["utility"] = Utility(cfg, predict, in.test_encoded);
  json mia = Mia(cfg, predict, forget_enc, in.test_encoded, "forget_vs_test",
                 MixSeed(cfg.AttackSeed(rep), 1));
  Append(mia, Mia(cfg, predict, retain_enc, in.test_encoded, "retain_vs_test",
                  MixSeed(cfg.AttackSeed(rep), 2)));
  report["mia"] = mia;
  report["forget"] = forget;
  report["timings"] = {{"forget_seconds", compute}, {"io_seconds", io}};

  if (cfg.compare_retrain && cfg.method != Method::kOriginal) {
    sw.Restart();
    const auto retrained =
        unlearn::TrainFromScratch(split.retain, cfg.hidden, tcfg);
    const double retrain_seconds = sw.ElapsedSeconds();
    const auto base_predict = ModelPredictor(retrained);
    json base_mia = Mia(cfg, base_predict, forget_enc, in.test_encoded,
                        "forget_vs_test", MixSeed(cfg.AttackSeed(rep), 1));
    Append(base_mia, Mia(cfg, base_predict, retain_enc, in.test_encoded,
                         "retain_vs_test", MixSeed(cfg.AttackSeed(rep), 2)));
    report["baseline"] = {
        {"method", "retrain"},
        {"utility", Utility(cfg, base_predict, in.test_encoded)},
        {"mia", base_mia},
        {"timings", {{"retrain_seconds", retrain_seconds}}},
        {"runtime_ratio", retrain_seconds > 0.0 ? json(compute / retrain_seconds)
                                                : json(nullptr)}};
  }
  report["artifacts"] = Artifacts(to);
  WriteJsonFile(Join(dir, "forget.json"), report);
  return report;
}

json AttackRepetition(const ExperimentConfig& cfg, const Inputs& in,
                      size_t rep, const AttackTarget& target) {
  const fs::path dir = RepetitionDir(cfg, rep);
  json report = BaseReport(cfg, in, rep, "attack");
  Stopwatch sw;
  std::optional<mlp::MlpModel> model;
  std::optional<unlearn::ShardStore> store;
  std::string source;
  if (target.model_path) {
    model = mlp::LoadModel(*target.model_path);
    source = *target.model_path;
  } else {
    source = target.state_dir ? *target.state_dir : (dir / "state").string();
    if (!fs::is_directory(source)) {
      throw InvalidArgumentError("state directory not found: " + source);
    }
    switch (cfg.method) {
      case Method::kOriginal:
        model = LoadOriginal(source);
        break;
      case Method::kSisa:
        store = unlearn::LoadShardStore(source);
        break;
      case Method::kEupgK:
      case Method::kEupgDp:
        model = unlearn::LoadEupgState(source).deployed_model;
        break;
    }
  }
  if (model && model->input_dim() != in.train_encoded.width) {
    throw InvalidArgumentError(source + ": model input width " +
                               std::to_string(model->input_dim()) +
                               " does not match the data (" +
                               std::to_string(in.train_encoded.width) + ")");
  }
  const double load_seconds = sw.ElapsedSeconds();

  data::EncodeOptions clamp;
  clamp.clamp_declared_range = true;
  auto load = [&](const std::optional<std::string>& path,
                  const data::EncodedMatrix& fallback) {
    if (!path) return fallback;
    return data::Encode(data::LoadCsv(*path, in.train.schema()), clamp);
  };
  const auto members = load(target.members_csv, in.train_encoded);
  const auto nonmembers = load(target.nonmembers_csv, in.test_encoded);

  sw.Restart();
  const Predictor predict = store ? SisaPredictor(*store) : ModelPredictor(*model);
  report["utility"] = Utility(cfg, predict, in.test_encoded);
  report["mia"] = Mia(cfg, predict, members, nonmembers,
                      "members_vs_nonmembers", cfg.AttackSeed(rep));
  report["timings"] = {{"attack_seconds", sw.ElapsedSeconds()},
                       {"io_seconds", load_seconds}};
  report["attack"] = {
      {"target", source},
      {"members", target.members_csv ? *target.members_csv : cfg.train_csv},
      {"nonmembers",
       target.nonmembers_csv ? *target.nonmembers_csv : cfg.test_csv}};
  report["artifacts"] = {{"state_dir", source}, {"files", json::array()}};
  WriteJsonFile(Join(dir, "attack.json"), report);
  return report;
}

json AnonymizeTable(const ExperimentConfig& cfg, const Inputs& in,
                    const std::string& dir) {
  if (cfg.method != Method::kEupgK && cfg.method != Method::kEupgDp) {
    throw InvalidArgumentError(
        "anonymize needs method eupg_k or eupg_dp (or --image for DP-Pix)");
  }
  fs::create_directories(dir);
  json ledger = {{"format", "eupg-anonymize/1"},
                 {"method", std::string(MethodName(cfg.method))},
                 {"source", cfg.train_csv},
                 {"rows", in.train.rows()}};
  Stopwatch sw;
  data::TabularDataset out;
  if (cfg.method == Method::kEupgK) {
    auto result = kanon::KAnonymize(in.train, cfg.k);
    const double seconds = sw.ElapsedSeconds();
    out = std::move(result.data);
    ledger["k"] = cfg.k;
    ledger["clusters"] = result.clustering.clusters.size();
    ledger["k_anonymity"] = KReportJson(kanon::VerifyKAnonymity(out, cfg.k));
    ledger["seconds"] = seconds;
  } else {
    const auto spec = SpecFor(cfg, in, 0);
    auto result =
        dpanon::DpProtectTable(in.train, cfg.epsilon, spec.mechanisms, spec.seed);
    ledger["seconds"] = sw.ElapsedSeconds();
    out = std::move(result.data);
    ledger["epsilon"] = cfg.epsilon;
    ledger["seed"] = result.seed;
    ledger["clamped_cells"] = result.clamped_cells;
    ledger["budget"] = BudgetJson(result.budget);
  }
  const fs::path root(dir);
  data::SaveCsv(out, (root / "protected.csv").string());
  {
    std::ofstream schema_out(root / "protected.schema");
    schema_out << out.schema().ToText();
    if (!schema_out) throw IoError("cannot write " + (root / "protected.schema").string());
  }
  ledger["files"] = {"protected.csv", "protected.schema", "ledger.json"};
  WriteJsonFile((root / "ledger.json").string(), ledger);
  return ledger;
}

json AnonymizeImage(const ImageAnonymization& job) {
  const auto img = dpanon::ReadPnm(job.input);
  Rng rng(job.seed);
  Stopwatch sw;
  const auto out = dpanon::DpPix(img, job.block, job.m, job.epsilon, rng);
  const double seconds = sw.ElapsedSeconds();
  if (const auto parent = fs::path(job.output).parent_path(); !parent.empty()) {
    fs::create_directories(parent);
  }
  dpanon::WritePnm(out, job.output);
  json ledger = {{"format", "eupg-dppix/1"},
                 {"input", job.input},
                 {"output", job.output},
                 {"width", img.width},
                 {"height", img.height},
                 {"channels", img.channels},
                 {"block", job.block},
                 {"m", job.m},
                 {"epsilon", job.epsilon},
                 {"sensitivity", 255.0 * static_cast<double>(job.m) /
                                     static_cast<double>(job.block * job.block)},
                 {"laplace_scale", dpanon::DpPixScale(job.block, job.m, job.epsilon)},
                 {"seed", job.seed},
                 {"seconds", seconds}};
  WriteJsonFile(job.output + ".json", ledger);
  return ledger;
}

json Summarize(const std::vector<json>& reports) {
  std::map<std::string, std::vector<double>> values;
  auto add = [&](const std::string& key, const json& v) {
    if (v.is_number()) values[key].push_back(v.get<double>());
  };
  for (const auto& r : reports) {
    for (const auto& [k, v] : r.at("timings").items()) add("timings." + k, v);
    for (const auto& [k, v] : r.at("utility").items()) add("utility." + k, v);
    for (const auto& m : r.at("mia")) {
      add("mia." + m.at("population").get<std::string>() + "." +
              m.at("attack").get<std::string>(),
          m.at("auc"));
    }
    if (r.contains("baseline")) {
      const auto& b = r["baseline"];
      add("baseline.runtime_ratio", b.at("runtime_ratio"));
      for (const auto& [k, v] : b.at("timings").items()) add("baseline.timings." + k, v);
      for (const auto& [k, v] : b.at("utility").items()) add("baseline.utility." + k, v);
      for (const auto& m : b.at("mia")) {
        add("baseline.mia." + m.at("population").get<std::string>() + "." +
                m.at("attack").get<std::string>(),
            m.at("auc"));
      }
    }
  }
  json metrics = json::object();
  for (const auto& [key, v] : values) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd =
        v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    metrics[key] = {{"mean", mean}, {"std", sd}, {"n", v.size()}, {"values", v}};
  }
  json out = {{"format", kSummaryFormat},
              {"repetitions", reports.size()},
              {"metrics", metrics}};
  if (!reports.empty()) {
    out["command"] = reports.front().at("command");
    out["method"] = reports.front().at("method");
    out["parameters"] = reports.front().at("parameters");
    out["config"] = reports.front().at("config");
  }
  return out;
}

json RunCommand(const ExperimentConfig& cfg) {
  const Inputs in = LoadInputs(cfg);
  std::vector<json> reports;
  for (size_t rep = 0; rep < cfg.repetitions; ++rep) {
    reports.push_back(RunRepetition(cfg, in, rep));
  }
  json summary = Summarize(reports);
  WriteJsonFile(Join(ResolveOutputDir(cfg), "run_summary.json"), summary);
  return summary;
}

json ForgetCommand(const ExperimentConfig& cfg,
                   const std::optional<std::string>& state_dir) {
  if (state_dir && cfg.repetitions != 1) {
    throw InvalidArgumentError("--state needs repetitions = 1");
  }
  const Inputs in = LoadInputs(cfg);
  std::vector<json> reports;
  for (size_t rep = 0; rep < cfg.repetitions; ++rep) {
    reports.push_back(ForgetRepetition(cfg, in, rep, state_dir));
  }
  json summary = Summarize(reports);
  WriteJsonFile(Join(ResolveOutputDir(cfg), "forget_summary.json"), summary);
  return summary;
}

std::vector<double> DefaultGrid(const std::string& axis) {
  if (axis == "k") return {3, 5, 10, 20, 80};
  if (axis == "epsilon") return {0.5, 2.5, 5, 25, 50, 100};
  if (axis == "epochs") return {0, 5, 10, 20};
  if (axis == "ratio") return {0.05, 0.1, 0.2, 0.5};
  throw InvalidArgumentError("unknown sweep axis '" + axis +
                             "' (expected k, epsilon, epochs or ratio)");
}

std::vector<SweepPoint> SweepPoints(const std::string& axis,
                                    const std::vector<double>& values) {
  DefaultGrid(axis);
  std::vector<SweepPoint> points;
  for (double v : values) {
    points.push_back({axis, v, axis + "-" + FormatNumber(v)});
  }
  return points;
}

ExperimentConfig ConfigForPoint(const ExperimentConfig& base,
                                const SweepPoint& point,
                                const std::string& base_dir) {
  ExperimentConfig c = base;
  auto whole = [&](const char* what) {
    if (point.value < 0 || point.value != std::floor(point.value)) {
      throw InvalidArgumentError(std::string(what) +
                                 " values must be non-negative integers");
    }
    return static_cast<size_t>(point.value);
  };
  if (point.axis == "k") {
    c.method = Method::kEupgK;
    c.k = whole("k");
  } else if (point.axis == "epsilon") {
    c.method = Method::kEupgDp;
    c.epsilon = point.value;
  } else if (point.axis == "epochs") {
    if (c.method != Method::kEupgK && c.method != Method::kEupgDp) {
      throw InvalidArgumentError("the epochs axis needs method eupg_k or eupg_dp");
    }
    c.finetune_epochs = whole("epochs");
  } else if (point.axis == "ratio") {
    c.forget_ratio = point.value;
  } else {
    DefaultGrid(point.axis);
  }
  c.output_dir = (fs::path(base_dir) / "sweep" / point.name).string();
  c.Validate(false);
  return c;
}

json SweepCommand(const ExperimentConfig& cfg,
                  const std::vector<SweepAxis>& axes) {
  const std::string out = ResolveOutputDir(cfg);
  std::vector<std::pair<SweepPoint, ExperimentConfig>> points;
  for (const auto& axis : axes) {
    for (const auto& p : SweepPoints(axis.name, axis.values)) {
      // Absolute point directories so the output root is applied once.
      points.emplace_back(p, ConfigForPoint(cfg, p, fs::absolute(out).string()));
    }
  }
  const Inputs in = LoadInputs(cfg);
  json index = {{"format", "eupg-sweep/1"}, {"points", json::array()}};
  for (const auto& [point, pcfg] : points) {
    const fs::path dir = pcfg.output_dir;
    const fs::path marker = dir / "complete.json";
    std::string status = "skipped";
    if (!fs::exists(marker)) {
      std::vector<json> runs;
      std::vector<json> forgets;
      for (size_t rep = 0; rep < pcfg.repetitions; ++rep) {
        runs.push_back(RunRepetition(pcfg, in, rep));
        if (point.axis == "ratio") {
          forgets.push_back(ForgetRepetition(pcfg, in, rep, std::nullopt));
        }
      }
      json done = {{"point", point.name},
                   {"axis", point.axis},
                   {"value", point.value},
                   {"run", Summarize(runs)}};
      WriteJsonFile((dir / "run_summary.json").string(), done["run"]);
      if (!forgets.empty()) {
        done["forget"] = Summarize(forgets);
        WriteJsonFile((dir / "forget_summary.json").string(), done["forget"]);
      }
      WriteJsonFile(marker.string(), done);
      status = "completed";
    }
    index["points"].push_back({{"name", point.name},
                               {"axis", point.axis},
                               {"value", point.value},
                               {"dir", dir.string()},
                               {"status", status}});
  }
  WriteJsonFile((fs::path(out) / "sweep" / "index.json").string(), index);
  return index;
}

namespace {

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string Cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return FormatNumber(v.get<double>());
  return v.dump();
}

}  // namespace

std::string FlattenReports(const std::vector<std::string>& paths) {
  std::vector<std::string> files;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      for (const auto& e : fs::recursive_directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".json") {
          files.push_back(e.path().string());
        }
      }
    } else if (fs::is_regular_file(p)) {
      files.push_back(p);
    } else {
      throw InvalidArgumentError("no such file or directory: " + p);
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<std::pair<std::string, json>> reports;
  std::set<std::string> mia_columns;
  for (const auto& f : files) {
    json j = json::parse(std::ifstream(f), nullptr, false);
    if (j.is_discarded() || !j.is_object() ||
        j.value("format", "") != kReportFormat) {
      continue;
    }
    for (const auto& m : j["mia"]) {
      mia_columns.insert("mia_" + m["population"].get<std::string>() + "_" +
                         m["attack"].get<std::string>());
    }
    reports.emplace_back(f, std::move(j));
  }

  const std::vector<std::string> fixed = {
      "file",          "command",          "method",
      "parameters",    "repetition",       "utility_metric",
      "utility",       "accuracy",         "auc",
      "anonymize_s",   "train_s",          "finetune_s",
      "forget_s",      "io_s",             "forget_ratio",
      "forget_count",  "retrain_s",        "runtime_ratio"};
  std::ostringstream out;
  bool first = true;
  for (const auto& c : fixed) {
    out << (first ? "" : ",") << c;
    first = false;
  }
  for (const auto& c : mia_columns) out << ',' << c;
  out << '\n';

  auto get = [](const json& j, const char* a, const char* b) -> json {
    if (!j.contains(a) || !j[a].contains(b)) return nullptr;
    return j[a][b];
  };
  for (const auto& [file, j] : reports) {
    std::vector<std::string> row = {
        file,
        Cell(j["command"]),
        Cell(j["method"]),
        j["parameters"].dump(),
        Cell(j["repetition"]),
        Cell(get(j, "utility", "metric")),
        Cell(get(j, "utility", "value")),
        Cell(get(j, "utility", "accuracy")),
        Cell(get(j, "utility", "auc")),
        Cell(get(j, "timings", "anonymize_seconds")),
        Cell(get(j, "timings", "train_seconds")),
        Cell(get(j, "timings", "finetune_seconds")),
        Cell(get(j, "timings", "forget_seconds")),
        Cell(get(j, "timings", "io_seconds")),
        Cell(get(j, "forget", "ratio")),
        Cell(get(j, "forget", "count")),
        j.contains("baseline") ? Cell(j["baseline"]["timings"]["retrain_seconds"]) : "",
        j.contains("baseline") ? Cell(j["baseline"]["runtime_ratio"]) : ""};
    std::map<std::string, std::string> mia;
    for (const auto& m : j["mia"]) {
      mia["mia_" + m["population"].get<std::string>() + "_" +
          m["attack"].get<std::string>()] = Cell(m["auc"]);
    }
    for (const auto& c : mia_columns) row.push_back(mia.count(c) ? mia[c] : "");
    for (size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << CsvField(row[i]);
    }
    out << '\n';
  }
  return out.str();
}

void WriteJsonFile(const std::string& path, const json& j) {
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) {
    fs::create_directories(parent);
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
  }
  fs::rename(tmp, path);
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace eupg::experiment
