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

// eupg: command-line harness for forgetting-amenable training experiments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eupg/common/error.h"
#include "eupg/experiment/config.h"
#include "eupg/experiment/pipeline.h"
#include "json.hpp"

namespace {

using eupg::experiment::ExperimentConfig;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

// Options shared by the experiment subcommands; every one of them is an
// override of a config key.
struct CommonOptions {
  std::optional<std::string> config;
  std::vector<std::string> sets;
  std::optional<std::string> train, test, schema, utility, method, output_dir,
      metric;
  std::optional<size_t> k, shards, slices, epochs, finetune_epochs,
      forget_epochs, repetitions, threads, batch_size;
  std::optional<double> epsilon, forget_ratio, learning_rate;
  std::optional<uint64_t> seed, forget_seed;
  bool compare_retrain = false;

  void Register(CLI::App* app) {
    app->add_option("-c,--config", config, "JSON experiment config")
        ->check(CLI::ExistingFile);
    app->add_option("--set", sets, "Config override key.path=value (repeatable)");
    app->add_option("--train", train, "Training CSV (data.train)");
    app->add_option("--test", test, "Test CSV (data.test)");
    app->add_option("--schema", schema, "Schema file (data.schema)");
    app->add_option("--utility", utility, "Utility-matrix JSON (data.utility)");
    app->add_option("-m,--method", method,
                    "original | sisa | eupg_k | eupg_dp (method.name)");
    app->add_option("-k,--k", k, "k for k-anonymity (method.k)");
    app->add_option("-e,--epsilon", epsilon, "Total epsilon (method.epsilon)");
    app->add_option("--shards", shards, "SISA shards (method.shards)");
    app->add_option("--slices", slices, "SISA slices per shard (method.slices)");
    app->add_option("--epochs", epochs, "Training epochs (train.epochs)");
    app->add_option("--batch-size", batch_size, "Batch size (train.batch_size)");
    app->add_option("--lr", learning_rate, "Learning rate (train.learning_rate)");
    app->add_option("--finetune-epochs", finetune_epochs,
                    "Fine-tuning epochs after pre-training (finetune_epochs)");
    app->add_option("--forget-ratio", forget_ratio,
                    "Fraction of training rows to forget (forget.ratio)");
    app->add_option("--forget-seed", forget_seed, "Forget-set seed (forget.seed)");
    app->add_option("--forget-epochs", forget_epochs,
                    "Fine-tuning epochs per forget request (forget.epochs)");
    app->add_option("--metric", metric, "accuracy | auc (utility_metric)");
    app->add_option("-o,--output-dir", output_dir,
                    "Output directory (output_dir); relative paths resolve "
                    "against $EUPG_OUTPUT_ROOT when set");
    app->add_option("-s,--seed", seed, "Global seed (seed)");
    app->add_option("-r,--repetitions", repetitions,
                    "Repetitions with seeds seed+i (repetitions)");
    app->add_option("--threads", threads, "OpenMP threads, 0 = default (threads)");
    app->add_flag("--compare-retrain", compare_retrain,
                  "Also retrain from scratch on the retain set (compare_retrain)");
  }

  ExperimentConfig Build() const {
    json patch = json::object();
    for (const auto& s : sets) eupg::experiment::AddOverride(patch, s);
    auto put = [&](const char* path, const auto& value) {
      if (value) eupg::experiment::AddOverride(patch, std::string(path) + "=" + json(*value).dump());
    };
    put("data.train", train);
    put("data.test", test);
    put("data.schema", schema);
    put("data.utility", utility);
    put("method.name", method);
    put("method.k", k);
    put("method.epsilon", epsilon);
    put("method.shards", shards);
    put("method.slices", slices);
    put("train.epochs", epochs);
    put("train.batch_size", batch_size);
    put("train.learning_rate", learning_rate);
    put("finetune_epochs", finetune_epochs);
    put("forget.ratio", forget_ratio);
    put("forget.seed", forget_seed);
    put("forget.epochs", forget_epochs);
    put("utility_metric", metric);
    put("output_dir", output_dir);
    put("seed", seed);
    put("repetitions", repetitions);
    put("threads", threads);
    if (compare_retrain) patch["compare_retrain"] = true;
    return eupg::experiment::LoadConfig(config, patch);
  }
};

void PrintMetrics(const json& summary) {
  for (const auto& [key, m] : summary.at("metrics").items()) {
    if (key.rfind("timings.", 0) == 0 || key.rfind("mia.", 0) == 0 ||
        key == "utility.value" || key.rfind("baseline.", 0) == 0) {
      std::printf("  %-40s %.6g", key.c_str(), m.at("mean").get<double>());
      if (m.at("n").get<size_t>() > 1) {
        std::printf(" +- %.3g", m.at("std").get<double>());
      }
      std::printf("\n");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eupg: forgetting-amenable training, unlearning and "
               "membership-inference experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "eupg 0.1.0");

  CommonOptions common;

  auto* anonymize = app.add_subcommand(
      "anonymize", "Write a k-anonymized or DP-protected training set, or a "
                   "DP-Pix image");
  common.Register(anonymize);
  std::optional<std::string> image, image_output, anon_dir;
  size_t block = 4, changed_pixels = 16;
  anonymize->add_option("--image", image, "PGM/PPM image to protect with DP-Pix")
      ->check(CLI::ExistingFile);
  anonymize->add_option("--image-output", image_output,
                        "Output image (default <output>/anonymize/<name>)");
  anonymize->add_option("--block", block, "DP-Pix block size b")->check(CLI::PositiveNumber);
  anonymize->add_option("--pixels", changed_pixels,
                        "DP-Pix neighbouring-image pixel budget m")
      ->check(CLI::PositiveNumber);
  anonymize->add_option("--dir", anon_dir,
                        "Output directory (default <output>/anonymize)");

  auto* run = app.add_subcommand(
      "run", "Train (protect, pre-train, fine-tune) and evaluate utility and MIA");
  common.Register(run);

  auto* forget = app.add_subcommand(
      "forget", "Serve a forgetting request on a trained state and evaluate it");
  common.Register(forget);
  std::optional<std::string> state_dir;
  forget->add_option("--state", state_dir,
                     "State directory (default <output>/rep<i>/state)");

  auto* attack = app.add_subcommand(
      "attack", "Membership-inference attacks on a trained model or state");
  common.Register(attack);
  eupg::experiment::AttackTarget target;
  attack->add_option("--model", target.model_path, "Single model file")
      ->check(CLI::ExistingFile);
  attack->add_option("--state", target.state_dir, "State directory");
  attack->add_option("--members", target.members_csv, "Member rows CSV")
      ->check(CLI::ExistingFile);
  attack->add_option("--nonmembers", target.nonmembers_csv,
                     "Non-member rows CSV")
      ->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand(
      "sweep", "Run a hyperparameter grid; completed points are skipped");
  common.Register(sweep);
  std::vector<std::string> axes;
  std::vector<double> values;
  sweep->add_option("--axis", axes, "k | epsilon | epochs | ratio (repeatable; "
                                    "default all four)");
  sweep->add_option("--values", values,
                    "Grid values for a single --axis (default grid otherwise)")
      ->delimiter(',');

  auto* report = app.add_subcommand(
      "report", "Flatten JSON reports into a CSV table");
  std::vector<std::string> report_paths;
  std::optional<std::string> report_out;
  report->add_option("paths", report_paths, "Report files or directories")
      ->required();
  report->add_option("-o,--output", report_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (report->parsed()) {
      const std::string csv = eupg::experiment::FlattenReports(report_paths);
      if (report_out) {
        std::ofstream out(*report_out);
        if (!out) throw eupg::IoError("cannot write " + *report_out);
        out << csv;
      } else {
        std::cout << csv;
      }
      return kExitOk;
    }

    if (anonymize->parsed() && image) {
      const ExperimentConfig cfg = common.Build();
      eupg::experiment::ImageAnonymization job;
      job.input = *image;
      job.output = image_output
                       ? *image_output
                       : eupg::experiment::ResolveOutputDir(cfg) + "/anonymize/" +
                             std::filesystem::path(*image).filename().string();
      job.block = block;
      job.m = changed_pixels;
      job.epsilon = cfg.epsilon;
      job.seed = cfg.PrivacySeed(0);
      const json ledger = eupg::experiment::AnonymizeImage(job);
      std::printf("wrote %s (laplace scale %.6g)\n", job.output.c_str(),
                  ledger["laplace_scale"].get<double>());
      return kExitOk;
    }

    const ExperimentConfig cfg = common.Build();
    const std::string out = eupg::experiment::ResolveOutputDir(cfg);
    if (anonymize->parsed()) {
      const auto in = eupg::experiment::LoadInputs(cfg);
      const std::string dir = anon_dir ? *anon_dir : out + "/anonymize";
      const json ledger = eupg::experiment::AnonymizeTable(cfg, in, dir);
      std::printf("wrote %s/protected.csv\n", dir.c_str());
      if (ledger.contains("k_anonymity")) {
        std::printf("  k-anonymity ok: %s\n",
                    ledger["k_anonymity"]["ok"].get<bool>() ? "true" : "false");
      } else {
        std::printf("  budget: %zu attributes, epsilon spent %.17g\n",
                    ledger["budget"]["protected_attribute_count"].get<size_t>(),
                    ledger["budget"]["spent"].get<double>());
      }
    } else if (run->parsed()) {
      const json summary = eupg::experiment::RunCommand(cfg);
      std::printf("run %s: %zu repetition(s) in %s\n",
                  summary["method"].get<std::string>().c_str(),
                  cfg.repetitions, out.c_str());
      PrintMetrics(summary);
    } else if (forget->parsed()) {
      const json summary = eupg::experiment::ForgetCommand(cfg, state_dir);
      std::printf("forget %s: %zu repetition(s) in %s\n",
                  summary["method"].get<std::string>().c_str(),
                  cfg.repetitions, out.c_str());
      PrintMetrics(summary);
    } else if (attack->parsed()) {
      if ((target.model_path || target.state_dir) && cfg.repetitions != 1) {
        throw eupg::InvalidArgumentError("--model/--state need repetitions = 1");
      }
      const auto in = eupg::experiment::LoadInputs(cfg);
      for (size_t rep = 0; rep < cfg.repetitions; ++rep) {
        const json r = eupg::experiment::AttackRepetition(cfg, in, rep, target);
        for (const auto& m : r["mia"]) {
          std::printf("rep %zu %-14s auc %.6f (%zu vs %zu)\n", rep,
                      m["attack"].get<std::string>().c_str(),
                      m["auc"].get<double>(), m["member_count"].get<size_t>(),
                      m["nonmember_count"].get<size_t>());
        }
      }
    } else if (sweep->parsed()) {
      if (axes.empty()) axes = {"k", "epsilon", "epochs", "ratio"};
      if (!values.empty() && axes.size() != 1) {
        throw eupg::InvalidArgumentError("--values needs exactly one --axis");
      }
      std::vector<eupg::experiment::SweepAxis> grid;
      for (const auto& a : axes) {
        grid.push_back({a, values.empty() ? eupg::experiment::DefaultGrid(a)
                                          : values});
      }
      const json index = eupg::experiment::SweepCommand(cfg, grid);
      for (const auto& p : index["points"]) {
        std::printf("%-16s %s\n", p["name"].get<std::string>().c_str(),
                    p["status"].get<std::string>().c_str());
      }
    }
    return kExitOk;
  } catch (const eupg::InvalidArgumentError& e) {
    std::fprintf(stderr, "eupg: %s\n", e.what());
    return kExitConfig;
  } catch (const eupg::DataError& e) {
    std::fprintf(stderr, "eupg: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "eupg: %s\n", e.what());
    return kExitRuntime;
  }
}
