// Copyright 2026 The SentiLens Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver for the collect -> preprocess -> score -> evaluate
// pipeline. Logs go to stderr; artifacts go to the output directory.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "sentilens/errors.hpp"
#include "sentilens/pipeline.hpp"

namespace {

struct GlobalFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
};

sentilens::PipelineConfig load_config(const GlobalFlags& flags) {
  if (flags.config_path.empty()) throw sentilens::ConfigError("--config is required");
  sentilens::PipelineConfig config = sentilens::load_pipeline_config(flags.config_path);
  // flag > config > default
  if (!flags.out_dir.empty()) config.output_dir = flags.out_dir;
  if (flags.seed) config.split.seed = *flags.seed;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_st("sentilens");
  logger->set_pattern("[%l] %v");

  CLI::App app{"sentilens: brand and product sentiment from social-media text"};
  app.require_subcommand(1);
  GlobalFlags flags;
  std::uint64_t seed = 0;
  app.add_option("--config", flags.config_path, "Pipeline config (JSON)");
  app.add_option("--out", flags.out_dir, "Output directory (overrides output_dir)");
  auto* seed_opt = app.add_option("--seed", seed, "Split seed (overrides split.seed)");
  app.add_flag("--verbose", flags.verbose, "Log progress to stderr");

  std::vector<sentilens::Stage> stages;
  std::function<void(const sentilens::PipelineConfig&, const sentilens::RunOptions&)> action;

  auto stage_command = [&](const char* name, const char* help, sentilens::Stage stage) {
    auto* sub = app.add_subcommand(name, help)->fallthrough();
    sub->callback([&, stage] {
      action = [stage](const auto& config, const auto& options) {
        sentilens::run_pipeline(config, {stage}, options);
      };
    });
  };
  stage_command("collect", "Fetch/ingest sources into raw.jsonl and corpus.jsonl",
                sentilens::Stage::kCollect);
  stage_command("preprocess", "Tokenize and build the pruned tf-idf matrix",
                sentilens::Stage::kPreprocess);
  stage_command("score", "Lexicon sentiment scores (scores.csv)", sentilens::Stage::kScore);
  stage_command("bootstrap", "Label non-zero scores for training (labeled.jsonl)",
                sentilens::Stage::kBootstrap);
  stage_command("train", "Train Naive Bayes on the training split (model.json)",
                sentilens::Stage::kTrain);
  stage_command("evaluate", "Confusion matrix and accuracy on the test split",
                sentilens::Stage::kEvaluate);
  stage_command("report", "Distribution, ratio and histogram reports", sentilens::Stage::kReport);

  app.add_subcommand("predict", "Classify every corpus document (predictions.csv)")
      ->fallthrough()
      ->callback([&] { action = [](const auto& c, const auto& o) { sentilens::run_predict(c, o); }; });
  app.add_subcommand("compare", "Lexicon vs Naive Bayes label counts (compare.csv)")
      ->fallthrough()
      ->callback([&] { action = [](const auto& c, const auto& o) { sentilens::run_compare(c, o); }; });

  long long top_k = 0;
  auto* export_cmd =
      app.add_subcommand("export-terms", "Write frequent terms for lexicon annotation")->fallthrough();
  export_cmd->add_option("--top-k", top_k, "Number of terms")->required();
  export_cmd->callback([&] {
    action = [&top_k](const auto& c, const auto& o) {
      if (top_k < 1) throw sentilens::ConfigError("--top-k must be >= 1");
      sentilens::run_export_terms(c, static_cast<std::size_t>(top_k), o);
    };
  });

  std::string stage_list = "all";
  auto* run_cmd = app.add_subcommand("run", "Run several stages in order")->fallthrough();
  run_cmd->add_option("--stages", stage_list, "Comma-separated stages or 'all'");
  run_cmd->callback([&] {
    action = [&stage_list](const auto& c, const auto& o) {
      sentilens::run_pipeline(c, sentilens::parse_stages(stage_list), o);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (*seed_opt) flags.seed = seed;
  logger->set_level(flags.verbose ? spdlog::level::info : spdlog::level::warn);

  try {
    const sentilens::PipelineConfig config = load_config(flags);
    sentilens::RunOptions options;
    options.log = [&logger](const std::string& line) { logger->info(line); };
    action(config, options);
    return 0;
  } catch (const std::exception& e) {
    logger->error(e.what());
    return sentilens::exit_code_for(e);
  }
}
