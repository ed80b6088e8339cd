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

#ifndef SENTILENS_PIPELINE_HPP
#define SENTILENS_PIPELINE_HPP

#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sentilens/collector.hpp"
#include "sentilens/corpus.hpp"
#include "sentilens/evaluate.hpp"
#include "sentilens/lexicon.hpp"
#include "sentilens/preprocess.hpp"

namespace sentilens {

/// Environment variable holding the bearer token for endpoint sources.
inline constexpr const char* kTokenEnvVar = "SENTILENS_TOKEN";

struct SourceSpec {
  enum class Kind { kEndpoint, kFile };
  Kind kind = Kind::kFile;
  EndpointConfig endpoint;          // kEndpoint
  std::filesystem::path path;       // kFile
  IngestFormat format = IngestFormat::kJsonLines;
  bool strict = false;
  std::optional<std::string> brand;
  std::optional<std::string> product;
  FieldMap field_map = identity_field_map();
};

struct LexiconFiles {
  std::filesystem::path positive;
  std::filesystem::path negative;
};

struct PipelineConfig {
  std::vector<SourceSpec> sources;
  PreprocessOptions preprocess;
  std::optional<LexiconFiles> generic_lexicon;
  std::optional<LexiconFiles> domain_lexicon;
  std::optional<LexiconFiles> slang_lexicon;
  double max_sparsity = 0.99;
  SplitSpec split;
  std::vector<std::string> classes{"negative", "positive"};
  /// Case-insensitive product keywords tagged onto documents without a product.
  std::vector<std::string> product_keywords;
  std::size_t top_k = 50;
  std::filesystem::path output_dir = "out";
};

/// Reads the JSON config. Relative paths resolve against the config file's
/// directory. Endpoint sources pick up their token from SENTILENS_TOKEN.
/// Throws ConfigError on any schema problem.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

void validate(const PipelineConfig& config);

enum class Stage { kCollect, kPreprocess, kScore, kBootstrap, kTrain, kEvaluate, kReport };

std::string_view to_string(Stage stage);
/// Comma-separated stage names; "all" selects every stage.
std::vector<Stage> parse_stages(std::string_view text);
const std::vector<Stage>& all_stages();

struct RunOptions {
  CollectHooks collect_hooks;
  std::function<void(const std::string&)> log;
};

/// Runs the stages in pipeline order, each writing its artifacts into
/// `output_dir`. Errors keep their type and gain a "<stage>: " prefix.
void run_pipeline(const PipelineConfig& config, const std::vector<Stage>& stages,
                  const RunOptions& options = {});

/// predictions.csv for every corpus document with the trained model.
void run_predict(const PipelineConfig& config, const RunOptions& options = {});
/// compare.csv: lexicon vs Naive Bayes label counts over the whole corpus.
void run_compare(const PipelineConfig& config, const RunOptions& options = {});

/// Writes `term<TAB>count` lines, most frequent first. Rejects top_k == 0 and
/// an empty matrix with ConfigError / DataError.
void export_candidate_terms(const DocTermMatrix& matrix, std::size_t top_k,
                            const std::filesystem::path& path);
/// Reads matrix.csv / vocabulary.csv from the output directory.
void run_export_terms(const PipelineConfig& config, std::size_t top_k,
                      const RunOptions& options = {});

/// 0 success, 2 config, 3 data, 4 network, 5 anything else.
int exit_code_for(const std::exception& error);

}  // namespace sentilens

#endif  // SENTILENS_PIPELINE_HPP
