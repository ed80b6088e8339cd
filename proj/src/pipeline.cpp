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

#include "sentilens/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sentilens/classifier.hpp"
#include "sentilens/errors.hpp"

namespace sentilens {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": '" + key + "' has the wrong type");
  }
}

std::optional<std::string> optional_string(const json& obj, const char* key,
                                           const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ConfigError(where + ": '" + key + "' must be a string");
  return it->get<std::string>();
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::optional<LexiconFiles> lexicon_files(const json& lex, const char* key, const fs::path& base) {
  auto it = lex.find(key);
  if (it == lex.end() || it->is_null()) return std::nullopt;
  const std::string where = std::string("lexicon.") + key;
  if (!it->is_object()) throw ConfigError(where + " must be an object");
  reject_unknown_keys(*it, {"positive", "negative"}, where);
  if (!it->contains("positive") || !it->contains("negative")) {
    throw ConfigError(where + " needs 'positive' and 'negative'");
  }
  return LexiconFiles{resolve(base, get_or<std::string>(*it, "positive", "", where)),
                      resolve(base, get_or<std::string>(*it, "negative", "", where))};
}

SourceSpec parse_source(const json& j, const fs::path& base, std::size_t index) {
  const std::string where = "sources[" + std::to_string(index) + "]";
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  SourceSpec spec;
  const std::string kind = get_or<std::string>(j, "kind", "file", where);
  spec.brand = optional_string(j, "brand", where);
  spec.product = optional_string(j, "product", where);
  if (auto it = j.find("field_map"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw ConfigError(where + ".field_map must be an object");
    for (const auto& [field, path] : it->items()) {
      if (!path.is_string()) throw ConfigError(where + ".field_map values must be strings");
      spec.field_map[field] = path.get<std::string>();
    }
  }
  if (kind == "file") {
    reject_unknown_keys(j, {"kind", "path", "format", "strict", "brand", "product", "field_map"},
                        where);
    spec.kind = SourceSpec::Kind::kFile;
    const auto path = get_or<std::string>(j, "path", "", where);
    if (path.empty()) throw ConfigError(where + ": file source needs 'path'");
    spec.path = resolve(base, path);
    spec.format = parse_ingest_format(get_or<std::string>(j, "format", "jsonl", where));
    spec.strict = get_or<bool>(j, "strict", false, where);
  } else if (kind == "endpoint") {
    reject_unknown_keys(j,
                        {"kind", "base_url", "query", "page_size", "cursor_field", "records_field",
                         "max_records", "rate_limit", "source", "retry", "brand", "product",
                         "field_map"},
                        where);
    spec.kind = SourceSpec::Kind::kEndpoint;
    EndpointConfig& e = spec.endpoint;
    e.base_url = get_or<std::string>(j, "base_url", "", where);
    e.query = get_or<std::string>(j, "query", "", where);
    e.page_size = get_or<int>(j, "page_size", e.page_size, where);
    e.cursor_field = get_or<std::string>(j, "cursor_field", e.cursor_field, where);
    e.records_field = get_or<std::string>(j, "records_field", e.records_field, where);
    const auto max_records = get_or<long long>(j, "max_records", 1000, where);
    if (max_records < 1) throw ConfigError(where + ": max_records must be >= 1");
    e.max_records = static_cast<std::size_t>(max_records);
    e.rate_limit = get_or<int>(j, "rate_limit", e.rate_limit, where);
    e.source = parse_source_kind(get_or<std::string>(j, "source", "twitter-like", where));
    if (auto it = j.find("retry"); it != j.end() && !it->is_null()) {
      reject_unknown_keys(*it, {"max_attempts", "initial_backoff_ms"}, where + ".retry");
      e.retry.max_attempts = get_or<int>(*it, "max_attempts", e.retry.max_attempts, where);
      e.retry.initial_backoff = std::chrono::milliseconds(get_or<long long>(
          *it, "initial_backoff_ms", e.retry.initial_backoff.count(), where));
    }
    if (const char* token = std::getenv(kTokenEnvVar); token != nullptr && *token != '\0') {
      e.auth_token = std::string(token);
    }
    validate(e);
  } else {
    throw ConfigError(where + ": unknown kind '" + kind + "'");
  }
  return spec;
}

}  // namespace

PipelineConfig load_pipeline_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON (byte " +
                      std::to_string(e.byte) + ")");
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(j,
                      {"output_dir", "sources", "preprocess", "lexicon", "max_sparsity", "top_k",
                       "split", "classes", "product_keywords"},
                      "config");
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");

  PipelineConfig config;
  config.output_dir = resolve(base, get_or<std::string>(j, "output_dir", "out", "config"));
  if (auto it = j.find("sources"); it != j.end()) {
    if (!it->is_array()) throw ConfigError("config: 'sources' must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      config.sources.push_back(parse_source((*it)[i], base, i));
    }
  }
  if (auto it = j.find("preprocess"); it != j.end() && !it->is_null()) {
    const std::string where = "preprocess";
    reject_unknown_keys(*it,
                        {"min_word_len", "stop_words", "stemmer", "remove_numbers", "lowercase"},
                        where);
    PreprocessOptions& p = config.preprocess;
    const auto min_len = get_or<long long>(*it, "min_word_len", 3, where);
    if (min_len < 1) throw ConfigError("preprocess: min_word_len must be >= 1");
    p.min_word_len = static_cast<std::size_t>(min_len);
    if (auto stop = optional_string(*it, "stop_words", where)) {
      try {
        p.stop_words = load_stop_words(resolve(base, *stop));
      } catch (const IoError& e) {
        throw ConfigError(e.what());
      }
    }
    p.stemmer = parse_stemmer_kind(get_or<std::string>(*it, "stemmer", "porter", where));
    p.remove_numbers = get_or<bool>(*it, "remove_numbers", true, where);
    p.lowercase = get_or<bool>(*it, "lowercase", true, where);
  }
  if (auto it = j.find("lexicon"); it != j.end() && !it->is_null()) {
    reject_unknown_keys(*it, {"generic", "domain", "slang"}, "lexicon");
    config.generic_lexicon = lexicon_files(*it, "generic", base);
    config.domain_lexicon = lexicon_files(*it, "domain", base);
    config.slang_lexicon = lexicon_files(*it, "slang", base);
  }
  config.max_sparsity = get_or<double>(j, "max_sparsity", config.max_sparsity, "config");
  const auto top_k = get_or<long long>(j, "top_k", 50, "config");
  if (top_k < 1) throw ConfigError("config: top_k must be >= 1");
  config.top_k = static_cast<std::size_t>(top_k);
  if (auto it = j.find("split"); it != j.end() && !it->is_null()) {
    reject_unknown_keys(*it, {"train_fraction", "seed", "shuffle"}, "split");
    config.split.train_fraction =
        get_or<double>(*it, "train_fraction", config.split.train_fraction, "split");
    config.split.seed = get_or<std::uint64_t>(*it, "seed", config.split.seed, "split");
    config.split.shuffle = get_or<bool>(*it, "shuffle", config.split.shuffle, "split");
  }
  config.classes = get_or<std::vector<std::string>>(j, "classes", config.classes, "config");
  config.product_keywords =
      get_or<std::vector<std::string>>(j, "product_keywords", {}, "config");
  validate(config);
  return config;
}

void validate(const PipelineConfig& config) {
  if (config.sources.empty()) throw ConfigError("config: at least one source is required");
  validate(config.preprocess);
  if (!(config.max_sparsity >= 0.0 && config.max_sparsity < 1.0)) {
    throw ConfigError("config: max_sparsity must be in [0, 1)");
  }
  if (!(config.split.train_fraction > 0.0 && config.split.train_fraction < 1.0)) {
    throw ConfigError("split: train_fraction must be in (0, 1)");
  }
  if (config.classes.empty()) throw ConfigError("config: classes must not be empty");
  if (config.output_dir.empty()) throw ConfigError("config: output_dir is empty");
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kCollect:
      return "collect";
    case Stage::kPreprocess:
      return "preprocess";
    case Stage::kScore:
      return "score";
    case Stage::kBootstrap:
      return "bootstrap";
    case Stage::kTrain:
      return "train";
    case Stage::kEvaluate:
      return "evaluate";
    case Stage::kReport:
      return "report";
  }
  return "unknown";
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages{Stage::kCollect, Stage::kPreprocess, Stage::kScore,
                                         Stage::kBootstrap, Stage::kTrain, Stage::kEvaluate,
                                         Stage::kReport};
  return stages;
}

std::vector<Stage> parse_stages(std::string_view text) {
  std::set<Stage> chosen;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    std::string_view name = text.substr(start, comma == std::string_view::npos ? comma : comma - start);
    while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    if (name == "all") {
      chosen.insert(all_stages().begin(), all_stages().end());
    } else {
      auto it = std::find_if(all_stages().begin(), all_stages().end(),
                             [name](Stage s) { return to_string(s) == name; });
      if (it == all_stages().end()) throw ConfigError("unknown stage '" + std::string(name) + "'");
      chosen.insert(*it);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return {chosen.begin(), chosen.end()};
}

namespace {

void log_line(const RunOptions& options, const std::string& message) {
  if (options.log) options.log(message);
}

fs::path require_artifact(const PipelineConfig& config, const char* name) {
  const fs::path path = config.output_dir / name;
  if (!fs::exists(path)) {
    throw IoError(std::string(name) + " not found in '" + config.output_dir.string() +
                  "' (run the earlier stages first)");
  }
  return path;
}

Lexicon build_lexicon(const PipelineConfig& config, const RunOptions& options) {
  if (!config.generic_lexicon) throw ConfigError("lexicon.generic is required for scoring");
  const auto load = [](const LexiconFiles& files, LexiconSource source) {
    for (const auto* p : {&files.positive, &files.negative}) {
      if (!fs::exists(*p)) throw ConfigError("lexicon file '" + p->string() + "' does not exist");
    }
    return load_lexicon(files.positive, files.negative, source);
  };
  const Lexicon generic = load(*config.generic_lexicon, LexiconSource::kGeneric);
  std::vector<Lexicon> overlays;
  if (config.domain_lexicon) overlays.push_back(load(*config.domain_lexicon, LexiconSource::kDomain));
  if (config.slang_lexicon) overlays.push_back(load(*config.slang_lexicon, LexiconSource::kSlang));
  MergeReport merge;
  const Lexicon merged = merge_lexicons(generic, overlays, &merge);
  NormalizeReport normalize;
  Lexicon lexicon = normalize_lexicon(merged, config.preprocess, &normalize);
  log_line(options, "lexicon: " + std::to_string(lexicon.size()) + " entries (" +
                        std::to_string(merge.overrides) + " overrides, " +
                        std::to_string(normalize.dropped) + " dropped, " +
                        std::to_string(normalize.conflicts) + " stem conflicts)");
  return lexicon;
}

std::vector<TokenList> corpus_tokens(const PipelineConfig& config) {
  return tokenize_corpus(read_corpus_jsonl(require_artifact(config, "corpus.jsonl")),
                         config.preprocess);
}

void stage_collect(const PipelineConfig& config, const RunOptions& options) {
  std::vector<RawRecord> raw;
  std::vector<Document> docs;
  std::size_t unparsable = 0;
  for (const auto& source : config.sources) {
    std::vector<RawRecord> records;
    if (source.kind == SourceSpec::Kind::kFile) {
      IngestResult ingested = ingest_file(source.path, source.format, source.strict);
      if (ingested.skipped) {
        log_line(options, source.path.string() + ": skipped " + std::to_string(ingested.skipped) +
                              " malformed line(s)");
      }
      records = std::move(ingested.records);
    } else {
      records = collect(source.endpoint, options.collect_hooks);
    }
    for (const auto& record : records) {
      try {
        Document doc = parse_record(record, source.field_map);
        if (source.brand) doc.brand = source.brand;
        if (source.product) doc.product = source.product;
        tag_product(doc, config.product_keywords);
        docs.push_back(std::move(doc));
      } catch (const DataError& e) {
        if (source.strict) throw;
        ++unparsable;
      }
    }
    raw.insert(raw.end(), std::make_move_iterator(records.begin()),
               std::make_move_iterator(records.end()));
  }
  if (unparsable) log_line(options, "skipped " + std::to_string(unparsable) + " unparsable record(s)");
  const Corpus corpus = build_corpus(std::move(docs));
  write_raw_jsonl(config.output_dir / "raw.jsonl", raw);
  write_corpus_jsonl(config.output_dir / "corpus.jsonl", corpus);
  log_line(options, "collected " + std::to_string(raw.size()) + " records, corpus N=" +
                        std::to_string(corpus.size()));
}

void stage_preprocess(const PipelineConfig& config, const RunOptions& options) {
  const DocTermMatrix full = build_matrix(corpus_tokens(config));
  const DocTermMatrix pruned = prune_sparse(full, config.max_sparsity);
  write_matrix_csv(config.output_dir / "matrix.csv", pruned);
  write_vocabulary_csv(config.output_dir / "vocabulary.csv", pruned.vocabulary);
  log_line(options, "vocabulary " + std::to_string(full.vocabulary.terms.size()) + " -> " +
                        std::to_string(pruned.vocabulary.terms.size()) + " terms after pruning");
}

void stage_score(const PipelineConfig& config, const RunOptions& options) {
  const auto tokens = corpus_tokens(config);
  const Lexicon lexicon = build_lexicon(config, options);
  write_lexicon_tsv(config.output_dir / "lexicon.tsv", lexicon);
  write_scores_csv(config.output_dir / "scores.csv", score_corpus(tokens, lexicon));
}

void stage_bootstrap(const PipelineConfig& config, const RunOptions& options) {
  const auto tokens = corpus_tokens(config);
  const auto scores = read_scores_csv(require_artifact(config, "scores.csv"));
  const auto labeled = bootstrap_labels(scores, tokens);
  write_labeled_jsonl(config.output_dir / "labeled.jsonl", labeled);
  log_line(options, "bootstrapped " + std::to_string(labeled.size()) + " of " +
                        std::to_string(scores.size()) + " documents");
}

void stage_train(const PipelineConfig& config, const RunOptions& options) {
  const auto labeled = read_labeled_jsonl(require_artifact(config, "labeled.jsonl"));
  const auto [train_set, test_set] = split(labeled, config.split);
  const NBModel model = train(train_set, config.classes);
  save_model(model, config.output_dir / "model.json");
  log_line(options, "trained on " + std::to_string(train_set.size()) + " documents, " +
                        std::to_string(test_set.size()) + " held out, |V|=" +
                        std::to_string(model.vocabulary.size()));
}

void stage_evaluate(const PipelineConfig& config, const RunOptions& options) {
  const auto labeled = read_labeled_jsonl(require_artifact(config, "labeled.jsonl"));
  const NBModel model = load_model(require_artifact(config, "model.json"));
  const auto [train_set, test_set] = split(labeled, config.split);
  std::vector<Prediction> predictions;
  predictions.reserve(test_set.size());
  for (const auto& doc : test_set) predictions.push_back(predict(model, doc.tokens));
  const ConfusionMatrix matrix = confusion(predictions, test_set, model.classes);
  write_confusion_csv(config.output_dir / "confusion.csv", matrix);
  write_confusion_fractions_csv(config.output_dir / "confusion_fractions.csv", matrix);
  const double acc = accuracy(matrix);
  json metrics;
  metrics["accuracy"] = acc;
  metrics["train_size"] = train_set.size();
  metrics["test_size"] = test_set.size();
  std::ofstream out(config.output_dir / "metrics.json", std::ios::binary | std::ios::trunc);
  out << metrics.dump(2) << '\n';
  if (!out) throw IoError("cannot write metrics.json");
  log_line(options, "accuracy " + std::to_string(acc) + " on " + std::to_string(test_set.size()) +
                        " held-out documents");
}

std::vector<Prediction> predict_corpus(const PipelineConfig& config,
                                       const std::vector<TokenList>& tokens) {
  const NBModel model = load_model(require_artifact(config, "model.json"));
  return predict_all(model, tokens);
}

void stage_report(const PipelineConfig& config, const RunOptions& options) {
  const Corpus corpus = read_corpus_jsonl(require_artifact(config, "corpus.jsonl"));
  const auto scores = read_scores_csv(require_artifact(config, "scores.csv"));

  std::map<std::string, std::string> brand_of, product_of;
  for (const auto& doc : corpus.documents) {
    brand_of[doc.id] = doc.brand.value_or("unlabeled");
    if (doc.product) product_of[doc.id] = *doc.product;
  }
  const DistributionTable brands = distribution(scores, brand_of);
  write_distribution_csv(config.output_dir / "distribution.csv", brands);
  write_distribution_json(config.output_dir / "distribution.json", brands);
  write_ratios_csv(config.output_dir / "ratios.csv", brands);

  std::vector<SentimentScore> product_scores;
  for (const auto& s : scores) {
    if (product_of.count(s.doc_id)) product_scores.push_back(s);
  }
  const DistributionTable products = distribution(product_scores, product_of);
  write_distribution_csv(config.output_dir / "products.csv", products);
  write_ratios_csv(config.output_dir / "product_ratios.csv", products);

  write_histogram_json(config.output_dir / "histogram.json", histogram(scores));
  log_line(options, "report over " + std::to_string(scores.size()) + " scored documents");
}

template <typename F>
void with_context(const std::string& context, F&& body) {
  const std::string prefix = context + ": ";
  try {
    body();
  } catch (const RateLimitError& e) {
    throw RateLimitError(prefix + e.what(), e.attempts(), e.retry_after());
  } catch (const NetworkError& e) {
    throw NetworkError(prefix + e.what(), e.attempts(), e.retryable());
  } catch (const ParseError& e) {
    throw ParseError(prefix + e.what(), e.byte_offset());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const FormatError& e) {
    throw FormatError(prefix + e.what());
  } catch (const IoError& e) {
    throw IoError(prefix + e.what());
  } catch (const Error& e) {
    throw Error(prefix + e.what());
  }
}

void ensure_output_dir(const PipelineConfig& config) {
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec || !fs::is_directory(config.output_dir)) {
    throw ConfigError("output_dir '" + config.output_dir.string() + "' is not writable");
  }
}

}  // namespace

void run_pipeline(const PipelineConfig& config, const std::vector<Stage>& stages,
                  const RunOptions& options) {
  validate(config);
  ensure_output_dir(config);
  std::vector<Stage> ordered = stages;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
  for (Stage stage : ordered) {
    log_line(options, "stage " + std::string(to_string(stage)));
    with_context(std::string(to_string(stage)), [&] {
      switch (stage) {
        case Stage::kCollect:
          stage_collect(config, options);
          break;
        case Stage::kPreprocess:
          stage_preprocess(config, options);
          break;
        case Stage::kScore:
          stage_score(config, options);
          break;
        case Stage::kBootstrap:
          stage_bootstrap(config, options);
          break;
        case Stage::kTrain:
          stage_train(config, options);
          break;
        case Stage::kEvaluate:
          stage_evaluate(config, options);
          break;
        case Stage::kReport:
          stage_report(config, options);
          break;
      }
    });
  }
}

void run_predict(const PipelineConfig& config, const RunOptions& options) {
  validate(config);
  ensure_output_dir(config);
  with_context("predict", [&] {
    const NBModel model = load_model(require_artifact(config, "model.json"));
    const auto predictions = predict_all(model, corpus_tokens(config));
    write_predictions_csv(config.output_dir / "predictions.csv", model, predictions);
    log_line(options, "predicted " + std::to_string(predictions.size()) + " documents");
  });
}

void run_compare(const PipelineConfig& config, const RunOptions& options) {
  validate(config);
  ensure_output_dir(config);
  with_context("compare", [&] {
    const auto tokens = corpus_tokens(config);
    const auto scores = read_scores_csv(require_artifact(config, "scores.csv"));
    const DistributionTable table = compare_methods(scores, predict_corpus(config, tokens));
    write_distribution_csv(config.output_dir / "compare.csv", table);
    log_line(options, "compared lexicon and Naive Bayes labels over " +
                          std::to_string(scores.size()) + " documents");
  });
}

void export_candidate_terms(const DocTermMatrix& matrix, std::size_t top_k, const fs::path& path) {
  if (top_k == 0) throw ConfigError("top_k must be >= 1");
  if (matrix.vocabulary.terms.empty() || matrix.tf.nonZeros() == 0) {
    throw DataError("cannot export candidate terms from an empty matrix");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  for (const auto& [term, count] : frequent_terms(matrix, top_k)) {
    out << term << '\t' << count << '\n';
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void run_export_terms(const PipelineConfig& config, std::size_t top_k, const RunOptions& options) {
  validate(config);
  with_context("export-terms", [&] {
    const DocTermMatrix matrix = read_matrix_csv(require_artifact(config, "matrix.csv"),
                                                 require_artifact(config, "vocabulary.csv"));
    export_candidate_terms(matrix, top_k, config.output_dir / "candidate_terms.txt");
    log_line(options, "wrote " + std::to_string(std::min(top_k, matrix.vocabulary.terms.size())) +
                          " candidate terms");
  });
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error)) return 2;
  if (dynamic_cast<const DataError*>(&error) || dynamic_cast<const IoError*>(&error) ||
      dynamic_cast<const FormatError*>(&error)) {
    return 3;
  }
  if (dynamic_cast<const NetworkError*>(&error)) return 4;
  return 5;
}

}  // namespace sentilens
