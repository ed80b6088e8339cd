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

#ifndef SENTILENS_CLASSIFIER_HPP
#define SENTILENS_CLASSIFIER_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "sentilens/lexicon.hpp"
#include "sentilens/preprocess.hpp"

namespace sentilens {

struct LabeledDoc {
  TokenList tokens;
  std::string label;

  const std::string& doc_id() const noexcept { return tokens.doc_id; }
  bool operator==(const LabeledDoc&) const = default;
};

/// Distant supervision: score > 0 becomes "positive", score < 0 becomes
/// "negative", zero scores are left out. Throws DataError unless `scores` and
/// `tokens` are aligned position by position on doc_id.
std::vector<LabeledDoc> bootstrap_labels(const std::vector<SentimentScore>& scores,
                                         const std::vector<TokenList>& tokens);

/// Multinomial Naive Bayes with add-one smoothing, kept in log space.
///
/// `log_cond(t, c)` is log P(term t | class c) with terms in vocabulary order
/// and classes in `classes` order:
///
///   P(t | c) = (T_ct + 1) / (sum_t' T_ct' + B),   B = |vocabulary|
///
/// Ties at prediction time go to the class that comes first in `classes`.
struct NBModel {
  std::vector<std::string> classes;
  Eigen::VectorXd log_prior;
  std::vector<std::string> vocabulary;
  Eigen::MatrixXd log_cond;
  Eigen::VectorX<std::int64_t> class_term_totals;

  Eigen::Index num_classes() const noexcept { return static_cast<Eigen::Index>(classes.size()); }
  Eigen::Index vocabulary_size() const noexcept {
    return static_cast<Eigen::Index>(vocabulary.size());
  }
  std::optional<Eigen::Index> term_index(std::string_view term) const;
};

/// `classes` fixes the class order; when empty the sorted distinct labels of
/// `examples` are used. Throws DataError for an empty training set, an
/// unknown label, a declared class with no documents, or an empty vocabulary.
NBModel train(const std::vector<LabeledDoc>& examples, std::vector<std::string> classes = {});

struct Prediction {
  std::string doc_id;
  std::string predicted;
  /// Unnormalised, in class order.
  Eigen::VectorXd log_posteriors;
};

/// log P(c) plus log P(t|c) for each in-vocabulary token; out-of-vocabulary
/// tokens are skipped.
Prediction predict(const NBModel& model, const TokenList& tokens);

std::vector<Prediction> predict_all(const NBModel& model, const std::vector<TokenList>& docs);

inline constexpr int kModelFormatVersion = 1;

void save_model(const NBModel& model, const std::filesystem::path& path);
/// Throws FormatError on a version mismatch or a corrupt file.
NBModel load_model(const std::filesystem::path& path);

/// `doc_id,predicted,log_posterior_<class>...`, header included.
void write_predictions_csv(const std::filesystem::path& path, const NBModel& model,
                           const std::vector<Prediction>& predictions);

/// One JSON object per line: {"id", "label", "tokens"}.
void write_labeled_jsonl(const std::filesystem::path& path, const std::vector<LabeledDoc>& docs);
std::vector<LabeledDoc> read_labeled_jsonl(const std::filesystem::path& path);

}  // namespace sentilens

#endif  // SENTILENS_CLASSIFIER_HPP
