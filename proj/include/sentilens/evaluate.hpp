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

#ifndef SENTILENS_EVALUATE_HPP
#define SENTILENS_EVALUATE_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sentilens/classifier.hpp"
#include "sentilens/lexicon.hpp"

namespace sentilens {

struct SplitSpec {
  double train_fraction = 0.75;
  std::uint64_t seed = 42;
  bool shuffle = true;
};

/// Number of training items for `n` examples: floor(fraction * n + 0.5).
std::size_t train_size(std::size_t n, double train_fraction);

/// Positions of the training and test items. With `shuffle` the positions are
/// a seeded Fisher-Yates permutation (mt19937_64, rejection-sampled bounds),
/// so the result is the same on every platform.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n,
                                                                            const SplitSpec& spec);

std::pair<std::vector<LabeledDoc>, std::vector<LabeledDoc>> split(
    const std::vector<LabeledDoc>& examples, const SplitSpec& spec);

/// Rows are predicted classes, columns actual classes.
struct ConfusionMatrix {
  std::vector<std::string> classes;
  Eigen::MatrixX<std::int64_t> counts;

  Eigen::VectorX<std::int64_t> row_totals() const { return counts.rowwise().sum(); }
  Eigen::RowVectorX<std::int64_t> column_totals() const { return counts.colwise().sum(); }
  std::int64_t grand_total() const { return counts.sum(); }
  /// counts(p, a) / column_total(a); a zero column yields zeros.
  Eigen::MatrixXd column_fractions() const;
  /// column_total(a) / grand_total.
  Eigen::RowVectorXd column_shares() const;
};

ConfusionMatrix confusion_from_counts(std::vector<std::string> classes,
                                      Eigen::MatrixX<std::int64_t> counts);

/// `classes` fixes the axis order; when empty the sorted truth labels are
/// used. Throws DataError on an empty input, misaligned doc ids, or a class
/// outside the set.
ConfusionMatrix confusion(const std::vector<Prediction>& predictions,
                          const std::vector<LabeledDoc>& truths,
                          std::vector<std::string> classes = {});

/// Trace over grand total. Throws DataError for an empty matrix.
double accuracy(const ConfusionMatrix& matrix);

/// Counts per group, columns negative / neutral / positive.
struct DistributionTable {
  std::vector<std::string> groups;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 3> counts;

  Eigen::VectorX<std::int64_t> row_totals() const { return counts.rowwise().sum(); }
  Eigen::RowVector3<std::int64_t> column_totals() const { return counts.colwise().sum(); }
  std::int64_t grand_total() const { return counts.sum(); }
};

DistributionTable distribution_from_counts(
    std::vector<std::string> groups, const std::vector<std::array<std::int64_t, 3>>& counts);

/// Groups come out in sorted order. Throws DataError for a doc id missing
/// from `group_of`.
DistributionTable distribution(const std::vector<SentimentScore>& scores,
                               const std::map<std::string, std::string>& group_of);

struct GroupRatio {
  std::string group;
  /// (1, neutral/negative, positive/negative) rounded half up; absent when
  /// the group has no negatives.
  std::optional<std::array<std::int64_t, 3>> ratio;

  std::string to_string() const;
};

std::vector<GroupRatio> ratio_summary(const DistributionTable& table);

/// Two rows, "Lexicon" and "Naive Bayes", over the same documents. Prediction
/// classes must be sentiment label names. Throws DataError when the two lists
/// do not cover the same doc ids.
DistributionTable compare_methods(const std::vector<SentimentScore>& lexicon_scores,
                                  const std::vector<Prediction>& ml_predictions);

struct FiveNumberSummary {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

struct Histogram {
  std::vector<std::pair<std::int64_t, std::int64_t>> bins;  // (score, count), ascending
  std::optional<FiveNumberSummary> summary;
};

/// Quartiles use the median-of-halves rule; the median is left out of both
/// halves when the count is odd. A single value is its own quartiles.
Histogram histogram(const std::vector<SentimentScore>& scores);

void write_confusion_csv(const std::filesystem::path& path, const ConfusionMatrix& matrix);
void write_confusion_fractions_csv(const std::filesystem::path& path, const ConfusionMatrix& matrix);
void write_distribution_csv(const std::filesystem::path& path, const DistributionTable& table);
void write_distribution_json(const std::filesystem::path& path, const DistributionTable& table);
void write_ratios_csv(const std::filesystem::path& path, const DistributionTable& table);
void write_histogram_json(const std::filesystem::path& path, const Histogram& hist);

}  // namespace sentilens

#endif  // SENTILENS_EVALUATE_HPP
