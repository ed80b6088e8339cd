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

#include "sentilens/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include <json.hpp>

#include "sentilens/csv.hpp"
#include "sentilens/errors.hpp"

namespace sentilens {

using ordered_json = nlohmann::ordered_json;

std::size_t train_size(std::size_t n, double train_fraction) {
  return static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 0.5));
}

namespace {

// Uniform in [0, bound) without modulo bias.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n,
                                                                            const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw ConfigError("train_fraction must be in (0, 1)");
  }
  if (n < 2) throw DataError("split needs at least 2 examples");
  const std::size_t n_train = train_size(n, spec.train_fraction);
  if (n_train == 0 || n_train == n) {
    throw DataError("split of " + std::to_string(n) + " examples leaves one side empty");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (spec.shuffle) {
    std::mt19937_64 rng(spec.seed);
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(order[i], order[bounded(rng, i + 1)]);
    }
  }
  std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  order.resize(n_train);
  return {std::move(order), std::move(test)};
}

std::pair<std::vector<LabeledDoc>, std::vector<LabeledDoc>> split(
    const std::vector<LabeledDoc>& examples, const SplitSpec& spec) {
  const auto [train_idx, test_idx] = split_indices(examples.size(), spec);
  std::pair<std::vector<LabeledDoc>, std::vector<LabeledDoc>> out;
  out.first.reserve(train_idx.size());
  out.second.reserve(test_idx.size());
  for (auto i : train_idx) out.first.push_back(examples[i]);
  for (auto i : test_idx) out.second.push_back(examples[i]);
  return out;
}

Eigen::MatrixXd ConfusionMatrix::column_fractions() const {
  Eigen::MatrixXd fractions = counts.cast<double>();
  const Eigen::RowVectorX<std::int64_t> totals = column_totals();
  for (Eigen::Index a = 0; a < counts.cols(); ++a) {
    if (totals[a] == 0) {
      fractions.col(a).setZero();
    } else {
      fractions.col(a) /= static_cast<double>(totals[a]);
    }
  }
  return fractions;
}

Eigen::RowVectorXd ConfusionMatrix::column_shares() const {
  const std::int64_t total = grand_total();
  if (total == 0) return Eigen::RowVectorXd::Zero(counts.cols());
  return column_totals().cast<double>() / static_cast<double>(total);
}

ConfusionMatrix confusion_from_counts(std::vector<std::string> classes,
                                      Eigen::MatrixX<std::int64_t> counts) {
  const auto k = static_cast<Eigen::Index>(classes.size());
  if (counts.rows() != k || counts.cols() != k) {
    throw DataError("confusion counts must be " + std::to_string(k) + "x" + std::to_string(k));
  }
  if ((counts.array() < 0).any()) throw DataError("confusion counts must be non-negative");
  return {std::move(classes), std::move(counts)};
}

ConfusionMatrix confusion(const std::vector<Prediction>& predictions,
                          const std::vector<LabeledDoc>& truths, std::vector<std::string> classes) {
  if (predictions.empty()) throw DataError("confusion: no predictions");
  if (predictions.size() != truths.size()) {
    throw DataError("confusion: " + std::to_string(predictions.size()) + " predictions but " +
                    std::to_string(truths.size()) + " truths");
  }
  if (classes.empty()) {
    std::set<std::string> labels;
    for (const auto& t : truths) labels.insert(t.label);
    classes.assign(labels.begin(), labels.end());
  }
  auto index_of = [&classes](const std::string& label) {
    auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) throw DataError("confusion: unknown class '" + label + "'");
    return static_cast<Eigen::Index>(it - classes.begin());
  };
  const auto k = static_cast<Eigen::Index>(classes.size());
  Eigen::MatrixX<std::int64_t> counts = Eigen::MatrixX<std::int64_t>::Zero(k, k);
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i].doc_id != truths[i].doc_id()) {
      throw DataError("confusion: doc_id mismatch at position " + std::to_string(i));
    }
    ++counts(index_of(predictions[i].predicted), index_of(truths[i].label));
  }
  return {std::move(classes), std::move(counts)};
}

double accuracy(const ConfusionMatrix& matrix) {
  const std::int64_t total = matrix.grand_total();
  if (total <= 0) throw DataError("accuracy of an empty confusion matrix");
  return static_cast<double>(matrix.counts.trace()) / static_cast<double>(total);
}

DistributionTable distribution_from_counts(
    std::vector<std::string> groups, const std::vector<std::array<std::int64_t, 3>>& counts) {
  if (groups.size() != counts.size()) throw DataError("one count row per group is required");
  DistributionTable table;
  table.groups = std::move(groups);
  table.counts.resize(static_cast<Eigen::Index>(counts.size()), 3);
  for (std::size_t g = 0; g < counts.size(); ++g) {
    for (Eigen::Index l = 0; l < 3; ++l) {
      if (counts[g][static_cast<std::size_t>(l)] < 0) throw DataError("negative count");
      table.counts(static_cast<Eigen::Index>(g), l) = counts[g][static_cast<std::size_t>(l)];
    }
  }
  return table;
}

namespace {

Eigen::Index label_column(SentimentLabel label) { return static_cast<Eigen::Index>(label); }

}  // namespace

DistributionTable distribution(const std::vector<SentimentScore>& scores,
                               const std::map<std::string, std::string>& group_of) {
  std::map<std::string, std::array<std::int64_t, 3>> cells;
  for (const auto& s : scores) {
    auto it = group_of.find(s.doc_id);
    if (it == group_of.end()) throw DataError("distribution: no group for doc '" + s.doc_id + "'");
    ++cells[it->second][static_cast<std::size_t>(label_column(s.label))];
  }
  std::vector<std::string> groups;
  std::vector<std::array<std::int64_t, 3>> counts;
  for (const auto& [group, row] : cells) {
    groups.push_back(group);
    counts.push_back(row);
  }
  return distribution_from_counts(std::move(groups), counts);
}

std::string GroupRatio::to_string() const {
  if (!ratio) return "n/a";
  return std::to_string((*ratio)[0]) + ":" + std::to_string((*ratio)[1]) + ":" +
         std::to_string((*ratio)[2]);
}

std::vector<GroupRatio> ratio_summary(const DistributionTable& table) {
  // round(x / neg) half up, in integers: (2x + neg) / (2 neg).
  auto rounded = [](std::int64_t x, std::int64_t neg) { return (2 * x + neg) / (2 * neg); };
  std::vector<GroupRatio> out;
  for (Eigen::Index g = 0; g < table.counts.rows(); ++g) {
    GroupRatio r;
    r.group = table.groups[static_cast<std::size_t>(g)];
    const std::int64_t neg = table.counts(g, 0);
    if (neg > 0) {
      r.ratio = std::array<std::int64_t, 3>{1, rounded(table.counts(g, 1), neg),
                                            rounded(table.counts(g, 2), neg)};
    }
    out.push_back(std::move(r));
  }
  return out;
}

DistributionTable compare_methods(const std::vector<SentimentScore>& lexicon_scores,
                                  const std::vector<Prediction>& ml_predictions) {
  std::multiset<std::string> lexicon_ids, ml_ids;
  for (const auto& s : lexicon_scores) lexicon_ids.insert(s.doc_id);
  for (const auto& p : ml_predictions) ml_ids.insert(p.doc_id);
  if (lexicon_ids != ml_ids) {
    throw DataError("compare: lexicon scores and predictions cover different documents");
  }
  std::array<std::int64_t, 3> lexicon{}, ml{};
  for (const auto& s : lexicon_scores) ++lexicon[static_cast<std::size_t>(label_column(s.label))];
  for (const auto& p : ml_predictions) {
    ++ml[static_cast<std::size_t>(label_column(parse_sentiment_label(p.predicted)))];
  }
  return distribution_from_counts({"Lexicon", "Naive Bayes"}, {lexicon, ml});
}

namespace {

double median_of(const std::vector<std::int64_t>& sorted, std::size_t begin, std::size_t end) {
  const std::size_t n = end - begin;
  const std::size_t mid = begin + n / 2;
  if (n % 2 == 1) return static_cast<double>(sorted[mid]);
  return (static_cast<double>(sorted[mid - 1]) + static_cast<double>(sorted[mid])) / 2.0;
}

}  // namespace

Histogram histogram(const std::vector<SentimentScore>& scores) {
  Histogram hist;
  if (scores.empty()) return hist;
  std::vector<std::int64_t> values;
  values.reserve(scores.size());
  for (const auto& s : scores) values.push_back(s.score);
  std::sort(values.begin(), values.end());
  for (auto v : values) {
    if (hist.bins.empty() || hist.bins.back().first != v) {
      hist.bins.emplace_back(v, 1);
    } else {
      ++hist.bins.back().second;
    }
  }
  const std::size_t n = values.size();
  FiveNumberSummary summary;
  summary.min = static_cast<double>(values.front());
  summary.max = static_cast<double>(values.back());
  summary.median = median_of(values, 0, n);
  if (n == 1) {
    summary.q1 = summary.q3 = summary.median;
  } else {
    const std::size_t half = n / 2;
    summary.q1 = median_of(values, 0, half);
    summary.q3 = median_of(values, n - half, n);
  }
  hist.summary = summary;
  return hist;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

constexpr std::array<const char*, 3> kLabelColumns{"negative", "neutral", "positive"};

}  // namespace

void write_confusion_csv(const std::filesystem::path& path, const ConfusionMatrix& matrix) {
  auto out = open_for_write(path);
  out << "predicted";
  for (const auto& c : matrix.classes) out << ',' << csv::field(c);
  out << ",row_total\n";
  const auto rows = matrix.row_totals();
  for (Eigen::Index p = 0; p < matrix.counts.rows(); ++p) {
    out << csv::field(matrix.classes[static_cast<std::size_t>(p)]);
    for (Eigen::Index a = 0; a < matrix.counts.cols(); ++a) out << ',' << matrix.counts(p, a);
    out << ',' << rows[p] << '\n';
  }
  out << "column_total";
  const auto cols = matrix.column_totals();
  for (Eigen::Index a = 0; a < cols.size(); ++a) out << ',' << cols[a];
  out << ',' << matrix.grand_total() << '\n';
  finish(out, path);
}

void write_confusion_fractions_csv(const std::filesystem::path& path,
                                   const ConfusionMatrix& matrix) {
  auto out = open_for_write(path);
  out << "predicted";
  for (const auto& c : matrix.classes) out << ',' << csv::field(c);
  out << '\n';
  const Eigen::MatrixXd fractions = matrix.column_fractions();
  for (Eigen::Index p = 0; p < fractions.rows(); ++p) {
    out << csv::field(matrix.classes[static_cast<std::size_t>(p)]);
    for (Eigen::Index a = 0; a < fractions.cols(); ++a) out << ',' << csv::number(fractions(p, a));
    out << '\n';
  }
  out << "column_share";
  const Eigen::RowVectorXd shares = matrix.column_shares();
  for (Eigen::Index a = 0; a < shares.size(); ++a) out << ',' << csv::number(shares[a]);
  out << '\n';
  finish(out, path);
}

void write_distribution_csv(const std::filesystem::path& path, const DistributionTable& table) {
  auto out = open_for_write(path);
  out << "group,negative,neutral,positive,row_total\n";
  const auto rows = table.row_totals();
  for (Eigen::Index g = 0; g < table.counts.rows(); ++g) {
    out << csv::field(table.groups[static_cast<std::size_t>(g)]);
    for (Eigen::Index l = 0; l < 3; ++l) out << ',' << table.counts(g, l);
    out << ',' << rows[g] << '\n';
  }
  const auto cols = table.column_totals();
  out << "column_total," << cols[0] << ',' << cols[1] << ',' << cols[2] << ','
      << table.grand_total() << '\n';
  finish(out, path);
}

void write_distribution_json(const std::filesystem::path& path, const DistributionTable& table) {
  ordered_json j;
  ordered_json groups = ordered_json::array();
  const auto rows = table.row_totals();
  for (Eigen::Index g = 0; g < table.counts.rows(); ++g) {
    ordered_json row;
    row["group"] = table.groups[static_cast<std::size_t>(g)];
    for (Eigen::Index l = 0; l < 3; ++l) {
      row[kLabelColumns[static_cast<std::size_t>(l)]] = table.counts(g, l);
    }
    row["row_total"] = rows[g];
    groups.push_back(std::move(row));
  }
  j["groups"] = std::move(groups);
  const auto cols = table.column_totals();
  j["column_totals"] = {{"negative", cols[0]}, {"neutral", cols[1]}, {"positive", cols[2]}};
  j["grand_total"] = table.grand_total();
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

void write_ratios_csv(const std::filesystem::path& path, const DistributionTable& table) {
  auto out = open_for_write(path);
  out << "group,negative,neutral,positive,ratio\n";
  const auto ratios = ratio_summary(table);
  for (Eigen::Index g = 0; g < table.counts.rows(); ++g) {
    out << csv::field(table.groups[static_cast<std::size_t>(g)]);
    for (Eigen::Index l = 0; l < 3; ++l) out << ',' << table.counts(g, l);
    out << ',' << ratios[static_cast<std::size_t>(g)].to_string() << '\n';
  }
  finish(out, path);
}

void write_histogram_json(const std::filesystem::path& path, const Histogram& hist) {
  ordered_json j;
  ordered_json bins = ordered_json::array();
  std::int64_t count = 0;
  for (const auto& [value, n] : hist.bins) {
    bins.push_back({{"score", value}, {"count", n}});
    count += n;
  }
  j["count"] = count;
  j["bins"] = std::move(bins);
  if (hist.summary) {
    const auto& s = *hist.summary;
    j["summary"] = {{"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"q3", s.q3}, {"max", s.max}};
  } else {
    j["summary"] = nullptr;
  }
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

}  // namespace sentilens
