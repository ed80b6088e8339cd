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

#include "sentilens/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sentilens/csv.hpp"
#include "sentilens/errors.hpp"

namespace sentilens {

namespace {
constexpr double kTieTolerance = 1e-12;
}  // namespace

using ordered_json = nlohmann::ordered_json;

std::vector<LabeledDoc> bootstrap_labels(const std::vector<SentimentScore>& scores,
                                         const std::vector<TokenList>& tokens) {
  if (scores.size() != tokens.size()) {
    throw DataError("bootstrap: " + std::to_string(scores.size()) + " scores but " +
                    std::to_string(tokens.size()) + " token lists");
  }
  std::vector<LabeledDoc> out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].doc_id != tokens[i].doc_id) {
      throw DataError("bootstrap: doc_id mismatch at position " + std::to_string(i) + " ('" +
                      scores[i].doc_id + "' vs '" + tokens[i].doc_id + "')");
    }
    if (scores[i].score > 0) {
      out.push_back({tokens[i], "positive"});
    } else if (scores[i].score < 0) {
      out.push_back({tokens[i], "negative"});
    }
  }
  return out;
}

std::optional<Eigen::Index> NBModel::term_index(std::string_view term) const {
  auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), term);
  if (it == vocabulary.end() || *it != term) return std::nullopt;
  return static_cast<Eigen::Index>(it - vocabulary.begin());
}

NBModel train(const std::vector<LabeledDoc>& examples, std::vector<std::string> classes) {
  if (examples.empty()) throw DataError("cannot train on an empty training set");
  if (classes.empty()) {
    std::set<std::string> labels;
    for (const auto& ex : examples) labels.insert(ex.label);
    classes.assign(labels.begin(), labels.end());
  }
  std::map<std::string, Eigen::Index, std::less<>> class_index;
  for (const auto& c : classes) {
    if (!class_index.emplace(c, static_cast<Eigen::Index>(class_index.size())).second) {
      throw ConfigError("class '" + c + "' declared twice");
    }
  }

  std::set<std::string, std::less<>> terms;
  for (const auto& ex : examples) terms.insert(ex.tokens.tokens.begin(), ex.tokens.tokens.end());
  if (terms.empty()) throw DataError("training vocabulary is empty");

  NBModel model;
  model.classes = std::move(classes);
  model.vocabulary.assign(terms.begin(), terms.end());
  const Eigen::Index n_classes = model.num_classes();
  const Eigen::Index n_terms = model.vocabulary_size();

  Eigen::VectorX<std::int64_t> doc_counts = Eigen::VectorX<std::int64_t>::Zero(n_classes);
  Eigen::MatrixX<std::int64_t> term_counts = Eigen::MatrixX<std::int64_t>::Zero(n_terms, n_classes);
  for (const auto& ex : examples) {
    auto it = class_index.find(ex.label);
    if (it == class_index.end()) {
      throw DataError("training label '" + ex.label + "' is not a declared class");
    }
    const Eigen::Index c = it->second;
    ++doc_counts[c];
    for (const auto& token : ex.tokens.tokens) ++term_counts(*model.term_index(token), c);
  }
  for (Eigen::Index c = 0; c < n_classes; ++c) {
    if (doc_counts[c] == 0) {
      throw DataError("class '" + model.classes[static_cast<std::size_t>(c)] +
                      "' has no training documents");
    }
  }

  const double n_docs = static_cast<double>(examples.size());
  model.log_prior = doc_counts.cast<double>().unaryExpr([n_docs](double d) {
    return std::log(d / n_docs);
  });
  model.class_term_totals = term_counts.colwise().sum().transpose();
  const Eigen::RowVectorXd denominators =
      (model.class_term_totals.cast<double>().array() + static_cast<double>(n_terms))
          .matrix()
          .transpose();
  model.log_cond = ((term_counts.cast<double>().array() + 1.0).rowwise() /
                    denominators.array())
                       .log()
                       .matrix();
  return model;
}

Prediction predict(const NBModel& model, const TokenList& tokens) {
  Prediction out;
  out.doc_id = tokens.doc_id;
  out.log_posteriors = model.log_prior;
  for (const auto& token : tokens.tokens) {
    if (auto t = model.term_index(token)) out.log_posteriors += model.log_cond.row(*t).transpose();
  }
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < model.num_classes(); ++c) {
    // Scores within rounding noise of each other are ties; the earlier class wins.
    const double lead = out.log_posteriors[c] - out.log_posteriors[best];
    if (lead > kTieTolerance * std::max(1.0, std::abs(out.log_posteriors[best]))) best = c;
  }
  out.predicted = model.classes[static_cast<std::size_t>(best)];
  return out;
}

std::vector<Prediction> predict_all(const NBModel& model, const std::vector<TokenList>& docs) {
  std::vector<Prediction> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) out.push_back(predict(model, doc));
  return out;
}

void save_model(const NBModel& model, const std::filesystem::path& path) {
  ordered_json j;
  j["version"] = kModelFormatVersion;
  j["tie_break"] = "class-order";
  j["classes"] = model.classes;
  j["log_prior"] = std::vector<double>(model.log_prior.begin(), model.log_prior.end());
  j["vocabulary"] = model.vocabulary;
  ordered_json cond = ordered_json::array();
  for (Eigen::Index c = 0; c < model.num_classes(); ++c) {
    const Eigen::VectorXd column = model.log_cond.col(c);
    cond.push_back(std::vector<double>(column.begin(), column.end()));
  }
  j["log_cond"] = std::move(cond);
  j["class_term_totals"] =
      std::vector<std::int64_t>(model.class_term_totals.begin(), model.class_term_totals.end());

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << j.dump(1) << '\n';
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

namespace {

Eigen::VectorXd finite_vector(const ordered_json& j, std::size_t expected, const char* what) {
  if (!j.is_array() || j.size() != expected) {
    throw FormatError(std::string("model: '") + what + "' has the wrong shape");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(expected));
  for (std::size_t i = 0; i < expected; ++i) {
    if (!j[i].is_number()) throw FormatError(std::string("model: '") + what + "' holds a non-number");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    if (!std::isfinite(v[static_cast<Eigen::Index>(i)])) {
      throw FormatError(std::string("model: '") + what + "' holds a non-finite value");
    }
  }
  return v;
}

}  // namespace

NBModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();

  ordered_json j;
  try {
    j = ordered_json::parse(buffer.str());
  } catch (const ordered_json::parse_error& e) {
    throw FormatError("model '" + path.string() + "' is corrupt at byte " + std::to_string(e.byte));
  }
  try {
    if (!j.is_object()) throw FormatError("model: top level is not an object");
    if (!j.contains("version") || j.at("version") != kModelFormatVersion) {
      throw FormatError("model: unsupported version (expected " +
                        std::to_string(kModelFormatVersion) + ")");
    }
    NBModel model;
    model.classes = j.at("classes").get<std::vector<std::string>>();
    model.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
    if (model.classes.empty()) throw FormatError("model: no classes");
    if (model.vocabulary.empty()) throw FormatError("model: empty vocabulary");
    if (std::adjacent_find(model.vocabulary.begin(), model.vocabulary.end(),
                           std::greater_equal<>()) != model.vocabulary.end()) {
      throw FormatError("model: vocabulary is not strictly sorted");
    }
    const std::size_t n_classes = model.classes.size();
    const std::size_t n_terms = model.vocabulary.size();
    model.log_prior = finite_vector(j.at("log_prior"), n_classes, "log_prior");

    const ordered_json& cond = j.at("log_cond");
    if (!cond.is_array() || cond.size() != n_classes) {
      throw FormatError("model: 'log_cond' has the wrong shape");
    }
    model.log_cond.resize(static_cast<Eigen::Index>(n_terms), static_cast<Eigen::Index>(n_classes));
    for (std::size_t c = 0; c < n_classes; ++c) {
      model.log_cond.col(static_cast<Eigen::Index>(c)) = finite_vector(cond[c], n_terms, "log_cond");
    }
    const auto totals = j.at("class_term_totals").get<std::vector<std::int64_t>>();
    if (totals.size() != n_classes) throw FormatError("model: 'class_term_totals' has the wrong shape");
    model.class_term_totals = Eigen::Map<const Eigen::VectorX<std::int64_t>>(
        totals.data(), static_cast<Eigen::Index>(totals.size()));
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("model '" + path.string() + "': " + e.what());
  }
}

void write_predictions_csv(const std::filesystem::path& path, const NBModel& model,
                           const std::vector<Prediction>& predictions) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "doc_id,predicted";
  for (const auto& c : model.classes) out << ',' << csv::field("log_posterior_" + c);
  out << '\n';
  for (const auto& p : predictions) {
    out << csv::field(p.doc_id) << ',' << csv::field(p.predicted);
    for (Eigen::Index c = 0; c < p.log_posteriors.size(); ++c) {
      out << ',' << csv::number(p.log_posteriors[c]);
    }
    out << '\n';
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_labeled_jsonl(const std::filesystem::path& path, const std::vector<LabeledDoc>& docs) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  for (const auto& doc : docs) {
    ordered_json j;
    j["id"] = doc.doc_id();
    j["label"] = doc.label;
    j["tokens"] = doc.tokens.tokens;
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::vector<LabeledDoc> read_labeled_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::vector<LabeledDoc> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = ordered_json::parse(line);
      LabeledDoc doc;
      doc.tokens.doc_id = j.at("id").get<std::string>();
      doc.tokens.tokens = j.at("tokens").get<std::vector<std::string>>();
      doc.label = j.at("label").get<std::string>();
      docs.push_back(std::move(doc));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

}  // namespace sentilens
