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
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "sentilens/collector.hpp"
#include "sentilens/corpus.hpp"
#include "sentilens/errors.hpp"
#include "sentilens/lexicon.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace sentilens;
using sentilens::testing::uniform;

namespace {

const fs::path kFixtures = SENTILENS_FIXTURE_DIR;
const fs::path kData = SENTILENS_DATA_DIR;

LabeledDoc ex(const std::string& id, std::vector<std::string> tokens, const std::string& label) {
  return {{id, std::move(tokens)}, label};
}

NBModel toy() {
  return train({ex("a", {"good", "good"}, "positive"), ex("b", {"bad"}, "negative")},
               {"negative", "positive"});
}

double cond(const NBModel& m, const std::string& term, Eigen::Index c) {
  return std::exp(m.log_cond(*m.term_index(term), c));
}

std::vector<LabeledDoc> random_training(std::mt19937_64& rng, std::vector<std::string>& classes) {
  classes.clear();
  const std::size_t n_classes = uniform(rng, 2, 3);
  for (std::size_t c = 0; c < n_classes; ++c) classes.push_back("c" + std::to_string(c));
  const std::size_t n_terms = uniform(rng, 1, 5);
  std::vector<LabeledDoc> docs;
  for (std::size_t d = 0, n = uniform(rng, n_classes, 6); d < n; ++d) {
    LabeledDoc doc{{"d" + std::to_string(d), {}},
                   classes[d < n_classes ? d : uniform(rng, 0, n_classes - 1)]};
    for (std::size_t k = uniform(rng, 1, 4); k > 0; --k) {
      doc.tokens.tokens.push_back(sentilens::testing::word(uniform(rng, 0, n_terms - 1)));
    }
    docs.push_back(doc);
  }
  return docs;
}

std::vector<TokenList> fixture_tokens(const std::string& name) {
  std::vector<Document> docs;
  for (const auto& r : ingest_file(kFixtures / name, IngestFormat::kJsonLines, true).records) {
    docs.push_back(parse_record(r, identity_field_map()));
  }
  return tokenize_corpus(build_corpus(std::move(docs)), PreprocessOptions{});
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / "sentilens-classifier-test";
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("toy model") {
  const NBModel m = toy();
  CHECK(m.vocabulary == std::vector<std::string>{"bad", "good"});
  CHECK(cond(m, "good", 1) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(cond(m, "bad", 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(cond(m, "good", 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(cond(m, "bad", 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(std::exp(m.log_prior[0]) == doctest::Approx(0.5));
  CHECK(std::exp(m.log_prior[1]) == doctest::Approx(0.5));
  CHECK(m.class_term_totals == Eigen::Vector<std::int64_t, 2>(1, 2));

  const Prediction good = predict(m, {"q", {"good"}});
  CHECK(good.predicted == "positive");
  CHECK(std::exp(good.log_posteriors[1]) == doctest::Approx(0.375));
  CHECK(std::exp(good.log_posteriors[0]) == doctest::Approx(0.5 / 3.0));

  // Equal priors and no evidence: the first declared class wins.
  CHECK(predict(m, {"q", {}}).predicted == "negative");
  const Prediction unseen = predict(m, {"q", {"table", "chair"}});
  CHECK(unseen.predicted == "negative");
  CHECK(unseen.log_posteriors == predict(m, {"q", {}}).log_posteriors);
}

TEST_CASE("training errors") {
  CHECK_THROWS_AS(train({}), DataError);
  CHECK_THROWS_AS(train({ex("a", {"x"}, "positive")}, {"negative", "positive"}), DataError);
  CHECK_NOTHROW(train({ex("a", {"x"}, "positive")}, {"positive"}));
  CHECK_NOTHROW(train({ex("a", {"x"}, "positive")}));
  CHECK_THROWS_AS(train({ex("a", {"x"}, "neutral")}, {"negative", "positive"}), DataError);
  CHECK_THROWS_AS(train({ex("a", {}, "positive")}), DataError);
  try {
    train({ex("a", {"x"}, "positive")}, {"negative", "positive"});
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("negative") != std::string::npos);
  }
}

TEST_CASE("model invariants on random instances") {
  std::mt19937_64 rng(31);
  std::vector<std::string> classes;
  for (int trial = 0; trial < 200; ++trial) {
    auto docs = random_training(rng, classes);
    const NBModel m = train(docs, classes);

    for (Eigen::Index c = 0; c < m.num_classes(); ++c) {
      CHECK(m.log_cond.col(c).array().exp().sum() == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(m.log_cond.allFinite());
    CHECK(m.log_prior.array().exp().sum() == doctest::Approx(1.0).epsilon(1e-12));

    auto shuffled = docs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const NBModel p = train(shuffled, classes);
    CHECK(p.vocabulary == m.vocabulary);
    CHECK(p.log_prior == m.log_prior);
    CHECK(p.log_cond == m.log_cond);

    auto doubled = docs;
    doubled.insert(doubled.end(), docs.begin(), docs.end());
    const NBModel d = train(doubled, classes);
    for (Eigen::Index c = 0; c < m.num_classes(); ++c) {
      CHECK(d.log_prior[c] == doctest::Approx(m.log_prior[c]).epsilon(1e-15));
    }
    CHECK(d.class_term_totals == 2 * m.class_term_totals);
  }
}

TEST_CASE("predict agrees with brute-force probabilities") {
  std::mt19937_64 rng(32);
  std::vector<std::string> classes;
  for (int trial = 0; trial < 300; ++trial) {
    const auto docs = random_training(rng, classes);
    const NBModel m = train(docs, classes);
    std::vector<std::string> query;
    for (std::size_t k = uniform(rng, 0, 6); k > 0; --k) {
      query.push_back(sentilens::testing::word(uniform(rng, 0, 5)));
    }
    const auto oracle = sentilens::testing::naive_bayes_oracle(docs, classes, query);
    const Prediction p = predict(m, {"q", query});
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const double expected = std::log(oracle.joint[c].value());
      CHECK(std::abs(p.log_posteriors[static_cast<Eigen::Index>(c)] - expected) <=
            1e-12 * std::max(1.0, std::abs(expected)));
    }
    CHECK(p.predicted == classes[oracle.argmax]);
  }
}

TEST_CASE("one more occurrence of a term favours the class that likes it most") {
  std::mt19937_64 rng(33);
  std::vector<std::string> classes;
  const auto normalized = [](const Eigen::VectorXd& lp, Eigen::Index c) {
    return std::exp(lp[c] - lp.maxCoeff()) / (lp.array() - lp.maxCoeff()).exp().sum();
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto docs = random_training(rng, classes);
    const NBModel m = train(docs, classes);
    TokenList doc{"q", {}};
    for (std::size_t k = uniform(rng, 0, 5); k > 0; --k) {
      doc.tokens.push_back(m.vocabulary[uniform(rng, 0, m.vocabulary.size() - 1)]);
    }
    const std::size_t t = uniform(rng, 0, m.vocabulary.size() - 1);
    Eigen::Index best = 0;
    m.log_cond.row(static_cast<Eigen::Index>(t)).maxCoeff(&best);
    const double before = normalized(predict(m, doc).log_posteriors, best);
    doc.tokens.push_back(m.vocabulary[t]);
    const double after = normalized(predict(m, doc).log_posteriors, best);
    CHECK(after >= before - 1e-12);
  }
}

TEST_CASE("bootstrap_labels") {
  const std::vector<TokenList> tokens = {{"a", {"x"}}, {"b", {"y"}}, {"c", {"z"}}};
  const std::vector<SentimentScore> scores = {{"a", 2, SentimentLabel::kPositive},
                                              {"b", 0, SentimentLabel::kNeutral},
                                              {"c", -1, SentimentLabel::kNegative}};
  const auto labeled = bootstrap_labels(scores, tokens);
  REQUIRE(labeled.size() == 2);
  CHECK(labeled[0].label == "positive");
  CHECK(labeled[0].doc_id() == "a");
  CHECK(labeled[1].label == "negative");
  CHECK(labeled[1].doc_id() == "c");

  std::vector<SentimentScore> zeros = scores;
  for (auto& s : zeros) s.score = 0;
  CHECK(bootstrap_labels(zeros, tokens).empty());

  std::vector<SentimentScore> misaligned = scores;
  std::swap(misaligned[0], misaligned[1]);
  CHECK_THROWS_AS(bootstrap_labels(misaligned, tokens), DataError);
  CHECK_THROWS_AS(bootstrap_labels({scores[0]}, tokens), DataError);
}

TEST_CASE("bootstrap on the 100-document fixture") {
  const auto tokens = fixture_tokens("bootstrap100.jsonl");
  REQUIRE(tokens.size() == 100);
  const auto load = [](const std::string& name, LexiconSource source) {
    return load_lexicon(kData / "lexicon" / (name + "_positive.txt"),
                        kData / "lexicon" / (name + "_negative.txt"), source);
  };
  const Lexicon lexicon = normalize_lexicon(
      merge_lexicons(load("generic", LexiconSource::kGeneric),
                     {load("domain", LexiconSource::kDomain), load("slang", LexiconSource::kSlang)}),
      PreprocessOptions{});
  const auto scores = score_corpus(tokens, lexicon);
  std::vector<std::string> positive, negative;
  for (const auto& [term, entry] : lexicon.entries) {
    (entry.polarity > 0 ? positive : negative).push_back(term);
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    CHECK(scores[i].score ==
          sentilens::testing::lexicon_score_oracle(tokens[i].tokens, positive, negative));
  }
  const auto labeled = bootstrap_labels(scores, tokens);
  CHECK(labeled.size() == 75);
  CHECK(std::count_if(labeled.begin(), labeled.end(),
                      [](const LabeledDoc& d) { return d.label == "positive"; }) == 40);
  CHECK(std::count_if(labeled.begin(), labeled.end(),
                      [](const LabeledDoc& d) { return d.label == "negative"; }) == 35);
}

TEST_CASE("model persistence") {
  TempDir tmp;
  const fs::path path = tmp.path / "model.json";

  SUBCASE("toy round-trip") {
    const NBModel m = toy();
    save_model(m, path);
    const NBModel r = load_model(path);
    CHECK(r.classes == m.classes);
    CHECK(r.vocabulary == m.vocabulary);
    CHECK(r.log_prior == m.log_prior);
    CHECK(r.log_cond == m.log_cond);
    CHECK(r.class_term_totals == m.class_term_totals);
  }
  SUBCASE("predictions survive a round-trip") {
    const auto tokens = fixture_tokens("bootstrap100.jsonl");
    std::vector<LabeledDoc> training;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      training.push_back({tokens[i], i % 3 == 0 ? "negative" : "positive"});
    }
    const NBModel m = train(training, {"negative", "positive"});
    save_model(m, path);
    const NBModel r = load_model(path);
    const auto before = predict_all(m, tokens);
    const auto after = predict_all(r, tokens);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      CHECK(before[i].predicted == after[i].predicted);
      CHECK(before[i].log_posteriors == after[i].log_posteriors);
    }
  }
  SUBCASE("truncated file") {
    save_model(toy(), path);
    const auto size = fs::file_size(path);
    fs::resize_file(path, size / 2);
    CHECK_THROWS_AS(load_model(path), FormatError);
  }
  SUBCASE("version mismatch") {
    save_model(toy(), path);
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    const auto at = text.find("\"version\": 1");
    REQUIRE(at != std::string::npos);
    text.replace(at, 12, "\"version\": 99");
    std::ofstream(path) << text;
    CHECK_THROWS_AS(load_model(path), FormatError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_model(tmp.path / "absent.json"), IoError);
  }
}

TEST_CASE("labeled jsonl round-trip") {
  TempDir tmp;
  const std::vector<LabeledDoc> docs = {ex("a", {"good", "cream"}, "positive"),
                                        ex("b", {}, "negative")};
  write_labeled_jsonl(tmp.path / "labeled.jsonl", docs);
  CHECK(read_labeled_jsonl(tmp.path / "labeled.jsonl") == docs);
}
