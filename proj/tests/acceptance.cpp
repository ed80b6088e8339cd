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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sentilens/classifier.hpp"
#include "sentilens/collector.hpp"
#include "sentilens/corpus.hpp"
#include "sentilens/errors.hpp"
#include "sentilens/evaluate.hpp"
#include "sentilens/lexicon.hpp"
#include "sentilens/pipeline.hpp"
#include "sentilens/preprocess.hpp"
#include "support/fixture_server.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace sentilens;
using sentilens::testing::uniform;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool relative_near(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sentilens-acceptance-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome confusion_arithmetic() {
  Outcome out;
  Eigen::MatrixX<std::int64_t> counts(2, 2);
  counts << 531, 180, 300, 1847;
  const ConfusionMatrix m = confusion_from_counts({"negative", "positive"}, counts);
  const Eigen::MatrixXd f = m.column_fractions();
  out.require(near(f(0, 0), 0.639, 0.001), "fraction(neg,neg) = " + std::to_string(f(0, 0)));
  out.require(near(f(0, 1), 0.089, 0.001), "fraction(neg,pos) = " + std::to_string(f(0, 1)));
  out.require(near(f(1, 0), 0.361, 0.001), "fraction(pos,neg) = " + std::to_string(f(1, 0)));
  out.require(near(f(1, 1), 0.911, 0.001), "fraction(pos,pos) = " + std::to_string(f(1, 1)));
  const double acc = accuracy(m);
  out.require(near(acc, 0.8320, 0.0005), "accuracy = " + std::to_string(acc));
  out.detail = out.pass ? "accuracy " + std::to_string(acc) : out.detail;
  return out;
}

Outcome split_sizes() {
  Outcome out;
  const auto start = Clock::now();
  std::vector<LabeledDoc> docs(11431);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    docs[i].tokens.doc_id = "t" + std::to_string(i);
    docs[i].tokens.tokens = {"w"};
    docs[i].label = i % 3 ? "positive" : "negative";
  }
  const auto [train_set, test_set] = split(docs, SplitSpec{});
  out.require(train_set.size() == 8573, "train size " + std::to_string(train_set.size()));
  out.require(test_set.size() == 2858, "test size " + std::to_string(test_set.size()));
  const double secs = seconds_since(start);
  out.require(secs < 1.0, "took " + std::to_string(secs) + " s");
  if (out.pass) out.detail = "8573/2858";
  return out;
}

Outcome ratio_summaries() {
  Outcome out;
  const auto check = [&](const std::vector<std::string>& groups,
                         const std::vector<std::array<std::int64_t, 3>>& counts,
                         const std::vector<std::string>& expected) {
    const auto ratios = ratio_summary(distribution_from_counts(groups, counts));
    for (std::size_t i = 0; i < expected.size(); ++i) {
      out.require(ratios[i].to_string() == expected[i],
                  groups[i] + " ratio " + ratios[i].to_string() + ", expected " + expected[i]);
    }
  };
  check({"Brand X", "Brand Y", "Brand Z"}, {{3, 127, 524}, {282, 742, 723}, {85, 408, 464}},
        {"1:42:175", "1:3:3", "1:5:5"});
  check({"Cream", "Deodorant", "Soap"}, {{5, 11, 11}, {21, 23, 46}, {11, 26, 56}},
        {"1:2:2", "1:1:2", "1:2:5"});
  if (out.pass) out.detail = "brands and products";
  return out;
}

Outcome tfidf_oracle() {
  Outcome out;
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  std::size_t cells = 0;
  for (int trial = 0; trial < 20 && out.pass; ++trial) {
    const auto docs = sentilens::testing::random_corpus(rng, 10, 30);
    const auto expected = sentilens::testing::tfidf_oracle(docs);
    const DocTermMatrix m = build_matrix(docs);
    const auto& vocab = m.vocabulary;
    for (const auto& [key, weight] : expected) {
      const auto row = std::find(m.rows.begin(), m.rows.end(), key.first) - m.rows.begin();
      const auto col = vocab.find(key.second);
      out.require(col.has_value(), "term missing: " + key.second);
      if (!col) break;
      const double got = m.weights.coeff(row, *col);
      if (weight == 0.0) {
        out.require(got == 0.0, "ubiquitous term " + key.second + " has weight " + std::to_string(got));
      } else {
        out.require(relative_near(got, weight, 1e-12),
                    "weight(" + key.first + "," + key.second + ") = " + std::to_string(got) +
                        ", oracle " + std::to_string(weight));
      }
      ++cells;
    }
    // Every stored cell must be one the oracle knows about, with a non-zero weight.
    for (Eigen::Index r = 0; r < m.weights.outerSize(); ++r) {
      for (WeightMatrix::InnerIterator it(m.weights, r); it; ++it) {
        out.require(it.value() != 0.0, "stored zero weight");
        out.require(expected.count({m.rows[static_cast<std::size_t>(r)],
                                    vocab.terms[static_cast<std::size_t>(it.col())]}) == 1,
                    "stored cell absent from oracle");
      }
    }
  }
  const double secs = seconds_since(start);
  out.require(secs < 5.0, "took " + std::to_string(secs) + " s");
  if (out.pass) out.detail = std::to_string(cells) + " cells over 20 corpora";
  return out;
}

Outcome naive_bayes_oracle() {
  Outcome out;
  const auto start = Clock::now();

  // Pinned toy example.
  const std::vector<LabeledDoc> toy = {
      {{"a", {"good", "good"}}, "positive"},
      {{"b", {"bad"}}, "negative"},
  };
  const NBModel toy_model = train(toy, {"negative", "positive"});
  const auto p = [&](const char* term, Eigen::Index c) {
    return std::exp(toy_model.log_cond(*toy_model.term_index(term), c));
  };
  out.require(near(p("good", 1), 0.75, 1e-12), "P(good|pos)");
  out.require(near(p("bad", 1), 0.25, 1e-12), "P(bad|pos)");
  out.require(near(p("good", 0), 1.0 / 3.0, 1e-12), "P(good|neg)");
  out.require(near(p("bad", 0), 2.0 / 3.0, 1e-12), "P(bad|neg)");
  out.require(near(std::exp(toy_model.log_prior[0]), 0.5, 1e-12), "prior");
  out.require(predict(toy_model, {"q", {"good"}}).predicted == "positive", "predict [good]");

  std::mt19937_64 rng(2);
  int ties = 0;
  for (int trial = 0; trial < 50 && out.pass; ++trial) {
    const std::size_t n_classes = uniform(rng, 2, 3);
    const std::size_t n_terms = uniform(rng, 1, 5);
    std::vector<std::string> classes;
    for (std::size_t c = 0; c < n_classes; ++c) classes.push_back("c" + std::to_string(c));
    const std::size_t n_docs = uniform(rng, n_classes, 6);
    std::vector<LabeledDoc> training(n_docs);
    for (std::size_t d = 0; d < n_docs; ++d) {
      training[d].tokens.doc_id = "d" + std::to_string(d);
      // The first docs cover every class so none is empty.
      training[d].label = classes[d < n_classes ? d : uniform(rng, 0, n_classes - 1)];
      const std::size_t len = uniform(rng, 1, 4);
      for (std::size_t k = 0; k < len; ++k) {
        training[d].tokens.tokens.push_back(sentilens::testing::word(uniform(rng, 0, n_terms - 1)));
      }
    }
    const NBModel model = train(training, classes);
    for (int q = 0; q < 4; ++q) {
      std::vector<std::string> query;
      const std::size_t len = uniform(rng, 0, 6);
      // One extra id past the vocabulary exercises unseen tokens.
      for (std::size_t k = 0; k < len; ++k) query.push_back(sentilens::testing::word(uniform(rng, 0, n_terms)));
      const auto oracle = sentilens::testing::naive_bayes_oracle(training, classes, query);
      const Prediction pred = predict(model, {"q", query});
      for (std::size_t c = 0; c < n_classes; ++c) {
        const double expected = std::log(oracle.joint[c].value());
        const double got = pred.log_posteriors[static_cast<Eigen::Index>(c)];
        out.require(near(got, expected, 1e-12 * std::max(1.0, std::abs(expected))),
                    "log posterior " + std::to_string(got) + " vs " + std::to_string(expected));
      }
      out.require(pred.predicted == classes[oracle.argmax],
                  "argmax " + pred.predicted + " vs " + classes[oracle.argmax]);
      for (std::size_t c = 0; c < n_classes; ++c) {
        const auto& a = oracle.joint[c];
        const auto& b = oracle.joint[oracle.argmax];
        if (c != oracle.argmax && a.num * b.den == b.num * a.den) ++ties;
      }
    }
  }
  const double secs = seconds_since(start);
  out.require(secs < 5.0, "took " + std::to_string(secs) + " s");
  if (out.pass) out.detail = "50 instances, " + std::to_string(ties) + " exact ties";
  return out;
}

Outcome lexicon_properties() {
  Outcome out;
  const auto start = Clock::now();
  std::mt19937_64 rng(3);
  std::vector<std::string> positive, negative, neutral;
  for (int i = 0; i < 15; ++i) positive.push_back("pos" + std::to_string(i));
  for (int i = 0; i < 15; ++i) negative.push_back("neg" + std::to_string(i));
  for (int i = 0; i < 20; ++i) neutral.push_back("neu" + std::to_string(i));
  Lexicon lexicon, flipped;
  for (const auto& w : positive) {
    lexicon.entries[w] = {+1, LexiconSource::kGeneric};
    flipped.entries[w] = {-1, LexiconSource::kGeneric};
  }
  for (const auto& w : negative) {
    lexicon.entries[w] = {-1, LexiconSource::kGeneric};
    flipped.entries[w] = {+1, LexiconSource::kGeneric};
  }
  std::vector<std::string> all = positive;
  all.insert(all.end(), negative.begin(), negative.end());
  all.insert(all.end(), neutral.begin(), neutral.end());

  const auto random_doc = [&](const std::string& id) {
    TokenList doc{id, {}};
    const std::size_t len = uniform(rng, 0, 25);
    for (std::size_t k = 0; k < len; ++k) doc.tokens.push_back(all[uniform(rng, 0, all.size() - 1)]);
    return doc;
  };
  for (int i = 0; i < 1000 && out.pass; ++i) {
    const TokenList a = random_doc("a");
    const TokenList b = random_doc("b");
    const std::int64_t s = score(a, lexicon).score;
    out.require(s == sentilens::testing::lexicon_score_oracle(a.tokens, positive, negative),
                "score differs from brute force on doc " + std::to_string(i));
    TokenList ab{"ab", a.tokens};
    ab.tokens.insert(ab.tokens.end(), b.tokens.begin(), b.tokens.end());
    out.require(score(ab, lexicon).score == s + score(b, lexicon).score, "additivity");
    out.require(score(a, flipped).score == -s, "polarity flip");
    out.require(score(a, lexicon).label == label_for(s), "label is the sign");
  }
  const double secs = seconds_since(start);
  out.require(secs < 5.0, "took " + std::to_string(secs) + " s");
  if (out.pass) out.detail = "1000 documents";
  return out;
}

PipelineConfig fixture_config(const fs::path& out_dir) {
  PipelineConfig config =
      load_pipeline_config(fs::path(SENTILENS_FIXTURE_DIR) / "pipeline.json");
  config.output_dir = out_dir;
  return config;
}

Outcome determinism() {
  Outcome out;
  std::vector<fs::path> dirs;
  double slowest = 0;
  for (const char* name : {"run-a", "run-b"}) {
    const fs::path dir = scratch_dir(name);
    const auto start = Clock::now();
    run_pipeline(fixture_config(dir), all_stages());
    slowest = std::max(slowest, seconds_since(start));
    dirs.push_back(dir);
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dirs[0])) {
    const fs::path other = dirs[1] / entry.path().filename();
    out.require(fs::exists(other), "missing in second run: " + entry.path().filename().string());
    out.require(slurp(entry.path()) == slurp(other),
                "differs: " + entry.path().filename().string());
    ++files;
  }
  out.require(files == static_cast<std::size_t>(std::distance(fs::directory_iterator(dirs[1]),
                                                              fs::directory_iterator())),
              "file sets differ");
  const std::string corpus = slurp(dirs[0] / "corpus.jsonl");
  out.require(std::count(corpus.begin(), corpus.end(), '\n') == 200, "fixture corpus is not N=200");
  out.require(slowest < 5.0, "slowest run " + std::to_string(slowest) + " s");
  if (out.pass) {
    out.detail = std::to_string(files) + " identical artifacts, slowest run " +
                 std::to_string(slowest) + " s";
  }
  for (const auto& d : dirs) fs::remove_all(d);
  return out;
}

Outcome model_persistence() {
  Outcome out;
  const PipelineConfig config = fixture_config(scratch_dir("persist"));
  run_pipeline(config, {Stage::kCollect});
  const auto tokens = tokenize_corpus(read_corpus_jsonl(config.output_dir / "corpus.jsonl"),
                                      config.preprocess);

  Lexicon generic = load_lexicon(config.generic_lexicon->positive,
                                 config.generic_lexicon->negative, LexiconSource::kGeneric);
  const auto labeled =
      bootstrap_labels(score_corpus(tokens, normalize_lexicon(generic, config.preprocess)), tokens);
  const NBModel model = train(split(labeled, config.split).first, config.classes);
  const fs::path path = config.output_dir / "model.json";
  save_model(model, path);
  const NBModel loaded = load_model(path);

  const auto before = predict_all(model, tokens);
  const auto after = predict_all(loaded, tokens);
  out.require(before.size() == tokens.size() && after.size() == tokens.size(), "prediction count");
  for (std::size_t i = 0; i < before.size() && out.pass; ++i) {
    out.require(before[i].predicted == after[i].predicted, "label differs on " + before[i].doc_id);
    out.require(before[i].log_posteriors == after[i].log_posteriors,
                "log posteriors differ on " + before[i].doc_id);
  }
  if (out.pass) out.detail = std::to_string(before.size()) + " documents, bit-identical";
  fs::remove_all(config.output_dir);
  return out;
}

Outcome collector_contract() {
  Outcome out;
  sentilens::testing::FixtureServer server(/*rate_limited_hits=*/1);
  std::vector<std::chrono::milliseconds> waits;
  CollectHooks hooks;
  hooks.sleep = [&](std::chrono::milliseconds d) { waits.push_back(d); };

  EndpointConfig config;
  config.base_url = server.url("/search");
  config.query = "soap";
  config.page_size = 2;
  config.cursor_field = "meta.next_cursor";

  const auto ids = [](const std::vector<RawRecord>& records) {
    std::vector<std::string> out;
    for (const auto& r : records) out.push_back(parse_record(r, identity_field_map()).id);
    return out;
  };
  const std::vector<std::string> all = {"r1", "r2", "r3", "r4", "r5", "r6"};

  const auto first = collect(config, hooks);
  out.require(ids(first) == all, "pagination did not yield r1..r6 in order");
  const auto queries = server.queries();
  out.require(queries.size() == 3, "expected 3 page requests, saw " + std::to_string(queries.size()));
  if (queries.size() == 3) {
    out.require(queries[0].count("cursor") == 0, "first request carried a cursor");
    out.require(queries[1].find("cursor")->second == "p2", "second cursor");
    out.require(queries[2].find("cursor")->second == "p3", "third cursor");
  }

  const auto second = collect(config, hooks);
  out.require(second.size() == first.size(), "repeat run size");
  for (std::size_t i = 0; i < std::min(first.size(), second.size()); ++i) {
    out.require(first[i].payload == second[i].payload, "repeat run payload differs");
  }

  config.max_records = 3;
  const int before = server.request_count();
  const auto truncated = collect(config, hooks);
  out.require(ids(truncated) == std::vector<std::string>(all.begin(), all.begin() + 3),
              "max_records=3 truncation");
  out.require(server.request_count() - before == 2, "truncation fetched extra pages");

  config.max_records = 1000;
  config.base_url = server.url("/limited");
  waits.clear();
  const auto limited = collect(config, hooks);
  out.require(ids(limited) == all, "429 path lost records");
  out.require(waits.size() == 1 && waits[0] == std::chrono::milliseconds(1000),
              "429 did not wait for Retry-After (1 s)");

  config.retry.max_attempts = 1;
  sentilens::testing::FixtureServer strict_server(/*rate_limited_hits=*/5);
  config.base_url = strict_server.url("/limited");
  bool raised = false;
  try {
    collect(config, hooks);
  } catch (const RateLimitError& e) {
    raised = e.attempts() == 1 && e.retry_after() == std::chrono::seconds(1);
  }
  out.require(raised, "exhausted 429 retries did not raise RateLimitError");
  if (out.pass) out.detail = "pagination, truncation, determinism, Retry-After";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 confusion-matrix arithmetic", confusion_arithmetic},
      {"AC2 split sizes", split_sizes},
      {"AC3 ratio summaries", ratio_summaries},
      {"AC4 tf-idf oracle equivalence", tfidf_oracle},
      {"AC5 naive Bayes oracle equivalence", naive_bayes_oracle},
      {"AC6 lexicon scorer properties", lexicon_properties},
      {"AC7 end-to-end determinism", determinism},
      {"AC8 model persistence", model_persistence},
      {"AC9 collector contract", collector_contract},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome result;
    try {
      result = run();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", result.pass ? "PASS" : "FAIL", name.c_str(), result.detail.c_str());
    failures += result.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
