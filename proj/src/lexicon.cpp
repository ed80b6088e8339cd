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

#include "sentilens/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "sentilens/csv.hpp"
#include "sentilens/errors.hpp"

namespace sentilens {

std::string_view to_string(LexiconSource source) {
  switch (source) {
    case LexiconSource::kGeneric:
      return "generic";
    case LexiconSource::kDomain:
      return "domain";
    case LexiconSource::kSlang:
      return "slang";
  }
  return "generic";
}

LexiconSource parse_lexicon_source(std::string_view text) {
  if (text == "generic") return LexiconSource::kGeneric;
  if (text == "domain") return LexiconSource::kDomain;
  if (text == "slang") return LexiconSource::kSlang;
  throw ConfigError("unknown lexicon source '" + std::string(text) + "'");
}

int Lexicon::polarity(std::string_view term) const {
  auto it = entries.find(term);
  return it == entries.end() ? 0 : it->second.polarity;
}

namespace {

std::set<std::string> read_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read word list '" + path.string() + "'");
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    // ';' headers appear in the widely distributed opinion-lexicon files.
    if (first == std::string::npos || line[first] == '#' || line[first] == ';') continue;
    const auto last = line.find_first_of(" \t\r", first);
    std::string word = line.substr(first, last == std::string::npos ? last : last - first);
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    words.insert(std::move(word));
  }
  return words;
}

}  // namespace

Lexicon load_lexicon(const std::filesystem::path& positive_path,
                     const std::filesystem::path& negative_path, LexiconSource source) {
  const auto positive = read_word_list(positive_path);
  const auto negative = read_word_list(negative_path);
  Lexicon lexicon;
  for (const auto& word : positive) lexicon.entries.emplace(word, LexiconEntry{+1, source});
  for (const auto& word : negative) {
    if (positive.count(word)) {
      throw DataError("word '" + word + "' is listed as both positive and negative in " +
                      std::string(to_string(source)) + " lexicon");
    }
    lexicon.entries.emplace(word, LexiconEntry{-1, source});
  }
  return lexicon;
}

Lexicon merge_lexicons(const Lexicon& base, const std::vector<Lexicon>& overlays,
                       MergeReport* report) {
  Lexicon merged = base;
  std::size_t overrides = 0;
  for (const auto& overlay : overlays) {
    for (const auto& [term, entry] : overlay.entries) {
      auto [it, inserted] = merged.entries.insert_or_assign(term, entry);
      if (!inserted) ++overrides;
    }
  }
  if (report) report->overrides = overrides;
  return merged;
}

Lexicon normalize_lexicon(const Lexicon& lexicon, const PreprocessOptions& options,
                          NormalizeReport* report) {
  Lexicon out;
  std::set<std::string> conflicted;
  NormalizeReport counts;
  for (const auto& [term, entry] : lexicon.entries) {
    auto normalized = normalize_term(term, options);
    if (!normalized) {
      ++counts.dropped;
      continue;
    }
    if (conflicted.count(*normalized)) continue;
    auto [it, inserted] = out.entries.emplace(*normalized, entry);
    if (!inserted && it->second.polarity != entry.polarity) {
      conflicted.insert(*normalized);
      out.entries.erase(it);
    }
  }
  counts.conflicts = conflicted.size();
  if (report) *report = counts;
  return out;
}

void write_lexicon_tsv(const std::filesystem::path& path, const Lexicon& lexicon) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "term\tpolarity\tprovenance\n";
  for (const auto& [term, entry] : lexicon.entries) {
    out << term << '\t' << (entry.polarity > 0 ? "+1" : "-1") << '\t' << to_string(entry.source)
        << '\n';
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string_view to_string(SentimentLabel label) {
  switch (label) {
    case SentimentLabel::kNegative:
      return "negative";
    case SentimentLabel::kNeutral:
      return "neutral";
    case SentimentLabel::kPositive:
      return "positive";
  }
  return "neutral";
}

SentimentLabel parse_sentiment_label(std::string_view text) {
  if (text == "negative") return SentimentLabel::kNegative;
  if (text == "neutral") return SentimentLabel::kNeutral;
  if (text == "positive") return SentimentLabel::kPositive;
  throw DataError("unknown sentiment label '" + std::string(text) + "'");
}

SentimentLabel label_for(std::int64_t score) {
  if (score > 0) return SentimentLabel::kPositive;
  if (score < 0) return SentimentLabel::kNegative;
  return SentimentLabel::kNeutral;
}

SentimentScore score(const TokenList& tokens, const Lexicon& lexicon) {
  std::int64_t total = 0;
  for (const auto& token : tokens.tokens) total += lexicon.polarity(token);
  return {tokens.doc_id, total, label_for(total)};
}

std::vector<SentimentScore> score_corpus(const std::vector<TokenList>& corpus_tokens,
                                         const Lexicon& lexicon) {
  std::vector<SentimentScore> out;
  out.reserve(corpus_tokens.size());
  for (const auto& tokens : corpus_tokens) out.push_back(score(tokens, lexicon));
  return out;
}

void write_scores_csv(const std::filesystem::path& path, const std::vector<SentimentScore>& scores) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "doc_id,score,label\n";
  for (const auto& s : scores) {
    out << csv::field(s.doc_id) << ',' << s.score << ',' << to_string(s.label) << '\n';
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::vector<SentimentScore> read_scores_csv(const std::filesystem::path& path) {
  const auto rows = csv::read(path);
  if (rows.empty() || rows.front() != std::vector<std::string>{"doc_id", "score", "label"}) {
    throw DataError(path.string() + ": expected header 'doc_id,score,label'");
  }
  std::vector<SentimentScore> scores;
  scores.reserve(rows.size() - 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 3) throw DataError(path.string() + ": bad row " + std::to_string(i + 1));
    SentimentScore s;
    s.doc_id = row[0];
    try {
      s.score = std::stoll(row[1]);
    } catch (const std::exception&) {
      throw DataError(path.string() + ": bad score '" + row[1] + "'");
    }
    s.label = parse_sentiment_label(row[2]);
    if (s.label != label_for(s.score)) {
      throw DataError(path.string() + ": label does not match score for '" + s.doc_id + "'");
    }
    scores.push_back(std::move(s));
  }
  return scores;
}

}  // namespace sentilens
