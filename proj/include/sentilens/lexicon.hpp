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

#ifndef SENTILENS_LEXICON_HPP
#define SENTILENS_LEXICON_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sentilens/preprocess.hpp"

namespace sentilens {

enum class LexiconSource { kGeneric, kDomain, kSlang };

std::string_view to_string(LexiconSource source);
LexiconSource parse_lexicon_source(std::string_view text);

struct LexiconEntry {
  int polarity = 0;  // +1 or -1
  LexiconSource source = LexiconSource::kGeneric;

  bool operator==(const LexiconEntry&) const = default;
};

/// Word -> polarity. Ordered so exports are stable.
struct Lexicon {
  std::map<std::string, LexiconEntry, std::less<>> entries;

  std::size_t size() const noexcept { return entries.size(); }
  /// +1, -1, or 0 for unknown words.
  int polarity(std::string_view term) const;
};

/// Reads two word lists. Lines starting with '#' or ';' are comments; every
/// other line contributes its first whitespace-separated field, lowercased, so
/// files produced by the candidate-term export load too. Throws DataError
/// naming the word if it appears in both files.
Lexicon load_lexicon(const std::filesystem::path& positive_path,
                     const std::filesystem::path& negative_path, LexiconSource source);

struct MergeReport {
  std::size_t overrides = 0;
};

/// Later overlays win over earlier ones and over the base.
Lexicon merge_lexicons(const Lexicon& base, const std::vector<Lexicon>& overlays,
                       MergeReport* report = nullptr);

struct NormalizeReport {
  std::size_t dropped = 0;    // entries tokenize would discard
  std::size_t conflicts = 0;  // stems claimed by both polarities, removed
};

/// Maps every entry through `normalize_term` so it matches scored tokens.
/// When several entries collapse onto one stem with opposite polarities the
/// stem is removed.
Lexicon normalize_lexicon(const Lexicon& lexicon, const PreprocessOptions& options,
                          NormalizeReport* report = nullptr);

/// Tab-separated `term, polarity, provenance`, header included.
void write_lexicon_tsv(const std::filesystem::path& path, const Lexicon& lexicon);

enum class SentimentLabel { kNegative, kNeutral, kPositive };

std::string_view to_string(SentimentLabel label);
SentimentLabel parse_sentiment_label(std::string_view text);
SentimentLabel label_for(std::int64_t score);

struct SentimentScore {
  std::string doc_id;
  std::int64_t score = 0;
  SentimentLabel label = SentimentLabel::kNeutral;

  bool operator==(const SentimentScore&) const = default;
};

/// Positive-word occurrences minus negative-word occurrences.
SentimentScore score(const TokenList& tokens, const Lexicon& lexicon);

std::vector<SentimentScore> score_corpus(const std::vector<TokenList>& corpus_tokens,
                                         const Lexicon& lexicon);

/// `doc_id,score,label`, header included.
void write_scores_csv(const std::filesystem::path& path, const std::vector<SentimentScore>& scores);
std::vector<SentimentScore> read_scores_csv(const std::filesystem::path& path);

}  // namespace sentilens

#endif  // SENTILENS_LEXICON_HPP
