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

#ifndef SENTILENS_PREPROCESS_HPP
#define SENTILENS_PREPROCESS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sentilens/corpus.hpp"

namespace sentilens {

enum class StemmerKind { kNone, kPorter };

StemmerKind parse_stemmer_kind(std::string_view text);

using StopWords = std::unordered_set<std::string>;

/// The bundled English list (same content as data/stopwords_en.txt).
const StopWords& default_stop_words();

/// One word per line; '#' starts a comment; blank lines ignored. Words are
/// lowercased.
StopWords load_stop_words(const std::filesystem::path& path);

struct PreprocessOptions {
  std::size_t min_word_len = 3;
  StopWords stop_words = default_stop_words();
  StemmerKind stemmer = StemmerKind::kPorter;
  bool remove_numbers = true;
  bool lowercase = true;
};

void validate(const PreprocessOptions& options);

struct TokenList {
  std::string doc_id;
  std::vector<std::string> tokens;

  std::size_t n_d() const noexcept { return tokens.size(); }
  bool operator==(const TokenList&) const = default;
};

/// Splits on non-alphanumeric bytes (bytes >= 0x80 count as letters), then
/// lowercases, drops digit-bearing tokens and stop words, stems, and finally
/// drops tokens shorter than `min_word_len` code points.
TokenList tokenize(std::string_view text, const PreprocessOptions& options);

/// Normalises a single lexicon entry the way `tokenize` would treat it as a
/// token. Returns nullopt when tokenize would drop it.
std::optional<std::string> normalize_term(std::string_view word,
                                          const PreprocessOptions& options);

std::vector<TokenList> tokenize_corpus(const Corpus& corpus, const PreprocessOptions& options);

/// Terms in lexicographic order with their document frequencies.
struct Vocabulary {
  std::vector<std::string> terms;
  Eigen::VectorX<std::int64_t> df;
  std::int64_t n_docs = 0;

  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(terms.size()); }
  std::optional<Eigen::Index> find(std::string_view term) const;
};

using TfMatrix = Eigen::SparseMatrix<std::int64_t, Eigen::RowMajor>;
using WeightMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Documents x terms. `tf` holds every raw count; `weights` holds
/// tf * log2(N / df) and stores no zero cells.
struct DocTermMatrix {
  std::vector<std::string> rows;
  Vocabulary vocabulary;
  TfMatrix tf;
  WeightMatrix weights;
};

/// log2(N / df) per vocabulary term.
Eigen::VectorXd inverse_document_frequency(const Vocabulary& vocabulary);

/// Throws DataError("empty vocabulary") when every token list is empty.
DocTermMatrix build_matrix(const std::vector<TokenList>& corpus_tokens);

/// Keeps terms whose sparsity (1 - df/N) is below `max_sparsity`; a term that
/// occurs in every document is always kept. Throws DataError when nothing
/// survives and ConfigError when `max_sparsity` is outside [0, 1).
DocTermMatrix prune_sparse(const DocTermMatrix& matrix, double max_sparsity = 0.99);

/// Terms by total tf, descending; ties in ascending term order.
std::vector<std::pair<std::string, std::int64_t>> frequent_terms(const DocTermMatrix& matrix,
                                                                 std::size_t top_k);

/// Triplets `doc_id,term,tf,weight` in row-major order, header included.
void write_matrix_csv(const std::filesystem::path& path, const DocTermMatrix& matrix);
/// `term,df`, header included.
void write_vocabulary_csv(const std::filesystem::path& path, const Vocabulary& vocabulary);
/// Reads the two files above back. Documents without any stored cell are not
/// recoverable, so `rows` and `n_docs` only cover documents with a triplet.
DocTermMatrix read_matrix_csv(const std::filesystem::path& matrix_path,
                              const std::filesystem::path& vocabulary_path);

}  // namespace sentilens

#endif  // SENTILENS_PREPROCESS_HPP
