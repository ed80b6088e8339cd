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

#include "sentilens/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>

#include "sentilens/csv.hpp"
#include "sentilens/errors.hpp"
#include "sentilens/porter_stemmer.hpp"

namespace sentilens {

StemmerKind parse_stemmer_kind(std::string_view text) {
  if (text == "none") return StemmerKind::kNone;
  if (text == "porter") return StemmerKind::kPorter;
  throw ConfigError("unknown stemmer '" + std::string(text) + "'");
}

const StopWords& default_stop_words() {
  static const StopWords words{
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're", "you've",
    "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his",
    "himself", "she", "she's", "her", "hers", "herself", "it", "it's", "its", "itself", "they",
    "them", "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that",
    "that'll", "these", "those", "am", "is", "are", "was", "were", "be", "been", "being",
    "have", "has", "had", "having", "do", "does", "did", "doing", "a", "an", "the", "and",
    "but", "if", "or", "because", "as", "until", "while", "of", "at", "by", "for", "with",
    "about", "against", "between", "into", "through", "during", "before", "after", "above",
    "below", "to", "from", "up", "down", "in", "out", "on", "off", "over", "under", "again",
    "further", "then", "once", "here", "there", "when", "where", "why", "how", "all", "any",
    "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not", "only",
    "own", "same", "so", "than", "too", "very", "s", "t", "can", "will", "just", "don",
    "don't", "should", "should've", "now", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren",
    "aren't", "couldn", "couldn't", "didn", "didn't", "doesn", "doesn't", "hadn", "hadn't",
    "hasn", "hasn't", "haven", "haven't", "isn", "isn't", "ma", "mightn", "mightn't", "mustn",
    "mustn't", "needn", "needn't", "shan", "shan't", "shouldn", "shouldn't", "wasn", "wasn't",
    "weren", "weren't", "won", "won't", "wouldn", "wouldn't",
  };
  return words;
}

namespace {

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

bool is_token_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::size_t code_points(std::string_view text) {
  return static_cast<std::size_t>(std::count_if(text.begin(), text.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

bool has_digit(std::string_view text) {
  return std::any_of(text.begin(), text.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

// Applies every per-token rule to one already split token. Returns false
// when the token is dropped.
bool normalize_token(std::string& token, const PreprocessOptions& options) {
  if (options.lowercase) token = ascii_lower(token);
  if (options.remove_numbers && has_digit(token)) return false;
  if (options.stop_words.count(token)) return false;
  if (options.stemmer == StemmerKind::kPorter) {
    token = porter_stem(token);
    if (options.stop_words.count(token)) return false;
  }
  return code_points(token) >= options.min_word_len;
}

}  // namespace

StopWords load_stop_words(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read stop-word list '" + path.string() + "'");
  StopWords words;
  std::string line;
  while (std::getline(in, line)) {
    const auto word = trim(line);
    if (word.empty() || word.front() == '#') continue;
    words.insert(ascii_lower(word));
  }
  return words;
}

void validate(const PreprocessOptions& options) {
  if (options.min_word_len < 1) throw ConfigError("min_word_len must be >= 1");
}

TokenList tokenize(std::string_view text, const PreprocessOptions& options) {
  TokenList out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_token_byte(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && is_token_byte(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start) break;
    std::string token(text.substr(start, i - start));
    if (normalize_token(token, options)) out.tokens.push_back(std::move(token));
  }
  return out;
}

std::optional<std::string> normalize_term(std::string_view word, const PreprocessOptions& options) {
  TokenList tokens = tokenize(word, options);
  if (tokens.tokens.size() != 1) return std::nullopt;
  return std::move(tokens.tokens.front());
}

std::vector<TokenList> tokenize_corpus(const Corpus& corpus, const PreprocessOptions& options) {
  validate(options);
  std::vector<TokenList> out;
  out.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    TokenList tokens = tokenize(doc.text, options);
    tokens.doc_id = doc.id;
    out.push_back(std::move(tokens));
  }
  return out;
}

std::optional<Eigen::Index> Vocabulary::find(std::string_view term) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), term);
  if (it == terms.end() || *it != term) return std::nullopt;
  return static_cast<Eigen::Index>(it - terms.begin());
}

Eigen::VectorXd inverse_document_frequency(const Vocabulary& vocabulary) {
  const double n = static_cast<double>(vocabulary.n_docs);
  return vocabulary.df.cast<double>().unaryExpr([n](double df) { return std::log2(n / df); });
}

namespace {

WeightMatrix weigh(const TfMatrix& tf, const Vocabulary& vocabulary) {
  const Eigen::VectorXd idf = inverse_document_frequency(vocabulary);
  // Ubiquitous terms get idf == 0 exactly; pruned() drops those cells.
  WeightMatrix weights = tf.cast<double>();
  weights = weights * idf.asDiagonal();
  weights.prune(0.0);
  weights.makeCompressed();
  return weights;
}

}  // namespace

DocTermMatrix build_matrix(const std::vector<TokenList>& corpus_tokens) {
  std::map<std::string, std::int64_t> df;
  for (const auto& doc : corpus_tokens) {
    std::vector<std::string_view> distinct(doc.tokens.begin(), doc.tokens.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (auto term : distinct) ++df[std::string(term)];
  }
  if (df.empty()) throw DataError("empty vocabulary");

  DocTermMatrix matrix;
  Vocabulary& vocab = matrix.vocabulary;
  vocab.n_docs = static_cast<std::int64_t>(corpus_tokens.size());
  vocab.terms.reserve(df.size());
  vocab.df.resize(static_cast<Eigen::Index>(df.size()));
  for (const auto& [term, count] : df) {
    vocab.df[vocab.size()] = count;
    vocab.terms.push_back(term);
  }

  std::vector<Eigen::Triplet<std::int64_t>> cells;
  matrix.rows.reserve(corpus_tokens.size());
  for (std::size_t row = 0; row < corpus_tokens.size(); ++row) {
    matrix.rows.push_back(corpus_tokens[row].doc_id);
    for (const auto& token : corpus_tokens[row].tokens) {
      cells.emplace_back(static_cast<Eigen::Index>(row), *vocab.find(token), 1);
    }
  }
  matrix.tf.resize(static_cast<Eigen::Index>(corpus_tokens.size()), vocab.size());
  matrix.tf.setFromTriplets(cells.begin(), cells.end());  // duplicates are summed
  matrix.tf.makeCompressed();
  matrix.weights = weigh(matrix.tf, vocab);
  return matrix;
}

DocTermMatrix prune_sparse(const DocTermMatrix& matrix, double max_sparsity) {
  if (!(max_sparsity >= 0.0 && max_sparsity < 1.0)) {
    throw ConfigError("max_sparsity must be in [0, 1)");
  }
  const Vocabulary& vocab = matrix.vocabulary;
  const double n = static_cast<double>(vocab.n_docs);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index t = 0; t < vocab.size(); ++t) {
    const double df = static_cast<double>(vocab.df[t]);
    if (vocab.df[t] == vocab.n_docs || df > (1.0 - max_sparsity) * n) keep.push_back(t);
  }
  if (keep.empty()) throw DataError("empty vocabulary after pruning");

  DocTermMatrix out;
  out.rows = matrix.rows;
  out.vocabulary.n_docs = vocab.n_docs;
  out.vocabulary.df.resize(static_cast<Eigen::Index>(keep.size()));
  std::vector<Eigen::Index> remap(static_cast<std::size_t>(vocab.size()), -1);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    remap[static_cast<std::size_t>(keep[k])] = static_cast<Eigen::Index>(k);
    out.vocabulary.terms.push_back(vocab.terms[static_cast<std::size_t>(keep[k])]);
    out.vocabulary.df[static_cast<Eigen::Index>(k)] = vocab.df[keep[k]];
  }

  auto select = [&](const auto& source, auto& target) {
    using Scalar = typename std::decay_t<decltype(source)>::Scalar;
    std::vector<Eigen::Triplet<Scalar>> cells;
    for (Eigen::Index r = 0; r < source.outerSize(); ++r) {
      for (typename std::decay_t<decltype(source)>::InnerIterator it(source, r); it; ++it) {
        const Eigen::Index col = remap[static_cast<std::size_t>(it.col())];
        if (col >= 0) cells.emplace_back(r, col, it.value());
      }
    }
    target.resize(source.rows(), static_cast<Eigen::Index>(keep.size()));
    target.setFromTriplets(cells.begin(), cells.end());
    target.makeCompressed();
  };
  select(matrix.tf, out.tf);
  select(matrix.weights, out.weights);
  return out;
}

std::vector<std::pair<std::string, std::int64_t>> frequent_terms(const DocTermMatrix& matrix,
                                                                 std::size_t top_k) {
  const Eigen::VectorX<std::int64_t> totals =
      matrix.tf.transpose() * Eigen::VectorX<std::int64_t>::Ones(matrix.tf.rows());
  std::vector<std::pair<std::string, std::int64_t>> ranked;
  ranked.reserve(matrix.vocabulary.terms.size());
  for (Eigen::Index t = 0; t < matrix.vocabulary.size(); ++t) {
    ranked.emplace_back(matrix.vocabulary.terms[static_cast<std::size_t>(t)], totals[t]);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > top_k) ranked.resize(top_k);
  return ranked;
}

void write_matrix_csv(const std::filesystem::path& path, const DocTermMatrix& matrix) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "doc_id,term,tf,weight\n";
  for (Eigen::Index r = 0; r < matrix.tf.outerSize(); ++r) {
    const std::string doc = csv::field(matrix.rows[static_cast<std::size_t>(r)]);
    for (TfMatrix::InnerIterator it(matrix.tf, r); it; ++it) {
      out << doc << ',' << csv::field(matrix.vocabulary.terms[static_cast<std::size_t>(it.col())])
          << ',' << it.value() << ',' << csv::number(matrix.weights.coeff(r, it.col())) << '\n';
    }
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_vocabulary_csv(const std::filesystem::path& path, const Vocabulary& vocabulary) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "term,df\n";
  for (Eigen::Index t = 0; t < vocabulary.size(); ++t) {
    out << csv::field(vocabulary.terms[static_cast<std::size_t>(t)]) << ',' << vocabulary.df[t]
        << '\n';
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

DocTermMatrix read_matrix_csv(const std::filesystem::path& matrix_path,
                              const std::filesystem::path& vocabulary_path) {
  auto to_int = [](const std::string& s, const std::filesystem::path& p) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return static_cast<std::int64_t>(v);
    } catch (const std::exception&) {
      throw DataError(p.string() + ": bad integer '" + s + "'");
    }
  };

  DocTermMatrix matrix;
  const auto vocab_rows = csv::read(vocabulary_path);
  if (vocab_rows.empty() || vocab_rows.front() != std::vector<std::string>{"term", "df"}) {
    throw DataError(vocabulary_path.string() + ": expected header 'term,df'");
  }
  matrix.vocabulary.df.resize(static_cast<Eigen::Index>(vocab_rows.size() - 1));
  for (std::size_t i = 1; i < vocab_rows.size(); ++i) {
    if (vocab_rows[i].size() != 2) throw DataError(vocabulary_path.string() + ": bad row");
    matrix.vocabulary.terms.push_back(vocab_rows[i][0]);
    matrix.vocabulary.df[static_cast<Eigen::Index>(i - 1)] = to_int(vocab_rows[i][1], vocabulary_path);
  }
  if (!std::is_sorted(matrix.vocabulary.terms.begin(), matrix.vocabulary.terms.end())) {
    throw DataError(vocabulary_path.string() + ": terms are not sorted");
  }

  const auto cells = csv::read(matrix_path);
  if (cells.empty() || cells.front() != std::vector<std::string>{"doc_id", "term", "tf", "weight"}) {
    throw DataError(matrix_path.string() + ": expected header 'doc_id,term,tf,weight'");
  }
  std::vector<Eigen::Triplet<std::int64_t>> tf;
  std::vector<Eigen::Triplet<double>> weights;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const auto& cell = cells[i];
    if (cell.size() != 4) throw DataError(matrix_path.string() + ": bad row " + std::to_string(i + 1));
    if (matrix.rows.empty() || matrix.rows.back() != cell[0]) matrix.rows.push_back(cell[0]);
    const auto col = matrix.vocabulary.find(cell[1]);
    if (!col) throw DataError(matrix_path.string() + ": unknown term '" + cell[1] + "'");
    const auto row = static_cast<Eigen::Index>(matrix.rows.size() - 1);
    tf.emplace_back(row, *col, to_int(cell[2], matrix_path));
    const double w = std::stod(cell[3]);
    if (w != 0.0) weights.emplace_back(row, *col, w);
  }
  matrix.vocabulary.n_docs = static_cast<std::int64_t>(matrix.rows.size());
  const auto n_rows = static_cast<Eigen::Index>(matrix.rows.size());
  matrix.tf.resize(n_rows, matrix.vocabulary.size());
  matrix.tf.setFromTriplets(tf.begin(), tf.end());
  matrix.weights.resize(n_rows, matrix.vocabulary.size());
  matrix.weights.setFromTriplets(weights.begin(), weights.end());
  return matrix;
}

}  // namespace sentilens
