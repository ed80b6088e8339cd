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

#ifndef SENTILENS_CORPUS_HPP
#define SENTILENS_CORPUS_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sentilens/collector.hpp"

namespace sentilens {

struct Document {
  std::string id;
  std::string text;
  SourceKind source = SourceKind::kFile;
  std::optional<std::string> brand;
  std::optional<std::string> product;
  /// Kept verbatim as an ISO-8601 UTC string.
  std::optional<std::string> created_at;

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::vector<Document> documents;
  std::size_t size() const noexcept { return documents.size(); }
};

/// Replaces invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view text);

/// Decodes HTML entities, then strips URLs, @-mentions and standalone "RT"
/// tokens, turns control characters into spaces, collapses whitespace and
/// trims. Idempotent.
std::string clean_text(std::string_view raw_text);

/// Semantic field -> dot path into the record payload. `id` and `text` are
/// required; `brand`, `product` and `created_at` are optional.
using FieldMap = std::map<std::string, std::string>;

FieldMap identity_field_map();

/// Throws DataError naming the path when id or text cannot be found.
Document parse_record(const RawRecord& record, const FieldMap& field_map);

/// Drops repeated ids (first wins) and documents whose text is empty.
Corpus build_corpus(std::vector<Document> documents);

/// Sets `product` to the first keyword found (case-insensitive substring) in
/// the document text when it has no product yet.
void tag_product(Document& doc, const std::vector<std::string>& keywords);

void write_corpus_jsonl(const std::filesystem::path& path, const Corpus& corpus);
Corpus read_corpus_jsonl(const std::filesystem::path& path);

}  // namespace sentilens

#endif  // SENTILENS_CORPUS_HPP
