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

#include "sentilens/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "sentilens/errors.hpp"
#include "sentilens/json_path.hpp"

namespace sentilens {

using ordered_json = nlohmann::ordered_json;

namespace {

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

constexpr char32_t kReplacement = 0xFFFD;

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

bool is_mention_byte(unsigned char c) { return std::isalnum(c) || c == '_'; }

bool is_space_byte(unsigned char c) { return c == ' ' || c < 0x20 || c == 0x7F; }

bool starts_with_icase(std::string_view text, std::size_t pos, std::string_view prefix) {
  if (text.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[pos + i])) != prefix[i]) return false;
  }
  return true;
}

// Decodes one entity starting at text[pos] == '&'. Returns the number of
// bytes consumed, or 0 when the text there is not a recognised entity.
std::size_t decode_entity(std::string_view text, std::size_t pos, std::string& out) {
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 6> kNamed{{
      {"&amp;", "&"},
      {"&lt;", "<"},
      {"&gt;", ">"},
      {"&quot;", "\""},
      {"&apos;", "'"},
      {"&nbsp;", " "},
  }};
  for (const auto& [entity, replacement] : kNamed) {
    if (text.substr(pos, entity.size()) == entity) {
      out.append(replacement);
      return entity.size();
    }
  }
  if (pos + 2 >= text.size() || text[pos + 1] != '#') return 0;
  std::size_t i = pos + 2;
  const bool hex = text[i] == 'x' || text[i] == 'X';
  if (hex) ++i;
  const std::size_t digits_start = i;
  char32_t cp = 0;
  while (i < text.size() && i - digits_start < 8) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    int digit = -1;
    if (c >= '0' && c <= '9') digit = c - '0';
    else if (hex && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
    else if (hex && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
    if (digit < 0) break;
    cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(digit);
    ++i;
  }
  if (i == digits_start || i >= text.size() || text[i] != ';') return 0;
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = kReplacement;
  append_utf8(out, cp);
  return i + 1 - pos;
}

std::string decode_entities_once(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] == '&') {
      if (const std::size_t used = decode_entity(text, i, out)) {
        i += used;
        continue;
      }
    }
    out.push_back(text[i++]);
  }
  return out;
}

// URLs and @-mentions are replaced by a single space each.
std::string strip_urls_and_mentions(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  auto skip_to_space = [&] {
    while (i < text.size() && !is_space_byte(static_cast<unsigned char>(text[i]))) ++i;
  };
  while (i < text.size()) {
    // Judged against what has been emitted so that a removal exposes the
    // next token in the same pass.
    const bool at_boundary = out.empty() || !is_word_byte(static_cast<unsigned char>(out.back()));
    if (at_boundary && (starts_with_icase(text, i, "http://") ||
                        starts_with_icase(text, i, "https://") ||
                        starts_with_icase(text, i, "www."))) {
      skip_to_space();
      out.push_back(' ');
      continue;
    }
    if (at_boundary && text[i] == '@' && i + 1 < text.size() &&
        is_mention_byte(static_cast<unsigned char>(text[i + 1]))) {
      ++i;
      while (i < text.size() && is_mention_byte(static_cast<unsigned char>(text[i]))) ++i;
      if (i < text.size() && text[i] == ':') ++i;
      out.push_back(' ');
      continue;
    }
    out.push_back(text[i++]);
  }
  return out;
}

}  // namespace

std::string sanitize_utf8(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (lead < 0x80) {
      out.push_back(static_cast<char>(lead));
      ++i;
      continue;
    } else if ((lead & 0xE0) == 0xC0) {
      len = 2;
      cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
      len = 3;
      cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
      len = 4;
      cp = lead & 0x07;
    }
    bool valid = len != 0 && i + len <= text.size();
    for (std::size_t k = 1; valid && k < len; ++k) {
      const unsigned char c = static_cast<unsigned char>(text[i + k]);
      if ((c & 0xC0) != 0x80) valid = false;
      cp = (cp << 6) | (c & 0x3F);
    }
    if (valid) {
      // Reject overlong forms, surrogates and out-of-range values.
      static constexpr std::array<char32_t, 5> kMin{0, 0, 0x80, 0x800, 0x10000};
      valid = cp >= kMin[len] && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
    }
    if (valid) {
      out.append(text.substr(i, len));
      i += len;
    } else {
      append_utf8(out, kReplacement);
      ++i;
    }
  }
  return out;
}

std::string clean_text(std::string_view raw_text) {
  std::string decoded(raw_text);
  for (;;) {
    std::string next = decode_entities_once(decoded);
    if (next == decoded) break;
    decoded = std::move(next);
  }
  const std::string stripped = strip_urls_and_mentions(decoded);

  std::string out;
  out.reserve(stripped.size());
  std::size_t i = 0;
  while (i < stripped.size()) {
    while (i < stripped.size() && is_space_byte(static_cast<unsigned char>(stripped[i]))) ++i;
    const std::size_t start = i;
    while (i < stripped.size() && !is_space_byte(static_cast<unsigned char>(stripped[i]))) ++i;
    if (i == start) break;
    const std::string_view token(stripped.data() + start, i - start);
    if (token == "RT" || token == "RT:") continue;
    if (!out.empty()) out.push_back(' ');
    out.append(token);
  }
  return out;
}

FieldMap identity_field_map() {
  return {{"id", "id"},
          {"text", "text"},
          {"brand", "brand"},
          {"product", "product"},
          {"created_at", "created_at"}};
}

namespace {

std::optional<std::string> scalar_at(const ordered_json& payload, const std::string& path) {
  const ordered_json* node = find_path(payload, path);
  if (node == nullptr || node->is_null()) return std::nullopt;
  if (node->is_string()) return node->get<std::string>();
  if (node->is_structured()) return std::nullopt;
  return node->dump();
}

std::optional<std::string> optional_field(const ordered_json& payload, const FieldMap& map,
                                          const std::string& field) {
  auto it = map.find(field);
  if (it == map.end() || it->second.empty()) return std::nullopt;
  return scalar_at(payload, it->second);
}

std::string required_field(const ordered_json& payload, const FieldMap& map,
                           const std::string& field) {
  auto it = map.find(field);
  if (it == map.end() || it->second.empty()) {
    throw ConfigError("field map has no path for '" + field + "'");
  }
  auto value = scalar_at(payload, it->second);
  if (!value) throw DataError(field + " path '" + it->second + "' not found");
  return *value;
}

}  // namespace

Document parse_record(const RawRecord& record, const FieldMap& field_map) {
  ordered_json payload;
  try {
    payload = ordered_json::parse(record.payload);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError("record payload: malformed JSON at byte " + std::to_string(e.byte), e.byte);
  }
  if (!payload.is_object()) throw DataError("record payload is not a JSON object");

  Document doc;
  doc.id = required_field(payload, field_map, "id");
  if (doc.id.empty()) throw DataError("id path '" + field_map.at("id") + "' is empty");
  doc.text = clean_text(sanitize_utf8(required_field(payload, field_map, "text")));
  doc.source = record.source;
  doc.brand = optional_field(payload, field_map, "brand");
  doc.product = optional_field(payload, field_map, "product");
  doc.created_at = optional_field(payload, field_map, "created_at");
  return doc;
}

Corpus build_corpus(std::vector<Document> documents) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  for (auto& doc : documents) {
    if (doc.text.empty()) continue;
    if (!seen.insert(doc.id).second) continue;
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

void tag_product(Document& doc, const std::vector<std::string>& keywords) {
  if (doc.product) return;
  std::string lowered = doc.text;
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto& keyword : keywords) {
    std::string needle = keyword;
    std::transform(needle.begin(), needle.end(), needle.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (!needle.empty() && lowered.find(needle) != std::string::npos) {
      doc.product = keyword;
      return;
    }
  }
}

namespace {

ordered_json optional_json(const std::optional<std::string>& value) {
  return value ? ordered_json(*value) : ordered_json(nullptr);
}

std::optional<std::string> optional_string(const ordered_json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

void write_corpus_jsonl(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  for (const auto& doc : corpus.documents) {
    ordered_json obj;
    obj["id"] = doc.id;
    obj["text"] = doc.text;
    obj["source"] = std::string(to_string(doc.source));
    obj["brand"] = optional_json(doc.brand);
    obj["product"] = optional_json(doc.product);
    obj["created_at"] = optional_json(doc.created_at);
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

Corpus read_corpus_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const ordered_json obj = ordered_json::parse(line);
      Document doc;
      doc.id = obj.at("id").get<std::string>();
      doc.text = obj.at("text").get<std::string>();
      doc.source = parse_source_kind(obj.at("source").get<std::string>());
      doc.brand = optional_string(obj, "brand");
      doc.product = optional_string(obj, "product");
      doc.created_at = optional_string(obj, "created_at");
      docs.push_back(std::move(doc));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  Corpus corpus;
  corpus.documents = std::move(docs);
  return corpus;
}

}  // namespace sentilens
