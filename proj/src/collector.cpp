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

#include "sentilens/collector.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "sentilens/errors.hpp"
#include "sentilens/json_path.hpp"

namespace sentilens {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::kTwitterLike:
      return "twitter-like";
    case SourceKind::kFacebookLike:
      return "facebook-like";
    case SourceKind::kFile:
      return "file";
  }
  return "file";
}

SourceKind parse_source_kind(std::string_view text) {
  if (text == "twitter-like") return SourceKind::kTwitterLike;
  if (text == "facebook-like") return SourceKind::kFacebookLike;
  if (text == "file") return SourceKind::kFile;
  throw ConfigError("unknown source kind '" + std::string(text) + "'");
}

IngestFormat parse_ingest_format(std::string_view text) {
  if (text == "jsonl") return IngestFormat::kJsonLines;
  if (text == "json-array") return IngestFormat::kJsonArray;
  throw ConfigError("unknown ingest format '" + std::string(text) + "'");
}

void validate(const EndpointConfig& config) {
  if (config.base_url.empty()) throw ConfigError("endpoint base_url is empty");
  if (config.page_size < 1) throw ConfigError("page_size must be >= 1");
  if (config.max_records < 1) throw ConfigError("max_records must be >= 1");
  if (config.cursor_field.empty()) throw ConfigError("cursor_field is empty");
  if (config.records_field.empty()) throw ConfigError("records_field is empty");
  if (config.rate_limit < 0) throw ConfigError("rate_limit must be >= 0");
  if (config.retry.max_attempts < 1) throw ConfigError("retry.max_attempts must be >= 1");
}

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("base_url '" + url + "' has no scheme");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::optional<std::chrono::seconds> parse_retry_after(const httplib::Response& res) {
  if (!res.has_header("Retry-After")) return std::nullopt;
  const std::string value = res.get_header_value("Retry-After");
  long long seconds = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seconds);
  // HTTP-date values are not supported; the caller falls back to backoff.
  if (ec != std::errc{} || ptr != value.data() + value.size() || seconds < 0) {
    return std::nullopt;
  }
  return std::chrono::seconds(seconds);
}

ordered_json parse_json(const std::string& text, const std::string& what) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(what + ": malformed JSON at byte " + std::to_string(e.byte) +
                         ": " + e.what(),
                     e.byte);
  }
}

}  // namespace

Page fetch_page(const EndpointConfig& config, const std::optional<std::string>& cursor) {
  validate(config);
  const SplitUrl url = split_url(config.base_url);

  httplib::Client client(url.origin);
  client.set_connection_timeout(std::chrono::seconds(10));
  client.set_read_timeout(std::chrono::seconds(30));

  httplib::Params params{{"q", config.query}, {"count", std::to_string(config.page_size)}};
  if (cursor) params.emplace("cursor", *cursor);
  httplib::Headers headers{{"Accept", "application/json"}};
  if (config.auth_token) headers.emplace("Authorization", "Bearer " + *config.auth_token);

  auto result = client.Get(url.path, params, headers);
  if (!result) {
    throw NetworkError("GET " + config.base_url + " failed: " + httplib::to_string(result.error()),
                       1, true);
  }
  const httplib::Response& res = *result;
  if (res.status == 429) {
    throw RateLimitError("GET " + config.base_url + " rate limited (HTTP 429)", 1,
                         parse_retry_after(res));
  }
  if (res.status >= 500) {
    throw NetworkError("GET " + config.base_url + " returned HTTP " + std::to_string(res.status),
                       1, true);
  }
  if (res.status < 200 || res.status >= 300) {
    throw NetworkError("GET " + config.base_url + " returned HTTP " + std::to_string(res.status),
                       1, false);
  }

  const ordered_json body = parse_json(res.body, "response body");
  Page page;
  const auto fetched_at = std::chrono::system_clock::now();
  if (const ordered_json* records = find_path(body, config.records_field)) {
    if (!records->is_null() && !records->is_array()) {
      throw DataError("records field '" + config.records_field + "' is not an array");
    }
    if (records->is_array()) {
      for (const auto& item : *records) {
        if (!item.is_object()) {
          throw DataError("records field '" + config.records_field + "' holds a non-object");
        }
        page.records.push_back({config.source, item.dump(), fetched_at});
      }
    }
  }
  if (const ordered_json* next = find_path(body, config.cursor_field)) {
    if (next->is_string() && !next->get_ref<const std::string&>().empty()) {
      page.next_cursor = next->get<std::string>();
    } else if (next->is_number()) {
      page.next_cursor = next->dump();
    }
  }
  return page;
}

namespace {

Page fetch_with_retry(const EndpointConfig& config, const std::optional<std::string>& cursor,
                      const std::function<void(std::chrono::milliseconds)>& sleep) {
  auto backoff = config.retry.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return fetch_page(config, cursor);
    } catch (const RateLimitError& e) {
      if (attempt >= config.retry.max_attempts) {
        throw RateLimitError(e.what(), attempt, e.retry_after());
      }
      sleep(e.retry_after() ? std::chrono::duration_cast<std::chrono::milliseconds>(*e.retry_after())
                            : backoff);
    } catch (const NetworkError& e) {
      if (!e.retryable() || attempt >= config.retry.max_attempts) {
        throw NetworkError(std::string(e.what()) + " (after " + std::to_string(attempt) +
                               " attempt" + (attempt == 1 ? "" : "s") + ")",
                           attempt, e.retryable());
      }
      sleep(backoff);
    }
    backoff *= 2;
  }
}

}  // namespace

std::vector<RawRecord> collect(const EndpointConfig& config, const CollectHooks& hooks) {
  validate(config);
  auto sleep = hooks.sleep ? hooks.sleep : [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };
  auto now = hooks.now ? hooks.now : [] { return std::chrono::steady_clock::now(); };
  const std::chrono::milliseconds spacing =
      config.rate_limit > 0 ? std::chrono::milliseconds(60000 / config.rate_limit)
                            : std::chrono::milliseconds(0);

  std::vector<RawRecord> out;
  std::optional<std::string> cursor;
  std::optional<std::chrono::steady_clock::time_point> last_request;
  while (out.size() < config.max_records) {
    if (last_request && spacing.count() > 0) {
      const auto elapsed =
          std::chrono::duration_cast<std::chrono::milliseconds>(now() - *last_request);
      if (elapsed < spacing) sleep(spacing - elapsed);
    }
    last_request = now();
    Page page = fetch_with_retry(config, cursor, sleep);
    for (auto& record : page.records) {
      if (out.size() == config.max_records) break;
      out.push_back(std::move(record));
    }
    if (!page.next_cursor) break;
    cursor = std::move(page.next_cursor);
  }
  return out;
}

IngestResult ingest_file(const std::filesystem::path& path, IngestFormat format, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  const auto fetched_at = std::chrono::system_clock::now();
  IngestResult result;

  if (format == IngestFormat::kJsonArray) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    const ordered_json doc = parse_json(buffer.str(), path.string());
    if (!doc.is_array()) throw DataError(path.string() + ": expected a JSON array");
    for (const auto& item : doc) {
      if (!item.is_object()) {
        if (strict) throw DataError(path.string() + ": array element is not an object");
        ++result.skipped;
        continue;
      }
      result.records.push_back({SourceKind::kFile, item.dump(), fetched_at});
    }
    return result;
  }

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ordered_json item;
    try {
      item = ordered_json::parse(line);
    } catch (const ordered_json::parse_error& e) {
      if (strict) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": malformed JSON at byte " + std::to_string(e.byte),
                         e.byte);
      }
      ++result.skipped;
      continue;
    }
    if (!item.is_object()) {
      if (strict) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": not a JSON object");
      }
      ++result.skipped;
      continue;
    }
    result.records.push_back({SourceKind::kFile, item.dump(), fetched_at});
  }
  return result;
}

void write_raw_jsonl(const std::filesystem::path& path, const std::vector<RawRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  for (const auto& record : records) out << record.payload << '\n';
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace sentilens
